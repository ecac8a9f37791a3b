"""The functional-role vocabulary: 6 categories, 23 roles, each with a stable
snake_case id so stored sequences survive display-name edits.

Strict mode pins the bundled counts; non-strict permits custom vocabularies
(extra roles, trimmed roles) for experimentation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from adstory.errors import ValidationFailure

STRICT_ROLE_COUNT = 23
STRICT_CATEGORY_COUNT = 6
STRICT_ROLES_PER_CATEGORY = {
    "Opening": 2,
    "ProblemNeedChallenge": 2,
    "ProductIntroductionExplanation": 6,
    "PersuasiveFraming": 7,
    "ClosureIdentity": 5,
    "Others": 1,
}

FILLER_ROLE_ID = "visual_filler"


class DuplicateRoleId(ValidationFailure):
    pass


class UnknownCategory(ValidationFailure):
    pass


class CountMismatch(ValidationFailure):
    pass


@dataclass(frozen=True)
class RoleCategory:
    id: str
    display_name: str


@dataclass(frozen=True)
class FunctionalRole:
    id: str
    name: str
    category: str
    description: str


@dataclass(frozen=True)
class Taxonomy:
    """Immutable after load; safe to share across threads."""

    version: str
    categories: tuple[RoleCategory, ...]
    roles: tuple[FunctionalRole, ...]
    _by_id: dict[str, FunctionalRole] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {role.id: role for role in self.roles})

    def role(self, role_id: str) -> FunctionalRole:
        return self._by_id[role_id]

    def has_role(self, role_id: str) -> bool:
        return role_id in self._by_id

    def role_ids(self) -> list[str]:
        return [role.id for role in self.roles]

    def display_name(self, role_id: str) -> str:
        return self._by_id[role_id].name


def load_default_taxonomy() -> Taxonomy:
    data = resources.files("adstory.taxonomy").joinpath("data/taxonomy_v1.json")
    return load_taxonomy(data.read_bytes(), strict=True)


def load_taxonomy(data: bytes, strict: bool = True) -> Taxonomy:
    """Parse and validate a taxonomy config; raises the first violation found."""
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"taxonomy config does not parse: {exc}") from exc

    categories = tuple(
        RoleCategory(id=entry["id"], display_name=entry["display_name"])
        for entry in payload.get("categories", [])
    )
    roles = tuple(
        FunctionalRole(
            id=entry["id"],
            name=entry["name"],
            category=entry["category"],
            description=entry.get("description", ""),
        )
        for entry in payload.get("roles", [])
    )
    taxonomy = Taxonomy(
        version=str(payload.get("version", "")), categories=categories, roles=roles
    )
    violations = validate_taxonomy(taxonomy, strict=strict)
    if violations:
        raise violations[0]
    return taxonomy


def validate_taxonomy(
    taxonomy: Taxonomy, strict: bool = True
) -> list[ValidationFailure]:
    """Collect every violation instead of stopping at the first."""
    violations: list[ValidationFailure] = []
    category_ids = [category.id for category in taxonomy.categories]
    if len(set(category_ids)) != len(category_ids):
        violations.append(DuplicateRoleId("duplicate category ids"))

    seen: set[str] = set()
    for role in taxonomy.roles:
        if role.id in seen:
            violations.append(DuplicateRoleId(f"duplicate role id {role.id!r}"))
        seen.add(role.id)
        if role.category not in category_ids:
            violations.append(
                UnknownCategory(f"role {role.id!r} references category {role.category!r}")
            )
        if not role.description.strip():
            violations.append(
                ValidationFailure(f"role {role.id!r} has an empty description")
            )

    if strict:
        if len(taxonomy.roles) != STRICT_ROLE_COUNT:
            violations.append(
                CountMismatch(
                    f"expected {STRICT_ROLE_COUNT} roles, got {len(taxonomy.roles)}"
                )
            )
        if len(taxonomy.categories) != STRICT_CATEGORY_COUNT:
            violations.append(
                CountMismatch(
                    f"expected {STRICT_CATEGORY_COUNT} categories, "
                    f"got {len(taxonomy.categories)}"
                )
            )
        for category_id, expected in STRICT_ROLES_PER_CATEGORY.items():
            actual = sum(1 for role in taxonomy.roles if role.category == category_id)
            if actual != expected:
                violations.append(
                    CountMismatch(
                        f"category {category_id!r} holds {actual} roles, "
                        f"expected {expected}"
                    )
                )
    return violations


def render_role_prompt(taxonomy: Taxonomy) -> str:
    """Deterministic category-by-category listing for annotator prompts."""
    lines = ["Functional roles, grouped by category:"]
    for category in taxonomy.categories:
        lines.append("")
        lines.append(f"## {category.display_name}")
        for role in taxonomy.roles:
            if role.category == category.id:
                lines.append(f"- {role.id} ({role.name}): {role.description}")
    return "\n".join(lines) + "\n"


def serialize_taxonomy(taxonomy: Taxonomy) -> bytes:
    payload = {
        "version": taxonomy.version,
        "categories": [
            {"id": category.id, "display_name": category.display_name}
            for category in taxonomy.categories
        ],
        "roles": [
            {
                "id": role.id,
                "name": role.name,
                "category": role.category,
                "description": role.description,
            }
            for role in taxonomy.roles
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False).encode("utf-8")
