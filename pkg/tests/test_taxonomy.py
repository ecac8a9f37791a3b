from __future__ import annotations

import json
import time

import pytest

from adstory.taxonomy import (
    CountMismatch,
    DuplicateRoleId,
    STRICT_ROLES_PER_CATEGORY,
    UnknownCategory,
    load_default_taxonomy,
    load_taxonomy,
    render_role_prompt,
    serialize_taxonomy,
    validate_taxonomy,
)


def test_default_taxonomy_counts(taxonomy):
    assert len(taxonomy.roles) == 23
    assert len(taxonomy.categories) == 6
    for category_id, expected in STRICT_ROLES_PER_CATEGORY.items():
        assert sum(1 for r in taxonomy.roles if r.category == category_id) == expected
    assert validate_taxonomy(taxonomy, strict=True) == []


def test_default_taxonomy_loads_fast():
    start = time.perf_counter()
    load_default_taxonomy()
    assert time.perf_counter() - start < 0.1


def test_duplicate_role_id_rejected(taxonomy):
    payload = json.loads(serialize_taxonomy(taxonomy))
    payload["roles"][1]["id"] = "hook"
    with pytest.raises(DuplicateRoleId):
        load_taxonomy(json.dumps(payload).encode(), strict=False)


def test_custom_24th_role_allowed_when_not_strict(taxonomy):
    payload = json.loads(serialize_taxonomy(taxonomy))
    payload["roles"].append(
        {
            "id": "easter_egg",
            "name": "Easter Egg",
            "category": "Others",
            "description": "Hides a reward for attentive viewers.",
        }
    )
    data = json.dumps(payload).encode()
    loaded = load_taxonomy(data, strict=False)
    assert len(loaded.roles) == 24
    with pytest.raises(CountMismatch):
        load_taxonomy(data, strict=True)


def test_validate_returns_all_violations(taxonomy):
    payload = json.loads(serialize_taxonomy(taxonomy))
    payload["roles"][0]["description"] = "  "
    payload["roles"][1]["category"] = "X"
    # Build the object manually so we can inspect every violation at once.
    from adstory.taxonomy import FunctionalRole, RoleCategory, Taxonomy

    t = Taxonomy(
        version="test",
        categories=tuple(
            RoleCategory(c["id"], c["display_name"]) for c in payload["categories"]
        ),
        roles=tuple(
            FunctionalRole(r["id"], r["name"], r["category"], r["description"])
            for r in payload["roles"]
        ),
    )
    violations = validate_taxonomy(t, strict=True)
    assert any(isinstance(v, UnknownCategory) for v in violations)
    assert any("empty description" in str(v) for v in violations)
    assert len(violations) >= 2


def test_prompt_lists_every_role_once_and_is_stable(taxonomy):
    prompt = render_role_prompt(taxonomy)
    assert "Grabs viewers' attention or interest" in prompt
    for role in taxonomy.roles:
        assert prompt.count(f"- {role.id} (") == 1
    assert prompt == render_role_prompt(taxonomy)


def test_single_role_taxonomy_renders_one_block():
    payload = {
        "version": "mini",
        "categories": [{"id": "Others", "display_name": "Others"}],
        "roles": [
            {
                "id": "only",
                "name": "Only",
                "category": "Others",
                "description": "The sole role.",
            }
        ],
    }
    t = load_taxonomy(json.dumps(payload).encode(), strict=False)
    prompt = render_role_prompt(t)
    assert prompt.count("- only") == 1


def test_serialize_round_trip(taxonomy):
    again = load_taxonomy(serialize_taxonomy(taxonomy), strict=True)
    assert again.roles == taxonomy.roles
    assert again.categories == taxonomy.categories
    assert again.version == taxonomy.version
