"""Named macro-arc patterns matched against canonical sequences.

A pattern is an ordered list of role-id groups; it matches a sequence when
some strictly increasing index tuple picks one member of each group in order
(a subsequence, not a substring: ads interleave persuasive beats, so gaps
between the pattern's stages must be tolerated).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from adstory.errors import ValidationFailure
from adstory.storyline.types import StorylineSequence
from adstory.taxonomy import Taxonomy


@dataclass(frozen=True)
class ArcPattern:
    name: str
    abbrev: str
    groups: tuple[frozenset[str], ...]

    def validate(self, taxonomy: Taxonomy | None = None) -> None:
        if len(self.groups) < 2:
            raise ValidationFailure(f"arc {self.abbrev}: needs at least 2 groups")
        for group in self.groups:
            if not group:
                raise ValidationFailure(f"arc {self.abbrev}: empty group")
            if taxonomy is not None:
                for role_id in group:
                    if not taxonomy.has_role(role_id):
                        raise ValidationFailure(
                            f"arc {self.abbrev}: unknown role {role_id!r}"
                        )


def default_arc_library(taxonomy: Taxonomy | None = None) -> list[ArcPattern]:
    data = resources.files("adstory.storyline").joinpath("data/arcs_v1.json")
    return load_arc_library(data.read_bytes(), taxonomy)


def load_arc_library(
    data: bytes, taxonomy: Taxonomy | None = None
) -> list[ArcPattern]:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"arc library does not parse: {exc}") from exc
    patterns = []
    for entry in payload.get("patterns", []):
        pattern = ArcPattern(
            name=entry["name"],
            abbrev=entry["abbrev"],
            groups=tuple(frozenset(group) for group in entry["groups"]),
        )
        pattern.validate(taxonomy)
        patterns.append(pattern)
    seen = set()
    for pattern in patterns:
        if pattern.abbrev in seen:
            raise ValidationFailure(f"duplicate arc abbrev {pattern.abbrev!r}")
        seen.add(pattern.abbrev)
    return patterns


def match_arcs(
    sequence: StorylineSequence, library: list[ArcPattern]
) -> list[tuple[ArcPattern, list[int]]]:
    """All matching patterns with a witness index tuple, longest arcs first."""
    matches = []
    for pattern in library:
        witness = _greedy_witness(sequence.roles, pattern.groups)
        if witness is not None:
            matches.append((pattern, witness))
    matches.sort(key=lambda m: (-len(m[0].groups), m[0].abbrev))
    return matches


def _greedy_witness(
    roles: list[str], groups: tuple[frozenset[str], ...]
) -> list[int] | None:
    """Earliest witness: greedy left-to-right scan is complete for this
    matching problem (taking the earliest possible index never hurts later
    groups)."""
    witness = []
    position = 0
    for group in groups:
        index = next(
            (i for i in range(position, len(roles)) if roles[i] in group), None
        )
        if index is None:
            return None
        witness.append(index)
        position = index + 1
    return witness
