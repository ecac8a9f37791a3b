"""Deterministic keyword-lexicon annotator.

Stands in for the multimodal model when running offline: story detection
scores conflict/outcome/first-person evidence against promotional and
announcer counter-evidence, and unit classification tries per-role keyword
lexicons in a fixed priority order where specific persuasive cues outrank
generic product talk.
"""

from __future__ import annotations

import json
from importlib import resources

from adstory.annotator.base import ClusterSummary, StoryVerdict, UnitAnnotation
from adstory.errors import ValidationFailure
from adstory.ingest.types import Transcript
from adstory.segmentation.types import FunctionalUnit
from adstory.taxonomy import FILLER_ROLE_ID, Taxonomy
from adstory.textmatch import count_hits, normalize_phrases, tokenize

STORY_SCORE_THRESHOLD = 2
FIRST_PERSON_MIN_COUNT = 3
MATCH_CONFIDENCE = 0.9
FALLBACK_CONFIDENCE = 0.5

# First hit wins; roles missing from this list keep vocabulary order.
ROLE_PRIORITY = [
    "urgency_trigger",
    "scarcity_trigger",
    "promotion",
    "call_to_action",
    "social_proof",
    "comparison",
    "problem_agitation",
    "problem_setup",
    "solution_reveal",
    "demonstration_trial",
    "feature_explanation",
    "product_highlight",
    "outcome",
    "branding_moment",
]

SIGNAL_BY_LEXICON = {
    "conflict": "challenges_conflicts",
    "outcome": "state_transition",
    "promo": "promotional_language",
    "announcer": "announcer_style",
}


def load_default_lexicons() -> dict:
    data = resources.files("adstory.annotator").joinpath("data/lexicons_v1.json")
    return load_lexicons(data.read_bytes())


def load_lexicons(data: bytes) -> dict:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"lexicon config does not parse: {exc}") from exc
    for section in ("story", "roles"):
        if section not in payload:
            raise ValidationFailure(f"lexicon config missing {section!r} section")
    return payload


class LexiconAnnotator:
    """Fully deterministic: identical inputs give byte-identical outputs."""

    def __init__(self, taxonomy: Taxonomy, lexicons: dict | None = None):
        self.taxonomy = taxonomy
        lexicons = lexicons or load_default_lexicons()
        story = lexicons["story"]
        self._story_phrases = {
            key: normalize_phrases(story.get(key, []))
            for key in ("conflict", "outcome", "promo", "announcer")
        }
        self._first_person = {token.lower() for token in story.get("first_person", [])}
        self._role_phrases = {
            role_id: normalize_phrases(phrases)
            for role_id, phrases in lexicons["roles"].items()
        }
        in_priority = [r for r in ROLE_PRIORITY if r in self._role_phrases]
        remaining = [r for r in self._role_phrases if r not in ROLE_PRIORITY]
        self._priority = in_priority + remaining

    def detect_story(
        self, units: list[FunctionalUnit], transcript: Transcript
    ) -> StoryVerdict:
        tokens = tokenize(transcript.text())
        hits = {
            key: count_hits(tokens, phrases)
            for key, phrases in self._story_phrases.items()
        }
        first_person = sum(1 for token in tokens if token in self._first_person)
        personal = int(first_person >= FIRST_PERSON_MIN_COUNT)
        score = (
            hits["conflict"] + hits["outcome"] + personal
            - hits["promo"] - hits["announcer"]
        )
        signals = [
            SIGNAL_BY_LEXICON[key] for key in ("conflict", "outcome") if hits[key] > 0
        ]
        if personal:
            signals.append("personal_experience")
        signals += [
            SIGNAL_BY_LEXICON[key] for key in ("promo", "announcer") if hits[key] > 0
        ]
        if not signals:
            signals = ["no_story_signals"]
        rationale = (
            f"score {score} = conflict {hits['conflict']} + outcome {hits['outcome']}"
            f" + personal {personal} - promo {hits['promo']}"
            f" - announcer {hits['announcer']}"
        )
        return StoryVerdict(
            video_id=transcript.video_id,
            has_story=score >= STORY_SCORE_THRESHOLD,
            rationale=rationale,
            signals=signals,
        )

    def classify_units(
        self, units: list[FunctionalUnit], taxonomy: Taxonomy
    ) -> list[UnitAnnotation]:
        annotations = []
        for unit in units:
            tokens = tokenize(unit.transcript_text)
            role_id, confidence, rationale = self._classify_tokens(tokens, taxonomy)
            annotations.append(
                UnitAnnotation(
                    video_id="",
                    unit_index=unit.index,
                    role_id=role_id,
                    confidence=confidence,
                    rationale=rationale,
                )
            )
        return annotations

    def _classify_tokens(
        self, tokens: list[str], taxonomy: Taxonomy
    ) -> tuple[str, float, str]:
        for role_id in self._priority:
            if not taxonomy.has_role(role_id):
                continue
            phrases = self._role_phrases[role_id]
            if count_hits(tokens, phrases) > 0:
                matched = next(
                    " ".join(p) for p in phrases if count_hits(tokens, [p]) > 0
                )
                return role_id, MATCH_CONFIDENCE, f"matched {matched!r}"
        return FILLER_ROLE_ID, FALLBACK_CONFIDENCE, "no lexicon match"

    def propose_cluster_names(self, clusters: list[ClusterSummary]) -> dict[str, str]:
        names = {}
        for summary in clusters:
            if summary.representative:
                parts = [
                    self.taxonomy.display_name(role_id)
                    if self.taxonomy.has_role(role_id)
                    else role_id
                    for role_id in summary.representative
                ]
                names[summary.cluster_id] = "–".join(parts)
            else:
                names[summary.cluster_id] = "Empty Sequence"
        return names
