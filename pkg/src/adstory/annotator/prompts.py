"""Prompt templates for the remote annotator.

Templates are versioned so stored annotations can be traced back to the
exact wording that produced them. Keyframes appear as text placeholders;
attaching actual images is an endpoint capability, not assumed here.
"""

from __future__ import annotations

import json

from adstory.annotator.base import ClusterSummary
from adstory.ingest.types import Transcript
from adstory.segmentation.types import FunctionalUnit
from adstory.taxonomy import Taxonomy, render_role_prompt

PROMPT_VERSION = "prompts_v1"

STORY_DEFINITION = (
    "an account of an event or a sequence of connected events that leads to a "
    "transition from an initial state to a later stage or outcome"
)

_STORY_SYSTEM = (
    "You judge whether a short video ad contains a story. A story is "
    f"defined as: {STORY_DEFINITION}. Reply with exactly one JSON object: "
    '{"has_story": bool, "rationale": str, "signals": [str, ...]}.'
)

_CLASSIFY_SYSTEM = (
    "You label one segment of a video ad with the single functional role that "
    "best describes its communicative purpose. Choose role_id from the "
    "vocabulary below. Reply with exactly one JSON object: "
    '{"role_id": str, "confidence": float, "rationale": str}.\n\n'
)

_NAME_SYSTEM = (
    "You propose a short human-readable name for a group of ads that share a "
    "storyline structure. Reply with exactly one JSON object: "
    '{"name": str}.'
)


def _unit_block(unit: FunctionalUnit) -> str:
    frames = ", ".join(f"[frame {index}]" for index in unit.keyframe_indices)
    return (
        f"unit {unit.index} ({unit.start_s:.2f}s-{unit.end_s:.2f}s) "
        f"keyframes: {frames or 'none'}\n"
        f"transcript: {unit.transcript_text or '(silent)'}"
    )


def story_detection_messages(
    units: list[FunctionalUnit], transcript: Transcript
) -> list[dict]:
    body = "\n\n".join(_unit_block(unit) for unit in units)
    return [
        {"role": "system", "content": _STORY_SYSTEM},
        {
            "role": "user",
            "content": f"Video {transcript.video_id or '(unnamed)'} units:\n\n{body}",
        },
    ]


def unit_classification_messages(
    unit: FunctionalUnit, taxonomy: Taxonomy
) -> list[dict]:
    return [
        {"role": "system", "content": _CLASSIFY_SYSTEM + render_role_prompt(taxonomy)},
        {"role": "user", "content": _unit_block(unit)},
    ]


def cluster_naming_messages(summary: ClusterSummary) -> list[dict]:
    payload = {
        "representative_sequence": summary.representative,
        "member_count": summary.member_count,
    }
    return [
        {"role": "system", "content": _NAME_SYSTEM},
        {"role": "user", "content": json.dumps(payload)},
    ]
