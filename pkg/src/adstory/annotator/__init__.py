"""Pluggable annotation backends: a remote chat-completions client and a
deterministic lexicon-based offline implementation."""

from adstory.annotator.base import (
    Annotator,
    AnnotatorConfig,
    AnnotatorUnavailable,
    ClusterSummary,
    EmptyVideo,
    MalformedModelOutput,
    StoryVerdict,
    UnitAnnotation,
    UnknownRoleReturned,
    classify_units,
    detect_story,
    propose_cluster_names,
)
from adstory.annotator.lexicon import LexiconAnnotator, load_default_lexicons
from adstory.annotator.remote import RemoteAnnotator

__all__ = [
    "Annotator",
    "AnnotatorConfig",
    "AnnotatorUnavailable",
    "ClusterSummary",
    "EmptyVideo",
    "LexiconAnnotator",
    "MalformedModelOutput",
    "RemoteAnnotator",
    "StoryVerdict",
    "UnitAnnotation",
    "UnknownRoleReturned",
    "classify_units",
    "detect_story",
    "load_default_lexicons",
    "propose_cluster_names",
]
