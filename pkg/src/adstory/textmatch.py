"""Greedy phrase matching over normalized word tokens.

Phrases are matched longest-first and consume the words they cover, so a
two-word phrase shadows its one-word suffix at the same position.
"""

from __future__ import annotations

import re

_EDGE_PUNCT = re.compile(r"^\W+|\W+$", re.UNICODE)


def normalize_token(text: str) -> str:
    """Lowercase and strip punctuation from the edges of a word."""
    return _EDGE_PUNCT.sub("", text.lower())


def normalize_phrases(phrases: list[str]) -> list[tuple[str, ...]]:
    """Phrase strings to normalized token tuples, longest first."""
    normalized = {
        tuple(normalize_token(part) for part in phrase.split()): None
        for phrase in phrases
        if phrase.strip()
    }
    return sorted(normalized, key=len, reverse=True)


def match_starts(tokens: list[str], phrases: list[tuple[str, ...]]) -> list[int]:
    """Indices where a phrase begins; matched words are consumed."""
    starts = []
    i = 0
    while i < len(tokens):
        for phrase in phrases:
            k = len(phrase)
            if k and tuple(tokens[i : i + k]) == phrase:
                starts.append(i)
                i += k
                break
        else:
            i += 1
    return starts


def count_hits(tokens: list[str], phrases: list[tuple[str, ...]]) -> int:
    return len(match_starts(tokens, phrases))


def tokenize(text: str) -> list[str]:
    return [normalize_token(part) for part in text.split()]
