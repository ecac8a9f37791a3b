"""Seeded data generators with known planted effects.

Records are constructed directly (not through the CSV loader) because noisy
simulated dwell curves need not be monotone; the regressions under test do
not rely on monotonicity.
"""

from __future__ import annotations

import numpy as np

from adstory.ingest.types import Covariates, PerformanceRecord

OBJECTIVES = ("Awareness", "Traffic", "Sales")
SIZES = ("Small", "Medium", "Large")


def _covariates(rng, subvertical: str, has_speech: bool, video_length: float):
    return Covariates(
        has_speech=has_speech,
        video_length_s=video_length,
        aspect_ratio=float(rng.choice([0.5625, 1.0, 1.7778])),
        campaign_objective=str(rng.choice(OBJECTIVES)),
        audience_size=float(rng.uniform(1e4, 1e6)),
        advertiser_size=str(rng.choice(SIZES)),
        subvertical=subvertical,
    )


def simulate_story_records(
    seed: int,
    n: int = 2000,
    effect: float = 0.05,
    effect_second: int = 2,
    noise: float = 0.05,
):
    """Dwell curves with a planted story effect at one second only.

    The generator is linear in the controls the regression uses, so OLS
    recovers the planted coefficient without bias.
    """
    rng = np.random.default_rng(seed)
    records = []
    has_story = {}
    for i in range(n):
        video_id = f"sim{i:05d}"
        story = bool(i % 2)
        has_speech = bool(rng.random() < 0.7)
        video_length = float(rng.uniform(15, 60))
        cov = _covariates(rng, "Food", has_speech, video_length)
        dwell = []
        for second in range(1, 11):
            base = 0.78 - 0.03 * second
            value = (
                base
                + effect * (story and second == effect_second)
                + 0.02 * has_speech
                + 0.001 * (video_length - 37.5)
                + float(rng.normal(0.0, noise))
            )
            dwell.append(value)
        records.append(
            PerformanceRecord(
                video_id=video_id,
                impressions=1000,
                dwell=dwell,
                ctr=0.02,
                cvr=0.005,
                covariates=cov,
            )
        )
        has_story[video_id] = story
    return records, has_story


def simulate_arc_records(
    seed: int,
    subvertical: str = "Food",
    arcs: tuple[str, ...] = ("PAS", "HFBA", "AIDA", "SPA"),
    planted_arc: str = "PAS",
    metric: str = "cvr",
    n: int = 800,
    effect_frac: float = 0.05,
    noise_frac: float = 0.10,
):
    """Ads with random arc memberships where one arc lifts one metric by a
    known fraction of its mean."""
    rng = np.random.default_rng(seed)
    base = {"dwell_2s": 0.55, "ctr": 0.02, "cvr": 0.005}[metric]
    records = []
    memberships: dict[str, set[str]] = {}
    for i in range(n):
        video_id = f"arc{i:05d}"
        present = {abbrev for abbrev in arcs if rng.random() < 0.35}
        has_speech = bool(rng.random() < 0.7)
        video_length = float(rng.uniform(15, 60))
        cov = _covariates(rng, subvertical, has_speech, video_length)
        lift = effect_frac * (planted_arc in present)
        value = base * (1.0 + lift + 0.02 * has_speech) * (
            1.0 + float(rng.normal(0.0, noise_frac))
        )
        value = max(value, 0.0)
        metric_fields = {"ctr": 0.02, "cvr": 0.005}
        dwell = [max(0.0, 0.78 - 0.03 * s) for s in range(1, 11)]
        if metric == "dwell_2s":
            dwell[1] = value
        else:
            metric_fields[metric] = value
        records.append(
            PerformanceRecord(
                video_id=video_id,
                impressions=1000,
                dwell=dwell,
                ctr=metric_fields["ctr"],
                cvr=metric_fields["cvr"],
                covariates=cov,
            )
        )
        memberships[video_id] = present
    return records, memberships
