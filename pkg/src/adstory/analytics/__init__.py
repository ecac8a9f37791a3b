"""Linking stories and arcs to performance: per-second dwell regressions and
gradient-boosted-tree uplift ranking via partial dependence."""

from adstory.analytics.dwell import (
    NoViewers,
    OneClassOnly,
    RegressionResult,
    SecondEffect,
    compute_dwell_curve,
    story_dwell_uplift,
)
from adstory.analytics.gbt import (
    EmptyDataset,
    GbtModel,
    GbtParams,
    UnknownFeature,
    gbt_fit,
    partial_dependence,
)
from adstory.analytics.ols import (
    DesignMatrix,
    InsufficientData,
    OlsResult,
    SingularDesign,
    Underdetermined,
    ols_fit,
)
from adstory.analytics.uplift import (
    UpliftReport,
    UpliftRow,
    rank_arc_uplift,
)

__all__ = [
    "DesignMatrix",
    "EmptyDataset",
    "GbtModel",
    "GbtParams",
    "InsufficientData",
    "NoViewers",
    "OlsResult",
    "OneClassOnly",
    "RegressionResult",
    "SecondEffect",
    "SingularDesign",
    "Underdetermined",
    "UnknownFeature",
    "UpliftReport",
    "UpliftRow",
    "compute_dwell_curve",
    "gbt_fit",
    "ols_fit",
    "partial_dependence",
    "rank_arc_uplift",
    "story_dwell_uplift",
]
