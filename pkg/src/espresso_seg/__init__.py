"""Hybrid shape + entropy segmentation for multivariate time-series.

The pipeline profiles each channel with nearest-neighbor window distances,
turns recurring shapes into a weighted chained arc curve whose minima are
change-point candidates, then picks boundaries with a greedy
information-gain search over the full multivariate series, ranking
channels by the gain their candidates achieve.
"""

from .curve import (
    Arc,
    ArcSet,
    CandidateConfig,
    ChainConfig,
    ShapeCurve,
    arc_curve,
    extract_cac,
    extract_wcac,
    find_candidates,
    smooth_curve,
)
from .entropy import (
    EntropyView,
    Segmentation,
    StopRule,
    greedy_entropy_seg,
    information_gain,
    knee_point,
    segment_entropy,
)
from .errors import (
    DegenerateSegmentWarning,
    EmptyEstimateWarning,
    EmptyInput,
    EspressoError,
    IngestError,
    InvalidBoundaries,
    LengthMismatch,
    MissingColumn,
    NoCandidates,
    NonFinite,
    NonNumeric,
    OutOfRange,
    ParseError,
    PipelineFallbackWarning,
    RaggedChannels,
    SubseqTooLong,
    TraceTooShort,
    ValidationError,
)
from .metrics import EvalReport, evaluate, f_score, mae, match_boundaries, rmse_norm
from .pipeline import (
    ChannelResult,
    PipelineConfig,
    PipelineResult,
    rank_channels,
    run_espresso,
)
from .profile import ProfilePair, brute_force_profile, compute_profile, znorm_distance
from .series import MultiSeries, SubseqSpec, subsequence, validate_series
from .synthetic import generate_synthetic, labels_from_boundaries

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArcSet",
    "CandidateConfig",
    "ChainConfig",
    "ChannelResult",
    "DegenerateSegmentWarning",
    "EmptyEstimateWarning",
    "EmptyInput",
    "EntropyView",
    "EspressoError",
    "EvalReport",
    "IngestError",
    "InvalidBoundaries",
    "LengthMismatch",
    "MissingColumn",
    "MultiSeries",
    "NoCandidates",
    "NonFinite",
    "NonNumeric",
    "OutOfRange",
    "ParseError",
    "PipelineConfig",
    "PipelineFallbackWarning",
    "PipelineResult",
    "ProfilePair",
    "RaggedChannels",
    "Segmentation",
    "ShapeCurve",
    "StopRule",
    "SubseqSpec",
    "SubseqTooLong",
    "TraceTooShort",
    "ValidationError",
    "arc_curve",
    "brute_force_profile",
    "compute_profile",
    "evaluate",
    "extract_cac",
    "extract_wcac",
    "f_score",
    "find_candidates",
    "generate_synthetic",
    "greedy_entropy_seg",
    "information_gain",
    "knee_point",
    "labels_from_boundaries",
    "mae",
    "match_boundaries",
    "rank_channels",
    "rmse_norm",
    "run_espresso",
    "segment_entropy",
    "smooth_curve",
    "subsequence",
    "validate_series",
    "znorm_distance",
]
