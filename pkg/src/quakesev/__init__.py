"""Depth-weighted damage severity scoring and IoU evaluation for
earthquake imagery segmentation masks."""

from .adjudication import agreement_report, merge_conservative
from .codec import (
    DepthFormatError,
    MaskFormatError,
    load_depth,
    load_mask,
    mask_to_rgb,
    save_depth,
    save_mask,
)
from .dataset import (
    BenchmarkReport,
    ClassHistogram,
    GroupScore,
    ManifestEntry,
    ManifestError,
    SeverityLabel,
    benchmark_grouped_scores,
    class_histogram,
    load_manifest,
    save_manifest,
    split_dataset,
    validate_entry,
)
from .metrics import IoUReport, class_iou, dataset_mean_iou, mean_iou
from .severity import SeverityScore, damage_score, normalize_depth, score_image
from .types import (
    CLASS_COLORS,
    DamageClass,
    DepthMap,
    DimensionMismatchError,
    NormalizedDepth,
    ScoringConfig,
    SegMask,
    UnassessableImageError,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport",
    "CLASS_COLORS",
    "ClassHistogram",
    "DamageClass",
    "DepthFormatError",
    "DepthMap",
    "DimensionMismatchError",
    "GroupScore",
    "IoUReport",
    "ManifestEntry",
    "ManifestError",
    "MaskFormatError",
    "NormalizedDepth",
    "ScoringConfig",
    "SegMask",
    "SeverityLabel",
    "SeverityScore",
    "UnassessableImageError",
    "agreement_report",
    "benchmark_grouped_scores",
    "class_histogram",
    "class_iou",
    "damage_score",
    "dataset_mean_iou",
    "load_depth",
    "load_manifest",
    "load_mask",
    "mask_to_rgb",
    "mean_iou",
    "merge_conservative",
    "normalize_depth",
    "save_depth",
    "save_manifest",
    "save_mask",
    "score_image",
    "split_dataset",
    "validate_entry",
    "__version__",
]
