"""Depth normalization and the depth-weighted damage severity score.

The score of an image is a ratio of depth-weighted pixel sums over the three
structure classes (background is excluded entirely):

    score = (w * sum_damaged(d) + sum_debris(d))
            / (sum_damaged(d) + sum_debris(d) + sum_undamaged(d))

where d is the normalized per-pixel depth and w (default 0.65) discounts a
damaged-structure pixel relative to a debris pixel. Depth weighting
compensates perspective: a distant pixel covers more real area than a nearby
one, so it counts for more. The score lies in [0, 1]: 0 means every assessed
pixel is undamaged, 1 means everything assessed is debris.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import (
    DamageClass,
    DepthMap,
    NormalizedDepth,
    ScoringConfig,
    SegMask,
    UnassessableImageError,
    require_dims_match,
)


@dataclass(frozen=True)
class SeverityScore:
    """Severity value in [0, 1] plus the number of pixels it was drawn from."""

    value: float
    assessable_pixels: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"severity value out of [0, 1]: {self.value}")
        if self.assessable_pixels < 1:
            raise ValueError("a severity score requires at least one assessable pixel")


def normalize_depth(raw: DepthMap, floor: float = 0.1) -> NormalizedDepth:
    """Affinely rescale raw depth onto [floor, 1.0].

    The minimum raw value maps to ``floor`` and the maximum to 1.0, keeping
    the nearest pixels at a positive weight instead of zeroing them out. A
    uniform depth map normalizes to all ones: any constant cancels in the
    score ratio, so the choice is observationally irrelevant downstream.
    """
    if not 0.0 < floor < 1.0:
        raise ValueError(f"floor must be in (0, 1), got {floor}")
    values = raw.values
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        return NormalizedDepth(np.ones_like(values))
    scaled = floor + (1.0 - floor) * ((values - lo) / (hi - lo))
    return NormalizedDepth(scaled)


def damage_score(mask: SegMask, depth: NormalizedDepth, cfg: ScoringConfig | None = None) -> SeverityScore:
    """Evaluate the severity ratio for a mask against normalized depth.

    Background pixels contribute to neither numerator nor denominator. An
    all-background mask is an error: "not assessable" must stay
    distinguishable from "assessed and undamaged".
    """
    cfg = cfg or ScoringConfig()
    require_dims_match(mask, depth, "mask/depth")
    classes = mask.classes
    d = depth.values
    assessable = int(np.count_nonzero(classes != int(DamageClass.BACKGROUND)))
    if assessable == 0:
        raise UnassessableImageError("no assessable pixels: mask is entirely background")

    # fsum keeps each partial sum correctly rounded on large images
    damaged = math.fsum(d[classes == int(DamageClass.DAMAGED)].tolist())
    debris = math.fsum(d[classes == int(DamageClass.DEBRIS)].tolist())
    undamaged = math.fsum(d[classes == int(DamageClass.UNDAMAGED)].tolist())
    total = damaged + debris + undamaged

    # factored form: single-class masks hit their closed forms (0, w, 1) exactly
    value = cfg.ds_weight * (damaged / total) + debris / total
    value = min(1.0, max(0.0, value))
    return SeverityScore(value=value, assessable_pixels=assessable)


def score_image(mask: SegMask, raw_depth: DepthMap, cfg: ScoringConfig | None = None) -> SeverityScore:
    """Normalize raw depth, then score: the full single-image pipeline."""
    cfg = cfg or ScoringConfig()
    require_dims_match(mask, raw_depth, "mask/depth")
    return damage_score(mask, normalize_depth(raw_depth, cfg.depth_floor), cfg)
