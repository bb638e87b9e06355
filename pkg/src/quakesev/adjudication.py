"""Conservative merging of two annotators' masks and agreement reporting."""
from __future__ import annotations

import numpy as np

from .metrics import IoUReport, mean_iou
from .types import SegMask, require_dims_match


def merge_conservative(a: SegMask, b: SegMask) -> SegMask:
    """Per-pixel maximum under the damage order: disagreements resolve to
    the higher damage degree, so the merge never understates damage.

    Background sits at the bottom of the order, so anything one annotator
    marked as structure or debris survives the merge. The operation is a
    semilattice join: commutative, associative, idempotent.
    """
    require_dims_match(a, b, "annotator masks")
    return SegMask(np.maximum(a.classes, b.classes))


def agreement_report(a: SegMask, b: SegMask) -> IoUReport:
    """Inter-annotator agreement, expressed as the per-image mean IoU."""
    require_dims_match(a, b, "annotator masks")
    return mean_iou(a, b)
