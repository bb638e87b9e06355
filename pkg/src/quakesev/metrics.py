"""Per-class and mean intersection-over-union between segmentation masks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import DamageClass, SegMask, require_dims_match


@dataclass(frozen=True)
class IoUReport:
    """IoU per damage class plus their mean for one mask pair.

    ``per_class`` maps every class to its IoU, or to None for classes absent
    from both masks; absent classes are excluded from ``mean``.
    """

    per_class: dict[DamageClass, float | None]
    included_count: int
    mean: float

    def to_json_dict(self) -> dict:
        return {
            "per_class": {cls.name.lower(): self.per_class[cls] for cls in DamageClass},
            "included_count": self.included_count,
            "mean": self.mean,
        }


def class_iou(gt: SegMask, pred: SegMask, cls: DamageClass) -> float | None:
    """IoU of one class between two masks; None when the union is empty.

    Defined as |gt==cls AND pred==cls| / |gt==cls OR pred==cls|, so it is
    symmetric in its mask arguments.
    """
    require_dims_match(gt, pred, "gt/pred masks")
    in_gt = gt.classes == int(cls)
    in_pred = pred.classes == int(cls)
    union = int(np.count_nonzero(in_gt | in_pred))
    if union == 0:
        return None
    intersection = int(np.count_nonzero(in_gt & in_pred))
    return intersection / union


def mean_iou(gt: SegMask, pred: SegMask) -> IoUReport:
    """Per-image IoU report: all four classes, averaged over the present ones.

    A class missing from both masks contributes nothing to the mean; at least
    one class is always present, so the mean is always defined.
    """
    require_dims_match(gt, pred, "gt/pred masks")
    per_class = {cls: class_iou(gt, pred, cls) for cls in DamageClass}
    present = [v for v in per_class.values() if v is not None]
    return IoUReport(
        per_class=per_class,
        included_count=len(present),
        mean=math.fsum(present) / len(present),
    )


def dataset_mean_iou(pairs: list[tuple[SegMask, SegMask]]) -> float:
    """Macro aggregate: unweighted mean of per-image mean IoU values."""
    if not pairs:
        raise ValueError("dataset_mean_iou requires at least one mask pair")
    means = [mean_iou(gt, pred).mean for gt, pred in pairs]
    return math.fsum(means) / len(means)
