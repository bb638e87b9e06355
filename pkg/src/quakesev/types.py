"""Core domain types: damage classes, segmentation masks, depth maps."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class DamageClass(IntEnum):
    """Pixel classification with a fixed severity order.

    The integer codes double as the severity ranking:
    BACKGROUND < UNDAMAGED < DAMAGED < DEBRIS.
    """

    BACKGROUND = 0
    UNDAMAGED = 1
    DAMAGED = 2
    DEBRIS = 3


#: Canonical mask overlay colors, indexed by class code.
CLASS_COLORS: dict[DamageClass, tuple[int, int, int]] = {
    DamageClass.BACKGROUND: (0, 0, 0),
    DamageClass.UNDAMAGED: (0, 255, 0),
    DamageClass.DAMAGED: (0, 0, 255),
    DamageClass.DEBRIS: (255, 0, 0),
}


class DimensionMismatchError(ValueError):
    """Two rasters that must share dimensions do not."""


class UnassessableImageError(ValueError):
    """The mask contains no pixels the severity score is defined over."""


class _Raster:
    """Immutable 2D grid backed by a read-only numpy array."""

    __slots__ = ("_values",)

    _dtype: type = np.float64

    def __init__(self, values: np.ndarray):
        arr = np.asarray(values)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"zero width or height: shape {arr.shape}")
        arr = self._coerce(arr)
        self._validate(arr)
        arr.flags.writeable = False
        self._values = arr

    def _coerce(self, arr: np.ndarray) -> np.ndarray:
        return arr.astype(self._dtype, copy=True)

    def _validate(self, arr: np.ndarray) -> None:
        raise NotImplementedError

    @property
    def width(self) -> int:
        return self._values.shape[1]

    @property
    def height(self) -> int:
        return self._values.shape[0]

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._values.tobytes(), self._values.shape))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.width}x{self.height})"


class SegMask(_Raster):
    """Per-pixel damage classification on a row-major grid, origin top-left.

    ``classes`` is a read-only (height, width) uint8 array whose entries are
    valid :class:`DamageClass` codes. Pixel (x, y) lives at ``classes[y, x]``.
    """

    _dtype = np.uint8

    def _coerce(self, arr: np.ndarray) -> np.ndarray:
        # a silent float->uint8 cast would corrupt class codes
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"class codes must be integers, got dtype {arr.dtype}")
        if arr.min() < 0:
            raise ValueError(f"invalid class code {int(arr.min())}; valid codes are 0..3")
        return arr.astype(self._dtype, copy=True)

    def _validate(self, arr: np.ndarray) -> None:
        if arr.max(initial=0) > int(DamageClass.DEBRIS):
            bad = int(arr[arr > int(DamageClass.DEBRIS)][0])
            raise ValueError(f"invalid class code {bad}; valid codes are 0..3")

    @property
    def classes(self) -> np.ndarray:
        return self._values

    def class_at(self, x: int, y: int) -> DamageClass:
        return DamageClass(int(self._values[y, x]))


class DepthMap(_Raster):
    """Raw relative depth, one non-negative value per pixel; larger = farther.

    Values are unit-agnostic: only their ordering within one image matters.
    """

    def _validate(self, arr: np.ndarray) -> None:
        if not np.all(np.isfinite(arr)):
            raise ValueError("depth values must be finite")
        if arr.min() < 0:
            raise ValueError(f"depth values must be >= 0, got {arr.min()}")

    @property
    def values(self) -> np.ndarray:
        return self._values


class NormalizedDepth(_Raster):
    """Depth rescaled for scoring: every value lies in (0, 1].

    Produced by :func:`quakesev.severity.normalize_depth`, which maps the raw
    range onto [floor, 1.0] (default floor 0.1) so near-camera pixels keep a
    positive weight.
    """

    def _validate(self, arr: np.ndarray) -> None:
        if not np.all(np.isfinite(arr)):
            raise ValueError("normalized depth values must be finite")
        if arr.min() <= 0.0 or arr.max() > 1.0:
            raise ValueError("normalized depth values must lie in (0, 1]")

    @property
    def values(self) -> np.ndarray:
        return self._values


@dataclass(frozen=True)
class ScoringConfig:
    """Knobs of the severity score.

    ds_weight is the relative severity of a damaged-structure pixel compared
    to a debris pixel (which weighs 1). depth_floor is the lower end of the
    normalized depth range.
    """

    ds_weight: float = 0.65
    depth_floor: float = 0.1

    def __post_init__(self) -> None:
        if not 0.0 < self.ds_weight < 1.0:
            raise ValueError(f"ds_weight must be in (0, 1), got {self.ds_weight}")
        if not 0.0 < self.depth_floor < 1.0:
            raise ValueError(f"depth_floor must be in (0, 1), got {self.depth_floor}")


def dims_match(a: SegMask | DepthMap | NormalizedDepth, b: SegMask | DepthMap | NormalizedDepth) -> bool:
    """True iff the two rasters have equal width and height."""
    return a.width == b.width and a.height == b.height


def require_dims_match(a, b, what: str = "inputs") -> None:
    """Raise DimensionMismatchError unless the rasters agree in size."""
    if not dims_match(a, b):
        raise DimensionMismatchError(
            f"{what} dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
