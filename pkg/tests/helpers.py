"""Shared fixtures and builders for the test suite."""
from __future__ import annotations

import numpy as np

from quakesev import DepthMap, NormalizedDepth, SegMask


def random_mask(rng, h, w, classes=(0, 1, 2, 3)):
    return SegMask(rng.choice(np.array(classes, dtype=np.uint8), size=(h, w)))


def random_depth(rng, h, w, lo=0.0, hi=100.0):
    return DepthMap(rng.uniform(lo, hi, size=(h, w)))


def random_norm_depth(rng, h, w, floor=0.1):
    return NormalizedDepth(rng.uniform(floor, 1.0, size=(h, w)))


def uniform_norm_depth(h, w, value=1.0):
    return NormalizedDepth(np.full((h, w), value, dtype=np.float64))


def mask_of(rows):
    return SegMask(np.array(rows, dtype=np.uint8))


def depth_of(rows):
    return DepthMap(np.array(rows, dtype=np.float64))


def norm_depth_of(rows):
    return NormalizedDepth(np.array(rows, dtype=np.float64))
