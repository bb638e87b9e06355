"""Independent brute-force reference implementations used to freeze
expected values. Everything here is written as plain per-pixel loops so
that agreement with the library is evidence, not tautology."""
from __future__ import annotations

import math

BACKGROUND, UNDAMAGED, DAMAGED, DEBRIS = 0, 1, 2, 3


def normalize_oracle(values, floor=0.1):
    """Affine map of a 2D list/array onto [floor, 1]; constant input maps to 1."""
    flat = [float(v) for row in values for v in row]
    lo, hi = min(flat), max(flat)
    out = []
    for row in values:
        if hi == lo:
            out.append([1.0 for _ in row])
        else:
            out.append([floor + (1.0 - floor) * (float(v) - lo) / (hi - lo) for v in row])
    return out


def severity_oracle(mask, depth, w=0.65):
    """Depth-weighted severity ratio computed pixel by pixel.

    mask: 2D sequence of class codes. depth: 2D sequence of normalized
    depth values. Returns (score, assessable_pixels) or raises ValueError
    when every pixel is background.
    """
    num = 0.0
    den = 0.0
    assessable = 0
    for mrow, drow in zip(mask, depth):
        for code, d in zip(mrow, drow):
            code = int(code)
            d = float(d)
            if code == BACKGROUND:
                continue
            assessable += 1
            den += d
            if code == DAMAGED:
                num += w * d
            elif code == DEBRIS:
                num += d
    if assessable == 0:
        raise ValueError("all background")
    return num / den, assessable


def iou_oracle(gt, pred, cls):
    """Per-class IoU by explicit double loop; None when the class is absent
    from both masks."""
    inter = 0
    union = 0
    for grow, prow in zip(gt, pred):
        for g, p in zip(grow, prow):
            g_in = int(g) == cls
            p_in = int(p) == cls
            if g_in and p_in:
                inter += 1
            if g_in or p_in:
                union += 1
    if union == 0:
        return None
    return inter / union


def mean_iou_oracle(gt, pred):
    """Mean of per-class IoU over classes present in either mask."""
    vals = []
    for cls in (BACKGROUND, UNDAMAGED, DAMAGED, DEBRIS):
        v = iou_oracle(gt, pred, cls)
        if v is not None:
            vals.append(v)
    return math.fsum(vals) / len(vals)


def merge_oracle(a, b):
    """Per-pixel class maximum."""
    return [[max(int(x), int(y)) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def histogram_oracle(masks):
    """Pixel count per class code over a list of 2D masks."""
    counts = {BACKGROUND: 0, UNDAMAGED: 0, DAMAGED: 0, DEBRIS: 0}
    for mask in masks:
        for row in mask:
            for code in row:
                counts[int(code)] += 1
    return counts


MASK64 = (1 << 64) - 1


def splitmix64_oracle(seed, n):
    """First n outputs of the splitmix64 stream for the given seed."""
    out = []
    state = seed & MASK64
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        out.append(z ^ (z >> 31))
    return out


def permutation_oracle(n, seed):
    """Fisher-Yates with rejection-sampled bounded draws from splitmix64."""
    state = seed & MASK64

    def next_u64():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(bound):
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = next_u64()
            if v < limit:
                return v % bound

    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm
