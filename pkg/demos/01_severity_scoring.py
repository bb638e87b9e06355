"""Walkthrough of the depth-weighted severity score.

Builds small masks and depth maps in numpy and shows how the score reacts
to class composition and to where damage sits in the scene. Run from the
repository root after installing the package:

    python3 demos/01_severity_scoring.py
"""
import numpy as np

from quakesev import (
    DamageClass,
    DepthMap,
    NormalizedDepth,
    ScoringConfig,
    SegMask,
    damage_score,
    normalize_depth,
    score_image,
)


def show(title, value):
    print(f"  {title:<52} {value}")


print("=== severity scoring ===\n")

# A 4x4 scene: top half is a damaged facade, bottom-left is rubble,
# bottom-right is an intact wall. One background pixel (sky).
mask = SegMask(np.array(
    [
        [2, 2, 2, 0],
        [2, 2, 2, 2],
        [3, 3, 1, 1],
        [3, 3, 1, 1],
    ],
    dtype=np.uint8,
))
print("scene classes (0=background 1=undamaged 2=damaged 3=debris):")
print(mask.classes, "\n")

# Raw depth straight from a monocular estimator: unit-agnostic, larger =
# farther. normalize_depth rescales it onto [0.1, 1] so foreground pixels
# keep a positive weight instead of vanishing from the sums.
raw = DepthMap(np.array(
    [
        [80.0, 80.0, 80.0, 95.0],
        [60.0, 60.0, 60.0, 60.0],
        [10.0, 10.0, 30.0, 30.0],
        [5.0, 5.0, 25.0, 25.0],
    ]
))
norm = normalize_depth(raw)
print("normalized depth (floor 0.1, farthest pixel = 1.0):")
print(np.round(norm.values, 3), "\n")

score = damage_score(mask, norm)
show("severity score of the scene", f"{score.value:.4f}")
show("pixels that entered the ratio", score.assessable_pixels)

# score_image is the one-call version: normalize, then score.
assert score_image(mask, raw).value == score.value

print("\n--- closed-form anchors ---")
uniform = NormalizedDepth(np.ones((2, 2)))
for cls, name in [(1, "all undamaged"), (2, "all damaged"), (3, "all debris")]:
    m = SegMask(np.full((2, 2), cls, dtype=np.uint8))
    show(f"{name} scene", damage_score(m, uniform).value)
print("  (all-background raises UnassessableImageError; there is nothing to rate)")

print("\n--- depth weighting in action ---")
# Same class layout, but we slide the debris from the foreground to the
# background. Faraway rubble means the visible damage extends deep into
# the scene, so the score climbs.
layout = SegMask(np.array([[3, 3, 1, 1]], dtype=np.uint8))
for debris_depth in (0.1, 0.4, 0.7, 1.0):
    d = NormalizedDepth(np.array([[debris_depth, debris_depth, 0.5, 0.5]]))
    show(f"debris at normalized depth {debris_depth:.1f}", f"{damage_score(layout, d).value:.4f}")

print("\n--- damaged-structure weight ---")
# ds_weight sets how much a damaged-but-standing structure counts relative
# to full rubble. The default 0.65 sits between the two extremes.
half_and_half = SegMask(np.array([[2, 3]], dtype=np.uint8))
flat = NormalizedDepth(np.array([[1.0, 1.0]]))
for w in (0.3, 0.5, 0.65, 0.9):
    cfg = ScoringConfig(ds_weight=w)
    show(f"ds_weight={w}", f"{damage_score(half_and_half, flat, cfg).value:.4f}")

print("\ndone.")
