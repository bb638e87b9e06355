"""Walkthrough of segmentation evaluation with per-class and mean IoU.

Shows the per-class intersection-over-union, the absent-class rule, and
macro aggregation over a small synthetic validation set.

    python3 demos/02_iou_evaluation.py
"""
import numpy as np

from quakesev import DamageClass, SegMask, class_iou, dataset_mean_iou, mean_iou

print("=== IoU evaluation ===\n")

# Ground truth vs. a model prediction that catches most of the damage but
# hallucinates a little extra debris.
gt = SegMask(np.array(
    [
        [0, 0, 2, 2],
        [0, 2, 2, 2],
        [1, 1, 3, 3],
        [1, 1, 3, 3],
    ],
    dtype=np.uint8,
))
pred = SegMask(np.array(
    [
        [0, 0, 2, 2],
        [0, 2, 2, 0],
        [1, 1, 3, 3],
        [1, 3, 3, 3],
    ],
    dtype=np.uint8,
))

print("per-class IoU (intersection / union of the class's pixel sets):")
for cls in DamageClass:
    iou = class_iou(gt, pred, cls)
    label = "absent in both" if iou is None else f"{iou:.4f}"
    print(f"  {cls.name.lower():<12} {label}")

report = mean_iou(gt, pred)
print(f"\nimage mean IoU over the {report.included_count} present classes: {report.mean:.4f}")

# Classes absent from BOTH masks are left out of the mean instead of
# counting as free 1.0s; a scene with no debris should not be easier to
# score than one with debris.
no_debris_gt = SegMask(np.array([[0, 1], [1, 1]], dtype=np.uint8))
no_debris_pred = SegMask(np.array([[0, 1], [1, 0]], dtype=np.uint8))
r = mean_iou(no_debris_gt, no_debris_pred)
print(f"scene without debris: included classes = {r.included_count} (debris excluded)")

print("\n--- dataset-level aggregation ---")
# Macro average: mean of per-image means, every image weighs the same
# regardless of its size.
rng = np.random.default_rng(0)
pairs = []
for _ in range(6):
    h, w = rng.integers(4, 9, size=2)
    g = SegMask(rng.integers(0, 4, size=(h, w), dtype=np.uint8))
    # prediction = ground truth with a fraction of pixels rerolled
    noisy = g.classes.copy()
    flip = rng.random(size=noisy.shape) < 0.2
    noisy[flip] = rng.integers(0, 4, size=int(flip.sum()), dtype=np.uint8)
    pairs.append((g, SegMask(noisy)))

for i, (g, p) in enumerate(pairs):
    print(f"  image {i}: {g.width}x{g.height}  mean IoU {mean_iou(g, p).mean:.4f}")
print(f"dataset mean IoU (macro): {dataset_mean_iou(pairs):.4f}")

print("\ndone.")
