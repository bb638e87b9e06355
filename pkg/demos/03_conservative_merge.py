"""Walkthrough of two-annotator adjudication.

Two people label the same photo; where they disagree, the conservative
rule keeps the higher damage degree. The merge is a pixelwise maximum
under the class order background < undamaged < damaged < debris.

    python3 demos/03_conservative_merge.py
"""
import numpy as np

from quakesev import (
    NormalizedDepth,
    SegMask,
    agreement_report,
    damage_score,
    merge_conservative,
)

print("=== conservative merge ===\n")

# Annotator A sees a damaged facade; annotator B judges part of it to be
# fully collapsed and also marks one extra pixel A called undamaged.
annotator_a = SegMask(np.array(
    [
        [0, 2, 2, 2],
        [0, 2, 2, 2],
        [1, 1, 1, 1],
    ],
    dtype=np.uint8,
))
annotator_b = SegMask(np.array(
    [
        [0, 2, 3, 3],
        [0, 2, 3, 3],
        [1, 1, 2, 1],
    ],
    dtype=np.uint8,
))

merged = merge_conservative(annotator_a, annotator_b)
print("annotator A:")
print(annotator_a.classes)
print("annotator B:")
print(annotator_b.classes)
print("conservative merge (pixelwise max):")
print(merged.classes, "\n")

# How much did they agree before adjudication? Inter-annotator agreement
# is just mean IoU between the two annotations.
agreement = agreement_report(annotator_a, annotator_b)
print(f"inter-annotator agreement (mean IoU): {agreement.mean:.4f}")
for cls, iou in agreement.per_class.items():
    label = "absent" if iou is None else f"{iou:.4f}"
    print(f"  {cls.name.lower():<12} {label}")

# The merge never softens anyone's call: with both annotators agreeing on
# what is background, the merged severity score is at least each input's.
depth = NormalizedDepth(np.full((3, 4), 0.8))
sa = damage_score(annotator_a, depth).value
sb = damage_score(annotator_b, depth).value
sm = damage_score(merged, depth).value
print(f"\nseverity A={sa:.4f}  B={sb:.4f}  merged={sm:.4f}")
assert sm >= max(sa, sb)

# Order of the inputs does not matter, and re-merging changes nothing.
assert merge_conservative(annotator_b, annotator_a) == merged
assert merge_conservative(merged, annotator_a) == merged

print("\ndone.")
