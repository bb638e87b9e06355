"""Dataset manifests: ingestion, validation, splitting, statistics, benchmark.

A manifest is JSON Lines, one object per image with the fields ``id`` and
``mask`` (required) plus ``image``, ``pred_mask``, ``depth``, and ``label``
(optional). Relative paths are resolved against the manifest file's
directory. ``label`` is one of ``little_to_no``, ``mild``, ``severe``.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .codec import load_depth, load_mask
from .severity import score_image
from .types import DamageClass, ScoringConfig, SegMask, UnassessableImageError, dims_match


class ManifestError(ValueError):
    """A manifest file or entry violates the manifest contract."""


class SeverityLabel(str, Enum):
    """Ordinal image-level severity vocabulary, least to most severe."""

    LITTLE_TO_NO = "little_to_no"
    MILD = "mild"
    SEVERE = "severe"

    @property
    def rank(self) -> int:
        return list(SeverityLabel).index(self)


_LABEL_ORDER = tuple(SeverityLabel)

_KNOWN_FIELDS = ("id", "image", "mask", "pred_mask", "depth", "label")


@dataclass(frozen=True)
class ManifestEntry:
    """One manifest record. Path fields hold the strings as written in the
    file; ``base`` (the manifest's directory) anchors relative ones."""

    id: str
    mask: str
    image: str | None = None
    pred_mask: str | None = None
    depth: str | None = None
    label: SeverityLabel | None = None
    base: Path | None = field(default=None, compare=False)

    def resolve(self, path_str: str) -> Path:
        p = Path(path_str)
        if p.is_absolute() or self.base is None:
            return p
        return self.base / p

    @property
    def mask_path(self) -> Path:
        return self.resolve(self.mask)

    @property
    def pred_mask_path(self) -> Path | None:
        return self.resolve(self.pred_mask) if self.pred_mask else None

    @property
    def depth_path(self) -> Path | None:
        return self.resolve(self.depth) if self.depth else None

    @property
    def image_path(self) -> Path | None:
        return self.resolve(self.image) if self.image else None

    def to_json_dict(self) -> dict:
        out = {"id": self.id}
        for key in ("image", "mask", "pred_mask", "depth"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.label is not None:
            out["label"] = self.label.value
        return out


def entry_from_dict(obj: dict, base: Path | None = None, where: str = "entry") -> ManifestEntry:
    """Build a ManifestEntry from a parsed JSON object, validating fields."""
    if not isinstance(obj, dict):
        raise ManifestError(f"{where}: expected a JSON object, got {type(obj).__name__}")
    unknown = [k for k in obj if k not in _KNOWN_FIELDS]
    if unknown:
        warnings.warn(f"{where}: ignoring unknown manifest fields {unknown}", stacklevel=2)
    for key in ("id", "mask"):
        if key not in obj:
            raise ManifestError(f"{where}: missing required field '{key}'")
    for key in _KNOWN_FIELDS:
        if key in obj and not isinstance(obj[key], str):
            raise ManifestError(f"{where}: field '{key}' must be a string")
    label = None
    if "label" in obj:
        try:
            label = SeverityLabel(obj["label"])
        except ValueError:
            valid = ", ".join(l.value for l in SeverityLabel)
            raise ManifestError(
                f"{where}: unknown label '{obj['label']}' (expected one of: {valid})"
            ) from None
    return ManifestEntry(
        id=obj["id"],
        mask=obj["mask"],
        image=obj.get("image"),
        pred_mask=obj.get("pred_mask"),
        depth=obj.get("depth"),
        label=label,
        base=base,
    )


def load_manifest(path: Path | str) -> list[ManifestEntry]:
    """Parse a JSON Lines manifest, in file order. Duplicate ids, unknown
    labels, and malformed lines are errors that cite the line number."""
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"{path}: cannot read manifest: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        where = f"{path}: line {lineno}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{where}: malformed JSON: {exc.msg}") from exc
        entry = entry_from_dict(obj, base=base, where=where)
        if entry.id in seen:
            raise ManifestError(f"{where}: duplicate id '{entry.id}'")
        seen.add(entry.id)
        entries.append(entry)
    return entries


def save_manifest(entries: list[ManifestEntry], path: Path | str) -> None:
    """Write entries as JSON Lines (known fields only), atomically."""
    path = Path(path)
    payload = "".join(json.dumps(e.to_json_dict()) + "\n" for e in entries)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def validate_entry(entry: ManifestEntry) -> list[str]:
    """Check file existence, decodability, and dimension agreement.

    Returns every violation found (empty list = entry is consistent); never
    raises for data problems.
    """
    violations: list[str] = []
    decoded: dict[str, object] = {}

    def check(kind: str, p: Path | None, loader) -> None:
        if p is None:
            return
        if not p.is_file():
            violations.append(f"{kind}: file not found: {p}")
            return
        try:
            decoded[kind] = loader(p)
        except Exception as exc:
            violations.append(f"{kind}: {exc}")

    check("mask", entry.mask_path, load_mask)
    check("pred_mask", entry.pred_mask_path, load_mask)
    check("depth", entry.depth_path, load_depth)
    if entry.image_path is not None and not entry.image_path.is_file():
        violations.append(f"image: file not found: {entry.image_path}")

    for other in ("pred_mask", "depth"):
        if "mask" in decoded and other in decoded:
            if not dims_match(decoded["mask"], decoded[other]):
                violations.append(f"dimension mismatch mask/{other}")
    if "pred_mask" in decoded and "depth" in decoded and "mask" not in decoded:
        if not dims_match(decoded["pred_mask"], decoded["depth"]):
            violations.append("dimension mismatch pred_mask/depth")
    return violations


# SplitMix64 (Vigna's reference constants). Chosen over the stdlib or numpy
# shufflers so the same seed reproduces the same split in any language.
_MASK64 = (1 << 64) - 1
_SM64_GOLDEN = 0x9E3779B97F4A7C15
_SM64_MIX1 = 0xBF58476D1CE4E5B9
_SM64_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator driving the dataset shuffle."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _SM64_GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _SM64_MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _SM64_MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection sampling (unbiased)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (_MASK64 + 1) - ((_MASK64 + 1) % bound)
        while True:
            value = self.next_u64()
            if value < threshold:
                return value % bound


def _permutation(n: int, seed: int) -> list[int]:
    """Seeded Fisher-Yates permutation of range(n)."""
    rng = SplitMix64(seed)
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def split_dataset(
    entries: list[ManifestEntry], train_ratio: float, seed: int
) -> tuple[list[ManifestEntry], list[ManifestEntry]]:
    """Deterministically shuffle and partition entries into train/validation.

    The train side gets floor(n * train_ratio) entries, but at least one;
    the rest go to validation. Same entries + same seed = same partition,
    on any platform.
    """
    if not entries:
        raise ValueError("cannot split an empty entry list")
    if not 0.0 < train_ratio <= 1.0:
        raise ValueError(f"train_ratio must be in (0, 1], got {train_ratio}")
    n = len(entries)
    order = _permutation(n, seed)
    train_count = max(1, math.floor(n * train_ratio))
    shuffled = [entries[i] for i in order]
    return shuffled[:train_count], shuffled[train_count:]


@dataclass(frozen=True)
class ClassHistogram:
    """Pixel counts per damage class, summed over a set of masks."""

    counts: dict[DamageClass, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {cls.name.lower(): self.counts[cls] for cls in DamageClass}


def class_histogram(masks: list[SegMask]) -> ClassHistogram:
    """Tally pixels per class over all masks (empty input = all zeros)."""
    totals = np.zeros(len(DamageClass), dtype=np.int64)
    for mask in masks:
        totals += np.bincount(mask.classes.ravel(), minlength=len(DamageClass))
    return ClassHistogram(counts={cls: int(totals[int(cls)]) for cls in DamageClass})


@dataclass(frozen=True)
class GroupScore:
    mean_score: float
    n: int


@dataclass(frozen=True)
class BenchmarkReport:
    """Mean severity score per label group, plus whether the group means
    increase strictly with the labels' severity order."""

    groups: dict[SeverityLabel, GroupScore]
    ordering_ok: bool
    skipped: list[tuple[str, str]]  # (entry id, reason)

    def to_json_dict(self) -> dict:
        return {
            "groups": {
                label.value: {"mean_score": g.mean_score, "n": g.n}
                for label, g in self.groups.items()
            },
            "ordering_ok": self.ordering_ok,
            "skipped": [{"id": i, "reason": r} for i, r in self.skipped],
        }


def _score_entry(entry: ManifestEntry, cfg: ScoringConfig) -> float:
    # predictions are what the workflow scores; fall back to the ground truth
    mask_path = entry.pred_mask_path or entry.mask_path
    mask = load_mask(mask_path)
    depth = load_depth(entry.depth_path)
    return score_image(mask, depth, cfg).value


def benchmark_grouped_scores(
    entries: list[ManifestEntry],
    cfg: ScoringConfig | None = None,
    jobs: int = 1,
) -> BenchmarkReport:
    """Average the severity score within each label group.

    Every entry must carry a label, a mask (prediction or ground truth), and
    a depth file, and all three labels must be represented. Entries whose
    mask is all background cannot be scored; they are excluded from their
    group's mean with a warning rather than failing the run.
    """
    cfg = cfg or ScoringConfig()
    for entry in entries:
        if entry.label is None:
            raise ManifestError(f"entry '{entry.id}': benchmark requires a label")
        if entry.depth is None:
            raise ManifestError(f"entry '{entry.id}': benchmark requires a depth file")

    by_label: dict[SeverityLabel, list[ManifestEntry]] = {label: [] for label in _LABEL_ORDER}
    for entry in entries:
        by_label[entry.label].append(entry)
    for label, group in by_label.items():
        if not group:
            raise ManifestError(f"empty group: no entries labeled '{label.value}'")

    def attempt(entry: ManifestEntry) -> tuple[float | None, str | None]:
        try:
            return _score_entry(entry, cfg), None
        except UnassessableImageError as exc:
            return None, str(exc)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(attempt, entries))
    else:
        results = [attempt(entry) for entry in entries]
    by_entry = {id(entry): result for entry, result in zip(entries, results)}

    skipped: list[tuple[str, str]] = []
    groups: dict[SeverityLabel, GroupScore] = {}
    for label in _LABEL_ORDER:
        scores = []
        for entry in by_label[label]:
            value, err = by_entry[id(entry)]
            if err is not None:
                warnings.warn(f"entry '{entry.id}' excluded from benchmark: {err}", stacklevel=2)
                skipped.append((entry.id, err))
            else:
                scores.append(value)
        if not scores:
            raise ManifestError(
                f"empty group: every '{label.value}' entry was unassessable"
            )
        groups[label] = GroupScore(mean_score=math.fsum(scores) / len(scores), n=len(scores))

    means = [groups[label].mean_score for label in _LABEL_ORDER]
    ordering_ok = means[0] < means[1] < means[2]
    return BenchmarkReport(groups=groups, ordering_ok=ordering_ok, skipped=skipped)
