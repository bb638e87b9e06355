"""Export pipeline: image -> canonical mask and depth files + manifest.

The manifest is JSON Lines. A successful image yields
``{"id", "image", "mask", "depth"}`` with mask/depth paths relative to the
manifest's directory; a failed one yields ``{"id", "image", "error"}`` and
the batch keeps going. Consumers that require a mask on every line should
filter out error lines first.
"""
from __future__ import annotations

import json
import os
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from PIL import Image

from .backends import make_depth_backend, make_segmentation_backend

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


class ExportError(ValueError):
    """An image could not be exported."""


def load_image(path: Path | str) -> np.ndarray:
    """Decode an image file to (H, W, 3) uint8 RGB."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except Exception as exc:
        raise ExportError(f"{path}: cannot decode image: {exc}") from exc


def _resize_plane(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    """Bilinear resize of one float plane to (height, width)."""
    if plane.shape == (height, width):
        return plane
    img = Image.fromarray(plane.astype(np.float32), mode="F")
    return np.asarray(img.resize((width, height), Image.BILINEAR), dtype=np.float64)


def export_segmentation(image_path: Path | str, out_mask_path: Path | str, backend) -> np.ndarray:
    """Run the segmentation backend and write the canonical mask PNG.

    Logits are resized to the input image's dimensions before the argmax,
    so the written mask always matches the photo pixel-for-pixel. Returns
    the class array.
    """
    from .pngio import write_mask_png

    image = load_image(image_path)
    h, w = image.shape[:2]
    logits = np.asarray(backend.predict_logits(image), dtype=np.float64)
    if logits.ndim != 3 or logits.shape[0] != 4:
        raise ExportError(
            f"{image_path}: backend emitted logits of shape {logits.shape}, expected (4, h, w)"
        )
    resized = np.stack([_resize_plane(logits[c], h, w) for c in range(4)])
    classes = np.argmax(resized, axis=0).astype(np.uint8)
    write_mask_png(classes, out_mask_path)
    return classes


def export_depth(image_path: Path | str, out_depth_path: Path | str, backend) -> np.ndarray:
    """Run the depth backend and write the canonical 16-bit depth PNG.

    The backend emits relative inverse depth (larger = nearer); stored
    samples use the opposite, larger-is-farther convention, so the output
    is flipped (d' = max - d) and then min-max scaled onto the full 16-bit
    range. A constant prediction quantizes to all zeros. Returns the
    stored samples.
    """
    from .pngio import write_depth_png

    image = load_image(image_path)
    h, w = image.shape[:2]
    inverse = np.asarray(backend.predict_inverse_depth(image), dtype=np.float64)
    if inverse.ndim != 2:
        raise ExportError(
            f"{image_path}: backend emitted depth of shape {inverse.shape}, expected (h, w)"
        )
    inverse = _resize_plane(inverse, h, w)
    farness = inverse.max() - inverse  # flip to larger-is-farther
    spread = farness.max()
    if spread > 0:
        samples = np.rint(farness / spread * 65535.0).astype(np.uint16)
    else:
        samples = np.zeros((h, w), dtype=np.uint16)
    write_depth_png(samples, out_depth_path)
    return samples


def find_images(image_dir: Path | str) -> list[Path]:
    """Image files directly inside ``image_dir``, sorted by name."""
    image_dir = Path(image_dir)
    if not image_dir.is_dir():
        raise ExportError(f"{image_dir}: not a directory")
    return sorted(
        p for p in image_dir.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )


def _unique_ids(paths: list[Path]) -> list[str]:
    ids = []
    seen: dict[str, int] = {}
    for p in paths:
        base = p.stem
        count = seen.get(base, 0)
        seen[base] = count + 1
        ids.append(base if count == 0 else f"{base}_{count + 1}")
    return ids


def export_batch(
    image_dir: Path | str,
    out_dir: Path | str,
    seg_ref: str = "stub",
    depth_ref: str = "stub",
    jobs: int = 1,
) -> tuple[Path, int, int]:
    """Export every image in a folder; returns (manifest_path, ok, failed).

    Images are processed in sorted name order and the manifest preserves
    that order. Worker threads never share a model handle: each thread
    builds its own backends from the refs.
    """
    out_dir = Path(out_dir)
    images = find_images(image_dir)
    if not images:
        raise ExportError(f"{image_dir}: no images found ({', '.join(IMAGE_SUFFIXES)})")
    out_dir.mkdir(parents=True, exist_ok=True)
    ids = _unique_ids(images)

    local = threading.local()

    def backends():
        if not hasattr(local, "seg"):
            local.seg = make_segmentation_backend(seg_ref)
            local.depth = make_depth_backend(depth_ref)
        return local.seg, local.depth

    def image_ref(path: Path) -> str:
        try:
            return os.path.relpath(path, out_dir)
        except ValueError:
            return str(path)

    def process(task: tuple[str, Path]) -> dict:
        entry_id, image_path = task
        mask_name = f"{entry_id}.mask.png"
        depth_name = f"{entry_id}.depth.png"
        try:
            seg_backend, depth_backend = backends()
            export_segmentation(image_path, out_dir / mask_name, seg_backend)
            export_depth(image_path, out_dir / depth_name, depth_backend)
        except Exception as exc:
            return {"id": entry_id, "image": image_ref(image_path), "error": str(exc)}
        return {
            "id": entry_id,
            "image": image_ref(image_path),
            "mask": mask_name,
            "depth": depth_name,
        }

    tasks = list(zip(ids, images))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            lines = list(pool.map(process, tasks))
    else:
        lines = [process(t) for t in tasks]

    manifest_path = out_dir / "manifest.jsonl"
    payload = "".join(json.dumps(line) + "\n" for line in lines)
    fd, tmp = tempfile.mkstemp(dir=out_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, manifest_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

    failed = sum(1 for line in lines if "error" in line)
    return manifest_path, len(lines) - failed, failed
