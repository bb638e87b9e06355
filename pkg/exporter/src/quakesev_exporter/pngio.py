"""Writers for the mask/depth exchange formats consumed by the quakesev
toolkit.

Masks are 8-bit palette PNGs whose palette is exactly the four class
colors, in class-code order: background (0,0,0), undamaged (0,255,0),
damaged (0,0,255), debris (255,0,0). Depth files are 16-bit grayscale
PNGs, big-endian samples, larger = farther. Both writers are atomic and
byte-deterministic.
"""
from __future__ import annotations

import os
import struct
import tempfile
import zlib
from pathlib import Path

import numpy as np

SIGNATURE = b"\x89PNG\r\n\x1a\n"

#: class code -> overlay color, the exchange-format palette
PALETTE = ((0, 0, 0), (0, 255, 0), (0, 0, 255), (255, 0, 0))


def _chunk(kind: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + kind
        + payload
        + struct.pack(">I", zlib.crc32(kind + payload))
    )


def _write_atomic(path: Path | str, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_mask_png(classes: np.ndarray, path: Path | str) -> None:
    """Write an (H, W) array of class codes 0..3 as a canonical mask PNG."""
    classes = np.asarray(classes)
    if classes.ndim != 2 or classes.size == 0:
        raise ValueError(f"mask must be a non-empty 2D array, got shape {classes.shape}")
    if classes.min() < 0 or classes.max() > 3:
        raise ValueError("mask values must be class codes 0..3")
    h, w = classes.shape
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 3, 0, 0, 0)  # 8-bit palette
    plte = b"".join(bytes(color) for color in PALETTE)
    rows = np.empty((h, w + 1), dtype=np.uint8)
    rows[:, 0] = 0  # filter: None
    rows[:, 1:] = classes.astype(np.uint8)
    data = (
        SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"PLTE", plte)
        + _chunk(b"IDAT", zlib.compress(rows.tobytes(), 9))
        + _chunk(b"IEND", b"")
    )
    _write_atomic(path, data)


def write_depth_png(samples: np.ndarray, path: Path | str) -> None:
    """Write an (H, W) array of integers 0..65535 as a 16-bit depth PNG."""
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.size == 0:
        raise ValueError(f"depth must be a non-empty 2D array, got shape {samples.shape}")
    if samples.min() < 0 or samples.max() > 65535:
        raise ValueError("depth samples must fit 16 bits")
    h, w = samples.shape
    ihdr = struct.pack(">IIBBBBB", w, h, 16, 0, 0, 0, 0)  # 16-bit grayscale
    big_endian = samples.astype(">u2").view(np.uint8).reshape(h, w * 2)
    rows = np.empty((h, w * 2 + 1), dtype=np.uint8)
    rows[:, 0] = 0
    rows[:, 1:] = big_endian
    data = (
        SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(rows.tobytes(), 9))
        + _chunk(b"IEND", b"")
    )
    _write_atomic(path, data)
