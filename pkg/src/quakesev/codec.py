"""Bit-exact PNG codecs for mask and depth exchange files.

Mask files are 8-bit PNGs holding one class per pixel. The canonical form
written by :func:`save_mask` is palette-indexed with exactly the four class
colors as palette entries, in class-code order:

    0 background  (0, 0, 0)
    1 undamaged   (0, 255, 0)
    2 damaged     (0, 0, 255)
    3 debris      (255, 0, 0)

:func:`load_mask` additionally accepts 8-bit RGB limited to those colors and
8-bit grayscale limited to the values 0..3.

Depth files are 16-bit single-channel grayscale PNGs with linear samples;
a larger sample means farther from the camera.

Writers are hand-rolled rather than delegated to Pillow: Pillow either
optimizes the palette bit depth below 8 or pads the PLTE chunk to 256
entries, both of which break the canonical form. Decoding goes through
Pillow after an explicit header check.
"""
from __future__ import annotations

import os
import struct
import tempfile
import zlib
from pathlib import Path

import numpy as np
from PIL import Image

from .types import CLASS_COLORS, DamageClass, DepthMap, SegMask

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_COLOR_TO_CLASS = {color: cls for cls, color in CLASS_COLORS.items()}

# PNG color types
_CT_GRAYSCALE = 0
_CT_RGB = 2
_CT_PALETTE = 3


class MaskFormatError(ValueError):
    """A mask file violates the exchange format."""


class DepthFormatError(ValueError):
    """A depth file violates the exchange format."""


def _chunk(kind: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + kind
        + payload
        + struct.pack(">I", zlib.crc32(kind + payload))
    )


def _encode_png(
    width: int,
    height: int,
    bit_depth: int,
    color_type: int,
    scanlines: bytes,
    palette: bytes | None = None,
) -> bytes:
    ihdr = struct.pack(">IIBBBBB", width, height, bit_depth, color_type, 0, 0, 0)
    parts = [_PNG_SIGNATURE, _chunk(b"IHDR", ihdr)]
    if palette is not None:
        parts.append(_chunk(b"PLTE", palette))
    parts.append(_chunk(b"IDAT", zlib.compress(scanlines, 9)))
    parts.append(_chunk(b"IEND", b""))
    return b"".join(parts)


def _atomic_write(path: Path | str, data: bytes) -> None:
    # temp-file-then-rename so a failed write never leaves a truncated file
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


def _read_header(path: Path | str, err: type[ValueError]) -> tuple[int, int, int, int]:
    """Return (width, height, bit_depth, color_type) from the IHDR chunk."""
    try:
        with open(path, "rb") as fh:
            head = fh.read(33)
    except OSError as exc:
        raise err(f"{path}: cannot read file: {exc}") from exc
    if len(head) < 33 or head[:8] != _PNG_SIGNATURE:
        raise err(f"{path}: not a PNG file")
    length, kind = struct.unpack(">I4s", head[8:16])
    if kind != b"IHDR" or length != 13:
        raise err(f"{path}: malformed PNG header")
    width, height, bit_depth, color_type = struct.unpack(">IIBB", head[16:26])
    if width == 0 or height == 0:
        raise err(f"{path}: zero width or height")
    return width, height, bit_depth, color_type


def _first_bad_pixel(bad: np.ndarray) -> tuple[int, int]:
    """Coordinates (x, y) of the first True entry in row-major order."""
    flat = int(np.flatnonzero(bad.ravel())[0])
    y, x = divmod(flat, bad.shape[1])
    return x, y


def encode_mask_bytes(mask: SegMask) -> bytes:
    """Canonical palette-indexed PNG bytes for ``mask``."""
    rows = np.empty((mask.height, mask.width + 1), dtype=np.uint8)
    rows[:, 0] = 0  # filter type None per scanline
    rows[:, 1:] = mask.classes
    palette = b"".join(bytes(CLASS_COLORS[cls]) for cls in DamageClass)
    return _encode_png(mask.width, mask.height, 8, _CT_PALETTE, rows.tobytes(), palette)


def save_mask(mask: SegMask, path: Path | str) -> None:
    """Write ``mask`` as the canonical palette-indexed PNG.

    Output bytes are deterministic for a given mask; the write is atomic.
    """
    _atomic_write(path, encode_mask_bytes(mask))


def load_mask(path: Path | str) -> SegMask:
    """Decode a mask PNG into a SegMask.

    Accepts the canonical palette form plus the 8-bit RGB and 8-bit
    grayscale variants described in the module docstring. Any pixel whose
    color (or grayscale value) is outside the canonical set is an error
    naming that pixel.
    """
    _, _, bit_depth, color_type = _read_header(path, MaskFormatError)
    if color_type not in (_CT_PALETTE, _CT_RGB, _CT_GRAYSCALE):
        raise MaskFormatError(
            f"{path}: unsupported color type {color_type}; expected palette, RGB, or grayscale"
        )
    if bit_depth != 8:
        raise MaskFormatError(f"{path}: expected 8-bit mask PNG, got {bit_depth}-bit")

    try:
        with Image.open(path) as img:
            img.load()
            pixels = np.asarray(img)
            pal = img.getpalette() if color_type == _CT_PALETTE else None
    except Exception as exc:
        raise MaskFormatError(f"{path}: cannot decode PNG: {exc}") from exc

    if color_type == _CT_PALETTE:
        # map palette index -> class via the entry's color; 255 marks unknown
        lut = np.full(256, 255, dtype=np.uint8)
        colors = [tuple(pal[i : i + 3]) for i in range(0, len(pal or []), 3)]
        for idx, color in enumerate(colors):
            cls = _COLOR_TO_CLASS.get(color)
            if cls is not None:
                lut[idx] = int(cls)
        classes = lut[pixels]
        bad = classes == 255
        if bad.any():
            x, y = _first_bad_pixel(bad)
            color = colors[pixels[y, x]] if pixels[y, x] < len(colors) else "<missing palette entry>"
            raise MaskFormatError(f"{path}: unknown class color at ({x}, {y}): {color}")
    elif color_type == _CT_RGB:
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise MaskFormatError(f"{path}: expected 3-channel RGB data")
        classes = np.full(pixels.shape[:2], 255, dtype=np.uint8)
        for cls, color in CLASS_COLORS.items():
            classes[np.all(pixels == np.array(color, dtype=np.uint8), axis=2)] = int(cls)
        bad = classes == 255
        if bad.any():
            x, y = _first_bad_pixel(bad)
            color = tuple(int(c) for c in pixels[y, x])
            raise MaskFormatError(f"{path}: unknown class color at ({x}, {y}): {color}")
    else:
        bad = pixels > int(DamageClass.DEBRIS)
        if bad.any():
            x, y = _first_bad_pixel(bad)
            raise MaskFormatError(
                f"{path}: unknown class value at ({x}, {y}): {int(pixels[y, x])}"
            )
        classes = pixels

    return SegMask(classes)


def save_depth(depth: DepthMap, path: Path | str) -> None:
    """Write a DepthMap as the canonical 16-bit grayscale PNG.

    Values must already be integral and within [0, 65535]; this writer is a
    helper for producing conformant files, not a quantizer.
    """
    values = depth.values
    rounded = np.rint(values)
    if not np.array_equal(rounded, values):
        raise DepthFormatError("depth values must be integral to write a 16-bit file")
    if values.max() > 65535:
        raise DepthFormatError(f"depth values exceed 16-bit range: max {values.max()}")
    samples = values.astype(">u2")
    byte_cols = samples.view(np.uint8).reshape(depth.height, depth.width * 2)
    rows = np.empty((depth.height, depth.width * 2 + 1), dtype=np.uint8)
    rows[:, 0] = 0
    rows[:, 1:] = byte_cols
    data = _encode_png(depth.width, depth.height, 16, _CT_GRAYSCALE, rows.tobytes())
    _atomic_write(path, data)


def load_depth(path: Path | str) -> DepthMap:
    """Decode a 16-bit grayscale depth PNG; sample s maps to the real s."""
    _, _, bit_depth, color_type = _read_header(path, DepthFormatError)
    if color_type != _CT_GRAYSCALE:
        raise DepthFormatError(
            f"{path}: expected single-channel grayscale depth PNG, got color type {color_type}"
        )
    if bit_depth != 16:
        raise DepthFormatError(f"{path}: expected 16-bit depth PNG, got {bit_depth}-bit")
    try:
        with Image.open(path) as img:
            img.load()
            samples = np.asarray(img)
    except Exception as exc:
        raise DepthFormatError(f"{path}: cannot decode PNG: {exc}") from exc
    return DepthMap(samples.astype(np.float64))


def mask_to_rgb(mask: SegMask) -> np.ndarray:
    """Render a mask to an (H, W, 3) uint8 array of the canonical colors."""
    table = np.zeros((4, 3), dtype=np.uint8)
    for cls, color in CLASS_COLORS.items():
        table[int(cls)] = color
    return table[mask.classes]
