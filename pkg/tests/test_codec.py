"""Mask and depth PNG round trips, canonical output form, and rejection
of malformed inputs."""
import struct
import zlib

import numpy as np
import pytest
from PIL import Image

from quakesev import (
    DepthFormatError,
    DepthMap,
    MaskFormatError,
    SegMask,
    load_depth,
    load_mask,
    mask_to_rgb,
    save_depth,
    save_mask,
)

CLASS_RGB = {0: (0, 0, 0), 1: (0, 255, 0), 2: (0, 0, 255), 3: (255, 0, 0)}


def _png_chunks(data):
    """Parse (type, payload) chunks out of a PNG byte string."""
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    chunks = []
    off = 8
    while off < len(data):
        (length,) = struct.unpack(">I", data[off : off + 4])
        kind = data[off + 4 : off + 8]
        payload = data[off + 8 : off + 8 + length]
        (crc,) = struct.unpack(">I", data[off + 8 + length : off + 12 + length])
        assert crc == zlib.crc32(kind + payload) & 0xFFFFFFFF
        chunks.append((kind, payload))
        off += 12 + length
    return chunks


@pytest.fixture
def sample_mask():
    return SegMask(np.array([[0, 1, 2], [3, 2, 1]], dtype=np.uint8))


class TestMaskRoundTrip:
    def test_round_trip(self, tmp_path, sample_mask):
        p = tmp_path / "m.png"
        save_mask(sample_mask, p)
        assert load_mask(p) == sample_mask

    def test_round_trip_all_classes_random(self, tmp_path):
        rng = np.random.default_rng(7)
        mask = SegMask(rng.integers(0, 4, size=(37, 23), dtype=np.uint8))
        p = tmp_path / "m.png"
        save_mask(mask, p)
        assert load_mask(p) == mask

    def test_canonical_form(self, tmp_path, sample_mask):
        """Written masks are 8-bit palette PNGs with exactly the four
        class colors, in class-code order."""
        p = tmp_path / "m.png"
        save_mask(sample_mask, p)
        chunks = _png_chunks(p.read_bytes())
        kinds = [k for k, _ in chunks]
        assert kinds[0] == b"IHDR"
        assert kinds[-1] == b"IEND"
        ihdr = chunks[0][1]
        w, h, bitdepth, colortype = struct.unpack(">IIBB", ihdr[:10])
        assert (w, h) == (3, 2)
        assert bitdepth == 8
        assert colortype == 3
        plte = next(payload for kind, payload in chunks if kind == b"PLTE")
        assert len(plte) == 12
        palette = [tuple(plte[i : i + 3]) for i in range(0, 12, 3)]
        assert palette == [CLASS_RGB[c] for c in range(4)]

    def test_write_is_byte_deterministic(self, tmp_path, sample_mask):
        p1 = tmp_path / "a.png"
        p2 = tmp_path / "b.png"
        save_mask(sample_mask, p1)
        save_mask(sample_mask, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_pillow_can_read_output(self, tmp_path, sample_mask):
        p = tmp_path / "m.png"
        save_mask(sample_mask, p)
        with Image.open(p) as im:
            rgb = np.asarray(im.convert("RGB"))
        expect = np.array(
            [[CLASS_RGB[c] for c in row] for row in sample_mask.classes], dtype=np.uint8
        )
        np.testing.assert_array_equal(rgb, expect)


class TestMaskAlternateEncodings:
    def test_reads_rgb_mask(self, tmp_path, sample_mask):
        rgb = mask_to_rgb(sample_mask)
        p = tmp_path / "rgb.png"
        Image.fromarray(rgb, "RGB").save(p)
        assert load_mask(p) == sample_mask

    def test_reads_grayscale_codes(self, tmp_path, sample_mask):
        p = tmp_path / "gray.png"
        Image.fromarray(sample_mask.classes, "L").save(p)
        assert load_mask(p) == sample_mask

    def test_rejects_unknown_rgb_color(self, tmp_path):
        arr = np.zeros((2, 2, 3), dtype=np.uint8)
        arr[1, 1] = (7, 7, 7)
        p = tmp_path / "bad.png"
        Image.fromarray(arr, "RGB").save(p)
        with pytest.raises(MaskFormatError, match=r"\(1, 1\)"):
            load_mask(p)

    def test_rejects_unknown_gray_code(self, tmp_path):
        arr = np.array([[0, 9]], dtype=np.uint8)
        p = tmp_path / "bad.png"
        Image.fromarray(arr, "L").save(p)
        with pytest.raises(MaskFormatError, match=r"\(1, 0\)"):
            load_mask(p)

    def test_rejects_unknown_palette_color(self, tmp_path):
        im = Image.new("P", (2, 2), 0)
        im.putpalette([0, 0, 0, 10, 20, 30] + [0] * (256 * 3 - 6))
        im.putpixel((0, 1), 1)
        p = tmp_path / "bad.png"
        im.save(p)
        with pytest.raises(MaskFormatError, match=r"\(0, 1\)"):
            load_mask(p)


class TestMaskErrors:
    def test_not_a_png(self, tmp_path):
        p = tmp_path / "x.png"
        p.write_bytes(b"definitely not a png")
        with pytest.raises(MaskFormatError, match="not a PNG"):
            load_mask(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MaskFormatError, match="cannot read"):
            load_mask(tmp_path / "absent.png")

    def test_truncated_png(self, tmp_path, sample_mask):
        p = tmp_path / "m.png"
        save_mask(sample_mask, p)
        data = p.read_bytes()
        # keep the header but cut into the palette chunk
        p.write_bytes(data[:40])
        with pytest.raises(MaskFormatError):
            load_mask(p)

    def test_16bit_mask_rejected(self, tmp_path):
        p = tmp_path / "deep.png"
        im = Image.new("I;16", (2, 1))
        im.putdata([0, 1])
        im.save(p)
        with pytest.raises(MaskFormatError):
            load_mask(p)


class TestDepthRoundTrip:
    def test_round_trip(self, tmp_path):
        d = DepthMap(np.array([[0, 1234], [65535, 7]], dtype=np.uint16))
        p = tmp_path / "d.png"
        save_depth(d, p)
        loaded = load_depth(p)
        np.testing.assert_array_equal(loaded.values, d.values)

    def test_canonical_form(self, tmp_path):
        d = DepthMap(np.array([[5, 65535]], dtype=np.uint16))
        p = tmp_path / "d.png"
        save_depth(d, p)
        chunks = _png_chunks(p.read_bytes())
        w, h, bitdepth, colortype = struct.unpack(">IIBB", chunks[0][1][:10])
        assert (w, h) == (2, 1)
        assert bitdepth == 16
        assert colortype == 0  # grayscale

    def test_big_endian_samples(self, tmp_path):
        d = DepthMap(np.array([[0x0102]], dtype=np.uint16))
        p = tmp_path / "d.png"
        save_depth(d, p)
        chunks = _png_chunks(p.read_bytes())
        idat = b"".join(payload for kind, payload in chunks if kind == b"IDAT")
        raw = zlib.decompress(idat)
        # scanline = filter byte then the one big-endian sample
        assert raw == b"\x00\x01\x02"

    def test_save_requires_integral_values(self, tmp_path):
        with pytest.raises(DepthFormatError):
            save_depth(DepthMap(np.array([[0.5]])), tmp_path / "d.png")
        with pytest.raises(DepthFormatError):
            save_depth(DepthMap(np.array([[65536.0]])), tmp_path / "d.png")

    def test_rejects_8bit_depth(self, tmp_path):
        p = tmp_path / "d8.png"
        Image.fromarray(np.array([[3]], dtype=np.uint8), "L").save(p)
        with pytest.raises(DepthFormatError, match="16-bit"):
            load_depth(p)

    def test_rejects_rgb_depth(self, tmp_path):
        p = tmp_path / "rgb.png"
        Image.fromarray(np.zeros((2, 2, 3), dtype=np.uint8), "RGB").save(p)
        with pytest.raises(DepthFormatError):
            load_depth(p)

    def test_pillow_reads_same_values(self, tmp_path):
        d = DepthMap(np.array([[0, 40000], [65535, 1]], dtype=np.uint16))
        p = tmp_path / "d.png"
        save_depth(d, p)
        with Image.open(p) as im:
            arr = np.asarray(im, dtype=np.float64)
        np.testing.assert_array_equal(arr, d.values)


class TestAtomicity:
    def test_no_partial_file_on_failed_write(self, tmp_path, sample_mask):
        target = tmp_path / "out.png"
        save_mask(sample_mask, target)
        before = target.read_bytes()
        bad = DepthMap(np.array([[0.25]]))
        with pytest.raises(DepthFormatError):
            save_depth(bad, target)
        # the earlier contents survive a failed overwrite
        assert target.read_bytes() == before
        leftovers = [q for q in tmp_path.iterdir() if q != target]
        assert leftovers == []
