"""Shared builders for exporter tests."""
import numpy as np
import pytest
from PIL import Image

# the four exchange-format colors, by class code
COLORS = ((0, 0, 0), (0, 255, 0), (0, 0, 255), (255, 0, 0))


def write_image(path, pixels):
    """Save an (H, W, 3) uint8 array as a PNG photo."""
    Image.fromarray(np.asarray(pixels, dtype=np.uint8), "RGB").save(path)


def class_painted_image(classes):
    """RGB image whose pixels are exactly the canonical class colors."""
    classes = np.asarray(classes)
    out = np.zeros(classes.shape + (3,), dtype=np.uint8)
    for code, color in enumerate(COLORS):
        out[classes == code] = color
    return out


@pytest.fixture
def photo_dir(tmp_path):
    """Three valid photos with distinct class layouts and brightness."""
    d = tmp_path / "photos"
    d.mkdir()
    rng = np.random.default_rng(8)
    write_image(d / "a.png", class_painted_image(rng.integers(0, 4, size=(12, 10))))
    write_image(d / "b.png", class_painted_image(np.full((8, 8), 3)))
    gradient = np.linspace(0, 255, 16 * 16, dtype=np.uint8).reshape(16, 16)
    write_image(d / "c.png", np.stack([gradient] * 3, axis=2))
    return d
