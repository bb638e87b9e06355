"""Model backends: a deterministic stub pair for plumbing tests, plus
optional transformers-based segmentation and depth models.

A segmentation backend maps an (H, W, 3) uint8 RGB image to class logits
of shape (4, h, w) in the class order background, undamaged, damaged,
debris. A depth backend maps the image to an (h, w) float array of
relative inverse depth (larger = nearer). Backends may emit any spatial
resolution; the exporter resizes to the image's.
"""
from __future__ import annotations

import numpy as np

from .pngio import PALETTE

STUB_REF = "stub"


class CheckpointContractError(ValueError):
    """A checkpoint does not honor the 4-class output contract."""


class StubSegmentation:
    """Nearest-canonical-color classifier.

    Logits are negative squared RGB distances to the four class colors, so
    the argmax picks the closest color and an image painted with exact
    canonical colors round-trips to the obvious mask. Ties resolve to the
    lowest class code.
    """

    def predict_logits(self, image: np.ndarray) -> np.ndarray:
        pixels = image.astype(np.float64)
        logits = np.empty((4,) + image.shape[:2], dtype=np.float64)
        for code, color in enumerate(PALETTE):
            diff = pixels - np.array(color, dtype=np.float64)
            logits[code] = -np.sum(diff * diff, axis=2)
        return logits


class StubDepth:
    """Luminance-as-inverse-depth heuristic: brighter pixels are treated
    as nearer. Deterministic, scale-free, enough to exercise the flip and
    quantization plumbing."""

    def predict_inverse_depth(self, image: np.ndarray) -> np.ndarray:
        pixels = image.astype(np.float64)
        return 0.299 * pixels[..., 0] + 0.587 * pixels[..., 1] + 0.114 * pixels[..., 2]


def _to_model_input(image: np.ndarray):
    """ImageNet-normalized NCHW float tensor for transformers models."""
    import torch

    mean = np.array([0.485, 0.456, 0.406], dtype=np.float32)
    std = np.array([0.229, 0.224, 0.225], dtype=np.float32)
    scaled = (image.astype(np.float32) / 255.0 - mean) / std
    return torch.from_numpy(scaled.transpose(2, 0, 1)[None])


class TransformersSegmentation:
    """Wraps a semantic-segmentation checkpoint (e.g. a fine-tuned
    SegFormer). The checkpoint must emit exactly four classes in the
    documented order."""

    def __init__(self, checkpoint: str):
        from transformers import AutoModelForSemanticSegmentation

        self._model = AutoModelForSemanticSegmentation.from_pretrained(checkpoint)
        self._model.eval()
        n = int(getattr(self._model.config, "num_labels", 0))
        if n != 4:
            raise CheckpointContractError(
                f"checkpoint class-count mismatch: expected 4-class logits, got {n}"
            )

    def predict_logits(self, image: np.ndarray) -> np.ndarray:
        import torch

        with torch.no_grad():
            out = self._model(pixel_values=_to_model_input(image))
        logits = out.logits[0].numpy()
        if logits.shape[0] != 4:
            raise CheckpointContractError(
                f"checkpoint class-count mismatch: expected 4-class logits, got {logits.shape[0]}"
            )
        return logits.astype(np.float64)


class TransformersDepth:
    """Wraps a monocular depth checkpoint (e.g. DPT). The model's output
    is taken as relative inverse depth, per the usual convention."""

    def __init__(self, checkpoint: str):
        from transformers import AutoModelForDepthEstimation

        self._model = AutoModelForDepthEstimation.from_pretrained(checkpoint)
        self._model.eval()

    def predict_inverse_depth(self, image: np.ndarray) -> np.ndarray:
        import torch

        with torch.no_grad():
            out = self._model(pixel_values=_to_model_input(image))
        return out.predicted_depth[0].numpy().astype(np.float64)


def make_segmentation_backend(ref: str = STUB_REF):
    if ref == STUB_REF:
        return StubSegmentation()
    return TransformersSegmentation(ref)


def make_depth_backend(ref: str = STUB_REF):
    if ref == STUB_REF:
        return StubDepth()
    return TransformersDepth(ref)
