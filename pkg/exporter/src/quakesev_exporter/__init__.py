"""Inference exporter: segmentation + depth model outputs in the exchange
formats the quakesev toolkit consumes."""

from .backends import (
    CheckpointContractError,
    StubDepth,
    StubSegmentation,
    make_depth_backend,
    make_segmentation_backend,
)
from .export import (
    ExportError,
    export_batch,
    export_depth,
    export_segmentation,
    find_images,
    load_image,
)
from .pngio import PALETTE, write_depth_png, write_mask_png

__version__ = "0.1.0"

__all__ = [
    "CheckpointContractError",
    "ExportError",
    "PALETTE",
    "StubDepth",
    "StubSegmentation",
    "export_batch",
    "export_depth",
    "export_segmentation",
    "find_images",
    "load_image",
    "make_depth_backend",
    "make_segmentation_backend",
    "write_depth_png",
    "write_mask_png",
    "__version__",
]
