"""Backend contracts: the stub pair, and optional transformers wrappers."""
import numpy as np
import pytest

from quakesev_exporter import StubDepth, StubSegmentation, make_segmentation_backend

from conftest import class_painted_image


class TestStubSegmentation:
    def test_canonical_colors_map_to_their_classes(self):
        classes = np.array([[0, 1], [2, 3]])
        logits = StubSegmentation().predict_logits(class_painted_image(classes))
        assert logits.shape == (4, 2, 2)
        np.testing.assert_array_equal(np.argmax(logits, axis=0), classes)

    def test_nearest_color_wins(self):
        # dark red is closer to debris red than to anything else
        image = np.full((1, 1, 3), (180, 30, 30), dtype=np.uint8)
        logits = StubSegmentation().predict_logits(image)
        assert int(np.argmax(logits[:, 0, 0])) == 3

    def test_exact_color_has_zero_logit(self):
        image = np.full((1, 1, 3), (0, 255, 0), dtype=np.uint8)
        logits = StubSegmentation().predict_logits(image)
        assert logits[1, 0, 0] == 0.0
        assert (logits[[0, 2, 3], 0, 0] < 0).all()


class TestStubDepth:
    def test_brighter_is_nearer(self):
        image = np.zeros((1, 2, 3), dtype=np.uint8)
        image[0, 0] = (255, 255, 255)
        image[0, 1] = (40, 40, 40)
        inv = StubDepth().predict_inverse_depth(image)
        assert inv[0, 0] > inv[0, 1]

    def test_shape(self):
        inv = StubDepth().predict_inverse_depth(np.zeros((5, 7, 3), dtype=np.uint8))
        assert inv.shape == (5, 7)


def tiny_segformer_dir(tmp_path, num_labels):
    transformers = pytest.importorskip("transformers")
    import torch

    torch.manual_seed(0)
    config = transformers.SegformerConfig(
        num_labels=num_labels,
        num_channels=3,
        depths=[1, 1, 1, 1],
        hidden_sizes=[8, 8, 8, 8],
        decoder_hidden_size=8,
        num_attention_heads=[1, 1, 1, 1],
    )
    model = transformers.SegformerForSemanticSegmentation(config)
    out = tmp_path / f"segformer_{num_labels}"
    model.save_pretrained(out)
    return str(out)


class TestTransformersSegmentation:
    def test_four_class_checkpoint_loads_and_predicts(self, tmp_path):
        ref = tiny_segformer_dir(tmp_path, num_labels=4)
        backend = make_segmentation_backend(ref)
        rng = np.random.default_rng(0)
        image = rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
        logits = backend.predict_logits(image)
        assert logits.ndim == 3
        assert logits.shape[0] == 4

    def test_wrong_class_count_rejected(self, tmp_path):
        from quakesev_exporter import CheckpointContractError

        ref = tiny_segformer_dir(tmp_path, num_labels=3)
        with pytest.raises(CheckpointContractError, match="class-count mismatch"):
            make_segmentation_backend(ref)
