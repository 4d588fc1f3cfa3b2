import numpy as np
import pytest

from histosynth.corpus import CorpusConfig, generate_corpus
from histosynth.dataset import DatasetManifest
from histosynth.seg.experiment import augmentation_experiment
from histosynth.seg.trainer import evaluate_on, load_seg_pairs, predict, train_segmenter
from histosynth.seg.unetpp import NestedUNet, SegConfig


@pytest.fixture(scope="module")
def tiny_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("seg_corpus")
    return generate_corpus(out, CorpusConfig(n_pairs=10, width=64, height=32, seed=0))


def subset(manifest, start, stop):
    return DatasetManifest(manifest.entries[start:stop], manifest.seed)


class TestTrainSegmenter:
    def test_overfit_two_images(self, tiny_corpus):
        train_m = subset(tiny_corpus, 0, 2)
        cfg = SegConfig(base_channels=8, depth=2, epochs=200, batch_size=2, seed=0)
        model, log = train_segmenter(train_m, cfg)
        report = evaluate_on(model, train_m, cfg.n_classes)
        assert report.miou >= 0.95
        assert log[-1]["loss"] < log[0]["loss"]

    def test_deterministic_rerun(self, tiny_corpus):
        train_m = subset(tiny_corpus, 0, 4)
        cfg = SegConfig(base_channels=8, depth=2, epochs=3, batch_size=2, seed=1)
        _, log1 = train_segmenter(train_m, cfg)
        _, log2 = train_segmenter(train_m, cfg)
        assert log1 == log2

    def test_empty_manifest_rejected(self):
        with pytest.raises(ValueError):
            train_segmenter(DatasetManifest([]), SegConfig())

    def test_predict_shapes(self, tiny_corpus):
        cfg = SegConfig(base_channels=8, depth=2, epochs=1, seed=0)
        model, _ = train_segmenter(subset(tiny_corpus, 0, 2), cfg)
        pairs = load_seg_pairs(subset(tiny_corpus, 0, 2))
        preds, probs = predict(model, [p[0] for p in pairs])
        assert preds[0].shape == (32, 64)
        assert probs[0].shape == (4, 32, 64)
        assert np.allclose(probs[0].sum(axis=0), 1.0, atol=1e-5)


class TestAugmentationExperiment:
    def test_overlap_rejected(self, tiny_corpus):
        cfg = SegConfig(base_channels=8, depth=2, epochs=1, seed=0)
        with pytest.raises(ValueError):
            augmentation_experiment(subset(tiny_corpus, 0, 2),
                                    subset(tiny_corpus, 2, 4),
                                    subset(tiny_corpus, 4, 6),
                                    subset(tiny_corpus, 1, 3),  # overlaps baseline
                                    cfg)

    def test_three_arms_and_config_echo(self, tiny_corpus, tmp_path):
        cfg = SegConfig(base_channels=8, depth=2, epochs=2, seed=0)
        result = augmentation_experiment(subset(tiny_corpus, 0, 2),
                                         subset(tiny_corpus, 2, 4),
                                         subset(tiny_corpus, 4, 6),
                                         subset(tiny_corpus, 6, 8),
                                         cfg, out_dir=tmp_path)
        assert set(result["arms"]) == {"baseline", "real_plus_synth", "real_plus_control"}
        assert set(result["deltas"]) == {"real_plus_synth", "real_plus_control"}
        assert result["config_echo"]["epochs"] == 2
        assert (tmp_path / "augmentation_report.json").exists()
        assert (tmp_path / "per_class_iou.csv").exists()
