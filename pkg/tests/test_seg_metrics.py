import math

import numpy as np
import pytest

from histosynth.seg.metrics import (ConfusionTensor, confusion, cross_entropy,
                                    evaluate, mean_dice, miou,
                                    stack_confusions, tobjective, wiou,
                                    wprecision, wrecall)


def naive_confusion(pred, gt, n_classes):
    """Double-loop oracle."""
    tp = np.zeros(n_classes, dtype=np.int64)
    fp = np.zeros(n_classes, dtype=np.int64)
    fn = np.zeros(n_classes, dtype=np.int64)
    tn = np.zeros(n_classes, dtype=np.int64)
    for c in range(n_classes):
        for y in range(pred.shape[0]):
            for x in range(pred.shape[1]):
                p, g = pred[y, x] == c, gt[y, x] == c
                if p and g:
                    tp[c] += 1
                elif p and not g:
                    fp[c] += 1
                elif g and not p:
                    fn[c] += 1
                else:
                    tn[c] += 1
    return tp, fp, fn, tn


class TestConfusion:
    def test_perfect_prediction(self):
        gt = np.random.default_rng(0).integers(0, 4, (8, 8)).astype(np.uint8)
        ct = confusion(gt, gt, 4)
        assert ct.fp.sum() == 0 and ct.fn.sum() == 0
        assert ct.tp.sum() == 64

    def test_hand_tally_single_mislabel(self):
        gt = np.array([[0, 0], [1, 1]], dtype=np.uint8)
        pred = np.array([[0, 1], [1, 1]], dtype=np.uint8)
        ct = confusion(pred, gt, 2)
        assert ct.tp[0].tolist() == [1, 2]
        assert ct.fn[0].tolist() == [1, 0]
        assert ct.fp[0].tolist() == [0, 1]

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(5)
        pred = rng.integers(0, 4, (32, 32)).astype(np.uint8)
        gt = rng.integers(0, 4, (32, 32)).astype(np.uint8)
        ct = confusion(pred, gt, 4)
        tp, fp, fn, tn = naive_confusion(pred, gt, 4)
        assert np.array_equal(ct.tp[0], tp)
        assert np.array_equal(ct.fp[0], fp)
        assert np.array_equal(ct.fn[0], fn)
        assert np.array_equal(ct.tn[0], tn)

    def test_conservation(self):
        rng = np.random.default_rng(6)
        pred = rng.integers(0, 4, (16, 16)).astype(np.uint8)
        gt = rng.integers(0, 4, (16, 16)).astype(np.uint8)
        ct = confusion(pred, gt, 4)
        totals = ct.tp + ct.fp + ct.fn + ct.tn
        assert (totals == 256).all()

    def test_dim_mismatch_rejected(self):
        with pytest.raises(ValueError):
            confusion(np.zeros((2, 2), dtype=np.uint8),
                      np.zeros((3, 2), dtype=np.uint8), 4)


def metric_oracle(preds, gts, n_classes):
    """Direct re-derivation of the four metric formulas, per image."""
    ious, wious, wprecs, wrecs = [], [], [], []
    for pred, gt in zip(preds, gts):
        iou_c, w_iou, w_prec, w_rec = [], 0.0, 0.0, 0.0
        total = gt.size
        for c in range(n_classes):
            tp = int(np.sum((pred == c) & (gt == c)))
            fp = int(np.sum((pred == c) & (gt != c)))
            fn = int(np.sum((pred != c) & (gt == c)))
            s_c = tp + fn
            iou = tp / (tp + fp + fn) if tp + fp + fn else 1.0
            prec = tp / (tp + fp) if tp + fp else 1.0
            rec = tp / (tp + fn) if tp + fn else 1.0
            iou_c.append(iou)
            w = s_c / total
            w_iou += w * iou
            w_prec += w * prec
            w_rec += w * rec
        ious.append(np.mean(iou_c))
        wious.append(w_iou)
        wprecs.append(w_prec)
        wrecs.append(w_rec)
    return (float(np.mean(ious)), float(np.mean(wious)),
            float(np.mean(wprecs)), float(np.mean(wrecs)))


class TestMetrics:
    def test_perfect_prediction_all_ones(self):
        gt = np.random.default_rng(1).integers(0, 4, (10, 10)).astype(np.uint8)
        ct = confusion(gt, gt, 4)
        for metric in (miou, wiou, wprecision, wrecall):
            assert metric(ct) == 1.0

    def test_all_class_zero_on_balanced_two_class(self):
        gt = np.zeros((10, 10), dtype=np.uint8)
        gt[:, 5:] = 1
        pred = np.zeros((10, 10), dtype=np.uint8)
        ct = confusion(pred, gt, 2)
        assert miou(ct) == pytest.approx(0.25)

    def test_random_matches_formula_oracle(self):
        rng = np.random.default_rng(9)
        preds = [rng.integers(0, 4, (24, 24)).astype(np.uint8) for _ in range(5)]
        gts = [rng.integers(0, 4, (24, 24)).astype(np.uint8) for _ in range(5)]
        ct = stack_confusions([confusion(p, g, 4) for p, g in zip(preds, gts)])
        om, ow, op, orc = metric_oracle(preds, gts, 4)
        assert miou(ct) == pytest.approx(om, rel=1e-12)
        assert wiou(ct) == pytest.approx(ow, rel=1e-12)
        assert wprecision(ct) == pytest.approx(op, rel=1e-12)
        assert wrecall(ct) == pytest.approx(orc, rel=1e-12)

    def test_wiou_is_weighted_mean(self):
        rng = np.random.default_rng(10)
        pred = rng.integers(0, 4, (20, 20)).astype(np.uint8)
        gt = rng.integers(0, 4, (20, 20)).astype(np.uint8)
        ct = confusion(pred, gt, 4)
        per_class = ct.tp[0] / np.maximum(ct.tp[0] + ct.fp[0] + ct.fn[0], 1)
        assert per_class.min() <= wiou(ct) <= per_class.max()

    def test_permutation_invariance(self):
        rng = np.random.default_rng(11)
        preds = [rng.integers(0, 4, (12, 12)).astype(np.uint8) for _ in range(4)]
        gts = [rng.integers(0, 4, (12, 12)).astype(np.uint8) for _ in range(4)]
        cts = [confusion(p, g, 4) for p, g in zip(preds, gts)]
        fwd = stack_confusions(cts)
        rev = stack_confusions(cts[::-1])
        assert miou(fwd) == miou(rev)
        assert wiou(fwd) == wiou(rev)


class TestTObjective:
    def test_perfect_unit_confidence(self):
        gt = np.random.default_rng(2).integers(0, 4, (8, 8)).astype(np.uint8)
        ct = confusion(gt, gt, 4)
        probs = np.zeros((4, 8, 8))
        rows, cols = np.indices(gt.shape)
        probs[gt, rows, cols] = 1.0
        assert tobjective(ct, [probs], [gt]) == pytest.approx(1.0)

    def test_perfect_labels_half_confidence(self):
        gt = np.random.default_rng(3).integers(0, 4, (8, 8)).astype(np.uint8)
        ct = confusion(gt, gt, 4)
        probs = np.full((4, 8, 8), 0.5)
        expected = 1.0 / (1.0 + 0.25 * math.log(2))
        assert tobjective(ct, [probs], [gt]) == pytest.approx(expected, rel=1e-12)

    def test_all_wrong_driven_by_ce(self):
        gt = np.zeros((4, 4), dtype=np.uint8)
        pred = np.ones((4, 4), dtype=np.uint8)
        ct = confusion(pred, gt, 2)
        probs = np.zeros((2, 4, 4))
        probs[1] = 0.9
        probs[0] = 0.1
        # dice for class 0 is 0, class 1 is 0; CE = -log(0.1)
        expected = 1.0 / (0.0 + 0.25 * -math.log(0.1))
        assert tobjective(ct, [probs], [gt]) == pytest.approx(expected, rel=1e-9)

    def test_zero_denominator_is_inf(self):
        gt = np.zeros((2, 2), dtype=np.uint8)
        pred = np.ones((2, 2), dtype=np.uint8)
        ct = confusion(pred, gt, 2)
        probs = np.zeros((2, 2, 2))
        probs[0] = 1.0  # true class prob 1 -> CE 0; dice 0
        assert tobjective(ct, [probs], [gt]) == math.inf


class TestEvaluate:
    def test_report_fields(self):
        rng = np.random.default_rng(4)
        gts = [rng.integers(0, 4, (8, 8)).astype(np.uint8) for _ in range(3)]
        report = evaluate(gts, gts, 4)
        d = report.to_dict()
        assert d["miou"] == 1.0 and d["wrecall"] == 1.0
        assert len(d["per_class_iou"]) == 4
