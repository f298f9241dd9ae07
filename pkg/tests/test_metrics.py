"""Metric correctness against hand counts and brute-force pair oracles."""

from __future__ import annotations

import numpy as np
import pytest

from latticelink.metrics import aupr, best_f1_sweep, confusion, metric_report, roc_auc

from oracles import average_precision_oracle, f1_sweep_oracle, pairwise_auc_oracle


class TestConfusion:
    def test_basic(self):
        assert confusion([0.9, 0.1], [1, 0], 0.5) == (1, 0, 1, 0)

    def test_threshold_one_predicts_all_negative(self):
        tp, fp, tn, fn = confusion([0.9, 0.1, 1.0], [1, 0, 1], 1.0)
        assert (tp, fp) == (0, 0)
        assert (tn, fn) == (1, 2)

    def test_tied_scores_strict_rule(self):
        # both 0.6 > 0.55, so one true and one false positive
        assert confusion([0.6, 0.6], [1, 0], 0.55) == (1, 1, 0, 0)

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            confusion([0.5], [1, 0], 0.5)


class TestBestF1Sweep:
    def test_separable_reaches_one(self):
        f1, theta = best_f1_sweep([0.9, 0.6, 0.2], [1, 1, 0])
        assert f1 == 1.0
        assert theta == 0.20  # smallest winning threshold

    def test_all_positive_labels(self):
        f1, theta = best_f1_sweep([0.3, 0.8], [1, 1])
        assert f1 == 1.0
        assert theta == 0.0

    def test_anticorrelated_best_at_all_positive_end(self):
        scores = [0.1, 0.2, 0.8, 0.9]
        labels = [1, 1, 0, 0]
        f1, theta = best_f1_sweep(scores, labels)
        assert theta == 0.0
        # predicting everything positive: precision 1/2, recall 1
        assert f1 == pytest.approx(2 / 3)

    def test_matches_reference_sweep(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            n = int(rng.integers(2, 40))
            scores = np.round(rng.random(n), 2)
            labels = rng.integers(0, 2, size=n)
            assert best_f1_sweep(scores, labels) == f1_sweep_oracle(scores, labels)


class TestRocAuc:
    def test_perfect_ranking(self):
        assert roc_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_hand_example(self):
        assert roc_auc([0.9, 0.8, 0.4, 0.3], [1, 0, 1, 0]) == 0.75

    def test_all_ties_is_half(self):
        assert roc_auc([0.5] * 10, [1, 0] * 5) == 0.5

    def test_single_class_error(self):
        with pytest.raises(ValueError):
            roc_auc([0.1, 0.9], [1, 1])

    def test_random_labels_near_half(self):
        rng = np.random.default_rng(1)
        scores = rng.random(4000)
        labels = rng.integers(0, 2, size=4000)
        assert abs(roc_auc(scores, labels) - 0.5) < 0.03

    def test_exactly_matches_pairwise_oracle(self):
        rng = np.random.default_rng(30)
        for _ in range(150):
            n = int(rng.integers(2, 50))
            labels = rng.integers(0, 2, size=n)
            if labels.min() == labels.max():
                labels[0] = 1 - labels[0]
            # quantized scores force ties through the tie-handling path
            scores = np.round(rng.random(n), 1)
            assert roc_auc(scores, labels) == pairwise_auc_oracle(scores, labels)


class TestAupr:
    def test_perfect_ranking(self):
        assert aupr([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_all_equal_scores_gives_prevalence(self):
        assert aupr([0.4] * 8, [1, 0, 0, 0, 1, 0, 0, 0]) == pytest.approx(0.25)

    def test_hand_example(self):
        # thresholds 0.9 and 0.4 contribute 0.5*1 and 0.5*(2/3)
        assert aupr([0.9, 0.8, 0.4, 0.3], [1, 0, 1, 0]) == pytest.approx(5 / 6)

    def test_no_positives_error(self):
        with pytest.raises(ValueError):
            aupr([0.5, 0.6], [0, 0])

    def test_matches_ap_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(150):
            n = int(rng.integers(2, 40))
            labels = rng.integers(0, 2, size=n)
            if labels.sum() == 0:
                labels[0] = 1
            scores = np.round(rng.random(n), 1)
            assert aupr(scores, labels) == pytest.approx(
                average_precision_oracle(scores, labels), abs=1e-12
            )


class TestReportAndInvariance:
    def test_permutation_invariance(self):
        rng = np.random.default_rng(2)
        scores = rng.random(60)
        labels = rng.integers(0, 2, size=60)
        labels[0], labels[1] = 1, 0
        perm = rng.permutation(60)
        assert roc_auc(scores, labels) == roc_auc(scores[perm], labels[perm])
        assert aupr(scores, labels) == aupr(scores[perm], labels[perm])
        assert best_f1_sweep(scores, labels) == best_f1_sweep(scores[perm], labels[perm])

    def test_report_fields(self):
        rep = metric_report([0.9, 0.2, 0.7], [1, 0, 1])
        assert set(rep) == {"f1", "threshold", "auc", "aupr", "n_pos", "n_neg"}
        assert rep["n_pos"] == 2 and rep["n_neg"] == 1
