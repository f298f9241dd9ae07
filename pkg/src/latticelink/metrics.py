"""Binary classification metrics: thresholded F1 sweep, ROC-AUC, AUPR.

AUC is the pairwise concordance probability (score ties count one half) and
is computed from integer concordance counts, so a brute-force pairwise count
produces the identical float. The F1 sweep tries the twenty thresholds
0.00, 0.05, ..., 0.95 with a strict ``score > threshold`` decision rule.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

SWEEP_THRESHOLDS = [round(0.05 * k, 2) for k in range(20)]


def _as_scored(scores: Sequence[float], labels: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be 1-D and the same length")
    if ((y != 0) & (y != 1)).any():
        raise ValueError("labels must be 0 or 1")
    return s, y


def confusion(scores, labels, threshold: float) -> tuple[int, int, int, int]:
    """(TP, FP, TN, FN) with predicted positive iff score > threshold."""
    s, y = _as_scored(scores, labels)
    pred = s > threshold
    tp = int(np.sum(pred & (y == 1)))
    fp = int(np.sum(pred & (y == 0)))
    tn = int(np.sum(~pred & (y == 0)))
    fn = int(np.sum(~pred & (y == 1)))
    return tp, fp, tn, fn


def f1_at(scores, labels, threshold: float) -> float:
    tp, fp, tn, fn = confusion(scores, labels, threshold)
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def best_f1_sweep(scores, labels) -> tuple[float, float]:
    """Best F1 over the 20-threshold grid; ties resolved to the smallest θ."""
    s, y = _as_scored(scores, labels)
    if s.size == 0:
        raise ValueError("empty scored set")
    best_f1, best_theta = 0.0, SWEEP_THRESHOLDS[0]
    for theta in SWEEP_THRESHOLDS:
        f1 = f1_at(s, y, theta)
        if f1 > best_f1:
            best_f1, best_theta = f1, theta
    return best_f1, best_theta


def roc_auc(scores, labels) -> float:
    """Probability a random positive outscores a random negative (ties ½).

    Sorted sweep with exact integer counting: twice the concordant count
    plus the tied count, over twice (positives × negatives).
    """
    s, y = _as_scored(scores, labels)
    n_pos = int(y.sum())
    n_neg = int(y.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs at least one positive and one negative")
    order = np.argsort(s, kind="stable")
    s_sorted, y_sorted = s[order], y[order]
    num2 = 0  # 2*concordant + ties
    neg_below = 0
    i = 0
    n = s.size
    while i < n:
        j = i
        while j < n and s_sorted[j] == s_sorted[i]:
            j += 1
        pos_here = int(y_sorted[i:j].sum())
        neg_here = (j - i) - pos_here
        num2 += pos_here * (2 * neg_below + neg_here)
        neg_below += neg_here
        i = j
    return num2 / (2 * n_pos * n_neg)


def aupr(scores, labels) -> float:
    """Area under the precision-recall curve, average-precision form.

    Descending-score sweep grouped by distinct score: each group contributes
    its recall gain times the precision after including the whole group.
    """
    s, y = _as_scored(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        raise ValueError("aupr needs at least one positive")
    order = np.argsort(-s, kind="stable")
    s_sorted, y_sorted = s[order], y[order]
    ap = 0.0
    tp = fp = 0
    i = 0
    n = s.size
    while i < n:
        j = i
        while j < n and s_sorted[j] == s_sorted[i]:
            j += 1
        tp_here = int(y_sorted[i:j].sum())
        fp_here = (j - i) - tp_here
        tp += tp_here
        fp += fp_here
        if tp_here:
            ap += (tp_here / n_pos) * (tp / (tp + fp))
        i = j
    return ap


def metric_report(scores, labels) -> dict:
    """Summary dict: best-F1 (with threshold), AUC, AUPR, class counts."""
    s, y = _as_scored(scores, labels)
    f1, theta = best_f1_sweep(s, y)
    n_pos = int(y.sum())
    n_neg = int(y.size - n_pos)
    report = {"f1": f1, "threshold": theta, "n_pos": n_pos, "n_neg": n_neg}
    report["auc"] = roc_auc(s, y) if n_pos and n_neg else None
    report["aupr"] = aupr(s, y) if n_pos else None
    return report
