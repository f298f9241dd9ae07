"""Independent brute-force reference implementations used by the tests.

These deliberately avoid the library's own algorithms: concept enumeration
tests every object subset for the closure fixpoint, the cover oracle is a
cubic reachability check, and the metric oracles are quadratic pair counts.
"""

from __future__ import annotations

import itertools

import numpy as np


def brute_force_concepts(incidence: np.ndarray) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (extent, intent) pairs by testing every object subset."""
    inc = np.asarray(incidence, dtype=bool)
    n_u, n_v = inc.shape
    concepts = set()
    for r in range(n_u + 1):
        for subset in itertools.combinations(range(n_u), r):
            if subset:
                intent = np.flatnonzero(inc[list(subset)].all(axis=0))
            else:
                intent = np.arange(n_v)
            if intent.size:
                extent = np.flatnonzero(inc[:, intent].all(axis=1))
            else:
                extent = np.arange(n_u)
            if tuple(extent) == subset:
                concepts.add((tuple(int(x) for x in extent), tuple(int(x) for x in intent)))
    return concepts


def transitive_reduction_oracle(extents: list[tuple[int, ...]]) -> set[tuple[int, int]]:
    """Cover pairs by cubic elimination: (i, j) minus any two-step path."""
    n = len(extents)
    sets = [frozenset(e) for e in extents]
    less = [[sets[i] < sets[j] for j in range(n)] for i in range(n)]
    covers = set()
    for i in range(n):
        for j in range(n):
            if not less[i][j]:
                continue
            if any(less[i][k] and less[k][j] for k in range(n)):
                continue
            covers.add((i, j))
    return covers


def subset_dp_concept_count(incidence: np.ndarray) -> int:
    """Concept count via subset-lattice dynamic programming (n_objects <= 20).

    intent[S] is built by stripping the highest object bit; a subset is a
    closed extent exactly when extent[intent[S]] == S.
    """
    inc = np.asarray(incidence, dtype=bool)
    n_u, n_v = inc.shape
    if n_u > 20 or n_v > 25:
        raise ValueError("DP oracle limited to small contexts")
    rows = np.array([int("".join("1" if inc[i, j] else "0" for j in reversed(range(n_v))), 2)
                     for i in range(n_u)], dtype=np.int64)
    cols = np.array([int("".join("1" if inc[i, j] else "0" for i in reversed(range(n_u))), 2)
                     for j in range(n_v)], dtype=np.int64)
    full_v = (1 << n_v) - 1
    full_u = (1 << n_u) - 1
    intent = np.zeros(1 << n_u, dtype=np.int64)
    intent[0] = full_v
    for h in range(n_u):
        size = 1 << h
        intent[size : 2 * size] = intent[:size] & rows[h]
    extent = np.zeros(1 << n_v, dtype=np.int64)
    extent[0] = full_u
    for h in range(n_v):
        size = 1 << h
        extent[size : 2 * size] = extent[:size] & cols[h]
    return int(np.count_nonzero(extent[intent] == np.arange(1 << n_u)))


def pairwise_auc_oracle(scores, labels) -> float:
    """Concordance probability by explicit O(n^2) pair counting."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    num2 = 0
    for p in pos:
        for q in neg:
            if p > q:
                num2 += 2
            elif p == q:
                num2 += 1
    return num2 / (2 * len(pos) * len(neg))


def f1_sweep_oracle(scores, labels) -> tuple[float, float]:
    """Literal 20-threshold sweep with by-hand confusion counts."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    best_f1, best_theta = 0.0, 0.0
    for k in range(20):
        theta = round(0.05 * k, 2)
        tp = fp = fn = 0
        for s, y in zip(scores, labels):
            pred = 1 if s > theta else 0
            if pred == 1 and y == 1:
                tp += 1
            elif pred == 1 and y == 0:
                fp += 1
            elif pred == 0 and y == 1:
                fn += 1
        if tp == 0:
            f1 = 0.0
        else:
            prec = tp / (tp + fp)
            rec = tp / (tp + fn)
            f1 = 2 * prec * rec / (prec + rec)
        if f1 > best_f1:
            best_f1, best_theta = f1, theta
    return best_f1, best_theta


def average_precision_oracle(scores, labels) -> float:
    """Step-wise AP over unique thresholds, descending."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_pos = int(np.sum(labels == 1))
    thresholds = sorted(set(scores.tolist()), reverse=True)
    ap = 0.0
    prev_recall = 0.0
    for t in thresholds:
        picked = scores >= t
        tp = int(np.sum(labels[picked] == 1))
        precision = tp / int(np.sum(picked))
        recall = tp / n_pos
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    return ap
