"""Shared fixtures: canonical tiny contexts and planted-structure networks."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from latticelink.context import BipartiteContext, split_random_edges


@pytest.fixture
def identity3() -> BipartiteContext:
    """3x3 identity relation: five concepts, six covers."""
    return BipartiteContext(3, 3, np.array([[0, 0], [1, 1], [2, 2]]))


@pytest.fixture
def full22() -> BipartiteContext:
    """Full 2x2 relation: a single concept (G, M)."""
    return BipartiteContext(2, 2, np.array([[0, 0], [0, 1], [1, 0], [1, 1]]))


def random_context(rng: np.random.Generator, n_u: int, n_v: int, density: float) -> BipartiteContext:
    inc = rng.random((n_u, n_v)) < density
    edges = np.argwhere(inc)
    if len(edges) == 0:
        edges = np.zeros((0, 2), dtype=np.int64)
    return BipartiteContext(n_u, n_v, edges)


def planted_biclique_context(
    seed: int = 77,
    n_u: int = 40,
    n_v: int = 24,
    n_cliques: int = 8,
    noise: float = 0.05,
) -> BipartiteContext:
    """Bipartite network assembled from planted bi-cliques plus noise edges.

    Cliques span 5-8 objects and 1-3 attributes each, so a 10% edge removal
    leaves recoverable co-membership structure on both sides.
    """
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    for c in range(n_cliques):
        us = rng.choice(n_u, size=int(rng.integers(5, 9)), replace=False)
        vs = rng.choice(n_v, size=int(rng.integers(1, 4)), replace=False)
        for u in us:
            for v in vs:
                edges.add((int(u), int(v)))
    n_noise = round(noise * len(edges))
    while n_noise > 0:
        u, v = int(rng.integers(n_u)), int(rng.integers(n_v))
        if (u, v) not in edges:
            edges.add((u, v))
            n_noise -= 1
    return BipartiteContext(n_u, n_v, np.array(sorted(edges)))


def planted_split(seed: int = 77, **kwargs):
    ctx = planted_biclique_context(seed=seed, **kwargs)
    return split_random_edges(ctx, 0.1, seed=seed + 1)
