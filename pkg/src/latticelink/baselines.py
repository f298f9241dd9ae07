"""Reference predictors: common neighbors and ALS matrix factorization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import BipartiteContext


def common_neighbors_oo(ctx: BipartiteContext, u1: int, u2: int) -> int:
    """Number of attributes adjacent to both objects."""
    inc = ctx.incidence().astype(bool)
    return int(np.sum(inc[u1] & inc[u2]))


def common_neighbors_oa(ctx: BipartiteContext, u: int, v: int) -> int:
    """Projection overlap: members of the attribute sharing >=1 attribute with u.

    The two-hop analogue of common neighbors for pairs on opposite sides:
    counts objects linked to ``v`` that co-occur with ``u`` somewhere.
    """
    inc = ctx.incidence().astype(bool)
    members = np.flatnonzero(inc[:, v])
    if members.size == 0:
        return 0
    overlap = inc[members] & inc[u]
    return int(np.sum(overlap.any(axis=1)))


def score_pairs_oo(ctx: BipartiteContext, pairs) -> np.ndarray:
    inc = ctx.incidence().astype(np.int64)
    co = inc @ inc.T
    return np.array([co[u1, u2] for u1, u2 in pairs], dtype=np.float64)


def score_pairs_oa(ctx: BipartiteContext, pairs) -> np.ndarray:
    inc = ctx.incidence().astype(bool)
    co_obj = (inc.astype(np.int64) @ inc.astype(np.int64).T) > 0
    scores = []
    for u, v in pairs:
        members = np.flatnonzero(inc[:, v])
        scores.append(int(co_obj[u, members].sum()) if members.size else 0)
    return np.array(scores, dtype=np.float64)


@dataclass
class FactorModel:
    """Low-rank factors fitted to the 0/1 incidence matrix."""

    object_factors: np.ndarray  # (n_objects, k)
    attribute_factors: np.ndarray  # (n_attributes, k)
    rank: int
    regularization: float
    losses: list[float]


def train_mf(
    ctx: BipartiteContext,
    k: int = 32,
    lam: float = 0.1,
    epochs: int = 20,
    seed: int = 0,
) -> FactorModel:
    """Alternating least squares on the dense 0/1 incidence matrix.

    Each sweep solves both ridge-regularized least-squares subproblems in
    closed form, so the regularized loss is non-increasing per sweep.
    """
    if k < 1:
        raise ValueError("rank k must be >= 1")
    if k > min(ctx.n_objects, ctx.n_attributes):
        raise ValueError("rank k exceeds min(n_objects, n_attributes)")
    r = ctx.incidence().astype(np.float64)
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((ctx.n_objects, k)) * 0.1
    v = rng.standard_normal((ctx.n_attributes, k)) * 0.1
    eye = np.eye(k)
    losses = []
    for _ in range(epochs):
        u = np.linalg.solve(v.T @ v + lam * eye, v.T @ r.T).T
        v = np.linalg.solve(u.T @ u + lam * eye, u.T @ r).T
        resid = r - u @ v.T
        loss = float(np.sum(resid * resid) + lam * (np.sum(u * u) + np.sum(v * v)))
        if not np.isfinite(loss):
            raise RuntimeError("ALS diverged to a non-finite loss")
        losses.append(loss)
    return FactorModel(object_factors=u, attribute_factors=v, rank=k,
                       regularization=lam, losses=losses)


def score_mf(model: FactorModel, u: int, v: int) -> float:
    return float(model.object_factors[u] @ model.attribute_factors[v])


def score_pairs_mf(model: FactorModel, pairs) -> np.ndarray:
    return np.array([score_mf(model, u, v) for u, v in pairs], dtype=np.float64)


def reconstruction_rmse(model: FactorModel, ctx: BipartiteContext) -> float:
    r = ctx.incidence().astype(np.float64)
    resid = r - model.object_factors @ model.attribute_factors.T
    return float(np.sqrt(np.mean(resid * resid)))
