"""Pre-training sets and the joint masked-token / neighbor-pair loop.

A pre-training sample is an encoded concept pair: extents for the object
model, intents for the attribute model. Positives are lattice cover pairs;
negatives come from the seeded non-neighbor sampler, class-balanced. Each
unordered pair is presented in both orders. Holdout happens at the pair
level, so no held-out pair ever appears in training in either order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .fca import ConceptLattice, neighbor_pairs
from .metrics import metric_report
from .model import Adam, EncoderConfig, Model, joint_pretrain_loss, save_checkpoint
from .tokens import TokenBatch, Vocab, apply_mtp_mask, default_max_len, encode_pair

logger = logging.getLogger(__name__)


@dataclass
class PretrainSet:
    """Encoded, masked training samples plus the unmasked held-out split."""

    side: str
    max_len: int
    train: TokenBatch
    train_labels: np.ndarray
    heldout: Optional[TokenBatch]
    heldout_labels: Optional[np.ndarray]
    n_pairs_train: int
    n_pairs_heldout: int
    n_skipped: int = 0


def _concept_sets(lattice: ConceptLattice, side: str) -> list[tuple[int, ...]]:
    if side == "object":
        return [c.extent for c in lattice.concepts]
    if side == "attribute":
        return [c.intent for c in lattice.concepts]
    raise ValueError(f"side must be 'object' or 'attribute', got {side!r}")


def build_pretrain_set(
    lattice: ConceptLattice,
    side: str,
    vocab: Vocab,
    mask_rate: float = 0.15,
    seed: int = 0,
    holdout_fraction: float = 0.0,
    max_len_cap: int = 128,
) -> PretrainSet:
    """Class-balanced neighbor/non-neighbor pairs, encoded and masked.

    Pairs are split into train and holdout before orientation augmentation;
    training samples are masked for the token-prediction task while held-out
    samples stay unmasked (they only serve neighbor-pair evaluation). Pairs
    whose two sets exceed the padded width are skipped and counted.
    """
    if len(lattice.concepts) < 2:
        raise ValueError("pre-training needs a lattice with at least 2 concepts")
    sets = _concept_sets(lattice, side)
    positives, negatives = neighbor_pairs(lattice, seed)
    pairs = [(i, j, 1) for i, j in positives] + [(i, j, 0) for i, j in negatives]

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(pairs))
    n_hold = int(holdout_fraction * len(pairs))
    hold_idx = set(order[:n_hold].tolist())

    longest = max((len(s) for s in sets), default=0)
    max_len = default_max_len(longest, cap=max_len_cap)

    train_seqs, train_labels = [], []
    hold_seqs, hold_labels = [], []
    n_skipped = 0
    n_pairs_train = n_pairs_heldout = 0
    for idx, (i, j, label) in enumerate(pairs):
        try:
            fwd = encode_pair(vocab, sets[i], sets[j], max_len, name=f"concepts {i}+{j}")
            rev = encode_pair(vocab, sets[j], sets[i], max_len, name=f"concepts {j}+{i}")
        except Exception:
            n_skipped += 1
            continue
        if idx in hold_idx:
            hold_seqs += [fwd, rev]
            hold_labels += [label, label]
            n_pairs_heldout += 1
        else:
            train_seqs.append(apply_mtp_mask(fwd, vocab, mask_rate, rng))
            train_seqs.append(apply_mtp_mask(rev, vocab, mask_rate, rng))
            train_labels += [label, label]
            n_pairs_train += 1
    if n_skipped:
        logger.warning("skipped %d concept pair(s) exceeding max_len %d", n_skipped, max_len)
    if not train_seqs:
        raise ValueError("no training samples; all pairs skipped or held out")

    return PretrainSet(
        side=side,
        max_len=max_len,
        train=TokenBatch.stack(train_seqs),
        train_labels=np.array(train_labels, dtype=np.int64),
        heldout=TokenBatch.stack(hold_seqs) if hold_seqs else None,
        heldout_labels=np.array(hold_labels, dtype=np.int64) if hold_labels else None,
        n_pairs_train=n_pairs_train,
        n_pairs_heldout=n_pairs_heldout,
        n_skipped=n_skipped,
    )


def _param_snapshot(model: Model) -> dict[str, np.ndarray]:
    return {k: v.copy() for k, v in model.params.items()}


def run_pretrain(
    config: EncoderConfig,
    pset: PretrainSet,
    epochs: int = 50,
    batch_size: int = 32,
    lr: float = 1e-3,
    checkpoint_path: Optional[str | Path] = None,
    curve_path: Optional[str | Path] = None,
    eval_heldout_each_epoch: bool = False,
    checkpoint_meta: Optional[dict] = None,
) -> tuple[Model, list[dict]]:
    """Train both pre-training tasks jointly; loss is their sum.

    Writes a checkpoint after every epoch when a path is given and persists
    the loss curve as ``epoch,mtp_loss,ncp_loss,joint`` CSV. A non-finite
    loss aborts training and restores the last finite epoch's parameters.
    """
    if len(pset.train) == 0:
        raise ValueError("empty sample set")
    model = Model(config)
    rng = np.random.default_rng(config.seed)
    opt = Adam(model.params, lr=lr)
    history: list[dict] = []
    last_good = _param_snapshot(model)
    n = len(pset.train)

    for epoch in range(epochs):
        order = rng.permutation(n)
        mtp_sum = ncp_sum = 0.0
        n_batches = 0
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            batch = pset.train.take(idx)
            labels = pset.train_labels[idx]
            l_mtp, l_ncp, grads = joint_pretrain_loss(model, batch, labels, train=True, rng=rng)
            opt.step(model.params, grads)
            mtp_sum += l_mtp
            ncp_sum += l_ncp
            n_batches += 1
        entry = {
            "epoch": epoch,
            "mtp_loss": mtp_sum / n_batches,
            "ncp_loss": ncp_sum / n_batches,
        }
        entry["joint"] = entry["mtp_loss"] + entry["ncp_loss"]
        if not np.isfinite(entry["joint"]):
            logger.error("non-finite loss at epoch %d; restoring last good parameters", epoch)
            model.params = last_good
            entry["diverged"] = True
            history.append(entry)
            break
        last_good = _param_snapshot(model)
        if eval_heldout_each_epoch and pset.heldout is not None:
            entry["heldout"] = eval_ncp_heldout(model, pset.heldout, pset.heldout_labels)
        history.append(entry)
        if checkpoint_path is not None:
            save_checkpoint(checkpoint_path, model, extra_meta=checkpoint_meta)

    if curve_path is not None:
        lines = ["epoch,mtp_loss,ncp_loss,joint"]
        for e in history:
            lines.append(f"{e['epoch']},{e['mtp_loss']!r},{e['ncp_loss']!r},{e['joint']!r}")
        Path(curve_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return model, history


def ncp_scores(model: Model, batch: TokenBatch, eval_batch_size: int = 256) -> np.ndarray:
    """Neighbor-pair probabilities at eval (dropout off), batched."""
    out = []
    for start in range(0, len(batch), eval_batch_size):
        idx = np.arange(start, min(start + eval_batch_size, len(batch)))
        hidden, _ = model.forward(batch.take(idx))
        out.append(model.ncp_head(hidden))
    return np.concatenate(out) if out else np.zeros(0)


def eval_ncp_heldout(model: Model, batch: TokenBatch, labels: np.ndarray) -> dict:
    """F1-sweep/AUC/AUPR of the neighbor-pair head on held-out pairs."""
    if batch is None or len(batch) == 0:
        raise ValueError("held-out set is empty")
    scores = ncp_scores(model, batch)
    return metric_report(scores, labels)
