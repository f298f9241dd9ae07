"""Link-prediction sample generation and fine-tuning of pre-trained encoders.

Object-group samples: groups of up to ``l_m`` objects with no common
attribute in the input network, labeled by whether they gain one in the
target network. Pair samples: object-attribute pairs absent from the input,
labeled by presence in the target. Fine-tuning starts from pre-trained
parameters and updates all weights with binary cross-entropy through the
group head (single tower) or the pair head (twin towers).
"""

from __future__ import annotations

import csv
import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .context import SplitPair
from .model import Adam, Model, oa_loss, oo_loss
from .tokens import TokenBatch, Vocab, encode_single

logger = logging.getLogger(__name__)


class BudgetExceededError(RuntimeError):
    """Candidate enumeration would exceed the configured group budget."""


@dataclass
class LinkSamples:
    """Labeled candidates with a seeded train/test partition."""

    task: str  # "oo" | "oa"
    candidates: list[tuple[int, ...]]
    labels: np.ndarray
    train_idx: np.ndarray
    test_idx: np.ndarray

    def train(self) -> tuple[list[tuple[int, ...]], np.ndarray]:
        return [self.candidates[i] for i in self.train_idx], self.labels[self.train_idx]

    def test(self) -> tuple[list[tuple[int, ...]], np.ndarray]:
        return [self.candidates[i] for i in self.test_idx], self.labels[self.test_idx]


def _balance_and_split(
    candidates: list[tuple[int, ...]],
    labels: np.ndarray,
    task: str,
    seed: int,
    balance: bool,
    test_fraction: float,
) -> LinkSamples:
    rng = np.random.default_rng(seed)
    labels = np.asarray(labels, dtype=np.int64)
    keep = np.arange(len(candidates))
    if balance:
        pos = np.flatnonzero(labels == 1)
        neg = np.flatnonzero(labels == 0)
        if len(neg) > len(pos):
            neg = rng.choice(neg, size=len(pos), replace=False)
        elif len(pos) > len(neg):
            logger.warning(
                "%s: fewer negatives (%d) than positives (%d); keeping all",
                task, len(neg), len(pos),
            )
        keep = np.sort(np.concatenate([pos, neg]))
    cands = [candidates[i] for i in keep]
    labs = labels[keep]
    order = rng.permutation(len(cands))
    n_test = int(test_fraction * len(cands))
    return LinkSamples(
        task=task,
        candidates=cands,
        labels=labs,
        train_idx=np.sort(order[n_test:]),
        test_idx=np.sort(order[:n_test]),
    )


def gen_oo_samples(
    split: SplitPair,
    l_m: int = 2,
    seed: int = 0,
    balance: bool = True,
    test_fraction: float = 0.2,
    max_groups: int = 2_000_000,
) -> LinkSamples:
    """Object groups without common attributes in the input network.

    Enumerates all groups of size 2..l_m whose members share no input
    attribute; the label records whether they share one in the target.
    Raises :class:`BudgetExceededError` when the subset count would explode.
    """
    if l_m < 2:
        raise ValueError("l_m must be >= 2")
    inp, tgt = split.input_ctx, split.target_ctx
    if inp.n_objects != tgt.n_objects:
        raise ValueError("input and target must share the object id space")
    n = inp.n_objects
    total = sum(_comb(n, r) for r in range(2, l_m + 1))
    if total > max_groups:
        raise BudgetExceededError(
            f"{total} candidate groups for |U|={n}, l_m={l_m} exceeds budget {max_groups}"
        )

    a_in = inp.incidence().astype(bool)
    a_tgt = tgt.incidence().astype(bool)
    candidates: list[tuple[int, ...]] = []
    labels: list[int] = []

    linked_in = (a_in.astype(np.int32) @ a_in.astype(np.int32).T) > 0
    linked_tgt = (a_tgt.astype(np.int32) @ a_tgt.astype(np.int32).T) > 0
    for i in range(n):
        for j in range(i + 1, n):
            if linked_in[i, j]:
                continue
            candidates.append((i, j))
            labels.append(int(linked_tgt[i, j]))
    for r in range(3, l_m + 1):
        for group in itertools.combinations(range(n), r):
            rows_in = a_in[list(group)]
            if rows_in.all(axis=0).any():
                continue
            candidates.append(group)
            labels.append(int(a_tgt[list(group)].all(axis=0).any()))

    return _balance_and_split(candidates, np.array(labels), "oo", seed, balance, test_fraction)


def _comb(n: int, r: int) -> int:
    import math

    return math.comb(n, r)


def gen_oa_samples(
    split: SplitPair,
    seed: int = 0,
    balance: bool = True,
    test_fraction: float = 0.2,
) -> LinkSamples:
    """Object-attribute pairs absent from the input network.

    Candidates range over the input's (possibly pruned) attribute space;
    labels look the pair up in the target through the split's attribute map.
    """
    inp, tgt = split.input_ctx, split.target_ctx
    a_in = inp.incidence().astype(bool)
    a_tgt = tgt.incidence().astype(bool)
    candidates: list[tuple[int, int]] = []
    labels: list[int] = []
    for u in range(inp.n_objects):
        for v in range(inp.n_attributes):
            if a_in[u, v]:
                continue
            vt = split.input_attr_to_target(v)
            candidates.append((u, v))
            labels.append(int(a_tgt[u, vt]))
    return _balance_and_split(candidates, np.array(labels), "oa", seed, balance, test_fraction)


def assert_no_input_links(samples: LinkSamples, split: SplitPair) -> None:
    """Scan check of the task precondition: no candidate is linked in input."""
    a_in = split.input_ctx.incidence().astype(bool)
    for cand in samples.candidates:
        if samples.task == "oa":
            u, v = cand
            if a_in[u, v]:
                raise AssertionError(f"candidate {cand} is an input edge")
        else:
            if a_in[list(cand)].all(axis=0).any():
                raise AssertionError(f"group {cand} has an input common attribute")


# ------------------------------------------------------------------ encoding


def encode_groups(vocab: Vocab, groups: Sequence[tuple[int, ...]], width: int) -> TokenBatch:
    return TokenBatch.stack([encode_single(vocab, g, width, name=str(g)) for g in groups])


def group_width(groups: Sequence[tuple[int, ...]]) -> int:
    return max((len(g) for g in groups), default=1) + 2


# ---------------------------------------------------------------- fine-tuning


def clone_model(model: Model) -> Model:
    return Model(model.config, dtype=model.dtype, params={k: v.copy() for k, v in model.params.items()})


def finetune_oo(
    pretrained: Model,
    vocab: Vocab,
    samples: LinkSamples,
    epochs: int = 30,
    batch_size: int = 32,
    lr: float = 1e-3,
    seed: int = 0,
) -> tuple[Model, list[dict]]:
    """Fine-tune one encoder for group-link prediction (all weights update)."""
    if pretrained.config.vocab_size != vocab.size:
        raise ValueError(
            f"checkpoint vocab size {pretrained.config.vocab_size} != context vocab {vocab.size}"
        )
    groups, labels = samples.train()
    if not groups:
        raise ValueError("no training samples")
    model = clone_model(pretrained)
    width = group_width(samples.candidates)
    batch_all = encode_groups(vocab, groups, width)
    rng = np.random.default_rng(seed)
    opt = Adam(model.params, lr=lr)
    history = []
    n = len(groups)
    for epoch in range(epochs):
        order = rng.permutation(n)
        total = 0.0
        n_batches = 0
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            loss, _, grads = oo_loss(model, batch_all.take(idx), labels[idx], train=True, rng=rng)
            opt.step(model.params, grads)
            total += loss
            n_batches += 1
        history.append({"epoch": epoch, "loss": total / n_batches})
    return model, history


def finetune_oa(
    obj_pretrained: Model,
    attr_pretrained: Model,
    obj_vocab: Vocab,
    attr_vocab: Vocab,
    samples: LinkSamples,
    epochs: int = 30,
    batch_size: int = 32,
    lr: float = 1e-3,
    seed: int = 0,
) -> tuple[Model, Model, list[dict]]:
    """Fine-tune the twin towers for pair-link prediction.

    The object token runs through tower 1 and the attribute token through
    tower 2; the pair head on the concatenated [CLS] states lives in tower 1.
    """
    if obj_pretrained.config.vocab_size != obj_vocab.size:
        raise ValueError("object checkpoint vocab mismatch")
    if attr_pretrained.config.vocab_size != attr_vocab.size:
        raise ValueError("attribute checkpoint vocab mismatch")
    pairs, labels = samples.train()
    if not pairs:
        raise ValueError("no training samples")
    m_obj = clone_model(obj_pretrained)
    m_attr = clone_model(attr_pretrained)
    batch_u = encode_groups(obj_vocab, [(u,) for u, _ in pairs], 3)
    batch_v = encode_groups(attr_vocab, [(v,) for _, v in pairs], 3)
    rng = np.random.default_rng(seed)
    opt_obj = Adam(m_obj.params, lr=lr)
    opt_attr = Adam(m_attr.params, lr=lr)
    history = []
    n = len(pairs)
    for epoch in range(epochs):
        order = rng.permutation(n)
        total = 0.0
        n_batches = 0
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            loss, _, g_obj, g_attr = oa_loss(
                m_obj, m_attr, batch_u.take(idx), batch_v.take(idx), labels[idx],
                train=True, rng=rng,
            )
            opt_obj.step(m_obj.params, g_obj)
            opt_attr.step(m_attr.params, g_attr)
            total += loss
            n_batches += 1
        history.append({"epoch": epoch, "loss": total / n_batches})
    return m_obj, m_attr, history


# ----------------------------------------------------------------- prediction


@dataclass
class PredictionReport:
    """Scored candidates sorted by descending score (ties by candidate)."""

    task: str
    candidates: list[tuple[int, ...]]
    scores: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        order = sorted(
            range(len(self.candidates)),
            key=lambda i: (-float(self.scores[i]), self.candidates[i]),
        )
        self.candidates = [self.candidates[i] for i in order]
        self.scores = np.asarray(self.scores, dtype=np.float64)[order]
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)[order]

    def __len__(self) -> int:
        return len(self.candidates)

    def to_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["candidate", "score", "label"])
            for i, cand in enumerate(self.candidates):
                label = "" if self.labels is None else int(self.labels[i])
                writer.writerow(["|".join(str(x) for x in cand), repr(float(self.scores[i])), label])

    @classmethod
    def from_csv(cls, path: str | Path, task: str = "") -> "PredictionReport":
        candidates, scores, labels = [], [], []
        has_labels = True
        with Path(path).open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            next(reader)  # header
            for row in reader:
                candidates.append(tuple(int(x) for x in row[0].split("|")))
                scores.append(float(row[1]))
                if row[2] == "":
                    has_labels = False
                else:
                    labels.append(int(row[2]))
        return cls(
            task=task,
            candidates=candidates,
            scores=np.array(scores),
            labels=np.array(labels) if has_labels and labels else None,
        )


def predict_oo(
    model: Model,
    vocab: Vocab,
    groups: Sequence[tuple[int, ...]],
    labels: Optional[np.ndarray] = None,
    eval_batch_size: int = 256,
) -> PredictionReport:
    if not groups:
        return PredictionReport(task="oo", candidates=[], scores=np.zeros(0), labels=None)
    width = group_width(groups)
    batch = encode_groups(vocab, groups, width)
    scores = []
    for start in range(0, len(batch), eval_batch_size):
        idx = np.arange(start, min(start + eval_batch_size, len(batch)))
        hidden, _ = model.forward(batch.take(idx))
        scores.append(model.oo_head(hidden))
    return PredictionReport(
        task="oo", candidates=list(groups), scores=np.concatenate(scores), labels=labels
    )


def predict_oa(
    obj_model: Model,
    attr_model: Model,
    obj_vocab: Vocab,
    attr_vocab: Vocab,
    pairs: Sequence[tuple[int, int]],
    labels: Optional[np.ndarray] = None,
    eval_batch_size: int = 256,
) -> PredictionReport:
    if not pairs:
        return PredictionReport(task="oa", candidates=[], scores=np.zeros(0), labels=None)
    batch_u = encode_groups(obj_vocab, [(u,) for u, _ in pairs], 3)
    batch_v = encode_groups(attr_vocab, [(v,) for _, v in pairs], 3)
    scores = []
    for start in range(0, len(batch_u), eval_batch_size):
        idx = np.arange(start, min(start + eval_batch_size, len(batch_u)))
        h1, _ = obj_model.forward(batch_u.take(idx))
        h2, _ = attr_model.forward(batch_v.take(idx))
        scores.append(obj_model.oa_head(h1, h2))
    return PredictionReport(
        task="oa", candidates=list(pairs), scores=np.concatenate(scores), labels=labels
    )
