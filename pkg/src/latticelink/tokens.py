"""Token vocabularies and padded, segmented, maskable input sequences.

Entity ids (objects or attributes, one vocabulary per side) map to token ids
offset past four fixed specials: [PAD]=0, [CLS]=1, [SEP]=2, [MASK]=3.
Sequences are laid out ``[CLS] s1 [SEP] s2 [SEP] [PAD]...`` with the members
of each set sorted ascending; the sets are unordered, so the canonical order
carries no information and only makes encoding deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

PAD, CLS, SEP, MASK = 0, 1, 2, 3
N_SPECIALS = 4
SPECIAL_NAMES = {"[PAD]": PAD, "[CLS]": CLS, "[SEP]": SEP, "[MASK]": MASK}
NO_LABEL = -1


class SequenceOverflowError(ValueError):
    """Entity sets do not fit in the configured sequence length."""


@dataclass(frozen=True)
class Vocab:
    """Bijection between one side's entity ids and token ids."""

    side: str  # "object" | "attribute"
    n_entities: int
    labels: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return self.n_entities + N_SPECIALS

    def token(self, entity: int) -> int:
        if not 0 <= entity < self.n_entities:
            raise ValueError(f"{self.side} id {entity} out of range")
        return entity + N_SPECIALS

    def entity(self, token: int) -> int:
        if token < N_SPECIALS or token >= self.size:
            raise ValueError(f"token {token} is not an entity token")
        return token - N_SPECIALS

    def to_json(self) -> str:
        mapping = dict(SPECIAL_NAMES)
        for e in range(self.n_entities):
            label = self.labels[e] if self.labels else str(e)
            mapping[label] = e + N_SPECIALS
        return json.dumps({"side": self.side, "tokens": mapping}, sort_keys=True)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_json(cls, text: str) -> "Vocab":
        d = json.loads(text)
        entities = {tok - N_SPECIALS: label for label, tok in d["tokens"].items() if tok >= N_SPECIALS}
        labels = tuple(entities[i] for i in range(len(entities)))
        return cls(side=d["side"], n_entities=len(labels), labels=labels)


@dataclass(frozen=True)
class TokenSequence:
    """One encoded input: ids, segment flags, attention mask, mask labels.

    All vectors share the padded length. ``mtp_labels`` is NO_LABEL except at
    positions selected for masked-token prediction, where it holds the
    original token id.
    """

    ids: np.ndarray
    segments: np.ndarray
    attention_mask: np.ndarray
    mtp_labels: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)


def vocab_for_side(n_entities: int, side: str, labels: Sequence[str] = ()) -> Vocab:
    return Vocab(side=side, n_entities=n_entities, labels=tuple(labels))


def default_max_len(longest_set: int, cap: int = 128) -> int:
    """Padded width for a pair of sets: twice the longest plus specials."""
    return min(2 * longest_set + 3, cap)


def encode_pair(
    vocab: Vocab, s1: Iterable[int], s2: Iterable[int], max_len: int, name: str = ""
) -> TokenSequence:
    """Encode two entity sets as ``[CLS] s1 [SEP] s2 [SEP] [PAD]...``.

    Segment flags are 0 through the first [SEP] inclusive and 1 after it.
    Raises :class:`SequenceOverflowError` when the payload does not fit;
    ``name`` identifies the offending concept pair in the message.
    """
    a = sorted(int(e) for e in set(s1))
    b = sorted(int(e) for e in set(s2))
    need = len(a) + len(b) + 3
    if need > max_len:
        what = name or f"sets of sizes {len(a)}+{len(b)}"
        raise SequenceOverflowError(f"{what}: needs {need} tokens, max_len is {max_len}")
    ids = np.full(max_len, PAD, dtype=np.int32)
    ids[0] = CLS
    pos = 1
    for e in a:
        ids[pos] = vocab.token(e)
        pos += 1
    first_sep = pos
    ids[pos] = SEP
    pos += 1
    for e in b:
        ids[pos] = vocab.token(e)
        pos += 1
    ids[pos] = SEP
    pos += 1
    segments = np.zeros(max_len, dtype=np.int8)
    segments[first_sep + 1 :] = 1
    attention = np.zeros(max_len, dtype=np.int8)
    attention[:pos] = 1
    labels = np.full(max_len, NO_LABEL, dtype=np.int32)
    return TokenSequence(ids=ids, segments=segments, attention_mask=attention, mtp_labels=labels)


def encode_single(vocab: Vocab, s: Iterable[int], max_len: int, name: str = "") -> TokenSequence:
    """Encode one entity set as ``[CLS] s [SEP] [PAD]...`` (segment 0)."""
    a = sorted(int(e) for e in set(s))
    need = len(a) + 2
    if need > max_len:
        what = name or f"set of size {len(a)}"
        raise SequenceOverflowError(f"{what}: needs {need} tokens, max_len is {max_len}")
    ids = np.full(max_len, PAD, dtype=np.int32)
    ids[0] = CLS
    pos = 1
    for e in a:
        ids[pos] = vocab.token(e)
        pos += 1
    first_sep = pos
    ids[pos] = SEP
    pos += 1
    segments = np.zeros(max_len, dtype=np.int8)
    segments[first_sep + 1 :] = 1
    attention = np.zeros(max_len, dtype=np.int8)
    attention[:pos] = 1
    labels = np.full(max_len, NO_LABEL, dtype=np.int32)
    return TokenSequence(ids=ids, segments=segments, attention_mask=attention, mtp_labels=labels)


def apply_mtp_mask(
    seq: TokenSequence, vocab: Vocab, mask_rate: float, rng: int | np.random.Generator
) -> TokenSequence:
    """Corrupt entity tokens for masked-token prediction, 80/10/10.

    Selects ``ceil(mask_rate * n_entity_tokens)`` entity positions (specials
    are never candidates). Each selected token becomes [MASK] with
    probability 0.8, a uniformly random entity token with 0.1, or stays
    unchanged with 0.1; ``mtp_labels`` records the original id at exactly the
    selected positions.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    if (seq.mtp_labels != NO_LABEL).any():
        raise ValueError("sequence is already masked")
    entity_pos = np.flatnonzero(seq.ids >= N_SPECIALS)
    n_select = math.ceil(mask_rate * len(entity_pos))
    ids = seq.ids.copy()
    labels = seq.mtp_labels.copy()
    if n_select == 0:
        return TokenSequence(ids, seq.segments.copy(), seq.attention_mask.copy(), labels)
    selected = rng.choice(entity_pos, size=n_select, replace=False)
    branch = rng.random(n_select)
    for pos, u in zip(selected.tolist(), branch.tolist()):
        labels[pos] = ids[pos]
        if u < 0.8:
            ids[pos] = MASK
        elif u < 0.9:
            ids[pos] = N_SPECIALS + int(rng.integers(0, vocab.n_entities))
        # else: keep unchanged
    return TokenSequence(ids, seq.segments.copy(), seq.attention_mask.copy(), labels)


def restore_masked(seq: TokenSequence) -> TokenSequence:
    """Undo masking by writing the recorded labels back over the ids."""
    ids = seq.ids.copy()
    sel = seq.mtp_labels != NO_LABEL
    ids[sel] = seq.mtp_labels[sel]
    labels = np.full(len(ids), NO_LABEL, dtype=np.int32)
    return TokenSequence(ids, seq.segments.copy(), seq.attention_mask.copy(), labels)


@dataclass(frozen=True)
class TokenBatch:
    """Row-stacked sequences: (batch, width) arrays for the encoder."""

    ids: np.ndarray
    segments: np.ndarray
    attention_mask: np.ndarray
    mtp_labels: np.ndarray

    def __len__(self) -> int:
        return self.ids.shape[0]

    def width(self) -> int:
        return self.ids.shape[1]

    @classmethod
    def stack(cls, seqs: Sequence[TokenSequence]) -> "TokenBatch":
        return cls(
            ids=np.stack([s.ids for s in seqs]),
            segments=np.stack([s.segments for s in seqs]),
            attention_mask=np.stack([s.attention_mask for s in seqs]),
            mtp_labels=np.stack([s.mtp_labels for s in seqs]),
        )

    def take(self, idx: np.ndarray) -> "TokenBatch":
        return TokenBatch(
            ids=self.ids[idx],
            segments=self.segments[idx],
            attention_mask=self.attention_mask[idx],
            mtp_labels=self.mtp_labels[idx],
        )

    def save(self, path: str | Path, **extra_arrays: np.ndarray) -> None:
        np.savez(path, ids=self.ids, segments=self.segments,
                 attention_mask=self.attention_mask, mtp_labels=self.mtp_labels,
                 **extra_arrays)

    @classmethod
    def load(cls, path: str | Path) -> tuple["TokenBatch", dict[str, np.ndarray]]:
        with np.load(path) as data:
            batch = cls(
                ids=data["ids"],
                segments=data["segments"],
                attention_mask=data["attention_mask"],
                mtp_labels=data["mtp_labels"],
            )
            extra = {k: data[k] for k in data.files
                     if k not in ("ids", "segments", "attention_mask", "mtp_labels")}
        return batch, extra
