"""Concept enumeration and lattice cover extraction over bitset contexts.

Concepts (equivalently, maximal bi-cliques) are enumerated with a
Close-by-One search over machine-word bitsets: object rows are packed into
uint64 words so closure and subset tests are word-parallel numpy operations.
Any complete enumerator yields the same concept set; correctness is pinned by
brute-force closure oracles in the test suite, not by algorithm identity.

The cover (neighboring) relation is the transitive reduction of the strict
extent order: exactly the pairs with no concept strictly between them.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .context import BipartiteContext

logger = logging.getLogger(__name__)


class ConceptBudgetError(RuntimeError):
    """Concept count exceeded the configured budget.

    Carries the partially enumerated concepts so a caller can inspect or
    resume from them.
    """

    def __init__(self, budget: int, partial: list["FormalConcept"]):
        super().__init__(
            f"concept budget {budget} exceeded; {len(partial)} concepts enumerated so far"
        )
        self.budget = budget
        self.partial_count = len(partial)
        self.partial_concepts = partial


def pack_rows(matrix: np.ndarray) -> np.ndarray:
    """Pack a boolean (n, m) matrix into (n, ceil(m/64)) uint64 rows."""
    n, m = matrix.shape
    width = (m + 63) // 64
    packed = np.zeros((n, width), dtype=np.uint64)
    if m == 0:
        return packed
    bits = np.packbits(matrix.astype(np.uint8), axis=1, bitorder="little")
    pad = width * 8 - bits.shape[1]
    if pad:
        bits = np.pad(bits, ((0, 0), (0, pad)))
    return bits.view(np.uint64).reshape(n, width)


def bitset_to_ids(bits: np.ndarray, n: int) -> np.ndarray:
    """Unpack one uint64 bitset row to sorted member ids."""
    bytes_ = bits.view(np.uint8)
    flat = np.unpackbits(bytes_, bitorder="little")[:n]
    return np.flatnonzero(flat)


def ids_to_bitset(ids: Sequence[int], n: int) -> np.ndarray:
    width = (n + 63) // 64
    flat = np.zeros(width * 64, dtype=np.uint8)
    flat[np.asarray(ids, dtype=np.int64)] = 1
    return np.packbits(flat, bitorder="little").view(np.uint64)


@dataclass(frozen=True)
class FormalConcept:
    """A closed (extent, intent) pair; both id arrays are sorted ascending."""

    id: int
    extent: tuple[int, ...]
    intent: tuple[int, ...]


@dataclass
class ConceptLattice:
    """All concepts of a context in canonical order, plus the cover relation.

    Canonical order is (extent size, lexicographic extent); ``covers`` holds
    ``(lower_id, upper_id)`` pairs with ``extent(lower) ⊂ extent(upper)``.
    """

    concepts: list[FormalConcept]
    n_objects: int
    n_attributes: int
    covers: Optional[set[tuple[int, int]]] = None

    def __len__(self) -> int:
        return len(self.concepts)

    @property
    def bottom_id(self) -> int:
        return 0

    @property
    def top_id(self) -> int:
        return len(self.concepts) - 1

    def extent_bitsets(self) -> np.ndarray:
        rows = np.zeros((len(self.concepts), self.n_objects), dtype=np.uint8)
        for c in self.concepts:
            rows[c.id, list(c.extent)] = 1
        return pack_rows(rows)


def _check_ids(ids: Iterable[int], limit: int, kind: str) -> np.ndarray:
    arr = np.asarray(sorted(set(int(i) for i in ids)), dtype=np.int64)
    if arr.size and (arr[0] < 0 or arr[-1] >= limit):
        raise ValueError(f"{kind} id out of range 0..{limit - 1}")
    return arr


def derive_attrs(ctx: BipartiteContext, objects: Iterable[int]) -> tuple[int, ...]:
    """Attributes shared by every object in the set (all of them if empty)."""
    ids = _check_ids(objects, ctx.n_objects, "object")
    inc = ctx.incidence()
    if ids.size == 0:
        return tuple(range(ctx.n_attributes))
    shared = inc[ids].all(axis=0)
    return tuple(int(v) for v in np.flatnonzero(shared))


def derive_objects(ctx: BipartiteContext, attributes: Iterable[int]) -> tuple[int, ...]:
    """Objects having every attribute in the set (all of them if empty)."""
    ids = _check_ids(attributes, ctx.n_attributes, "attribute")
    inc = ctx.incidence()
    if ids.size == 0:
        return tuple(range(ctx.n_objects))
    having = inc[:, ids].all(axis=1)
    return tuple(int(u) for u in np.flatnonzero(having))


def enumerate_concepts(
    ctx: BipartiteContext, max_concepts: Optional[int] = 2_000_000
) -> ConceptLattice:
    """Enumerate every formal concept of the context (covers not yet filled).

    Close-by-One over closed extents with a canonicity test: from each closed
    extent try appending one object at a time and keep the closure only when
    it introduces no object below the appended one. Each concept is reached
    exactly once, so the result is the complete set.
    """
    n_u, n_v = ctx.n_objects, ctx.n_attributes
    inc = ctx.incidence().astype(bool)
    obj_rows = pack_rows(inc)  # (n_u, Wv)
    full_intent = pack_rows(np.ones((1, n_v), dtype=bool))[0]

    found: list[tuple[np.ndarray, np.ndarray]] = []  # (extent bool mask, intent bits)

    def record(extent_mask: np.ndarray, intent_bits: np.ndarray) -> None:
        found.append((extent_mask, intent_bits))
        if max_concepts is not None and len(found) > max_concepts:
            raise ConceptBudgetError(max_concepts, _canonical_concepts(found, obj_rows, n_v))

    # bottom concept: objects having every attribute
    bottom_mask = ((obj_rows & full_intent) == full_intent).all(axis=1) if n_u else np.zeros(0, dtype=bool)
    record(bottom_mask, full_intent)

    # stack entries: (extent mask, intent bits, next object to try)
    stack: list[tuple[np.ndarray, np.ndarray, int]] = [(bottom_mask, full_intent, 0)]
    while stack:
        extent_mask, intent_bits, start = stack.pop()
        for g in range(start, n_u):
            if extent_mask[g]:
                continue
            new_intent = intent_bits & obj_rows[g]
            if not new_intent.any():
                # closure is the full object set; canonical only if every
                # object below g is already in the extent
                if not extent_mask[:g].all():
                    continue
                new_mask = np.ones(n_u, dtype=bool)
            else:
                new_mask = ((obj_rows & new_intent) == new_intent).all(axis=1)
                if new_mask[:g].sum() != extent_mask[:g].sum():
                    continue  # not canonical: closure adds an object below g
            record(new_mask, new_intent)
            stack.append((new_mask, new_intent, g + 1))

    concepts = _canonical_concepts(found, obj_rows, n_v)
    return ConceptLattice(concepts=concepts, n_objects=n_u, n_attributes=n_v)


def _canonical_concepts(
    found: list[tuple[np.ndarray, np.ndarray]], obj_rows: np.ndarray, n_v: int
) -> list[FormalConcept]:
    keyed = []
    for extent_mask, intent_bits in found:
        extent = tuple(int(i) for i in np.flatnonzero(extent_mask))
        intent = tuple(int(i) for i in bitset_to_ids(intent_bits, n_v))
        keyed.append((len(extent), extent, intent))
    keyed.sort(key=lambda t: (t[0], t[1]))
    return [FormalConcept(id=i, extent=e, intent=b) for i, (_, e, b) in enumerate(keyed)]


def cover_relation(lattice: ConceptLattice) -> set[tuple[int, int]]:
    """All cover pairs: the transitive reduction of the strict extent order.

    For each concept the upper covers are the minimal elements among its
    strict supersets; collecting those over all concepts is exactly the
    reduction. Raises if two concepts share an extent (the input is then not
    a complete concept set).
    """
    concepts = lattice.concepts
    n = len(concepts)
    extents = [set(c.extent) for c in concepts]
    if len({c.extent for c in concepts}) != n:
        raise ValueError("duplicate extents: not a valid concept set")

    bits = lattice.extent_bitsets()
    sizes = np.array([len(c.extent) for c in concepts])
    covers: set[tuple[int, int]] = set()
    order = np.argsort(sizes, kind="stable")
    for i in order:
        ei = bits[i]
        # strict supersets of extent i
        sup = ((bits & ei) == ei).all(axis=1) & (sizes > sizes[i])
        sup_ids = np.flatnonzero(sup)
        sup_ids = sup_ids[np.argsort(sizes[sup_ids], kind="stable")]
        kept: list[int] = []
        for j in sup_ids:
            ej = bits[j]
            if any(((bits[k] & ej) == bits[k]).all() for k in kept):
                continue  # an accepted cover sits strictly below j
            kept.append(int(j))
            covers.add((int(i), int(j)))
    lattice.covers = covers
    return covers


def queue_lower_neighbors(lattice: ConceptLattice) -> dict[int, int]:
    """Single lower neighbor per concept via predecessor-count queue sweep.

    Optional mode: counts all strict predecessors per concept, repeatedly
    pops zero-count concepts and assigns the popping concept as the lower
    neighbor of each successor it releases. Each concept therefore records
    only the last such assignment, one lower neighbor, whereas lattice
    elements generally have several; :func:`cover_relation` is the canonical
    output.
    """
    concepts = lattice.concepts
    n = len(concepts)
    bits = lattice.extent_bitsets()
    sizes = np.array([len(c.extent) for c in concepts])
    succ: list[list[int]] = [[] for _ in range(n)]
    depth = np.zeros(n, dtype=np.int64)
    for i in range(n):
        ei = bits[i]
        above = ((bits & ei) == ei).all(axis=1) & (sizes > sizes[i])
        for j in np.flatnonzero(above):
            succ[i].append(int(j))
            depth[j] += 1

    from collections import deque

    queue = deque(int(i) for i in range(n) if depth[i] == 0)
    lower: dict[int, int] = {}
    while queue:
        c = queue.popleft()
        for c1 in succ[c]:
            depth[c1] -= 1
            if depth[c1] == 0:
                lower[c1] = c
                queue.append(c1)
    return lower


def neighbor_pairs(
    lattice: ConceptLattice, seed: int
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Positive (cover) and sampled negative concept-id pairs, class-balanced.

    Positives are the unordered cover pairs. Negatives are unordered
    non-neighboring pairs drawn uniformly with a seeded PCG64 generator,
    as many as there are positives; if the lattice has fewer non-neighbor
    pairs than that, all of them are returned with a warning.
    """
    if lattice.covers is None:
        cover_relation(lattice)
    n = len(lattice.concepts)
    positives = sorted((min(a, b), max(a, b)) for a, b in lattice.covers)
    neighbor_set = set(positives)
    n_pos = len(positives)
    total_pairs = n * (n - 1) // 2
    n_available = total_pairs - n_pos

    rng = np.random.default_rng(seed)
    if n_available <= n_pos:
        logger.warning(
            "only %d non-neighbor pairs available for %d positives; using all",
            n_available,
            n_pos,
        )
        negatives = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if (i, j) not in neighbor_set
        ]
        return positives, negatives

    if total_pairs <= 500_000:
        pool = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if (i, j) not in neighbor_set
        ]
        picked = rng.choice(len(pool), size=n_pos, replace=False)
        return positives, sorted(pool[k] for k in picked)

    negatives_set: set[tuple[int, int]] = set()
    while len(negatives_set) < n_pos:
        need = n_pos - len(negatives_set)
        a = rng.integers(0, n, size=max(16, 2 * need))
        b = rng.integers(0, n, size=max(16, 2 * need))
        for i, j in zip(a.tolist(), b.tolist()):
            if i == j:
                continue
            pair = (min(i, j), max(i, j))
            if pair in neighbor_set or pair in negatives_set:
                continue
            negatives_set.add(pair)
            if len(negatives_set) == n_pos:
                break
    return positives, sorted(negatives_set)


def concepts_to_jsonl(lattice: ConceptLattice, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for c in lattice.concepts:
            fh.write(
                json.dumps(
                    {"id": c.id, "extent": list(c.extent), "intent": list(c.intent)},
                    sort_keys=True,
                )
                + "\n"
            )


def concepts_from_jsonl(path: str | Path, n_objects: int, n_attributes: int) -> ConceptLattice:
    concepts = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            concepts.append(
                FormalConcept(id=d["id"], extent=tuple(d["extent"]), intent=tuple(d["intent"]))
            )
    concepts.sort(key=lambda c: c.id)
    return ConceptLattice(concepts=concepts, n_objects=n_objects, n_attributes=n_attributes)


def covers_to_jsonl(covers: set[tuple[int, int]], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for lower, upper in sorted(covers):
            fh.write(json.dumps({"lower": lower, "upper": upper}, sort_keys=True) + "\n")


def covers_from_jsonl(path: str | Path) -> set[tuple[int, int]]:
    covers = set()
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            covers.add((d["lower"], d["upper"]))
    return covers
