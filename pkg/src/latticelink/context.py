"""Bipartite networks as formal contexts: loading, validation, splitting.

A bipartite network (two disjoint node sets plus edges between them) and a
formal context (objects, attributes, incidence) are the same structure; this
module houses that shared data model. Node labels from edge-list files are
interned to dense integer ids in first-appearance order, objects and
attributes separately, so the two id spaces never collide.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

_FORMAT_DELIMS = {"csv": ",", "tsv": "\t"}


class EdgeListParseError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class BipartiteContext:
    """Immutable bipartite network / formal context over dense integer ids.

    Objects are ids ``0..n_objects-1`` and attributes ``0..n_attributes-1``;
    the two ranges are separate id spaces. ``edges`` is a sorted, duplicate-free
    (n_edges, 2) array of ``(object_id, attribute_id)`` pairs. ``dates`` (when
    present) gives one UTC date per edge, aligned with ``edges``.
    """

    n_objects: int
    n_attributes: int
    edges: np.ndarray
    dates: Optional[np.ndarray] = None
    object_labels: tuple[str, ...] = field(default=())
    attribute_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            if self.dates is not None:
                object.__setattr__(self, "dates", np.asarray(self.dates)[order])
        object.__setattr__(self, "edges", edges)
        self.validate()

    def validate(self) -> None:
        e = self.edges
        if e.size == 0:
            return
        if e[:, 0].min() < 0 or e[:, 0].max() >= self.n_objects:
            raise ValueError("edge references an object id outside 0..n_objects-1")
        if e[:, 1].min() < 0 or e[:, 1].max() >= self.n_attributes:
            raise ValueError("edge references an attribute id outside 0..n_attributes-1")
        if len(np.unique(e, axis=0)) != len(e):
            raise ValueError("duplicate edges")
        if self.dates is not None and len(self.dates) != len(e):
            raise ValueError("dates must align with edges")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def incidence(self) -> np.ndarray:
        """Dense 0/1 incidence matrix, shape (n_objects, n_attributes)."""
        m = np.zeros((self.n_objects, self.n_attributes), dtype=np.uint8)
        if self.n_edges:
            m[self.edges[:, 0], self.edges[:, 1]] = 1
        return m

    def object_label(self, u: int) -> str:
        return self.object_labels[u] if self.object_labels else str(u)

    def attribute_label(self, v: int) -> str:
        return self.attribute_labels[v] if self.attribute_labels else str(v)


@dataclass(frozen=True)
class SplitPair:
    """An observed (input) network and the target network it predicts into.

    Both contexts share one object id space. The input's attribute ids may be
    a re-interned subset of the target's after isolated-attribute pruning;
    ``attr_map[j]`` gives the target attribute id of input attribute ``j``.
    """

    input_ctx: BipartiteContext
    target_ctx: BipartiteContext
    split_kind: str  # "temporal" | "random-removal"
    seed: Optional[int] = None
    cutoff: Optional[_dt.date] = None
    attr_map: Optional[np.ndarray] = None

    def input_attr_to_target(self, j: int) -> int:
        if self.attr_map is None:
            return j
        return int(self.attr_map[j])


def _parse_date(text: str, line_no: int) -> _dt.date:
    try:
        return _dt.date.fromisoformat(text.strip())
    except ValueError as exc:
        raise EdgeListParseError(f"bad ISO-8601 date {text!r}", line_no) from exc


def load_edge_list(path: str | Path, format: str = "csv") -> BipartiteContext:
    """Read an ``object,attribute[,date]`` edge list into a context.

    Labels are interned to dense ids in first-appearance order. Duplicate rows
    are collapsed (a warning reports the count). Rows with the wrong number of
    fields or an unparsable date raise :class:`EdgeListParseError` with the
    offending line number. An empty file (no data rows) is an error.
    """
    if format not in _FORMAT_DELIMS:
        raise ValueError(f"unknown format {format!r}; expected csv or tsv")
    path = Path(path)
    obj_ids: dict[str, int] = {}
    attr_ids: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    dates: list[_dt.date] = []
    n_dup = 0
    has_dates: Optional[bool] = None

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=_FORMAT_DELIMS[format])
        for line_no, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if line_no == 1 and [c.strip().lower() for c in row[:2]] == ["object", "attribute"]:
                continue  # canonical header
            if len(row) not in (2, 3):
                raise EdgeListParseError(f"expected 2 or 3 fields, got {len(row)}", line_no)
            row_has_date = len(row) == 3
            if has_dates is None:
                has_dates = row_has_date
            elif has_dates != row_has_date:
                raise EdgeListParseError("mixed dated and undated rows", line_no)
            u = obj_ids.setdefault(row[0].strip(), len(obj_ids))
            v = attr_ids.setdefault(row[1].strip(), len(attr_ids))
            if (u, v) in seen:
                n_dup += 1
                continue
            seen.add((u, v))
            edges.append((u, v))
            if row_has_date:
                dates.append(_parse_date(row[2], line_no))

    if not edges:
        raise EdgeListParseError("no edge rows", 1)
    if n_dup:
        logger.warning("%s: collapsed %d duplicate edge row(s)", path.name, n_dup)

    return BipartiteContext(
        n_objects=len(obj_ids),
        n_attributes=len(attr_ids),
        edges=np.array(edges, dtype=np.int64),
        dates=np.array(dates, dtype=object) if has_dates else None,
        object_labels=tuple(obj_ids),
        attribute_labels=tuple(attr_ids),
    )


def write_edge_list(ctx: BipartiteContext, path: str | Path, format: str = "csv") -> None:
    """Write the context back out in canonical (sorted) edge order."""
    delim = _FORMAT_DELIMS[format]
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delim, lineterminator="\n")
        header = ["object", "attribute"] + (["date"] if ctx.dates is not None else [])
        writer.writerow(header)
        for i, (u, v) in enumerate(ctx.edges):
            row = [ctx.object_label(int(u)), ctx.attribute_label(int(v))]
            if ctx.dates is not None:
                row.append(ctx.dates[i].isoformat())
            writer.writerow(row)


def _subcontext(
    ctx: BipartiteContext,
    keep_edges: np.ndarray,
    obj_ids: np.ndarray,
    attr_ids: np.ndarray,
) -> BipartiteContext:
    """Restrict to given edges and re-intern node ids onto dense ranges."""
    obj_pos = -np.ones(ctx.n_objects, dtype=np.int64)
    obj_pos[obj_ids] = np.arange(len(obj_ids))
    attr_pos = -np.ones(ctx.n_attributes, dtype=np.int64)
    attr_pos[attr_ids] = np.arange(len(attr_ids))
    e = ctx.edges[keep_edges]
    new_edges = np.stack([obj_pos[e[:, 0]], attr_pos[e[:, 1]]], axis=1)
    return BipartiteContext(
        n_objects=len(obj_ids),
        n_attributes=len(attr_ids),
        edges=new_edges,
        dates=ctx.dates[keep_edges] if ctx.dates is not None else None,
        object_labels=tuple(ctx.object_label(int(u)) for u in obj_ids) if ctx.object_labels else (),
        attribute_labels=tuple(ctx.attribute_label(int(v)) for v in attr_ids) if ctx.attribute_labels else (),
    )


def split_temporal(ctx: BipartiteContext, cutoff: _dt.date) -> SplitPair:
    """Split into a history (input) network and a current (target) network.

    An attribute's date is the earliest date on its edges. The input network
    drops attributes dated on/after the cutoff, their edges, and objects left
    isolated; the target drops objects with no edge dated before the cutoff
    (and their edges) but keeps every attribute. Both sides share the target's
    object id space.
    """
    if ctx.dates is None:
        raise ValueError("temporal split requires edge dates")
    dates = ctx.dates
    before = np.array([d < cutoff for d in dates], dtype=bool)
    if before.all() or not before.any():
        logger.warning("cutoff %s outside data range; split is degenerate", cutoff)

    # attribute date = min over its edges
    attr_before = np.zeros(ctx.n_attributes, dtype=bool)
    attr_before[ctx.edges[before][:, 1]] = True

    obj_has_history = np.zeros(ctx.n_objects, dtype=bool)
    obj_has_history[ctx.edges[before][:, 0]] = True
    kept_objects = np.flatnonzero(obj_has_history)

    # target: drop history-less objects and their edges; keep all attributes
    tgt_keep = obj_has_history[ctx.edges[:, 0]]
    target = _subcontext(ctx, tgt_keep, kept_objects, np.arange(ctx.n_attributes))

    # input: additionally drop post-cutoff attributes and their edges
    in_keep = tgt_keep & attr_before[ctx.edges[:, 1]]
    kept_attrs = np.flatnonzero(attr_before)
    input_ctx = _subcontext(ctx, in_keep, kept_objects, kept_attrs)

    return SplitPair(
        input_ctx=input_ctx,
        target_ctx=target,
        split_kind="temporal",
        cutoff=cutoff,
        attr_map=kept_attrs,
    )


def split_random_edges(
    ctx: BipartiteContext,
    fraction: float,
    seed: int,
    restrict_target: bool = False,
) -> SplitPair:
    """Remove ``floor(fraction * n_edges)`` uniformly sampled edges.

    Exact-count sampling with numpy's PCG64 generator, so the same
    ``(ctx, fraction, seed)`` always yields the same split on any platform.
    Attributes left with no edge are pruned from the input context (the
    target keeps them unless ``restrict_target`` is set).
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    rng = np.random.default_rng(seed)
    n_remove = int(fraction * ctx.n_edges)
    removed = rng.choice(ctx.n_edges, size=n_remove, replace=False)
    keep = np.ones(ctx.n_edges, dtype=bool)
    keep[removed] = False

    # prune only attributes the removal itself isolated
    attr_alive = np.zeros(ctx.n_attributes, dtype=bool)
    attr_alive[ctx.edges[keep][:, 1]] = True
    had_edges = np.zeros(ctx.n_attributes, dtype=bool)
    had_edges[ctx.edges[:, 1]] = True
    attr_alive |= ~had_edges
    kept_attrs = np.flatnonzero(attr_alive)
    n_pruned = ctx.n_attributes - len(kept_attrs)
    if n_pruned:
        logger.info("pruned %d attribute(s) left isolated by edge removal", n_pruned)

    all_objects = np.arange(ctx.n_objects)
    input_ctx = _subcontext(ctx, keep, all_objects, kept_attrs)
    if restrict_target:
        tgt_keep = attr_alive[ctx.edges[:, 1]]
        target = _subcontext(ctx, tgt_keep, all_objects, kept_attrs)
        attr_map = np.arange(len(kept_attrs))
    else:
        target = ctx
        attr_map = kept_attrs

    return SplitPair(
        input_ctx=input_ctx,
        target_ctx=target,
        split_kind="random-removal",
        seed=seed,
        attr_map=attr_map,
    )


def context_stats(ctx: BipartiteContext) -> dict:
    """Exact size counts, density, and degree histograms."""
    n_u, n_v, n_e = ctx.n_objects, ctx.n_attributes, ctx.n_edges
    obj_deg = np.bincount(ctx.edges[:, 0], minlength=n_u) if n_e else np.zeros(n_u, dtype=np.int64)
    attr_deg = np.bincount(ctx.edges[:, 1], minlength=n_v) if n_e else np.zeros(n_v, dtype=np.int64)
    return {
        "n_objects": n_u,
        "n_attributes": n_v,
        "n_edges": n_e,
        "density": n_e / (n_u * n_v) if n_u and n_v else 0.0,
        "object_degree_histogram": _degree_histogram(obj_deg),
        "attribute_degree_histogram": _degree_histogram(attr_deg),
    }


def _degree_histogram(degrees: np.ndarray) -> dict[int, int]:
    if degrees.size == 0:
        return {}
    counts = np.bincount(degrees)
    return {int(d): int(c) for d, c in enumerate(counts) if c}


def context_to_dict(ctx: BipartiteContext) -> dict:
    d = {
        "n_objects": ctx.n_objects,
        "n_attributes": ctx.n_attributes,
        "edges": [[int(u), int(v)] for u, v in ctx.edges],
    }
    if ctx.dates is not None:
        d["dates"] = [dt.isoformat() for dt in ctx.dates]
    if ctx.object_labels:
        d["object_labels"] = list(ctx.object_labels)
    if ctx.attribute_labels:
        d["attribute_labels"] = list(ctx.attribute_labels)
    return d


def context_from_dict(d: dict) -> BipartiteContext:
    return BipartiteContext(
        n_objects=d["n_objects"],
        n_attributes=d["n_attributes"],
        edges=np.array(d["edges"], dtype=np.int64).reshape(-1, 2),
        dates=(
            np.array([_dt.date.fromisoformat(s) for s in d["dates"]], dtype=object)
            if "dates" in d
            else None
        ),
        object_labels=tuple(d.get("object_labels", ())),
        attribute_labels=tuple(d.get("attribute_labels", ())),
    )


def save_context(ctx: BipartiteContext, path: str | Path) -> None:
    Path(path).write_text(json.dumps(context_to_dict(ctx), sort_keys=True), encoding="utf-8")


def load_context(path: str | Path) -> BipartiteContext:
    return context_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
