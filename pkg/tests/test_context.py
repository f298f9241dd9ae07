"""Edge-list loading, splits, and context statistics."""

from __future__ import annotations

import datetime as dt
import logging

import numpy as np
import pytest

from latticelink.context import (
    BipartiteContext,
    EdgeListParseError,
    context_from_dict,
    context_stats,
    context_to_dict,
    load_edge_list,
    split_random_edges,
    split_temporal,
    write_edge_list,
)

from conftest import random_context


class TestLoadEdgeList:
    def test_direct_readback(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("a,p1\nb,p1\n")
        ctx = load_edge_list(p)
        assert (ctx.n_objects, ctx.n_attributes, ctx.n_edges) == (2, 1, 2)
        assert ctx.object_labels == ("a", "b")

    def test_duplicates_collapse_with_warning(self, tmp_path, caplog):
        p = tmp_path / "e.csv"
        p.write_text("a,p1\na,p1\n")
        with caplog.at_level(logging.WARNING):
            ctx = load_edge_list(p)
        assert ctx.n_edges == 1
        assert "1 duplicate" in caplog.text

    def test_header_row_is_skipped(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("object,attribute\na,p1\n")
        assert load_edge_list(p).n_edges == 1

    def test_tsv(self, tmp_path):
        p = tmp_path / "e.tsv"
        p.write_text("a\tp1\nb\tp2\n")
        assert load_edge_list(p, format="tsv").n_edges == 2

    def test_wrong_arity_reports_line(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("a,p1\nbad-row\n")
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list(p)

    def test_bad_date_reports_line(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("a,p1,2014-01-02\nb,p2,not-a-date\n")
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list(p)

    def test_empty_file_is_error(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("")
        with pytest.raises(EdgeListParseError):
            load_edge_list(p)

    def test_mixed_dated_rows_error(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("a,p1,2014-01-02\nb,p2\n")
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list(p)

    def test_write_read_round_trip(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("a,p1,2014-03-01\nb,p2,2017-06-05\na,p2,2015-01-01\n")
        ctx = load_edge_list(p)
        out = tmp_path / "out.csv"
        write_edge_list(ctx, out)
        ctx2 = load_edge_list(out)
        assert ctx2.edge_set() == ctx.edge_set()
        assert ctx2.object_labels == ctx.object_labels
        assert list(ctx2.dates) == list(ctx.dates)


class TestValidation:
    def test_edge_out_of_range(self):
        with pytest.raises(ValueError, match="object id"):
            BipartiteContext(1, 1, np.array([[1, 0]]))

    def test_duplicate_edges_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            BipartiteContext(2, 2, np.array([[0, 0], [0, 0]]))

    def test_json_round_trip(self):
        rng = np.random.default_rng(0)
        ctx = random_context(rng, 5, 7, 0.4)
        ctx2 = context_from_dict(context_to_dict(ctx))
        assert np.array_equal(ctx.edges, ctx2.edges)


class TestSplitTemporal:
    def _dated(self):
        edges = np.array([[0, 0], [1, 1]])
        dates = np.array([dt.date(2014, 1, 1), dt.date(2017, 1, 1)], dtype=object)
        return BipartiteContext(2, 2, edges, dates=dates,
                                object_labels=("u1", "u2"), attribute_labels=("v1", "v2"))

    def test_noop_when_all_before(self):
        ctx = self._dated()
        pair = split_temporal(ctx, dt.date(2020, 1, 1))
        assert pair.input_ctx.edge_set() == ctx.edge_set()
        assert pair.target_ctx.edge_set() == ctx.edge_set()

    def test_hand_example(self):
        # edges (u1,v1)@2014, (u2,v2)@2017, cutoff 2016: input keeps only
        # u1/v1; target drops u2 (no pre-cutoff publication) but keeps v2
        pair = split_temporal(self._dated(), dt.date(2016, 1, 1))
        inp, tgt = pair.input_ctx, pair.target_ctx
        assert inp.object_labels == ("u1",)
        assert inp.attribute_labels == ("v1",)
        assert inp.edge_set() == {(0, 0)}
        assert tgt.object_labels == ("u1",)
        assert tgt.n_attributes == 2
        assert tgt.edge_set() == {(0, 0)}

    def test_missing_timestamps_error(self):
        ctx = BipartiteContext(1, 1, np.array([[0, 0]]))
        with pytest.raises(ValueError, match="dates"):
            split_temporal(ctx, dt.date(2016, 1, 1))

    def test_degenerate_cutoff_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            split_temporal(self._dated(), dt.date(1990, 1, 1))
        assert "degenerate" in caplog.text

    def test_every_target_object_has_history(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            ctx = random_context(rng, 8, 8, 0.3)
            if ctx.n_edges == 0:
                continue
            days = rng.integers(0, 1000, size=ctx.n_edges)
            dates = np.array([dt.date(2014, 1, 1) + dt.timedelta(days=int(d)) for d in days],
                             dtype=object)
            ctx = BipartiteContext(8, 8, ctx.edges, dates=dates)
            cutoff = dt.date(2015, 6, 1)
            pair = split_temporal(ctx, cutoff)
            tgt = pair.target_ctx
            for u in range(tgt.n_objects):
                dated_before = [
                    tgt.dates[i] < cutoff
                    for i in range(tgt.n_edges)
                    if tgt.edges[i, 0] == u
                ]
                assert any(dated_before)


class TestSplitRandomEdges:
    def test_fraction_zero_is_identity(self):
        ctx = random_context(np.random.default_rng(1), 6, 6, 0.5)
        pair = split_random_edges(ctx, 0.0, seed=5)
        assert pair.input_ctx.edge_set() == ctx.edge_set()
        assert pair.target_ctx.edge_set() == ctx.edge_set()

    def test_exact_count_removal(self):
        rng = np.random.default_rng(2)
        edges = np.array([[u, v] for u in range(10) for v in range(10)])
        ctx = BipartiteContext(10, 10, edges)
        pair = split_random_edges(ctx, 0.1, seed=0)
        assert pair.input_ctx.n_edges == 90
        assert pair.target_ctx.n_edges == 100

    def test_same_seed_identical(self):
        ctx = random_context(np.random.default_rng(4), 12, 9, 0.3)
        a = split_random_edges(ctx, 0.25, seed=42)
        b = split_random_edges(ctx, 0.25, seed=42)
        assert np.array_equal(a.input_ctx.edges, b.input_ctx.edges)
        assert np.array_equal(a.attr_map, b.attr_map)
        c = split_random_edges(ctx, 0.25, seed=43)
        assert not np.array_equal(a.input_ctx.edges, c.input_ctx.edges)

    def test_isolated_attributes_pruned_from_input_only(self):
        # one attribute with a single edge: removing it isolates the attribute
        ctx = BipartiteContext(2, 2, np.array([[0, 0], [1, 0], [0, 1]]))
        for seed in range(40):
            pair = split_random_edges(ctx, 0.34, seed=seed)
            removed = ctx.edge_set() - {
                (u, pair.input_attr_to_target(v)) for u, v in pair.input_ctx.edge_set()
            }
            if removed == {(0, 1)}:
                assert pair.input_ctx.n_attributes == 1
                assert pair.target_ctx.n_attributes == 2
                return
        pytest.fail("no seed removed the singleton-attribute edge")

    def test_restrict_target_option(self):
        ctx = BipartiteContext(2, 2, np.array([[0, 0], [1, 0], [0, 1]]))
        for seed in range(40):
            pair = split_random_edges(ctx, 0.34, seed=seed, restrict_target=True)
            if pair.input_ctx.n_attributes == 1:
                assert pair.target_ctx.n_attributes == 1
                return
        pytest.fail("no seed pruned an attribute")

    def test_input_edges_subset_of_target(self):
        rng = np.random.default_rng(9)
        for seed in range(10):
            ctx = random_context(rng, 10, 10, 0.4)
            pair = split_random_edges(ctx, 0.2, seed=seed)
            mapped = {(u, pair.input_attr_to_target(v)) for u, v in pair.input_ctx.edge_set()}
            assert mapped <= pair.target_ctx.edge_set()


class TestContextStats:
    def test_empty_context_zeros(self):
        ctx = BipartiteContext(0, 0, np.zeros((0, 2), dtype=np.int64))
        s = context_stats(ctx)
        assert s["n_objects"] == 0 and s["n_attributes"] == 0 and s["n_edges"] == 0
        assert s["density"] == 0.0

    def test_identity_density(self, identity3):
        s = context_stats(identity3)
        assert s["n_edges"] == 3
        assert s["density"] == pytest.approx(1 / 3)
        assert s["object_degree_histogram"] == {1: 3}

    def test_degree_histograms(self):
        ctx = BipartiteContext(3, 2, np.array([[0, 0], [0, 1], [1, 0]]))
        s = context_stats(ctx)
        assert s["object_degree_histogram"] == {0: 1, 1: 1, 2: 1}
        assert s["attribute_degree_histogram"] == {1: 1, 2: 1}
