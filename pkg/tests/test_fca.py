"""Concept enumeration, derivations, covers, and neighbor-pair sampling."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from latticelink.context import BipartiteContext
from latticelink.fca import (
    ConceptBudgetError,
    ConceptLattice,
    FormalConcept,
    concepts_from_jsonl,
    concepts_to_jsonl,
    cover_relation,
    covers_from_jsonl,
    covers_to_jsonl,
    derive_attrs,
    derive_objects,
    enumerate_concepts,
    neighbor_pairs,
    queue_lower_neighbors,
)

from conftest import random_context
from oracles import brute_force_concepts, transitive_reduction_oracle


class TestDerivations:
    def test_full_context_single_object(self, full22):
        assert derive_attrs(full22, [0]) == (0, 1)

    def test_empty_object_set_gives_all_attributes(self, full22):
        assert derive_attrs(full22, []) == (0, 1)
        assert derive_objects(full22, []) == (0, 1)

    def test_identity_two_objects_share_nothing(self, identity3):
        assert derive_attrs(identity3, [0, 1]) == ()

    def test_out_of_range_errors(self, identity3):
        with pytest.raises(ValueError):
            derive_attrs(identity3, [5])
        with pytest.raises(ValueError):
            derive_objects(identity3, [-1])

    def test_galois_closure(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            ctx = random_context(rng, 6, 6, 0.4)
            subset = [int(i) for i in rng.choice(6, size=2, replace=False)]
            b = derive_attrs(ctx, subset)
            a = derive_objects(ctx, b)
            assert set(subset) <= set(a)
            assert derive_attrs(ctx, a) == b


class TestEnumerateConcepts:
    def test_full_2x2_single_concept(self, full22):
        lat = enumerate_concepts(full22)
        assert len(lat.concepts) == 1
        assert lat.concepts[0].extent == (0, 1)
        assert lat.concepts[0].intent == (0, 1)

    def test_identity_3x3_five_concepts(self, identity3):
        lat = enumerate_concepts(identity3)
        got = {(c.extent, c.intent) for c in lat.concepts}
        assert got == {
            ((), (0, 1, 2)),
            ((0,), (0,)),
            ((1,), (1,)),
            ((2,), (2,)),
            ((0, 1, 2), ()),
        }

    def test_matches_brute_force(self):
        rng = np.random.default_rng(101)
        for trial in range(60):
            density = [0.2, 0.5, 0.8][trial % 3]
            ctx = random_context(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), density)
            got = {(c.extent, c.intent) for c in enumerate_concepts(ctx).concepts}
            assert got == brute_force_concepts(ctx.incidence())

    def test_closure_fixpoint_property(self):
        rng = np.random.default_rng(5)
        ctx = random_context(rng, 7, 7, 0.4)
        for c in enumerate_concepts(ctx).concepts:
            assert derive_attrs(ctx, c.extent) == c.intent
            assert derive_objects(ctx, c.intent) == c.extent

    def test_count_invariant_under_permutation(self):
        rng = np.random.default_rng(12)
        ctx = random_context(rng, 6, 8, 0.35)
        inc = ctx.incidence()
        perm_u = rng.permutation(6)
        perm_v = rng.permutation(8)
        permuted = inc[perm_u][:, perm_v]
        ctx2 = BipartiteContext(6, 8, np.argwhere(permuted > 0))
        assert len(enumerate_concepts(ctx).concepts) == len(enumerate_concepts(ctx2).concepts)

    def test_canonical_ordering(self):
        rng = np.random.default_rng(3)
        ctx = random_context(rng, 6, 6, 0.5)
        concepts = enumerate_concepts(ctx).concepts
        keys = [(len(c.extent), c.extent) for c in concepts]
        assert keys == sorted(keys)
        assert [c.id for c in concepts] == list(range(len(concepts)))

    def test_budget_error_carries_partial_count(self, identity3):
        with pytest.raises(ConceptBudgetError) as exc:
            enumerate_concepts(identity3, max_concepts=2)
        assert exc.value.partial_count == 3
        assert len(exc.value.partial_concepts) == 3


class TestCoverRelation:
    def test_chain_is_reduced(self):
        # nested extents {0} ⊂ {0,1} ⊂ {0,1,2} form a chain
        ctx = BipartiteContext(3, 3, np.array([[0, 0], [0, 1], [0, 2], [1, 1], [1, 2], [2, 2]]))
        lat = enumerate_concepts(ctx)
        covers = cover_relation(lat)
        extents = [c.extent for c in lat.concepts]
        assert extents == [(0,), (0, 1), (0, 1, 2)]
        assert covers == {(0, 1), (1, 2)}

    def test_identity_six_covers(self, identity3):
        lat = enumerate_concepts(identity3)
        covers = cover_relation(lat)
        assert len(covers) == 6
        bottom, top = 0, 4
        atoms = {1, 2, 3}
        assert {(bottom, a) for a in atoms} <= covers
        assert {(a, top) for a in atoms} <= covers

    def test_single_concept_no_covers(self, full22):
        lat = enumerate_concepts(full22)
        assert cover_relation(lat) == set()

    def test_duplicate_extents_rejected(self):
        fake = ConceptLattice(
            concepts=[
                FormalConcept(0, (0,), (0,)),
                FormalConcept(1, (0,), (1,)),
            ],
            n_objects=2,
            n_attributes=2,
        )
        with pytest.raises(ValueError, match="duplicate extents"):
            cover_relation(fake)

    def test_matches_cubic_oracle(self):
        rng = np.random.default_rng(44)
        for trial in range(40):
            ctx = random_context(rng, int(rng.integers(2, 7)), int(rng.integers(2, 7)), 0.4)
            lat = enumerate_concepts(ctx)
            assert cover_relation(lat) == transitive_reduction_oracle(
                [c.extent for c in lat.concepts]
            )


class TestQueueLowerNeighbors:
    def test_single_assignment_per_concept(self, identity3):
        lat = enumerate_concepts(identity3)
        lower = queue_lower_neighbors(lat)
        # bottom (id 0) has no predecessors, so it never receives an entry
        assert 0 not in lower
        # atoms each record the bottom; the top records only one of its
        # three lower neighbors - the printed queue sweep keeps the last
        for atom in (1, 2, 3):
            assert lower[atom] == 0
        assert lower[4] in (1, 2, 3)


class TestNeighborPairs:
    def test_identity_positives_and_exhausted_negatives(self, identity3, caplog):
        lat = enumerate_concepts(identity3)
        cover_relation(lat)
        with caplog.at_level(logging.WARNING):
            pos, neg = neighbor_pairs(lat, seed=0)
        assert len(pos) == 6
        # C(5,2)=10 pairs minus 6 covers leaves only 4 non-neighbors
        assert len(neg) == 4
        assert "using all" in caplog.text

    def test_two_concept_lattice_warns_no_negatives(self, caplog):
        ctx = BipartiteContext(2, 1, np.array([[0, 0]]))
        lat = enumerate_concepts(ctx)
        cover_relation(lat)
        with caplog.at_level(logging.WARNING):
            pos, neg = neighbor_pairs(lat, seed=0)
        assert len(pos) == 1
        assert neg == []

    def test_negatives_are_not_neighbors_and_balanced(self):
        rng = np.random.default_rng(7)
        ctx = random_context(rng, 6, 6, 0.5)
        lat = enumerate_concepts(ctx)
        covers = cover_relation(lat)
        pos, neg = neighbor_pairs(lat, seed=3)
        unordered_covers = {(min(a, b), max(a, b)) for a, b in covers}
        assert set(pos) == unordered_covers
        assert not (set(neg) & unordered_covers)
        assert len(neg) <= len(pos)

    def test_same_seed_same_sample(self):
        rng = np.random.default_rng(13)
        ctx = random_context(rng, 7, 7, 0.4)
        lat = enumerate_concepts(ctx)
        cover_relation(lat)
        assert neighbor_pairs(lat, seed=5) == neighbor_pairs(lat, seed=5)


class TestJsonl:
    def test_concepts_round_trip(self, tmp_path, identity3):
        lat = enumerate_concepts(identity3)
        p = tmp_path / "c.jsonl"
        concepts_to_jsonl(lat, p)
        lat2 = concepts_from_jsonl(p, 3, 3)
        assert [(c.extent, c.intent) for c in lat2.concepts] == [
            (c.extent, c.intent) for c in lat.concepts
        ]

    def test_covers_round_trip(self, tmp_path, identity3):
        lat = enumerate_concepts(identity3)
        covers = cover_relation(lat)
        p = tmp_path / "cov.jsonl"
        covers_to_jsonl(covers, p)
        assert covers_from_jsonl(p) == covers
