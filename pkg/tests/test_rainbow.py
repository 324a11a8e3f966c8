"""Tests for rtw.rainbow."""

import itertools

import networkx as nx
import numpy as np
import pytest

from rtw.checks import greedy_order_case
from rtw.constructions import book_construction
from rtw.enumeration import Copy, count_colored, enumerate_copies
from rtw.graphcore import complete_graph, make_named
from rtw.rainbow import (
    AugmentingPathError,
    CopyFamily,
    RainbowTracker,
    berge_contains,
    berge_view,
    colored_certificate,
    find_rainbow,
    find_t_rainbow,
    greedy_edge_pick,
    greedy_rainbow,
    heavy_light_classify,
    matching_decomposition,
    maximum_matching,
    member_coloring,
)


def triangles(n):
    return enumerate_copies(complete_graph(n), make_named("K3"))


def random_family(rng, candidates, pattern, n, size):
    picks = sorted(rng.choice(len(candidates), size=size, replace=False))
    return CopyFamily(n, pattern, tuple(candidates[i] for i in picks))


def has_rainbow_exhaustive(family, f):
    """Try every assignment of distinct members to the edges of every copy of f."""
    for f_copy in enumerate_copies(family.union_graph(), f):
        holders = [[i for i, c in enumerate(family.copies) if e in c] for e in f_copy.edges]
        for assignment in itertools.product(*holders):
            if len(set(assignment)) == len(assignment):
                return True
    return False


class TestCopyFamily:
    def test_rejects_duplicates(self):
        c = Copy.of([(0, 1)])
        with pytest.raises(ValueError):
            CopyFamily(2, make_named("K2"), (c, c))
        assert len(CopyFamily(2, make_named("K2"), (c, c), allow_multiplicity=True)) == 2

    def test_rejects_vertex_outside_host(self):
        with pytest.raises(ValueError):
            CopyFamily(3, make_named("K2"), (Copy.of([(0, 3)]),))

    def test_verify(self):
        CopyFamily(4, make_named("K3"), tuple(triangles(4))).verify()
        bad = CopyFamily(4, make_named("K3"), (Copy.of([(0, 1), (1, 2), (2, 3)]),))
        with pytest.raises(ValueError):
            bad.verify()

    def test_coverage_and_union(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)[:2]))
        cover = family.coverage()
        assert cover[(0, 1)] == [0, 1]
        assert cover[(1, 3)] == [1]
        assert family.union_graph().edge_count == 5
        assert len(family.without(0)) == 1
        assert family.subfamily([1]).copies == (triangles(4)[1],)


class TestFindRainbow:
    def test_all_triangles_of_k4(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)))
        witness = find_rainbow(family, make_named("K3"))
        assert witness is not None
        assert witness.f_copy == Copy.of([(0, 1), (0, 2), (1, 2)])
        assert witness.is_valid(family)

    def test_too_few_members(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)[:2]))
        assert find_rainbow(family, make_named("K3")) is None

    def test_greedy_order_case(self):
        family, f_copy = greedy_order_case()
        outcome = greedy_rainbow(family, f_copy)
        assert not outcome.succeeded
        assert outcome.failed_edge == (2, 3)
        witness = find_rainbow(family, make_named("M2"))
        assert witness.f_copy == f_copy
        assert dict(witness.assignment) == {(0, 1): 1, (2, 3): 0}

    def test_greedy_rejects_foreign_edge(self):
        family, _ = greedy_order_case()
        with pytest.raises(ValueError):
            greedy_rainbow(family, Copy.of([(0, 5), (2, 3)]))

    def test_edgeless_target_rejected(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)))
        with pytest.raises(ValueError):
            find_rainbow(family, make_named("E2"))

    def test_t_rainbow(self):
        family = CopyFamily(5, make_named("K3"), tuple(triangles(5)))
        witness = find_t_rainbow(family, make_named("K2"), 2)
        assert witness is not None and witness.is_valid(family)
        assert find_t_rainbow(family, make_named("K3"), 4) is None
        with pytest.raises(ValueError):
            find_t_rainbow(family, make_named("K2"), 0)

    def test_t_equal_one_agrees(self):
        rng = np.random.default_rng(3)
        pool = triangles(6)
        for _ in range(40):
            family = random_family(rng, pool, make_named("K3"), 6, int(rng.integers(1, 8)))
            for f in (make_named("K3"), make_named("P4"), make_named("C4")):
                plain = find_rainbow(family, f)
                one = find_t_rainbow(family, f, 1)
                assert (plain is None) == (one is None)

    def test_witnesses_are_valid(self):
        rng = np.random.default_rng(4)
        pool = enumerate_copies(complete_graph(6), make_named("P4"))
        for _ in range(40):
            family = random_family(rng, pool, make_named("P4"), 6, int(rng.integers(2, 10)))
            witness = find_rainbow(family, make_named("P3"))
            if witness is not None:
                assert witness.is_valid(family)


    @pytest.mark.parametrize("h", ["K3", "P3", "P4"])
    def test_agrees_with_exhaustive_assignment(self, h):
        rng = np.random.default_rng(12)
        pool = enumerate_copies(complete_graph(5), make_named(h))
        targets = [make_named(f) for f in ("P3", "K3", "P4", "M2", "C4")]
        for _ in range(25):
            size = int(rng.integers(1, min(12, len(pool)) + 1))
            family = random_family(rng, pool, make_named(h), 5, size)
            for f in targets:
                assert (find_rainbow(family, f) is not None) == has_rainbow_exhaustive(family, f)


class TestTracker:
    @pytest.mark.parametrize("h,f,n", [("K3", "K3", 5), ("P4", "P4", 5), ("P3", "M2", 6)])
    def test_agrees_with_full_check(self, h, f, n):
        rng = np.random.default_rng(7)
        pattern, target = make_named(h), make_named(f)
        candidates = enumerate_copies(complete_graph(n), pattern)
        for _ in range(10):
            tracker = RainbowTracker(candidates, target, n)
            for i in rng.permutation(len(candidates))[:12]:
                i = int(i)
                trial = CopyFamily(n, pattern, tuple(candidates[m] for m in tracker.members + [i]))
                assert tracker.can_add(i) == (find_rainbow(trial, target) is None)
                if tracker.can_add(i):
                    tracker.add(i)

    def test_pop_restores_union(self):
        candidates = triangles(4)
        tracker = RainbowTracker(candidates, make_named("K3"), 4)
        tracker.add(0)
        before = tracker.union
        tracker.add(3)
        assert tracker.pop() == 3
        assert tracker.union == before

    def test_wide_host_uses_python_path(self):
        candidates = [Copy.of([(0, 1)]), Copy.of([(0, 2)]), Copy.of([(2, 3)]), Copy.of([(9, 11)])]
        tracker = RainbowTracker(candidates, make_named("M2"), 12)
        tracker.add(0)
        # (0, 1) and (0, 2) share a vertex, (0, 1) and (2, 3) do not
        assert tracker.can_add(1)
        assert not tracker.can_add(2)
        assert not tracker.can_add(3)


class TestMatching:
    def test_maximum_matching_size(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            na, nb = int(rng.integers(1, 9)), int(rng.integers(1, 9))
            adjacency = {
                a: [f"b{b}" for b in range(nb) if rng.random() < 0.35] for a in range(na)
            }
            graph = nx.Graph()
            graph.add_nodes_from(adjacency)
            graph.add_edges_from((a, b) for a, bs in adjacency.items() for b in bs)
            expected = len(nx.bipartite.hopcroft_karp_matching(graph, top_nodes=list(adjacency)))
            assert 2 * len(maximum_matching(adjacency)) == expected

    def test_decomposition(self):
        adjacency = {0: ["a"], 1: ["a"], 2: ["b"]}
        matching = {0: "a", 2: "b"}
        split = matching_decomposition(adjacency, matching)
        assert split.b2 == {"a"}
        assert split.a2 == {0, 1}
        assert split.a1 == {2}
        assert split.b1 == {"b"}
        assert split.violations(adjacency, matching) == []

    def test_decomposition_finds_augmenting_path(self):
        with pytest.raises(AugmentingPathError) as exc:
            matching_decomposition({0: ["a", "b"], 1: ["a"]}, {0: "a"})
        assert exc.value.path == [1, "a", 0, "b"]

    def test_decomposition_rejects_non_edge(self):
        with pytest.raises(ValueError):
            matching_decomposition({0: ["a"]}, {0: "b"})

    def test_decomposition_invariants_on_random_graphs(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            adjacency = {a: [b for b in range(7) if rng.random() < 0.3] for a in range(7)}
            matching = maximum_matching(adjacency)
            split = matching_decomposition(adjacency, matching)
            assert split.violations(adjacency, matching) == []


class TestCertificates:
    def test_greedy_edge_pick(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)[:2]))
        picked, marked = greedy_edge_pick(family)
        assert picked.edges() == [(0, 1), (0, 3)]
        assert marked == []

    def test_greedy_edge_pick_marks_exhausted_members(self):
        c = Copy.of([(0, 1)])
        family = CopyFamily(2, make_named("K2"), (c, c), allow_multiplicity=True)
        picked, marked = greedy_edge_pick(family)
        assert picked.edge_count == 1 and marked == [1]

    def test_colored_certificate_bounds_family(self):
        rng = np.random.default_rng(11)
        pool = triangles(6)
        k2, k3 = make_named("K2"), make_named("K3")
        for _ in range(30):
            family = random_family(rng, pool, k3, 6, int(rng.integers(1, 15)))
            certificate = colored_certificate(family)
            assert count_colored(certificate, k3, k2) >= len(family)

    def test_member_coloring(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)[:2]))
        coloring = member_coloring(family, 0, make_named("K2"))
        assert coloring.red == frozenset()
        coloring = member_coloring(family, 0, make_named("P3"))
        assert coloring.red == frozenset({(0, 2), (1, 2)})


class TestBerge:
    def test_view(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)[:2]))
        assert berge_view(family) == [(0, 1, 2), (0, 1, 3)]
        with pytest.raises(ValueError):
            berge_view(CopyFamily(4, make_named("P3"), ()))

    def test_contains(self):
        hyperedges = [{0, 1, 2}, {0, 1, 3}]
        assert berge_contains(hyperedges, make_named("K2"))
        assert berge_contains(hyperedges, make_named("M2"))
        assert not berge_contains(hyperedges, make_named("K3"))

    def test_agrees_with_rainbow_detection(self):
        rng = np.random.default_rng(12)
        pool = triangles(5)
        for _ in range(30):
            family = random_family(rng, pool, make_named("K3"), 5, int(rng.integers(1, 7)))
            for f in (make_named("K3"), make_named("P4")):
                expected = find_rainbow(family, f) is not None
                assert berge_contains(berge_view(family), f, 5) == expected


class TestHeavyLight:
    def test_classify(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)[:2]))
        split = heavy_light_classify(family, 2)
        assert split.heavy_edges == {(0, 1)}
        assert (1, 3) in split.light_edges
        assert split.triangle_counts == {(0, 1, 2): 1, (0, 1, 3): 1}
        assert split.heavy_triangles == frozenset()
        assert split.light_edges_of(family.copies[0]) == [(0, 2), (1, 2)]

    def test_book_members_each_have_a_light_edge(self):
        family = book_construction(20, 2).family
        split = heavy_light_classify(family, 7)
        assert all(split.light_edges_of(c) for c in family.copies)

    def test_rejects_non_positive_p(self):
        family = CopyFamily(4, make_named("K3"), tuple(triangles(4)))
        with pytest.raises(ValueError):
            heavy_light_classify(family, 0)
