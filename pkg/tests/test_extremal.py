"""Tests for rtw.extremal."""

import pytest

from rtw.enumeration import contains, count_colored, count_copies, enumerate_copies
from rtw.constructions import m2_construction, p4_construction
from rtw.extremal import (
    Budget,
    SandwichReport,
    SandwichViolation,
    SearchStats,
    SearchOutcome,
    Status,
    check_sandwich,
    ex_colored,
    ex_edges,
    ex_generalized,
    rb_exact,
)
from rtw.graphcore import SmallGraph, complete_graph, make_named
from rtw.rainbow import CopyFamily, find_rainbow


class TestBudget:
    def test_defaults(self):
        assert Budget() == Budget(max_nodes=10**8, max_seconds=900.0)

    @pytest.mark.parametrize("kwargs", [{"max_nodes": 0}, {"max_seconds": -1.0}])
    def test_rejects_non_positive(self, kwargs):
        with pytest.raises(ValueError):
            Budget(**kwargs)

    def test_from_config(self, config):
        budget = Budget.from_config({"budget": {"max_nodes": 50, "max_seconds": 2}})
        assert budget == Budget(50, 2.0)
        assert Budget.from_config({}) == Budget()
        assert Budget.from_config(config).max_nodes > 0


class TestTuran:
    @pytest.mark.parametrize("n,f,value", [(4, "K3", 4), (5, "P4", 4), (4, "M2", 3), (5, "K3", 6)])
    def test_ex_edges(self, n, f, value, budget):
        outcome = ex_edges(n, make_named(f), budget)
        assert outcome.optimal
        assert outcome.value == value
        assert outcome.certificate.edge_count == value
        assert not contains(outcome.certificate, make_named(f))

    @pytest.mark.parametrize("n,value", [(3, 2), (4, 4), (5, 6), (6, 9)])
    def test_mantel(self, n, value, budget):
        assert ex_edges(n, make_named("K3"), budget).value == value

    @pytest.mark.slow
    def test_mantel_seven(self, budget):
        assert ex_edges(7, make_named("K3"), budget).value == 12

    def test_edgeless_target_rejected(self):
        with pytest.raises(ValueError):
            ex_edges(4, make_named("E2"))

    def test_out_of_budget_keeps_best_found(self):
        outcome = ex_edges(6, make_named("K3"), Budget(max_nodes=5))
        assert outcome.status is Status.LOWER_BOUND_ONLY
        assert not outcome.optimal
        assert not contains(outcome.certificate, make_named("K3"))


class TestGeneralized:
    @pytest.mark.parametrize(
        "n,h,f,value",
        [(5, "K3", "K4", 4), (4, "C4", "F2", 3), (4, "K3", "K3", 0), (5, "K2", "K3", 6)],
    )
    def test_values(self, n, h, f, value, budget):
        outcome = ex_generalized(n, make_named(h), make_named(f), budget)
        assert outcome.optimal
        assert outcome.value == value
        assert count_copies(outcome.certificate, make_named(h)) == value

    def test_k2_pattern_matches_ex_edges(self, budget):
        for n in (4, 5):
            plain = ex_edges(n, make_named("P4"), budget).value
            assert ex_generalized(n, make_named("K2"), make_named("P4"), budget).value == plain


class TestColored:
    def test_c4_f2(self, budget):
        outcome = ex_colored(4, make_named("C4"), make_named("F2"), budget)
        assert outcome.optimal and outcome.value == 6
        assert count_colored(outcome.certificate, make_named("C4"), make_named("K2")) == 6

    def test_k2_pattern_is_turan_number(self, budget):
        outcome = ex_colored(4, make_named("K2"), make_named("K3"), budget)
        assert outcome.value == 4
        assert not contains(outcome.certificate.graph, make_named("K3"))

    def test_at_least_generalized(self, budget):
        for h, f in [("K3", "K4"), ("P3", "K3"), ("C4", "K3")]:
            gen = ex_generalized(5, make_named(h), make_named(f), budget).value
            col = ex_colored(5, make_named(h), make_named(f), budget).value
            assert col >= gen


class TestRainbow:
    @pytest.mark.parametrize("n,value", [(4, 2), (5, 2)])
    def test_p4(self, n, value, budget):
        outcome = rb_exact(n, make_named("P4"), make_named("P4"), budget)
        assert outcome.optimal
        assert outcome.value == value
        assert find_rainbow(outcome.certificate, make_named("P4")) is None

    @pytest.mark.slow
    def test_p4_six(self, budget):
        outcome = rb_exact(6, make_named("P4"), make_named("P4"), budget)
        assert outcome.optimal and outcome.value == 3

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_m2(self, n, budget):
        outcome = rb_exact(n, make_named("M2"), make_named("M2"), budget)
        assert outcome.optimal and outcome.value == 3

    @pytest.mark.parametrize(
        "n,value", [(4, 2), (5, 3), pytest.param(6, 4, marks=pytest.mark.slow)]
    )
    def test_triangles(self, n, value, budget):
        outcome = rb_exact(n, make_named("K3"), make_named("K3"), budget)
        assert outcome.optimal and outcome.value == value
        assert len(outcome.certificate) == value
        assert find_rainbow(outcome.certificate, make_named("K3")) is None

    @pytest.mark.parametrize("symmetry", [True, False])
    def test_single_edge_target_allows_no_members(self, symmetry, budget):
        # one member already holds a rainbow K2
        outcome = rb_exact(
            4, make_named("P3"), make_named("K2"), budget, use_root_symmetry=symmetry
        )
        assert outcome.optimal
        assert outcome.value == 0
        assert len(outcome.certificate) == 0

    def test_c4_families_of_k4(self, budget):
        # a rainbow C4 needs four members
        assert rb_exact(4, make_named("C4"), make_named("C4"), budget).value == 3

    def test_root_symmetry_does_not_change_value(self, budget):
        for h, f in [("P3", "P3"), ("K3", "P4"), ("M2", "M2")]:
            fast = rb_exact(5, make_named(h), make_named(f), budget)
            slow = rb_exact(5, make_named(h), make_named(f), budget, use_root_symmetry=False)
            assert fast.value == slow.value

    def test_out_of_budget(self):
        outcome = rb_exact(5, make_named("P4"), make_named("P4"), Budget(max_nodes=1))
        assert outcome.status is Status.LOWER_BOUND_ONLY
        assert outcome.value == 0

    def test_seed_with_upper_bound_stops_immediately(self, budget):
        seed = p4_construction(5).family
        outcome = rb_exact(5, make_named("P4"), make_named("P4"), budget, seed=seed, upper_bound=2)
        assert outcome.optimal
        assert outcome.stats.cutoff
        assert outcome.value == 2
        assert outcome.certificate.copies == seed.copies

    def test_seed_is_at_least_kept(self, budget):
        seed = m2_construction(5).family
        outcome = rb_exact(5, make_named("M2"), make_named("M2"), budget, seed=seed)
        assert outcome.value >= len(seed)

    def test_seed_must_be_rainbow_free(self, budget):
        seed = enumerate_copies(complete_graph(4), make_named("K3"))
        with pytest.raises(ValueError):
            rb_exact(4, make_named("K3"), make_named("K3"), budget, seed=seed)

    def test_seed_must_be_candidates(self, budget):
        host = SmallGraph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
        seed = [enumerate_copies(complete_graph(4), make_named("K3"))[-1]]
        with pytest.raises(ValueError):
            rb_exact(4, make_named("K3"), make_named("K3"), budget, host=host, seed=seed)

    def test_host_size_must_match(self, budget):
        with pytest.raises(ValueError):
            rb_exact(5, make_named("K3"), make_named("K3"), budget, host=complete_graph(4))

    def test_host_restricts_candidates(self, budget):
        host = SmallGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        outcome = rb_exact(5, make_named("P3"), make_named("P4"), budget, host=host)
        assert outcome.optimal
        assert outcome.value <= rb_exact(5, make_named("P3"), make_named("P4"), budget).value
        for c in outcome.certificate.copies:
            assert all(host.has_edge(*e) for e in c.edges)


class TestSandwich:
    @pytest.mark.parametrize(
        "n,h,f", [(4, "K3", "K3"), (5, "P4", "P4"), (4, "P3", "M2"), (5, "K3", "P4")]
    )
    def test_chain_holds(self, n, h, f, budget):
        report = check_sandwich(n, make_named(h), make_named(f), budget)
        assert report.conclusive
        assert report.violations() == []
        v = report.values
        assert v["ex_hf"] <= v["rb"] <= v["ex_col"] <= v["ex_hf_plus_ex_f"]

    def test_known_rainbow_values(self, budget):
        assert check_sandwich(4, make_named("K3"), make_named("K3"), budget).rb.value == 2
        assert check_sandwich(5, make_named("P4"), make_named("P4"), budget).rb.value == 2

    def test_unseeded_run_agrees(self, budget):
        seeded = check_sandwich(4, make_named("M2"), make_named("M2"), budget)
        plain = check_sandwich(4, make_named("M2"), make_named("M2"), budget, seeded=False)
        assert seeded.rb.value == plain.rb.value == 3
        assert not plain.seeded

    def test_inconclusive_is_reported_not_raised(self):
        report = check_sandwich(5, make_named("P4"), make_named("P4"), Budget(max_nodes=3))
        assert not report.conclusive

    def test_violation_lists_failing_links(self):
        stats = SearchStats()
        empty = SmallGraph.empty(4)

        def outcome(value):
            return SearchOutcome(value, empty, Status.OPTIMAL, stats)

        report = SandwichReport(
            4, make_named("K3"), make_named("K3"),
            ex_f=outcome(4), ex_hf=outcome(3), ex_col=outcome(5), rb=outcome(2),
            seeded=False, cutoff=False,
        )
        assert report.violations() == ["ex(n,H,F)=3 > rb(n,H,F)=2"]
        error = SandwichViolation("chain", report)
        assert error.report is report

    @pytest.mark.slow
    @pytest.mark.parametrize("h", ["K3", "P4", "P3", "M2", "C4"])
    @pytest.mark.parametrize("f", ["K3", "P4", "P3", "M2", "C4"])
    def test_catalog_grid(self, h, f, budget):
        for n in (4, 5):
            report = check_sandwich(n, make_named(h), make_named(f), budget)
            assert report.conclusive and not report.violations()


def test_certificate_family_is_a_family(budget):
    outcome = rb_exact(4, make_named("P3"), make_named("K3"), budget)
    family = outcome.certificate
    assert isinstance(family, CopyFamily)
    family.verify()
    assert len(family) == outcome.value
