"""
rtw.extremal
============

Exact small-n solvers for ex(n, F), ex(n, H, F), ex^col(n, H, K2; F) and
rb(n, H, F), plus the cross-solver inequality check

    ex(n, H, F) <= rb(n, H, F) <= ex^col(n, H, K2; F) <= ex(n, H, F) + ex(n, F)

Every solver is a depth-first branch and bound over bit masks on the edge
set of K_n, returns a certificate attaining its value, and re-verifies that
certificate before returning.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Sequence

from rtw.enumeration import (
    Copy,
    RedBlueGraph,
    contains,
    count_colored,
    count_copies,
    enumerate_copies,
)
from rtw.graphcore import (
    SmallGraph,
    complete_graph,
    edge_index,
    make_named,
)
from rtw.rainbow import CopyFamily, RainbowTracker, find_rainbow
from rtw.utils import format_duration

logger = logging.getLogger(__name__)

# time is read once per this many nodes
_CLOCK_STRIDE = 1024


class Status(str, Enum):
    OPTIMAL = "optimal"
    LOWER_BOUND_ONLY = "lower_bound_only"


@dataclass(frozen=True)
class Budget:
    """
    Search limits for a single solver call.

    Attributes
    ----------
    max_nodes : int
        Search-tree nodes before giving up
    max_seconds : float
        Wall-clock seconds before giving up
    """

    max_nodes: int = 10**8
    max_seconds: float = 900.0

    def __post_init__(self) -> None:
        if self.max_nodes <= 0:
            raise ValueError(f"max_nodes must be positive, got {self.max_nodes}")
        if self.max_seconds <= 0:
            raise ValueError(f"max_seconds must be positive, got {self.max_seconds}")

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "Budget":
        section = config.get("budget") or {}
        return cls(
            max_nodes=int(section.get("max_nodes", cls.max_nodes)),
            max_seconds=float(section.get("max_seconds", cls.max_seconds)),
        )


@dataclass
class SearchStats:
    nodes: int = 0
    seconds: float = 0.0
    prunes: Dict[str, int] = field(default_factory=dict)
    cutoff: bool = False


@dataclass(frozen=True)
class SearchOutcome:
    """
    Solver result.

    ``status`` is ``optimal`` only when the search space was exhausted (or
    the caller's upper bound was reached) within budget.
    """

    value: int
    certificate: SmallGraph | RedBlueGraph | CopyFamily
    status: Status
    stats: SearchStats

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _OutOfBudget(Exception):
    pass


class _Cutoff(Exception):
    pass


class _Meter:
    """Node counter and clock shared by one solver call."""

    def __init__(self, budget: Budget):
        self.budget = budget
        self.nodes = 0
        self.prunes: Counter[str] = Counter()
        self.start = time.perf_counter()

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.nodes % _CLOCK_STRIDE == 0 and self.elapsed() > self.budget.max_seconds:
            raise _OutOfBudget

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def stats(self, cutoff: bool = False) -> SearchStats:
        return SearchStats(self.nodes, self.elapsed(), dict(sorted(self.prunes.items())), cutoff)


class _EdgeSpace:
    """Edges of K_n in lexicographic order with pattern-copy masks per edge."""

    def __init__(self, n: int):
        self.n = n
        self.kn = complete_graph(n)
        self.edges = self.kn.edges()
        self.bits = [1 << edge_index(u, v) for u, v in self.edges]
        # rest[k]: edges k.. as one mask
        self.rest = [0] * (len(self.edges) + 1)
        for k in range(len(self.edges) - 1, -1, -1):
            self.rest[k] = self.rest[k + 1] | self.bits[k]

    def copies(self, pattern: SmallGraph) -> list[int]:
        return [c.mask for c in enumerate_copies(self.kn, pattern)]

    def through(self, masks: Sequence[int]) -> list[list[int]]:
        """For each edge, the masks that contain it."""
        return [[m for m in masks if m & bit] for bit in self.bits]

    def graph(self, mask: int) -> SmallGraph:
        return SmallGraph.from_edges(
            self.n, [e for e, bit in zip(self.edges, self.bits) if mask & bit]
        )


def _require_edges(g: SmallGraph, role: str) -> None:
    if g.edge_count == 0:
        raise ValueError(f"{role} graph must have at least one edge")


def _count_within(masks: Sequence[int], mask: int) -> int:
    return sum(1 for m in masks if not m & ~mask)


def _finish(label: str, value: int, certificate, meter: _Meter, exhausted: bool, cutoff=False):
    status = Status.LOWER_BOUND_ONLY if exhausted else Status.OPTIMAL
    stats = meter.stats(cutoff)
    logger.info(
        f"{label}: value={value} status={status.value} nodes={stats.nodes} "
        f"time={format_duration(stats.seconds)}"
    )
    return SearchOutcome(value, certificate, status, stats)


# ========================================
# Graph solvers
# ========================================


def ex_edges(n: int, f: SmallGraph, budget: Budget | None = None) -> SearchOutcome:
    """
    Turán number ex(n, F): most edges in an F-free graph on ``n`` vertices.

    Parameters
    ----------
    n : int
        Vertex count (optimality is practical up to about 10)
    f : SmallGraph
        Forbidden graph with at least one edge
    budget : Budget, optional
        Search limits (default ``Budget()``)

    Returns
    -------
    outcome : SearchOutcome
        Certificate is an F-free SmallGraph with ``value`` edges

    Examples
    --------
    >>> ex_edges(4, make_named("K3")).value
    4
    """
    _require_edges(f, "Forbidden")
    budget = budget or Budget()
    space = _EdgeSpace(n)
    through_f = space.through(space.copies(f))
    m = len(space.edges)
    meter = _Meter(budget)
    best = [0, 0]

    def dfs(k: int, mask: int, count: int) -> None:
        meter.tick()
        if count > best[0]:
            best[:] = [count, mask]
        if k == m:
            return
        if count + m - k <= best[0]:
            meter.prunes["bound"] += 1
            return
        grown = mask | space.bits[k]
        if all(fm & ~grown for fm in through_f[k]):
            dfs(k + 1, grown, count + 1)
        else:
            meter.prunes["contains_f"] += 1
        dfs(k + 1, mask, count)

    exhausted = False
    try:
        dfs(0, 0, 0)
    except _OutOfBudget:
        exhausted = True

    certificate = space.graph(best[1])
    if contains(certificate, f) or certificate.edge_count != best[0]:
        raise RuntimeError("ex_edges certificate failed re-verification")
    return _finish(f"ex({n}, F)", best[0], certificate, meter, exhausted)


def ex_generalized(
    n: int, h: SmallGraph, f: SmallGraph, budget: Budget | None = None
) -> SearchOutcome:
    """
    Generalized Turán number ex(n, H, F): most copies of ``h`` in an F-free
    graph on ``n`` vertices.

    Same edge-insertion DFS as :func:`ex_edges`; a branch is cut when the
    copies of ``h`` inside the current graph plus all undecided edges cannot
    beat the incumbent.

    Examples
    --------
    >>> ex_generalized(5, make_named("K3"), make_named("K4")).value
    4
    """
    _require_edges(h, "Pattern")
    _require_edges(f, "Forbidden")
    budget = budget or Budget()
    space = _EdgeSpace(n)
    through_f = space.through(space.copies(f))
    h_masks = space.copies(h)
    through_h = space.through(h_masks)
    m = len(space.edges)
    meter = _Meter(budget)
    best = [0, 0]

    def dfs(k: int, mask: int, count: int) -> None:
        meter.tick()
        if count > best[0]:
            best[:] = [count, mask]
        if k == m:
            return
        if _count_within(h_masks, mask | space.rest[k]) <= best[0]:
            meter.prunes["bound"] += 1
            return
        grown = mask | space.bits[k]
        if all(fm & ~grown for fm in through_f[k]):
            dfs(k + 1, grown, count + _count_within(through_h[k], grown))
        else:
            meter.prunes["contains_f"] += 1
        dfs(k + 1, mask, count)

    exhausted = False
    try:
        dfs(0, 0, 0)
    except _OutOfBudget:
        exhausted = True

    certificate = space.graph(best[1])
    if contains(certificate, f) or count_copies(certificate, h) != best[0]:
        raise RuntimeError("ex_generalized certificate failed re-verification")
    return _finish(f"ex({n}, H, F)", best[0], certificate, meter, exhausted)


def ex_colored(
    n: int, h: SmallGraph, f: SmallGraph, budget: Budget | None = None
) -> SearchOutcome:
    """
    Coloured Turán number ex^col(n, H, K2; F).

    The maximum, over F-free graphs on ``n`` vertices and red/blue colourings
    of their edges, of red copies of ``h`` plus blue edges.

    Adding an edge never lowers the objective (colour it blue), so the outer
    graph search only colours edge-maximal F-free graphs. The inner search
    tries blue before red and bounds with every undecided edge counted both
    ways.

    Returns
    -------
    outcome : SearchOutcome
        Certificate is a RedBlueGraph

    Examples
    --------
    >>> ex_colored(4, make_named("C4"), make_named("F2")).value
    6
    """
    _require_edges(h, "Pattern")
    _require_edges(f, "Forbidden")
    budget = budget or Budget()
    space = _EdgeSpace(n)
    f_masks = space.copies(f)
    through_f = space.through(f_masks)
    h_masks = space.copies(h)
    m = len(space.edges)
    meter = _Meter(budget)
    best: list = [0, 0, 0]  # value, graph mask, red mask

    def addable(k: int, mask: int) -> bool:
        grown = mask | space.bits[k]
        return all(fm & ~grown for fm in through_f[k])

    def color(graph_mask: int) -> None:
        bits = [b for b in space.bits if graph_mask & b]
        inside = [hm for hm in h_masks if not hm & ~graph_mask]
        in_some = [any(hm & b for hm in inside) for b in bits]
        suffix = [0] * (len(bits) + 1)
        for i in range(len(bits) - 1, -1, -1):
            suffix[i] = suffix[i + 1] | bits[i]

        def assign(i: int, red: int, blue: int) -> None:
            meter.tick()
            bound = _count_within(inside, red | suffix[i]) + blue + len(bits) - i
            if bound <= best[0]:
                meter.prunes["color_bound"] += 1
                return
            if i == len(bits):
                best[:] = [bound, graph_mask, red]
                return
            assign(i + 1, red, blue + 1)
            if in_some[i]:
                assign(i + 1, red | bits[i], blue)

        assign(0, 0, 0)

    def dfs(k: int, mask: int) -> None:
        meter.tick()
        possible = mask | space.rest[k]
        if _count_within(h_masks, possible) + possible.bit_count() <= best[0]:
            meter.prunes["bound"] += 1
            return
        if k == m:
            if any(not mask & space.bits[j] and addable(j, mask) for j in range(m)):
                meter.prunes["not_maximal"] += 1
                return
            color(mask)
            return
        if addable(k, mask):
            dfs(k + 1, mask | space.bits[k])
        else:
            meter.prunes["contains_f"] += 1
        dfs(k + 1, mask)

    exhausted = False
    try:
        dfs(0, 0)
    except _OutOfBudget:
        exhausted = True

    value, graph_mask, red_mask = best
    graph = space.graph(graph_mask)
    red = [e for e, bit in zip(space.edges, space.bits) if red_mask & bit]
    certificate = RedBlueGraph(graph, frozenset(red))
    if contains(graph, f) or count_colored(certificate, h, make_named("K2")) != value:
        raise RuntimeError("ex_colored certificate failed re-verification")
    return _finish(f"ex_col({n}, H, K2; F)", value, certificate, meter, exhausted)


# ========================================
# Rainbow solver
# ========================================


def rb_exact(
    n: int,
    h: SmallGraph,
    f: SmallGraph,
    budget: Budget | None = None,
    *,
    host: SmallGraph | None = None,
    seed: Sequence[Copy] | CopyFamily | None = None,
    upper_bound: int | None = None,
    use_root_symmetry: bool = True,
) -> SearchOutcome:
    """
    Rainbow Turán number rb(n, H, F): the largest rainbow-F-free family of
    copies of ``h`` on ``n`` vertices.

    Parameters
    ----------
    n : int
        Vertex count
    h, f : SmallGraph
        Pattern and target, both with at least one edge
    budget : Budget, optional
        Search limits
    host : SmallGraph, optional
        Only copies inside this graph are candidates (default K_n); root
        symmetry is disabled for any other host
    seed : family of copies, optional
        A known rainbow-F-free family used as the starting incumbent
    upper_bound : int, optional
        A proven upper bound; the search stops as soon as it is reached
    use_root_symmetry : bool, default=True
        On K_n every copy of ``h`` is equivalent, so a non-empty family can be
        assumed to contain the first copy

    Returns
    -------
    outcome : SearchOutcome
        Certificate is the rainbow-F-free CopyFamily of size ``value``;
        among equal sizes the first found in include-first order

    Examples
    --------
    >>> rb_exact(5, make_named("P4"), make_named("P4")).value
    2
    """
    _require_edges(h, "Pattern")
    _require_edges(f, "Forbidden")
    budget = budget or Budget()
    if host is not None and host.n != n:
        raise ValueError(f"Host has {host.n} vertices, expected {n}")
    symmetric = use_root_symmetry and host is None
    host = host if host is not None else complete_graph(n)
    candidates = enumerate_copies(host, h)
    position = {c: i for i, c in enumerate(candidates)}
    tracker = RainbowTracker(candidates, f, n)
    meter = _Meter(budget)

    incumbent: list[int] = []
    if seed is not None:
        seed_copies = seed.copies if isinstance(seed, CopyFamily) else tuple(seed)
        missing = [c for c in seed_copies if c not in position]
        if missing:
            raise ValueError(f"Seed copies are not copies of the pattern in the host: {missing}")
        incumbent = sorted(position[c] for c in set(seed_copies))
        if find_rainbow(CopyFamily(n, h, tuple(candidates[i] for i in incumbent)), f):
            raise ValueError("Seed family contains a rainbow copy of the target")
    best = [len(incumbent), incumbent]

    def expand(cands: list[int], size: int) -> None:
        meter.tick()
        if size > best[0]:
            best[:] = [size, list(tracker.members)]
            if upper_bound is not None and size >= upper_bound:
                raise _Cutoff
        for pos, c in enumerate(cands):
            if size + len(cands) - pos <= best[0]:
                meter.prunes["bound"] += 1
                return
            tracker.add(c)
            following = cands[pos + 1 :]
            feasible = [d for d in following if tracker.can_add(d)]
            meter.prunes["rainbow"] += len(following) - len(feasible)
            expand(feasible, size + 1)
            tracker.pop()

    exhausted = cutoff = False
    try:
        if upper_bound is not None and best[0] >= upper_bound:
            raise _Cutoff
        roots = [c for c in range(len(candidates)) if tracker.can_add(c)]
        if symmetric and roots:
            # every copy is equivalent on K_n, so roots is all or nothing
            meter.tick()
            tracker.add(0)
            expand([d for d in range(1, len(candidates)) if tracker.can_add(d)], 1)
            tracker.pop()
        else:
            expand(roots, 0)
    except _OutOfBudget:
        exhausted = True
    except _Cutoff:
        cutoff = True

    value = best[0]
    family = CopyFamily(n, h, tuple(candidates[i] for i in sorted(best[1])))
    if len(family) != value or find_rainbow(family, f) is not None:
        raise RuntimeError("rb_exact certificate failed re-verification")
    meter.prunes["rechecks"] = tracker.rechecks
    return _finish(f"rb({n}, H, F)", value, family, meter, exhausted, cutoff)


# ========================================
# Sandwich check
# ========================================


class SandwichViolation(AssertionError):
    """The inequality chain failed; carries the report with all certificates."""

    def __init__(self, message: str, report: "SandwichReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SandwichReport:
    n: int
    h: SmallGraph
    f: SmallGraph
    ex_f: SearchOutcome
    ex_hf: SearchOutcome
    ex_col: SearchOutcome
    rb: SearchOutcome
    seeded: bool
    cutoff: bool

    @property
    def conclusive(self) -> bool:
        return all(o.optimal for o in (self.ex_f, self.ex_hf, self.ex_col, self.rb))

    @property
    def values(self) -> Dict[str, int]:
        return {
            "ex_hf": self.ex_hf.value,
            "rb": self.rb.value,
            "ex_col": self.ex_col.value,
            "ex_hf_plus_ex_f": self.ex_hf.value + self.ex_f.value,
        }

    def violations(self) -> list[str]:
        v = self.values
        chain = [
            ("ex(n,H,F)", v["ex_hf"], "rb(n,H,F)", v["rb"]),
            ("rb(n,H,F)", v["rb"], "ex_col(n,H,K2;F)", v["ex_col"]),
            ("ex_col(n,H,K2;F)", v["ex_col"], "ex(n,H,F)+ex(n,F)", v["ex_hf_plus_ex_f"]),
        ]
        return [f"{a}={x} > {b}={y}" for a, x, b, y in chain if x > y]


def check_sandwich(
    n: int,
    h: SmallGraph,
    f: SmallGraph,
    budget: Budget | None = None,
    seeded: bool = True,
) -> SandwichReport:
    """
    Run all four solvers and check
    ex(n,H,F) <= rb(n,H,F) <= ex^col(n,H,K2;F) <= ex(n,H,F) + ex(n,F).

    With ``seeded`` the rainbow search starts from the copies of ``h`` in the
    ex(n,H,F) certificate and stops once it reaches ex^col; the report
    records this, since the middle inequality then holds by construction.

    Raises
    ------
    SandwichViolation
        All four solvers are optimal and an inequality fails
    """
    ex_f = ex_edges(n, f, budget)
    ex_hf = ex_generalized(n, h, f, budget)
    ex_col = ex_colored(n, h, f, budget)
    seed = None
    upper = None
    if seeded:
        seed = enumerate_copies(ex_hf.certificate, h)
        upper = ex_col.value if ex_col.optimal else None
    rb = rb_exact(n, h, f, budget, seed=seed, upper_bound=upper)

    report = SandwichReport(n, h, f, ex_f, ex_hf, ex_col, rb, seeded, rb.stats.cutoff)
    if not report.conclusive:
        logger.warning(f"Sandwich at n={n} inconclusive: a solver ran out of budget")
        return report
    problems = report.violations()
    if problems:
        raise SandwichViolation(f"Sandwich chain violated at n={n}: {'; '.join(problems)}", report)
    logger.info(f"Sandwich at n={n} holds: {report.values}")
    return report
