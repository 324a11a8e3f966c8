"""
rtw.checks
==========

Seeded property suites over the solvers and the matching machinery.

Each suite returns a SuiteResult; a failing trial is shrunk by greedy
removal before it is recorded, so the dumped counterexample is minimal
with respect to single deletions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence, TypeVar

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from tqdm import tqdm

from rtw.enumeration import Copy, enumerate_copies
from rtw.extremal import Budget, SandwichViolation, check_sandwich, rb_exact
from rtw.graphcore import SmallGraph, complete_graph, make_named
from rtw.rainbow import (
    AugmentingPathError,
    CopyFamily,
    berge_contains,
    berge_view,
    find_rainbow,
    greedy_rainbow,
    matching_decomposition,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

SUITES = ("sandwich", "decomposition", "berge", "monotone", "greedy")


@dataclass
class SuiteResult:
    name: str
    seed: int
    trials: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    inconclusive: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "failures": self.failures,
        }


def shrink(items: Sequence[T], still_fails: Callable[[list], bool]) -> list:
    """Drop items one at a time while the failure persists."""
    current = list(items)
    changed = True
    while changed:
        changed = False
        for i in range(len(current)):
            candidate = current[:i] + current[i + 1 :]
            if still_fails(candidate):
                current = candidate
                changed = True
                break
    return current


def _edges(copies: Sequence[Copy]) -> List[List[List[int]]]:
    return [[list(e) for e in c.edges] for c in copies]


def _pick(rng: np.random.Generator, items: Sequence[T], k: int) -> List[T]:
    k = min(k, len(items))
    if k <= 0:
        return []
    return [items[i] for i in sorted(rng.choice(len(items), size=k, replace=False))]


# ========================================
# Suites
# ========================================


def sandwich_suite(
    ns: Sequence[int],
    catalog: Sequence[str],
    budget: Budget,
    seed: int = 0,
    seeded: bool = True,
    progress: bool = False,
) -> SuiteResult:
    """The inequality chain for every (H, F) over the catalog at each n."""
    result = SuiteResult("sandwich", seed)
    cases = [(n, h, f) for n in ns for h in catalog for f in catalog]
    for n, h_name, f_name in tqdm(cases, desc="sandwich", disable=not progress):
        result.trials += 1
        try:
            report = check_sandwich(n, make_named(h_name), make_named(f_name), budget, seeded)
        except SandwichViolation as exc:
            result.failures.append(
                {"n": n, "h": h_name, "f": f_name, "error": str(exc), **exc.report.values}
            )
            continue
        if not report.conclusive:
            result.inconclusive += 1
    return result


def _random_bipartite(rng: np.random.Generator, max_side: int) -> Dict[int, List[int]]:
    na, nb = (int(x) for x in rng.integers(1, max_side + 1, size=2))
    density = float(rng.uniform(0.05, 0.6))
    mask = rng.random((na, nb)) < density
    return {a: [int(b) for b in np.flatnonzero(mask[a])] for a in range(na)}


def _scipy_matching(adjacency: Dict[int, List[int]]) -> Dict[int, int]:
    rows = [a for a, bs in adjacency.items() for _ in bs]
    cols = [b for bs in adjacency.values() for b in bs]
    nb = max(cols, default=-1) + 1
    matrix = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(adjacency), max(nb, 1))
    )
    matched = maximum_bipartite_matching(matrix, perm_type="column")
    return {a: int(b) for a, b in enumerate(matched) if b >= 0}


def _decomposition_problems(adjacency: Dict[int, List[int]]) -> List[str]:
    matching = _scipy_matching(adjacency)
    try:
        split = matching_decomposition(adjacency, matching)
    except AugmentingPathError as exc:
        return [f"maximum matching rejected: {exc}"]
    return split.violations(adjacency, matching)


def decomposition_suite(
    trials: int, seed: int, max_side: int = 12, progress: bool = False
) -> SuiteResult:
    """Random bipartite graphs, maximum matching from scipy, invariant checks."""
    result = SuiteResult("decomposition", seed)
    rng = np.random.default_rng(seed)
    for _ in tqdm(range(trials), desc="decomposition", disable=not progress):
        result.trials += 1
        adjacency = _random_bipartite(rng, max_side)
        if not _decomposition_problems(adjacency):
            continue
        pairs = [(a, b) for a, bs in adjacency.items() for b in bs]

        def fails(kept: list, sides=tuple(adjacency)) -> bool:
            adj = {a: [b for x, b in kept if x == a] for a in sides}
            return bool(_decomposition_problems(adj))

        kept = shrink(pairs, fails)
        adj = {a: [b for x, b in kept if x == a] for a in adjacency}
        result.failures.append(
            {"edges": [list(p) for p in kept], "problems": _decomposition_problems(adj)}
        )
    return result


def berge_suite(
    trials: int,
    seed: int,
    n: int = 6,
    targets: Sequence[str] = ("K3", "P4", "C4"),
    progress: bool = False,
) -> SuiteResult:
    """Rainbow detection and Berge containment agree on random triangle families."""
    result = SuiteResult("berge", seed)
    rng = np.random.default_rng(seed)
    k3 = make_named("K3")
    triangles = enumerate_copies(complete_graph(n), k3)
    fs = {name: make_named(name) for name in targets}
    for _ in tqdm(range(trials), desc="berge", disable=not progress):
        size = int(rng.integers(0, len(triangles) // 2 + 1))
        family = CopyFamily(n, k3, tuple(_pick(rng, triangles, size)))
        for name, f in fs.items():
            result.trials += 1

            def disagree(copies: list, f=f) -> bool:
                fam = CopyFamily(n, k3, tuple(copies))
                return (find_rainbow(fam, f) is not None) != berge_contains(berge_view(fam), f, n)

            if disagree(list(family.copies)):
                kept = shrink(list(family.copies), disagree)
                result.failures.append({"f": name, "family": _edges(kept)})
    return result


def _covered_family(
    rng: np.random.Generator, candidates: Sequence[Copy], f_copy: Copy
) -> List[Copy]:
    """Random members so that every edge of ``f_copy`` lies in |E(f)| of them."""
    chosen: set[Copy] = set()
    for e in f_copy.edges:
        through = [c for c in candidates if e in c.edge_set]
        chosen.update(_pick(rng, through, len(f_copy)))
    extra = int(rng.integers(0, 4))
    chosen.update(_pick(rng, candidates, extra))
    order = sorted(chosen)
    return [order[i] for i in rng.permutation(len(order))]


def greedy_suite(
    trials: int,
    seed: int,
    n: int = 7,
    pairs: Sequence[tuple[str, str]] = (("K3", "K3"), ("P4", "P3"), ("C4", "M2"), ("K4", "P4")),
    progress: bool = False,
) -> SuiteResult:
    """Greedy picking succeeds whenever each edge of F has enough members."""
    result = SuiteResult("greedy", seed)
    rng = np.random.default_rng(seed)
    kn = complete_graph(n)
    pools = {}
    for h, f in pairs:
        pattern = make_named(h)
        pools[(h, f)] = (
            pattern,
            enumerate_copies(kn, pattern),
            enumerate_copies(kn, make_named(f)),
        )
    keys = list(pools)
    for _ in tqdm(range(trials), desc="greedy", disable=not progress):
        result.trials += 1
        h_name, f_name = keys[int(rng.integers(len(keys)))]
        h, candidates, f_copies = pools[(h_name, f_name)]
        f_copy = f_copies[int(rng.integers(len(f_copies)))]
        members = _covered_family(rng, candidates, f_copy)
        family = CopyFamily(n, h, tuple(members))
        outcome = greedy_rainbow(family, f_copy)
        if outcome.succeeded and outcome.witness.is_valid(family):
            continue
        result.failures.append(
            {
                "h": h_name,
                "f": f_name,
                "f_copy": [list(e) for e in f_copy.edges],
                "family": _edges(members),
                "failed_edge": list(outcome.failed_edge or ()),
            }
        )
    return result


def greedy_order_case() -> tuple[CopyFamily, Copy]:
    """
    A family where greedy picking gets stuck although a rainbow copy exists.

    Greedy hands edge (0, 1) to member 0, the only member containing (2, 3).
    """
    p4 = make_named("P4")
    family = CopyFamily(
        6,
        p4,
        (
            Copy.of([(0, 1), (1, 2), (2, 3)]),
            Copy.of([(0, 1), (1, 4), (4, 5)]),
        ),
    )
    return family, Copy.of([(0, 1), (2, 3)])


def monotone_suite(
    trials: int, seed: int, budget: Budget, progress: bool = False
) -> SuiteResult:
    """
    Monotonicity properties.

    - rainbow-freeness survives deleting a member; a rainbow copy survives
      adding one
    - rb(n, H, F) <= rb(n+1, H, F)
    - rb restricted to a subgraph host never exceeds rb on K_n
    """
    result = SuiteResult("monotone", seed)
    rng = np.random.default_rng(seed)
    n = 6
    k3 = make_named("K3")
    triangles = enumerate_copies(complete_graph(n), k3)
    targets = [make_named(name) for name in ("K3", "P4", "C4", "P3")]
    for _ in tqdm(range(trials), desc="monotone", disable=not progress):
        result.trials += 1
        f = targets[int(rng.integers(len(targets)))]
        size = int(rng.integers(1, 9))
        family = CopyFamily(n, k3, tuple(_pick(rng, triangles, size)))
        outside = [c for c in triangles if c not in family.copies]
        extras = _pick(rng, outside, 3)

        def violated(copies: list, f=f, extras=extras) -> bool:
            fam = CopyFamily(n, k3, tuple(copies))
            if find_rainbow(fam, f) is None:
                return any(find_rainbow(fam.without(i), f) is not None for i in range(len(fam)))
            return any(
                find_rainbow(CopyFamily(n, k3, fam.copies + (c,)), f) is None
                for c in extras
                if c not in fam.copies
            )

        if violated(list(family.copies)):
            kept = shrink(list(family.copies), violated)
            result.failures.append({"property": "member monotone", "family": _edges(kept)})

    def value(n: int, h: str, f: str, host: SmallGraph | None = None) -> int | None:
        outcome = rb_exact(n, make_named(h), make_named(f), budget, host=host)
        if not outcome.optimal:
            result.inconclusive += 1
            return None
        return outcome.value

    for h, f in (("P3", "P3"), ("K3", "K3"), ("M2", "M2"), ("P4", "P4")):
        result.trials += 1
        small, large = value(4, h, f), value(5, h, f)
        if small is not None and large is not None and small > large:
            result.failures.append({"property": "monotone in n", "h": h, "f": f,
                                    "rb4": small, "rb5": large})

    full = value(5, "K3", "K3")
    kn = complete_graph(5)
    for _ in range(max(1, min(trials // 40, 5))):
        result.trials += 1
        edges = kn.edges()
        keep = [e for e, drop in zip(edges, rng.random(len(edges)) < 0.2) if not drop]
        if len(keep) == len(edges):
            keep = keep[1:]
        host = SmallGraph.from_edges(5, keep)
        restricted = value(5, "K3", "K3", host=host)
        if full is not None and restricted is not None and restricted > full:
            result.failures.append({"property": "host irrelevance",
                                    "host": [list(e) for e in keep],
                                    "restricted": restricted, "full": full})
    return result


def run_suite(
    name: str,
    config: Dict[str, Any],
    seed: int | None = None,
    trials: int | None = None,
    progress: bool = False,
) -> SuiteResult:
    """Run one suite with parameters from the ``check`` config section."""
    section = config.get("check") or {}
    seed = int(section.get("seed", 0)) if seed is None else seed
    counts = section.get("trials") or {}

    def count(default: int) -> int:
        return trials if trials is not None else int(counts.get(name, default))

    if name == "sandwich":
        budget = Budget(**(section.get("sandwich_budget") or {}))
        result = sandwich_suite(
            section.get("sandwich_n", [4, 5]),
            section.get("sandwich_catalog", ["K3", "P4", "P3", "M2", "C4"]),
            budget,
            seed,
            bool((config.get("search") or {}).get("seed_with_generalized", True)),
            progress,
        )
    elif name == "decomposition":
        result = decomposition_suite(count(1000), seed, progress=progress)
    elif name == "berge":
        result = berge_suite(count(200), seed, progress=progress)
    elif name == "greedy":
        result = greedy_suite(count(1000), seed, progress=progress)
    elif name == "monotone":
        result = monotone_suite(count(200), seed, Budget.from_config(config), progress)
    else:
        raise ValueError(f"Unknown suite {name!r}; known: {list(SUITES)}")

    logger.info(
        f"Suite {name}: trials={result.trials} failures={len(result.failures)} "
        f"inconclusive={result.inconclusive}"
    )
    return result
