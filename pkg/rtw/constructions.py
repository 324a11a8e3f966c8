"""
rtw.constructions
=================

Lower-bound families for rb(n, H, F), each returned with a report that
re-checks its size and its rainbow-freeness by independent calls.

Vertex layouts are fixed, so every family is reproducible byte for byte:

- ``p4``: a=0, b=1, d=2, c_i = 3..n-1; paths a-b-c_i-d
- ``oddcycle``: block j holds u_i = 2kj+i-1 and v_i = 2kj+k+i-1 (i = 1..k),
  then w_l = 2km + l; cycles w_l u_k .. u_1 v_1 .. v_k w_l
- ``book``: u_i = 2i, v_i = 2i+1 (i < n//4), then w_1..w_{t-1}, then x_j
- ``blowup``: clone blocks in host-vertex order
- ``m2``: the three perfect matchings of K4 on {0, 1, 2, 3}
- ``c4f2``: parts 0..n//2-1 and n//2..n-1, red edge (n//2, n//2+1)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping

from rtw.enumeration import Copy, RedBlueGraph, contains
from rtw.graphcore import (
    MAX_VERTICES,
    CapacityError,
    SmallGraph,
    bipartition,
    graph_from_spec,
    make_named,
)
from rtw.rainbow import CopyFamily, RainbowWitness, find_rainbow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstructionReport:
    """
    A generated family with its counting claim and rainbow status.

    Attributes
    ----------
    name : str
        Construction name as addressed from the CLI
    family : CopyFamily
        Generated copies
    claimed_size : int
        Closed-form size of the family
    rainbow_free : bool
        Whether ``find_rainbow(family, f_target)`` found nothing
    f_target : SmallGraph
        Target graph the family was checked against
    witness : RainbowWitness, optional
        The rainbow copy found, when there is one
    details : dict
        Construction parameters and layout facts
    """

    name: str
    family: CopyFamily
    claimed_size: int
    rainbow_free: bool
    f_target: SmallGraph
    witness: RainbowWitness | None = None
    details: Mapping[str, Any] = field(default_factory=dict)

    def verify(self) -> None:
        """Re-check size and rainbow status; raises ValueError on mismatch."""
        if len(self.family) != self.claimed_size:
            raise ValueError(
                f"{self.name}: {len(self.family)} copies, claimed {self.claimed_size}"
            )
        self.family.verify()
        found = find_rainbow(self.family, self.f_target)
        if (found is None) != self.rainbow_free:
            raise ValueError(f"{self.name}: rainbow status does not re-verify")

    def rainbow_free_against(self, f: SmallGraph) -> bool:
        return find_rainbow(self.family, f) is None

    def summary(self) -> Dict[str, Any]:
        return {
            "construction": self.name,
            "n_host": self.family.n_host,
            "copies": len(self.family),
            "claimed_size": self.claimed_size,
            "rainbow_free": self.rainbow_free,
            **dict(self.details),
        }


def _report(
    name: str,
    family: CopyFamily,
    claimed_size: int,
    f_target: SmallGraph,
    details: Mapping[str, Any] | None = None,
) -> ConstructionReport:
    witness = find_rainbow(family, f_target)
    report = ConstructionReport(
        name=name,
        family=family,
        claimed_size=claimed_size,
        rainbow_free=witness is None,
        f_target=f_target,
        witness=witness,
        details=dict(details or {}),
    )
    logger.info(
        f"{name}: {len(family)} copies on {family.n_host} vertices, "
        f"rainbow_free={report.rainbow_free}"
    )
    return report


def _check_vertices(n: int) -> None:
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the {MAX_VERTICES}-vertex cap")


def _family(n: int, pattern: SmallGraph, copies) -> CopyFamily:
    return CopyFamily(n, pattern, tuple(sorted(Copy.of(edges) for edges in copies)))


# ========================================
# Constructions
# ========================================


def p4_construction(n: int) -> ConstructionReport:
    """
    ``n - 3`` paths a-b-c_i-d sharing the edge ab; the middle vertices b and
    d of each path are not adjacent.

    Examples
    --------
    >>> len(p4_construction(5).family)
    2
    """
    if n < 4:
        raise ValueError(f"p4 construction needs n >= 4, got {n}")
    _check_vertices(n)
    a, b, d = 0, 1, 2
    copies = [[(a, b), (b, c), (c, d)] for c in range(3, n)]
    return _report("p4", _family(n, make_named("P4"), copies), n - 3, make_named("P4"), {"n": n})


def odd_cycle_construction(n: int, k: int) -> ConstructionReport:
    """
    Copies of C_{2k+1} built from ``m = n // 4k`` blocks of u/v paths, every
    block closed into a cycle through each of the ``n - 2km`` w-vertices.

    Each edge at a w-vertex lies in a single copy, so no copy of C_{2k+1} in
    the union can be rainbow.

    Examples
    --------
    >>> len(odd_cycle_construction(8, 1).family)
    8
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < 4 * k + 1:
        raise ValueError(f"oddcycle construction needs n >= 4k+1 = {4 * k + 1}, got {n}")
    _check_vertices(n)
    m = n // (4 * k)
    w_count = n - 2 * k * m
    copies = []
    for j in range(m):
        u = [2 * k * j + i for i in range(k)]
        v = [2 * k * j + k + i for i in range(k)]
        path = list(reversed(u)) + v  # u_k .. u_1 v_1 .. v_k
        inner = list(zip(path, path[1:]))
        for ell in range(w_count):
            w = 2 * k * m + ell
            copies.append(inner + [(w, path[0]), (path[-1], w)])
    cycle = make_named(f"C{2 * k + 1}")
    return _report(
        "oddcycle",
        _family(n, cycle, copies),
        m * (n - 2 * k * m),
        cycle,
        {"n": n, "k": k, "blocks": m, "w_vertices": w_count},
    )


def book_construction(n: int, t: int, r: int | None = None) -> ConstructionReport:
    """
    ``n//4 * (n - 2*(n//4) - t + 1)`` copies of the book B_t.

    Block i has rootlets u_i, v_i and pages w_1..w_{t-1} shared by the whole
    block plus one private page x_j per copy. A private page's two edges lie
    in a single copy, which rules out a rainbow B_r for every r >= t.

    Parameters
    ----------
    n : int
        Host size (at most 32)
    t : int
        Pages of each copy, at least 2
    r : int, optional
        Pages of the target book (default ``t``)
    """
    r = t if r is None else r
    if t < 2:
        raise ValueError(f"book construction needs t >= 2, got {t}")
    if r < t:
        raise ValueError(f"Target book B{r} must have at least t={t} pages")
    _check_vertices(n)
    q = n // 4
    x_count = n - 2 * q - t + 1
    if q < 1 or x_count < 1:
        raise ValueError(f"n={n} is too small for book construction with t={t}")
    w = [2 * q + i for i in range(t - 1)]
    x = [2 * q + t - 1 + j for j in range(x_count)]
    copies = []
    for i in range(q):
        u, v = 2 * i, 2 * i + 1
        shared = [(u, v)] + [(root, p) for p in w for root in (u, v)]
        for xj in x:
            copies.append(shared + [(u, xj), (v, xj)])
    return _report(
        "book",
        _family(n, make_named(f"B{t}"), copies),
        q * x_count,
        make_named(f"B{r}"),
        {"n": n, "t": t, "r": r},
    )


def _local_max_cut(g: SmallGraph) -> list[int]:
    """Sides from evens/odds; flip the lowest vertex with more same-side neighbours."""
    side = [v % 2 for v in range(g.n)]
    while True:
        for v in range(g.n):
            same = sum(1 for w in g.neighbors(v) if side[w] == side[v])
            if same > g.degree(v) - same:
                side[v] ^= 1
                break
        else:
            return side


def blowup_construction(f: SmallGraph, g_host: SmallGraph) -> ConstructionReport:
    """
    Blow an F-free host up into a family of copies of a bipartite ``f``.

    A cut of ``g_host`` with at least half its edges is found by local search.
    With ``f``'s parts of sizes s and t, every host vertex on the first side
    of the cut becomes s clones and every other vertex t clones; each cut
    edge xy yields one copy of ``f`` whose first part sits on the clones of x
    and second part on the clones of y.

    Raises
    ------
    ValueError
        ``f`` is not bipartite, or ``g_host`` contains ``f``
    CapacityError
        The blown-up host exceeds 32 vertices
    """
    parts = bipartition(f)
    if parts is None or f.edge_count == 0:
        raise ValueError("blowup construction needs a bipartite f with at least one edge")
    if contains(g_host, f):
        raise ValueError("Host graph contains f")
    side_f0, side_f1 = parts
    s, t = len(side_f0), len(side_f1)

    side = _local_max_cut(g_host)
    cut = [(x, y) for x, y in g_host.edges() if side[x] != side[y]]
    blocks: list[list[int]] = []
    total = 0
    for x in range(g_host.n):
        size = s if side[x] == 0 else t
        blocks.append(list(range(total, total + size)))
        total += size
    _check_vertices(total)

    copies = []
    for x, y in cut:
        a, b = (x, y) if side[x] == 0 else (y, x)
        image = dict(zip(side_f0, blocks[a])) | dict(zip(side_f1, blocks[b]))
        copies.append([(image[p], image[q]) for p, q in f.edges()])
    return _report(
        "blowup",
        _family(total, f, copies),
        len(cut),
        f,
        {"host_edges": g_host.edge_count, "cut_edges": len(cut), "parts": [s, t]},
    )


def m2_construction(n: int) -> ConstructionReport:
    """The three perfect matchings of K4 on {0, 1, 2, 3}, on ``n`` vertices."""
    if n < 4:
        raise ValueError(f"m2 construction needs n >= 4, got {n}")
    _check_vertices(n)
    copies = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]
    return _report("m2", _family(n, make_named("M2"), copies), 3, make_named("M2"), {"n": n})


def c4_f2_colored_construction(n: int) -> RedBlueGraph:
    """
    Blue balanced complete bipartite graph plus one red edge inside the
    second (larger) part, between its two lowest vertices.

    The graph is checked to be F2-free.

    Examples
    --------
    >>> len(c4_f2_colored_construction(6).blue)
    9
    """
    if n < 4:
        raise ValueError(f"c4f2 construction needs n >= 4, got {n}")
    _check_vertices(n)
    half = n // 2
    blue = [(u, v) for u in range(half) for v in range(half, n)]
    red = (half, half + 1)
    graph = SmallGraph.from_edges(n, blue + [red])
    if contains(graph, make_named("F2")):
        raise RuntimeError(f"c4f2 construction at n={n} contains F2")
    return RedBlueGraph(graph, frozenset([red]))


# ========================================
# Registry
# ========================================


@dataclass(frozen=True)
class _Entry:
    builder: Callable[..., ConstructionReport | RedBlueGraph]
    required: Mapping[str, Callable[[str], Any]]
    optional: Mapping[str, Callable[[str], Any]] = field(default_factory=dict)


CONSTRUCTIONS: Dict[str, _Entry] = {
    "p4": _Entry(p4_construction, {"n": int}),
    "oddcycle": _Entry(odd_cycle_construction, {"n": int, "k": int}),
    "book": _Entry(book_construction, {"n": int, "t": int}, {"r": int}),
    "blowup": _Entry(
        lambda f, host: blowup_construction(f, host),
        {"f": graph_from_spec, "host": graph_from_spec},
    ),
    "m2": _Entry(m2_construction, {"n": int}),
    "c4f2": _Entry(c4_f2_colored_construction, {"n": int}),
}


def parse_construction(text: str) -> tuple[str, Dict[str, Any]]:
    """
    Split ``name:key=value,...`` into a name and converted parameters.

    Examples
    --------
    >>> parse_construction("book:n=32,t=2,r=3")
    ('book', {'n': 32, 't': 2, 'r': 3})
    """
    name, _, rest = text.strip().partition(":")
    if name not in CONSTRUCTIONS:
        raise ValueError(f"Unknown construction {name!r}; known: {sorted(CONSTRUCTIONS)}")
    entry = CONSTRUCTIONS[name]
    accepted = {**entry.required, **entry.optional}
    params: Dict[str, Any] = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep or key not in accepted:
            raise ValueError(f"Bad parameter {item!r} for {name}; accepted: {sorted(accepted)}")
        params[key] = accepted[key](value)
    missing = sorted(set(entry.required) - set(params))
    if missing:
        raise ValueError(f"{name} is missing parameters: {missing}")
    return name, params


def build_construction(text: str) -> ConstructionReport | RedBlueGraph:
    """Build a construction from its CLI spec, e.g. ``oddcycle:n=32,k=1``."""
    name, params = parse_construction(text)
    return CONSTRUCTIONS[name].builder(**params)
