"""
rtw.graphcore
=============

Small-graph representation, the named-graph catalog, isomorphism testing,
chromatic number and graph6 serialization.

Graphs live on at most 32 vertices; each adjacency row is a bit mask, so a
whole graph is a tuple of machine-word integers.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

import networkx as nx

logger = logging.getLogger(__name__)

MAX_VERTICES = 32
MAX_ISOMORPHISM_VERTICES = 10
MAX_CHROMATIC_VERTICES = 16

Edge = tuple[int, int]


class CapacityError(ValueError):
    """A size limit of the workbench was exceeded."""


class Graph6Error(ValueError):
    """Malformed graph6 text."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class CatalogError(ValueError):
    """A catalog spec string could not be parsed."""


def normalize_edge(u: int, v: int) -> Edge:
    """Return the edge ``{u, v}`` as a low-vertex-first pair."""
    if u == v:
        raise ValueError(f"Loop at vertex {u} is not an edge")
    return (u, v) if u < v else (v, u)


def edge_index(u: int, v: int) -> int:
    """
    Position of edge ``{u, v}`` in the colex order of all vertex pairs.

    The index does not depend on the host size, so edge masks built for
    K_n stay valid inside K_m for every m >= n.
    """
    u, v = normalize_edge(u, v)
    return v * (v - 1) // 2 + u


def edge_mask(edges: Iterable[Edge]) -> int:
    """Bit mask of an edge collection over colex edge indices."""
    mask = 0
    for u, v in edges:
        mask |= 1 << edge_index(u, v)
    return mask


def _check_capacity(n: int) -> None:
    if n < 0:
        raise ValueError(f"Vertex count must be non-negative, got {n}")
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the {MAX_VERTICES}-vertex cap")


@dataclass(frozen=True)
class SmallGraph:
    """
    Undirected simple graph on ``n <= 32`` vertices.

    Attributes
    ----------
    n : int
        Vertex count; vertices are ``0 .. n-1``
    rows : tuple of int
        ``rows[u]`` has bit ``v`` set iff ``{u, v}`` is an edge
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_capacity(self.n)
        if len(self.rows) != self.n:
            raise ValueError(f"Expected {self.n} adjacency rows, got {len(self.rows)}")
        limit = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~limit:
                raise ValueError(f"Row {u} references a vertex >= {self.n}")
            if row >> u & 1:
                raise ValueError(f"Loop at vertex {u}")
            for v in iter_bits(row):
                if not self.rows[v] >> u & 1:
                    raise ValueError(f"Adjacency is not symmetric at ({u}, {v})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "SmallGraph":
        """Build a graph on ``n`` vertices from an edge iterable."""
        _check_capacity(n)
        rows = [0] * n
        for u, v in edges:
            u, v = normalize_edge(u, v)
            if v >= n or u < 0:
                raise ValueError(f"Edge ({u}, {v}) outside vertex range [0, {n})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "SmallGraph":
        return cls.from_edges(n, ())

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.rows[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def neighbors(self, u: int) -> list[int]:
        return list(iter_bits(self.rows[u]))

    def edges(self) -> list[Edge]:
        """Edges as sorted low-vertex-first pairs."""
        return [
            (u, v) for u in range(self.n) for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1))
        ]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def mask(self) -> int:
        """Edge mask over colex edge indices."""
        return edge_mask(self.edges())

    def with_isolated(self, extra: int) -> "SmallGraph":
        """Same graph with ``extra`` isolated vertices appended."""
        return SmallGraph.from_edges(self.n + extra, self.edges())

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ========================================
# Catalog
# ========================================


class CatalogKind(str, Enum):
    PATH = "P"
    CYCLE = "C"
    CLIQUE = "K"
    COMPLETE_BIPARTITE = "Kab"
    MATCHING = "M"
    BOOK = "B"
    TWO_TRIANGLES = "F2"
    TURAN = "T"
    EMPTY = "E"


@dataclass(frozen=True)
class CatalogSpec:
    """A named graph from the catalog, e.g. ``CatalogSpec(CatalogKind.PATH, (4,))``."""

    kind: CatalogKind
    params: tuple[int, ...] = ()

    @property
    def name(self) -> str:
        if self.kind is CatalogKind.TWO_TRIANGLES:
            return "F2"
        if self.kind is CatalogKind.COMPLETE_BIPARTITE:
            return f"K{self.params[0]},{self.params[1]}"
        if self.kind is CatalogKind.TURAN:
            return f"T{self.params[0]},{self.params[1]}"
        return f"{self.kind.value}{self.params[0]}"


_ARITY = {
    CatalogKind.PATH: 1,
    CatalogKind.CYCLE: 1,
    CatalogKind.CLIQUE: 1,
    CatalogKind.COMPLETE_BIPARTITE: 2,
    CatalogKind.MATCHING: 1,
    CatalogKind.BOOK: 1,
    CatalogKind.TWO_TRIANGLES: 0,
    CatalogKind.TURAN: 2,
    CatalogKind.EMPTY: 1,
}

_SPEC_PATTERN = re.compile(r"^\s*([PCKMBTEF])(\d+)(?:,(\d+))?\s*$")


def parse_catalog(text: str) -> CatalogSpec:
    """
    Parse a catalog spec string.

    Parameters
    ----------
    text : str
        One of ``P4``, ``C5``, ``K3``, ``K2,3``, ``B2``, ``M2``, ``F2``,
        ``T6,3``, ``E5``

    Returns
    -------
    spec : CatalogSpec

    Examples
    --------
    >>> parse_catalog("K2,3").params
    (2, 3)
    """
    match = _SPEC_PATTERN.match(text)
    if not match:
        raise CatalogError(f"Unrecognized graph spec: {text!r}")
    letter, first, second = match.group(1), int(match.group(2)), match.group(3)
    if letter == "F":
        if first != 2 or second is not None:
            raise CatalogError(f"Only F2 is in the catalog, got {text!r}")
        return CatalogSpec(CatalogKind.TWO_TRIANGLES)
    if letter == "K" and second is not None:
        return CatalogSpec(CatalogKind.COMPLETE_BIPARTITE, (first, int(second)))
    if letter == "T":
        if second is None:
            raise CatalogError(f"Turan spec needs two parameters: {text!r}")
        return CatalogSpec(CatalogKind.TURAN, (first, int(second)))
    if second is not None:
        raise CatalogError(f"{letter} takes a single parameter: {text!r}")
    kind = {
        "P": CatalogKind.PATH,
        "C": CatalogKind.CYCLE,
        "K": CatalogKind.CLIQUE,
        "M": CatalogKind.MATCHING,
        "B": CatalogKind.BOOK,
        "E": CatalogKind.EMPTY,
    }[letter]
    return CatalogSpec(kind, (first,))


def make_named(spec: CatalogSpec | str) -> SmallGraph:
    """
    Build the canonical graph for a catalog spec.

    Vertex labelings:

    - ``P_k``: path ``0-1-...-(k-1)``
    - ``C_k``: cycle ``0-1-...-(k-1)-0``
    - ``K_r``: vertices ``0..r-1``
    - ``K_{a,b}``: parts ``0..a-1`` and ``a..a+b-1``
    - ``M_k``: edges ``(2i, 2i+1)``
    - ``B_t``: rootlets ``0, 1``; pages ``2..t+1``
    - ``F2``: shared vertex ``0``; triangles ``0-1-2`` and ``0-3-4``
    - ``T(n, r)``: contiguous parts, the first ``n mod r`` parts one larger
    - ``E_n``: ``n`` isolated vertices
    """
    if isinstance(spec, str):
        spec = parse_catalog(spec)
    kind, params = spec.kind, spec.params
    if len(params) != _ARITY[kind]:
        raise CatalogError(f"{kind.name} takes {_ARITY[kind]} parameter(s), got {params}")

    if kind is CatalogKind.EMPTY:
        if params[0] < 0:
            raise CatalogError(f"Empty graph size must be >= 0, got {params[0]}")
        return SmallGraph.empty(params[0])
    if any(p < 1 for p in params):
        raise CatalogError(f"Catalog parameters must be positive: {spec.name}")

    if kind is CatalogKind.PATH:
        k = params[0]
        return SmallGraph.from_edges(k, [(i, i + 1) for i in range(k - 1)])
    if kind is CatalogKind.CYCLE:
        k = params[0]
        if k < 3:
            raise CatalogError(f"Cycles need at least 3 vertices, got C{k}")
        return SmallGraph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])
    if kind is CatalogKind.CLIQUE:
        r = params[0]
        return SmallGraph.from_edges(r, [(u, v) for u in range(r) for v in range(u + 1, r)])
    if kind is CatalogKind.COMPLETE_BIPARTITE:
        a, b = params
        return SmallGraph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])
    if kind is CatalogKind.MATCHING:
        k = params[0]
        return SmallGraph.from_edges(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])
    if kind is CatalogKind.BOOK:
        t = params[0]
        edges = [(0, 1)] + [(r, p) for p in range(2, t + 2) for r in (0, 1)]
        return SmallGraph.from_edges(t + 2, edges)
    if kind is CatalogKind.TWO_TRIANGLES:
        return SmallGraph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
    if kind is CatalogKind.TURAN:
        return turan_graph(*params)
    raise CatalogError(f"Unhandled catalog kind: {kind}")


def turan_graph(n: int, r: int) -> SmallGraph:
    """Complete r-partite graph on n vertices with parts as equal as possible."""
    if n < 1 or r < 1:
        raise CatalogError(f"Turan graph needs positive parameters, got T{n},{r}")
    _check_capacity(n)
    part = []
    for index in range(r):
        size = n // r + (1 if index < n % r else 0)
        part.extend([index] * size)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]]
    return SmallGraph.from_edges(n, edges)


def complete_graph(n: int) -> SmallGraph:
    return SmallGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def graph_from_spec(text: str) -> SmallGraph:
    """Catalog spec string, falling back to graph6 text."""
    try:
        return make_named(parse_catalog(text))
    except CatalogError:
        return parse_graph6(text)


# ========================================
# Edits
# ========================================


def remove_edge(g: SmallGraph, u: int, v: int) -> SmallGraph:
    """Delete edge ``{u, v}``; raises ValueError on a non-edge."""
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    rows = list(g.rows)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    return SmallGraph(g.n, tuple(rows))


def union_graph(edge_sets: Iterable[Iterable[Edge]], n: int) -> SmallGraph:
    """Union of edge sets as a graph on ``n`` vertices."""
    return SmallGraph.from_edges(n, (e for edges in edge_sets for e in edges))


# ========================================
# Isomorphism and colouring
# ========================================


def search_order(g: SmallGraph) -> list[int]:
    """Vertices ordered so each next vertex has the most already-placed neighbours."""
    remaining = set(range(g.n))
    order: list[int] = []
    placed = 0
    while remaining:
        best = max(
            remaining,
            key=lambda v: ((g.rows[v] & placed).bit_count(), g.degree(v), -v),
        )
        order.append(best)
        placed |= 1 << best
        remaining.remove(best)
    return order


def is_isomorphic(g1: SmallGraph, g2: SmallGraph) -> bool:
    """
    Exact isomorphism test by pruned permutation search.

    Parameters
    ----------
    g1, g2 : SmallGraph
        Graphs on at most 10 vertices

    Returns
    -------
    isomorphic : bool
        True iff an adjacency-preserving vertex bijection exists
    """
    if max(g1.n, g2.n) > MAX_ISOMORPHISM_VERTICES:
        raise CapacityError(
            f"Isomorphism testing is limited to {MAX_ISOMORPHISM_VERTICES} vertices"
        )
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False

    order = search_order(g1)
    image = [-1] * g1.n

    def extend(depth: int, used: int) -> bool:
        if depth == len(order):
            return True
        v = order[depth]
        for w in range(g2.n):
            if used >> w & 1 or g2.degree(w) != g1.degree(v):
                continue
            if all(
                g1.has_edge(v, order[i]) == g2.has_edge(w, image[order[i]])
                for i in range(depth)
            ):
                image[v] = w
                if extend(depth + 1, used | 1 << w):
                    return True
        image[v] = -1
        return False

    return extend(0, 0)


def chromatic_number(g: SmallGraph) -> int:
    """
    Smallest k admitting a proper k-colouring (exhaustive search, k from 1).

    Examples
    --------
    >>> chromatic_number(make_named("C5"))
    3
    """
    if g.n > MAX_CHROMATIC_VERTICES:
        raise CapacityError(f"Chromatic number is limited to {MAX_CHROMATIC_VERTICES} vertices")
    if g.n == 0:
        return 0
    order = search_order(g)
    for k in range(1, g.n + 1):
        if _colorable(g, order, k):
            return k
    return g.n


def _colorable(g: SmallGraph, order: Sequence[int], k: int) -> bool:
    color = [-1] * g.n

    def assign(depth: int, used: int) -> bool:
        if depth == len(order):
            return True
        v = order[depth]
        forbidden = {color[w] for w in iter_bits(g.rows[v]) if color[w] >= 0}
        # a fresh colour is interchangeable with any other unused one
        for c in range(min(k, used + 1)):
            if c in forbidden:
                continue
            color[v] = c
            if assign(depth + 1, max(used, c + 1)):
                return True
        color[v] = -1
        return False

    return assign(0, 0)


def color_critical_edges(g: SmallGraph) -> list[Edge]:
    """Edges whose deletion lowers the chromatic number."""
    chi = chromatic_number(g)
    return [e for e in g.edges() if chromatic_number(remove_edge(g, *e)) < chi]


def has_color_critical_edge(g: SmallGraph) -> bool:
    return bool(color_critical_edges(g))


def bipartition(g: SmallGraph) -> tuple[list[int], list[int]] | None:
    """
    Two-colour ``g`` by BFS, lowest vertex of each component on side 0.

    Returns
    -------
    sides : (list, list) or None
        Sorted vertex lists of the two sides, None if ``g`` has an odd cycle
    """
    side = [-1] * g.n
    for start in range(g.n):
        if side[start] >= 0:
            continue
        side[start] = 0
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for w in iter_bits(g.rows[u]):
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        nxt.append(w)
                    elif side[w] == side[u]:
                        return None
            frontier = nxt
    return (
        [v for v in range(g.n) if side[v] == 0],
        [v for v in range(g.n) if side[v] == 1],
    )


# ========================================
# graph6
# ========================================


def emit_graph6(g: SmallGraph) -> str:
    """
    Header-less graph6 text for ``g``.

    Examples
    --------
    >>> emit_graph6(make_named("K3"))
    'Bw'
    """
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").rstrip("\n")


def parse_graph6(text: str | bytes) -> SmallGraph:
    """
    Parse header-less graph6 text into a SmallGraph.

    Raises
    ------
    Graph6Error
        Empty input, non-ASCII text, bytes outside ``?..~``, a wrong body
        length or non-zero padding bits
    CapacityError
        More than 32 vertices
    """
    if isinstance(text, str):
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6Error(f"Non-ASCII character {text[exc.start]!r}", exc.start) from exc
    else:
        data = bytes(text)
    data = data.rstrip(b"\r\n")
    if not data:
        raise Graph6Error("Empty graph6 string", 0)
    for offset, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise Graph6Error(f"Byte {byte!r} outside the graph6 range", offset)

    if data[0] == 126:
        # 18-bit and 36-bit vertex counts are always over the cap
        if len(data) < 4:
            raise Graph6Error("Truncated extended vertex count", len(data))
        raise CapacityError(f"graph6 vertex count exceeds the {MAX_VERTICES}-vertex cap")
    n = data[0] - 63
    _check_capacity(n)
    body = n * (n - 1) // 2
    expected = 1 + (body + 5) // 6
    if len(data) != expected:
        raise Graph6Error(
            f"Expected {expected} bytes for {n} vertices, got {len(data)}",
            min(len(data), expected),
        )
    padding = 6 * (expected - 1) - body
    if padding and (data[-1] - 63) & ((1 << padding) - 1):
        raise Graph6Error("Non-zero padding bits", len(data) - 1)
    try:
        parsed = nx.from_graph6_bytes(data)
    except nx.NetworkXError as exc:
        raise Graph6Error(str(exc), 0) from exc
    return SmallGraph.from_edges(n, parsed.edges())
