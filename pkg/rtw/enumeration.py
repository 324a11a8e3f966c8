"""
rtw.enumeration
===============

Enumerate and count copies of a pattern graph inside a host, including the
red-blue count N^col(H1, H2; G) = N(H1, G_red) + N(H2, G_blue).

A copy is an unlabeled subgraph identified by its edge set, so automorphisms
of the pattern never multiply a count.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Literal, Sequence

from rtw.graphcore import (
    Edge,
    SmallGraph,
    iter_bits,
    search_order,
    edge_index,
    normalize_edge,
)

logger = logging.getLogger(__name__)

Color = Literal["red", "blue"]


@dataclass(frozen=True, order=True)
class Copy:
    """
    Edge set of one copy of a pattern inside a host.

    Edges are stored sorted and low-vertex-first, so the dataclass order is
    the lexicographic order by sorted edge list.
    """

    edges: tuple[Edge, ...]

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "Copy":
        return cls(tuple(sorted({normalize_edge(u, v) for u, v in edges})))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def mask(self) -> int:
        mask = 0
        for u, v in self.edges:
            mask |= 1 << edge_index(u, v)
        return mask

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for e in self.edges for v in e}))

    def __contains__(self, edge: object) -> bool:
        if not isinstance(edge, tuple) or len(edge) != 2:
            return False
        return normalize_edge(*edge) in self.edge_set

    def __len__(self) -> int:
        return len(self.edges)

    def as_graph(self, n: int) -> SmallGraph:
        return SmallGraph.from_edges(n, self.edges)


@dataclass(frozen=True)
class RedBlueGraph:
    """
    Graph whose every edge is coloured red or blue.

    Attributes
    ----------
    graph : SmallGraph
        Underlying graph
    red : frozenset of Edge
        Red edges; every other edge of ``graph`` is blue
    """

    graph: SmallGraph
    red: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        red = frozenset(normalize_edge(u, v) for u, v in self.red)
        object.__setattr__(self, "red", red)
        for u, v in red:
            if not self.graph.has_edge(u, v):
                raise ValueError(f"Red edge ({u}, {v}) is not an edge of the graph")

    @classmethod
    def from_colors(cls, graph: SmallGraph, colors: dict[Edge, Color]) -> "RedBlueGraph":
        missing = [e for e in graph.edges() if e not in colors]
        if missing:
            raise ValueError(f"Colouring is not total, uncoloured edges: {missing}")
        return cls(graph, frozenset(e for e, c in colors.items() if c == "red"))

    def color(self, u: int, v: int) -> Color:
        e = normalize_edge(u, v)
        if not self.graph.has_edge(*e):
            raise KeyError(f"({u}, {v}) is not an edge")
        return "red" if e in self.red else "blue"

    @property
    def blue(self) -> frozenset[Edge]:
        return frozenset(self.graph.edges()) - self.red

    @property
    def red_graph(self) -> SmallGraph:
        return SmallGraph.from_edges(self.graph.n, self.red)

    @property
    def blue_graph(self) -> SmallGraph:
        return SmallGraph.from_edges(self.graph.n, self.blue)


# ========================================
# Embedding search
# ========================================


def _embeddings(host: SmallGraph, pattern: SmallGraph) -> Iterator[dict[int, int]]:
    """
    Injective maps of the non-isolated pattern vertices into the host that
    send every pattern edge onto a host edge.
    """
    active = [v for v in search_order(pattern) if pattern.degree(v) > 0]
    isolated = pattern.n - len(active)
    if len(active) + isolated > host.n:
        return
    position = {v: i for i, v in enumerate(active)}
    # earlier neighbours of each active vertex, as positions in the order
    back = [
        [position[w] for w in iter_bits(pattern.rows[v]) if position.get(w, len(active)) < i]
        for i, v in enumerate(active)
    ]
    need = [pattern.degree(v) for v in active]
    host_degree = host.degrees()
    everyone = (1 << host.n) - 1
    image = [0] * len(active)

    def extend(depth: int, used: int) -> Iterator[dict[int, int]]:
        if depth == len(active):
            if host.n - len(active) >= isolated:
                yield {active[i]: image[i] for i in range(len(active))}
            return
        candidates = everyone & ~used
        for i in back[depth]:
            candidates &= host.rows[image[i]]
        for w in iter_bits(candidates):
            if host_degree[w] < need[depth]:
                continue
            image[depth] = w
            yield from extend(depth + 1, used | 1 << w)

    yield from extend(0, 0)


def _copy_edges(pattern_edges: Sequence[Edge], mapping: dict[int, int]) -> tuple[Edge, ...]:
    return tuple(sorted(normalize_edge(mapping[u], mapping[v]) for u, v in pattern_edges))


def enumerate_copies(host: SmallGraph, pattern: SmallGraph) -> list[Copy]:
    """
    Every distinct copy of ``pattern`` in ``host``.

    Parameters
    ----------
    host : SmallGraph
        Host graph
    pattern : SmallGraph
        Pattern with at least one edge

    Returns
    -------
    copies : list of Copy
        Sorted lexicographically by sorted edge list, each edge set once;
        empty when the pattern has more vertices than the host

    Examples
    --------
    >>> len(enumerate_copies(make_named("K4"), make_named("K3")))
    4
    """
    if pattern.edge_count == 0:
        raise ValueError("Pattern must have at least one edge")
    if pattern.n > host.n:
        return []
    pattern_edges = pattern.edges()
    seen = {_copy_edges(pattern_edges, mapping) for mapping in _embeddings(host, pattern)}
    return [Copy(edges) for edges in sorted(seen)]


def contains(host: SmallGraph, pattern: SmallGraph) -> bool:
    """True iff ``host`` has a (not necessarily induced) copy of ``pattern``."""
    if pattern.edge_count == 0:
        return pattern.n <= host.n
    return next(_embeddings(host, pattern), None) is not None


def count_copies(host: SmallGraph, pattern: SmallGraph) -> int:
    """N(pattern, host)."""
    return len(enumerate_copies(host, pattern))


def count_colored(g: RedBlueGraph, h1: SmallGraph, h2: SmallGraph) -> int:
    """Red copies of ``h1`` plus blue copies of ``h2``."""
    return count_copies(g.red_graph, h1) + count_copies(g.blue_graph, h2)


def copies_through_edge(copies: Sequence[Copy], e: Edge) -> list[int]:
    """Ascending indices of the copies whose edge set contains ``e``."""
    e = normalize_edge(*e)
    return [i for i, c in enumerate(copies) if e in c.edge_set]


def copy_masks(host: SmallGraph, pattern: SmallGraph) -> list[int]:
    """Copies of ``pattern`` in ``host`` as colex edge masks, in copy order."""
    return [c.mask for c in enumerate_copies(host, pattern)]
