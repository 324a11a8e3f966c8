"""
rtw.rainbow
===========

Rainbow-F detection in a family of copies, and the matching machinery
behind the bounds on rb(n, H, F).

A copy of F inside the union of a family is rainbow when its edges can be
assigned pairwise distinct members, each member containing its edge; that
is, when the edge -> members lists have a system of distinct representatives
(SDR). Every SDR question here is answered by augmenting-path bipartite
matching.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence, TypeVar

import networkx as nx
import numpy as np

from rtw.enumeration import Copy, RedBlueGraph, enumerate_copies
from rtw.graphcore import (
    MAX_VERTICES,
    Edge,
    SmallGraph,
    is_isomorphic,
    iter_bits,
    make_named,
    normalize_edge,
    union_graph,
)

logger = logging.getLogger(__name__)

L = TypeVar("L", bound=Hashable)
R = TypeVar("R", bound=Hashable)


class AugmentingPathError(ValueError):
    """The matching handed to the decomposition is not maximum."""

    def __init__(self, path: list):
        super().__init__(f"Matching is not maximum, augmenting path: {path}")
        self.path = path


# ========================================
# Types
# ========================================


@dataclass(frozen=True)
class CopyFamily:
    """
    A family of copies of one pattern on ``n_host`` vertices.

    Member indices are positions in ``copies``; with ``allow_multiplicity``
    the same edge set may appear more than once and each occurrence counts as
    a distinct member.
    """

    n_host: int
    pattern: SmallGraph
    copies: tuple[Copy, ...] = ()
    allow_multiplicity: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "copies", tuple(self.copies))
        if not 0 <= self.n_host <= MAX_VERTICES:
            raise ValueError(f"Host size {self.n_host} outside [0, {MAX_VERTICES}]")
        for index, c in enumerate(self.copies):
            if any(v >= self.n_host for e in c.edges for v in e):
                raise ValueError(f"Copy {index} uses a vertex >= {self.n_host}")
        if not self.allow_multiplicity and len(set(self.copies)) != len(self.copies):
            raise ValueError("Duplicate copies in a family without multiplicity")

    def __len__(self) -> int:
        return len(self.copies)

    def verify(self) -> None:
        """Check every member is isomorphic to the pattern; raises ValueError."""
        for index, c in enumerate(self.copies):
            if len(c) != self.pattern.edge_count:
                raise ValueError(f"Copy {index} has {len(c)} edges, pattern has "
                                 f"{self.pattern.edge_count}")
            vertices = c.vertices
            spare = self.pattern.n - len(vertices)
            if spare < 0 or len(vertices) + spare > self.n_host:
                raise ValueError(f"Copy {index} does not fit the pattern's vertex count")
            relabel = {v: i for i, v in enumerate(vertices)}
            compact = SmallGraph.from_edges(
                self.pattern.n, [(relabel[u], relabel[v]) for u, v in c.edges]
            )
            if not is_isomorphic(compact, self.pattern):
                raise ValueError(f"Copy {index} is not isomorphic to the pattern")

    def union_graph(self) -> SmallGraph:
        return union_graph((c.edges for c in self.copies), self.n_host)

    def coverage(self) -> dict[Edge, list[int]]:
        """Ascending member indices containing each edge of the union."""
        cover: dict[Edge, list[int]] = {}
        for index, c in enumerate(self.copies):
            for e in c.edges:
                cover.setdefault(e, []).append(index)
        return cover

    def without(self, index: int) -> "CopyFamily":
        copies = self.copies[:index] + self.copies[index + 1 :]
        return CopyFamily(self.n_host, self.pattern, copies, self.allow_multiplicity)

    def subfamily(self, indices: Iterable[int]) -> "CopyFamily":
        copies = tuple(self.copies[i] for i in indices)
        return CopyFamily(self.n_host, self.pattern, copies, self.allow_multiplicity)


@dataclass(frozen=True)
class RainbowWitness:
    """A copy of F plus an injective edge -> member assignment."""

    f_copy: Copy
    assignment: Mapping[Edge, int]

    def is_valid(self, family: CopyFamily) -> bool:
        """Independent re-check of the witness against ``family``."""
        if set(self.assignment) != set(self.f_copy.edges):
            return False
        members = list(self.assignment.values())
        if len(set(members)) != len(members):
            return False
        return all(
            0 <= m < len(family) and e in family.copies[m].edge_set
            for e, m in self.assignment.items()
        )


@dataclass(frozen=True)
class TRainbowWitness:
    """A copy of F with ``t`` distinct members per edge, all distinct overall."""

    f_copy: Copy
    t: int
    assignment: Mapping[Edge, tuple[int, ...]]

    def is_valid(self, family: CopyFamily) -> bool:
        if set(self.assignment) != set(self.f_copy.edges):
            return False
        members = [m for ms in self.assignment.values() for m in ms]
        if len(members) != self.t * len(self.f_copy) or len(set(members)) != len(members):
            return False
        return all(
            e in family.copies[m].edge_set for e, ms in self.assignment.items() for m in ms
        )


@dataclass(frozen=True)
class GreedyOutcome:
    """Result of greedy member picking: a witness, or the first stuck edge."""

    witness: RainbowWitness | None
    failed_edge: Edge | None = None

    @property
    def succeeded(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class BipartitePartition:
    """
    Split of side A and of the matched part of side B.

    Every ``a`` in ``a1`` is matched into ``b1``; every neighbour of every
    vertex of ``a2`` lies in ``b2``.
    """

    a1: frozenset
    a2: frozenset
    b1: frozenset
    b2: frozenset

    def violations(self, adjacency: Mapping, matching: Mapping) -> list[str]:
        """Invariant violations against the graph it was computed for."""
        problems = []
        side_a = set(adjacency)
        if self.a1 & self.a2 or self.a1 | self.a2 != side_a:
            problems.append("A1/A2 do not partition A")
        matched_b = set(matching.values())
        if self.b1 & self.b2 or self.b1 | self.b2 != matched_b:
            problems.append("B1/B2 do not partition the matched B-vertices")
        for a in self.a1:
            if a not in matching or matching[a] not in self.b1:
                problems.append(f"A1 vertex {a!r} is not matched into B1")
        for a in self.a2:
            for b in adjacency[a]:
                if b not in self.b2:
                    problems.append(f"A2 vertex {a!r} has neighbour {b!r} outside B2")
        if len(self.a1) != len(self.b1):
            problems.append(f"|A1| = {len(self.a1)} but |B1| = {len(self.b1)}")
        return problems


@dataclass(frozen=True)
class HeavyLightPartition:
    """p-heavy / p-light split of the union's edges and triangles."""

    p: int
    edge_counts: Mapping[Edge, int]
    triangle_counts: Mapping[tuple[int, int, int], int]
    heavy_edges: frozenset[Edge] = field(default_factory=frozenset)
    light_edges: frozenset[Edge] = field(default_factory=frozenset)
    heavy_triangles: frozenset[tuple[int, int, int]] = field(default_factory=frozenset)
    light_triangles: frozenset[tuple[int, int, int]] = field(default_factory=frozenset)

    def light_edges_of(self, c: Copy) -> list[Edge]:
        return [e for e in c.edges if e in self.light_edges]


# ========================================
# Matching
# ========================================


def maximum_matching(adjacency: Mapping[L, Sequence[R]]) -> dict[L, R]:
    """
    Maximum bipartite matching by repeated augmenting-path search.

    Left vertices are tried in mapping order and their neighbours in list
    order, so the result is deterministic.

    Parameters
    ----------
    adjacency : mapping
        Left vertex -> sequence of right neighbours

    Returns
    -------
    matching : dict
        Left vertex -> matched right vertex
    """
    owner: dict[R, L] = {}

    def augment(a: L, seen: set) -> bool:
        for b in adjacency[a]:
            if b in seen:
                continue
            seen.add(b)
            if b not in owner or augment(owner[b], seen):
                owner[b] = a
                return True
        return False

    for a in adjacency:
        augment(a, set())
    return {a: b for b, a in owner.items()}


def _has_sdr(candidates: Sequence[Sequence[int]]) -> bool:
    """Do the lists have pairwise distinct representatives."""
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for m in candidates[i]:
            if m in seen:
                continue
            seen.add(m)
            if m not in owner or augment(owner[m], seen):
                owner[m] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(candidates)))


def _slot_assignment(
    edges: Sequence[Edge], members: Sequence[Sequence[int]], t: int
) -> dict[Edge, tuple[int, ...]] | None:
    """Assign ``t`` distinct members to every edge, all distinct, or None."""
    adjacency = {(e, k): members[i] for i, e in enumerate(edges) for k in range(t)}
    matching = maximum_matching(adjacency)
    if len(matching) < len(adjacency):
        return None
    return {e: tuple(sorted(matching[(e, k)] for k in range(t))) for e in edges}


def _greedy_slots(
    edges: Sequence[Edge], members: Sequence[Sequence[int]], t: int
) -> tuple[dict[Edge, tuple[int, ...]], Edge | None]:
    used: set[int] = set()
    assignment: dict[Edge, tuple[int, ...]] = {}
    for e, ms in zip(edges, members):
        picked = []
        for m in ms:
            if m not in used:
                picked.append(m)
                used.add(m)
                if len(picked) == t:
                    break
        if len(picked) < t:
            return assignment, e
        assignment[e] = tuple(picked)
    return assignment, None


# ========================================
# Rainbow detection
# ========================================


def _scan(family: CopyFamily, f: SmallGraph, t: int) -> tuple[Copy, dict] | None:
    if f.edge_count == 0:
        raise ValueError("Target graph must have at least one edge")
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    m = f.edge_count
    if len(family) < t * m:
        return None
    coverage = family.coverage()
    for f_copy in enumerate_copies(family.union_graph(), f):
        members = [coverage[e] for e in f_copy.edges]
        if min(len(ms) for ms in members) < t:
            continue
        if len({x for ms in members for x in ms}) < t * m:
            continue
        if all(len(ms) >= t * m for ms in members):
            # every edge sees t*m members: greedy picking cannot get stuck
            assignment, stuck = _greedy_slots(f_copy.edges, members, t)
            assert stuck is None
            return f_copy, assignment
        assignment = _slot_assignment(f_copy.edges, members, t)
        if assignment is not None:
            return f_copy, assignment
    return None


def find_rainbow(family: CopyFamily, f: SmallGraph) -> RainbowWitness | None:
    """
    Look for a rainbow copy of ``f`` in ``family``.

    Parameters
    ----------
    family : CopyFamily
        Family of copies
    f : SmallGraph
        Target graph with at least one edge

    Returns
    -------
    witness : RainbowWitness or None
        Witness for the lexicographically first copy of ``f`` in the union
        that admits an SDR; None when the family is rainbow-``f``-free

    Examples
    --------
    >>> k4 = make_named("K4"); k3 = make_named("K3")
    >>> family = CopyFamily(4, k3, enumerate_copies(k4, k3))
    >>> find_rainbow(family, k3) is not None
    True
    """
    found = _scan(family, f, 1)
    if found is None:
        return None
    f_copy, assignment = found
    return RainbowWitness(f_copy, {e: ms[0] for e, ms in assignment.items()})


def find_t_rainbow(family: CopyFamily, f: SmallGraph, t: int) -> TRainbowWitness | None:
    """Rainbow copy of ``f`` using ``t`` distinct members per edge."""
    found = _scan(family, f, t)
    if found is None:
        return None
    f_copy, assignment = found
    return TRainbowWitness(f_copy, t, assignment)


def greedy_rainbow(family: CopyFamily, f_copy: Copy) -> GreedyOutcome:
    """
    Assign members greedily, edges in sorted order, lowest unused index first.

    Succeeds whenever every edge of ``f_copy`` lies in at least
    ``len(f_copy)`` members; otherwise the outcome names the first edge that
    found no unused member.
    """
    coverage = family.coverage()
    missing = [e for e in f_copy.edges if e not in coverage]
    if missing:
        raise ValueError(f"Edges {missing} are not in the union of the family")
    members = [coverage[e] for e in f_copy.edges]
    assignment, stuck = _greedy_slots(f_copy.edges, members, 1)
    if stuck is not None:
        return GreedyOutcome(None, stuck)
    return GreedyOutcome(RainbowWitness(f_copy, {e: ms[0] for e, ms in assignment.items()}))


# ========================================
# Decomposition and certificates
# ========================================


def matching_decomposition(
    adjacency: Mapping[L, Sequence[R]], matching: Mapping[L, R]
) -> BipartitePartition:
    """
    Split a bipartite graph along a maximum matching.

    B2 is the set of matched B-vertices reachable from an unmatched A-vertex
    by an alternating path (non-matching edge first); A2 is the unmatched
    A-vertices plus the partners of B2; A1 and B1 are the rest.

    Parameters
    ----------
    adjacency : mapping
        A-vertex -> B-neighbours; its keys are the whole side A
    matching : mapping
        Injective partial map A -> B along edges

    Raises
    ------
    ValueError
        The matching uses a non-edge or is not injective
    AugmentingPathError
        The matching is not maximum
    """
    partner: dict[R, L] = {}
    for a, b in matching.items():
        if a not in adjacency or b not in adjacency[a]:
            raise ValueError(f"Matching pair ({a!r}, {b!r}) is not an edge")
        if b in partner:
            raise ValueError(f"Matching is not injective at {b!r}")
        partner[b] = a

    unmatched = [a for a in adjacency if a not in matching]
    parent: dict[R, L] = {}
    queue = deque(unmatched)
    while queue:
        a = queue.popleft()
        for b in adjacency[a]:
            if b in parent:
                continue
            parent[b] = a
            if b not in partner:
                raise AugmentingPathError(_trace_path(b, parent, matching))
            queue.append(partner[b])

    b2 = frozenset(parent)
    a2 = frozenset(unmatched) | frozenset(partner[b] for b in b2)
    return BipartitePartition(
        a1=frozenset(adjacency) - a2,
        a2=a2,
        b1=frozenset(partner) - b2,
        b2=b2,
    )


def _trace_path(end, parent: Mapping, matching: Mapping) -> list:
    path = [end]
    b = end
    while True:
        a = parent[b]
        path.append(a)
        if a not in matching:
            break
        b = matching[a]
        path.append(b)
    return path[::-1]


def greedy_edge_pick(family: CopyFamily) -> tuple[SmallGraph, list[int]]:
    """
    Walk the members in order and take an unpicked edge from each.

    Returns
    -------
    picked : SmallGraph
        One edge per member that still had an unpicked edge
    marked : list of int
        Members with no edge left; each lies inside ``picked``

    For a rainbow-F-free family the picked graph is F-free, which bounds the
    family by ex(n, H, F) + ex(n, F).
    """
    picked: list[Edge] = []
    taken: set[Edge] = set()
    marked = []
    for index, c in enumerate(family.copies):
        fresh = next((e for e in c.edges if e not in taken), None)
        if fresh is None:
            marked.append(index)
            continue
        taken.add(fresh)
        picked.append(fresh)
    return SmallGraph.from_edges(family.n_host, picked), marked


def colored_certificate(family: CopyFamily) -> RedBlueGraph:
    """
    Red-blue graph certifying |family| <= N^col(H, K2; G).

    Members are matched to their edges by a maximum matching; the matched
    edges form G, edges in B1 are blue and edges in B2 red. Then
    ``|family| = |blue| + |A2|`` and every A2 member is a red copy.
    """
    adjacency = {index: list(c.edges) for index, c in enumerate(family.copies)}
    matching = maximum_matching(adjacency)
    split = matching_decomposition(adjacency, matching)
    graph = SmallGraph.from_edges(family.n_host, split.b1 | split.b2)
    return RedBlueGraph(graph, split.b2)


def member_coloring(family: CopyFamily, index: int, f: SmallGraph) -> RedBlueGraph:
    """Colour a member's edges red when fewer than |E(f)| members contain them."""
    coverage = family.coverage()
    member = family.copies[index]
    red = [e for e in member.edges if len(coverage[e]) < f.edge_count]
    return RedBlueGraph(member.as_graph(family.n_host), frozenset(red))


# ========================================
# Berge view
# ========================================


def _is_clique(g: SmallGraph) -> bool:
    return g.n >= 2 and g.edge_count == g.n * (g.n - 1) // 2


def berge_view(family: CopyFamily) -> list[tuple[int, ...]]:
    """Vertex sets of the clique copies, as sorted tuples in family order."""
    if not _is_clique(family.pattern):
        raise ValueError("Berge view needs a clique pattern K_r with r >= 2")
    return [c.vertices for c in family.copies]


def berge_contains(
    hyperedges: Sequence[Iterable[int]], f: SmallGraph, n: int | None = None
) -> bool:
    """
    Does the hypergraph contain a Berge copy of ``f``.

    Checked on the 2-shadow: some copy of ``f`` must have a bijection from its
    edges to distinct hyperedges containing them.
    """
    sets = [frozenset(h) for h in hyperedges]
    if n is None:
        n = max((v + 1 for h in sets for v in h), default=0)
    shadow = SmallGraph.from_edges(
        n, {normalize_edge(u, v) for h in sets for u in h for v in h if u < v}
    )
    if f.edge_count == 0:
        raise ValueError("Target graph must have at least one edge")
    for f_copy in enumerate_copies(shadow, f):
        incidence = nx.Graph()
        tops = [("edge", e) for e in f_copy.edges]
        incidence.add_nodes_from(tops)
        incidence.add_nodes_from(("hyperedge", i) for i in range(len(sets)))
        incidence.add_edges_from(
            (("edge", e), ("hyperedge", i))
            for e in f_copy.edges
            for i, h in enumerate(sets)
            if e[0] in h and e[1] in h
        )
        matching = nx.bipartite.hopcroft_karp_matching(incidence, top_nodes=tops)
        if sum(1 for node in tops if node in matching) == len(tops):
            return True
    return False


# ========================================
# Heavy / light
# ========================================


def heavy_light_classify(family: CopyFamily, p: int) -> HeavyLightPartition:
    """
    Split edges and triangles of the union by how many members contain them.

    An edge is p-heavy when at least ``p`` members contain it; a triangle is
    p-heavy when at least ``p`` members contain all three of its edges.
    """
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    coverage = family.coverage()
    edge_counts = {e: len(ms) for e, ms in coverage.items()}
    triangle_counts: dict[tuple[int, int, int], int] = {}
    for tri in enumerate_copies(family.union_graph(), make_named("K3")):
        members = set(coverage[tri.edges[0]])
        for e in tri.edges[1:]:
            members &= set(coverage[e])
        triangle_counts[tri.vertices] = len(members)  # type: ignore[index]
    return HeavyLightPartition(
        p=p,
        edge_counts=edge_counts,
        triangle_counts=triangle_counts,
        heavy_edges=frozenset(e for e, k in edge_counts.items() if k >= p),
        light_edges=frozenset(e for e, k in edge_counts.items() if k < p),
        heavy_triangles=frozenset(t for t, k in triangle_counts.items() if k >= p),
        light_triangles=frozenset(t for t, k in triangle_counts.items() if k < p),
    )


# ========================================
# Incremental checking for search
# ========================================


class RainbowTracker:
    """
    Incremental rainbow-F-freeness over a fixed, indexed list of candidates.

    The current family is a stack of candidate indices. ``can_add(i)`` asks
    whether pushing candidate ``i`` keeps the family rainbow-F-free; only
    copies of F sharing an edge with candidate ``i`` are rechecked, since a
    new rainbow copy must assign the new member to one of its own edges.

    On hosts whose edges fit a 64-bit word (n <= 11) the touching F-copies of
    each candidate are kept as ``uint64`` arrays and filtered in one numpy
    expression.
    """

    def __init__(self, candidates: Sequence[Copy], f: SmallGraph, n: int):
        if f.edge_count == 0:
            raise ValueError("Target graph must have at least one edge")
        self.f_size = f.edge_count
        self.masks = [c.mask for c in candidates]
        host = union_graph((c.edges for c in candidates), n)
        f_copies = enumerate_copies(host, f) if candidates else []
        self.f_masks = [c.mask for c in f_copies]
        self.f_bits = [list(iter_bits(m)) for m in self.f_masks]
        by_edge: dict[int, list[int]] = {}
        for fid, m in enumerate(self.f_masks):
            for bit in self.f_bits[fid]:
                by_edge.setdefault(bit, []).append(fid)
        self.touching: list[np.ndarray] = []
        for mask in self.masks:
            ids: set[int] = set()
            for bit in iter_bits(mask):
                ids.update(by_edge.get(bit, ()))
            self.touching.append(np.array(sorted(ids), dtype=np.int64))

        self._full = (1 << (n * (n - 1) // 2)) - 1
        self._vectorized = n * (n - 1) // 2 <= 64
        if self._vectorized:
            table = np.array(self.f_masks, dtype=np.uint64)
            self._touching_masks = [table[ids] for ids in self.touching]
        self.members: list[int] = []
        self._unions = [0]
        self.rechecks = 0

    @property
    def union(self) -> int:
        return self._unions[-1]

    def _covered(self, i: int, union: int) -> Iterable[int]:
        ids = self.touching[i]
        if self._vectorized:
            outside = np.uint64(self._full & ~union)
            return ids[(self._touching_masks[i] & outside) == 0].tolist()
        return [fid for fid in ids.tolist() if not self.f_masks[fid] & ~union]

    def can_add(self, i: int) -> bool:
        if len(self.members) + 1 < self.f_size:
            return True
        union = self._unions[-1] | self.masks[i]
        family = self.members + [i]
        for fid in self._covered(i, union):
            self.rechecks += 1
            lists = [[m for m in family if self.masks[m] >> bit & 1] for bit in self.f_bits[fid]]
            if _has_sdr(lists):
                return False
        return True

    def add(self, i: int) -> None:
        self.members.append(i)
        self._unions.append(self._unions[-1] | self.masks[i])

    def pop(self) -> int:
        self._unions.pop()
        return self.members.pop()
