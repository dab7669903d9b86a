"""Weighted graphs, ordered edge streams, and structural decompositions.

Weights are exact rationals throughout this module; floating point enters
only in the numerical modules that consume graphs. Two decompositions are
provided: the heaviest-incident-edge matching/forest split, and a DFS forest
with its depth levels and per-level star partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

DEFAULT_MAX_DENOMINATOR = 10**9


class GraphParseError(ValueError):
    """Malformed edge-list input; the message names the offending line."""


class InfeasibleSizeError(ValueError):
    """An exact computation was requested beyond its size limits."""


def _as_weight(value) -> Fraction:
    w = Fraction(value)
    if w < 0:
        raise ValueError(f"negative weight {value}")
    return w


@dataclass(frozen=True)
class WeightedEdge:
    u: int
    v: int
    w: Fraction = Fraction(1)

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"self-loop at vertex {self.u}")
        object.__setattr__(self, "w", _as_weight(self.w))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


@dataclass(frozen=True)
class EdgeStream:
    """An ordered edge arrival sequence over vertices 0..n-1.

    Arrival order is meaningful: the streaming estimator's per-sample value
    depends on which incident edges arrive after the sampled edge.
    """

    n: int
    edges: tuple[WeightedEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ValueError(f"vertex out of range in edge {e.u}-{e.v} (n={self.n})")
            if e.pair in seen:
                raise ValueError(f"duplicate edge {e.pair[0]}-{e.pair[1]}")
            seen.add(e.pair)

    def __len__(self) -> int:
        return len(self.edges)


class WeightedGraph:
    """Simple weighted graph with symmetric adjacency lists."""

    def __init__(self, n: int, edges: Iterable[WeightedEdge]):
        self.n = n
        self.edges: tuple[WeightedEdge, ...] = tuple(edges)
        self.adjacency: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
        seen = set()
        for e in self.edges:
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ValueError(f"vertex out of range in edge {e.u}-{e.v} (n={n})")
            if e.pair in seen:
                raise ValueError(f"duplicate edge {e.pair[0]}-{e.pair[1]}")
            if e.w == 0:
                raise ValueError(f"zero-weight edge {e.u}-{e.v} present in graph")
            seen.add(e.pair)
            self.adjacency[e.u].append((e.v, e.w))
            self.adjacency[e.v].append((e.u, e.w))

    @classmethod
    def from_stream(cls, stream: EdgeStream) -> "WeightedGraph":
        return cls(stream.n, stream.edges)

    def to_stream(self) -> EdgeStream:
        return EdgeStream(self.n, self.edges)

    @property
    def m_edges(self) -> int:
        return len(self.edges)

    def is_unit_weighted(self) -> bool:
        return all(e.w == 1 for e in self.edges)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def non_isolated(self) -> list[int]:
        return [u for u in range(self.n) if self.adjacency[u]]

    def components(self) -> list[list[int]]:
        """Connected components restricted to non-isolated vertices."""
        seen = [False] * self.n
        comps = []
        for root in range(self.n):
            if seen[root] or not self.adjacency[root]:
                continue
            stack = [root]
            seen[root] = True
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v, _ in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def induced_subgraph(self, vertices: Sequence[int]) -> "WeightedGraph":
        """Subgraph on the given vertices, relabelled 0..len(vertices)-1."""
        index = {u: i for i, u in enumerate(vertices)}
        edges = [
            WeightedEdge(index[e.u], index[e.v], e.w)
            for e in self.edges
            if e.u in index and e.v in index
        ]
        return WeightedGraph(len(vertices), edges)


def total_weight(g: WeightedGraph) -> Fraction:
    """m: the sum of all edge weights (0 for the empty graph)."""
    return sum((e.w for e in g.edges), Fraction(0))


def max_incident_sum(g: WeightedGraph) -> Fraction:
    """W: the sum over vertices of the maximum incident edge weight.

    Isolated vertices contribute nothing, so on unit-weight graphs W is the
    number of non-isolated vertices.
    """
    out = Fraction(0)
    for u in range(g.n):
        if g.adjacency[u]:
            out += max(w for _, w in g.adjacency[u])
    return out


# ---------------------------------------------------------------------------
# Parsing and serialization
# ---------------------------------------------------------------------------


def parse_edge_list(
    text: str, max_denominator: int = DEFAULT_MAX_DENOMINATOR
) -> EdgeStream:
    """Parse the line-oriented edge list format into an EdgeStream.

    Format: a header line ``n <count>``, then one edge per line as
    ``u v [w]`` with the weight defaulting to 1. Weights may be integers,
    ``p/q`` rationals, or decimals; denominators above ``max_denominator``
    are rejected. Blank lines and ``#`` comments are skipped.
    """
    n: Optional[int] = None
    edges: list[WeightedEdge] = []
    pairs = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphParseError(f"line {lineno}: expected header 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphParseError(f"line {lineno}: vertex count must be an integer")
            if n < 0:
                raise GraphParseError(f"line {lineno}: vertex count must be nonnegative")
            continue
        edge = parse_edge_line(parts, lineno, n, max_denominator)
        if edge.pair in pairs:
            raise GraphParseError(
                f"line {lineno}: duplicate edge {edge.pair[0]}-{edge.pair[1]}"
            )
        pairs.add(edge.pair)
        edges.append(edge)
    if n is None:
        raise GraphParseError("line 1: missing header 'n <count>'")
    return EdgeStream(n, tuple(edges))


def parse_edge_line(
    parts: Sequence[str], lineno: int, n: int, max_denominator: int
) -> WeightedEdge:
    """Parse one whitespace-split edge line; raises GraphParseError."""
    if len(parts) not in (2, 3):
        raise GraphParseError(f"line {lineno}: expected 'u v [w]'")
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"line {lineno}: vertex ids must be integers")
    if not (0 <= u < n and 0 <= v < n):
        raise GraphParseError(f"line {lineno}: vertex id out of range 0..{n - 1}")
    if u == v:
        raise GraphParseError(f"line {lineno}: self-loop at vertex {u}")
    w = Fraction(1)
    if len(parts) == 3:
        try:
            w = Fraction(parts[2])
        except (ValueError, ZeroDivisionError):
            raise GraphParseError(f"line {lineno}: bad weight {parts[2]!r}")
        if w < 0:
            raise GraphParseError(f"line {lineno}: negative weight {parts[2]}")
        if w == 0:
            raise GraphParseError(f"line {lineno}: zero weight {parts[2]}")
        if w.denominator > max_denominator:
            raise GraphParseError(
                f"line {lineno}: weight denominator exceeds {max_denominator}"
            )
    return WeightedEdge(u, v, w)


def serialize_edge_list(stream: EdgeStream) -> str:
    """Canonical text form: header, then edges in arrival order."""
    lines = [f"n {stream.n}"]
    for e in stream.edges:
        w = str(e.w.numerator) if e.w.denominator == 1 else f"{e.w.numerator}/{e.w.denominator}"
        lines.append(f"{e.u} {e.v} {w}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Heaviest-incident-edge decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeaviestEdgeDecomposition:
    """Per-vertex heaviest edges, split by how many endpoints chose them.

    ``matching`` holds edges chosen by both endpoints, ``forest`` edges
    chosen by exactly one. Their union is acyclic and
    2 * matching_weight + forest_weight equals W exactly.
    """

    matching: tuple[WeightedEdge, ...]
    forest: tuple[WeightedEdge, ...]
    matching_weight: Fraction
    forest_weight: Fraction


def heaviest_edge_decomposition(g: WeightedGraph) -> HeaviestEdgeDecomposition:
    # Consistent total order: heavier first, then lexicographically smaller
    # (min endpoint, max endpoint) pair. Every vertex picks its best edge
    # under this order, which is the consistent tiebreak the forest argument
    # needs.
    def better(e1: WeightedEdge, e2: WeightedEdge) -> bool:
        if e1.w != e2.w:
            return e1.w > e2.w
        return e1.pair < e2.pair

    chosen: list[Optional[WeightedEdge]] = [None] * g.n
    by_pair: dict[tuple[int, int], WeightedEdge] = {e.pair: e for e in g.edges}
    for e in g.edges:
        for end in (e.u, e.v):
            if chosen[end] is None or better(e, chosen[end]):
                chosen[end] = e
    counts: dict[tuple[int, int], int] = {}
    for u in range(g.n):
        e = chosen[u]
        if e is not None:
            counts[e.pair] = counts.get(e.pair, 0) + 1
    matching = tuple(by_pair[p] for p in sorted(counts) if counts[p] == 2)
    forest = tuple(by_pair[p] for p in sorted(counts) if counts[p] == 1)
    return HeaviestEdgeDecomposition(
        matching,
        forest,
        sum((e.w for e in matching), Fraction(0)),
        sum((e.w for e in forest), Fraction(0)),
    )


# ---------------------------------------------------------------------------
# DFS decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DfsDecomposition:
    """Spanning DFS forest with depth levels and per-level star partition.

    Level k holds the tree edges joining depth-k vertices to their
    depth-(k+1) children; each level is a disjoint union of stars centred on
    the depth-k endpoints, and no non-tree edge joins two vertices incident
    to edges of the same level.
    """

    parent: tuple[Optional[int], ...]
    depth: tuple[int, ...]
    component: tuple[int, ...]  # -1 for isolated vertices
    roots: tuple[int, ...]
    tree_edges: tuple[tuple[int, int], ...]  # (parent, child)
    non_tree_edges: tuple[tuple[int, int], ...]
    levels: tuple[tuple[tuple[int, int], ...], ...]
    stars: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]


def dfs_decomposition(g: WeightedGraph) -> DfsDecomposition:
    """DFS forest rooted at each component's lowest vertex id.

    Children are visited in ascending vertex id, making the forest (and
    everything derived from it) deterministic.
    """
    parent: list[Optional[int]] = [None] * g.n
    depth = [-1] * g.n
    component = [-1] * g.n
    roots: list[int] = []
    tree_edges: list[tuple[int, int]] = []
    neighbors = [sorted(v for v, _ in adj) for adj in g.adjacency]
    comp_id = 0
    for root in range(g.n):
        if depth[root] >= 0 or not g.adjacency[root]:
            continue
        roots.append(root)
        depth[root] = 0
        component[root] = comp_id
        # Iterative DFS; the per-vertex cursor preserves ascending child order.
        stack = [(root, 0)]
        while stack:
            u, cursor = stack.pop()
            advanced = False
            for i in range(cursor, len(neighbors[u])):
                v = neighbors[u][i]
                if depth[v] < 0:
                    stack.append((u, i + 1))
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    component[v] = comp_id
                    tree_edges.append((u, v))
                    stack.append((v, 0))
                    advanced = True
                    break
            if advanced:
                continue
        comp_id += 1

    tree_pairs = {tuple(sorted(e)) for e in tree_edges}
    non_tree = tuple(e.pair for e in g.edges if e.pair not in tree_pairs)

    max_depth = max((d for d in depth if d >= 0), default=-1)
    levels: list[tuple[tuple[int, int], ...]] = []
    stars: list[tuple[tuple[int, tuple[int, ...]], ...]] = []
    for k in range(max_depth):
        level = tuple(e for e in tree_edges if depth[e[0]] == k)
        centers: dict[int, list[int]] = {}
        for p, c in level:
            centers.setdefault(p, []).append(c)
        levels.append(level)
        stars.append(
            tuple((center, tuple(sorted(leaves))) for center, leaves in sorted(centers.items()))
        )
    return DfsDecomposition(
        tuple(parent),
        tuple(depth),
        tuple(component),
        tuple(roots),
        tuple(tree_edges),
        non_tree,
        tuple(levels),
        tuple(stars),
    )


def level_separation_violations(dec: DfsDecomposition) -> list[tuple[int, tuple[int, int]]]:
    """Non-tree edges whose endpoints both touch the same level (should be none)."""
    out = []
    for k, level in enumerate(dec.levels):
        touched = set()
        for p, c in level:
            touched.add(p)
            touched.add(c)
        for u, v in dec.non_tree_edges:
            if u in touched and v in touched:
                out.append((k, (u, v)))
    return out


# ---------------------------------------------------------------------------
# Bipartiteness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteWitness:
    bipartite: bool
    coloring: Optional[tuple[int, ...]] = None
    odd_cycle: Optional[tuple[int, ...]] = None


def is_bipartite(g: WeightedGraph) -> BipartiteWitness:
    """2-colorability with a verifiable witness either way."""
    color = [-1] * g.n
    parent: list[Optional[int]] = [None] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v, _ in g.adjacency[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    queue.append(v)
                elif color[v] == color[u]:
                    return BipartiteWitness(False, None, _odd_cycle(parent, u, v))
    return BipartiteWitness(True, tuple(color), None)


def _odd_cycle(parent: Sequence[Optional[int]], u: int, v: int) -> tuple[int, ...]:
    anc_u = _ancestors(parent, u)
    anc_v = _ancestors(parent, v)
    common = next(x for x in anc_u if x in set(anc_v))
    path_u = anc_u[: anc_u.index(common) + 1]
    path_v = anc_v[: anc_v.index(common) + 1]
    cycle = path_u + path_v[::-1][1:]
    assert len(cycle) % 2 == 1
    return tuple(cycle)


def _ancestors(parent: Sequence[Optional[int]], u: int) -> list[int]:
    out = [u]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out
