"""Undirected simple graphs on vertices 0..n-1, with set-based adjacency.

Graphs are immutable after construction and therefore safe to share across
threads and worker processes.  The edge-list text format read and written
here is the single interchange format used by every tool in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class GraphParseError(ValueError):
    """Malformed edge-list document; the message names the offending line."""


class Graph:
    """Immutable simple graph.  Adjacency is a tuple of frozensets."""

    __slots__ = ("n", "_adj", "_nbrs", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj: list[set[int]] = [set() for _ in range(n)]
        edge_set: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            a, b = (u, v) if u < v else (v, u)
            edge_set.add((a, b))
            adj[a].add(b)
            adj[b].add(a)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)
        self._nbrs = tuple(tuple(sorted(s)) for s in adj)
        self._edges = frozenset(edge_set)

    @property
    def m(self) -> int:
        return len(self._edges)

    def adj(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of v in increasing order (deterministic iteration)."""
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """All edges (u, v) with u < v, lexicographically sorted."""
        return sorted(self._edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Pattern:
    """The fixed graph H to tile with.  `kind` distinguishes cliques.

    For kind == "clique", `graph` is the complete graph on `r` vertices and
    specialized clique search is used throughout; otherwise generic subgraph
    embedding is used.
    """

    graph: Graph
    kind: str = "general"
    r: int | None = None

    def __post_init__(self):
        if self.graph.n < 2:
            raise ValueError("pattern needs at least 2 vertices")
        if self.kind == "clique":
            r = self.r
            if r != self.graph.n or self.graph.m != r * (r - 1) // 2:
                raise ValueError("clique pattern must be a complete graph on r vertices")
        elif self.kind != "general":
            raise ValueError(f"unknown pattern kind: {self.kind}")

    @property
    def h(self) -> int:
        return self.graph.n

    @property
    def is_clique(self) -> bool:
        return self.kind == "clique"

    @classmethod
    def clique(cls, r: int) -> "Pattern":
        if r < 2:
            raise ValueError("clique pattern needs r >= 2")
        g = Graph(r, [(i, j) for i in range(r) for j in range(i + 1, r)])
        return cls(graph=g, kind="clique", r=r)

    @classmethod
    def from_graph(cls, g: Graph) -> "Pattern":
        """Wrap an arbitrary graph as a pattern, detecting complete graphs."""
        if g.n >= 2 and g.m == g.n * (g.n - 1) // 2:
            return cls(graph=g, kind="clique", r=g.n)
        return cls(graph=g, kind="general")

    def __repr__(self) -> str:
        if self.is_clique:
            return f"Pattern(K_{self.r})"
        return f"Pattern(h={self.h}, m={self.graph.m})"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: first line "n m", then m lines "u v", u < v.

    Duplicate edge lines collapse to a single edge.  Raises GraphParseError
    naming the 1-based line number for any malformed input.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise GraphParseError("line 1: missing header 'n m'")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphParseError("line 1: header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphParseError("line 1: header must contain two integers") from None
    if n < 0 or m < 0:
        raise GraphParseError("line 1: negative counts in header")

    edges: list[tuple[int, int]] = []
    seen = 0
    for idx, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        if seen >= m:
            raise GraphParseError(f"line {idx}: more than {m} edge lines")
        parts = raw.split()
        if len(parts) != 2:
            raise GraphParseError(f"line {idx}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {idx}: expected two integers") from None
        if u == v:
            raise GraphParseError(f"line {idx}: self-loop {u} {v}")
        if not (0 <= u < v < n):
            raise GraphParseError(f"line {idx}: edge {u} {v} violates 0 <= u < v < n={n}")
        edges.append((u, v))
        seen += 1
    if seen < m:
        raise GraphParseError(f"line {len(lines)}: expected {m} edge lines, found {seen}")
    return Graph(n, edges)


def emit_graph(g: Graph) -> str:
    """Edge-list text for `g`: edges with u < v in lexicographic order."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on `vertices` plus the index map back to `g`.

    Returns (sub, order) where order[i] is the vertex of `g` that became
    index i of `sub`.  Vertices are taken in increasing order.
    """
    order = sorted(set(vertices))
    for v in order:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range")
    pos = {v: i for i, v in enumerate(order)}
    edges = [
        (pos[u], pos[v])
        for u, v in g.edges()
        if u in pos and v in pos
    ]
    return Graph(len(order), edges), order


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    for u in range(n):
        for v in range(u + 1, n):
            yield u, v
