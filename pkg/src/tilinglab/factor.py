"""Exact tiling oracle: decide H-factor existence, build maximal tilings.

find_factor_exact is the ground truth everything else is checked against.
It is an exact-cover search: branch on the lowest-index uncovered vertex,
enumerating all copies through it inside the uncovered set, in lexicographic
order.  Budgets are counted in search-tree nodes, never wall time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .embed import copy_sets_through, find_embedding
from .graphs import Graph, Pattern
from .rng import rng_for

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint copies of a pattern; copies[i][j] is the image of
    pattern vertex j under the i-th copy."""

    pattern: Pattern
    copies: tuple[tuple[int, ...], ...]

    @property
    def covered(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.copies:
            out.update(c)
        return frozenset(out)

    def is_factor_of(self, g: Graph) -> bool:
        return len(self.copies) * self.pattern.h == g.n and len(self.covered) == g.n

    def merged_with(self, other: "Tiling") -> "Tiling":
        if other.pattern.graph != self.pattern.graph:
            raise ValueError("cannot merge tilings of different patterns")
        return Tiling(pattern=self.pattern, copies=self.copies + other.copies)

    def __len__(self) -> int:
        return len(self.copies)


@dataclass(frozen=True)
class FactorResult:
    """Outcome of the exact search: 'factor', 'none', or 'budget'."""

    status: str
    tiling: Tiling | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == "factor"


def find_factor_exact(g: Graph, p: Pattern, budget: int = DEFAULT_BUDGET) -> FactorResult:
    """Decide whether g has a perfect tiling by p, exactly.

    Returns a Tiling when one exists, status 'none' when provably none
    exists, and 'budget' when the node budget ran out first.  If v(H) does
    not divide n the answer is immediately 'none'.
    """
    h = p.h
    if g.n % h != 0:
        return FactorResult(status="none", tiling=None, nodes=0)
    if g.n == 0:
        return FactorResult(status="factor", tiling=Tiling(p, ()), nodes=0)

    nodes = 0
    budget_hit = False

    def rec(uncovered: frozenset[int]) -> list[tuple[int, ...]] | None:
        nonlocal nodes, budget_hit
        if not uncovered:
            return []
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return None
        v = min(uncovered)
        for _img, emb in copy_sets_through(g, p, v, uncovered):
            rest = rec(uncovered - set(emb))
            if budget_hit:
                return None
            if rest is not None:
                return [emb] + rest
        return None

    got = rec(frozenset(range(g.n)))
    if budget_hit:
        return FactorResult(status="budget", tiling=None, nodes=nodes)
    if got is None:
        return FactorResult(status="none", tiling=None, nodes=nodes)
    return FactorResult(status="factor", tiling=Tiling(p, tuple(got)), nodes=nodes)


def greedy_max_tiling(
    g: Graph,
    p: Pattern,
    forbidden: Iterable[int] = (),
    seed: int = 0,
) -> Tiling:
    """Maximal tiling avoiding `forbidden`, grown in a seeded vertex order.

    Vertices are visited in a seeded random permutation; for each still
    available vertex the first copy through it (candidates ranked by the
    same permutation) is taken.  A vertex with no copy at its turn can never
    gain one later, so the leftover set contains no copy of the pattern.
    """
    banned = frozenset(forbidden)
    order = list(range(g.n))
    rng_for(seed, "greedy").shuffle(order)
    rank = {v: i for i, v in enumerate(order)}

    available = set(v for v in range(g.n) if v not in banned)
    copies: list[tuple[int, ...]] = []
    for v in order:
        if v not in available:
            continue
        emb = find_embedding(g, p, allowed=frozenset(available), anchor=v,
                             rank=None if p.is_clique else rank.__getitem__)
        if emb is None:
            continue
        copies.append(emb)
        available.difference_update(emb)
    return Tiling(pattern=p, copies=tuple(copies))


def leftover_of(g: Graph, tiling: Tiling, forbidden: Iterable[int] = ()) -> list[int]:
    """Vertices not covered by the tiling and not forbidden."""
    out = set(range(g.n)) - tiling.covered - set(forbidden)
    return sorted(out)


def find_traversing_copy(
    g: Graph,
    p: Pattern,
    parts: list[Iterable[int]],
) -> tuple[int, ...] | None:
    """Embedding with pattern vertex i drawn from parts[i] (fixed assignment).

    Parts must be pairwise disjoint.  Backtracks over pattern vertices in
    index order with adjacency filtering; exact.
    """
    from .embed import traversing_copy_fixed

    lists = [list(part) for part in parts]
    seen: set[int] = set()
    for part in lists:
        for v in part:
            if v in seen:
                raise ValueError("parts must be pairwise disjoint")
            seen.add(v)
    return traversing_copy_fixed(g, p, lists)


def find_traversing_copy_any(
    g: Graph,
    p: Pattern,
    parts: list[Iterable[int]],
) -> tuple[int, ...] | None:
    """Copy hitting every part once, trying all pattern-to-part assignments."""
    from .embed import traversing_copy

    return traversing_copy(g, p, [list(part) for part in parts])
