"""Independent oracles the solvers are checked against.

These share no search code with the package: the factor oracle enumerates
vertex partitions outright, the clique-free oracle scans vertex subsets by
decreasing size, and the copy check is a plain permutation scan.
"""

from __future__ import annotations

from itertools import combinations, permutations

from tilinglab.graphs import Graph, Pattern


def set_hosts_copy(g: Graph, p: Pattern, block: tuple[int, ...]) -> bool:
    """Does the block (|block| = h) host a copy of the pattern?  Checked by
    trying every bijection pattern -> block."""
    h = p.h
    pedges = p.graph.edges()
    for perm in permutations(block):
        if all(g.has_edge(perm[a], perm[b]) for a, b in pedges):
            return True
    return False


def factor_exists_bruteforce(g: Graph, p: Pattern) -> bool:
    """Enumerate all partitions of the vertex set into h-blocks."""
    h = p.h
    if g.n % h != 0:
        return False

    def rec(remaining: tuple[int, ...]) -> bool:
        if not remaining:
            return True
        v = remaining[0]
        rest = remaining[1:]
        for mates in combinations(rest, h - 1):
            block = (v,) + mates
            if set_hosts_copy(g, p, block):
                left = tuple(u for u in rest if u not in mates)
                if rec(left):
                    return True
        return False

    return rec(tuple(range(g.n)))


def alpha_exhaustive(g: Graph, ell: int) -> int:
    """Largest clique-free subset by scanning subsets in decreasing size."""
    n = g.n
    cliques = [frozenset(c) for c in combinations(range(n), ell)
               if all(g.has_edge(u, v) for u, v in combinations(c, 2))]
    for size in range(n, 0, -1):
        for sub in combinations(range(n), size):
            ss = frozenset(sub)
            if not any(c <= ss for c in cliques):
                return size
    return 0


def max_density_subgraphs(p: Pattern):
    """max e(H')/(v(H')-1) over all vertex subsets, as an exact fraction."""
    from fractions import Fraction

    g = p.graph
    best = Fraction(0)
    for k in range(2, g.n + 1):
        for sub in combinations(range(g.n), k):
            ss = set(sub)
            e = sum(1 for u, v in g.edges() if u in ss and v in ss)
            if Fraction(e, k - 1) > best:
                best = Fraction(e, k - 1)
    return best
