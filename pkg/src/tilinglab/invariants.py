"""Graph parameters: minimum degree, clique structure, clique-free subgraph
numbers, traversing-copy thresholds, and the density exponent of a pattern.

alpha_ell(G) is the size of a largest induced subgraph without a clique on
ell vertices (ell = 2 gives the independence number).  The traversing
threshold of (G, H) is the smallest s such that every family of v(H)
pairwise-disjoint s-subsets of V(G) induces a copy of H with one vertex in
each subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .embed import cliques_of_size, traversing_copy
from .graphs import Graph, Pattern
from .rng import rng_for

EXHAUSTIVE_FAMILY_CAP = 500_000


class EnumerationCapError(RuntimeError):
    """Exhaustive enumeration would exceed the configured cap."""


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("minimum degree of the empty graph is undefined")
    return min(g.degree(v) for v in range(g.n))


def max_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("maximum degree of the empty graph is undefined")
    return max(g.degree(v) for v in range(g.n))


def enumerate_cliques(g: Graph, r: int) -> Iterator[tuple[int, ...]]:
    """All r-cliques as sorted tuples, lexicographically ordered."""
    yield from cliques_of_size(g, r)


def max_clique(g: Graph) -> int:
    """Exact clique number via branch and bound with greedy coloring bound."""
    if g.n == 0:
        return 0
    best = 1

    def color_bound(cands: list[int]) -> int:
        # greedy coloring of the induced subgraph; chromatic number bounds clique
        colors: list[set[int]] = []
        for v in cands:
            for cls in colors:
                if all(not g.has_edge(v, u) for u in cls):
                    cls.add(v)
                    break
            else:
                colors.append({v})
        return len(colors)

    def expand(size: int, cands: list[int]) -> None:
        nonlocal best
        if not cands:
            best = max(best, size)
            return
        if size + color_bound(cands) <= best:
            return
        for i, v in enumerate(cands):
            if size + len(cands) - i <= best:
                return
            nxt = [u for u in cands[i + 1 :] if g.has_edge(u, v)]
            expand(size + 1, nxt)

    expand(0, list(range(g.n)))
    return best


@dataclass(frozen=True)
class AlphaResult:
    """Result of the clique-free-subgraph solver."""

    value: int
    witness: tuple[int, ...]
    exact: bool
    nodes: int


def alpha_ell(g: Graph, ell: int, budget: int = 1_000_000) -> AlphaResult:
    """Largest induced K_ell-free subgraph, by branch and bound.

    Branches on a clique copy in the current candidate set: one branch per
    deletable member (earlier members are then pinned as kept).  The
    branching vertex order inside a copy is by degree in the current
    subgraph, largest first, ties broken by smallest index.  If the node
    budget runs out the best set found so far is returned with exact=False.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    n = g.n
    # greedy warm start: gives a sane answer under budget exhaustion and a
    # nontrivial bound from the first node on
    best: list[int] = []
    for v in range(n):
        cand = frozenset(best) | {v}
        if not any(
            True for _ in cliques_of_size(g, ell, cand, require=v)
        ):
            best.append(v)
    nodes = 0
    exhausted = False

    def find_copy(current: frozenset[int]) -> tuple[int, ...] | None:
        for cl in cliques_of_size(g, ell, current):
            return cl
        return None

    def degree_in(v: int, current: frozenset[int]) -> int:
        return len(g.adj(v) & current)

    def rec(current: frozenset[int], kept: frozenset[int]) -> None:
        nonlocal best, nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        if len(current) <= len(best):
            return
        copy = find_copy(current)
        if copy is None:
            if len(current) > len(best):
                best = sorted(current)
            return
        deletable = [v for v in copy if v not in kept]
        if not deletable:
            return
        deletable.sort(key=lambda v: (-degree_in(v, current), v))
        pinned = set()
        for v in deletable:
            rec(current - {v}, kept | pinned)
            pinned.add(v)

    rec(frozenset(range(n)), frozenset())
    return AlphaResult(value=len(best), witness=tuple(best), exact=not exhausted, nodes=nodes)


@dataclass(frozen=True)
class TraversingVerdict:
    """Outcome of a traversing-copy check at probe size s.

    holds: every examined family of h disjoint s-subsets induced a copy of H
    with one vertex per subset.  On failure, `witness` is one family with no
    such copy (re-checkable by traversing-copy search).
    """

    s: int
    mode: str  # "exhaustive" or "sampled"
    holds: bool
    witness: tuple[tuple[int, ...], ...] | None = None
    families_checked: int = 0
    trials: int | None = None
    note: str = ""


def _count_disjoint_families(n: int, h: int, s: int) -> int:
    total = 1
    remaining = n
    for _ in range(h):
        total *= math.comb(remaining, s)
        remaining -= s
    return total // math.factorial(h)


def traversing_check(
    g: Graph,
    p: Pattern,
    s: int,
    mode: str = "exhaustive",
    trials: int = 500,
    seed: int = 0,
    cap: int = EXHAUSTIVE_FAMILY_CAP,
) -> TraversingVerdict:
    """Check whether every family of h disjoint s-subsets spans a traversing
    copy of the pattern (one vertex in each subset, any assignment).

    Exhaustive mode enumerates all families and refuses if their count
    exceeds `cap`.  Sampled mode draws `trials` uniformly random disjoint
    families.  A failing family is returned as a machine-checkable witness.
    """
    h = p.h
    if s < 1:
        raise ValueError("s must be >= 1")
    if h * s > g.n:
        raise ValueError(f"need h*s <= n ({h}*{s} > {g.n})")

    if mode == "exhaustive":
        count = _count_disjoint_families(g.n, h, s)
        if count > cap:
            raise EnumerationCapError(
                f"{count} families exceed the exhaustive cap of {cap}"
            )
        checked = 0
        for fam in _iter_families_one_per_min(list(range(g.n)), h, s):
            checked += 1
            if traversing_copy(g, p, fam) is None:
                return TraversingVerdict(
                    s=s, mode=mode, holds=False,
                    witness=tuple(tuple(x) for x in fam),
                    families_checked=checked,
                )
        return TraversingVerdict(s=s, mode=mode, holds=True, families_checked=checked)

    if mode == "sampled":
        rng = rng_for(seed, "traversing", s)
        for t in range(trials):
            picked = rng.sample(range(g.n), h * s)
            fam = [tuple(sorted(picked[i * s : (i + 1) * s])) for i in range(h)]
            if traversing_copy(g, p, fam) is None:
                return TraversingVerdict(
                    s=s, mode=mode, holds=False,
                    witness=tuple(fam), families_checked=t + 1, trials=trials,
                    note="sampled verdict; failure is conclusive",
                )
        return TraversingVerdict(
            s=s, mode=mode, holds=True, families_checked=trials, trials=trials,
            note="sampled verdict; holding is an empirical estimate",
        )

    raise ValueError(f"unknown mode: {mode}")


def _iter_families_one_per_min(pool: list[int], h: int, s: int) -> Iterator[list[tuple[int, ...]]]:
    """All unordered families of h disjoint s-subsets of pool.

    Subsets are generated in order of their minima; since the family is a
    set of disjoint subsets this enumerates each family exactly once.
    """
    def rec(avail: list[int], k: int) -> Iterator[list[tuple[int, ...]]]:
        if k == 0:
            yield []
            return
        if len(avail) < k * s:
            return
        anchor = avail[0]
        rest = avail[1:]
        # case: anchor belongs to one of the subsets (it is then that subset's min)
        for extra in combinations(rest, s - 1):
            first = (anchor,) + extra
            taken = set(extra)
            sub = [v for v in rest if v not in taken]
            for tail in rec(sub, k - 1):
                yield [first] + tail
        # case: anchor belongs to no subset
        yield from rec(rest, k)

    yield from rec(sorted(pool), h)


def traversing_threshold(
    g: Graph,
    p: Pattern,
    mode: str = "exhaustive",
    trials: int = 500,
    seed: int = 0,
    cap: int = EXHAUSTIVE_FAMILY_CAP,
) -> tuple[float, TraversingVerdict | None]:
    """Smallest s in 1..floor(n/h) passing traversing_check, scanned upward.

    Returns (s, verdict); if no s passes (for instance when G has no copy of
    the pattern at all) the value is math.inf with verdict None.  In sampled
    mode the result is an empirical estimate, flagged via the verdict note.
    """
    h = p.h
    for s in range(1, g.n // h + 1):
        verdict = traversing_check(g, p, s, mode=mode, trials=trials, seed=seed, cap=cap)
        if verdict.holds:
            return s, verdict
    return math.inf, None


def one_density(p: Pattern) -> Fraction:
    """max over subgraphs H' with >= 2 vertices of e(H') / (v(H') - 1).

    Enumerates vertex subsets; for a fixed vertex set the edge count is
    maximized by the induced subgraph, so induced subgraphs attain the max.
    """
    g = p.graph
    best = Fraction(0)
    verts = list(range(g.n))
    for k in range(2, g.n + 1):
        for sub in combinations(verts, k):
            ss = set(sub)
            e = sum(1 for u, v in g.edges() if u in ss and v in ss)
            best = max(best, Fraction(e, k - 1))
    return best


@dataclass(frozen=True)
class ParamReport:
    """Flat report of every parameter computed for one graph."""

    n: int
    m: int
    min_degree: int
    max_degree: int
    max_clique: int
    alpha: dict[int, AlphaResult] = field(default_factory=dict)
    one_density: Fraction | None = None
    traversing: TraversingVerdict | None = None

    def to_flat_dict(self) -> dict:
        out: dict = {
            "schema": "param-report/v1",
            "n": self.n,
            "m": self.m,
            "min_degree": self.min_degree,
            "max_degree": self.max_degree,
            "max_clique": self.max_clique,
        }
        for ell, res in sorted(self.alpha.items()):
            out[f"alpha_{ell}"] = res.value
            out[f"alpha_{ell}_exact"] = res.exact
            out[f"alpha_{ell}_witness"] = list(res.witness)
        if self.one_density is not None:
            out["one_density"] = str(self.one_density)
        if self.traversing is not None:
            t = self.traversing
            out["traversing_s"] = t.s
            out["traversing_mode"] = t.mode
            out["traversing_holds"] = t.holds
            if t.witness is not None:
                out["traversing_witness"] = [list(x) for x in t.witness]
        return out


def param_report(
    g: Graph,
    ells: list[int] = (2,),
    pattern: Pattern | None = None,
    traversing_s: int | None = None,
    traversing_mode: str = "sampled",
    trials: int = 200,
    seed: int = 0,
    alpha_budget: int = 200_000,
) -> ParamReport:
    alpha = {ell: alpha_ell(g, ell, budget=alpha_budget) for ell in ells}
    trav = None
    dens = None
    if pattern is not None:
        dens = one_density(pattern)
        if traversing_s is not None:
            trav = traversing_check(
                g, pattern, traversing_s, mode=traversing_mode, trials=trials, seed=seed
            )
    return ParamReport(
        n=g.n,
        m=g.m,
        min_degree=min_degree(g) if g.n else 0,
        max_degree=max_degree(g) if g.n else 0,
        max_clique=max_clique(g),
        alpha=alpha,
        one_density=dens,
        traversing=trav,
    )
