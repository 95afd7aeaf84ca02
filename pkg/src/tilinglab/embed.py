"""Deterministic clique enumeration and subgraph-embedding search.

Everything here iterates candidates in a fixed order (vertex index, or an
explicitly supplied ranking), so repeated runs return identical results.
An *embedding* of a pattern H into G is a tuple `emb` of length v(H) with
`emb[i]` the image of pattern vertex i; pattern edges must map to graph
edges (copies are subgraphs, not necessarily induced).
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Sequence

from .graphs import Graph, Pattern


def cliques_of_size(
    g: Graph,
    k: int,
    allowed: frozenset[int] | None = None,
    require: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield all k-cliques inside `allowed` as sorted tuples, lex order.

    If `require` is given, only cliques containing that vertex are produced
    (still lex-sorted including the required vertex).
    """
    if k <= 0:
        return
    pool = frozenset(range(g.n)) if allowed is None else allowed
    if require is not None:
        if require not in pool:
            return
        base = [require]
        cands = sorted(pool & g.adj(require))
        yield from _extend_clique(g, base, cands, k)
    else:
        for v in sorted(pool):
            cands = sorted(u for u in pool & g.adj(v) if u > v)
            yield from _extend_clique(g, [v], cands, k)


def _extend_clique(g: Graph, base: list[int], cands: list[int], k: int) -> Iterator[tuple[int, ...]]:
    if len(base) == k:
        yield tuple(sorted(base))
        return
    need = k - len(base)
    for i, v in enumerate(cands):
        if len(cands) - i < need:
            return
        base.append(v)
        nxt = [u for u in cands[i + 1 :] if g.has_edge(u, v)]
        yield from _extend_clique(g, base, nxt, k)
        base.pop()


def has_clique(g: Graph, k: int, allowed: frozenset[int] | None = None) -> bool:
    for _ in cliques_of_size(g, k, allowed):
        return True
    return False


def pattern_order(p: Pattern) -> list[int]:
    """Search order for pattern vertices: high degree first, then greedily
    maximizing adjacency to already-placed vertices.  Deterministic."""
    h = p.h
    deg = [p.graph.degree(i) for i in range(h)]
    start = max(range(h), key=lambda i: (deg[i], -i))
    order = [start]
    placed = {start}
    while len(order) < h:
        best = None
        best_key = None
        for i in range(h):
            if i in placed:
                continue
            back = sum(1 for j in order if p.graph.has_edge(i, j))
            key = (back, deg[i], -i)
            if best_key is None or key > best_key:
                best, best_key = i, key
        order.append(best)
        placed.add(best)
    return order


def _embed_backtrack(
    g: Graph,
    p: Pattern,
    order: Sequence[int],
    allowed: frozenset[int],
    assigned: dict[int, int],
    rank: Callable[[int], int] | None,
) -> Iterator[tuple[int, ...]]:
    """Yield embeddings extending `assigned` (pattern vertex -> graph vertex)."""
    depth = len(assigned)
    if depth == len(order):
        yield tuple(assigned[i] for i in range(p.h))
        return
    pv = order[depth]
    used = set(assigned.values())
    back = [q for q in order[:depth] if p.graph.has_edge(pv, q)]
    if back:
        cand = set(g.adj(assigned[back[0]]))
        for q in back[1:]:
            cand &= g.adj(assigned[q])
        cand &= allowed
    else:
        cand = set(allowed)
    cand -= used
    ordered = sorted(cand) if rank is None else sorted(cand, key=rank)
    for gv in ordered:
        assigned[pv] = gv
        yield from _embed_backtrack(g, p, order, allowed, assigned, rank)
        del assigned[pv]


def embeddings(
    g: Graph,
    p: Pattern,
    allowed: Iterable[int] | None = None,
    anchor: int | None = None,
    rank: Callable[[int], int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """All embeddings of `p` into `g` within `allowed`.

    With `anchor`, only embeddings whose image contains the anchor vertex are
    produced (the anchor is tried at every pattern position).  Beware that
    distinct embeddings may share an image set.
    """
    pool = frozenset(range(g.n)) if allowed is None else frozenset(allowed)
    order = pattern_order(p)
    if anchor is None:
        yield from _embed_backtrack(g, p, order, pool, {}, rank)
        return
    if anchor not in pool:
        return
    for slot in order:
        new_order = [slot] + [q for q in order if q != slot]
        yield from _embed_backtrack(g, p, new_order, pool, {slot: anchor}, rank)


def find_embedding(
    g: Graph,
    p: Pattern,
    allowed: Iterable[int] | None = None,
    anchor: int | None = None,
    rank: Callable[[int], int] | None = None,
) -> tuple[int, ...] | None:
    """First embedding in deterministic order, or None."""
    pool = frozenset(range(g.n)) if allowed is None else frozenset(allowed)
    if p.is_clique:
        for cl in cliques_of_size(g, p.h, pool, require=anchor):
            return cl
        return None
    for emb in embeddings(g, p, pool, anchor=anchor, rank=rank):
        return emb
    return None


def copy_sets_through(
    g: Graph,
    p: Pattern,
    anchor: int,
    allowed: frozenset[int],
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All distinct copy vertex-sets through `anchor` inside `allowed`.

    Returns a lex-sorted list of (sorted image tuple, one embedding).  For
    clique patterns the image tuple doubles as the embedding.
    """
    if p.is_clique:
        return [(cl, cl) for cl in cliques_of_size(g, p.h, allowed, require=anchor)]
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for emb in embeddings(g, p, allowed, anchor=anchor):
        key = tuple(sorted(emb))
        if key not in seen:
            seen[key] = emb
    return sorted(seen.items())


def embed_in_set(g: Graph, p: Pattern, vertices: Iterable[int]) -> tuple[int, ...] | None:
    """Embedding of `p` using exactly the given |V(p)| vertices, or None."""
    vs = frozenset(vertices)
    if len(vs) != p.h:
        return None
    if p.is_clique:
        t = tuple(sorted(vs))
        for i, u in enumerate(t):
            for v in t[i + 1 :]:
                if not g.has_edge(u, v):
                    return None
        return t
    for emb in embeddings(g, p, vs):
        return emb
    return None


def has_copy(g: Graph, p: Pattern, allowed: Iterable[int] | None = None) -> bool:
    return find_embedding(g, p, allowed) is not None


def traversing_copy_fixed(
    g: Graph,
    p: Pattern,
    parts: Sequence[Iterable[int]],
) -> tuple[int, ...] | None:
    """Embedding with pattern vertex i drawn from parts[i], or None.

    Backtracks over pattern vertices in index order; candidates within each
    part are tried in increasing order.
    """
    h = p.h
    if len(parts) != h:
        raise ValueError("need exactly v(H) parts")
    psets = [sorted(set(part)) for part in parts]

    assigned: list[int] = []

    def rec(i: int) -> tuple[int, ...] | None:
        if i == h:
            return tuple(assigned)
        for gv in psets[i]:
            if gv in assigned:
                continue
            ok = all(
                g.has_edge(gv, assigned[j])
                for j in range(i)
                if p.graph.has_edge(i, j)
            )
            if ok:
                assigned.append(gv)
                res = rec(i + 1)
                if res is not None:
                    return res
                assigned.pop()
        return None

    return rec(0)


def traversing_copy(
    g: Graph,
    p: Pattern,
    parts: Sequence[Iterable[int]],
) -> tuple[int, ...] | None:
    """Copy of `p` with one vertex in each part, any part-to-vertex assignment.

    Tries all assignments of pattern vertices to parts (for cliques the
    assignment is irrelevant and only one is tried).
    """
    from itertools import permutations

    h = p.h
    plist = [list(part) for part in parts]
    if p.is_clique:
        return traversing_copy_fixed(g, p, plist)
    for perm in permutations(range(h)):
        res = traversing_copy_fixed(g, p, [plist[perm[i]] for i in range(h)])
        if res is not None:
            return res
    return None
