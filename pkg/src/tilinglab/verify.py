"""Independent certificate verifiers.

Every object the solvers emit (tilings, absorbers, absorbing structures,
traversing witnesses) can be re-checked here from scratch.  The checkers
share no search code with the solvers beyond raw adjacency queries and the
exact oracle where the definition itself demands factor existence.
"""

from __future__ import annotations

from typing import Iterable

from .factor import FactorResult, Tiling, find_factor_exact
from .graphs import Graph, Pattern, induced_subgraph


class VerificationError(AssertionError):
    """A certificate violates an invariant; the message names it."""


def verify_tiling(
    g: Graph,
    tiling: Tiling,
    require_factor: bool = False,
    require_cover: Iterable[int] | None = None,
    forbidden: Iterable[int] = (),
) -> None:
    """Check a tiling bottom-up: ranges, injectivity, edge preservation,
    pairwise disjointness, and optional coverage requirements."""
    p = tiling.pattern
    h = p.h
    seen: dict[int, int] = {}
    for ci, emb in enumerate(tiling.copies):
        if len(emb) != h:
            raise VerificationError(f"copy {ci} has {len(emb)} vertices, expected {h}")
        if len(set(emb)) != h:
            raise VerificationError(f"copy {ci} repeats a vertex")
        for v in emb:
            if not (0 <= v < g.n):
                raise VerificationError(f"copy {ci} uses out-of-range vertex {v}")
            if v in seen:
                raise VerificationError(
                    f"copies {seen[v]} and {ci} share vertex {v} (disjointness)"
                )
            seen[v] = ci
        for a, b in p.graph.edges():
            if not g.has_edge(emb[a], emb[b]):
                raise VerificationError(
                    f"copy {ci} does not preserve pattern edge ({a},{b}): "
                    f"({emb[a]},{emb[b]}) is not an edge"
                )
    banned = set(forbidden)
    if banned & set(seen):
        v = min(banned & set(seen))
        raise VerificationError(f"tiling touches forbidden vertex {v}")
    if require_factor and len(seen) != g.n:
        raise VerificationError(
            f"not a factor: covers {len(seen)} of {g.n} vertices"
        )
    if require_cover is not None:
        missing = set(require_cover) - set(seen)
        if missing:
            raise VerificationError(f"required vertices not covered: {sorted(missing)[:5]}")


def verify_absorber(
    g: Graph,
    p: Pattern,
    core: Iterable[int],
    absorber: Iterable[int],
    t: int,
    budget: int = 500_000,
) -> None:
    """Check the defining property of an absorber for the h-set `core`:
    |absorber| = h*t, disjoint from core, and both the absorber alone and
    absorber plus core induce subgraphs with perfect tilings."""
    s = sorted(set(core))
    a = sorted(set(absorber))
    h = p.h
    if len(s) != h:
        raise VerificationError(f"core has {len(s)} vertices, expected {h}")
    if len(a) != h * t:
        raise VerificationError(f"absorber has {len(a)} vertices, expected {h * t}")
    if set(s) & set(a):
        raise VerificationError("absorber intersects its core set")
    for v in s + a:
        if not (0 <= v < g.n):
            raise VerificationError(f"vertex {v} out of range")
    sub, _ = induced_subgraph(g, a)
    res = find_factor_exact(sub, p, budget=budget)
    if not res.found:
        raise VerificationError("absorber alone has no perfect tiling")
    sub2, _ = induced_subgraph(g, a + s)
    res2 = find_factor_exact(sub2, p, budget=budget)
    if not res2.found:
        raise VerificationError("absorber plus core has no perfect tiling")


def verify_traversing_witness(
    g: Graph,
    p: Pattern,
    s: int,
    parts: list[list[int]],
) -> None:
    """Check a failure witness: h pairwise-disjoint parts of size >= s with
    no traversing copy of the pattern."""
    from .embed import traversing_copy

    if len(parts) != p.h:
        raise VerificationError(f"witness has {len(parts)} parts, expected {p.h}")
    seen: set[int] = set()
    for i, part in enumerate(parts):
        if len(part) < s:
            raise VerificationError(f"part {i} smaller than s={s}")
        if len(set(part)) != len(part):
            raise VerificationError(f"part {i} repeats a vertex")
        for v in part:
            if not (0 <= v < g.n):
                raise VerificationError(f"part {i} uses out-of-range vertex {v}")
            if v in seen:
                raise VerificationError(f"parts overlap at vertex {v}")
            seen.add(v)
    if traversing_copy(g, p, parts) is not None:
        raise VerificationError("witness family does induce a traversing copy")


def check_factor_result(g: Graph, p: Pattern, result: FactorResult) -> None:
    if result.found:
        verify_tiling(g, result.tiling, require_factor=True)


def verify_structure(
    g: Graph,
    structure,
    template_trials: int = 50,
    seed: int = 0,
    absorber_budget: int = 500_000,
) -> None:
    """Re-check every invariant of an absorbing structure from scratch.

    Disjointness of buffer/core/slots and all edge absorbers, the size
    arithmetic, the maps, the copy families, the absorbing property of every
    edge absorber (via the exact oracle), and the template's robust matching
    property (exhaustively when small, otherwise by `template_trials`
    sampled flex subsets).
    """
    import math

    from .embed import embed_in_set
    from .rng import rng_for

    p = structure.pattern
    h = p.h
    tpl = structure.template

    if structure.n != g.n:
        raise VerificationError(f"structure built for n={structure.n}, graph has {g.n}")
    buffer, core, slots = structure.buffer, structure.core, structure.slots
    if len(buffer) != tpl.flex_size:
        raise VerificationError("buffer size differs from the template flex side")
    if len(core) != tpl.core_size:
        raise VerificationError("core size differs from the template core side")
    if len(slots) != tpl.slot_count * (h - 1):
        raise VerificationError("slot count differs from template * (h-1)")
    base = list(buffer) + list(core) + list(slots)
    if len(set(base)) != len(base):
        raise VerificationError("buffer, core and slots overlap")
    for v in base:
        if not (0 <= v < g.n):
            raise VerificationError(f"vertex {v} out of range")

    flat_blocks = [v for b in structure.slot_blocks for v in b]
    if flat_blocks != list(slots) or any(len(b) != h - 1 for b in structure.slot_blocks):
        raise VerificationError("slot blocks do not partition slots into (h-1)-sets")
    if list(structure.buffer_map) != sorted(buffer):
        raise VerificationError("buffer map is not the index-order bijection")
    if list(structure.core_map) != list(core):
        raise VerificationError("core map is not the index-order bijection")

    if tpl.max_degree > 40:
        raise VerificationError(f"template max degree {tpl.max_degree} exceeds 40")

    edges = set(tpl.edges())
    if set(structure.edge_absorbers) != edges:
        raise VerificationError("edge absorbers do not cover the template edges")
    taken = set(base)
    for (l, r), a in sorted(structure.edge_absorbers.items()):
        if set(a) & taken:
            raise VerificationError(
                f"absorber for edge ({l},{r}) overlaps earlier structure vertices"
            )
        taken |= set(a)
        core_e = sorted({structure.left_vertex(l)} | set(structure.slot_blocks[r]))
        verify_absorber(g, p, core_e, a, structure.config.t, budget=absorber_budget)

    for v, fams in structure.copy_families.items():
        bset = set(buffer)
        for mem in fams:
            if not set(mem) <= bset:
                raise VerificationError(f"family member of {v} leaves the buffer")
            if v in mem:
                raise VerificationError(f"family member of {v} contains {v}")
            if embed_in_set(g, p, set(mem) | {v}) is None:
                raise VerificationError(f"family member of {v} is not a pattern copy")

    if math.comb(tpl.flex_size, tpl.m) <= 2000:
        from itertools import combinations

        for sub in combinations(range(tpl.flex_size), tpl.m):
            if not tpl.matches_with_flex(sub):
                raise VerificationError("template flex subset without perfect matching")
    else:
        rng = rng_for(seed, "structure-verify")
        for _ in range(template_trials):
            sub = rng.sample(range(tpl.flex_size), tpl.m)
            if not tpl.matches_with_flex(sub):
                raise VerificationError("template flex subset without perfect matching")
