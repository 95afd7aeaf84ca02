"""Absorbing machinery: absorbers, robust templates, absorbing sets.

An absorber for an h-set S is a set A_S of h*t vertices, disjoint from S,
such that both G[A_S] and G[A_S + S] have perfect tilings.  Given enough
pairwise-disjoint absorbers for every S, an absorbing set A can be built so
that G[A + R] has a perfect tiling for every small remainder R respecting
divisibility.  The flexibility comes from a robust bipartite template: a
bounded-degree graph on (flex + core, slots) such that every m-subset of the
flex side, together with the core side, has a perfect matching onto slots.

Desk-scale runs use override constants (flagged in AbsorberConfig); the
structural identity remainder_frac = surplus_ratio/(h-1), which the
divisibility bookkeeping depends on, is enforced in every configuration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator

from .embed import cliques_of_size, embed_in_set, find_embedding
from .factor import Tiling, find_factor_exact, find_traversing_copy_any, greedy_max_tiling
from .graphs import Graph, Pattern, induced_subgraph
from .matching import max_bipartite_matching
from .rng import derive_seed, rng_for


class StageFailure(RuntimeError):
    """A greedy stage ran out of candidates; carries the stage name."""

    def __init__(self, stage: str, detail: str = "", blocking: tuple | None = None):
        self.stage = stage
        self.detail = detail
        self.blocking = blocking
        msg = f"stage '{stage}' failed"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class TemplateBuildError(RuntimeError):
    """Template verification kept failing; carries a falsifying subset."""

    def __init__(self, msg: str, falsifying: tuple[int, ...] | None = None):
        self.falsifying = falsifying
        super().__init__(msg)


class CertificateBugError(RuntimeError):
    """A property certified at build time failed at use time."""


class HypothesisWarning(UserWarning):
    """Degree / clique-freeness prerequisites do not hold; builders proceed."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class AbsorberConfig:
    """Constants driving absorber construction.

    The asymptotic bindings are sample_prob = absorber_frac/(500*h*t),
    surplus_ratio = sample_prob**(h-1)*absorber_frac/4 and remainder_frac =
    surplus_ratio/(h-1), all in (0,1).  Desk-scale configurations override
    the first two (overrides=True) but must keep the remainder identity.
    """

    h: int
    t: int
    absorber_frac: float      # required disjoint-absorber family density per core set
    sample_prob: float        # buffer sampling probability
    surplus_ratio: float      # buffer surplus per template round: |buffer| = (1+ratio)*m
    remainder_frac: float     # absorbable remainder fraction; = surplus_ratio/(h-1)
    degree_frac: float = 0.1       # minimum-degree fraction for hypothesis checks
    threshold_frac: float = 0.2    # clique-free / traversing threshold fraction
    overrides: bool = False
    pool_size: int | None = None         # neighbor-pool size per core vertex
    part_degree_min: int | None = None   # per-class degree floor for the partition build
    common_nbhd_min: int | None = None   # common-neighborhood floor for clique descent
    m_cap: int | None = None             # cap on the template round size
    sample_retries: int = 50
    template_retries: int = 20
    partition_retries: int = 20

    def __post_init__(self):
        if self.h < 2 or self.t < 1:
            raise ValueError("need h >= 2 and t >= 1")
        want = self.surplus_ratio / (self.h - 1)
        if not math.isclose(self.remainder_frac, want, rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError(
                "remainder_frac must equal surplus_ratio/(h-1); "
                f"got {self.remainder_frac} vs {want}"
            )
        if not self.overrides:
            q = self.absorber_frac / (500 * self.h * self.t)
            b = q ** (self.h - 1) * self.absorber_frac / 4
            if not (math.isclose(self.sample_prob, q, rel_tol=1e-9)
                    and math.isclose(self.surplus_ratio, b, rel_tol=1e-9)):
                raise ValueError("non-override config must use the asymptotic bindings")
            for x in (self.absorber_frac, self.sample_prob, self.surplus_ratio,
                      self.remainder_frac):
                if not 0 < x < 1:
                    raise ValueError("asymptotic constants must lie in (0, 1)")

    @classmethod
    def asymptotic(cls, h: int, t: int, absorber_frac: float, **kw) -> "AbsorberConfig":
        q = absorber_frac / (500 * h * t)
        b = q ** (h - 1) * absorber_frac / 4
        return cls(h=h, t=t, absorber_frac=absorber_frac, sample_prob=q,
                   surplus_ratio=b, remainder_frac=b / (h - 1), overrides=False, **kw)

    @classmethod
    def desk_scale(
        cls,
        h: int,
        t: int = 1,
        absorber_frac: float = 0.05,
        sample_prob: float = 0.08,
        surplus_ratio: float = 6.0,
        **kw,
    ) -> "AbsorberConfig":
        return cls(h=h, t=t, absorber_frac=absorber_frac, sample_prob=sample_prob,
                   surplus_ratio=surplus_ratio, remainder_frac=surplus_ratio / (h - 1),
                   overrides=True, **kw)


# ---------------------------------------------------------------------------
# robust template


@dataclass(frozen=True)
class TemplateGraph:
    """Bipartite template on (flex + core, slots) with the robust property:
    for every m-subset F of the flex side, (F + core, slots) has a perfect
    matching.  Sizes: flex = m + surplus, core = 2m, slots = 3m; maximum
    degree at most 40.
    """

    m: int
    surplus: int
    mode: str
    left_adj: tuple[tuple[int, ...], ...]
    verification: dict = field(hash=False)

    @property
    def flex_size(self) -> int:
        return self.m + self.surplus

    @property
    def core_size(self) -> int:
        return 2 * self.m

    @property
    def slot_count(self) -> int:
        return 3 * self.m

    @property
    def left_size(self) -> int:
        return self.flex_size + self.core_size

    @property
    def max_degree(self) -> int:
        right_deg = [0] * self.slot_count
        best = 0
        for nbrs in self.left_adj:
            best = max(best, len(nbrs))
            for r in nbrs:
                right_deg[r] += 1
        return max(best, max(right_deg, default=0))

    def edges(self) -> list[tuple[int, int]]:
        return [(l, r) for l in range(self.left_size) for r in self.left_adj[l]]

    def matches_with_flex(self, flex_subset: Iterable[int]) -> bool:
        """Perfect matching of (flex_subset + core) onto slots?"""
        chosen = sorted(set(flex_subset))
        if len(chosen) != self.m or any(i >= self.flex_size for i in chosen):
            raise ValueError("flex subset must pick exactly m flex indices")
        left = chosen + list(range(self.flex_size, self.left_size))
        adj = [list(self.left_adj[l]) for l in left]
        size, _, _ = max_bipartite_matching(len(left), self.slot_count, adj)
        return size == self.slot_count


def _surplus_of(m: int, beta: float) -> int:
    return math.ceil(beta * m)


def _template_subset_iter(flex_size: int, m: int) -> Iterator[tuple[int, ...]]:
    yield from combinations(range(flex_size), m)


def build_template(
    m: int,
    beta: float,
    mode: str = "complete-bipartite",
    verify: str = "exhaustive",
    trials: int = 1000,
    seed: int = 0,
    degree: int = 12,
    retries: int = 20,
    exhaustive_cap: int = 20_000,
) -> TemplateGraph:
    """Build a robust template at round size m and surplus ceil(beta*m).

    complete-bipartite mode joins every left vertex to every slot; the robust
    property is then immediate from Hall's condition, and the degree-40 bound
    requires 3m + ceil(beta*m) <= 40.  random-regular mode samples a
    configuration-style pairing with all degrees in [8, 40] and certifies the
    property by matching checks (exhaustive, or `trials` sampled subsets when
    verify="sampled"), resampling on failure up to `retries` times.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    surplus = _surplus_of(m, beta)
    flex = m + surplus
    left = flex + 2 * m
    slots = 3 * m

    if mode == "complete-bipartite":
        if left > 40:
            raise ValueError(
                f"complete-bipartite mode needs 3m + ceil(beta*m) <= 40, got {left}"
            )
        adj = tuple(tuple(range(slots)) for _ in range(left))
        tpl = TemplateGraph(m=m, surplus=surplus, mode=mode, left_adj=adj,
                            verification={"mode": "analytic"})
        checked = _verify_template(tpl, verify, trials, seed, exhaustive_cap)
        return TemplateGraph(m=m, surplus=surplus, mode=mode, left_adj=adj,
                             verification=checked)

    if mode == "random-regular":
        for attempt in range(retries):
            rng = rng_for(seed, "template", attempt)
            total = degree * left
            right_stubs: list[int] = []
            base, extra = divmod(total, slots)
            for r in range(slots):
                right_stubs.extend([r] * (base + (1 if r < extra else 0)))
            rng.shuffle(right_stubs)
            adj_sets: list[set[int]] = [set() for _ in range(left)]
            idx = 0
            for l in range(left):
                for _ in range(degree):
                    adj_sets[l].add(right_stubs[idx])
                    idx += 1
            left_deg = [len(s) for s in adj_sets]
            right_deg = [0] * slots
            for s in adj_sets:
                for r in s:
                    right_deg[r] += 1
            degs = left_deg + right_deg
            if min(degs) < 8 or max(degs) > 40:
                continue
            adj = tuple(tuple(sorted(s)) for s in adj_sets)
            tpl = TemplateGraph(m=m, surplus=surplus, mode=mode, left_adj=adj,
                                verification={})
            try:
                checked = _verify_template(tpl, verify, trials,
                                           derive_seed(seed, "verify", attempt),
                                           exhaustive_cap)
            except TemplateBuildError:
                continue
            return TemplateGraph(m=m, surplus=surplus, mode=mode, left_adj=adj,
                                 verification=checked)
        raise TemplateBuildError(
            f"no verified template after {retries} samples (m={m}, beta={beta})"
        )

    raise ValueError(f"unknown template mode: {mode}")


def _verify_template(
    tpl: TemplateGraph,
    verify: str,
    trials: int,
    seed: int,
    exhaustive_cap: int,
) -> dict:
    if verify == "exhaustive":
        count = math.comb(tpl.flex_size, tpl.m)
        if count > exhaustive_cap:
            raise ValueError(
                f"{count} flex subsets exceed the exhaustive cap; use sampled mode"
            )
        n_checked = 0
        for sub in _template_subset_iter(tpl.flex_size, tpl.m):
            n_checked += 1
            if not tpl.matches_with_flex(sub):
                raise TemplateBuildError("flex subset without perfect matching",
                                         falsifying=sub)
        return {"mode": "exhaustive", "checks": n_checked}
    if verify == "sampled":
        rng = rng_for(seed, "template-verify")
        for i in range(trials):
            sub = tuple(sorted(rng.sample(range(tpl.flex_size), tpl.m)))
            if not tpl.matches_with_flex(sub):
                raise TemplateBuildError("sampled flex subset without perfect matching",
                                         falsifying=sub)
        return {"mode": "sampled", "trials": trials, "seed": seed}
    raise ValueError(f"unknown verification mode: {verify}")


# ---------------------------------------------------------------------------
# absorbers


def is_st_absorber(
    g: Graph,
    p: Pattern,
    core: Iterable[int],
    candidate: Iterable[int],
    t: int,
    budget: int = 500_000,
) -> bool:
    """True iff `candidate` absorbs the h-set `core` with multiplicity t:
    both G[candidate] and G[candidate + core] have perfect tilings."""
    s = frozenset(core)
    a = frozenset(candidate)
    h = p.h
    if len(s) != h:
        raise ValueError(f"core set must have exactly {h} vertices")
    if len(a) != h * t:
        raise ValueError(f"absorber must have exactly {h * t} vertices")
    if s & a:
        raise ValueError("absorber must be disjoint from its core set")
    sub, _ = induced_subgraph(g, a)
    if not find_factor_exact(sub, p, budget=budget).found:
        return False
    sub2, _ = induced_subgraph(g, a | s)
    return find_factor_exact(sub2, p, budget=budget).found


def _iter_copy_sets(g: Graph, p: Pattern, allowed: frozenset[int]) -> Iterator[frozenset[int]]:
    """Distinct copy vertex-sets inside `allowed`, lexicographically by
    sorted image (enumerated via their minimum vertex)."""
    from .embed import copy_sets_through

    for v in sorted(allowed):
        tail = frozenset(u for u in allowed if u >= v)
        for img, _emb in copy_sets_through(g, p, v, tail):
            yield frozenset(img)


def disjoint_absorber_family_direct(
    g: Graph,
    p: Pattern,
    core: Iterable[int],
    t: int,
    target: int,
    forbidden: Iterable[int] = (),
    attempts_per: int = 64,
    budget: int = 200_000,
    allow_partial: bool = False,
) -> list[frozenset[int]]:
    """Pairwise-disjoint absorbers for `core` found by direct exact search.

    Each absorber is assembled as t disjoint pattern copies (so its own
    tiling is immediate) and kept only if the exact oracle tiles the union
    with the core set as well.  Candidates are scanned in lexicographic
    order, so the family is deterministic.
    """
    core_t = tuple(sorted(set(core)))
    h = p.h
    if len(core_t) != h:
        raise ValueError(f"core set must have exactly {h} vertices")
    used: set[int] = set(core_t) | set(forbidden)
    out: list[frozenset[int]] = []
    while len(out) < target:
        found = _direct_absorber(g, p, core_t, t, frozenset(used), attempts_per, budget)
        if found is None:
            if allow_partial:
                break
            raise StageFailure(
                "direct-absorbers",
                f"found {len(out)} of {target} disjoint absorbers",
                blocking=core_t,
            )
        out.append(found)
        used |= found
    return out


def _direct_absorber(
    g: Graph,
    p: Pattern,
    core_t: tuple[int, ...],
    t: int,
    used: frozenset[int],
    attempts_per: int,
    budget: int,
    per_anchor: int = 6,
) -> frozenset[int] | None:
    """First candidate (t disjoint copies) whose union tiles together with
    the core.  Candidates rotate through anchor vertices so one anchor that
    is incompatible with the core cannot exhaust the attempt budget."""
    from .embed import copy_sets_through

    allowed = frozenset(range(g.n)) - used
    attempts = 0
    for a in sorted(allowed):
        tail = frozenset(u for u in allowed if u >= a)
        tried_here = 0
        for img, _emb in copy_sets_through(g, p, a, tail):
            cand = set(img)
            feasible = True
            for _ in range(t - 1):
                nxt = None
                for c in _iter_copy_sets(g, p, allowed - frozenset(cand)):
                    nxt = c
                    break
                if nxt is None:
                    feasible = False
                    break
                cand |= nxt
            if not feasible:
                return None
            sub, _ = induced_subgraph(g, cand | set(core_t))
            if find_factor_exact(sub, p, budget=budget).found:
                return frozenset(cand)
            attempts += 1
            tried_here += 1
            if attempts >= attempts_per:
                return None
            if tried_here >= per_anchor:
                break
    return None


def disjoint_absorber_family_general(
    g: Graph,
    p: Pattern,
    core: Iterable[int],
    target: int,
    config: AbsorberConfig,
    seed: int = 0,
    t: int | None = None,
    forbidden: Iterable[int] = (),
    check_hypotheses: bool = True,
    allow_partial: bool = False,
) -> list[frozenset[int]]:
    """Absorber family via disjoint neighbor pools and traversing copies.

    For each core vertex w, a pool inside N(w) is reserved and greedily
    tiled; one designated vertex per copy goes into w's mark set.  Every
    copy traversing all mark sets, combined with the designated copies it
    hits, is one absorber of h*h vertices.  Extraction repeats until the
    target is met or the traversing search is exhausted.
    """
    h = p.h
    if t is not None and t != h:
        raise ValueError("the traversing construction produces multiplicity h absorbers")
    core_t = tuple(sorted(set(core)))
    if len(core_t) != h:
        raise ValueError(f"core set must have exactly {h} vertices")
    n = g.n

    if check_hypotheses:
        _warn_general_hypotheses(g, p, config, seed)

    pool_size = config.pool_size or max(h, math.ceil(config.degree_frac * n / (2 * h)))
    blocked: set[int] = set(core_t) | set(forbidden)
    pools: dict[int, list[int]] = {}
    for w in core_t:
        avail = [u for u in g.neighbors(w) if u not in blocked]
        if len(avail) < pool_size:
            if allow_partial:
                return []
            raise StageFailure(
                "neighbor-pools",
                f"vertex {w} has only {len(avail)} usable neighbors, need {pool_size}",
                blocking=(w,),
            )
        pools[w] = avail[:pool_size]
        blocked.update(pools[w])

    designated: dict[int, dict[int, frozenset[int]]] = {}
    for i, w in enumerate(core_t):
        outside = set(range(n)) - set(pools[w])
        tiling = greedy_max_tiling(g, p, forbidden=outside, seed=derive_seed(seed, "pool", i))
        designated[w] = {min(emb): frozenset(emb) for emb in tiling.copies}

    marks = {w: sorted(designated[w]) for w in core_t}
    absorbers: list[frozenset[int]] = []
    while len(absorbers) < target:
        trav = find_traversing_copy_any(g, p, [marks[w] for w in core_t])
        if trav is None:
            if allow_partial:
                break
            raise StageFailure(
                "traversing",
                f"found {len(absorbers)} of {target} absorbers",
                blocking=core_t,
            )
        absorber: set[int] = set()
        for w in core_t:
            hit = next(v for v in trav if v in designated[w])
            absorber |= designated[w][hit]
            marks[w].remove(hit)
            del designated[w][hit]
        if not is_st_absorber(g, p, core_t, absorber, h):
            raise StageFailure(
                "verify", "constructed absorber failed re-verification",
                blocking=core_t,
            )
        absorbers.append(frozenset(absorber))
    return absorbers


def _warn_general_hypotheses(g: Graph, p: Pattern, config: AbsorberConfig, seed: int) -> None:
    from .invariants import min_degree, traversing_check

    n = g.n
    need = config.degree_frac * n
    if min_degree(g) < need:
        warnings.warn(
            f"minimum degree {min_degree(g)} below {need:.1f}",
            HypothesisWarning, stacklevel=3,
        )
    s = max(1, math.ceil(config.threshold_frac * n))
    if p.h * s <= n:
        verdict = traversing_check(g, p, s, mode="sampled", trials=50,
                                   seed=derive_seed(seed, "hypothesis"))
        if not verdict.holds:
            warnings.warn(
                f"traversing property fails at probe size {s}",
                HypothesisWarning, stacklevel=3,
            )


def disjoint_absorber_family_clique(
    g: Graph,
    r: int,
    ell: int,
    core: Iterable[int],
    target: int,
    config: AbsorberConfig,
    seed: int = 0,
    forbidden: Iterable[int] = (),
    check_hypotheses: bool = True,
    allow_partial: bool = False,
) -> list[frozenset[int]]:
    """Absorber family for complete patterns via a random vertex partition.

    The vertex set (minus core and forbidden) is split into r+1 seeded
    random classes.  Each absorber is one clique on r vertices found in the
    last class by common-neighborhood descent (greedy clique of size r-ell,
    then a clique on ell vertices inside the common neighborhood), plus for
    each i a clique on r-1 vertices inside N(core_i) & N(w_i) & class_i.
    Used vertices are tracked per class; partitions are reseeded when the
    degree-into-class floor fails or candidates run out.
    """
    p = Pattern.clique(r)
    core_t = tuple(sorted(set(core)))
    if len(core_t) != r:
        raise ValueError(f"core set must have exactly {r} vertices")
    n = g.n

    if check_hypotheses:
        _warn_clique_hypotheses(g, r, ell, config)

    frac = (r - ell) / (r - ell + 1)
    part_min = config.part_degree_min
    if part_min is None:
        part_min = math.ceil((frac + config.degree_frac / 2) * n / (r + 1))
    cn_min = config.common_nbhd_min
    if cn_min is None:
        cn_min = math.ceil(config.degree_frac * n / (4 * (r + 1)))

    collected: list[frozenset[int]] = []
    out_of_play: set[int] = set(core_t) | set(forbidden)
    for attempt in range(config.partition_retries):
        rest = [v for v in range(n) if v not in out_of_play]
        rng = rng_for(seed, "partition", attempt)
        rng.shuffle(rest)
        k, extra = divmod(len(rest), r + 1)
        classes: list[list[int]] = []
        pos = 0
        for i in range(r + 1):
            size = k + (1 if i < extra else 0)
            classes.append(sorted(rest[pos : pos + size]))
            pos += size
        if any(len(c) == 0 for c in classes):
            continue
        if not _partition_degrees_ok(g, classes, part_min):
            continue
        used: list[set[int]] = [set() for _ in range(r + 1)]
        while len(collected) < target:
            got = _build_partition_absorber(g, r, ell, core_t, classes, used, cn_min)
            if got is None:
                break
            collected.append(got)
            out_of_play |= got
        if len(collected) >= target:
            return collected
    if allow_partial:
        return collected
    raise StageFailure(
        "partition-absorbers",
        f"found {len(collected)} of {target} after {config.partition_retries} partitions",
        blocking=core_t,
    )


def _warn_clique_hypotheses(g: Graph, r: int, ell: int, config: AbsorberConfig) -> None:
    from .invariants import alpha_ell, min_degree

    n = g.n
    frac = (r - ell) / (r - ell + 1)
    need = (frac + config.degree_frac) * n
    if min_degree(g) < need:
        warnings.warn(
            f"minimum degree {min_degree(g)} below {need:.1f}",
            HypothesisWarning, stacklevel=3,
        )
    if n <= 40:
        res = alpha_ell(g, ell)
        kind = "exact"
    else:
        res = alpha_ell(g, ell, budget=20_000)
        kind = "lower bound"
    if res.value > config.threshold_frac * n:
        warnings.warn(
            f"alpha_{ell} {kind} {res.value} above {config.threshold_frac * n:.1f}",
            HypothesisWarning, stacklevel=3,
        )


def _partition_degrees_ok(g: Graph, classes: list[list[int]], part_min: int) -> bool:
    sets = [frozenset(c) for c in classes]
    for v in range(g.n):
        nb = g.adj(v)
        for cls in sets:
            if len(nb & cls) < part_min:
                return False
    return True


def _clique_by_descent(
    g: Graph,
    size: int,
    ell: int,
    avail: list[int],
    cn_min: int,
) -> tuple[int, ...] | None:
    """Clique on `size` vertices in `avail`: greedy descent to size-ell, then
    a clique on ell vertices inside the common neighborhood."""
    if size <= 0:
        return ()
    pool = frozenset(avail)
    if size <= ell:
        for cl in cliques_of_size(g, size, pool):
            return cl
        return None
    for start in sorted(avail):
        base = [start]
        common = pool & g.adj(start)
        ok = True
        while len(base) < size - ell:
            if len(common) < cn_min:
                ok = False
                break
            nxt = min(common)
            base.append(nxt)
            common = common & g.adj(nxt)
        if not ok:
            continue
        if len(common) < cn_min:
            continue
        for cl in cliques_of_size(g, ell, frozenset(common)):
            return tuple(sorted(base + list(cl)))
    return None


def _build_partition_absorber(
    g: Graph,
    r: int,
    ell: int,
    core_t: tuple[int, ...],
    classes: list[list[int]],
    used: list[set[int]],
    cn_min: int,
    clique_candidates: int = 50,
) -> frozenset[int] | None:
    p = Pattern.clique(r)
    top_avail = [v for v in classes[r] if v not in used[r]]
    seen: list[tuple[int, ...]] = []
    pool = list(top_avail)
    while len(seen) < clique_candidates:
        top = _clique_by_descent(g, r, ell, pool, cn_min)
        if top is None:
            return None
        seen.append(top)
        for label in permutations(top):
            legs: list[tuple[int, ...]] = []
            taken: set[int] = set()
            for i in range(r):
                v_i = core_t[i]
                w_i = label[i]
                cand = sorted(
                    (g.adj(v_i) & g.adj(w_i) & frozenset(classes[i]))
                    - used[i] - taken
                )
                leg = _clique_by_descent(g, r - 1, ell, cand, cn_min)
                if leg is None:
                    break
                legs.append(leg)
                taken |= set(leg)
            if len(legs) == r:
                absorber = set(top)
                for leg in legs:
                    absorber |= set(leg)
                if is_st_absorber(g, p, core_t, absorber, r):
                    used[r].update(top)
                    for i in range(r):
                        used[i].update(legs[i])
                    return frozenset(absorber)
        # exclude this clique's smallest vertex and look for another
        pool = [v for v in pool if v != min(top)]
    return None


# ---------------------------------------------------------------------------
# family-builder protocol

FamilyBuilder = Callable[..., list[frozenset[int]]]


def make_family_builder(
    kind: str,
    g: Graph,
    p: Pattern,
    config: AbsorberConfig,
    seed: int = 0,
    ell: int | None = None,
) -> FamilyBuilder:
    """Closure with signature (core, t, target, forbidden, allow_partial).

    kind 'general' and 'clique' run the corresponding construction when the
    requested multiplicity matches the construction's natural one (t = h);
    other multiplicities fall through to the direct exact search.  kind
    'direct' always uses the direct search.  Hypothesis checks run once per
    builder, on the first call.
    """
    if kind not in ("direct", "general", "clique"):
        raise ValueError(f"unknown family builder kind: {kind}")
    if kind == "clique":
        if not p.is_clique:
            raise ValueError("clique builder needs a clique pattern")
        if ell is None or not (p.r > ell >= 2):
            raise ValueError("clique builder needs r > ell >= 2")
    state = {"checked": False}

    def builder(core, t, target, forbidden=frozenset(), allow_partial=False):
        check = not state["checked"]
        state["checked"] = True
        if kind == "general" and t == p.h:
            return disjoint_absorber_family_general(
                g, p, core, target, config, seed=derive_seed(seed, "fam", *sorted(core)),
                forbidden=forbidden, check_hypotheses=check, allow_partial=allow_partial,
            )
        if kind == "clique" and t == p.h:
            return disjoint_absorber_family_clique(
                g, p.r, ell, core, target, config,
                seed=derive_seed(seed, "fam", *sorted(core)),
                forbidden=forbidden, check_hypotheses=check, allow_partial=allow_partial,
            )
        return disjoint_absorber_family_direct(
            g, p, core, t, target, forbidden=forbidden, allow_partial=allow_partial,
        )

    return builder


# ---------------------------------------------------------------------------
# absorbing structure


@dataclass
class AbsorbingStructure:
    """The assembled absorbing set plus all bookkeeping needed to absorb.

    buffer: vertices consumed flexibly by copies so that exactly m survive;
    core: always matched through the template; slots: grouped into blocks of
    h-1 vertices, each block tiled together with one matched buffer/core
    vertex; edge_absorbers: one absorber per template edge, keyed by the
    edge.  copy_families[v] lists the (h-1)-subsets of the buffer forming a
    pattern copy with v.
    """

    n: int
    pattern: Pattern
    config: AbsorberConfig
    seed: int
    buffer: tuple[int, ...]
    core: tuple[int, ...]
    slots: tuple[int, ...]
    slot_blocks: tuple[tuple[int, ...], ...]
    template: TemplateGraph
    buffer_map: tuple[int, ...]
    core_map: tuple[int, ...]
    edge_absorbers: dict[tuple[int, int], tuple[int, ...]]
    copy_families: dict[int, tuple[tuple[int, ...], ...]]
    harvest_sizes: dict[int, int]
    size_report: dict

    @property
    def absorbing_set(self) -> frozenset[int]:
        out = set(self.buffer) | set(self.core) | set(self.slots)
        for a in self.edge_absorbers.values():
            out.update(a)
        return frozenset(out)

    @property
    def max_remainder(self) -> int:
        """Largest remainder size absorbable by this structure."""
        h = self.pattern.h
        by_surplus = self.template.surplus // (h - 1)
        by_frac = math.floor(self.config.remainder_frac * self.n)
        return min(by_surplus, by_frac)

    def valid_remainder_sizes(self) -> list[int]:
        h = self.pattern.h
        a = len(self.absorbing_set)
        return [k for k in range(self.max_remainder + 1) if (a + k) % h == 0]

    def left_vertex(self, l: int) -> int:
        """Graph vertex behind template left index l."""
        if l < self.template.flex_size:
            return self.buffer_map[l]
        return self.core_map[l - self.template.flex_size]


def build_absorbing_set(
    g: Graph,
    p: Pattern,
    config: AbsorberConfig,
    seed: int = 0,
    family_builder: FamilyBuilder | None = None,
    harvest_slack: int = 2,
) -> AbsorbingStructure:
    """Assemble an absorbing structure.

    Stages: (1) harvest, per vertex v, a family of disjoint copies through v
    out of absorber runs whose core set contains v; (2) sample the buffer
    with probability sample_prob, retrying until the sample is small enough
    and every vertex keeps enough copies inside the buffer; (3) build the
    template at the implied round size; (4) reserve core and slot vertices;
    (5) map template sides onto them; (6) pick pairwise-disjoint absorbers
    for every template edge; (7) assemble and report sizes.  Any stage that
    exhausts its candidates raises StageFailure naming the stage and the
    blocking core set.
    """
    h = p.h
    if config.h != h:
        raise ValueError("config.h must match the pattern size")
    n = g.n
    if family_builder is None:
        family_builder = make_family_builder("direct", g, p, config, seed=seed)

    # stage 1: per-vertex copy harvest via absorber runs
    gamma_target = max(1, math.ceil(config.absorber_frac * n))
    harvest: dict[int, list[frozenset[int]]] = {}
    for v in range(n):
        nbrs = g.neighbors(v)
        if len(nbrs) < h - 1:
            raise StageFailure("copy-families", f"vertex {v} has degree < h-1",
                               blocking=(v,))
        # a core set that is itself a copy keeps the absorber runs cheap;
        # fall back to the lowest neighbors when no copy passes through v
        emb = find_embedding(g, p, anchor=v)
        if emb is not None:
            core_v = tuple(sorted(emb))
        else:
            core_v = tuple(sorted({v} | set(nbrs[: h - 1])))
        copies: list[frozenset[int]] = []
        used: set[int] = set()
        spent: set[int] = set()
        while len(copies) < gamma_target:
            batch = gamma_target - len(copies) + harvest_slack
            runs = family_builder(core_v, config.t, batch, frozenset(spent), True)
            if not runs:
                break
            for ab in runs:
                spent |= ab
                mates = _copy_through_from_run(g, p, v, ab, core_v, used)
                if mates is not None:
                    copies.append(mates)
                    used |= mates
        if len(copies) < gamma_target:
            raise StageFailure(
                "copy-families",
                f"vertex {v}: {len(copies)} disjoint copies, need {gamma_target}",
                blocking=core_v,
            )
        harvest[v] = copies

    # stage 2: buffer sampling with the concentration event checked directly
    q = config.sample_prob
    beta = config.surplus_ratio
    buffer: list[int] | None = None
    families: dict[int, tuple[tuple[int, ...], ...]] = {}
    m = 0
    for attempt in range(config.sample_retries):
        rng = rng_for(seed, "buffer", attempt)
        raw = [v for v in range(n) if rng.random() < q]
        if len(raw) > math.ceil(2 * n * q):
            continue
        mm = 0
        while (mm + 1) + _surplus_of(mm + 1, beta) <= len(raw):
            mm += 1
        if config.m_cap is not None:
            mm = min(mm, config.m_cap)
        if mm < 1:
            continue
        cand = raw[: mm + _surplus_of(mm, beta)]
        fams = _families_in_buffer(g, p, cand)
        ok = True
        for v in range(n):
            if len(fams[v]) < q ** (h - 1) * len(harvest[v]) / 2:
                ok = False
                break
        if ok:
            buffer, m, families = cand, mm, fams
            break
    if buffer is None:
        raise StageFailure(
            "buffer-sample",
            f"no acceptable buffer in {config.sample_retries} samples",
        )
    surplus = _surplus_of(m, beta)

    # stage 3: template
    left = 3 * m + surplus
    mode = "complete-bipartite" if left <= 40 else "random-regular"
    verify = "exhaustive" if math.comb(m + surplus, m) <= 2000 else "sampled"
    template = build_template(m, beta, mode=mode, verify=verify,
                              seed=derive_seed(seed, "template"),
                              retries=config.template_retries)

    # stages 4-5: core and slot vertices, index-order maps.  Slot blocks are
    # (h-1)-cliques so that every block plus a matched vertex can host a
    # copy; with multiplicity-1 edge absorbers an edgeless block would make
    # some template edges impossible to absorb.
    buffer_set = set(buffer)
    outside = [v for v in range(n) if v not in buffer_set]
    need = 2 * m + 3 * m * (h - 1)
    if len(outside) < need:
        raise StageFailure("core-slots", f"need {need} vertices outside the buffer")
    core = tuple(outside[: 2 * m])
    block_pool = set(outside[2 * m :])
    blocks: list[tuple[int, ...]] = []
    for _ in range(3 * m):
        found = None
        for cl in cliques_of_size(g, h - 1, frozenset(block_pool)):
            found = cl
            break
        if found is None:
            raise StageFailure(
                "core-slots", f"no clique on {h - 1} vertices left for a slot block"
            )
        blocks.append(found)
        block_pool -= set(found)
    slot_blocks = tuple(blocks)
    slots = tuple(v for b in slot_blocks for v in b)
    buffer_map = tuple(sorted(buffer))
    core_map = core

    # stage 6: one absorber per template edge, pairwise disjoint
    used_set = set(buffer) | set(core) | set(slots)
    edge_absorbers: dict[tuple[int, int], tuple[int, ...]] = {}
    for l, rgt in template.edges():
        anchor = buffer_map[l] if l < template.flex_size else core_map[l - template.flex_size]
        core_e = tuple(sorted({anchor} | set(slot_blocks[rgt])))
        got = family_builder(core_e, config.t, 1, frozenset(used_set), True)
        if not got:
            raise StageFailure(
                "edge-absorbers",
                f"no absorber for template edge ({l},{rgt})",
                blocking=core_e,
            )
        edge_absorbers[(l, rgt)] = tuple(sorted(got[0]))
        used_set |= got[0]

    structure = AbsorbingStructure(
        n=n, pattern=p, config=config, seed=seed,
        buffer=buffer_map, core=core, slots=slots, slot_blocks=slot_blocks,
        template=template, buffer_map=buffer_map, core_map=core_map,
        edge_absorbers=edge_absorbers, copy_families=families,
        harvest_sizes={v: len(harvest[v]) for v in range(n)},
        size_report={},
    )
    total = len(structure.absorbing_set)
    ht = h * config.t
    structure.size_report = {
        "n": n,
        "m": m,
        "surplus": surplus,
        "buffer": len(buffer),
        "core": len(core),
        "slots": len(slots),
        "edge_absorber_vertices": sum(len(a) for a in edge_absorbers.values()),
        "template_edges": len(edge_absorbers),
        "total": total,
        "bound_total": 124 * ht * m,
        "bound_sample": 240 * ht * n * q,
        "bound_target": config.absorber_frac * n / 2,
        "bound_chain_holds": total < 124 * ht * m < 240 * ht * n * q
        and 240 * ht * n * q <= config.absorber_frac * n / 2,
        "within_absorber_frac": total <= config.absorber_frac * n,
        "uses_overrides": config.overrides,
    }
    return structure


def _copy_through_from_run(
    g: Graph,
    p: Pattern,
    v: int,
    absorber: frozenset[int],
    core_v: tuple[int, ...],
    used: set[int],
) -> frozenset[int] | None:
    """One copy through v extracted from an absorber run, mates disjoint
    from `used`.  Prefers copies entirely inside the absorber (those can
    never collide across runs); otherwise takes v's copy in a perfect tiling
    of the absorber plus core, which may spend core vertices."""
    from .embed import copy_sets_through

    for img, _emb in copy_sets_through(g, p, v, frozenset(absorber) | {v}):
        mates = frozenset(img) - {v}
        if not (mates & used):
            return mates
    sub, order = induced_subgraph(g, set(absorber) | set(core_v))
    res = find_factor_exact(sub, p)
    if not res.found:
        return None
    for emb in res.tiling.copies:
        lifted = [order[i] for i in emb]
        if v in lifted:
            mates = frozenset(lifted) - {v}
            if not (mates & used):
                return mates
            return None
    return None


def _families_in_buffer(g: Graph, p: Pattern, buffer: list[int]) -> dict[int, tuple]:
    """For every vertex v, all (h-1)-subsets of the buffer that form a
    pattern copy with v (sorted lexicographically)."""
    h = p.h
    out: dict[int, tuple[tuple[int, ...], ...]] = {}
    subsets = list(combinations(sorted(buffer), h - 1))
    for v in range(g.n):
        fams = []
        for sub in subsets:
            if v in sub:
                continue
            if embed_in_set(g, p, sub + (v,)) is not None:
                fams.append(sub)
        out[v] = tuple(fams)
    return out


# ---------------------------------------------------------------------------
# absorption


def absorb(g: Graph, structure: AbsorbingStructure, remainder: Iterable[int]) -> Tiling:
    """Perfect tiling of G[A + R] for a valid remainder R.

    Steps: cover each remainder vertex with a copy into the buffer; cover
    surplus buffer vertices with further copies until exactly m remain;
    match the m survivors plus the core side through the template; tile each
    matched edge's absorber together with its endpoint vertices, and every
    unmatched edge's absorber alone.  The result is verified before return.
    """
    from .verify import verify_tiling

    p = structure.pattern
    h = p.h
    aset = structure.absorbing_set
    rem = sorted(set(remainder))
    for v in rem:
        if not (0 <= v < g.n):
            raise ValueError(f"remainder vertex {v} out of range")
    if set(rem) & aset:
        raise ValueError("remainder intersects the absorbing set")
    if (len(aset) + len(rem)) % h != 0:
        raise ValueError(
            f"pattern size {h} must divide |A| + |R| = {len(aset) + len(rem)}"
        )
    if len(rem) > structure.config.remainder_frac * structure.n:
        raise ValueError(
            f"remainder size {len(rem)} exceeds the absorbable fraction "
            f"({structure.config.remainder_frac} of n={structure.n})"
        )
    if len(rem) * (h - 1) > structure.template.surplus:
        raise ValueError(
            f"remainder size {len(rem)} exceeds the buffer surplus capacity "
            f"({structure.template.surplus // (h - 1)})"
        )

    m = structure.template.m
    buffer = list(structure.buffer)
    families = structure.copy_families

    # remainder copies into the buffer, pairwise disjoint
    chosen = _choose_disjoint_members(rem, families, frozenset(buffer))
    if chosen is None:
        raise StageFailure("absorb-remainder", "no disjoint copy choice for the remainder")
    consumed: set[int] = set()
    for v in rem:
        consumed |= set(chosen[v])

    # surplus coverage: copies inside the buffer until exactly m vertices remain
    remaining = [v for v in buffer if v not in consumed]
    need_copies, leftover_check = divmod(len(remaining) - m, h)
    if leftover_check != 0:
        raise CertificateBugError("buffer arithmetic violated divisibility bookkeeping")
    cover = _cover_buffer(remaining, families, need_copies, m)
    if cover is None:
        raise StageFailure("absorb-surplus", "no disjoint cover of the buffer surplus")
    covered_by_cover: set[int] = set()
    for anchor, mates in cover:
        covered_by_cover |= {anchor} | set(mates)
    survivors = [v for v in remaining if v not in covered_by_cover]
    assert len(survivors) == m

    # template matching of survivors + core onto slots
    tpl = structure.template
    pos = {v: i for i, v in enumerate(structure.buffer_map)}
    flex_chosen = sorted(pos[v] for v in survivors)
    left_nodes = flex_chosen + list(range(tpl.flex_size, tpl.left_size))
    adj = [list(tpl.left_adj[l]) for l in left_nodes]
    size, pair_l, _pair_r = max_bipartite_matching(len(left_nodes), tpl.slot_count, adj)
    if size != tpl.slot_count:
        raise CertificateBugError(
            "verified template has no perfect matching for this survivor set"
        )
    matched = {(left_nodes[i], pair_l[i]) for i in range(len(left_nodes))}

    copies: list[tuple[int, ...]] = []

    def add_copy_on(vertices: Iterable[int]) -> None:
        emb = embed_in_set(g, p, vertices)
        if emb is None:
            raise CertificateBugError("stored copy family member is not a copy")
        copies.append(emb)

    for v in rem:
        add_copy_on(set(chosen[v]) | {v})
    for anchor, mates in cover:
        add_copy_on({anchor} | set(mates))

    for l, rgt in tpl.edges():
        a_e = structure.edge_absorbers[(l, rgt)]
        if (l, rgt) in matched:
            block = set(structure.slot_blocks[rgt]) | {structure.left_vertex(l)}
            target = set(a_e) | block
        else:
            target = set(a_e)
        sub, order = induced_subgraph(g, target)
        res = find_factor_exact(sub, p)
        if not res.found:
            raise CertificateBugError(
                f"absorber for template edge ({l},{rgt}) failed to tile"
            )
        for emb in res.tiling.copies:
            copies.append(tuple(order[i] for i in emb))

    tiling = Tiling(pattern=p, copies=tuple(copies))
    verify_tiling(g, tiling, require_cover=aset | set(rem))
    if len(tiling.covered) != len(aset) + len(rem):
        raise CertificateBugError("absorption covered vertices outside A + R")
    return tiling


def _choose_disjoint_members(
    order: list[int],
    families: dict[int, tuple[tuple[int, ...], ...]],
    allowed: frozenset[int],
) -> dict[int, tuple[int, ...]] | None:
    """Backtracking choice of pairwise-disjoint family members inside allowed."""
    chosen: dict[int, tuple[int, ...]] = {}
    used: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for member in families.get(v, ()):
            ms = set(member)
            if ms <= allowed and not (ms & used):
                chosen[v] = member
                used.update(ms)
                if rec(i + 1):
                    return True
                used.difference_update(ms)
                del chosen[v]
        return False

    return chosen if rec(0) else None


def _cover_buffer(
    remaining: list[int],
    families: dict[int, tuple[tuple[int, ...], ...]],
    need_copies: int,
    m: int,
) -> list[tuple[int, tuple[int, ...]]] | None:
    """Choose `need_copies` disjoint copies inside `remaining`, each one
    anchor vertex plus a family member, leaving exactly m vertices."""
    result: list[tuple[int, tuple[int, ...]]] = []

    def rec(avail: list[int], todo: int, spare: int) -> bool:
        if todo == 0:
            return True
        if not avail:
            return False
        v = avail[0]
        rest = avail[1:]
        live = frozenset(rest)
        for member in families.get(v, ()):
            ms = set(member)
            if ms <= live:
                result.append((v, member))
                if rec([u for u in rest if u not in ms], todo - 1, spare):
                    return True
                result.pop()
        if spare > 0:
            return rec(rest, todo, spare - 1)
        return False

    return result if rec(list(remaining), need_copies, m) else None
