"""End-to-end factor finding: absorbing set, greedy cover, absorption.

A run checks the hypotheses for the chosen construction, builds an absorbing
structure, greedily tiles the rest of the graph, absorbs the leftover, and
verifies the merged factor.  Any stage failure is recorded in the report;
when the graph is small enough the exact oracle is used as a fallback so the
run still settles existence.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

from .absorbing import (
    AbsorberConfig,
    AbsorbingStructure,
    HypothesisWarning,
    StageFailure,
    TemplateBuildError,
    absorb,
    build_absorbing_set,
    make_family_builder,
)
from .factor import Tiling, find_factor_exact, greedy_max_tiling, leftover_of
from .graphs import Graph, Pattern
from .invariants import alpha_ell, min_degree, traversing_check
from .rng import derive_seed
from .verify import verify_tiling


@dataclass
class StageOutcome:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class PipelineReport:
    """Everything one run produced: hypothesis results, stage outcomes,
    the verified tiling (if any), and budgets consumed."""

    mode: str
    n: int
    h: int
    seed: int
    hypothesis_checked: bool = False
    hypothesis_held: bool = False
    hypothesis_detail: str = ""
    stages: list[StageOutcome] = field(default_factory=list)
    leftover: int | None = None
    factor_found: bool = False
    failure_stage: str | None = None
    fallback_used: bool = False
    exact_status: str | None = None
    nodes: int = 0
    millis: float | None = None
    tiling: Tiling | None = None
    structure: AbsorbingStructure | None = None

    def stage_ok(self, name: str) -> bool:
        return any(s.name == name and s.ok for s in self.stages)

    def to_obj(self, include_tiling: bool = True) -> dict:
        from .serialize import tiling_to_obj

        out = {
            "schema": "pipeline-report/v1",
            "mode": self.mode,
            "n": self.n,
            "h": self.h,
            "seed": self.seed,
            "hypothesis_checked": self.hypothesis_checked,
            "hypothesis_held": self.hypothesis_held,
            "hypothesis_detail": self.hypothesis_detail,
            "stages": [{"name": s.name, "ok": s.ok, "detail": s.detail}
                       for s in self.stages],
            "leftover": self.leftover,
            "factor_found": self.factor_found,
            "failure_stage": self.failure_stage,
            "fallback_used": self.fallback_used,
            "exact_status": self.exact_status,
            "nodes": self.nodes,
            "millis": self.millis,
        }
        if include_tiling and self.tiling is not None:
            out["tiling"] = tiling_to_obj(self.tiling)
        return out


def check_hypotheses(
    g: Graph,
    p: Pattern,
    mode: str,
    config: AbsorberConfig,
    ell: int = 2,
    seed: int = 0,
    trials: int = 100,
) -> tuple[bool, str]:
    """Hypothesis check for the chosen construction; returns (held, detail).

    Clique mode needs delta(G) >= ((r-ell)/(r-ell+1) + eps) n and alpha_ell
    at most eps' n; alpha_ell is exact up to n = 40 and a branch-and-bound
    lower bound beyond, and the detail string discloses which.  General mode
    needs delta(G) >= eps n and the traversing property at probe size
    ceil(eps' n), checked by sampling.
    """
    n = g.n
    eps = config.degree_frac
    eps2 = config.threshold_frac
    delta = min_degree(g)
    if mode == "clique":
        r = p.r
        frac = (r - ell) / (r - ell + 1)
        need = (frac + eps) * n
        deg_ok = delta >= need
        if n <= 40:
            res = alpha_ell(g, ell)
            kind = "exact"
        else:
            res = alpha_ell(g, ell, budget=20_000)
            kind = "branch-and-bound lower bound"
        alpha_ok = res.value <= eps2 * n
        held = deg_ok and alpha_ok
        detail = (
            f"delta={delta} (need {need:.1f}); alpha_{ell}={res.value} "
            f"[{kind}] (cap {eps2 * n:.1f})"
        )
        return held, detail
    if mode == "general":
        need = eps * n
        deg_ok = delta >= need
        s = max(1, math.ceil(eps2 * n))
        if p.h * s <= n:
            verdict = traversing_check(g, p, s, mode="sampled", trials=trials,
                                       seed=derive_seed(seed, "hyp"))
            trav_ok = verdict.holds
            tdetail = f"traversing at s={s} sampled({trials}): {'holds' if trav_ok else 'fails'}"
        else:
            trav_ok = False
            tdetail = f"probe size s={s} infeasible (h*s > n)"
        held = deg_ok and trav_ok
        return held, f"delta={delta} (need {need:.1f}); {tdetail}"
    raise ValueError(f"unknown mode: {mode}")


def find_factor_absorbing(
    g: Graph,
    p: Pattern,
    mode: str = "general",
    ell: int = 2,
    config: AbsorberConfig | None = None,
    seed: int = 0,
    fallback_cap: int = 30,
    budget: int = 2_000_000,
    family_kind: str | None = None,
) -> PipelineReport:
    """Run the absorbing pipeline; fall back to the exact oracle on failure
    when the graph is small enough.

    mode 'general' uses the neighbor-pool/traversing absorber construction;
    mode 'clique' (pattern must be a clique, with parameter ell) uses the
    random-partition construction.  The emitted factor, if any, always
    passes the independent verifier.
    """
    t0 = time.perf_counter()
    h = p.h
    report = PipelineReport(mode=mode, n=g.n, h=h, seed=seed)
    if config is None:
        config = AbsorberConfig.desk_scale(h=h)
    if g.n % h != 0:
        report.failure_stage = "divisibility"
        report.stages.append(StageOutcome("divisibility", False,
                                          f"{h} does not divide {g.n}"))
        report.millis = (time.perf_counter() - t0) * 1000
        return report
    report.stages.append(StageOutcome("divisibility", True))

    report.hypothesis_checked = True
    held, detail = check_hypotheses(g, p, mode, config, ell=ell, seed=seed)
    report.hypothesis_held = held
    report.hypothesis_detail = detail

    kind = family_kind if family_kind is not None else ("clique" if mode == "clique" else "general")
    builder = make_family_builder(kind, g, p, config, seed=derive_seed(seed, "families"),
                                  ell=ell if kind == "clique" else None)

    structure: AbsorbingStructure | None = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        try:
            structure = build_absorbing_set(
                g, p, config, seed=derive_seed(seed, "build"), family_builder=builder
            )
            report.stages.append(StageOutcome(
                "absorbing-set", True,
                f"|A|={len(structure.absorbing_set)} m={structure.template.m}"))
            report.structure = structure
        except (StageFailure, TemplateBuildError) as exc:
            stage = getattr(exc, "stage", "template")
            report.stages.append(StageOutcome("absorbing-set", False, f"{stage}: {exc}"))
            report.failure_stage = f"absorbing-set/{stage}"

    tiling: Tiling | None = None
    if structure is not None:
        aset = structure.absorbing_set
        cover = greedy_max_tiling(g, p, forbidden=aset, seed=derive_seed(seed, "cover"))
        left = leftover_of(g, cover, forbidden=aset)
        report.leftover = len(left)
        cap = min(
            math.floor(config.remainder_frac * g.n),
            structure.template.surplus // (h - 1),
        )
        if len(left) <= cap:
            report.stages.append(StageOutcome("cover", True, f"leftover={len(left)}"))
            try:
                absorbed = absorb(g, structure, left)
                tiling = cover.merged_with(absorbed)
                report.stages.append(StageOutcome("absorb", True))
            except (StageFailure, ValueError) as exc:
                report.stages.append(StageOutcome("absorb", False, str(exc)))
                report.failure_stage = "absorb"
        else:
            report.stages.append(StageOutcome(
                "cover", False, f"leftover={len(left)} exceeds absorbable cap {cap}"))
            report.failure_stage = "cover"

    if tiling is None and g.n <= fallback_cap:
        report.fallback_used = True
        res = find_factor_exact(g, p, budget=budget)
        report.exact_status = res.status
        report.nodes += res.nodes
        if res.found:
            tiling = res.tiling
            report.stages.append(StageOutcome("exact-fallback", True,
                                              f"nodes={res.nodes}"))
        else:
            report.stages.append(StageOutcome("exact-fallback", False, res.status))

    if tiling is not None:
        verify_tiling(g, tiling, require_factor=True)
        report.factor_found = True
        report.tiling = tiling
        report.failure_stage = None
    report.millis = (time.perf_counter() - t0) * 1000
    return report


def cover_check(
    g: Graph,
    p: Pattern,
    avoid: list[int],
    xi: float,
    seed: int = 0,
) -> tuple[list[int], Tiling, bool]:
    """Greedy tiling of G minus `avoid`, plus a local-improvement pass.

    Improvement: while some leftover vertex can trade places with a tile
    vertex (the tile's vertex set plus the leftover vertex contains a copy
    avoiding the swapped-out vertex) and the swap enables a new copy among
    the leftovers, apply it.  Returns (leftover, tiling, leftover <= xi*n).
    """
    from .embed import embed_in_set

    tiling = greedy_max_tiling(g, p, forbidden=avoid, seed=seed)
    copies = list(tiling.copies)
    left = set(leftover_of(g, Tiling(p, tuple(copies)), forbidden=avoid))

    improved = True
    while improved:
        improved = False
        for v in sorted(left):
            done = False
            for ci, emb in enumerate(copies):
                union = set(emb) | {v}
                for out in sorted(union - {v}):
                    cand = union - {out}
                    new_emb = embed_in_set(g, p, cand)
                    if new_emb is None:
                        continue
                    trial_left = (left - {v}) | {out}
                    from .embed import find_embedding

                    extra = find_embedding(g, p, allowed=frozenset(trial_left))
                    if extra is None:
                        continue
                    copies[ci] = new_emb
                    copies.append(extra)
                    left = trial_left - set(extra)
                    improved = True
                    done = True
                    break
                if done:
                    break
            if done:
                break
    final = Tiling(pattern=p, copies=tuple(copies))
    leftover = sorted(left)
    return leftover, final, len(leftover) <= xi * g.n
