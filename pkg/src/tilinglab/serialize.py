"""JSON serialization for every certificate the tools emit.

Each document carries a `schema` tag so the verifier can dispatch on kind:
tiling/v1, absorber/v1, absorbing-structure/v1, traversing-witness/v1.
Patterns serialize inline (clique order, or an explicit edge list).
"""

from __future__ import annotations

import json
from typing import Any

from .absorbing import AbsorberConfig, AbsorbingStructure, TemplateGraph
from .factor import Tiling
from .graphs import Graph, Pattern

SCHEMA_TILING = "tiling/v1"
SCHEMA_ABSORBER = "absorber/v1"
SCHEMA_STRUCTURE = "absorbing-structure/v1"
SCHEMA_WITNESS = "traversing-witness/v1"


def pattern_to_obj(p: Pattern) -> dict:
    if p.is_clique:
        return {"kind": "clique", "r": p.r}
    return {"kind": "general", "n": p.h, "edges": [list(e) for e in p.graph.edges()]}


def pattern_from_obj(obj: dict) -> Pattern:
    if obj["kind"] == "clique":
        return Pattern.clique(int(obj["r"]))
    g = Graph(int(obj["n"]), [tuple(e) for e in obj["edges"]])
    return Pattern(graph=g, kind="general")


def parse_pattern_spec(spec: str) -> Pattern:
    """Parse 'K<r>' into a clique pattern, or read an edge-list file path."""
    s = spec.strip()
    if s.upper().startswith("K") and s[1:].isdigit():
        return Pattern.clique(int(s[1:]))
    from .graphs import parse_graph

    with open(s, "r", encoding="ascii") as fh:
        return Pattern.from_graph(parse_graph(fh.read()))


def tiling_to_obj(t: Tiling) -> dict:
    return {
        "schema": SCHEMA_TILING,
        "pattern": pattern_to_obj(t.pattern),
        "copies": [list(c) for c in t.copies],
    }


def tiling_from_obj(obj: dict) -> Tiling:
    p = pattern_from_obj(obj["pattern"])
    return Tiling(pattern=p, copies=tuple(tuple(c) for c in obj["copies"]))


def absorber_to_obj(p: Pattern, core: list[int], absorber: list[int], t: int) -> dict:
    return {
        "schema": SCHEMA_ABSORBER,
        "pattern": pattern_to_obj(p),
        "t": t,
        "core": sorted(core),
        "absorber": sorted(absorber),
    }


def witness_to_obj(p: Pattern, s: int, parts: list[list[int]]) -> dict:
    return {
        "schema": SCHEMA_WITNESS,
        "pattern": pattern_to_obj(p),
        "s": s,
        "parts": [sorted(part) for part in parts],
    }


def config_to_obj(c: AbsorberConfig) -> dict:
    return {
        "h": c.h,
        "t": c.t,
        "absorber_frac": c.absorber_frac,
        "sample_prob": c.sample_prob,
        "surplus_ratio": c.surplus_ratio,
        "remainder_frac": c.remainder_frac,
        "degree_frac": c.degree_frac,
        "threshold_frac": c.threshold_frac,
        "overrides": c.overrides,
        "pool_size": c.pool_size,
        "part_degree_min": c.part_degree_min,
        "common_nbhd_min": c.common_nbhd_min,
        "m_cap": c.m_cap,
    }


def config_from_obj(obj: dict) -> AbsorberConfig:
    return AbsorberConfig(
        h=obj["h"], t=obj["t"], absorber_frac=obj["absorber_frac"],
        sample_prob=obj["sample_prob"], surplus_ratio=obj["surplus_ratio"],
        remainder_frac=obj["remainder_frac"], degree_frac=obj["degree_frac"],
        threshold_frac=obj["threshold_frac"], overrides=obj["overrides"],
        pool_size=obj.get("pool_size"), part_degree_min=obj.get("part_degree_min"),
        common_nbhd_min=obj.get("common_nbhd_min"), m_cap=obj.get("m_cap"),
    )


def template_to_obj(t: TemplateGraph) -> dict:
    return {
        "m": t.m,
        "surplus": t.surplus,
        "mode": t.mode,
        "left_adj": [list(row) for row in t.left_adj],
        "verification": t.verification,
    }


def template_from_obj(obj: dict) -> TemplateGraph:
    return TemplateGraph(
        m=obj["m"], surplus=obj["surplus"], mode=obj["mode"],
        left_adj=tuple(tuple(row) for row in obj["left_adj"]),
        verification=dict(obj["verification"]),
    )


def structure_to_obj(s: AbsorbingStructure) -> dict:
    return {
        "schema": SCHEMA_STRUCTURE,
        "n": s.n,
        "pattern": pattern_to_obj(s.pattern),
        "config": config_to_obj(s.config),
        "seed": s.seed,
        "buffer": list(s.buffer),
        "core": list(s.core),
        "slots": list(s.slots),
        "slot_blocks": [list(b) for b in s.slot_blocks],
        "template": template_to_obj(s.template),
        "buffer_map": list(s.buffer_map),
        "core_map": list(s.core_map),
        "edge_absorbers": [
            {"left": l, "right": r, "vertices": list(a)}
            for (l, r), a in sorted(s.edge_absorbers.items())
        ],
        "copy_families": {str(v): [list(mem) for mem in fams]
                          for v, fams in sorted(s.copy_families.items())},
        "harvest_sizes": {str(v): k for v, k in sorted(s.harvest_sizes.items())},
        "size_report": s.size_report,
    }


def structure_from_obj(obj: dict) -> AbsorbingStructure:
    return AbsorbingStructure(
        n=obj["n"],
        pattern=pattern_from_obj(obj["pattern"]),
        config=config_from_obj(obj["config"]),
        seed=obj["seed"],
        buffer=tuple(obj["buffer"]),
        core=tuple(obj["core"]),
        slots=tuple(obj["slots"]),
        slot_blocks=tuple(tuple(b) for b in obj["slot_blocks"]),
        template=template_from_obj(obj["template"]),
        buffer_map=tuple(obj["buffer_map"]),
        core_map=tuple(obj["core_map"]),
        edge_absorbers={
            (e["left"], e["right"]): tuple(e["vertices"])
            for e in obj["edge_absorbers"]
        },
        copy_families={int(v): tuple(tuple(mem) for mem in fams)
                       for v, fams in obj["copy_families"].items()},
        harvest_sizes={int(v): k for v, k in obj["harvest_sizes"].items()},
        size_report=dict(obj["size_report"]),
    )


def dump_json(obj: Any, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> Any:
    with open(path, "r", encoding="ascii") as fh:
        return json.load(fh)
