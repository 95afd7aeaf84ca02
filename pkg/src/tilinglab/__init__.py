"""tilinglab: a desk-scale laboratory for graph tilings and absorbers."""

from .absorbing import (
    AbsorberConfig,
    AbsorbingStructure,
    TemplateGraph,
    absorb,
    build_absorbing_set,
    build_template,
    is_st_absorber,
    make_family_builder,
)
from .factor import FactorResult, Tiling, find_factor_exact, greedy_max_tiling
from .graphs import Graph, Pattern, emit_graph, parse_graph
from .invariants import alpha_ell, min_degree, one_density, traversing_threshold
from .pipeline import PipelineReport, cover_check, find_factor_absorbing

__version__ = "0.1.0"

__all__ = [
    "AbsorberConfig",
    "AbsorbingStructure",
    "FactorResult",
    "Graph",
    "Pattern",
    "PipelineReport",
    "TemplateGraph",
    "Tiling",
    "absorb",
    "alpha_ell",
    "build_absorbing_set",
    "build_template",
    "cover_check",
    "emit_graph",
    "find_factor_absorbing",
    "find_factor_exact",
    "greedy_max_tiling",
    "is_st_absorber",
    "make_family_builder",
    "min_degree",
    "one_density",
    "parse_graph",
    "traversing_threshold",
]
