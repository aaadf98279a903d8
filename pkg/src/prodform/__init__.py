"""Graph-structural product-form analysis of formal Markov chains."""
from __future__ import annotations

from .errors import (
    InvalidArgumentError,
    NotStronglyConnectedError,
    NumericError,
    ProdformError,
    ResourceLimitError,
)
from .factors import (
    CircuitStats,
    FactorExpr,
    Level,
    LEVEL_PS,
    LEVEL_PSPS,
    LEVEL_S,
    LEVEL_SPS,
    ProductExpr,
    RateAtom,
    Relation,
    SumExpr,
    atom_edges,
    chain_relations,
    circuit_stats,
    classify,
    compose_ps,
    evaluate,
    factor_from_json,
    factor_to_json,
    format_factor,
    make_relation,
    product_of,
    relation_to_json,
    sum_of,
)
from .graph_core import (
    DirectedGraph,
    NodeId,
    NodeSet,
    ancestors,
    ancestors_avoiding,
    ancestors_instrumented,
    connectivity_witness,
    descendants,
    is_strongly_connected,
    set_avoiding_subgraph,
    shortest_path,
)
from .higher_level import (
    CutHypergraph,
    HyperEdge,
    broad_cut_search,
    higher_level_cut_graph,
    hypergraph_to_json,
    narrow_second_level_cuts,
    sps_relation,
)
from .models import (
    Family,
    FixtureBundle,
    ModelSpec,
    expected_fixtures,
    generate,
)
from .numeric import (
    RateAssignment,
    StationaryMeasure,
    WitnessPair,
    cut_equation_check,
    enumerate_sourced_cuts,
    random_rates,
    rate_assignment,
    stationary,
    theorem3_witness,
    verify_relation,
)
from .product_form import (
    ChainKind,
    CliqueAnalysis,
    Cut,
    CutGraph,
    FormalChain,
    clique_check,
    clique_territory_cut,
    cut_graph,
    cut_source,
    is_jaf,
    mutually_avoiding_ancestors,
    s_factors,
    s_relation,
    sourced_cut,
)

__all__ = [name for name in dir() if not name.startswith("_")]
