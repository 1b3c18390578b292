"""Exact and simulated monochromatic-edge statistics on hypergraph multiplexes."""

from monoplex.core import (
    Coloring,
    Edge,
    Multiplex,
    OrderingResult,
    ResourceBoundError,
    TruncationSplit,
    UniformHypergraph,
    ValidationError,
    WeightedUniformHypergraph,
    connected_components,
    count_monochromatic,
    count_monochromatic_split,
    count_monochromatic_vector,
    count_weighted,
    k_cross,
    k_exact,
    layer_difference,
    layer_intersection,
    layer_union,
    m_t,
    new_coloring,
    new_hypergraph,
    new_multiplex,
    new_weighted_hypergraph,
    order_connected_edges,
    order_connected_edges_bruteforce,
    ordering_is_admissible,
    ordering_profile,
    truncation_split,
)
from monoplex.families import (
    CopiesResult,
    CorrelatedErParams,
    PatternGraph,
    SimpleGraph,
    ap_count_closed_form,
    ap_hypergraph,
    appendix_star_hypergraph,
    appendix_three_multiplex,
    automorphism_count,
    clique_hypergraph,
    complete_graph,
    copies_hypergraph,
    cycle_graph,
    new_correlated_er_params,
    new_pattern_graph,
    new_simple_graph,
    path_graph,
    sample_correlated_er,
    sample_er_graph,
    vertex_copy_weighted_hypergraph,
)
from monoplex.laws import (
    DiscreteLaw,
    LawMoments,
    SharedComponentSpec,
    binom2_poisson_law,
    compound_weighted_law,
    law_from_pmf,
    law_moments,
    new_shared_component_spec,
    poisson_law,
    shared_component_law,
    tv_distance,
)
from monoplex.moments import (
    ConditionReport,
    CovarianceReport,
    MomentMatrixReport,
    MomentReport,
    WeightedMomentReport,
    condition_ratios,
    covariance_T,
    mean_T,
    mean_W,
    moment_matrix,
    variance_T,
    variance_W,
)
from monoplex.simulate import (
    EmpiricalLaw,
    SimulationConfig,
    exact_law,
    exact_law_weighted,
    new_simulation_config,
    sample_coloring,
    simulate_T,
    simulate_W,
    simulate_ap_T,
    simulate_correlated_er_T,
)

__version__ = "0.1.0"
