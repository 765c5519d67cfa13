"""(p, q)-flexible graph connectivity: cut analysis and the two-phase (p, 3) solver."""

from .augment import (
    AugmentationResult,
    DualState,
    InfeasibleCover,
    Link,
    brute_force_cover,
    covers,
    dual_feasibility_audit,
    links_from_edges,
    make_links,
    primal_dual_cover,
    reverse_delete,
)
from .crossing import (
    CrossingReport,
    FamilySplit,
    FamilyVerdict,
    InternalInconsistency,
    LemmaReport,
    ResidualGraph,
    amenably_crosses,
    analyze_crossing,
    build_residual_graph,
    check_property_gamma,
    crosses,
    is_pliable,
    is_uncrossable,
    split_violated_family,
    verify_structural_lemmas,
)
from .flex import (
    CutFamily,
    FlexParams,
    FlexVerdict,
    NotFlexConnected,
    enumerate_violated_cuts,
    is_flex_connected_cutwise,
    is_flex_connected_definitional,
)
from .generate import GeneratorParams, gadget_g1, gadget_g2, gadget_g3, generate_instance, ring_of_cliques
from .graph import (
    CutRecord,
    Edge,
    FlexGraph,
    GraphFormatError,
    PreconditionError,
    Safety,
    between_edge_set,
    canonical,
    check_multiset_identities,
    cut_edge_set,
    edge_connectivity_at_least,
    format_graph,
    members,
    parse_graph,
)
from .pipeline import SolveReport, base_p2_solution, brute_force_p3_optimum, solve_p3_fgc
from .report import emit_report

__version__ = "0.1.0"
