"""Extremal triple systems: constructions, exact copy counting, and
desk-scale extremal searches with closed-form cross-checks."""

from .core import (
    CapacityError,
    CountOverflowError,
    Error,
    FormatError,
    InvalidEdgeError,
    PartitionLabeling,
    SearchBudgetError,
    TripleSystem,
    build,
    complete,
    dumps,
    is_isomorphic,
    loads,
    triple,
)
from .patterns import (
    Pattern,
    automorphism_count,
    b5,
    by_name,
    expanded_clique,
    f5,
    fano,
    k4minus,
    pasch,
)
from .counting import (
    CountReport,
    contains_copy,
    copies_exactly_one_marked,
    copies_through_edge,
    copies_through_vertex,
    count_copies,
    count_embeddings,
    count_report,
)
from .constructions import (
    ConstructionSpec,
    RealizedConstruction,
    add_anti_pasch,
    add_disjoint_edges,
    add_fixed_apex_pairs,
    add_linear_inside_part,
    add_partite_inside_part,
    add_zero_two_sharing,
    bipartite_max,
    f5_density_counterexample,
    parse_spec,
    r_partite_max,
    realize,
    tripartite_max,
    two_one_max,
    zero_two_capacity,
)
from .formulas import (
    CopyBound,
    LemmaParams,
    b3_size,
    c_asymptotic,
    c_fano,
    lemma1_check,
    lemma2_check,
    p3_size,
    q_fano,
    t3_size,
    t3r_size,
)
from .search import (
    AuditReport,
    SearchResult,
    audit_perturbed,
    audit_sharpness,
    c_exact,
    exact_turan,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "CapacityError",
    "ConstructionSpec",
    "CopyBound",
    "CountOverflowError",
    "CountReport",
    "Error",
    "FormatError",
    "InvalidEdgeError",
    "LemmaParams",
    "Pattern",
    "PartitionLabeling",
    "RealizedConstruction",
    "SearchBudgetError",
    "SearchResult",
    "TripleSystem",
    "add_anti_pasch",
    "add_disjoint_edges",
    "add_fixed_apex_pairs",
    "add_linear_inside_part",
    "add_partite_inside_part",
    "add_zero_two_sharing",
    "audit_perturbed",
    "audit_sharpness",
    "automorphism_count",
    "b3_size",
    "b5",
    "bipartite_max",
    "build",
    "by_name",
    "c_asymptotic",
    "c_exact",
    "c_fano",
    "complete",
    "contains_copy",
    "copies_exactly_one_marked",
    "copies_through_edge",
    "copies_through_vertex",
    "count_copies",
    "count_embeddings",
    "count_report",
    "dumps",
    "exact_turan",
    "expanded_clique",
    "f5",
    "f5_density_counterexample",
    "fano",
    "is_isomorphic",
    "k4minus",
    "lemma1_check",
    "lemma2_check",
    "loads",
    "p3_size",
    "parse_spec",
    "pasch",
    "q_fano",
    "r_partite_max",
    "realize",
    "t3_size",
    "t3r_size",
    "triple",
    "tripartite_max",
    "two_one_max",
    "zero_two_capacity",
]
