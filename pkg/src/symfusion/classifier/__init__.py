"""Rank-3 and rank-4 enumeration, Adams-candidate search and obstruction pipelines."""
from .adams import (
    AdamsCandidate,
    CandidateProfile,
    SearchBudgetExceeded,
    adams_candidate_search,
    admissible_adams_orders,
    classify_candidate,
)
from .params import (
    AxiomFailure,
    IntegralityVerdict,
    Rank3Params,
    Rank4Params,
    build_rank3,
    build_rank4,
    enumerate_rank3,
    enumerate_rank4,
    rank3_family_certificate,
    rank3_integrality_filter,
)
from .pipeline import (
    ObstructionReport,
    cubic_field_solutions,
    catalogue,
    classify_rank3_pipeline,
    classify_rank4_pipeline,
    find_isomorphism,
    fpdim_field_obstruction,
    identify,
    rank3_summary,
    rank4_summary,
    survivor_classes,
    transported_verlinde_adams,
)

__all__ = [
    "AdamsCandidate",
    "AxiomFailure",
    "CandidateProfile",
    "IntegralityVerdict",
    "ObstructionReport",
    "Rank3Params",
    "Rank4Params",
    "SearchBudgetExceeded",
    "adams_candidate_search",
    "admissible_adams_orders",
    "build_rank3",
    "build_rank4",
    "cubic_field_solutions",
    "catalogue",
    "classify_candidate",
    "classify_rank3_pipeline",
    "classify_rank4_pipeline",
    "enumerate_rank3",
    "enumerate_rank4",
    "find_isomorphism",
    "fpdim_field_obstruction",
    "identify",
    "rank3_family_certificate",
    "rank3_integrality_filter",
    "rank3_summary",
    "rank4_summary",
    "survivor_classes",
    "transported_verlinde_adams",
]
