"""finsurg: exact correction terms of lens spaces and trefoil-exterior
fillings, and the complete candidate search for integral finite surgeries."""

__version__ = "0.1.0"

from .lens import (
    DTable,
    InvariantError,
    LensSpec,
    conjugate_index,
    d_lens,
    d_lens_table,
    d_trefoil_filling,
)
from .knots import (
    AlexanderPoly,
    NotLSpaceKnot,
    TSequence,
    alexander_from_t,
    cable_alexander,
    d_integral_surgery,
    d_rational_surgery,
    genus,
    t_from_alexander,
    torus_alexander,
    trefoil_t,
)
from .search import (
    AffineMap,
    Candidate,
    SlopeFamily,
    ThetaParams,
    a_windows,
    candidate_bs,
    completeness_bound,
    d_lens_closed_form,
    delta_sequence,
    enumerate_slopes,
    extract_t,
    progression_reject,
    search,
    theta_of,
)
from .catalog import (
    BergeRecord,
    Cable,
    CatalogEntry,
    HyperbolicRef,
    MatchResult,
    Torus,
    berge_discrepancies,
    berge_records,
    catalog_lookup,
    load_catalog,
    match_candidate,
    verify_tables,
)

__all__ = [
    "__version__",
    "AffineMap",
    "AlexanderPoly",
    "BergeRecord",
    "Cable",
    "Candidate",
    "CatalogEntry",
    "DTable",
    "HyperbolicRef",
    "InvariantError",
    "LensSpec",
    "MatchResult",
    "NotLSpaceKnot",
    "SlopeFamily",
    "TSequence",
    "ThetaParams",
    "Torus",
    "a_windows",
    "alexander_from_t",
    "berge_discrepancies",
    "berge_records",
    "cable_alexander",
    "candidate_bs",
    "catalog_lookup",
    "completeness_bound",
    "conjugate_index",
    "d_integral_surgery",
    "d_lens",
    "d_lens_closed_form",
    "d_lens_table",
    "d_rational_surgery",
    "d_trefoil_filling",
    "delta_sequence",
    "enumerate_slopes",
    "extract_t",
    "genus",
    "load_catalog",
    "match_candidate",
    "progression_reject",
    "search",
    "t_from_alexander",
    "theta_of",
    "torus_alexander",
    "trefoil_t",
    "verify_tables",
]
