"""Exact construction and certification of vector bundles with natural
cohomology on a product of two projective lines."""

from .bigraded import (
    Bidegree,
    BiPoly,
    LineBundleSum,
    Monomial,
    bipoly_from_text,
    monomial_basis,
    random_bipoly,
)
from .certify import (
    DEFAULT_WINDOW,
    Certificate,
    CohTable,
    coh_table,
    pushforward_split_type,
    t_sets,
    theorem_certify,
)
from .cohomology import CohBasis, InducedMap, coh_basis, coh_dim, induced_map
from .linalg import DEFAULT_PRIME, ExactMatrix, nullspace, rank, rank_modp
from .monads import (
    CertifyConfig,
    HilbertParams,
    Monad,
    SheafMap,
    SurjectivityCertificate,
    bundle_coh,
    certify_injective,
    certify_surjective,
    compose,
    composition_is_zero,
    euler_char,
    minimal_rank_multiplier,
    monad_coh_degrees,
    serre_dual,
    twist,
)
from .search import (
    ConditionReport,
    MonadShape,
    SearchConfig,
    build_L,
    build_L_system,
    check_conditions,
    monad_shape,
    monad_terms,
    random_balanced_f,
    search_kernel_bundle,
    search_monad,
)
from .serialize import (
    document_text,
    monad_to_document,
    parse_document_text,
    table_to_csv,
    table_to_json,
    table_to_text,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
