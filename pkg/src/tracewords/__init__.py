"""Exact genus expansions and Monte Carlo checks for traces of words in
Gaussian random matrices (complex and real Ginibre, GUE, GOE)."""

from .errors import (
    ConsistencyError,
    EmptyWordError,
    InvalidPairingError,
    MissingLetterError,
    NoPairingError,
    NotStarFreeError,
    ResourceLimitError,
    TooLargeError,
    TracewordsError,
    UnsupportedConfigurationError,
    WordSyntaxError,
)
from .expansion import (
    SphericalCounts,
    atom_free_expansion,
    bi_atomic_count,
    genus_expansion,
    nondegenerate_count,
    projective_plane_count,
    sphere_count,
    spherical_counts,
    spherical_rule_check,
)
from .laurent import LaurentPolynomial
from .limits import (
    CltParams,
    clt_params,
    fc_moment_of_word,
    fuss_catalan,
    joint_trace_covariance,
    linear_statistic_variance,
    mixed_moment_limit,
    word_mixed_moment_limit,
)
from .oracle import brute_force_wick_oracle
from .pairings import DecoratedPairing, EdgeId, SlotId, enumerate_pairings, partition_roots
from .topology import GluedSurface, SurfaceComponent, glue
from .words import (
    Ensemble,
    Letter,
    Word,
    coperiod,
    cyclic_canonical,
    is_balanced,
    is_star_free,
    is_star_stable,
    parse_word,
    render,
    star,
    trace_distinct,
)

__version__ = "0.1.0"
