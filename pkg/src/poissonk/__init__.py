"""Exact pmf of the Poisson distribution of order k."""
from .engines import (
    BlockIndex,
    MethodKind,
    SumBreakdown,
    TermCensus,
    alt_breakdown,
    alt_polynomial,
    block_index,
    enumerate_compositions,
    k2_polynomial,
    km_breakdown,
    km_polynomial,
    oracle_polynomial,
    pmf_polynomial,
    term_census,
)
from .errors import CensusMethodError, K2WithWrongK, NonPositivePolyValue, PoissonKError
from .evaluate import PmfEntry, PmfTable, evaluate_pmf, evaluate_pmf_exact, normalization_defect, pmf_table
from .exact_core import LambdaPolynomial, OrderKParams, Rational, binomial, factorial

__version__ = "0.1.0"
