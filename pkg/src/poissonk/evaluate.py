"""Numerical pmf values from the exact polynomials."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

import mpmath

from .engines import MethodKind, pmf_polynomial
from .errors import NonPositivePolyValue
from .exact_core import LambdaPolynomial, OrderKParams


@dataclass(frozen=True)
class PmfEntry:
    n: int | None
    probability: float
    log_probability: float


@dataclass(frozen=True)
class PmfTable:
    params: OrderKParams
    method: MethodKind
    entries: tuple[PmfEntry, ...]

    @property
    def n_max(self) -> int:
        return len(self.entries) - 1

    @property
    def cumulatives(self) -> list[float]:
        """Running sums of the probabilities, one per entry."""
        return list(accumulate(e.probability for e in self.entries))

    @property
    def cumulative(self) -> float:
        return math.fsum(e.probability for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "k": self.params.k,
            "lambda": self.params.lam,
            "method": self.method.value,
            "n_max": self.n_max,
            "cumulative": self.cumulative,
            "entries": [
                {
                    "n": e.n,
                    "probability": e.probability,
                    "log_probability": e.log_probability,
                    "cumulative": c,
                }
                for e, c in zip(self.entries, self.cumulatives)
            ],
        }


def _log_poly_value(poly: LambdaPolynomial, lam: float) -> float:
    # log-sum-exp over the terms; coefficients must all be positive
    logs = []
    log_lam = math.log(lam)
    for degree, coeff in poly.terms():
        if coeff <= 0:
            raise NonPositivePolyValue(
                "log-space evaluation needs positive coefficients, "
                f"got {coeff} at degree {degree}"
            )
        logs.append(math.log(coeff.numerator) - math.log(coeff.denominator) + degree * log_lam)
    top = max(logs)
    return top + math.log(math.fsum(math.exp(x - top) for x in logs))


def evaluate_pmf(poly: LambdaPolynomial, params: OrderKParams, n: int | None = None) -> PmfEntry:
    """Multiply ``poly(lam)`` by ``exp(-k*lam)``.

    The probability comes from Horner evaluation; the log probability is
    ``log(poly(lam)) - k*lam``.  When the direct product over- or underflows,
    both are taken from a log-sum-exp evaluation of the polynomial instead.
    """
    lam = float(params.lam)
    k = params.k
    value = poly.evaluate(lam)
    if math.isfinite(value) and value > 0:
        probability = value * math.exp(-k * lam)
        if probability > 0:
            return PmfEntry(n, min(probability, 1.0), min(math.log(value) - k * lam, 0.0))
    elif poly.is_zero() or not (_all_positive(poly) and (value == 0 or not math.isfinite(value))):
        raise NonPositivePolyValue(f"polynomial evaluates to {value!r} at lambda={lam}")
    log_probability = min(_log_poly_value(poly, lam) - k * lam, 0.0)
    return PmfEntry(n, math.exp(log_probability), log_probability)


def _all_positive(poly: LambdaPolynomial) -> bool:
    return all(c > 0 for _, c in poly.terms())


def evaluate_pmf_exact(poly: LambdaPolynomial, k: int, lam: Fraction | int | str, dps: int = 50):
    """High-precision ``exp(-k*lam) * poly(lam)`` with ``poly(lam)`` exact.

    Returns an :class:`mpmath.mpf` carrying ``dps`` decimal digits.
    """
    lam = Fraction(lam)
    exact = poly.evaluate_exact(lam)
    with mpmath.workdps(dps):
        prefactor = mpmath.exp(-k * mpmath.mpf(lam.numerator) / lam.denominator)
        return +(mpmath.mpf(exact.numerator) / exact.denominator * prefactor)


def pmf_table(params: OrderKParams, n_max: int, method: MethodKind | str = MethodKind.ALT) -> PmfTable:
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    method = MethodKind.parse(method) if isinstance(method, str) else method
    entries = tuple(
        evaluate_pmf(pmf_polynomial(method, params.k, n), params, n) for n in range(n_max + 1)
    )
    return PmfTable(params, method, entries)


def normalization_defect(
    params: OrderKParams, n_max: int, method: MethodKind | str = MethodKind.ALT
) -> float:
    """``1 - sum(p_0..p_n_max)``; tends to 0 since the pgf is 1 at x = 1."""
    return 1.0 - pmf_table(params, n_max, method).cumulative
