"""Exact rational arithmetic and polynomials in the rate parameter.

Coefficients are :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.  A :class:`LambdaPolynomial`
stores only its non-zero coefficients, keyed by degree.
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Tuple, Union

Rational = Fraction

RationalLike = Union[Fraction, int]

#: Degree reported for the zero polynomial.
ZERO_DEGREE = -math.inf


def format_rational(value: RationalLike) -> str:
    """Serialize as ``"num/den"`` in lowest terms, or ``"num"`` when integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# factorials and binomials
# ---------------------------------------------------------------------------

_factorials = [1]
_factorial_lock = threading.Lock()


def factorial(m: int) -> int:
    """Return ``m!`` from a per-process table that grows on demand."""
    if m < 0:
        raise ValueError(f"factorial of negative number {m}")
    table = _factorials
    if m < len(table):
        return table[m]
    with _factorial_lock:
        while len(table) <= m:
            table.append(table[-1] * len(table))
    return table[m]


@lru_cache(maxsize=None)
def binomial(n: int, j: int) -> int:
    """C(n, j), taken to be zero whenever ``j < 0`` or ``j > n``."""
    if n < 0:
        raise ValueError(f"binomial top index must be non-negative, got {n}")
    if j < 0 or j > n:
        return 0
    return factorial(n) // (factorial(j) * factorial(n - j))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class LambdaPolynomial:
    """Sparse polynomial in lambda with exact rational coefficients.

    Instances are immutable; arithmetic returns new polynomials with zero
    coefficients pruned.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, RationalLike] | None = None):
        clean = {}
        for degree, value in (coeffs or {}).items():
            if not isinstance(degree, int) or degree < 0:
                raise ValueError(f"degree must be a non-negative integer, got {degree!r}")
            value = Fraction(value)
            if value:
                clean[degree] = value
        self._coeffs = clean
        self._hash = None

    @classmethod
    def monomial(cls, degree: int, coefficient: RationalLike = 1) -> "LambdaPolynomial":
        return cls({degree: coefficient})

    @classmethod
    def constant(cls, value: RationalLike) -> "LambdaPolynomial":
        return cls({0: value})

    @classmethod
    def zero(cls) -> "LambdaPolynomial":
        return cls()

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[int, RationalLike]]) -> "LambdaPolynomial":
        """Sum an iterable of ``(degree, coefficient)`` contributions."""
        acc: dict[int, Fraction] = {}
        for degree, value in terms:
            acc[degree] = acc.get(degree, 0) + value
        return cls(acc)

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, degree: int) -> Fraction:
        return self._coeffs.get(degree, Fraction(0))

    def degrees(self) -> list[int]:
        return sorted(self._coeffs)

    def terms(self) -> list[Tuple[int, Fraction]]:
        """Non-zero ``(degree, coefficient)`` pairs, highest degree first."""
        return sorted(self._coeffs.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self):
        if not self._coeffs:
            return ZERO_DEGREE
        return max(self._coeffs)

    def min_degree(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no minimum degree")
        return min(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self.terms())

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LambdaPolynomial") -> "LambdaPolynomial":
        if not isinstance(other, LambdaPolynomial):
            return NotImplemented
        acc = dict(self._coeffs)
        for degree, value in other._coeffs.items():
            acc[degree] = acc.get(degree, 0) + value
        return LambdaPolynomial(acc)

    def __neg__(self) -> "LambdaPolynomial":
        return LambdaPolynomial({d: -c for d, c in self._coeffs.items()})

    def __sub__(self, other: "LambdaPolynomial") -> "LambdaPolynomial":
        if not isinstance(other, LambdaPolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: RationalLike) -> "LambdaPolynomial":
        return LambdaPolynomial({d: c * factor for d, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LambdaPolynomial):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                acc[d1 + d2] = acc.get(d1 + d2, 0) + c1 * c2
        return LambdaPolynomial(acc)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaPolynomial):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, lam: float) -> float:
        """Floating-point value at ``lam`` by Horner's rule over present degrees."""
        terms = self.terms()
        if not terms:
            return 0.0
        lam = float(lam)
        prev_degree, coefficient = terms[0]
        acc = float(coefficient)
        try:
            for degree, coefficient in terms[1:]:
                acc = acc * lam ** (prev_degree - degree) + float(coefficient)
                prev_degree = degree
            return acc * lam**prev_degree
        except OverflowError:
            return math.copysign(math.inf, acc)

    def evaluate_exact(self, lam: RationalLike) -> Fraction:
        lam = Fraction(lam)
        return sum((c * lam**d for d, c in self._coeffs.items()), Fraction(0))

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict[str, str]:
        return {str(d): format_rational(c) for d, c in self.terms()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Mapping[str, str]) -> "LambdaPolynomial":
        return cls({int(d): parse_rational(c) for d, c in data.items()})

    @classmethod
    def from_json(cls, text: str) -> "LambdaPolynomial":
        return cls.from_dict(json.loads(text))

    def to_text(self, ascii: bool = False) -> str:
        """Human-readable form such as ``λ^2/2 + λ``, highest degree first."""
        symbol = "L" if ascii else "λ"
        pieces = []
        for degree, coefficient in self.terms():
            num, den = abs(coefficient.numerator), coefficient.denominator
            if degree == 0:
                body = str(num)
            else:
                power = symbol if degree == 1 else f"{symbol}^{degree}"
                body = power if num == 1 else f"{num}{power}"
            if den != 1:
                body = f"{body}/{den}"
            sign = "-" if coefficient < 0 else "+"
            if not pieces:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces) if pieces else "0"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LambdaPolynomial({self.to_text()!r})"


@dataclass(frozen=True)
class OrderKParams:
    """Order ``k`` and rate ``lam`` of a Poisson distribution of order k."""

    k: int
    lam: float

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"order k must be an integer >= 1, got {self.k!r}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"rate lambda must be finite and > 0, got {self.lam!r}")
