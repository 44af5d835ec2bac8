"""Constructors for the pmf polynomial of the Poisson distribution of order k.

Every engine returns the exact polynomial multiplying ``exp(-k*lam)``:

* ``oracle`` sums over all solutions of ``n1 + 2*n2 + ... + k*nk = n``;
* ``km`` is the Kostadinova-Minkova combinatorial sum, blocks of length k+1;
* ``alt`` is the blocked sum whose blocks have length k and whose summation
  limits start at the lowest surviving power of lambda;
* ``k2`` is the closed form valid for k = 2 only.

``km`` and ``alt`` are written as generators of individual monomial
contributions, so the same loop drives both polynomial construction and the
term census.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import CensusMethodError, K2WithWrongK
from .exact_core import LambdaPolynomial, binomial, factorial


class MethodKind(str, enum.Enum):
    ORACLE = "oracle"
    KM = "km"
    ALT = "alt"
    K2 = "k2"

    @classmethod
    def parse(cls, text: str) -> "MethodKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown method {text!r} (choose from {choices})") from None

    def __str__(self) -> str:
        return self.value


class BlockIndex(NamedTuple):
    """``n = r*k + m`` with ``1 <= m <= k``."""

    r: int
    m: int


class Contribution(NamedTuple):
    """One generated monomial before merging.

    ``block`` is 0 for the leading sum and ``i`` for the i-th correction
    block; ``coefficient`` already carries the block's sign.
    """

    block: int
    degree: int
    coefficient: Fraction


def _check_args(k: int, n: int) -> None:
    if k < 1:
        raise ValueError(f"order k must be >= 1, got {k}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")


def block_index(k: int, n: int) -> BlockIndex:
    if n < 1:
        raise ValueError("block index is defined for n >= 1")
    r = (n - 1) // k
    return BlockIndex(r, n - r * k)


def km_block_index(k: int, n: int) -> tuple[int, int]:
    """``(l, m)`` with ``n = l*(k+1) + m`` and ``0 <= m <= k``."""
    ell = n // (k + 1)
    return ell, n - ell * (k + 1)


# ---------------------------------------------------------------------------
# oracle: partition sum
# ---------------------------------------------------------------------------


def enumerate_compositions(k: int, n: int) -> Iterator[tuple[int, ...]]:
    """Yield every ``(n1, ..., nk)`` with ``sum(i * ni) == n``.

    Iterates as an odometer over ``(nk, ..., n2)``, largest ``nk`` first, with
    ``n1`` fixed by the constraint.  Memory use is O(k).
    """
    _check_args(k, n)
    counts = [0] * (k + 1)  # counts[i] is the multiplicity of part i

    def refill(top: int, budget: int) -> int:
        for part in range(top, 1, -1):
            counts[part] = budget // part
            budget -= part * counts[part]
        return budget

    rest = refill(k, n)
    while True:
        counts[1] = rest
        yield tuple(counts[1:])
        part = 2
        while part <= k and counts[part] == 0:
            part += 1
        if part > k:
            return
        counts[part] -= 1
        # budget left for parts 1..part-1 once the larger parts are fixed
        budget = n - sum(i * counts[i] for i in range(part, k + 1))
        rest = refill(part - 1, budget)


def oracle_polynomial(k: int, n: int) -> LambdaPolynomial:
    acc: dict[int, Fraction] = {}
    for comp in enumerate_compositions(k, n):
        denom = 1
        for c in comp:
            denom *= factorial(c)
        degree = sum(comp)
        acc[degree] = acc.get(degree, 0) + Fraction(1, denom)
    return LambdaPolynomial(acc)


# ---------------------------------------------------------------------------
# combinatorial sums
# ---------------------------------------------------------------------------


def _leading_sum(n: int, start: int) -> Iterator[Contribution]:
    for j in range(start, n + 1):
        yield Contribution(0, j, Fraction(binomial(n - 1, j - 1), factorial(j)))


def _correction_block(i: int, top: int, j_lo: int, j_hi: int) -> Iterator[Contribution]:
    # -(-1)^(i-1) * lam^i/i! * sum_j C(top, j+i-1) lam^j/j!
    sign = -1 if i % 2 else 1
    for j in range(j_lo, j_hi + 1):
        coeff = Fraction(sign * binomial(top, j + i - 1), factorial(i) * factorial(j))
        yield Contribution(i, i + j, coeff)


def km_contributions(k: int, n: int) -> Iterator[Contribution]:
    _check_args(k, n)
    if n == 0:
        yield Contribution(0, 0, Fraction(1))
        return
    yield from _leading_sum(n, 1)
    if n <= k:
        return
    ell, _ = km_block_index(k, n)
    for i in range(1, ell + 1):
        rest = n - i * (k + 1)
        yield from _correction_block(i, rest + i - 1, 0, rest)


def alt_contributions(k: int, n: int) -> Iterator[Contribution]:
    _check_args(k, n)
    if n == 0:
        yield Contribution(0, 0, Fraction(1))
        return
    if n <= k:
        yield from _leading_sum(n, 1)
        return
    r = (n - 1) // k
    yield from _leading_sum(n, r + 1)
    for i in range(1, r + 1):
        # an empty range (lower limit above upper) contributes nothing
        yield from _correction_block(i, n - i * k - 1, r + 1 - i, n - i * k - 1)


def km_polynomial(k: int, n: int) -> LambdaPolynomial:
    return LambdaPolynomial.from_terms((c.degree, c.coefficient) for c in km_contributions(k, n))


def alt_polynomial(k: int, n: int) -> LambdaPolynomial:
    return LambdaPolynomial.from_terms((c.degree, c.coefficient) for c in alt_contributions(k, n))


@dataclass(frozen=True)
class SumBreakdown:
    """The pieces of a combinatorial sum before they are combined.

    ``leading`` is the first sum; ``blocks[i-1]`` is the unsigned i-th
    correction ``lam^i/i! * sum_j C(.,.) lam^j/j!``.  The pmf polynomial is
    ``leading - sum((-1)**(i-1) * blocks[i-1])``.
    """

    leading: LambdaPolynomial
    blocks: tuple[LambdaPolynomial, ...] = field(default_factory=tuple)

    @property
    def correction(self) -> LambdaPolynomial:
        total = LambdaPolynomial.zero()
        for i, block in enumerate(self.blocks, start=1):
            total = total + (block if i % 2 else -block)
        return total

    @property
    def total(self) -> LambdaPolynomial:
        return self.leading - self.correction


def _breakdown(contributions: Iterator[Contribution], n_blocks: int) -> SumBreakdown:
    grouped: list[list[tuple[int, Fraction]]] = [[] for _ in range(n_blocks + 1)]
    for c in contributions:
        coeff = c.coefficient
        if c.block:
            # undo the sign applied in _correction_block
            coeff = -coeff if c.block % 2 else coeff
        grouped[c.block].append((c.degree, coeff))
    polys = [LambdaPolynomial.from_terms(g) for g in grouped]
    return SumBreakdown(polys[0], tuple(polys[1:]))


def alt_breakdown(k: int, n: int) -> SumBreakdown:
    r = (n - 1) // k if n > k else 0
    return _breakdown(alt_contributions(k, n), r)


def km_breakdown(k: int, n: int) -> SumBreakdown:
    ell = km_block_index(k, n)[0] if n > k else 0
    return _breakdown(km_contributions(k, n), ell)


# ---------------------------------------------------------------------------
# k = 2 closed form and dispatch
# ---------------------------------------------------------------------------


def k2_polynomial(n: int) -> LambdaPolynomial:
    _check_args(2, n)
    return LambdaPolynomial(
        {n - j: Fraction(1, factorial(n - 2 * j) * factorial(j)) for j in range(n // 2 + 1)}
    )


def pmf_polynomial(method: MethodKind | str, k: int, n: int) -> LambdaPolynomial:
    method = MethodKind.parse(method) if isinstance(method, str) else method
    if method is MethodKind.ORACLE:
        return oracle_polynomial(k, n)
    if method is MethodKind.KM:
        return km_polynomial(k, n)
    if method is MethodKind.ALT:
        return alt_polynomial(k, n)
    if k != 2:
        raise K2WithWrongK(k)
    return k2_polynomial(n)


# ---------------------------------------------------------------------------
# term census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermCensus:
    method: MethodKind
    k: int
    n: int
    total_terms: int
    low_degree_terms: int
    surviving_terms: int

    @property
    def r(self) -> int:
        return (self.n - 1) // self.k

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "k": self.k,
            "n": self.n,
            "r": self.r,
            "total_terms": self.total_terms,
            "low_degree_terms": self.low_degree_terms,
            "surviving_terms": self.surviving_terms,
        }


_CONTRIBUTIONS = {MethodKind.KM: km_contributions, MethodKind.ALT: alt_contributions}


def term_census(method: MethodKind | str, k: int, n: int) -> TermCensus:
    """Count generated monomials of degree <= r and >= r+1, r = (n-1)//k.

    Every loop iteration counts, including those whose binomial factor is
    zero, since the term is still generated.
    """
    method = MethodKind.parse(method) if isinstance(method, str) else method
    if method not in _CONTRIBUTIONS:
        raise CensusMethodError(f"term census is defined for km and alt only, got {method.value}")
    if n < 1:
        raise ValueError(f"term census requires n >= 1, got {n}")
    r = (n - 1) // k
    low = high = 0
    for c in _CONTRIBUTIONS[method](k, n):
        if c.degree <= r:
            low += 1
        else:
            high += 1
    return TermCensus(method, k, n, low + high, low, high)


def term_count(method: MethodKind | str, k: int, n: int) -> int:
    """Number of terms an engine generates for ``p_n``."""
    method = MethodKind.parse(method) if isinstance(method, str) else method
    if method in _CONTRIBUTIONS:
        return sum(1 for _ in _CONTRIBUTIONS[method](k, n))
    if method is MethodKind.ORACLE:
        return sum(1 for _ in enumerate_compositions(k, n))
    if k != 2:
        raise K2WithWrongK(k)
    return n // 2 + 1
