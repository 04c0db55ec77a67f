"""Exact integer polynomial arithmetic: heights, shifts, and the lead-lift substitution.

Polynomials are stored densely as integer coefficient tuples, constant term
first, with an explicit degree bound (trailing zeros are allowed and
meaningful: the stored length is always ``degree_bound + 1``).  All arithmetic
is arbitrary-precision and exact; nothing in this module touches floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class ZeroPolynomialError(ValueError):
    """Raised by operations that require a nonzero polynomial."""


class DegreeBoundError(ValueError):
    """Raised when a polynomial exceeds the degree bound of an operation."""


@dataclass(frozen=True)
class IntegerPolynomial:
    """Dense integer polynomial ``c0 + c1*x + ... + ck*x**k``.

    ``coeffs`` has length exactly ``degree_bound + 1``; the actual degree may
    be smaller (trailing zeros).  Instances are immutable and hashable.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) == 0:
            raise ValueError("coefficient tuple must be nonempty")
        if not all(isinstance(c, int) for c in self.coeffs):
            raise TypeError("coefficients must be ints")

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def degree(self) -> int:
        """Actual degree; -1 for the zero polynomial."""
        for j in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[j] != 0:
                return j
        return -1

    def __str__(self) -> str:
        return format_poly_text(self)


def poly(coeffs, degree_bound: int | None = None) -> IntegerPolynomial:
    """Build an IntegerPolynomial, padding with zeros up to ``degree_bound``."""
    cs = list(int(c) for c in coeffs)
    if degree_bound is not None:
        if degree_bound < len(cs) - 1:
            raise DegreeBoundError(
                f"{len(cs) - 1} coefficients exceed degree bound {degree_bound}"
            )
        cs.extend([0] * (degree_bound + 1 - len(cs)))
    return IntegerPolynomial(tuple(cs))


def coefficient(p: IntegerPolynomial, j: int) -> int:
    """Coefficient of x**j, reading 0 beyond the stored length."""
    if j < 0:
        raise ValueError("negative exponent")
    return p.coeffs[j] if j < len(p.coeffs) else 0


def height(p: IntegerPolynomial) -> int:
    """Largest absolute value of the coefficients (0 for the zero polynomial)."""
    return max(abs(c) for c in p.coeffs)


def content(p: IntegerPolynomial) -> int:
    """gcd of the coefficients' absolute values (0 for the zero polynomial)."""
    return math.gcd(*(abs(c) for c in p.coeffs)) if len(p.coeffs) > 1 else abs(p.coeffs[0])


def is_primitive(p: IntegerPolynomial) -> bool:
    return content(p) == 1


def eval_rational(p: IntegerPolynomial, q: Fraction | int) -> Fraction:
    """Exact value p(q) by Horner evaluation in rational arithmetic."""
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * q + c
    return acc


def eval_int(p: IntegerPolynomial, r: int) -> int:
    """Exact value p(r) at an integer point (pure integer Horner)."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * r + c
    return acc


def shift(p: IntegerPolynomial, r: int) -> IntegerPolynomial:
    """Return S with S(y) = p(y + r); same degree bound, exact integers.

    s_j = sum_{m >= j} c_m * binom(m, j) * r**(m-j).
    """
    k = p.degree_bound
    out = [0] * (k + 1)
    for j in range(k + 1):
        s = 0
        for m in range(j, k + 1):
            cm = p.coeffs[m]
            if cm:
                s += cm * math.comb(m, j) * r ** (m - j)
        out[j] = s
    return IntegerPolynomial(tuple(out))


def lead_lift_transform(
    p: IntegerPolynomial, m: int, r: int, k: int
) -> IntegerPolynomial:
    """The substitution Q(x) = (M*x)**k * p(1/(M*x) + r), cleared to Z[x].

    With S = shift(p, r) having coefficients s_0..s_k, the coefficient of
    x**(k-j) in Q is s_j * M**(k-j); in particular the top coefficient is
    M**k * p(r).  Requires p nonzero of degree <= k and M >= 1.
    """
    if p.is_zero:
        raise ZeroPolynomialError("cannot lift the zero polynomial")
    if p.degree() > k:
        raise DegreeBoundError(f"degree {p.degree()} exceeds k={k}")
    if m < 1:
        raise ValueError("M must be a positive integer")
    s = shift(p, r)
    out = [0] * (k + 1)
    for j in range(k + 1):
        sj = coefficient(s, j)
        if sj:
            out[k - j] = sj * m ** (k - j)
    return IntegerPolynomial(tuple(out))


def is_leading_dominant(p: IntegerPolynomial, k: int) -> bool:
    """True iff |c_k(p)| equals the height, with c_k read as 0 past the degree."""
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial has no dominance status")
    return abs(coefficient(p, k)) == height(p)


def parse_poly_text(text: str, degree_bound: int | None = None) -> IntegerPolynomial:
    """Parse the comma-separated coefficient format, constant term first."""
    parts = text.split(",")
    try:
        cs = [int(part.strip()) for part in parts]
    except ValueError as exc:
        raise ValueError(f"invalid polynomial text {text!r}: {exc}") from None
    return poly(cs, degree_bound)


def format_poly_text(p: IntegerPolynomial) -> str:
    return ",".join(str(c) for c in p.coeffs)
