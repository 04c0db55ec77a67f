"""Real-number specifications and rigorous rational enclosures.

A ``RealSpec`` describes the real number being approximated in one of several
exact or lazily refinable forms: a rational, a finite decimal literal, an
algebraic number given by a square-free polynomial and an isolating interval,
a continued fraction (optionally with a periodic tail), the named constants
``e`` and the factorial-exponent sum ``liouville(b) = sum_m b**(-m!)``, a
deterministic pseudo-random digit stream, or a fractional-linear image
``1/(M*(x - r))`` of another spec.

All enclosures are closed rational intervals guaranteed to contain the
represented value, with width at most ``2**-bits``; refinement is
deterministic, so every result is bit-identical across runs and platforms.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .polynomials import (
    IntegerPolynomial,
    ZeroPolynomialError,
    content,
    eval_rational,
    lead_lift_transform,
    poly,
)

DEFAULT_BUDGET_BITS = 1 << 14

# Safety valve for refinement loops that are mathematically guaranteed to
# terminate; hitting it indicates a bug, not a tight budget.
_HARD_REFINE_CAP = 1 << 24


class SpecParseError(ValueError):
    """Malformed number-spec text; message carries the failing position."""

    def __init__(self, text: str, position: int, message: str) -> None:
        super().__init__(f"bad number spec {text!r} at position {position}: {message}")
        self.position = position


class PoleError(ValueError):
    """The fractional-linear map was applied at its pole (value equals r)."""


class PrecisionBudgetError(RuntimeError):
    """A stream-backed decision could not be made within the precision budget."""


# ---------------------------------------------------------------------------
# Result and interval containers


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval [lo, hi] of width at most 2**-precision_bits."""

    lo: Fraction
    hi: Fraction
    precision_bits: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("enclosure endpoints out of order")
        if self.hi - self.lo > Fraction(1, 2**self.precision_bits):
            raise ValueError("enclosure wider than its stated precision")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class PositiveInterval:
    """0 < lo <= |value| <= hi, with a certified positive lower bound."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.lo <= self.hi:
            raise ValueError("positive interval requires 0 < lo <= hi")


@dataclass(frozen=True)
class ExactZero:
    """The value was proven to be exactly zero."""


@dataclass(frozen=True)
class Undecided:
    """Neither zero nor a positive bound could be certified within budget."""

    budget_exhausted: bool = True


AbsValueResult = Union[PositiveInterval, ExactZero, Undecided]


# ---------------------------------------------------------------------------
# Spec variants


@dataclass(frozen=True)
class Rational:
    value: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class DecimalLiteral:
    """An exact finite decimal literal (not an idealized infinite expansion)."""

    literal: str

    def __post_init__(self) -> None:
        if not re.fullmatch(r"[+-]?\d+(\.\d+)?", self.literal):
            raise ValueError(f"not a finite decimal literal: {self.literal!r}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.literal)


@dataclass(frozen=True)
class Algebraic:
    """Unique real root of a square-free integer polynomial in [lo, hi].

    Construction verifies that the polynomial is nonzero and square-free and
    changes sign strictly between the endpoints, so the interval isolates a
    simple root.
    """

    minpoly: IntegerPolynomial
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.minpoly.is_zero or self.minpoly.degree() < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        if not self.lo < self.hi:
            raise ValueError("isolating interval must have lo < hi")
        va = eval_rational(self.minpoly, self.lo)
        vb = eval_rational(self.minpoly, self.hi)
        if va == 0 or vb == 0 or (va > 0) == (vb > 0):
            raise ValueError("polynomial must change sign strictly on [lo, hi]")
        if not _is_squarefree(self.minpoly):
            raise ValueError("polynomial must be square-free")


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients a0; a1, a2, ...; optionally periodic from period_start.

    All quotients after the first must be >= 1.  With a periodic tail the
    value is a quadratic irrational; without one it is the exact rational
    value of the finite expansion.
    """

    terms: tuple[int, ...]
    period_start: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.terms) == 0:
            raise ValueError("continued fraction needs at least one term")
        if any(t < 1 for t in self.terms[1:]):
            raise ValueError("partial quotients after the first must be >= 1")
        if self.period_start is not None:
            if not 0 <= self.period_start < len(self.terms):
                raise ValueError("period start out of range")
            if any(t < 1 for t in self.terms[self.period_start :]):
                raise ValueError("periodic quotients must be >= 1")

    @property
    def is_finite(self) -> bool:
        return self.period_start is None

    def quotient(self, i: int) -> int:
        if i < len(self.terms):
            return self.terms[i]
        assert self.period_start is not None
        period = self.terms[self.period_start :]
        return period[(i - len(self.terms)) % len(period)]


@dataclass(frozen=True)
class NamedConstant:
    """'e' or 'liouville' (sum of base**-m! over m >= 1, base >= 2)."""

    name: str
    base: int = 10

    def __post_init__(self) -> None:
        if self.name not in ("e", "liouville"):
            raise ValueError(f"unknown named constant {self.name!r}")
        if self.name == "liouville" and self.base < 2:
            raise ValueError("liouville base must be >= 2")


@dataclass(frozen=True)
class RandomDigits:
    """0.d1 d2 d3 ... with digits from a fixed SplitMix64 stream (see _digits)."""

    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class MobiusImage:
    """The value 1/(M*(inner - r)); enclosures proceed by interval arithmetic."""

    inner: "RealSpec"
    m: int
    r: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("M must be a positive integer")


RealSpec = Union[
    Rational,
    DecimalLiteral,
    Algebraic,
    ContinuedFraction,
    NamedConstant,
    RandomDigits,
    MobiusImage,
]


# ---------------------------------------------------------------------------
# SplitMix64 digit stream

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    """One step of the SplitMix64 generator (public-domain constants).

    state' = state + 0x9E3779B97F4A7C15 (mod 2**64); the output is the
    finalizer z ^= z>>30, z *= 0xBF58476D1CE4E5B9, z ^= z>>27,
    z *= 0x94D049BB133111EB, z ^= z>>31 applied to state'.
    """
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return z, state


_digit_cache: dict[int, list[int]] = {}


def _digits(seed: int, n: int) -> list[int]:
    """First n base-10 digits of the stream: digit_i = splitmix64_i(seed) % 10."""
    digits = _digit_cache.setdefault(seed, [])
    state = seed
    if digits:
        # Re-derive the generator state by replaying the count consumed so far.
        for _ in range(len(digits)):
            _, state = _splitmix64(state)
    while len(digits) < n:
        z, state = _splitmix64(state)
        digits.append(z % 10)
    return digits[:n]


# ---------------------------------------------------------------------------
# Interval helpers (exact rational endpoints)

_Iv = tuple[Fraction, Fraction]


def _iv_add(a: _Iv, b: _Iv) -> _Iv:
    return (a[0] + b[0], a[1] + b[1])


def _iv_mul(a: _Iv, b: _Iv) -> _Iv:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def _iv_scale(a: _Iv, c: int) -> _Iv:
    return (a[0] * c, a[1] * c) if c >= 0 else (a[1] * c, a[0] * c)


def _iv_abs(a: _Iv) -> _Iv:
    lo, hi = a
    if lo >= 0:
        return (lo, hi)
    if hi <= 0:
        return (-hi, -lo)
    return (Fraction(0), max(-lo, hi))


def interval_eval(p: IntegerPolynomial, x: _Iv) -> _Iv:
    """Interval Horner evaluation of p over x, exact rational endpoints."""
    acc: _Iv = (Fraction(0), Fraction(0))
    for c in reversed(p.coeffs):
        acc = _iv_mul(acc, x)
        acc = (acc[0] + c, acc[1] + c)
    return acc


# ---------------------------------------------------------------------------
# Exact values and structural queries


def spec_exact_value(spec: RealSpec) -> Optional[Fraction]:
    """The exact rational value for point-like variants, else None."""
    if isinstance(spec, Rational):
        return spec.value
    if isinstance(spec, DecimalLiteral):
        return spec.value
    if isinstance(spec, ContinuedFraction) and spec.is_finite:
        value = Fraction(spec.terms[-1])
        for a in reversed(spec.terms[:-1]):
            value = a + 1 / value
        return value
    return None


def _base_variant(spec: RealSpec) -> RealSpec:
    while isinstance(spec, MobiusImage):
        spec = spec.inner
    return spec


def is_stream_rooted(spec: RealSpec) -> bool:
    """True when zero-exclusion may be undecidable (digit-stream base)."""
    return isinstance(_base_variant(spec), RandomDigits)


def provably_equals_int(spec: RealSpec, r: int) -> bool:
    """True iff the represented value is proven to equal the integer r."""
    v = spec_exact_value(spec)
    if v is not None:
        return v == r
    if isinstance(spec, Algebraic):
        return eval_rational(spec.minpoly, r) == 0 and spec.lo <= r <= spec.hi
    # Periodic continued fractions and the named constants are irrational;
    # digit streams and their images are never *provably* equal to an integer.
    return False


# ---------------------------------------------------------------------------
# Square-free test and rational polynomial gcd (internal)


def _frac_coeffs(p: IntegerPolynomial) -> list[Fraction]:
    d = p.degree()
    return [Fraction(c) for c in p.coeffs[: d + 1]]


def _frac_deg(a: list[Fraction]) -> int:
    for i in range(len(a) - 1, -1, -1):
        if a[i] != 0:
            return i
    return -1


def _frac_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db = _frac_deg(b)
    da = _frac_deg(a)
    while da >= db >= 0:
        f = a[da] / b[db]
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a[da] = Fraction(0)
        da = _frac_deg(a)
    return a[: max(da + 1, 1)]


def poly_gcd(p: IntegerPolynomial, q: IntegerPolynomial) -> IntegerPolynomial:
    """Primitive integer gcd of p and q over Q (leading coefficient > 0)."""
    a, b = _frac_coeffs(p), _frac_coeffs(q)
    while _frac_deg(b) >= 0:
        a, b = b, _frac_mod(a, b)
    if _frac_deg(a) < 0:
        return poly([0])
    denom = math.lcm(*(f.denominator for f in a))
    ints = [int(f * denom) for f in a]
    g = math.gcd(*(abs(c) for c in ints)) or 1
    ints = [c // g for c in ints]
    if ints[_frac_deg([Fraction(c) for c in ints])] < 0:
        ints = [-c for c in ints]
    return poly(ints)


def _derivative(p: IntegerPolynomial) -> IntegerPolynomial:
    if p.degree() < 1:
        return poly([0])
    return poly([j * p.coeffs[j] for j in range(1, p.degree() + 1)])


def _is_squarefree(p: IntegerPolynomial) -> bool:
    return poly_gcd(p, _derivative(p)).degree() < 1


def primitive_normalized(p: IntegerPolynomial) -> IntegerPolynomial:
    """Divide out the content and make the leading coefficient positive."""
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial has no primitive part")
    c = content(p)
    cs = [x // c for x in p.coeffs[: p.degree() + 1]]
    if cs[-1] < 0:
        cs = [-x for x in cs]
    return poly(cs)


# ---------------------------------------------------------------------------
# Enclosures


def _bisect_algebraic(spec: Algebraic, target_width: Fraction) -> _Iv:
    """Shrink the isolating interval by bisection until width <= target.

    If a midpoint is an exact root the interval collapses to that point.
    """
    a, b = spec.lo, spec.hi
    va = eval_rational(spec.minpoly, a)
    while b - a > target_width:
        mid = (a + b) / 2
        vm = eval_rational(spec.minpoly, mid)
        if vm == 0:
            return (mid, mid)
        if (vm > 0) == (va > 0):
            a, va = mid, vm
        else:
            b = mid
    return (a, b)


def _enclose_cf(spec: ContinuedFraction, target_width: Fraction) -> _Iv:
    """Bracket an infinite continued fraction between consecutive convergents."""
    h_prev, h = 1, spec.quotient(0)
    k_prev, k = 0, 1
    i = 1
    while True:
        a = spec.quotient(i)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if i >= 2 and Fraction(1, k * k_prev) <= target_width:
            c1 = Fraction(h_prev, k_prev)
            c2 = Fraction(h, k)
            return (min(c1, c2), max(c1, c2))
        i += 1


def _enclose_e(target_width: Fraction) -> _Iv:
    n = 2
    fact = 2  # (n)!
    s = Fraction(5, 2)  # 1 + 1 + 1/2
    while True:
        tail = Fraction(2, fact * (n + 1))
        if tail <= target_width:
            return (s, s + tail)
        n += 1
        fact *= n
        s += Fraction(1, fact)


def _enclose_liouville(base: int, target_width: Fraction) -> _Iv:
    n = 1
    fact = 1
    s = Fraction(1, base)
    while True:
        next_fact = fact * (n + 1)
        tail = Fraction(2, base**next_fact)
        if tail <= target_width:
            return (s, s + tail)
        n += 1
        fact = next_fact
        s += Fraction(1, base**fact)


def _enclose_digits(spec: RandomDigits, bits: int) -> _Iv:
    n = bits // 3 + 2  # 10**-n <= 2**-bits
    ds = _digits(spec.seed, n)
    num = 0
    for d in ds:
        num = num * 10 + d
    lo = Fraction(num, 10**n)
    return (lo, lo + Fraction(1, 10**n))


def _enclose_mobius(spec: MobiusImage, target_width: Fraction) -> _Iv:
    inner_bits = 64
    while inner_bits <= _HARD_REFINE_CAP:
        e = enclose(spec.inner, inner_bits)
        if e.hi < spec.r or e.lo > spec.r:
            img_lo = Fraction(1) / (spec.m * (e.hi - spec.r))
            img_hi = Fraction(1) / (spec.m * (e.lo - spec.r))
            if img_hi - img_lo <= target_width:
                return (img_lo, img_hi)
        inner_bits *= 2
    raise RuntimeError("mobius enclosure failed to refine (pole not excluded?)")


@functools.lru_cache(maxsize=4096)
def enclose(spec: RealSpec, bits: int) -> Enclosure:
    """An interval of width <= 2**-bits rigorously containing the value.

    Deterministic for a given (spec, bits); refinements at higher bits are
    nested inside coarser ones by construction.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    target = Fraction(1, 2**bits)
    v = spec_exact_value(spec)
    if v is not None:
        return Enclosure(v, v, bits)
    if isinstance(spec, Algebraic):
        lo, hi = _bisect_algebraic(spec, target)
    elif isinstance(spec, ContinuedFraction):
        lo, hi = _enclose_cf(spec, target)
    elif isinstance(spec, NamedConstant):
        if spec.name == "e":
            lo, hi = _enclose_e(target)
        else:
            lo, hi = _enclose_liouville(spec.base, target)
    elif isinstance(spec, RandomDigits):
        lo, hi = _enclose_digits(spec, bits)
    elif isinstance(spec, MobiusImage):
        lo, hi = _enclose_mobius(spec, target)
    else:  # pragma: no cover - exhaustive union
        raise TypeError(f"unknown spec variant {type(spec).__name__}")
    return Enclosure(lo, hi, bits)


def power_enclosures(spec: RealSpec, n: int, bits: int) -> list[Enclosure]:
    """Enclosures of x**1 .. x**n, each of width <= 2**-bits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    target = Fraction(1, 2**bits)
    v = spec_exact_value(spec)
    if v is not None:
        return [Enclosure(v**m, v**m, bits) for m in range(1, n + 1)]
    work = max(64, bits + 2)
    while True:
        base = enclose(spec, work)
        ivs: list[_Iv] = [(base.lo, base.hi)]
        for _ in range(n - 1):
            ivs.append(_iv_mul(ivs[-1], ivs[0]))
        if all(hi - lo <= target for lo, hi in ivs):
            return [Enclosure(lo, hi, bits) for lo, hi in ivs]
        work *= 2
        if work > _HARD_REFINE_CAP:  # pragma: no cover - defensive
            raise RuntimeError("power enclosure failed to refine")


# ---------------------------------------------------------------------------
# |P(x)| evaluation


def _normalize_for_algebra(spec: RealSpec) -> RealSpec:
    """Replace periodic continued fractions by their quadratic algebraic form."""
    if isinstance(spec, ContinuedFraction) and not spec.is_finite:
        return cf_to_algebraic(spec)
    return spec


def eval_abs_enclosure(
    p: IntegerPolynomial,
    spec: RealSpec,
    rel_bits: int,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> AbsValueResult:
    """Certified |p(x)|: a tight positive interval, an exact zero, or Undecided.

    The positive interval satisfies hi/lo <= 1 + 2**-rel_bits.  Zeros are
    proven algebraically (exact evaluation for rational-valued specs; a
    gcd-with-minimal-polynomial root test for algebraic ones).  Only digit
    stream variants can come back Undecided, after the precision budget is
    spent.
    """
    if p.is_zero:
        raise ZeroPolynomialError("|P(x)| undefined for the zero polynomial")
    spec = _normalize_for_algebra(spec)
    v = spec_exact_value(spec)
    if v is not None:
        val = eval_rational(p, v)
        if val == 0:
            return ExactZero()
        return PositiveInterval(abs(val), abs(val))
    if isinstance(spec, Algebraic):
        g = poly_gcd(p, spec.minpoly)
        if g.degree() >= 1:
            ga = eval_rational(g, spec.lo)
            gb = eval_rational(g, spec.hi)
            assert ga != 0 and gb != 0, "isolating endpoints cannot be roots"
            if (ga > 0) != (gb > 0):
                return ExactZero()
    stream = is_stream_rooted(spec)
    rel = Fraction(1, 2**rel_bits)
    work = 64
    while True:
        e = enclose(spec, work)
        lo, hi = _iv_abs(interval_eval(p, (e.lo, e.hi)))
        if lo > 0 and hi <= lo * (1 + rel):
            return PositiveInterval(lo, hi)
        work *= 2
        if stream and work > budget_bits:
            return Undecided(budget_exhausted=True)
        if work > _HARD_REFINE_CAP:  # pragma: no cover - defensive
            raise RuntimeError("refinement exceeded the hard cap; nonzero value expected")


# ---------------------------------------------------------------------------
# Fractional-linear images


def _cf_head_convergents(terms: tuple[int, ...]) -> tuple[int, int, int, int]:
    """(h_{j-1}, h_{j-2}, k_{j-1}, k_{j-2}) for the finite prefix ``terms``."""
    h_prev, h = 0, 1  # h_{-2}, h_{-1}
    k_prev, k = 1, 0
    for a in terms:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return h, h_prev, k, k_prev


def cf_to_algebraic(spec: ContinuedFraction) -> Algebraic:
    """Quadratic minimal polynomial plus isolating interval of a periodic CF."""
    if spec.is_finite:
        raise ValueError("finite continued fractions are exact rationals")
    assert spec.period_start is not None
    head = spec.terms[: spec.period_start]
    period = spec.terms[spec.period_start :]
    # Purely periodic tail T = [b0; b1, ..., b_{L-1}, T]:
    ph, ph2, pk, pk2 = _cf_head_convergents(period)
    alpha, beta, gamma = pk, pk2 - ph, -ph2
    # x = (A*T + B)/(C*T + D) from the head block; substitute the inverse map.
    a_, b_, c_, d_ = _cf_head_convergents(head)
    c2 = alpha * d_ * d_ - beta * c_ * d_ + gamma * c_ * c_
    c1 = -2 * alpha * b_ * d_ + beta * (a_ * d_ + b_ * c_) - 2 * gamma * a_ * c_
    c0 = alpha * b_ * b_ - beta * a_ * b_ + gamma * a_ * a_
    quad = primitive_normalized(poly([c0, c1, c2]))
    if quad.degree() != 2:  # pragma: no cover - a periodic CF is quadratic
        raise RuntimeError("periodic continued fraction did not yield a quadratic")
    # Bracket the value between consecutive convergents until the interval
    # isolates exactly one root (for a quadratic: a strict sign change).
    bits = 8
    while True:
        lo, hi = _enclose_cf(spec, Fraction(1, 2**bits))
        va = eval_rational(quad, lo)
        vb = eval_rational(quad, hi)
        if va != 0 and vb != 0 and (va > 0) != (vb > 0):
            return Algebraic(quad, lo, hi)
        bits *= 2
        if bits > _HARD_REFINE_CAP:  # pragma: no cover - defensive
            raise RuntimeError("failed to isolate the quadratic's root")


def _mobius_of_rational(v: Fraction, m: int, r: int) -> Rational:
    if v == r:
        raise PoleError(f"value equals the node r={r}; the map is undefined")
    return Rational(Fraction(1) / (m * (v - r)))


def apply_mobius(
    spec: RealSpec, m: int, r: int, budget_bits: int = DEFAULT_BUDGET_BITS
) -> RealSpec:
    """The spec for 1/(M*(x - r)).

    Exact variants map exactly (rationals to rationals, algebraics to
    algebraics via the cleared inverse substitution, periodic continued
    fractions through their quadratic form).  Named constants and digit
    streams wrap into a composed variant evaluated by interval arithmetic.
    Raises PoleError when x = r is proven, PrecisionBudgetError when a digit
    stream cannot be separated from r within budget.
    """
    if m < 1:
        raise ValueError("M must be a positive integer")
    v = spec_exact_value(spec)
    if v is not None:
        return _mobius_of_rational(v, m, r)
    spec = _normalize_for_algebra(spec)
    if isinstance(spec, Algebraic):
        if provably_equals_int(spec, r):
            raise PoleError(f"the algebraic value equals the node r={r}")
        d = spec.minpoly.degree()
        trimmed = poly(spec.minpoly.coeffs[: d + 1])
        image_poly = primitive_normalized(lead_lift_transform(trimmed, m, r, d))
        # Shrink until the interval is strictly on one side of the pole.
        bits = 8
        while True:
            lo, hi = _bisect_algebraic(spec, Fraction(1, 2**bits))
            if lo == hi:  # the root turned out to be rational
                return _mobius_of_rational(lo, m, r)
            if hi < r or lo > r:
                break
            bits *= 2
        img_lo = Fraction(1) / (m * (hi - r))
        img_hi = Fraction(1) / (m * (lo - r))
        return Algebraic(image_poly, img_lo, img_hi)
    if isinstance(spec, NamedConstant):
        # e and the factorial sums are irrational, never equal to an integer.
        return MobiusImage(spec, m, r)
    # Digit streams and nested images: exclude the pole within budget.
    work = 64
    while work <= budget_bits:
        e = enclose(spec, work)
        if e.hi < r or e.lo > r:
            return MobiusImage(spec, m, r)
        work *= 2
    raise PrecisionBudgetError(
        f"cannot exclude equality with r={r} within {budget_bits} bits"
    )


# ---------------------------------------------------------------------------
# The number-spec mini-language


_RAT_RE = re.compile(r"(-?\d+)/(\d+)\Z")
_INT_RE = re.compile(r"-?\d+\Z")
_DEC_RE = re.compile(r"[+-]?\d+(\.\d+)?\Z")


def _parse_rational_token(text: str, token: str, offset: int) -> Fraction:
    token = token.strip()
    if _RAT_RE.fullmatch(token):
        num, den = token.split("/")
        if int(den) == 0:
            raise SpecParseError(text, offset, "zero denominator")
        return Fraction(int(num), int(den))
    if _DEC_RE.fullmatch(token):
        return Fraction(token)
    raise SpecParseError(text, offset, f"expected a rational, got {token!r}")


def parse_realspec(text: str) -> RealSpec:
    """Parse the strict mini-language:

    rat:<p>/<q> - dec:<literal> - alg:<c0,c1,...,cd>:<lo>,<hi> -
    cf:<a0>[;<a1>,<a2>,...][;per=<j>] - const:e - liouville:<base> -
    rand:<seed> - mobius:<M>:<r>:<inner>
    """
    head, sep, rest = text.partition(":")
    if not sep:
        raise SpecParseError(text, 0, "missing ':' after the variant tag")
    body_at = len(head) + 1
    try:
        if head == "rat":
            m_ = _RAT_RE.fullmatch(rest)
            if not m_:
                raise SpecParseError(text, body_at, "expected <p>/<q>")
            if int(m_.group(2)) == 0:
                raise SpecParseError(text, body_at, "zero denominator")
            return Rational(Fraction(int(m_.group(1)), int(m_.group(2))))
        if head == "dec":
            if not _DEC_RE.fullmatch(rest):
                raise SpecParseError(text, body_at, "expected a finite decimal literal")
            return DecimalLiteral(rest)
        if head == "alg":
            coeff_part, sep2, iv_part = rest.partition(":")
            if not sep2:
                raise SpecParseError(text, body_at, "expected <coeffs>:<lo>,<hi>")
            try:
                coeffs = [int(tok) for tok in coeff_part.split(",")]
            except ValueError:
                raise SpecParseError(text, body_at, "coefficients must be integers")
            iv_at = body_at + len(coeff_part) + 1
            lo_tok, sep3, hi_tok = iv_part.partition(",")
            if not sep3:
                raise SpecParseError(text, iv_at, "expected <lo>,<hi>")
            lo = _parse_rational_token(text, lo_tok, iv_at)
            hi = _parse_rational_token(text, hi_tok, iv_at + len(lo_tok) + 1)
            return Algebraic(poly(coeffs), lo, hi)
        if head == "cf":
            parts = rest.split(";")
            period_start = None
            if parts and parts[-1].startswith("per="):
                per_at = len(text) - len(parts[-1])
                try:
                    period_start = int(parts[-1][4:])
                except ValueError:
                    raise SpecParseError(text, per_at, "per= needs an integer index")
                parts = parts[:-1]
            if not parts or not parts[0]:
                raise SpecParseError(text, body_at, "expected <a0>")
            if not _INT_RE.fullmatch(parts[0].strip()):
                raise SpecParseError(text, body_at, "a0 must be an integer")
            terms = [int(parts[0])]
            if len(parts) > 2:
                raise SpecParseError(text, body_at, "too many ';' sections")
            if len(parts) == 2 and parts[1]:
                tail_at = body_at + len(parts[0]) + 1
                for tok in parts[1].split(","):
                    if not _INT_RE.fullmatch(tok.strip()):
                        raise SpecParseError(text, tail_at, f"bad quotient {tok!r}")
                    terms.append(int(tok))
            return ContinuedFraction(tuple(terms), period_start)
        if head == "const":
            if rest != "e":
                raise SpecParseError(text, body_at, "only const:e is supported")
            return NamedConstant("e")
        if head == "liouville":
            if not _INT_RE.fullmatch(rest) or int(rest) < 2:
                raise SpecParseError(text, body_at, "base must be an integer >= 2")
            return NamedConstant("liouville", int(rest))
        if head == "rand":
            if not _INT_RE.fullmatch(rest) or not 0 <= int(rest) < 2**64:
                raise SpecParseError(text, body_at, "seed must be a 64-bit integer")
            return RandomDigits(int(rest))
        if head == "mobius":
            m_part, sep2, tail = rest.partition(":")
            r_part, sep3, inner_text = tail.partition(":")
            if not sep2 or not sep3:
                raise SpecParseError(text, body_at, "expected <M>:<r>:<inner>")
            if not _INT_RE.fullmatch(m_part) or int(m_part) < 1:
                raise SpecParseError(text, body_at, "M must be a positive integer")
            r_at = body_at + len(m_part) + 1
            if not _INT_RE.fullmatch(r_part):
                raise SpecParseError(text, r_at, "r must be an integer")
            inner = parse_realspec(inner_text)
            return apply_mobius(inner, int(m_part), int(r_part))
    except (ValueError, ZeroPolynomialError) as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(text, body_at, str(exc)) from None
    raise SpecParseError(text, 0, f"unknown variant tag {head!r}")


def format_spec(spec: RealSpec) -> str:
    """Canonical mini-language text for a spec (round-trips through parse)."""
    if isinstance(spec, Rational):
        return f"rat:{spec.value.numerator}/{spec.value.denominator}"
    if isinstance(spec, DecimalLiteral):
        return f"dec:{spec.literal}"
    if isinstance(spec, Algebraic):
        coeffs = ",".join(str(c) for c in spec.minpoly.coeffs)
        lo = f"{spec.lo.numerator}/{spec.lo.denominator}"
        hi = f"{spec.hi.numerator}/{spec.hi.denominator}"
        return f"alg:{coeffs}:{lo},{hi}"
    if isinstance(spec, ContinuedFraction):
        s = f"cf:{spec.terms[0]}"
        if len(spec.terms) > 1:
            s += ";" + ",".join(str(t) for t in spec.terms[1:])
        if spec.period_start is not None:
            s += f";per={spec.period_start}"
        return s
    if isinstance(spec, NamedConstant):
        return "const:e" if spec.name == "e" else f"liouville:{spec.base}"
    if isinstance(spec, RandomDigits):
        return f"rand:{spec.seed}"
    if isinstance(spec, MobiusImage):
        return f"mobius:{spec.m}:{spec.r}:{format_spec(spec.inner)}"
    raise TypeError(f"unknown spec variant {type(spec).__name__}")
