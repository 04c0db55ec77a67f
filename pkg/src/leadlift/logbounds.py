"""Rigorous rational bounds on natural logarithms, backed by mpmath intervals.

Every estimator and verifier in this package compares exponents of the form
-log(err) / log(height).  Those comparisons must be deterministic and
mathematically safe, so logs are computed with mpmath's interval context at a
fixed precision and the dyadic endpoints are converted to exact Fractions.
Everything downstream of the log itself stays in rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import iv

# Fixed working precision for interval logs.  Resulting bounds have relative
# width around 2**-60, far below the 2**-20 resolution used for exponent
# comparisons.
LOG_PRECISION_BITS = 64


def _endpoint_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    v = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -v if sign else v


def log_bounds(x: Fraction | int) -> tuple[Fraction, Fraction]:
    """Return rational (lo, hi) with lo <= ln(x) <= hi.  Requires x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log_bounds requires a positive argument")
    if x == 1:
        return Fraction(0), Fraction(0)
    iv.prec = LOG_PRECISION_BITS
    val = iv.log(iv.mpf(x.numerator) / iv.mpf(x.denominator))
    lo_t, hi_t = val._mpi_
    return _endpoint_to_fraction(lo_t), _endpoint_to_fraction(hi_t)


def log_lower(x: Fraction | int) -> Fraction:
    return log_bounds(x)[0]


def log_upper(x: Fraction | int) -> Fraction:
    return log_bounds(x)[1]


def abs_log_upper(lo: Fraction, hi: Fraction) -> Fraction:
    """Upper bound on |ln(t)| over t in [lo, hi], 0 < lo <= hi."""
    if not 0 < lo <= hi:
        raise ValueError("need 0 < lo <= hi")
    a = log_lower(lo)
    b = log_upper(hi)
    return max(-a, b, Fraction(0))


def neg_log_ratio_bounds(
    err_lo: Fraction, err_hi: Fraction, height: int
) -> tuple[Fraction, Fraction]:
    """Rational enclosure of [-ln(err_hi)/ln(h), -ln(err_lo)/ln(h)].

    This is the exponent interval induced by a positive error enclosure
    0 < err_lo <= err_hi at a witness of height h >= 2.
    """
    if height < 2:
        raise ValueError("height must be >= 2")
    if not 0 < err_lo <= err_hi:
        raise ValueError("need 0 < err_lo <= err_hi")
    num_lo = -log_upper(err_hi)  # lower bound of -ln(err_hi)
    num_hi = -log_lower(err_lo)  # upper bound of -ln(err_lo)
    den_lo, den_hi = log_bounds(height)  # both > 0 for height >= 2
    # Divide interval [num_lo, num_hi] by positive interval [den_lo, den_hi].
    lo = num_lo / den_lo if num_lo < 0 else num_lo / den_hi
    hi = num_hi / den_hi if num_hi < 0 else num_hi / den_lo
    return lo, hi
