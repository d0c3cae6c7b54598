"""Elementary functions over certified enclosures: pi, log, exp, powers,
and sine/cosine/tangent of rational multiples of pi.

Every routine returns an Approx whose error bound accounts for series
truncation (via explicit tail estimates) as well as rounding.  Pi is
available through two unrelated algorithms so that results can be
cross-validated.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .bigfloat import Approx, BigFloat, PrecisionError, ceil_dyadic, pow10
from .errors import DomainError

__all__ = [
    "bits_for_digits", "to_digits", "pi_approx", "pi_machin", "pi_chudnovsky",
    "ln2_approx", "log_approx", "log_fraction", "exp_approx", "sqrt_fraction",
    "pow_rat", "sin_pi", "cos_pi", "tan_pi",
]

_LOG2_10 = math.log2(10)


def bits_for_digits(digits: int) -> int:
    """Working precision for a d-decimal-digit request (with guard bits)."""
    return int(digits * _LOG2_10) + 1 + 32


def to_digits(make, digits: int):
    """Call make(prec) with escalating precision until abs_err <= 10^-digits."""
    target = pow10(digits)
    prec = bits_for_digits(digits)
    for _ in range(16):
        try:
            r = make(prec)
        except PrecisionError:
            prec *= 2
            continue
        if r.abs_err <= target:
            return r
        prec *= 2
    raise PrecisionError(f"no convergence to {digits} digits")


# ---------------------------------------------------------------------------
# constants: pi (two algorithms) and ln 2

def _arctan_inv_fixed(n: int, w: int) -> tuple[int, int]:
    """floor-ish of 2^w * arctan(1/n); returns (value, error in 2^-w units)."""
    total = 0
    j = 0
    npow = n
    n2 = n * n
    one = 1 << w
    err = 2  # truncated tail (alternating series) + slack
    while True:
        t = one // (npow * (2 * j + 1))
        if t == 0:
            break
        total += -t if (j & 1) else t
        err += 1  # each floor division discards < 1 unit
        j += 1
        npow *= n2
    return total, err


def _cached_constant(fn):
    cache: dict[str, Approx] = {}

    def wrapper(prec: int) -> Approx:
        best = cache.get("v")
        if best is None or best.prec < prec:
            best = fn(prec)
            cache["v"] = best
        if best.prec == prec:
            return best
        return best.round_to(prec)

    return wrapper


@_cached_constant
def pi_machin(prec: int) -> Approx:
    """Machin's arctangent formula, with per-term floor error accounting."""
    w = prec + 24
    a5, e5 = _arctan_inv_fixed(5, w)
    a239, e239 = _arctan_inv_fixed(239, w)
    man = 16 * a5 - 4 * a239
    err = Fraction(16 * e5 + 4 * e239, 1 << w)
    v = BigFloat.make(man, -w, prec)
    return Approx(v, ceil_dyadic(err + v.ulp()))


_CHUD_A = 13591409
_CHUD_B = 545140134
_CHUD_C = 640320


@_cached_constant
def pi_chudnovsky(prec: int) -> Approx:
    """Binary-split-free Chudnovsky evaluation over exact rationals."""
    c3 = _CHUD_C**3
    t = Fraction(_CHUD_A)
    s = t
    k = 0
    tail_target = Fraction(1, 1 << (prec + 16))
    while True:
        k += 1
        num = 1
        for i in range(6 * k - 5, 6 * k + 1):
            num *= i
        den = (3 * k - 2) * (3 * k - 1) * (3 * k) * k**3 * c3
        t = t * Fraction(-num, den) * Fraction(_CHUD_A + _CHUD_B * k, _CHUD_A + _CHUD_B * (k - 1))
        s += t
        if abs(t) < tail_target:
            break
    # term ratio is below 1e-13 for all k >= 1: tail < twice the next term
    tail = 2 * abs(t) * Fraction(1, 10**13)
    sv = Approx.exact_fraction(s, prec + 16)
    ssum = Approx(sv.value, ceil_dyadic(sv.abs_err + tail))
    root = Approx.exact_int(10005, prec + 16).sqrt()
    res = (root.scale(Fraction(426880)) / ssum).round_to(prec)
    return res


def pi_approx(prec: int) -> Approx:
    return pi_machin(prec)


def _atanh_inv_fixed(n: int, w: int) -> tuple[int, int]:
    """floor-ish of 2^w * atanh(1/n); (value, error units of 2^-w)."""
    total = 0
    j = 0
    npow = n
    n2 = n * n
    one = 1 << w
    err = 3  # geometric tail of a positive series with ratio 1/n^2 <= 1/9
    while True:
        t = one // (npow * (2 * j + 1))
        if t == 0:
            break
        total += t
        err += 1
        j += 1
        npow *= n2
    return total, err


@_cached_constant
def ln2_approx(prec: int) -> Approx:
    w = prec + 24
    a, e = _atanh_inv_fixed(3, w)
    v = BigFloat.make(2 * a, -w, prec)
    return Approx(v, ceil_dyadic(Fraction(2 * e, 1 << w) + v.ulp()))


# ---------------------------------------------------------------------------
# logarithm and exponential

def log_approx(x: Approx, prec: int) -> Approx:
    """Natural log of a positive enclosure."""
    lo = x.lo()
    if lo <= 0:
        if x.abs_err > 0 and x.value.to_fraction() > 0:
            raise PrecisionError("log argument enclosure reaches zero")
        raise DomainError("log requires a positive argument")
    wp = prec + 16
    v = x.value
    # v = m * 2^E with m in [1/2, 1): value in [2^(n-1), 2^n) for n = E + bits
    n = v.exp + v.man.bit_length()
    y = v.scale2(-n)  # in [1/2, 1)
    if y.to_fraction() < Fraction(70711, 100000):
        y = y.scale2(1)
        n -= 1
    yw = Approx(y.round_to(wp))
    one = Approx.exact_int(1, wp)
    z = (yw - one) / (yw + one)
    # log y = 2 * atanh(z), |z| <= 0.1717
    z2 = z * z
    term = z
    total = z
    j = 1
    cutoff = Fraction(1, 1 << (wp - 4))
    while True:
        term = term * z2
        total = total + term.scale(Fraction(1, 2 * j + 1))
        j += 1
        if term.mag() < cutoff:
            break
    zm = z.mag()
    tail = zm ** (2 * j + 1) / ((2 * j + 1) * (1 - zm * zm))
    total = Approx(total.value.scale2(1), ceil_dyadic(2 * (total.abs_err + tail)))
    if n:
        total = total + ln2_approx(wp).scale(Fraction(n))
    # transfer the input error: |log(v +- e) - log v| <= e / lo
    err = total.abs_err + x.abs_err / lo
    return Approx(total.value.round_to(prec), ceil_dyadic(err + total.value.ulp()))


def _log_int(n: int, prec: int) -> Approx:
    if n == 1:
        return Approx.zero(prec)
    return log_approx(Approx.exact_int(n, max(prec, n.bit_length() + 8)), prec)


def log_fraction(q: Fraction, prec: int) -> Approx:
    """Exact-argument natural log of a positive rational."""
    if q <= 0:
        raise DomainError("log requires a positive argument")
    if q == 1:
        return Approx.zero(prec)
    return (_log_int(q.numerator, prec + 8) - _log_int(q.denominator, prec + 8)).round_to(prec)


def exp_approx(x: Approx, prec: int) -> Approx:
    wp = prec + 24
    ln2 = ln2_approx(wp)
    n = int(round(float(x.value) / math.log(2))) if not x.value.is_zero() else 0
    r = x - ln2.scale(Fraction(n))
    rm = r.mag()
    if rm > Fraction(2, 5):
        raise PrecisionError("exp argument reduction failed")  # widen and retry
    term = Approx.exact_int(1, wp)
    total = term
    j = 0
    cutoff = Fraction(1, 1 << (wp - 4))
    while True:
        j += 1
        term = (term * r).scale(Fraction(1, j))
        total = total + term
        if term.mag() < cutoff:
            break
    # sum_{i>j} rm^i/i! <= (rm^j/j!) * rm/(j+1) * 2 given rm/(j+2) < 1/2
    tail = term.mag() * rm * Fraction(2, j + 1)
    total = Approx(total.value, ceil_dyadic(total.abs_err + tail))
    v = total.value.scale2(n)
    return Approx(v.round_to(prec), ceil_dyadic(total.abs_err * Fraction(2) ** n + v.ulp()))


def sqrt_fraction(q: Fraction, prec: int) -> Approx:
    if q < 0:
        raise DomainError("sqrt requires a nonnegative argument")
    return Approx.exact_fraction(q, prec + 8).sqrt().round_to(prec)


def pow_rat(base: Approx, q: Fraction, prec: int) -> Approx:
    """base**q for positive base, via exp(q * log base)."""
    if q.denominator == 1:
        return base.pow_int(q.numerator).round_to(prec)
    wp = prec + 16
    return exp_approx(log_approx(base, wp).scale(q), prec)


# ---------------------------------------------------------------------------
# trigonometric functions of pi * (rational)

def _sin_taylor(t: Approx, wp: int) -> Approx:
    term = t
    total = t
    t2 = t * t
    j = 0
    cutoff = Fraction(1, 1 << (wp - 4))
    while True:
        j += 1
        term = (term * t2).scale(Fraction(-1, (2 * j) * (2 * j + 1)))
        total = total + term
        if term.mag() < cutoff:
            break
    # alternating with decreasing terms for |t| < 2: tail <= first omitted
    tm = t.mag()
    tail = term.mag() * tm * tm
    return Approx(total.value, ceil_dyadic(total.abs_err + tail))


def _cos_taylor(t: Approx, wp: int) -> Approx:
    term = Approx.exact_int(1, wp)
    total = term
    t2 = t * t
    j = 0
    cutoff = Fraction(1, 1 << (wp - 4))
    while True:
        j += 1
        term = (term * t2).scale(Fraction(-1, (2 * j - 1) * (2 * j)))
        total = total + term
        if term.mag() < cutoff:
            break
    tm = t.mag()
    tail = term.mag() * tm * tm
    return Approx(total.value, ceil_dyadic(total.abs_err + tail))


def sin_pi(q: Fraction, prec: int) -> Approx:
    """sin(pi*q) with exact argument reduction on the rational q."""
    q = q % 2  # exact: in [0, 2)
    sign = 1
    if q >= 1:
        sign = -1
        q -= 1
    if q > Fraction(1, 2):
        q = 1 - q
    if q == 0:
        return Approx.zero(prec)
    if q == Fraction(1, 2):
        r = Approx.exact_int(sign, prec)
        return r
    wp = prec + 16
    if q <= Fraction(1, 4):
        r = _sin_taylor(pi_approx(wp).scale(q), wp)
    else:
        r = _cos_taylor(pi_approx(wp).scale(Fraction(1, 2) - q), wp)
    if sign < 0:
        r = -r
    return r.round_to(prec)


def cos_pi(q: Fraction, prec: int) -> Approx:
    return sin_pi(q + Fraction(1, 2), prec)


def tan_pi(q: Fraction, prec: int) -> Approx:
    if (q - Fraction(1, 2)).denominator == 1:
        raise DomainError("tan(pi*q) pole: q - 1/2 is an integer")
    wp = prec + 8
    return (sin_pi(q, wp) / cos_pi(q, wp)).round_to(prec)
