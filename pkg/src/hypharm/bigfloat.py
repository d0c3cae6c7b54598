"""Arbitrary-precision binary floating point with rigorous error enclosures.

``BigFloat`` is an immutable dyadic value ``man * 2**exp`` kept at a fixed
mantissa width; arithmetic is correctly rounded (error < 1 ulp per
operation).  ``Approx`` pairs a BigFloat with an exact absolute error bound,
so the true mathematical quantity always lies in ``[value - abs_err,
value + abs_err]``.  Error bounds are held as exact dyadic Fractions and
only ever rounded upward.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

__all__ = ["BigFloat", "Approx", "PrecisionError", "ceil_dyadic", "pow10"]

_ERR_BITS = 16  # mantissa width of stored error bounds


class PrecisionError(ArithmeticError):
    """Raised when an enclosure is too wide for the requested operation."""


def _round_shift(man: int, shift: int, mode: str) -> int:
    """Drop `shift` low bits of `man`, rounding per mode ('n', 'u', 'd')."""
    if shift <= 0:
        return man << -shift
    neg = man < 0
    m = abs(man)
    lo = m & ((1 << shift) - 1)
    hi = m >> shift
    if lo:
        if mode == "u":
            hi += 1
        elif mode == "n":
            half = 1 << (shift - 1)
            if lo > half or (lo == half and (hi & 1)):
                hi += 1
    return -hi if neg else hi


@dataclass(frozen=True)
class BigFloat:
    """Immutable dyadic float: value = man * 2**exp, |man| < 2**prec."""

    man: int
    exp: int
    prec: int

    @staticmethod
    def make(man: int, exp: int, prec: int, mode: str = "n") -> "BigFloat":
        """Normalize and round an exact man*2**exp to `prec` bits."""
        if man == 0:
            return BigFloat(0, 0, prec)
        shift = abs(man).bit_length() - prec
        man = _round_shift(man, shift, mode)
        exp += shift
        if abs(man).bit_length() > prec:  # rounding carried into a new bit
            man = _round_shift(man, 1, "d")
            exp += 1
        return BigFloat(man, exp, prec)

    @staticmethod
    def from_int(n: int, prec: int, mode: str = "n") -> "BigFloat":
        return BigFloat.make(n, 0, prec, mode)

    @staticmethod
    def from_fraction(q: Fraction, prec: int, mode: str = "n") -> "BigFloat":
        x = BigFloat.div_exact_ints(q.numerator, q.denominator, prec, mode)
        return x

    @staticmethod
    def div_exact_ints(num: int, den: int, prec: int, mode: str = "n") -> "BigFloat":
        """Correctly rounded num/den at `prec` bits (den > 0)."""
        if num == 0:
            return BigFloat(0, 0, prec)
        shift = prec + 2 + max(0, den.bit_length() - num.bit_length() + prec)
        q, r = divmod(num << shift, den)
        if r and mode == "n":
            # encode "strictly between" with a sticky bit
            q = (q << 1) | 1
            return BigFloat.make(q, -shift - 1, prec, mode)
        if r and mode == "u" and q >= 0:
            q += 1
        if r and mode == "d" and q < 0:
            q += 1  # floor division overshoots toward -inf
        return BigFloat.make(q, -shift, prec, mode)

    @staticmethod
    def exp2(e: int, prec: int) -> "BigFloat":
        return BigFloat.make(1, e, prec)

    @staticmethod
    def zero(prec: int = 64) -> "BigFloat":
        return BigFloat(0, 0, prec)

    # -- exact views ------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def is_zero(self) -> bool:
        return self.man == 0

    @property
    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def ulp(self) -> Fraction:
        """Weight of the last mantissa place, as an exact Fraction."""
        if self.man == 0:
            return Fraction(1, 1 << (4 * self.prec))
        if self.exp >= 0:
            return Fraction(1 << self.exp)
        return Fraction(1, 1 << -self.exp)

    # -- arithmetic (correctly rounded at max operand precision) ----------

    def _binop_prec(self, other: "BigFloat") -> int:
        return max(self.prec, other.prec)

    def __add__(self, other: "BigFloat") -> "BigFloat":
        prec = self._binop_prec(other)
        a, b = self, other
        if a.man == 0:
            return BigFloat.make(b.man, b.exp, prec)
        if b.man == 0:
            return BigFloat.make(a.man, a.exp, prec)
        if a.exp < b.exp:
            a, b = b, a
        gap = a.exp - b.exp
        if gap > prec + b.prec + 8:
            # b only perturbs the sticky bit of the result
            man = (a.man << (prec + 8)) + b.sign
            return BigFloat.make(man, a.exp - prec - 8, prec)
        return BigFloat.make((a.man << gap) + b.man, b.exp, prec)

    def __neg__(self) -> "BigFloat":
        return BigFloat(-self.man, self.exp, self.prec)

    def __sub__(self, other: "BigFloat") -> "BigFloat":
        return self + (-other)

    def __abs__(self) -> "BigFloat":
        return BigFloat(abs(self.man), self.exp, self.prec)

    def __mul__(self, other: "BigFloat") -> "BigFloat":
        prec = self._binop_prec(other)
        return BigFloat.make(self.man * other.man, self.exp + other.exp, prec)

    def __truediv__(self, other: "BigFloat") -> "BigFloat":
        if other.man == 0:
            raise ZeroDivisionError("BigFloat division by zero")
        prec = self._binop_prec(other)
        shift = prec + 4 + max(0, other.man.bit_length() - abs(self.man).bit_length() + prec)
        num = self.man << shift
        den = other.man
        if den < 0:
            num, den = -num, -den
        q, r = divmod(num, den)
        if r:
            q = (q << 1) | 1
            shift += 1
        return BigFloat.make(q, self.exp - other.exp - shift, prec)

    def sqrt(self) -> "BigFloat":
        if self.man < 0:
            raise ValueError("BigFloat sqrt of negative value")
        if self.man == 0:
            return BigFloat(0, 0, self.prec)
        prec = self.prec
        shift = 2 * prec + 4
        if (self.exp - shift) % 2:
            shift += 1
        m = self.man << shift
        s = isqrt(m)
        if s * s != m:
            s = (s << 1) | 1
            shift += 2
        return BigFloat.make(s, (self.exp - shift) // 2, prec)

    def scale2(self, n: int) -> "BigFloat":
        """Exact multiplication by 2**n."""
        if self.man == 0:
            return self
        return BigFloat(self.man, self.exp + n, self.prec)

    def round_to(self, prec: int, mode: str = "n") -> "BigFloat":
        return BigFloat.make(self.man, self.exp, prec, mode)

    # -- comparisons (exact) ----------------------------------------------

    def _cmp(self, other: "BigFloat") -> int:
        if self.sign != other.sign:
            return self.sign - other.sign
        d = self.to_fraction() - other.to_fraction()
        return (d > 0) - (d < 0)

    def __lt__(self, other: "BigFloat") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "BigFloat") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "BigFloat") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "BigFloat") -> bool:
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        try:
            return self.man * 2.0 ** self.exp
        except OverflowError:
            return float(self.to_fraction())

    # -- decimal output ----------------------------------------------------

    def to_decimal(self, digits: int) -> str:
        """Fixed-point decimal string with exactly `digits` fractional digits."""
        return format_fraction(self.to_fraction(), digits)

    def __repr__(self) -> str:
        return f"BigFloat({float(self):.6g}, prec={self.prec})"


def format_fraction(q: Fraction, digits: int) -> str:
    """Round q to `digits` decimal places and render as a plain string."""
    scaled = q * 10**digits
    n2, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        n2 += 1
    neg = n2 < 0
    s = str(abs(n2)).rjust(digits + 1, "0")
    out = s[:-digits] + "." + s[-digits:] if digits else s
    return "-" + out if neg else out


def ceil_dyadic(q: Fraction) -> Fraction:
    """Smallest |mantissa| <= 2**16 dyadic fraction that is >= q (q >= 0)."""
    if q <= 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    e = num.bit_length() - den.bit_length() + 1  # q < 2**e
    shift = _ERR_BITS - e
    if shift >= 0:
        m = -((-num << shift) // den)
    else:
        m = -(-num // (den << -shift))
    return Fraction(m, 1) * (Fraction(2) ** (e - _ERR_BITS))


def pow10(digits: int) -> Fraction:
    """Exact 10**(-digits)."""
    return Fraction(1, 10**digits)


@dataclass(frozen=True)
class Approx:
    """A certified enclosure: true value in [value - abs_err, value + abs_err]."""

    value: BigFloat
    abs_err: Fraction = Fraction(0)

    @staticmethod
    def exact_fraction(q: Fraction, prec: int) -> "Approx":
        v = BigFloat.from_fraction(q, prec)
        err = abs(q - v.to_fraction())
        return Approx(v, ceil_dyadic(err))

    @staticmethod
    def exact_int(n: int, prec: int) -> "Approx":
        return Approx.exact_fraction(Fraction(n), prec)

    @staticmethod
    def zero(prec: int = 64) -> "Approx":
        return Approx(BigFloat.zero(prec), Fraction(0))

    # -- exact views ------------------------------------------------------

    def lo(self) -> Fraction:
        return self.value.to_fraction() - self.abs_err

    def hi(self) -> Fraction:
        return self.value.to_fraction() + self.abs_err

    def within(self, tol: Fraction) -> bool:
        return self.abs_err <= tol

    def mag(self) -> Fraction:
        """Upper bound for |true value|."""
        return abs(self.value.to_fraction()) + self.abs_err

    @property
    def prec(self) -> int:
        return self.value.prec

    # -- arithmetic with conservative error propagation --------------------

    def __add__(self, other: "Approx") -> "Approx":
        v = self.value + other.value
        err = self.abs_err + other.abs_err + v.ulp()
        return Approx(v, ceil_dyadic(err))

    def __neg__(self) -> "Approx":
        return Approx(-self.value, self.abs_err)

    def __sub__(self, other: "Approx") -> "Approx":
        return self + (-other)

    def __abs__(self) -> "Approx":
        return Approx(abs(self.value), self.abs_err)

    def __mul__(self, other: "Approx") -> "Approx":
        v = self.value * other.value
        a = abs(self.value.to_fraction())
        b = abs(other.value.to_fraction())
        err = a * other.abs_err + b * self.abs_err + self.abs_err * other.abs_err + v.ulp()
        return Approx(v, ceil_dyadic(err))

    def __truediv__(self, other: "Approx") -> "Approx":
        bv = abs(other.value.to_fraction())
        if bv <= other.abs_err:
            raise PrecisionError("divisor enclosure contains zero")
        v = self.value / other.value
        av = abs(self.value.to_fraction())
        err = (self.abs_err + (av / bv) * other.abs_err) / (bv - other.abs_err)
        return Approx(v, ceil_dyadic(err + v.ulp()))

    def sqrt(self) -> "Approx":
        xv = self.value.to_fraction()
        if xv < self.abs_err:
            if xv + self.abs_err == 0:  # exactly zero
                return Approx(BigFloat.zero(self.prec), Fraction(0))
            raise PrecisionError("sqrt enclosure reaches below zero")
        v = self.value.sqrt()
        if self.abs_err:
            lo = xv - self.abs_err
            # strict lower bound of sqrt(lo) via integer isqrt
            s = isqrt((lo.numerator << 64) // lo.denominator)
            if s:
                err = self.abs_err / Fraction(s, 1 << 32)
            else:
                hi = xv + self.abs_err
                s2 = isqrt(-((-hi.numerator << 64) // hi.denominator)) + 1
                err = Fraction(s2, 1 << 32)
        else:
            err = Fraction(0)
        return Approx(v, ceil_dyadic(err + v.ulp()))

    def scale(self, q: Fraction) -> "Approx":
        """Multiply by an exact rational."""
        v = BigFloat.from_fraction(self.value.to_fraction() * q, self.prec)
        return Approx(v, ceil_dyadic(self.abs_err * abs(q) + v.ulp()))

    def pow_int(self, n: int) -> "Approx":
        if n == 0:
            return Approx.exact_int(1, self.prec)
        invert = n < 0
        n = abs(n)
        acc = None
        base = self
        while n:
            if n & 1:
                acc = base if acc is None else acc * base
            n >>= 1
            if n:
                base = base * base
        assert acc is not None
        if invert:
            return Approx.exact_int(1, self.prec) / acc
        return acc

    def round_to(self, prec: int) -> "Approx":
        v = self.value.round_to(prec)
        return Approx(v, ceil_dyadic(self.abs_err + v.ulp()))

    def __repr__(self) -> str:
        return f"Approx({float(self.value):.6g} ± {float(self.abs_err):.3g})"
