"""Certified interval arithmetic on exact binary endpoints.

Every real quantity is carried as an :class:`Enclosure` ``[lo, hi]`` whose
endpoints are exact dyadic numbers (mpmath ``mpf`` values).  Field
operations and square roots use directed rounding, which mpmath performs
exactly.  exp, log and cos(pi x) are evaluated with guard bits and then
pushed outward by a margin far larger than the library's own error, so
the result contains the true value of the expression.
"""

from __future__ import annotations

import enum
import os
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
from mpmath import libmp
from mpmath.libmp import round_ceiling, round_floor

__all__ = [
    "DEFAULT_PRECISION",
    "PRECISION_CAP",
    "DomainError",
    "Enclosure",
    "Sign",
    "binary",
    "certified_sign",
    "cos_pi",
    "cosh",
    "default_precision",
    "exp",
    "from_integer",
    "from_ratio",
    "hull",
    "log",
    "log_integer",
    "pi_const",
    "sinh",
    "sqrt",
    "unary",
    "unique_integer",
]

DEFAULT_PRECISION = 128
PRECISION_CAP = 1 << 16
PRECISION_ENV = "PARTCERT_PRECISION_BITS"

# Extra working bits for transcendental endpoints.
_GUARD = 32

_make = mpmath.mp.make_mpf
_ONE = libmp.fone
_ZERO = libmp.fzero

Number = Union[int, Fraction, "Enclosure"]


class DomainError(ValueError):
    """An operation was applied outside the domain where it is defined."""


class Sign(enum.Enum):
    POSITIVE = 1
    NEGATIVE = -1
    ZERO = 0
    INDETERMINATE = None

    @classmethod
    def of_int(cls, v: int) -> "Sign":
        if v > 0:
            return cls.POSITIVE
        if v < 0:
            return cls.NEGATIVE
        return cls.ZERO


def default_precision() -> int:
    """Starting precision in bits; ``PARTCERT_PRECISION_BITS`` overrides it."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if bits < 16:
        raise ValueError(f"{PRECISION_ENV} must be at least 16, got {bits}")
    return bits


def _exact(v) -> tuple:
    """Exact mpf tuple for an int or a dyadic value."""
    if isinstance(v, int):
        return libmp.from_int(v)
    if isinstance(v, tuple):
        return v
    if isinstance(v, mpmath.mpf):
        return v._mpf_
    if isinstance(v, float):
        return libmp.from_float(v)
    raise TypeError(f"cannot convert {type(v).__name__} exactly")


def _to_fraction(t: tuple) -> Fraction:
    p, q = libmp.to_rational(t)
    return Fraction(p, q)


def _cmp(a: tuple, b: tuple) -> int:
    return libmp.mpf_cmp(a, b)


def _min(*xs: tuple) -> tuple:
    best = xs[0]
    for x in xs[1:]:
        if _cmp(x, best) < 0:
            best = x
    return best


def _max(*xs: tuple) -> tuple:
    best = xs[0]
    for x in xs[1:]:
        if _cmp(x, best) > 0:
            best = x
    return best


class Enclosure:
    """Closed interval ``[lo, hi]`` known to contain an exact real value.

    ``precision_bits`` records the working precision the value was produced
    at; binary operations run at the larger of their operands' precisions.
    """

    __slots__ = ("_lo", "_hi", "precision_bits")

    def __init__(self, lo, hi=None, precision_bits: Optional[int] = None):
        prec = default_precision() if precision_bits is None else int(precision_bits)
        if hi is None:
            hi = lo
        self._lo = _lower_point(lo, prec)
        self._hi = _upper_point(hi, prec)
        self.precision_bits = prec
        if _cmp(self._lo, self._hi) > 0:
            raise ValueError("enclosure requires lo <= hi")

    @classmethod
    def _raw(cls, lo: tuple, hi: tuple, prec: int) -> "Enclosure":
        obj = cls.__new__(cls)
        obj._lo = lo
        obj._hi = hi
        obj.precision_bits = prec
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def lo(self) -> mpmath.mpf:
        return _make(self._lo)

    @property
    def hi(self) -> mpmath.mpf:
        return _make(self._hi)

    def width(self) -> mpmath.mpf:
        return _make(libmp.mpf_sub(self._hi, self._lo, self.precision_bits, round_ceiling))

    def mid(self) -> mpmath.mpf:
        s = libmp.mpf_add(self._lo, self._hi, self.precision_bits + 1)
        return _make(libmp.mpf_shift(s, -1))

    def lo_fraction(self) -> Fraction:
        return _to_fraction(self._lo)

    def hi_fraction(self) -> Fraction:
        return _to_fraction(self._hi)

    def lo_float(self) -> float:
        """Lower endpoint rounded down to a double."""
        return libmp.to_float(self._lo, rnd=round_floor)

    def hi_float(self) -> float:
        """Upper endpoint rounded up to a double."""
        return libmp.to_float(self._hi, rnd=round_ceiling)

    def is_point(self) -> bool:
        return _cmp(self._lo, self._hi) == 0

    def is_positive(self) -> bool:
        return libmp.mpf_sign(self._lo) > 0

    def is_negative(self) -> bool:
        return libmp.mpf_sign(self._hi) < 0

    def sign(self) -> Sign:
        if self.is_positive():
            return Sign.POSITIVE
        if self.is_negative():
            return Sign.NEGATIVE
        if self.is_point():
            return Sign.ZERO
        return Sign.INDETERMINATE

    def contains(self, value) -> bool:
        """Exact containment test for ints, Fractions, dyadics and enclosures."""
        if isinstance(value, Enclosure):
            return _cmp(self._lo, value._lo) <= 0 and _cmp(value._hi, self._hi) <= 0
        if isinstance(value, Fraction) and value.denominator != 1:
            return self.lo_fraction() <= value <= self.hi_fraction()
        t = _exact(int(value) if isinstance(value, Fraction) else value)
        return _cmp(self._lo, t) <= 0 and _cmp(t, self._hi) <= 0

    __contains__ = contains

    def subset_of(self, other: "Enclosure") -> bool:
        return other.contains(self)

    def intersects(self, other: "Enclosure") -> bool:
        return _cmp(self._lo, other._hi) <= 0 and _cmp(other._lo, self._hi) <= 0

    def __lt__(self, other) -> bool:
        """Certainly less: every point of self is below every point of other."""
        o = _coerce(other, self.precision_bits)
        return _cmp(self._hi, o._lo) < 0

    def __gt__(self, other) -> bool:
        o = _coerce(other, self.precision_bits)
        return _cmp(self._lo, o._hi) > 0

    def __repr__(self) -> str:
        digits = max(6, min(30, self.precision_bits // 4))
        return (
            f"Enclosure([{mpmath.nstr(self.lo, digits)}, {mpmath.nstr(self.hi, digits)}], "
            f"{self.precision_bits} bits)"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Enclosure):
            return NotImplemented
        return _cmp(self._lo, other._lo) == 0 and _cmp(self._hi, other._hi) == 0

    def __hash__(self) -> int:
        return hash((self._lo, self._hi))

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Enclosure":
        return Enclosure._raw(libmp.mpf_neg(self._hi), libmp.mpf_neg(self._lo), self.precision_bits)

    def __abs__(self) -> "Enclosure":
        if libmp.mpf_sign(self._lo) >= 0:
            return self
        if libmp.mpf_sign(self._hi) <= 0:
            return -self
        hi = _max(libmp.mpf_neg(self._lo), self._hi)
        return Enclosure._raw(_ZERO, hi, self.precision_bits)

    def __add__(self, other):
        return _add(self, _coerce(other, self.precision_bits))

    def __radd__(self, other):
        return _add(_coerce(other, self.precision_bits), self)

    def __sub__(self, other):
        return _sub(self, _coerce(other, self.precision_bits))

    def __rsub__(self, other):
        return _sub(_coerce(other, self.precision_bits), self)

    def __mul__(self, other):
        return _mul(self, _coerce(other, self.precision_bits))

    def __rmul__(self, other):
        return _mul(_coerce(other, self.precision_bits), self)

    def __truediv__(self, other):
        return _div(self, _coerce(other, self.precision_bits))

    def __rtruediv__(self, other):
        return _div(_coerce(other, self.precision_bits), self)

    def __pow__(self, k: int) -> "Enclosure":
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers are supported")
        if k == 0:
            return Enclosure._raw(_ONE, _ONE, self.precision_bits)
        base = abs(self) if k % 2 == 0 else self
        prec = self.precision_bits
        lo = libmp.mpf_pow_int(base._lo, k, prec, round_floor)
        hi = libmp.mpf_pow_int(base._hi, k, prec, round_ceiling)
        return Enclosure._raw(lo, hi, prec)

    def widened(self, radius) -> "Enclosure":
        """``[lo - radius, hi + radius]`` for a nonnegative dyadic or integer radius."""
        r = _exact(radius)
        prec = self.precision_bits
        return Enclosure._raw(
            libmp.mpf_sub(self._lo, r, prec, round_floor),
            libmp.mpf_add(self._hi, r, prec, round_ceiling),
            prec,
        )

    def with_precision(self, precision_bits: int) -> "Enclosure":
        """Same endpoints, rounded outward if the new precision is smaller."""
        return Enclosure._raw(
            libmp.mpf_pos(self._lo, precision_bits, round_floor),
            libmp.mpf_pos(self._hi, precision_bits, round_ceiling),
            precision_bits,
        )


def _lower_point(v, prec: int) -> tuple:
    if isinstance(v, Fraction):
        return libmp.from_rational(v.numerator, v.denominator, prec, round_floor)
    return _exact(v)


def _upper_point(v, prec: int) -> tuple:
    if isinstance(v, Fraction):
        return libmp.from_rational(v.numerator, v.denominator, prec, round_ceiling)
    return _exact(v)


def _coerce(v, prec: int) -> Enclosure:
    if isinstance(v, Enclosure):
        return v
    if isinstance(v, int):
        return from_integer(v, prec)
    if isinstance(v, Fraction):
        return from_ratio(v.numerator, v.denominator, prec)
    return NotImplemented


def _add(a: Enclosure, b: Enclosure) -> Enclosure:
    prec = max(a.precision_bits, b.precision_bits)
    return Enclosure._raw(
        libmp.mpf_add(a._lo, b._lo, prec, round_floor),
        libmp.mpf_add(a._hi, b._hi, prec, round_ceiling),
        prec,
    )


def _sub(a: Enclosure, b: Enclosure) -> Enclosure:
    prec = max(a.precision_bits, b.precision_bits)
    return Enclosure._raw(
        libmp.mpf_sub(a._lo, b._hi, prec, round_floor),
        libmp.mpf_sub(a._hi, b._lo, prec, round_ceiling),
        prec,
    )


def _mul(a: Enclosure, b: Enclosure) -> Enclosure:
    prec = max(a.precision_bits, b.precision_bits)
    mul = libmp.mpf_mul
    if libmp.mpf_sign(a._lo) >= 0 and libmp.mpf_sign(b._lo) >= 0:
        return Enclosure._raw(
            mul(a._lo, b._lo, prec, round_floor), mul(a._hi, b._hi, prec, round_ceiling), prec
        )
    pairs = [(a._lo, b._lo), (a._lo, b._hi), (a._hi, b._lo), (a._hi, b._hi)]
    lo = _min(*(mul(x, y, prec, round_floor) for x, y in pairs))
    hi = _max(*(mul(x, y, prec, round_ceiling) for x, y in pairs))
    return Enclosure._raw(lo, hi, prec)


def _div(a: Enclosure, b: Enclosure) -> Enclosure:
    if libmp.mpf_sign(b._lo) <= 0 <= libmp.mpf_sign(b._hi):
        raise DomainError("division by an enclosure containing zero")
    prec = max(a.precision_bits, b.precision_bits)
    div = libmp.mpf_div
    pairs = [(a._lo, b._lo), (a._lo, b._hi), (a._hi, b._lo), (a._hi, b._hi)]
    lo = _min(*(div(x, y, prec, round_floor) for x, y in pairs))
    hi = _max(*(div(x, y, prec, round_ceiling) for x, y in pairs))
    return Enclosure._raw(lo, hi, prec)


_BINARY = {"add": _add, "sub": _sub, "mul": _mul, "div": _div}


def binary(op: str, a: Enclosure, b: Enclosure) -> Enclosure:
    """Apply ``op`` in {add, sub, mul, div} with outward rounding."""
    try:
        fn = _BINARY[op]
    except KeyError:
        raise ValueError(f"unknown binary operation {op!r}") from None
    return fn(a, b)


# -- constructors -------------------------------------------------------------


def from_integer(v: int, precision_bits: Optional[int] = None) -> Enclosure:
    prec = default_precision() if precision_bits is None else precision_bits
    t = libmp.from_int(int(v))
    return Enclosure._raw(t, t, prec)


def from_ratio(num: int, den: int, precision_bits: Optional[int] = None) -> Enclosure:
    if den == 0:
        raise DomainError("zero denominator")
    prec = default_precision() if precision_bits is None else precision_bits
    if den < 0:
        num, den = -num, -den
    return Enclosure._raw(
        libmp.from_rational(num, den, prec, round_floor),
        libmp.from_rational(num, den, prec, round_ceiling),
        prec,
    )


def hull(*encs: Enclosure) -> Enclosure:
    prec = max(e.precision_bits for e in encs)
    return Enclosure._raw(_min(*(e._lo for e in encs)), _max(*(e._hi for e in encs)), prec)


# -- transcendental endpoints ------------------------------------------------


def _down(fn: Callable, x: tuple, prec: int) -> tuple:
    wp = prec + _GUARD
    v = fn(x, wp, round_floor)
    slack = libmp.mpf_shift(libmp.mpf_abs(v), -(wp - 4))
    return libmp.mpf_sub(v, slack, prec, round_floor)


def _up(fn: Callable, x: tuple, prec: int) -> tuple:
    wp = prec + _GUARD
    v = fn(x, wp, round_ceiling)
    slack = libmp.mpf_shift(libmp.mpf_abs(v), -(wp - 4))
    return libmp.mpf_add(v, slack, prec, round_ceiling)


def _exp_point(x: tuple, prec: int, lower: bool) -> tuple:
    if x == _ZERO:
        return _ONE
    return _down(libmp.mpf_exp, x, prec) if lower else _up(libmp.mpf_exp, x, prec)


def exp(a: Enclosure) -> Enclosure:
    prec = a.precision_bits
    lo = _exp_point(a._lo, prec, True)
    if libmp.mpf_sign(lo) <= 0:
        lo = _ZERO
    return Enclosure._raw(lo, _exp_point(a._hi, prec, False), prec)


def log(a: Enclosure) -> Enclosure:
    if libmp.mpf_sign(a._lo) <= 0:
        raise DomainError("log requires a strictly positive enclosure")
    prec = a.precision_bits
    return Enclosure._raw(_down(libmp.mpf_log, a._lo, prec), _up(libmp.mpf_log, a._hi, prec), prec)


def sqrt(a: Enclosure) -> Enclosure:
    if libmp.mpf_sign(a._lo) < 0:
        raise DomainError("sqrt requires a nonnegative enclosure")
    prec = a.precision_bits
    return Enclosure._raw(
        libmp.mpf_sqrt(a._lo, prec, round_floor), libmp.mpf_sqrt(a._hi, prec, round_ceiling), prec
    )


def sinh(a: Enclosure) -> Enclosure:
    return (exp(a) - exp(-a)) * Fraction(1, 2)


def cosh(a: Enclosure) -> Enclosure:
    c = (exp(a) + exp(-a)) * Fraction(1, 2)
    # cosh >= 1 everywhere
    if _cmp(c._lo, _ONE) < 0:
        c = Enclosure._raw(_ONE, _max(c._hi, _ONE), c.precision_bits)
    return c


_UNARY = {"exp": exp, "log": log, "sqrt": sqrt, "sinh": sinh, "cosh": cosh}


def unary(fn: str, a: Enclosure) -> Enclosure:
    """Apply ``fn`` in {exp, log, sqrt, sinh, cosh}."""
    try:
        f = _UNARY[fn]
    except KeyError:
        raise ValueError(f"unknown unary function {fn!r}") from None
    return f(a)


def pi_const(precision_bits: Optional[int] = None) -> Enclosure:
    prec = default_precision() if precision_bits is None else precision_bits
    if prec < 16:
        raise DomainError("pi_const needs at least 16 bits")
    lo = _down(lambda _x, wp, rnd: libmp.mpf_pi(wp, rnd), None, prec)
    hi = _up(lambda _x, wp, rnd: libmp.mpf_pi(wp, rnd), None, prec)
    return Enclosure._raw(lo, hi, prec)


def _ln2(prec: int) -> Enclosure:
    lo = _down(lambda _x, wp, rnd: libmp.mpf_ln2(wp, rnd), None, prec)
    hi = _up(lambda _x, wp, rnd: libmp.mpf_ln2(wp, rnd), None, prec)
    return Enclosure._raw(lo, hi, prec)


def log_integer(v: int, precision_bits: Optional[int] = None) -> Enclosure:
    """log of a positive integer, split as ``e*log 2 + log(m)`` with m in [1, 2)."""
    if v <= 0:
        raise DomainError("log_integer requires v > 0")
    prec = default_precision() if precision_bits is None else precision_bits
    e = v.bit_length() - 1
    mantissa = libmp.from_man_exp(v, -e)
    m_log = Enclosure._raw(
        _down(libmp.mpf_log, mantissa, prec), _up(libmp.mpf_log, mantissa, prec), prec
    )
    if e == 0:
        return m_log
    return m_log + _ln2(prec) * e


# cos(pi r) for r in [0, 2) with exactly known values
_COS_PI_EXACT = {
    Fraction(0): 1,
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): 0,
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): -1,
    Fraction(4, 3): Fraction(-1, 2),
    Fraction(3, 2): 0,
    Fraction(5, 3): Fraction(1, 2),
}


def cos_pi(r: Fraction, precision_bits: Optional[int] = None) -> Enclosure:
    """cos(pi * r) for an exact rational r.

    The angle is reduced modulo 2 exactly, so no floating error enters the
    argument; on [0, 1] cos(pi x) decreases and on [1, 2] it increases, so the
    enclosure comes from the endpoints of a tight dyadic bracket of r.
    """
    prec = default_precision() if precision_bits is None else precision_bits
    r = Fraction(r) % 2
    known = _COS_PI_EXACT.get(r)
    if known is not None:
        t = _exact(known) if isinstance(known, int) else libmp.from_rational(
            known.numerator, known.denominator, prec)
        return Enclosure._raw(t, t, prec)
    wp = prec + _GUARD
    r_lo = libmp.from_rational(r.numerator, r.denominator, wp, round_floor)
    r_hi = libmp.from_rational(r.numerator, r.denominator, wp, round_ceiling)
    if r < 1:
        lo = _down(libmp.mpf_cos_pi, r_hi, prec)
        hi = _up(libmp.mpf_cos_pi, r_lo, prec)
    else:
        lo = _down(libmp.mpf_cos_pi, r_lo, prec)
        hi = _up(libmp.mpf_cos_pi, r_hi, prec)
    minus_one = libmp.from_int(-1)
    return Enclosure._raw(_max(lo, minus_one), _min(hi, _ONE), prec)


def unique_integer(a: Enclosure) -> Optional[int]:
    """The integer k if it is the only integer in ``[lo, hi]``, else None."""
    first = libmp.to_int(a._lo, round_ceiling)
    last = libmp.to_int(a._hi, round_floor)
    return first if first == last else None


def certified_sign(
    evaluate: Callable[[int], Enclosure],
    precision_bits: Optional[int] = None,
    cap: Optional[int] = None,
) -> tuple[Sign, Enclosure]:
    """Evaluate at doubling precision until the sign of the result is known.

    Returns ``(Sign.INDETERMINATE, last_enclosure)`` when the cap is reached
    without resolving; an exact zero is reported as ``Sign.ZERO``.
    """
    prec = default_precision() if precision_bits is None else precision_bits
    cap = PRECISION_CAP if cap is None else cap
    while True:
        enc = evaluate(prec)
        s = enc.sign()
        if s is not Sign.INDETERMINATE or prec >= cap:
            return s, enc
        prec = min(2 * prec, cap)
