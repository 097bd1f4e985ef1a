"""Closed-form sandwich bounds used in the log-concavity argument.

Each bound is a :class:`BoundPair` of enclosures.  ``BoundPair.certify``
compares it against an independently computed enclosure of the target and
answers POSITIVE only when both gaps are strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from partcert.enclosure import (
    PRECISION_CAP,
    DomainError,
    Enclosure,
    Sign,
    default_precision,
    exp,
    from_integer,
    log,
    pi_const,
    sqrt,
)
from partcert.series import big_T, constants, log_T_closed, mu

__all__ = [
    "BoundPair",
    "FUNCTION_CATALOG",
    "RangeError",
    "UnsupportedFunction",
    "bound_R",
    "certify_sandwich",
    "classical_p_bounds",
    "p2_bounds_explicit",
    "p2_bounds_simple",
    "q2_bounds",
    "ratio_margin",
    "second_diff_bounds",
    "second_difference",
    "t1_bounds",
    "t1_value",
    "thm51_gap",
    "y_ratio_bound",
]

Real = Union[int, Fraction]


class RangeError(ValueError):
    """A bound was requested outside the range where it is asserted."""


class UnsupportedFunction(ValueError):
    pass


def _prec(precision_bits: Optional[int]) -> int:
    return default_precision() if precision_bits is None else precision_bits


@dataclass(frozen=True)
class BoundPair:
    lower: Enclosure
    upper: Enclosure
    target_id: str
    valid_from: Optional[int] = None

    def gaps(self, target: Enclosure) -> tuple[Enclosure, Enclosure]:
        """(target - lower, upper - target)."""
        return target - self.lower, self.upper - target

    def certify(self, target: Enclosure) -> Sign:
        """POSITIVE if lower < target < upper is certain, NEGATIVE if certainly violated."""
        below, above = self.gaps(target)
        if below.is_positive() and above.is_positive():
            return Sign.POSITIVE
        if below.hi <= 0 or above.hi <= 0:
            return Sign.NEGATIVE
        return Sign.INDETERMINATE


def certify_sandwich(
    pair_at: Callable[[int], BoundPair],
    target_at: Callable[[int], Enclosure],
    precision_bits: Optional[int] = None,
    cap: Optional[int] = None,
) -> tuple[Sign, Enclosure]:
    """Double precision until the sandwich resolves.

    Returns the sign and the smaller of the two gaps (the binding side).
    """
    prec = _prec(precision_bits)
    cap = PRECISION_CAP if cap is None else cap
    while True:
        pair = pair_at(prec)
        target = target_at(prec)
        sign = pair.certify(target)
        below, above = pair.gaps(target)
        margin = below if below.lo <= above.lo else above
        if sign is not Sign.INDETERMINATE or prec >= cap:
            return sign, margin
        prec = min(2 * prec, cap)


# -- second differences of concave functions -------------------------------


def _x(x: Real, prec: int) -> Enclosure:
    if isinstance(x, Enclosure):
        return x
    x = Fraction(x)
    return Enclosure(x, x, prec)


def _c24(x: Enclosure) -> Enclosure:
    return 24 * x - 1


def _mu_of(x: Enclosure) -> Enclosure:
    return pi_const(x.precision_bits) * sqrt(_c24(x)) / 6


def _mu_second(x: Enclosure) -> Enclosure:
    s = _c24(x)
    return -24 * pi_const(x.precision_bits) / (s * sqrt(s))


def _log_mu_minus_one_second(x: Enclosure) -> Enclosure:
    s = _c24(x)
    m = _mu_of(x)
    d1 = 2 * pi_const(x.precision_bits) / sqrt(s)
    return (_mu_second(x) * (m - 1) - d1 * d1) / ((m - 1) * (m - 1))


@dataclass(frozen=True)
class _CatalogEntry:
    value: Callable[[Enclosure], Enclosure]
    second: Callable[[Enclosure], Enclosure]
    # inputs must satisfy x - 1 > domain_floor
    domain_floor: Fraction
    convex: bool = False


FUNCTION_CATALOG: dict[str, _CatalogEntry] = {
    "log": _CatalogEntry(log, lambda x: -1 / (x * x), Fraction(0)),
    "sqrt": _CatalogEntry(sqrt, lambda x: -1 / (4 * x * sqrt(x)), Fraction(0)),
    "mu": _CatalogEntry(_mu_of, _mu_second, Fraction(1, 24)),
    "log_mu_minus_1": _CatalogEntry(
        lambda x: log(_mu_of(x) - 1), _log_mu_minus_one_second, Fraction(1, 24)
    ),
    "log_mu": _CatalogEntry(
        lambda x: log(_mu_of(x)), lambda x: -288 / (_c24(x) * _c24(x)), Fraction(1, 24)
    ),
    # -3 log mu is convex: the sandwich runs the other way
    "neg3_log_mu": _CatalogEntry(
        lambda x: -3 * log(_mu_of(x)),
        lambda x: 864 / (_c24(x) * _c24(x)),
        Fraction(1, 24),
        convex=True,
    ),
}


def _entry(f: str) -> _CatalogEntry:
    try:
        return FUNCTION_CATALOG[f]
    except KeyError:
        raise UnsupportedFunction(f"{f!r} is not in the function catalog") from None


def _check_domain(entry: _CatalogEntry, f: str, x: Real, prec: int) -> Enclosure:
    xe = _x(x, prec)
    if not (xe - 1 - entry.domain_floor).is_positive() or not (xe - 1).is_positive():
        raise DomainError(f"{f} needs x - 1 inside its domain, got x = {x}")
    if f == "log_mu_minus_1" and not (_mu_of(xe - 1) - 1).is_positive():
        raise DomainError("log(mu - 1) needs mu(x - 1) > 1")
    return xe


def second_diff_bounds(f: str, x: Real, precision_bits: Optional[int] = None) -> BoundPair:
    """(f''(x-1), f''(x+1)) for concave catalog entries; swapped for convex ones."""
    prec = _prec(precision_bits)
    entry = _entry(f)
    xe = _check_domain(entry, f, x, prec)
    left, right = entry.second(xe - 1), entry.second(xe + 1)
    if entry.convex:
        left, right = right, left
    return BoundPair(left, right, target_id=f"second_difference[{f}]")


def second_difference(f: str, x: Real, precision_bits: Optional[int] = None) -> Enclosure:
    """f(x+1) - 2 f(x) + f(x-1)."""
    prec = _prec(precision_bits)
    entry = _entry(f)
    xe = _check_domain(entry, f, x, prec)
    return entry.value(xe + 1) - 2 * entry.value(xe) + entry.value(xe - 1)


# -- bounds on T_1, R and p_2 ----------------------------------------------


def _mu_curvature(m: int, prec: int) -> Enclosure:
    """24 pi / (24 m - 1)^(3/2)."""
    s = from_integer(24 * m - 1, prec)
    return 24 * pi_const(prec) / (s * sqrt(s))


def y_ratio_bound(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """exp(-C sqrt(n) / 10)."""
    if n < 2:
        raise RangeError("y_ratio_bound is stated for n >= 2")
    prec = _prec(precision_bits)
    return exp(-constants(prec).C * sqrt(from_integer(n, prec)) / 10)


def t1_bounds(n: int, precision_bits: Optional[int] = None) -> BoundPair:
    if n < 50:
        raise RangeError("the T_1 sandwich is asserted for n >= 50")
    prec = _prec(precision_bits)
    lower = _mu_curvature(n + 1, prec) - Fraction(3, n * n)
    upper = _mu_curvature(n - 1, prec) + y_ratio_bound(n, prec)
    return BoundPair(lower, upper, target_id="T1", valid_from=50)


def t1_value(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """2 log T(n) - log T(n-1) - log T(n+1) from the closed form of log T."""
    if n < 3:
        raise DomainError("t1_value needs n >= 3")
    prec = _prec(precision_bits)
    return 2 * log_T_closed(n, prec) - log_T_closed(n - 1, prec) - log_T_closed(n + 1, prec)


def bound_R(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """1 + 16 e^(mu/2) / mu^3; its upper end bounds |p(n) - T(n)|."""
    if n < 2:
        raise RangeError("bound_R is stated for n >= 2")
    prec = _prec(precision_bits)
    m = mu(n, prec)
    return 1 + 16 * exp(m * Fraction(1, 2)) / m**3


def ratio_margin(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """exp(-C sqrt(n)/10) - bound_R(n)/T(n); positive certifies |R(n)|/T(n) below the bound."""
    prec = _prec(precision_bits)
    return y_ratio_bound(n, prec) - bound_R(n, prec) / big_T(n, prec)


def p2_bounds_explicit(n: int, precision_bits: Optional[int] = None) -> BoundPair:
    if n < 50:
        raise RangeError("the explicit p_2 sandwich is asserted for n >= 50")
    prec = _prec(precision_bits)
    y2 = 2 * y_ratio_bound(n, prec)
    lower = _mu_curvature(n + 1, prec) - Fraction(3, n * n) - y2
    upper = _mu_curvature(n - 1, prec) + y2
    return BoundPair(lower, upper, target_id="p2", valid_from=50)


def p2_bounds_simple(n: int, precision_bits: Optional[int] = None) -> BoundPair:
    """(1/(24n)^(3/2), 2/n^(3/2))."""
    if n < 2600:
        raise RangeError("the simple p_2 sandwich is asserted for n >= 2600")
    prec = _prec(precision_bits)
    a = from_integer(24 * n, prec)
    b = from_integer(n, prec)
    return BoundPair(1 / (a * sqrt(a)), 2 / (b * sqrt(b)), target_id="p2", valid_from=2600)


def q2_bounds(n: int, precision_bits: Optional[int] = None) -> BoundPair:
    if n < 50:
        raise RangeError("the q_2 sandwich is asserted for n >= 50")
    prec = _prec(precision_bits)
    p2 = p2_bounds_explicit(n, prec)
    return BoundPair(p2.lower - Fraction(1, (n + 1) ** 2), p2.upper, target_id="q2", valid_from=50)


# -- strong log-concavity reduction ----------------------------------------


def classical_p_bounds(m: int, precision_bits: Optional[int] = None) -> BoundPair:
    """e^(2 sqrt m) / (2 pi m e^(1/(6m))) < p(m) < e^(C sqrt m)."""
    if m < 1:
        raise RangeError("classical bounds need m >= 1")
    prec = _prec(precision_bits)
    root = sqrt(from_integer(m, prec))
    lower = exp(2 * root) / (2 * pi_const(prec) * m * exp(from_integer(1, prec) / (6 * m)))
    upper = exp(constants(prec).C * root)
    return BoundPair(lower, upper, target_id="p", valid_from=1)


def thm51_gap(m: int, precision_bits: Optional[int] = None) -> Enclosure:
    """4 sqrt(m+1) - 2 log(m+1) - 1/(3(m+1)) - 2 log(2 pi) - log 2000 - C sqrt(m+25)."""
    if m < 1:
        raise RangeError("thm51_gap needs m >= 1")
    prec = _prec(precision_bits)
    m1 = from_integer(m + 1, prec)
    return (
        4 * sqrt(m1)
        - 2 * log(m1)
        - Fraction(1, 3 * (m + 1))
        - 2 * log(2 * pi_const(prec))
        - log(from_integer(2000, prec))
        - constants(prec).C * sqrt(from_integer(m + 25, prec))
    )
