"""Second log-differences of p(n) and their leading-order models.

``D(n) = 2 log p(n) - log p(n-1) - log p(n+1)`` is evaluated from exact
table values.  Its leading behaviour is ``(C/4) n^(-3/2)``; the
``L_expansion`` family adds even-order Taylor corrections of the leading
term and of the curvature of ``log mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional

from partcert.enclosure import (
    DomainError,
    Enclosure,
    default_precision,
    from_integer,
    log,
    log_integer,
    pi_const,
    sqrt,
)
from partcert.exact import PartitionTable, default_table
from partcert.series import constants

__all__ = [
    "DERIVATIVE_CAP",
    "DecaySample",
    "UnsupportedOrder",
    "L_expansion",
    "d_exact",
    "figure1_series",
    "h1_printed",
    "h_terms",
    "normalized_decay",
    "q2_exact",
]

DERIVATIVE_CAP = 6


class UnsupportedOrder(ValueError):
    pass


def _prec(precision_bits: Optional[int]) -> int:
    return default_precision() if precision_bits is None else precision_bits


def d_exact(n: int, precision_bits: Optional[int] = None,
            table: Optional[PartitionTable] = None) -> Enclosure:
    if n < 2:
        raise DomainError("D(n) is evaluated for n >= 2")
    prec = _prec(precision_bits)
    table = default_table() if table is None else table
    return (
        2 * log_integer(table[n], prec)
        - log_integer(table[n - 1], prec)
        - log_integer(table[n + 1], prec)
    )


def q2_exact(n: int, precision_bits: Optional[int] = None,
             table: Optional[PartitionTable] = None) -> Enclosure:
    """2 log q(n) - log q(n-1) - log q(n+1) with q(n) = p(n)/n."""
    prec = _prec(precision_bits)
    correction = log(Enclosure(Fraction(n * n, (n - 1) * (n + 1)), precision_bits=prec))
    return d_exact(n, prec, table) - correction


def _scale(prec: int) -> Enclosure:
    """pi / sqrt(24), which equals C/4."""
    return pi_const(prec) / sqrt(from_integer(24, prec))


def normalized_decay(n: int, precision_bits: Optional[int] = None,
                     table: Optional[PartitionTable] = None) -> Enclosure:
    """n^(3/2) D(n) / (pi/sqrt 24); tends to 1."""
    prec = _prec(precision_bits)
    nn = from_integer(n, prec)
    return d_exact(n, prec, table) * nn * sqrt(nn) / _scale(prec)


@dataclass(frozen=True)
class DecaySample:
    n: int
    d_value: Enclosure
    normalized: Enclosure


def figure1_series(n_from: int, n_to: int, precision_bits: Optional[int] = None,
                   table: Optional[PartitionTable] = None) -> list[DecaySample]:
    if not 2 <= n_from <= n_to:
        raise DomainError("figure1_series needs 2 <= n_from <= n_to")
    prec = _prec(precision_bits)
    table = default_table() if table is None else table
    table.extend(n_to + 1)
    scale = _scale(prec)
    out = []
    for n in range(n_from, n_to + 1):
        d = d_exact(n, prec, table)
        nn = from_integer(n, prec)
        out.append(DecaySample(n, d, d * nn * sqrt(nn) / scale))
    return out


# -- leading terms and their Taylor corrections -----------------------------


def _h1_coeff(j: int) -> Fraction:
    """j-th derivative factor of x^(-3/2): prod_{i<j} (-3/2 - i)."""
    c = Fraction(1)
    for i in range(j):
        c *= Fraction(-3, 2) - i
    return c


def _h1_derivative(x: Enclosure, j: int) -> Enclosure:
    # (C/4) x^(-3/2 - j)
    return constants(x.precision_bits).C / 4 * _h1_coeff(j) / (x ** (j + 1) * sqrt(x))


def _h2_derivative(x: Enclosure, j: int) -> Enclosure:
    # d^j/dx^j of -288 (24x - 1)^(-2)
    coeff = -288 * (-1) ** j * factorial(j + 1) * 24**j
    return coeff / (24 * x - 1) ** (j + 2)


def _as_enclosure(x, prec: int) -> Enclosure:
    if isinstance(x, Enclosure):
        return x
    return Enclosure(Fraction(x), precision_bits=prec)


def h_terms(x, precision_bits: Optional[int] = None) -> tuple[Enclosure, Enclosure]:
    """(h1(x), h2(x)) = ((C/4) x^(-3/2), -288/(24x - 1)^2)."""
    prec = _prec(precision_bits)
    xe = _as_enclosure(x, prec)
    if not (xe - 1).is_positive():
        raise DomainError("h_terms needs x > 1")
    return _h1_derivative(xe, 0), _h2_derivative(xe, 0)


def h1_printed(x, precision_bits: Optional[int] = None) -> Enclosure:
    """4 / (C x^(3/2)), the reciprocal normalization of the leading term."""
    prec = _prec(precision_bits)
    xe = _as_enclosure(x, prec)
    return 4 / (constants(prec).C * xe * sqrt(xe))


def L_expansion(n: int, k: int, sign: str, precision_bits: Optional[int] = None) -> Enclosure:
    """Even-order Taylor sums about x0 = n of the shifted leading terms.

    plus:  sum_{j<=k} (h1 + h2)^(2j)(n) / (2j)!
    minus: sum_{j<=k} h1^(2j)(n) / (2j)!  +  sum_{j<k} h2^(2j)(n) / (2j)!
    so that L_0^- = h1(n).
    """
    if n < 2:
        raise DomainError("L_expansion needs n >= 2")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if 2 * k > DERIVATIVE_CAP:
        raise UnsupportedOrder(f"order {2 * k} exceeds the derivative cap {DERIVATIVE_CAP}")
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    prec = _prec(precision_bits)
    x = from_integer(n, prec)
    h2_terms = k + 1 if sign == "plus" else k
    total = from_integer(0, prec)
    for j in range(k + 1):
        total = total + _h1_derivative(x, 2 * j) / factorial(2 * j)
    for j in range(h2_terms):
        total = total + _h2_derivative(x, 2 * j) / factorial(2 * j)
    return total
