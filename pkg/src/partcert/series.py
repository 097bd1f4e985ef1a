"""Rademacher's series for p(n) with Lehmer's truncation bound.

Every quantity is returned as an :class:`~partcert.enclosure.Enclosure`.
``mu(n) = (pi/6) sqrt(24n - 1)`` appears in every term; ``big_T`` is the sum
of the k = 1 and k = 2 exponential contributions and ``rademacher_enclosure``
brackets p(n) between the truncated series plus or minus Lehmer's bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

from partcert.enclosure import (
    PRECISION_CAP,
    DomainError,
    Enclosure,
    cos_pi,
    default_precision,
    exp,
    from_integer,
    from_ratio,
    log,
    pi_const,
    sinh,
    sqrt,
    unique_integer,
)

__all__ = [
    "HRConstants",
    "ResolutionError",
    "SeriesTerm",
    "a_k_star",
    "big_T",
    "constants",
    "dedekind_sum",
    "lehmer_R2_bound",
    "log_T_closed",
    "mu",
    "p_via_series",
    "rademacher_enclosure",
    "series_term",
    "x_term",
]

HALF = Fraction(1, 2)


class ResolutionError(RuntimeError):
    """The certified window never narrowed to a single integer."""


def _prec(precision_bits: Optional[int]) -> int:
    return default_precision() if precision_bits is None else precision_bits


@dataclass(frozen=True)
class HRConstants:
    C: Enclosure  # pi * sqrt(2/3)
    d: Enclosure  # pi^2 / (6 sqrt 3)


def constants(precision_bits: Optional[int] = None) -> HRConstants:
    return _constants(_prec(precision_bits))


@lru_cache(maxsize=64)
def _constants(prec: int) -> HRConstants:
    pi = pi_const(prec)
    c = pi * sqrt(from_ratio(2, 3, prec))
    d = pi * pi / (6 * sqrt(from_integer(3, prec)))
    return HRConstants(C=c, d=d)


def mu(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    if n < 1:
        raise DomainError("mu(n) needs n >= 1")
    return _mu(n, _prec(precision_bits))


@lru_cache(maxsize=8192)
def _mu(n: int, prec: int) -> Enclosure:
    return pi_const(prec) * sqrt(from_integer(24 * n - 1, prec)) / 6


def big_T(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """(sqrt 12/(24n-1)) [(1 - 1/mu) e^mu + ((-1)^n/sqrt 2) e^(mu/2)]."""
    prec = _prec(precision_bits)
    m = mu(n, prec)
    lead = (1 - 1 / m) * exp(m)
    second = exp(m * HALF) / sqrt(from_integer(2, prec))
    bracket = lead + second if n % 2 == 0 else lead - second
    return sqrt(from_integer(12, prec)) / (24 * n - 1) * bracket


def x_term(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """Relative size of the k=2 piece: T(n) = d (mu-1) e^mu / mu^3 * (1 + x_n).

    x_n = (-1)^n e^(-mu/2) mu / (sqrt 2 (mu - 1)).
    """
    if n < 2:
        raise DomainError("x_term needs n >= 2 so that mu > 1")
    prec = _prec(precision_bits)
    m = mu(n, prec)
    mag = exp(-m * HALF) * m / (sqrt(from_integer(2, prec)) * (m - 1))
    return mag if n % 2 == 0 else -mag


def log_T_closed(n: int, precision_bits: Optional[int] = None) -> Enclosure:
    """log T(n) = log d + mu + log(mu - 1) - 3 log mu + log(1 + x_n)."""
    prec = _prec(precision_bits)
    m = mu(n, prec)
    one_plus_x = 1 + x_term(n, prec)
    if not one_plus_x.is_positive():
        raise DomainError(f"1 + x_n is not certainly positive at n={n}")
    return log(constants(prec).d) + m + log(m - 1) - 3 * log(m) + log(one_plus_x)


def lehmer_R2_bound(n: int, N: int, precision_bits: Optional[int] = None) -> Enclosure:
    """(pi^2 N^(-2/3)/sqrt 3) [(N/mu)^3 sinh(mu/N) + 1/6 - (N/mu)^2].

    Only the upper endpoint is a valid bound on |R_2(n, N)|.
    """
    if n < 1 or N < 1:
        raise DomainError("Lehmer's bound needs n, N >= 1")
    prec = _prec(precision_bits)
    m = mu(n, prec)
    pi = pi_const(prec)
    ratio = N / m
    bracket = ratio**3 * sinh(m / N) + Fraction(1, 6) - ratio**2
    n_pow = exp(log(from_integer(N, prec)) * Fraction(-2, 3)) if N > 1 else from_integer(1, prec)
    return pi * pi * n_pow / sqrt(from_integer(3, prec)) * bracket


def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h, k) by the reciprocity law s(h,k) + s(k,h) = (h/k + k/h + 1/(hk))/12 - 1/4."""
    if k < 1 or h < 0 or h >= k:
        raise DomainError("dedekind_sum needs k >= 1 and 0 <= h < k")
    if gcd(h, k) != 1:
        raise DomainError(f"gcd({h}, {k}) != 1")
    return _dedekind(h, k)


def _dedekind(h: int, k: int) -> Fraction:
    total = Fraction(0)
    sign = 1
    while k > 1:
        h %= k
        if h == 0:
            break
        total += sign * (Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4))
        sign = -sign
        h, k = k, h
    return total


@lru_cache(maxsize=None)
def _dedekind_row(k: int) -> tuple[tuple[int, Fraction], ...]:
    return tuple((h, _dedekind(h, k)) for h in range(k) if gcd(h, k) == 1)


@lru_cache(maxsize=200_000)
def _a_k_sum(k: int, residue: int, prec: int) -> Enclosure:
    """A_k(n) = sum over h coprime to k of cos(pi s(h,k) - 2 pi h n / k)."""
    total = from_integer(0, prec)
    for h, s in _dedekind_row(k):
        total = total + cos_pi(s - Fraction(2 * h * residue, k), prec)
    return total


def a_k_star(n: int, k: int, precision_bits: Optional[int] = None) -> Enclosure:
    """A_k*(n) = A_k(n)/sqrt k with the standard Rademacher exponential sum A_k."""
    if k < 1:
        raise DomainError("k must be positive")
    prec = _prec(precision_bits)
    if k == 1:
        return from_integer(1, prec)
    if k == 2:
        v = 1 / sqrt(from_integer(2, prec))
        return v if n % 2 == 0 else -v
    return _a_k_sum(k, n % k, prec) / sqrt(from_integer(k, prec))


@dataclass(frozen=True)
class SeriesTerm:
    k: int
    a_k_star: Enclosure
    value: Enclosure  # (1 - k/mu) e^(mu/k) + (1 + k/mu) e^(-mu/k)


def series_term(n: int, k: int, precision_bits: Optional[int] = None) -> SeriesTerm:
    prec = _prec(precision_bits)
    m = mu(n, prec)
    r = k / m
    e = exp(m / k)
    value = (1 - r) * e + (1 + r) / e
    return SeriesTerm(k=k, a_k_star=a_k_star(n, k, prec), value=value)


def rademacher_enclosure(n: int, N: int, precision_bits: Optional[int] = None) -> Enclosure:
    """Truncated series through k = N, widened by Lehmer's bound on both sides."""
    if n < 1 or N < 1:
        raise DomainError("rademacher_enclosure needs n, N >= 1")
    prec = _prec(precision_bits)
    total = from_integer(0, prec)
    for k in range(1, N + 1):
        term = series_term(n, k, prec)
        if term.a_k_star.is_point() and term.a_k_star.lo == 0:
            continue
        total = total + term.a_k_star * term.value
    partial = sqrt(from_integer(12, prec)) / (24 * n - 1) * total
    return partial.widened(lehmer_R2_bound(n, N, prec).hi)


def _initial_precision(n: int) -> int:
    # log2 p(n) is about pi sqrt(2n/3) / ln 2; keep 64 bits of headroom
    bits = int(math.pi * math.sqrt(2 * n / 3) / math.log(2)) + 64
    return max(default_precision(), bits)


def p_via_series(n: int, max_terms: int = 1 << 12, precision_cap: Optional[int] = None) -> int:
    """Exact p(n) from the certified series window.

    N starts at max(2, ceil(sqrt(n)/2)) and doubles, together with the
    working precision, until the window holds a single integer.
    """
    if n < 1:
        raise DomainError("p_via_series needs n >= 1")
    cap = PRECISION_CAP if precision_cap is None else precision_cap
    N = max(2, math.ceil(math.sqrt(n) / 2))
    prec = _initial_precision(n)
    while N <= max_terms and prec <= cap:
        k = unique_integer(rademacher_enclosure(n, N, prec))
        if k is not None:
            return k
        N *= 2
        prec *= 2
    raise ResolutionError(f"series window for p({n}) did not resolve")
