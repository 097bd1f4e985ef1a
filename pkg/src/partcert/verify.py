"""Range scans that classify every point of a finite check as holds,
violation or indeterminate.

Integer predicates (log-concavity, Chen's unit and refined inequalities,
strong log-concavity, Sun's q(n)) are decided in exact integer arithmetic.
Predicates with irrational coefficients go through enclosures whose
precision is doubled until the sign resolves or the cap is reached.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Union

from partcert import __version__
from partcert.bounds import (
    certify_sandwich,
    p2_bounds_simple,
    ratio_margin,
    t1_bounds,
    t1_value,
)
from partcert.decay import d_exact
from partcert.enclosure import (
    PRECISION_CAP,
    DomainError,
    Enclosure,
    Sign,
    certified_sign,
    cosh,
    default_precision,
    from_integer,
    pi_const,
    sinh,
    sqrt,
)
from partcert.exact import PartitionTable, default_table
from partcert.series import a_k_star, constants, mu

__all__ = [
    "CHECKS",
    "JANOSKI_KNOWN_COUNTEREXAMPLES",
    "CheckReport",
    "UnknownCheck",
    "Violation",
    "check_chen_reverse",
    "check_log_concavity",
    "check_strong_lc",
    "check_sun_q",
    "janoski_check",
    "janoski_margin",
    "janoski_reproduction",
    "parse_expect",
    "resolve_check",
    "scan",
]

Point = Union[int, tuple[int, int]]

JANOSKI_KNOWN_COUNTEREXAMPLES = frozenset({27, 36, 87, 744})
NORMALIZATIONS = ("star_over_sqrtk", "standard")


class UnknownCheck(KeyError):
    pass


@dataclass(frozen=True)
class Violation:
    point: Point
    margin: Enclosure


@dataclass
class CheckReport:
    check_id: str
    range: tuple[int, int]
    parameters: dict[str, Any]
    violations: list[Violation]
    indeterminate: list[Point]
    precision_bits: int
    checked: int = 0
    tool_version: str = __version__

    @property
    def passed(self) -> bool:
        return not self.violations and not self.indeterminate

    def violation_points(self) -> list[Point]:
        return [v.point for v in self.violations]

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "range": list(self.range),
            "parameters": self.parameters,
            "violations": [
                {"point": _point_json(v.point), **_margin_json(v.margin)} for v in self.violations
            ],
            "indeterminate": [_point_json(p) for p in self.indeterminate],
            "passed": self.passed,
            "tool_version": self.tool_version,
            "precision_bits": self.precision_bits,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _point_json(p: Point):
    return list(p) if isinstance(p, tuple) else p


def _margin_json(m: Enclosure) -> dict[str, Any]:
    if m.is_point() and m.lo == int(m.lo):
        v = int(m.lo)
        return {"margin_lo": v, "margin_hi": v}
    return {"margin_lo": m.lo_float(), "margin_hi": m.hi_float()}


def _table(table: Optional[PartitionTable]) -> PartitionTable:
    return default_table() if table is None else table


# -- exact predicates ----------------------------------------------------------


def _lc_margin(n: int, t: PartitionTable) -> int:
    return t[n] ** 2 - t[n - 1] * t[n + 1]


def check_log_concavity(n: int, table: Optional[PartitionTable] = None) -> Sign:
    """Sign of p(n)^2 - p(n-1) p(n+1)."""
    if n < 1:
        raise DomainError("log-concavity is checked for n >= 1")
    return Sign.of_int(_lc_margin(n, _table(table)))


def _chen_unit(n: int, t: PartitionTable) -> int:
    # p(n-1) p(n+1) (1 + 1/n) - p(n)^2, scaled by n
    return t[n - 1] * t[n + 1] * (n + 1) - n * t[n] ** 2


def _chen_refined_sign(n: int, t: PartitionTable) -> Sign:
    # sign of A (1 + 240/(24n)^(3/2)) - B with A = p(n-1)p(n+1), B = p(n)^2
    a = t[n - 1] * t[n + 1]
    b = t[n] ** 2
    if a >= b:
        return Sign.POSITIVE
    # 240 A / (24n)^(3/2) > B - A  <=>  (240 A)^2 > (B - A)^2 (24n)^3
    return Sign.of_int((240 * a) ** 2 - (b - a) ** 2 * (24 * n) ** 3)


def _chen_enclosure(n: int, t: PartitionTable, variant: str, prec: int) -> Enclosure:
    a = from_integer(t[n - 1] * t[n + 1], prec)
    b = from_integer(t[n] ** 2, prec)
    if variant == "sharp":
        nn = from_integer(n, prec)
        c = pi_const(prec) / (sqrt(from_integer(24, prec)) * nn * sqrt(nn))
    elif variant == "refined":
        s = from_integer(24 * n, prec)
        c = 240 / (s * sqrt(s))
    else:
        c = from_integer(1, prec) / n
    return a * (1 + c) - b


def _bits_for(t: PartitionTable, n: int) -> int:
    return 2 * t[n + 1].bit_length() + 64


def check_chen_reverse(n: int, variant: str = "unit", table: Optional[PartitionTable] = None,
                       precision_bits: Optional[int] = None,
                       cap: Optional[int] = None) -> Sign:
    """Sign of p(n-1) p(n+1) (1 + c(n)) - p(n)^2 for c in {1/n, 240/(24n)^1.5, pi/(sqrt24 n^1.5)}."""
    return _chen(n, variant, _table(table), precision_bits, cap)[0]


def _chen(n, variant, t, precision_bits, cap) -> tuple[Sign, Enclosure]:
    if n < 2:
        raise DomainError("Chen's inequality is checked for n >= 2")
    if variant == "unit":
        v = _chen_unit(n, t)
        return Sign.of_int(v), from_integer(v)
    if variant == "refined":
        sign = _chen_refined_sign(n, t)
        prec = max(default_precision(), _bits_for(t, n))
        return sign, _chen_enclosure(n, t, "refined", prec)
    if variant == "sharp":
        start = max(default_precision() if precision_bits is None else precision_bits,
                    _bits_for(t, n))
        return certified_sign(lambda p: _chen_enclosure(n, t, "sharp", p), start, cap)
    raise ValueError(f"unknown Chen variant {variant!r}")


def check_strong_lc(n: int, m: int, table: Optional[PartitionTable] = None) -> Sign:
    """Sign of p(n)^2 - p(n-m) p(n+m) for n > m > 1."""
    if not n > m > 1:
        raise DomainError("strong log-concavity needs n > m > 1")
    t = _table(table)
    return Sign.of_int(t[n] ** 2 - t[n - m] * t[n + m])


def _sun_margin(n: int, t: PartitionTable) -> int:
    # (q(n)^2 - q(n-1) q(n+1)) * n^2 (n-1)(n+1)
    return t[n] ** 2 * (n - 1) * (n + 1) - t[n - 1] * t[n + 1] * n * n


def check_sun_q(n: int, table: Optional[PartitionTable] = None) -> Sign:
    """Sign of q(n)^2 - q(n-1) q(n+1) with q(n) = p(n)/n."""
    if n < 2:
        raise DomainError("q(n-1) needs n >= 2")
    return Sign.of_int(_sun_margin(n, _table(table)))


# -- Janoski's inequality ------------------------------------------------------


def _floor_mu(n: int, prec: int) -> int:
    while True:
        m = mu(n, prec)
        lo, hi = math.floor(m.lo), math.floor(m.hi)
        if lo == hi:
            return int(lo)
        prec *= 2


def _janoski_terms(n: int, normalization: str, upper: int, prec: int) -> list[Enclosure]:
    """(1/(pi sqrt 2)) A_k(n) sqrt(k) d(n, k) for k = 3..upper."""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    t = Enclosure(Fraction(24 * n - 1, 24), precision_bits=prec)
    root_t = sqrt(t)
    c = constants(prec).C
    scale = 1 / (pi_const(prec) * sqrt(from_integer(2, prec)))
    out = []
    for k in range(3, upper + 1):
        arg = c * root_t / k
        d = c / (2 * k * t) * cosh(arg) - sinh(arg) / (2 * t * root_t)
        # A_k sqrt(k): A_k* under A_k = A_k*/sqrt k, and k A_k* under A_k = sqrt(k) A_k*
        weight = a_k_star(n, k, prec)
        if normalization == "standard":
            weight = weight * k
        out.append(scale * weight * d)
    return out


def janoski_margin(n: int, normalization: str = "standard",
                   precision_bits: Optional[int] = None, upper: str = "floor") -> Enclosure:
    """LHS - RHS of Janoski's inequality with the sum running k = 3..floor(C sqrt t)."""
    prec = default_precision() if precision_bits is None else precision_bits
    limit = _floor_mu(n, prec)
    if upper == "ceil":
        limit += 1
    if limit < 3:
        raise DomainError(f"summation limit {limit} < 3 at n={n}")
    terms = _janoski_terms(n, normalization, limit, prec)
    lhs = terms[0]
    for term in terms[1:]:
        lhs = lhs + term
    # C sqrt t equals mu(n)
    rhs = mu(n, prec) * terms[0]
    return lhs - rhs


def janoski_check(n: int, normalization: str = "standard",
                  precision_bits: Optional[int] = None, cap: Optional[int] = None,
                  upper: str = "floor") -> Sign:
    if n < 2:
        raise DomainError("Janoski's inequality is checked for n >= 2")
    return certified_sign(
        lambda p: janoski_margin(n, normalization, p, upper), precision_bits, cap
    )[0]


# -- scans -----------------------------------------------------------------------


@dataclass(frozen=True)
class _Check:
    default_range: tuple[int, int]
    min_point: int
    kind: str  # "single" or "triangle"
    evaluate: Optional[Callable[..., tuple[Sign, Enclosure]]] = None
    parameters: dict[str, Any] = field(default_factory=dict)


def _eval_lc(n, t, params):
    v = _lc_margin(n, t)
    return Sign.of_int(v), from_integer(v)


def _eval_sun(n, t, params):
    v = _sun_margin(n, t)
    return Sign.of_int(v), from_integer(v)


def _chen_eval(variant):
    def run(n, t, params):
        return _chen(n, variant, t, params.get("precision_bits"), params.get("precision_cap"))
    return run


def _eval_janoski(n, t, params):
    return certified_sign(
        lambda p: janoski_margin(n, params["normalization"], p),
        params.get("precision_bits"), params.get("precision_cap"),
    )


def _eval_prop_bounds(n, t, params):
    return certify_sandwich(
        lambda p: p2_bounds_simple(n, p),
        lambda p: d_exact(n, p, t),
        params.get("precision_bits"), params.get("precision_cap"),
    )


def _eval_lemma_t1(n, t, params):
    return certify_sandwich(
        lambda p: t1_bounds(n, p), lambda p: t1_value(n, p),
        params.get("precision_bits"), params.get("precision_cap"),
    )


def _eval_lemma_ratio(n, t, params):
    return certified_sign(
        lambda p: ratio_margin(n, p), params.get("precision_bits"), params.get("precision_cap")
    )


CHECKS: dict[str, _Check] = {
    "logconcave": _Check((1, 10_000), 1, "single", _eval_lc),
    "chen-reverse": _Check((2, 10_000), 2, "single", _chen_eval("unit")),
    "chen-refined": _Check((2, 10_000), 2, "single", _chen_eval("refined")),
    "chen-sharp": _Check((2, 8000), 2, "single", _chen_eval("sharp")),
    "strong": _Check((3, 1500), 3, "triangle"),
    "sun-q": _Check((2, 10_000), 2, "single", _eval_sun),
    "janoski": _Check((2, 1000), 2, "single", _eval_janoski,
                      {"normalization": "standard"}),
    "prop-bounds": _Check((2600, 10_000), 2600, "single", _eval_prop_bounds),
    "lemma-t1": _Check((50, 5000), 50, "single", _eval_lemma_t1),
    "lemma-ratio": _Check((10, 5000), 10, "single", _eval_lemma_ratio),
}

_ALIASES = {
    "log_concavity": "logconcave",
    "chen_reverse": "chen-reverse",
    "chen_unit": "chen-reverse",
    "chen_refined": "chen-refined",
    "chen_sharp": "chen-sharp",
    "strong_lc": "strong",
    "sun_q": "sun-q",
    "prop_bounds": "prop-bounds",
    "lemma_t1": "lemma-t1",
    "lemma_ratio": "lemma-ratio",
}


def resolve_check(check_id: str) -> str:
    name = _ALIASES.get(check_id, check_id)
    if name not in CHECKS:
        raise UnknownCheck(check_id)
    return name


def scan(check_id: str, lo: Optional[int] = None, hi: Optional[int] = None,
         table: Optional[PartitionTable] = None, **parameters: Any) -> CheckReport:
    """Classify every point of ``[lo, hi]`` (for ``strong``: every 1 < m < n, lo <= n <= hi)."""
    name = resolve_check(check_id)
    check = CHECKS[name]
    lo = check.default_range[0] if lo is None else max(lo, check.min_point)
    hi = check.default_range[1] if hi is None else hi
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    t = _table(table)
    params = {**check.parameters, **{k: v for k, v in parameters.items() if v is not None}}
    prec = params.get("precision_bits") or default_precision()
    params.setdefault("precision_cap", PRECISION_CAP)
    violations: list[Violation] = []
    indeterminate: list[Point] = []

    if check.kind == "triangle":
        t.extend(2 * hi)
        checked = 0
        for n in range(lo, hi + 1):
            sq = t[n] ** 2
            for m in range(2, n):
                checked += 1
                v = sq - t[n - m] * t[n + m]
                if v <= 0:
                    violations.append(Violation((n, m), from_integer(v)))
    else:
        t.extend(hi + 1)
        checked = hi - lo + 1
        for n in range(lo, hi + 1):
            sign, margin = check.evaluate(n, t, params)
            if sign is Sign.POSITIVE:
                continue
            if sign is Sign.INDETERMINATE:
                indeterminate.append(n)
            else:
                violations.append(Violation(n, margin))

    shown = {k: v for k, v in params.items() if k != "precision_bits"}
    if name == "strong":
        shown["region"] = "1 < m < n, lo <= n <= hi"
    if name == "janoski":
        shown["sum_limit"] = "floor(C sqrt(t))"
        shown["reproduces_known_counterexamples"] = (
            set(v.point for v in violations) == set(JANOSKI_KNOWN_COUNTEREXAMPLES))
        shown["ceil_sensitivity"] = _janoski_ceil_notes(
            [v.point for v in violations], lo, hi, params, prec)
    return CheckReport(name, (lo, hi), shown, violations, indeterminate, prec, checked)


def _janoski_ceil_notes(violating, lo, hi, params, prec) -> list[dict[str, Any]]:
    """Points whose sign flips when the sum runs to ceil(C sqrt t) instead of floor."""
    notes = []
    bad = set(violating)
    for n in range(lo, hi + 1):
        ceil_sign = janoski_check(n, params["normalization"], prec,
                                  params.get("precision_cap"), upper="ceil")
        floor_holds = n not in bad
        if (ceil_sign is Sign.POSITIVE) != floor_holds:
            notes.append({"point": n, "ceil_sign": ceil_sign.name.lower()})
    return notes


def janoski_reproduction(lo: int = 2, hi: int = 1000,
                         precision_bits: Optional[int] = None) -> dict[str, Any]:
    """Violation sets under both normalizations, and which ones match the published list."""
    sets = {}
    for norm in NORMALIZATIONS:
        report = scan("janoski", lo, hi, normalization=norm, precision_bits=precision_bits)
        sets[norm] = report.violation_points()
    matching = [norm for norm, pts in sets.items() if set(pts) == JANOSKI_KNOWN_COUNTEREXAMPLES]
    return {"violations": sets, "matching_normalizations": matching}


def parse_expect(text: str) -> set[int]:
    """Expected violation sets: odd-le-25, even-lt-45, none, or a comma list."""
    text = text.strip()
    if text == "odd-le-25":
        return set(range(1, 26, 2))
    if text == "even-lt-45":
        return set(range(2, 45, 2))
    if text == "none":
        return set()
    try:
        return {int(tok) for tok in text.split(",") if tok.strip()}
    except ValueError:
        raise ValueError(f"cannot parse expected violation set {text!r}") from None
