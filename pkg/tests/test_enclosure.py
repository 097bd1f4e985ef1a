from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from partcert.enclosure import (
    DomainError,
    Enclosure,
    Sign,
    binary,
    certified_sign,
    cos_pi,
    cosh,
    default_precision,
    exp,
    from_integer,
    from_ratio,
    hull,
    log,
    log_integer,
    pi_const,
    sinh,
    sqrt,
    unary,
    unique_integer,
)

ORACLE_BITS = 2000

small = st.fractions(min_value=-40, max_value=40, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6, max_denominator=10**6)
precisions = st.sampled_from([16, 24, 53, 64, 128, 256])


def _oracle(fn, x: Fraction) -> mpmath.mpf:
    with mpmath.workprec(ORACLE_BITS):
        return fn(mpmath.mpf(x.numerator) / x.denominator)


def _holds(enc: Enclosure, value) -> bool:
    with mpmath.workprec(ORACLE_BITS):
        return enc.lo <= value <= enc.hi


def _interval(a: Fraction, b: Fraction, prec: int) -> Enclosure:
    return Enclosure(min(a, b), max(a, b), prec)


@given(small, small, small, small, precisions, st.sampled_from(["add", "sub", "mul", "div"]))
def test_binary_contains_exact_result(a, b, c, d, prec, op):
    x, y = _interval(a, b, prec), _interval(c, d, prec)
    if op == "div":
        assume(not (min(c, d) <= 0 <= max(c, d)))
    fn = {"add": lambda u, v: u + v, "sub": lambda u, v: u - v,
          "mul": lambda u, v: u * v, "div": lambda u, v: u / v}[op]
    z = binary(op, x, y)
    for u in (x.lo_fraction(), x.hi_fraction(), (x.lo_fraction() + x.hi_fraction()) / 2):
        for v in (y.lo_fraction(), y.hi_fraction()):
            assert z.lo_fraction() <= fn(u, v) <= z.hi_fraction()


@given(small, small, precisions, st.sampled_from(["exp", "sinh", "cosh"]))
def test_entire_functions_contain_oracle(a, b, prec, fn):
    x = _interval(a, b, prec)
    z = unary(fn, x)
    oracle = getattr(mpmath, fn)
    for u in (x.lo_fraction(), x.hi_fraction(), (x.lo_fraction() + x.hi_fraction()) / 2):
        assert _holds(z, _oracle(oracle, u))


@given(positive, positive, precisions, st.sampled_from(["log", "sqrt"]))
def test_positive_functions_contain_oracle(a, b, prec, fn):
    x = _interval(a, b, prec)
    z = unary(fn, x)
    oracle = getattr(mpmath, fn)
    for u in (x.lo_fraction(), x.hi_fraction()):
        assert _holds(z, _oracle(oracle, u))


@given(st.fractions(min_value=-50, max_value=50, max_denominator=5000), precisions)
def test_cos_pi_contains_oracle(r, prec):
    with mpmath.workprec(ORACLE_BITS):
        value = mpmath.cospi(mpmath.mpf(r.numerator) / r.denominator)
    assert _holds(cos_pi(r, prec), value)


@given(st.integers(min_value=1, max_value=10**400), precisions)
def test_log_integer_contains_oracle(v, prec):
    with mpmath.workprec(ORACLE_BITS):
        assert _holds(log_integer(v, prec), mpmath.log(v))


@given(small, small, st.sampled_from(["exp", "sinh", "cosh"]))
def test_refinement_nests(a, b, fn):
    # point inputs: doubling the precision yields a sub-enclosure
    x = min(a, b)
    coarse = unary(fn, Enclosure(x, precision_bits=64))
    fine = unary(fn, Enclosure(x, precision_bits=128))
    assert fine.subset_of(coarse)
    assert fine.width() <= coarse.width()


@given(positive)
def test_refinement_nests_log_sqrt(x):
    for fn in ("log", "sqrt"):
        coarse = unary(fn, Enclosure(x, precision_bits=53))
        fine = unary(fn, Enclosure(x, precision_bits=200))
        assert fine.subset_of(coarse)


def test_pi_encloses_and_tightens():
    with mpmath.workprec(ORACLE_BITS):
        ref = +mpmath.pi
    widths = []
    for prec in (16, 64, 256, 1024):
        enc = pi_const(prec)
        assert _holds(enc, ref)
        widths.append(enc.width())
    assert widths == sorted(widths, reverse=True)
    assert pi_const(1024).subset_of(pi_const(64))


def test_exact_values():
    assert exp(from_integer(0)) == from_integer(1)
    assert cos_pi(Fraction(1, 2)).is_point() and cos_pi(Fraction(1, 2)).lo == 0
    assert cos_pi(Fraction(7, 3)).lo_fraction() == Fraction(1, 2)
    assert sqrt(from_integer(49, 64)) == from_integer(7)


def test_cosh_never_below_one():
    z = cosh(Enclosure(Fraction(-1, 10**30), Fraction(1, 10**30), 64))
    assert z.lo >= 1


def test_sinh_sign_follows_argument():
    assert sinh(from_ratio(1, 1000)).is_positive()
    assert sinh(from_ratio(-1, 1000)).is_negative()


def test_domain_errors():
    with pytest.raises(DomainError):
        log(Enclosure(-1, 1))
    with pytest.raises(DomainError):
        sqrt(Enclosure(-1, 1))
    with pytest.raises(DomainError):
        binary("div", from_integer(1), Enclosure(-1, 1))
    with pytest.raises(DomainError):
        from_ratio(1, 0)
    with pytest.raises(ValueError):
        unary("tan", from_integer(1))
    with pytest.raises(ValueError):
        Enclosure(2, 1)


def test_sign_and_comparisons():
    assert Enclosure(1, 2).sign() is Sign.POSITIVE
    assert Enclosure(-2, -1).sign() is Sign.NEGATIVE
    assert Enclosure(0).sign() is Sign.ZERO
    assert Enclosure(-1, 1).sign() is Sign.INDETERMINATE
    assert Enclosure(1, 2) < Enclosure(3, 4)
    assert not Enclosure(1, 3) < Enclosure(2, 4)
    assert Fraction(3, 2) in Enclosure(1, 2)


def test_hull_and_unique_integer():
    h = hull(Enclosure(1, 2), Enclosure(5, 6))
    assert h.lo == 1 and h.hi == 6
    assert unique_integer(Enclosure(Fraction(41, 10), Fraction(49, 10))) is None
    assert unique_integer(Enclosure(Fraction(39, 10), Fraction(41, 10))) == 4
    assert unique_integer(Enclosure(Fraction(3, 10), Fraction(22, 10))) is None


def test_outward_floats():
    e = from_ratio(1, 3, 200)
    assert e.lo_float() <= 1 / 3 <= e.hi_float()
    assert e.lo_float() < e.hi_float()


def test_certified_sign_raises_precision():
    # exp(1) - e_approx needs more than 64 bits to resolve
    with mpmath.workprec(400):
        man, e = mpmath.e.man_exp
    approx_frac = Fraction(man, 2 ** -e) - Fraction(1, 2**150)

    def diff(prec):
        return exp(from_integer(1, prec)) - Enclosure(approx_frac, precision_bits=prec)

    sign, enc = certified_sign(diff, 64)
    assert sign is Sign.POSITIVE and enc.precision_bits >= 256


def test_certified_sign_gives_up_at_cap():
    sign, _ = certified_sign(lambda p: Enclosure(-1, 1, p), 64, cap=256)
    assert sign is Sign.INDETERMINATE


def test_precision_env(monkeypatch):
    monkeypatch.setenv("PARTCERT_PRECISION_BITS", "200")
    assert default_precision() == 200
    assert pi_const().precision_bits == 200
    monkeypatch.setenv("PARTCERT_PRECISION_BITS", "8")
    with pytest.raises(ValueError):
        default_precision()
