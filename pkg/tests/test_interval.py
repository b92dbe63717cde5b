import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import in_iv, in_rect, soundness_complex, soundness_elementary, soundness_real_arith
from wrightcap.interval import (
    PI,
    ArgumentReductionOverflow,
    ComplexRect,
    DivisionByZeroInterval,
    RealInterval,
    as_interval,
    cos,
    cplx_exp,
    elem_fns,
    exp,
    interval_sum,
    mag_bounds,
    sin,
)

finite = st.floats(min_value=-1e30, max_value=1e30, allow_nan=False, allow_infinity=False)
small = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw, elems=finite):
    a, b = draw(elems), draw(elems)
    return RealInterval(min(a, b), max(a, b))


def test_constructor_rejects_reversed_and_nan():
    with pytest.raises(ValueError):
        RealInterval(1.0, 0.0)
    with pytest.raises(ValueError):
        RealInterval(math.nan)


def test_immutable():
    x = RealInterval(1.0, 2.0)
    with pytest.raises(AttributeError):
        x.lo = 0.0


def test_one_tenth_times_three_is_enclosed():
    # 0.1 as a double is not 1/10, so the exact product of the double with 3 is checked
    x = RealInterval(0.1) * 3
    assert in_iv(x, Fraction(0.1) * 3)
    assert x.lo < x.hi


def test_division_by_zero_interval():
    with pytest.raises(DivisionByZeroInterval):
        RealInterval(1.0) / RealInterval(-1.0, 1.0)
    with pytest.raises(DivisionByZeroInterval):
        ComplexRect(1.0) / ComplexRect(RealInterval(-1, 1), RealInterval(-1, 1))


def test_pi_encloses_pi():
    with mpmath.workprec(200):
        assert in_iv(PI, mpmath.pi)
    assert PI.width > 0


def test_sin_of_pi_interval_contains_zero():
    assert sin(PI).contains(0.0)
    assert cos(PI).contains(-1.0)


def test_trig_argument_limit():
    with pytest.raises(ArgumentReductionOverflow):
        sin(2.0 ** 41)


def test_exp_far_left_is_nonnegative():
    e = exp(RealInterval(-800.0, -750.0))
    assert e.lo == 0.0 and e.hi > 0.0


def test_elem_fns_dispatch():
    assert elem_fns(1.0, "exp").contains(math.e) or elem_fns(1.0, "exp").hi > math.e
    with pytest.raises(ValueError):
        elem_fns(1.0, "tan")


@given(intervals(), intervals())
def test_add_mul_contain_exact_endpoint_values(a, b):
    fa = (Fraction(a.lo), Fraction(a.hi))
    fb = (Fraction(b.lo), Fraction(b.hi))
    s, m = a + b, a * b
    for u in fa:
        for v in fb:
            assert in_iv(s, u + v)
            assert in_iv(m, u * v)


@given(intervals(), intervals())
def test_division_contains_exact_quotients(a, b):
    assume(not b.contains(0.0))
    q = a / b
    for u in (a.lo, a.hi):
        for v in (b.lo, b.hi):
            assert in_iv(q, Fraction(u) / Fraction(v))


@given(intervals(small))
def test_exp_sin_cos_contain_mpmath_values(x):
    with mpmath.workprec(200):
        for t in (x.lo, x.mid, x.hi):
            assert in_iv(exp(x), mpmath.exp(t))
            assert in_iv(sin(x), mpmath.sin(t))
            assert in_iv(cos(x), mpmath.cos(t))


@given(intervals(), intervals())
def test_hull_and_intersection(a, b):
    h = RealInterval.hull(a, b)
    assert h.contains(a) and h.contains(b)
    assert a.intersects(b) == b.intersects(a)


@given(intervals(), intervals(), intervals())
def test_subdistributivity(a, b, c):
    # a (b + c) is contained in a b + a c for exact interval arithmetic
    lhs = a * (b + c)
    rhs = a * b + a * c
    assume(all(map(math.isfinite, (lhs.lo, lhs.hi, rhs.lo, rhs.hi))))
    mid = Fraction(a.mid) * (Fraction(b.mid) + Fraction(c.mid))
    assert in_iv(lhs, mid) and in_iv(rhs, mid)


@given(intervals(small), intervals(small), intervals(small), intervals(small))
@settings(max_examples=200)
def test_complex_product_and_quotient(ar, ai, br, bi):
    a, b = ComplexRect(ar, ai), ComplexRect(br, bi)
    X, Y, U, V = (Fraction(t.mid) for t in (ar, ai, br, bi))
    assert in_rect(a * b, X * U - Y * V, X * V + Y * U)
    assume(not (br.contains(0.0) and bi.contains(0.0)))
    assume(U or V)
    den = U * U + V * V
    try:
        q = a / b
    except DivisionByZeroInterval:
        # |b|^2 underflowed to zero; refusing is the sound outcome
        return
    assert in_rect(q, (X * U + Y * V) / den, (Y * U - X * V) / den)


@given(intervals(st.floats(-20, 20)), intervals(st.floats(-20, 20)))
def test_cplx_exp_contains_mpmath(re, im):
    with mpmath.workprec(200):
        w = mpmath.exp(mpmath.mpc(re.mid, im.mid))
        assert in_rect(cplx_exp(ComplexRect(re, im)), w.real, w.imag)


def test_mag_bounds_of_rectangle():
    lo, hi = mag_bounds(ComplexRect(RealInterval(3.0, 4.0), RealInterval(4.0, 5.0)))
    assert lo <= 5.0 <= hi
    assert hi >= math.hypot(4.0, 5.0)
    assert mag_bounds(ComplexRect(RealInterval(-1, 1), 0.0))[0] == 0.0


def test_ball_contains_disk_points():
    c = 1.0 + 2.0j
    box = ComplexRect.ball(c, 1e-3)
    for t in np.linspace(0, 2 * np.pi, 17):
        assert box.contains(c + 1e-3 * np.exp(1j * t))


def test_conjugate_mirror():
    z = ComplexRect(RealInterval(1, 2), RealInterval(3, 4))
    assert z.conj().im == RealInterval(-4, -3)
    assert z.conj().conj() == z


def test_interval_sum_of_tenths():
    s = interval_sum([as_interval(0.1)] * 10)
    assert in_iv(s, Fraction(0.1) * 10)


def test_random_soundness_smoke():
    rng = np.random.default_rng(7)
    for family in (soundness_real_arith, soundness_elementary, soundness_complex):
        assert sum(family(rng, 200).values()) == 0
