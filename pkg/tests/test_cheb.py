import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import in_iv, in_rect, mp_cheb_matrix, mp_delta_n
from wrightcap.cheb import (
    assemble_an_float,
    assemble_an_interval,
    blowup_vector,
    build_scheme,
    chebyshev_nodes,
    delta_n,
    delta_n_derivs,
)
from wrightcap.interval import ComplexRect, RealInterval
from wrightcap.linalg import NotVerifiablyInvertible


def test_n1_scheme_by_hand():
    s = build_scheme(1, 2.0)
    assert [t.lo for t in s.nodes] == [0.0, -1.0]
    assert s.D.contains(np.array([[-1.0]])).all()
    assert s.D1.contains(np.array([-1.0])).all()
    np.testing.assert_array_equal(assemble_an_float(s), [[0.0, -2.0], [1.0, -1.0]])


def test_n2_middle_node():
    assert chebyshev_nodes(2)[1].contains(-0.5)


@pytest.mark.parametrize("n", [3, 7, 10])
def test_nodes_pinned_and_decreasing(n):
    nodes = chebyshev_nodes(n)
    assert nodes[0] == RealInterval(0.0) and nodes[n] == RealInterval(-1.0)
    assert all(a.lo > b.hi for a, b in zip(nodes, nodes[1:]))


@pytest.mark.parametrize("n", [2, 5, 10, 16])
def test_d_matches_barycentric_oracle(n):
    s = build_scheme(n, 2.0)
    _, ref = mp_cheb_matrix(n, dps=40)
    for k in range(n + 1):
        for j in range(n + 1):
            assert in_iv(s.D_full.rect((k, j)).re, ref[k, j])
    # tight: a few ulps at most
    assert np.max(s.D.rad()) < 1e-12


@pytest.mark.parametrize("n", [4, 10])
def test_row_sum_identity_encloses_zero(n):
    s = build_scheme(n, 2.0)
    rows = s.D_full.sum(axis=-1)
    assert np.all(rows.contains(np.zeros(n + 1)))


def test_d_differentiates_polynomials_exactly():
    n = 10
    s = build_scheme(n, 2.0)
    th = np.array([t.mid for t in s.nodes])
    for deg in range(n + 1):
        vals = th ** deg
        der = deg * th ** (deg - 1) if deg else np.zeros_like(th)
        np.testing.assert_allclose(s.D_full.mid().real @ vals, der, atol=1e-10)


def test_norms_of_d10():
    s = build_scheme(10, 2.0)
    # column sums of |D| computed independently at 40 digits
    _, ref = mp_cheb_matrix(10, 40)
    cols = [sum(abs(ref[k, j]) for k in range(1, 11)) for j in range(1, 11)]
    rows = [sum(abs(ref[k, j]) for j in range(1, 11)) for k in range(1, 11)]
    assert s.norm_D("one") >= float(max(cols))
    assert s.norm_D("one") == pytest.approx(float(max(cols)), rel=1e-13)
    assert s.norm_D("inf") == pytest.approx(float(max(rows)), rel=1e-13)
    assert s.norm_ones("one") == 10 and s.norm_ones("inf") == 1
    with pytest.raises(ValueError):
        s.norm_D("two")


@pytest.mark.parametrize("z, expected", [(0.0, 1.0), (1.0, 0.5)])
def test_blowup_n1_closed_form(z, expected):
    v = blowup_vector(build_scheme(1, 2.0), z)
    assert v.contains(np.array([expected])).all()


def test_delta1_and_derivatives_at_zero():
    s = build_scheme(1, 2.0)
    assert delta_n(s, 0.0).contains(2.0)
    d1, d2 = delta_n_derivs(s, 0.0)
    assert d1.contains(-1.0) and d2.contains(4.0)
    s0 = build_scheme(1, 0.0)
    d1, d2 = delta_n_derivs(s0, 0.3)
    assert d1.contains(1.0) and d2.contains(0.0)


def test_delta1_roots_are_quadratic_roots():
    s = build_scheme(1, 2.0)
    root = complex(-0.5, np.sqrt(7) / 2)
    assert delta_n(s, ComplexRect.ball(root, 1e-12)).contains(0.0)
    eig = np.linalg.eigvals(assemble_an_float(s))
    np.testing.assert_allclose(sorted(eig, key=lambda w: w.imag), [root.conjugate(), root])


@given(st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=25, deadline=None)
def test_delta_n_contains_high_precision_value(x, y):
    s = build_scheme(6, 2.0)
    z = complex(x, y)
    try:
        enc = delta_n(s, z)
    except NotVerifiablyInvertible:
        return
    ref = mp_delta_n(6, 2, z, dps=40)
    assert in_rect(enc, ref.real, ref.imag)


def test_delta_n_derivative_finite_difference(psa_pair, scheme10):
    z = psa_pair.plus.zhat
    h = 1e-6
    d1, d2 = delta_n_derivs(scheme10, z)
    fd = (delta_n(scheme10, z + h).mid - delta_n(scheme10, z - h).mid) / (2 * h)
    assert abs(fd - d1.mid) < 1e-6
    fd2 = (delta_n(scheme10, z + 1e-4).mid - 2 * delta_n(scheme10, z).mid
           + delta_n(scheme10, z - 1e-4).mid) / 1e-8
    assert abs(fd2 - d2.mid) < 1e-4 * max(1.0, abs(d2.mid))


def test_delta_n_vanishes_on_validated_root(psa_pair, scheme10):
    assert delta_n(scheme10, psa_pair.plus.enclosure).contains(0.0)
    v = blowup_vector(scheme10, psa_pair.plus.enclosure)
    assert v.shape == (10,)


def test_interval_an_contains_float_an(scheme10):
    assert assemble_an_interval(scheme10).contains(assemble_an_float(scheme10)).all()


def test_blowup_fails_at_eigenvalue_of_d():
    s = build_scheme(1, 2.0)
    with pytest.raises(NotVerifiablyInvertible):
        blowup_vector(s, -1.0)


def test_bad_n():
    with pytest.raises(ValueError):
        build_scheme(0, 2.0)
