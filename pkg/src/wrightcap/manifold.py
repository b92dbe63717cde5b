"""Parametrization of the unstable manifolds by Taylor coefficients.

Both problems share one zero-finding map on sequences ``x = (x_beta)``:

    F(x)_0    = x_0
    F(x)_beta = x_beta - xi_beta                                  |beta| = 1
    F(x)_beta = Delta(<lambda,beta>) x_beta + alpha (x * r(x))_beta  |beta| >= 2

where ``r`` multiplies ``x_beta`` by ``e^{-<lambda,beta>}`` (delay equation) or
by ``((D - <lambda_n,beta> I)^{-1} D 1)_n`` (pseudospectral system).  In both
cases ``Delta(z) = z + alpha m(z)`` with ``m`` the multiplier.  Solving the
top-degree part of ``F(x)_beta = 0`` gives the recursion
``x_beta = -alpha Delta^{-1} (x * r(x))_beta``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .cheb import ChebyshevScheme, assemble_an_interval, blowup_vector
from .interval import ComplexRect, RealInterval, as_interval, as_rect
from .linalg import IntervalArray, float_inverse, verified_solve
from .roots import SpectralPair
from .seq import (
    MultiplierTable,
    TaylorSeq2,
    apply_multiplier,
    conv,
    degrees,
    exponents,
    flat_index,
    index_arrays,
    indices,
    multipliers,
    size,
)

# Default first-order scale; small enough for both validations at the
# reference configuration (alpha = 2, n = 10, N = 25, M = 1000).
DEFAULT_XI_SCALE = 0.03


class ResonantIndex(ArithmeticError):
    """``Delta(<lambda, beta>)`` may vanish at a needed index."""


@dataclass(frozen=True)
class ProblemData:
    kind: str
    alpha: RealInterval
    lam: SpectralPair
    mult: MultiplierTable
    delta: IntervalArray  # Delta(<lambda,beta>) for |beta| <= maxdeg, flat
    xi: Tuple[ComplexRect, ComplexRect]  # xi_(1,0), xi_(0,1)
    xi_scale: float
    scheme: Optional[ChebyshevScheme] = None

    @property
    def maxdeg(self) -> int:
        return self.mult.maxdeg

    def delta_at(self, beta) -> ComplexRect:
        return self.delta.rect(flat_index(beta))


def make_problem(
    kind: str,
    alpha,
    lam: SpectralPair,
    scheme: ChebyshevScheme | None = None,
    xi_scale: float = DEFAULT_XI_SCALE,
    maxdeg: int = 50,
) -> ProblemData:
    alpha = as_interval(alpha)
    mult = multipliers(kind, lam, scheme, maxdeg)
    z = exponents(lam, maxdeg)
    delta = z + mult.values * IntervalArray(alpha.lo, alpha.hi)
    xi = ComplexRect(xi_scale)
    return ProblemData(kind, alpha, lam, mult, delta, (xi, xi.conj()), float(xi_scale), scheme)


def check_nonresonance(p: ProblemData, upto: int) -> None:
    deg = degrees(upto)
    low = p.delta[: size(upto)].mag_lower()
    bad = np.nonzero((deg >= 2) & (low <= 0.0))[0]
    if bad.size:
        raise ResonantIndex(f"Delta may vanish at beta = {indices(upto)[bad[0]]}")


# -- recursion ------------------------------------------------------------
def recurse_coeffs(p: ProblemData, N: int, rigorous: bool = False) -> TaylorSeq2:
    """Coefficients of the approximate zero ``x-hat`` up to total degree ``N``.

    The default mode works on floating midpoints.  ``rigorous=True`` carries
    intervals through the recursion instead, giving enclosures of the exact
    coefficients of the truncated problem.
    """
    if N > p.maxdeg:
        raise ValueError("multiplier table shorter than N")
    check_nonresonance(p, N)
    if rigorous:
        return _recurse_interval(p, N)
    m = p.mult.values.mid()
    dl = p.delta.mid()
    a = p.alpha.mid
    X = np.zeros((N + 1, N + 1), dtype=complex)
    R = np.zeros_like(X)
    for (b1, b2) in ((1, 0), (0, 1)):
        i = flat_index((b1, b2))
        X[b1, b2] = p.xi[0].mid if b1 else p.xi[1].mid
        R[b1, b2] = X[b1, b2] * m[i]
    for k in range(2, N + 1):
        for b1 in range(k + 1):
            b2 = k - b1
            c = np.sum(X[: b1 + 1, : b2 + 1] * R[b1::-1, b2::-1])
            i = flat_index((b1, b2))
            X[b1, b2] = -a * c / dl[i]
            R[b1, b2] = X[b1, b2] * m[i]
    b1, b2 = index_arrays(N)
    return TaylorSeq2.from_points(X[b1, b2], N)


def _recurse_interval(p: ProblemData, N: int) -> TaylorSeq2:
    side = N + 1
    X = [np.zeros((side, side)) for _ in range(4)]
    R = [np.zeros((side, side)) for _ in range(4)]
    alpha = IntervalArray(-p.alpha.hi, -p.alpha.lo)

    def put(store, b, val: IntervalArray):
        for arr, src in zip(store, (val.rl, val.rh, val.il, val.ih)):
            arr[b] = src

    def get(store, sl) -> IntervalArray:
        return IntervalArray(*(arr[sl] for arr in store))

    for beta, xi in (((1, 0), p.xi[0]), ((0, 1), p.xi[1])):
        xv = IntervalArray(xi.re.lo, xi.re.hi, xi.im.lo, xi.im.hi)
        put(X, beta, xv)
        put(R, beta, xv * p.mult.values[flat_index(beta)])
    for k in range(2, N + 1):
        for b1 in range(k + 1):
            b2 = k - b1
            prod = get(X, np.s_[: b1 + 1, : b2 + 1]) * get(R, np.s_[b1::-1, b2::-1])
            c = prod.reshape(-1).sum()
            i = flat_index((b1, b2))
            xv = alpha * c / p.delta[i]
            put(X, (b1, b2), xv)
            put(R, (b1, b2), xv * p.mult.values[i])
    b1, b2 = index_arrays(N)
    return TaylorSeq2.from_grid(get(X, np.s_[:, :]), N)


# -- the map F and its derivative -----------------------------------------
def eval_F(p: ProblemData, x: TaylorSeq2, out_trunc: int | None = None) -> TaylorSeq2:
    """Interval enclosure of ``F(x)`` for ``|beta| <= out_trunc``."""
    out_trunc = 2 * x.trunc if out_trunc is None else out_trunc
    if out_trunc > 2 * x.trunc:
        raise ValueError("out_trunc exceeds twice the truncation")
    if out_trunc > p.maxdeg or x.trunc > p.maxdeg:
        raise ValueError("multiplier table too short")
    rx = apply_multiplier(x, p.mult)
    c = conv(x, rx, out_trunc)
    xs = x.retrunc(out_trunc).coeffs
    alpha = IntervalArray(p.alpha.lo, p.alpha.hi)
    f = p.delta[: size(out_trunc)] * xs + alpha * c.coeffs
    deg = degrees(out_trunc)
    f = f.with_entries(deg == 0, xs)
    first = xs[1:3] - _xi_flat(p)
    f = f.with_entries(np.isin(np.arange(size(out_trunc)), [1, 2]), _pad_first(first, out_trunc))
    return TaylorSeq2(out_trunc, f)


def _xi_flat(p: ProblemData) -> IntervalArray:
    # flat order at degree one is (0,1) then (1,0)
    return IntervalArray.from_rects([p.xi[1], p.xi[0]])


def _pad_first(first: IntervalArray, trunc: int) -> IntervalArray:
    out = IntervalArray.zeros(size(trunc))
    arrs = [a.copy() for a in (out.rl, out.rh, out.il, out.ih)]
    for arr, src in zip(arrs, (first.rl, first.rh, first.il, first.ih)):
        arr[1:3] = src
    return IntervalArray(*arrs)


def assemble_df_block(p: ProblemData, xhat: TaylorSeq2, N: int) -> IntervalArray:
    """Interval matrix of ``pi_N DF(xhat) pi_N`` in degree order.

    Entry ``(beta, gamma)`` for ``|beta| >= 2`` is
    ``Delta_beta [beta = gamma] + alpha (r(xhat)_{beta-gamma} + m_gamma xhat_{beta-gamma})``;
    rows with ``|beta| <= 1`` are identity rows.
    """
    if xhat.trunc > N:
        raise ValueError("trunc(xhat) must not exceed N")
    x = xhat.retrunc(N)
    K = size(N)
    b1, b2 = index_arrays(N)
    d1 = b1[:, None] - b1[None, :]
    d2 = b2[:, None] - b2[None, :]
    valid = (d1 >= 0) & (d2 >= 0)
    s1, s2 = np.where(valid, d1, 0), np.where(valid, d2, 0)
    gx = x.grid()
    gr = apply_multiplier(x, p.mult).grid()
    m = p.mult.values[:K]
    vals = gr[s1, s2] + gx[s1, s2] * m.reshape(1, K)
    alpha = IntervalArray(p.alpha.lo, p.alpha.hi)
    block = vals * alpha
    deg = (b1 + b2)
    zero = IntervalArray.zeros((K, K))
    block = zero.with_entries(valid & (deg[:, None] >= 2), block)
    eye = np.eye(K, dtype=bool)
    diag = p.delta[:K].reshape(K, 1) + block
    block = block.with_entries(eye & (deg[:, None] >= 2), diag)
    block = block.with_entries(eye & (deg[:, None] <= 1), IntervalArray.point(1.0))
    return block


@dataclass(frozen=True)
class ApproxSolution:
    xhat: TaylorSeq2
    N: int
    df_block: IntervalArray  # interval pi_N DF(xhat) pi_N
    Adag_block: np.ndarray  # floating midpoint of df_block
    Abar_block: np.ndarray  # floating inverse of Adag_block


def build_approx_solution(p: ProblemData, xhat: TaylorSeq2, N: int | None = None) -> ApproxSolution:
    N = xhat.trunc if N is None else N
    df = assemble_df_block(p, xhat, N)
    adag = df.mid()
    return ApproxSolution(xhat.retrunc(N), N, df, adag, float_inverse(adag))


def xhat_sha256(x: TaylorSeq2) -> str:
    """Digest of the midpoint coefficients and truncation degree."""
    h = hashlib.sha256()
    h.update(f"trunc={x.trunc};".encode())
    h.update(np.ascontiguousarray(x.mid(), dtype="<c16").tobytes())
    return h.hexdigest()


# -- evaluation -----------------------------------------------------------
def eval_manifold(p: ProblemData, x: TaylorSeq2, sigma, theta_or_scheme=0.0):
    """Floating evaluation of the parametrization at ``sigma = (s1, s2)``.

    For the delay equation the result is the history value at ``theta`` in
    ``[-1, 0]`` (an array of thetas is accepted).  For the pseudospectral system
    it is the ``(n+1)``-vector ``sum_beta x_beta (1, v_beta) sigma^beta`` with
    ``v_beta`` the blow-up vector at ``<lambda_n, beta>``.
    """
    s1, s2 = complex(sigma[0]), complex(sigma[1])
    b1, b2 = index_arrays(x.trunc)
    coeffs = x.mid()
    powers = s1 ** b1 * s2 ** b2
    z = exponents(p.lam, x.trunc).mid()
    if p.kind == "dde":
        theta = np.asarray(theta_or_scheme, dtype=float)
        terms = coeffs * powers
        return np.sum(terms[:, None] * np.exp(np.outer(z, theta.ravel())), axis=0).reshape(theta.shape)
    s = theta_or_scheme if isinstance(theta_or_scheme, ChebyshevScheme) else p.scheme
    d = s.D.mid().real
    d1 = s.D1.mid().real
    out = np.zeros(s.n + 1, dtype=complex)
    for c, pw, zz in zip(coeffs, powers, z):
        if c == 0:
            continue
        v = np.linalg.solve(d - zz * np.eye(s.n), d1)
        out += c * pw * np.concatenate([[1.0], v])
    return out


def vector_homological_oracle(
    scheme: ChebyshevScheme, p: ProblemData, maxdeg: int
) -> Dict[Tuple[int, int], IntervalArray]:
    """Coefficients of the full pseudospectral parametrization.

    Solves ``(<lambda_n,beta> I - A_n)(a_beta, b_beta) = (H_beta, 0)`` with
    ``H_beta = -alpha sum_gamma b_gamma^(n) a_{beta-gamma}`` by verified solves,
    independently of the scalar reduction.  Returns ``(a_beta, b_beta)`` as an
    ``(n+1)``-vector for every ``|beta| <= maxdeg``.
    """
    if p.kind != "psa":
        raise ValueError("oracle applies to the pseudospectral problem")
    n = scheme.n
    A = assemble_an_interval(scheme)
    z = exponents(p.lam, maxdeg)
    out: Dict[Tuple[int, int], IntervalArray] = {(0, 0): IntervalArray.zeros(n + 1)}
    lam = p.lam.plus.enclosure
    v_plus = blowup_vector(scheme, lam)
    v_minus = blowup_vector(scheme, lam.conj())
    for beta, xi, v in (((1, 0), p.xi[0], v_plus), ((0, 1), p.xi[1], v_minus)):
        xv = IntervalArray(xi.re.lo, xi.re.hi, xi.im.lo, xi.im.hi)
        out[beta] = _concat(xv.reshape(1), v * xv)
    eye = np.eye(n + 1)
    alpha = IntervalArray(-p.alpha.hi, -p.alpha.lo)
    for k in range(2, maxdeg + 1):
        for b1 in range(k + 1):
            beta = (b1, k - b1)
            h = IntervalArray.zeros(())
            for g1 in range(b1 + 1):
                for g2 in range(beta[1] + 1):
                    rest = (b1 - g1, beta[1] - g2)
                    if (g1, g2) in ((0, 0),) or rest == (0, 0):
                        continue
                    h = h + out[(g1, g2)][n] * out[rest][0]
            h = alpha * h
            zi = z[flat_index(beta)]
            shift = IntervalArray(zi.rl * eye, zi.rh * eye, zi.il * eye, zi.ih * eye)
            rhs = _concat(h.reshape(1), IntervalArray.zeros(n))
            out[beta] = verified_solve(shift - A, rhs)
    return out


def _concat(a: IntervalArray, b: IntervalArray) -> IntervalArray:
    return IntervalArray(*(np.concatenate([x, y]) for x, y in zip(
        (a.rl, a.rh, a.il, a.ih), (b.rl, b.rh, b.il, b.ih))))
