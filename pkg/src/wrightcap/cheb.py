"""Chebyshev extremal mesh on [-1, 0], its differentiation matrix and the
characteristic function of the pseudospectral Wright system.

For a mesh index ``n`` the nodes are ``theta_j = (cos(j pi / n) - 1) / 2``.
``D[k-1, j-1] = l_j'(theta_k)`` for ``1 <= j, k <= n`` where ``l_j`` is the
Lagrange basis polynomial of node ``j``.  The characteristic function is

    Delta_n(z) = z + alpha * ((D - z I)^{-1} D 1)_n,

where ``(.)_n`` is the component belonging to ``theta_n = -1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .interval import ComplexRect, RealInterval, as_interval, as_rect
from .linalg import (
    IntervalArray,
    NotVerifiablyInvertible,
    inf_norm_upper,
    one_norm_upper,
    verified_solve,
    verified_solve_batch,
)


@dataclass(frozen=True)
class ChebyshevScheme:
    n: int
    nodes: Tuple[RealInterval, ...]
    D: IntervalArray  # n x n, real
    D1: IntervalArray  # D @ 1, length n
    alpha: RealInterval
    D_full: IntervalArray  # (n+1) x (n+1) including node 0

    def norm_D(self, norm: str = "one") -> float:
        """Rigorous upper bound of ``||D||`` in the named operator norm."""
        if norm == "one":
            return one_norm_upper(self.D)
        if norm == "inf":
            return inf_norm_upper(self.D)
        raise ValueError(f"unknown norm {norm!r}")

    def norm_ones(self, norm: str = "one") -> float:
        """``||1||`` for the all-ones vector of length n."""
        if norm == "one":
            return float(self.n)
        if norm == "inf":
            return 1.0
        raise ValueError(f"unknown norm {norm!r}")


# working precision (bits) of the one-off construction of nodes and D
_WORK_PREC = 128


def _context() -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = _WORK_PREC
    return ctx


def _to_interval(x) -> RealInterval:
    """Outward conversion of an mpmath interval to a double interval."""
    a, b = x._mpi_
    return RealInterval(libmp.to_float(a, rnd="f"), libmp.to_float(b, rnd="c"))


def _mp_nodes(ctx, n: int):
    nodes = []
    for j in range(n + 1):
        if j == 0:
            nodes.append(ctx.mpf(0))
        elif j == n:
            nodes.append(ctx.mpf(-1))
        else:
            nodes.append((ctx.cos(ctx.pi * j / n) - 1) / 2)
    return nodes


def chebyshev_nodes(n: int) -> List[RealInterval]:
    out = [_to_interval(t) for t in _mp_nodes(_context(), n)]
    out[0], out[n] = RealInterval(0.0), RealInterval(-1.0)
    return out


def _lagrange_derivative(nodes, j: int, k: int):
    """``l_j'(theta_k)`` from the node-difference products."""
    tj = nodes[j]
    if j == k:
        return sum(1 / (tj - tm) for m, tm in enumerate(nodes) if m != j)
    tk = nodes[k]
    acc = 1 / (tj - tk)
    for m, tm in enumerate(nodes):
        if m not in (j, k):
            acc = acc * (tk - tm) / (tj - tm)
    return acc


def build_scheme(n: int, alpha) -> ChebyshevScheme:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    alpha = as_interval(alpha)
    ctx = _context()
    mp_nodes = _mp_nodes(ctx, n)
    full = [[_lagrange_derivative(mp_nodes, j, k) for j in range(n + 1)] for k in range(n + 1)]
    rows = [sum(row[1:], ctx.mpf(0)) for row in full[1:]]
    full = [[_to_interval(e) for e in row] for row in full]
    d1 = [_to_interval(e) for e in rows]
    nodes = chebyshev_nodes(n)
    lo = np.array([[e.lo for e in row] for row in full])
    hi = np.array([[e.hi for e in row] for row in full])
    d_full = IntervalArray(lo, hi)
    d1 = IntervalArray([e.lo for e in d1], [e.hi for e in d1])
    return ChebyshevScheme(n, tuple(nodes), d_full[1:, 1:], d1, alpha, d_full)


def _shifted(s: ChebyshevScheme, z: IntervalArray) -> IntervalArray:
    """Stack of matrices ``D - z_i I`` for a vector of shifts."""
    n = s.n
    eye = np.eye(n)
    zz = z.reshape(*z.shape, 1, 1)
    shift = IntervalArray(zz.rl * eye, zz.rh * eye, zz.il * eye, zz.ih * eye)
    return s.D - shift


def blowup_vector(s: ChebyshevScheme, z) -> IntervalArray:
    """Enclosure of ``(D - z I)^{-1} D 1``."""
    z = as_rect(z)
    zi = IntervalArray(z.re.lo, z.re.hi, z.im.lo, z.im.hi)
    return verified_solve(_shifted(s, zi), s.D1)


def blowup_last_batch(s: ChebyshevScheme, z: IntervalArray):
    """Last component of the blow-up vector for many shifts at once.

    Returns ``(values, ok)``; ``ok`` flags the shifts whose solve verified.
    """
    a = _shifted(s, z)
    b = IntervalArray(
        np.broadcast_to(s.D1.rl, z.shape + (s.n,)), np.broadcast_to(s.D1.rh, z.shape + (s.n,)),
        np.broadcast_to(s.D1.il, z.shape + (s.n,)), np.broadcast_to(s.D1.ih, z.shape + (s.n,)),
    )
    x, ok = verified_solve_batch(a, b)
    return x[..., -1], ok


def delta_n(s: ChebyshevScheme, z) -> ComplexRect:
    z = as_rect(z)
    v = blowup_vector(s, z)
    return z + s.alpha * v.rect(s.n - 1)


def delta_n_derivs(s: ChebyshevScheme, z) -> Tuple[ComplexRect, ComplexRect]:
    """Enclosures of ``Delta_n'(z)`` and ``Delta_n''(z)`` by repeated solves."""
    z = as_rect(z)
    zi = IntervalArray(z.re.lo, z.re.hi, z.im.lo, z.im.hi)
    a = _shifted(s, zi)
    w1 = verified_solve(a, s.D1)
    w2 = verified_solve(a, w1)
    w3 = verified_solve(a, w2)
    last = s.n - 1
    d1 = s.alpha * w2.rect(last) + 1.0
    d2 = (s.alpha * 2.0) * w3.rect(last)
    return d1, d2


def assemble_an_float(s: ChebyshevScheme) -> np.ndarray:
    """Floating matrix of the linearised pseudospectral system (not rigorous)."""
    n = s.n
    a = np.zeros((n + 1, n + 1))
    a[0, n] = -s.alpha.mid
    a[1:, 0] = -s.D1.mid().real
    a[1:, 1:] = s.D.mid().real
    return a


def assemble_an_interval(s: ChebyshevScheme) -> IntervalArray:
    """Interval version of ``assemble_an_float``."""
    n = s.n
    lo = np.zeros((n + 1, n + 1))
    hi = np.zeros((n + 1, n + 1))
    lo[0, n], hi[0, n] = -s.alpha.hi, -s.alpha.lo
    lo[1:, 0], hi[1:, 0] = -s.D1.rh, -s.D1.rl
    lo[1:, 1:], hi[1:, 1:] = s.D.rl, s.D.rh
    return IntervalArray(lo, hi)


__all__ = [
    "ChebyshevScheme",
    "NotVerifiablyInvertible",
    "assemble_an_float",
    "assemble_an_interval",
    "blowup_last_batch",
    "blowup_vector",
    "build_scheme",
    "chebyshev_nodes",
    "delta_n",
    "delta_n_derivs",
]
