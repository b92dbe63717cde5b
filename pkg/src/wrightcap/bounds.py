"""Radii-polynomial constants, tail estimates and validated radii.

With ``A`` acting as a floating inverse ``Abar`` on degrees ``<= N`` and as
``Delta^{-1}`` beyond, the zero of ``F`` near ``x-hat`` is certified inside the
ball of radius ``r`` whenever

    p(r) = Z2 r^2 - (1 - Z0 - Z1) r + Y0 < 0.

All constants here are rigorous upper bounds, returned as floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from typing import Dict, List, Optional

import numpy as np

from .cheb import ChebyshevScheme, blowup_last_batch
from .interval import RealInterval, as_interval
from .interval import exp as iexp
from .linalg import (
    IntervalArray,
    NotVerifiablyInvertible,
    identity,
    matmul,
    one_norm_upper,
    sum_upper,
)
from .manifold import ApproxSolution, ProblemData, eval_F, xhat_sha256
from .roots import SpectralPair
from .seq import apply_multiplier, degrees, ell1_norm, size


class ThresholdViolated(ArithmeticError):
    pass


class NoNegativePoint(ArithmeticError):
    pass


class MismatchedGuess(ValueError):
    pass


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _dn(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _hi(x) -> float:
    return as_interval(x).hi


# -- tails ------------------------------------------------------------------
@dataclass(frozen=True)
class TailData:
    """Tail constants for one problem.

    For the pseudospectral problem ``resolvent_tail`` bounds ``|m(<lambda_n,beta>)|``
    and ``delta_tail`` bounds ``|Delta_n|^{-1}`` for ``|beta| >= M``;
    ``finite_max`` and ``delta_inv_max`` are the maxima over ``|beta| <= M`` and
    ``N < |beta| <= M`` found by the sweep.  For the delay equation ``M = N`` and
    only ``delta_tail`` is used.
    """

    kind: str
    M: int
    N: Optional[int]
    re_lambda: RealInterval
    delta_tail: float
    epsilon: Optional[float] = None
    normD: Optional[float] = None
    norm1: Optional[float] = None
    norm: Optional[str] = None
    resolvent_tail: Optional[float] = None
    finite_max: Optional[float] = None
    delta_inv_max: Optional[float] = None
    explicit_solves: int = 0


def default_epsilon(re_lambda: RealInterval, M: int, normD: float) -> float:
    """Largest double strictly below a lower bound of ``Re(lambda_n) M - ||D||``."""
    return _dn((re_lambda * M - normD).lo)


def invertibility_sweep(
    scheme: ChebyshevScheme,
    lam_n: SpectralPair,
    M: int,
    N: Optional[int] = None,
    epsilon: Optional[float] = None,
    norm: str = "one",
    chunk: int = 8192,
) -> TailData:
    """Certify ``D - <lambda_n, beta> I`` invertible for all ``|beta| <= M``.

    ``<lambda_n, beta>`` only depends on ``s = |beta|`` and ``d = b1 - b2``, and
    the values for ``-d`` are conjugates of those for ``d``, so only
    ``d >= 0`` is visited.  Where ``|z| >= ||D|| + epsilon`` the Neumann series
    certifies invertibility with ``|m(z)| <= ||D|| ||1|| / (|z| - ||D||)``;
    elsewhere a verified solve is done.
    """
    alpha = scheme.alpha
    re = lam_n.re
    im = lam_n.im
    if re.lo <= 0:
        raise ThresholdViolated("Re(lambda_n) is not certified positive")
    normD = scheme.norm_D(norm)
    norm1 = scheme.norm_ones(norm)
    eps = default_epsilon(re, M, normD) if epsilon is None else float(epsilon)
    if not eps > 0:
        raise ThresholdViolated(f"epsilon = {eps} is not positive (M too small)")
    # M > (||D|| + eps) / Re  and  M > alpha ||D|| ||1|| / (Re eps)
    if not (re * M - normD - eps).lo > 0:
        raise ThresholdViolated("M <= (||D|| + epsilon) / Re(lambda_n)")
    c = alpha * normD * norm1 / eps
    den = re * M - c
    if not den.lo > 0:
        raise ThresholdViolated("M <= alpha ||D|| ||1|| / (Re(lambda_n) epsilon)")
    resolvent_tail = _hi(RealInterval(normD) * norm1 / eps)
    delta_tail = _hi(1.0 / den)

    s_list, d_list = [], []
    for s in range(M + 1):
        d = np.arange(s % 2, s + 1, 2)
        s_list.append(np.full(d.shape, s))
        d_list.append(d)
    s_all = np.concatenate(s_list).astype(float)
    d_all = np.concatenate(d_list).astype(float)
    zr = IntervalArray(re.lo, re.hi) * s_all
    zi = IntervalArray(im.lo, im.hi) * d_all
    z = IntervalArray(zr.rl, zr.rh, zi.rl, zi.rh)
    zlow = z.mag_lower()
    thresh = _up(normD + eps)
    explicit = zlow < thresh

    # Neumann region
    nm = ~explicit
    gap = np.nextafter(zlow[nm] - normD, -np.inf)
    m_bound = np.nextafter(normD * norm1 / gap, np.inf)
    finite_max = float(np.max(m_bound)) if m_bound.size else 0.0
    delta_inv_max = 0.0
    if N is not None:
        sel = s_all[nm] > N
        if np.any(sel):
            dl = np.nextafter(zlow[nm][sel] - np.nextafter(alpha.hi * m_bound[sel], np.inf), -np.inf)
            if np.any(dl <= 0):
                raise ThresholdViolated("Neumann bound does not separate Delta_n from zero")
            delta_inv_max = float(np.max(np.nextafter(1.0 / dl, np.inf)))

    # explicit solves
    idx = np.nonzero(explicit)[0]
    a_iv = IntervalArray(alpha.lo, alpha.hi)
    for start in range(0, idx.size, chunk):
        part = idx[start: start + chunk]
        zz = z[part]
        m, ok = blowup_last_batch(scheme, zz)
        if not np.all(ok):
            j = part[int(np.argmin(ok))]
            s, d = int(s_all[j]), int(d_all[j])
            raise NotVerifiablyInvertible(f"beta = ({(s + d) // 2}, {(s - d) // 2})")
        finite_max = max(finite_max, float(np.max(m.mag_upper())))
        if N is not None:
            sel = s_all[part] > N
            if np.any(sel):
                dlow = (zz[sel] + m[sel] * a_iv).mag_lower()
                if np.any(dlow <= 0):
                    raise NotVerifiablyInvertible("Delta_n may vanish in the sweep")
                delta_inv_max = max(delta_inv_max, float(np.max(np.nextafter(1.0 / dlow, np.inf))))
    return TailData(
        kind="psa", M=M, N=N, re_lambda=re, delta_tail=delta_tail, epsilon=eps,
        normD=normD, norm1=norm1, norm=norm, resolvent_tail=resolvent_tail,
        finite_max=finite_max, delta_inv_max=delta_inv_max, explicit_solves=int(idx.size),
    )


def dde_tail(lam: SpectralPair, alpha, N: int) -> TailData:
    """``1 / (Re(lambda) N - alpha e^{-Re(lambda) N})`` bounds ``|Delta|^{-1}`` for ``|beta| >= N``."""
    alpha = as_interval(alpha)
    re = lam.re
    den = re * N - alpha * iexp(-(re * N))
    if not den.lo > 0:
        raise ThresholdViolated("Re(lambda) N - alpha e^{-Re(lambda) N} <= 0")
    return TailData(kind="dde", M=N, N=N, re_lambda=re, delta_tail=_hi(1.0 / den))


# -- the four constants -------------------------------------------------------
@dataclass(frozen=True)
class BoundSet:
    Y0: float
    Z0: float
    Z1: float
    Z2: float
    kind: str

    def as_dict(self) -> Dict[str, float]:
        return {"Y0": self.Y0, "Z0": self.Z0, "Z1": self.Z1, "Z2": self.Z2}


def _abar(sol: ApproxSolution) -> IntervalArray:
    return IntervalArray.point(sol.Abar_block)


def y0_bound(p: ProblemData, sol: ApproxSolution) -> float:
    """Head: ``sum |(Abar F(xhat))_beta|``; tail: ``sum |F(xhat)_beta| / |Delta_beta|``."""
    N = sol.N
    F = eval_F(p, sol.xhat, 2 * N)
    K = size(N)
    head = matmul(_abar(sol), F.coeffs[:K])
    head_sum = float(sum_upper(head.mag_upper()))
    deg = degrees(2 * N)
    tail = F.coeffs[deg > N]
    dlow = p.delta[: size(2 * N)][deg > N].mag_lower()
    if np.any(dlow <= 0):
        raise ArithmeticError("Delta may vanish in the Y0 tail")
    terms = np.nextafter(tail.mag_upper() / dlow, np.inf)
    return _up(head_sum + float(sum_upper(terms)))


def z0_bound(sol: ApproxSolution) -> float:
    """``||I - Abar Adag||`` as the largest column sum."""
    K = sol.Abar_block.shape[0]
    e = identity(K) - matmul(_abar(sol), IntervalArray.point(sol.Adag_block))
    return one_norm_upper(e)


def abar_norm(sol: ApproxSolution) -> float:
    return one_norm_upper(_abar(sol))


def _finite_z1(sol: ApproxSolution) -> float:
    diff = sol.df_block - IntervalArray.point(sol.Adag_block)
    return one_norm_upper(matmul(_abar(sol), diff))


def z1_bound(p: ProblemData, sol: ApproxSolution, tail: TailData) -> float:
    finite = _finite_z1(sol)
    xnorm = ell1_norm(sol.xhat).hi
    alpha = p.alpha
    if p.kind == "dde":
        t = alpha * 2.0 * xnorm * tail.delta_tail
    else:
        rnorm = ell1_norm(apply_multiplier(sol.xhat, p.mult)).hi
        dmax = max(tail.delta_inv_max or 0.0, tail.delta_tail)
        mmax = max(tail.finite_max or 0.0, tail.resolvent_tail)
        t = alpha * dmax * (RealInterval(rnorm) + RealInterval(xnorm) * mmax)
    return _hi(t + finite)


def z2_bound(p: ProblemData, sol: ApproxSolution, tail: TailData) -> float:
    anorm = abar_norm(sol)
    if p.kind == "dde":
        return _hi(p.alpha * 2.0 * max(anorm, tail.delta_tail))
    dmax = max(tail.delta_inv_max or 0.0, tail.delta_tail, anorm)
    mmax = max(tail.finite_max or 0.0, tail.resolvent_tail)
    return _hi(p.alpha * 2.0 * dmax * mmax)


def compute_bounds(p: ProblemData, sol: ApproxSolution, tail: TailData) -> BoundSet:
    return BoundSet(
        y0_bound(p, sol), z0_bound(sol), z1_bound(p, sol, tail), z2_bound(p, sol, tail), p.kind
    )


# -- radii polynomial ----------------------------------------------------------
NUDGE = 2.0 ** -20


def radii_poly(b: BoundSet, r) -> RealInterval:
    """Interval value of ``Z2 r^2 - (1 - Z0 - Z1) r + Y0``."""
    r = as_interval(r)
    return RealInterval(b.Z2) * r.sqr() - (1.0 - RealInterval(b.Z0) - b.Z1) * r + b.Y0


def radii_root(b: BoundSet) -> float:
    """A radius ``r > 0`` with ``p(r) < 0`` certified by interval evaluation."""
    a = 1.0 - b.Z0 - b.Z1
    if not a > 0:
        raise NoNegativePoint(f"Z0 + Z1 = {b.Z0 + b.Z1} >= 1")
    if b.Y0 == 0.0:
        r = 2.0 ** -1000
    elif b.Z2 == 0.0:
        r = b.Y0 / a
    else:
        disc = a * a - 4.0 * b.Z2 * b.Y0
        if disc < 0:
            raise NoNegativePoint("radii polynomial has no real root")
        r = 2.0 * b.Y0 / (a + math.sqrt(disc))
    r = r * (1.0 + NUDGE)
    if not radii_poly(b, r).hi < 0.0:
        raise NoNegativePoint(f"p({r}) is not certified negative")
    return r


# -- results -----------------------------------------------------------------
@dataclass(frozen=True)
class Validation:
    kind: str
    bounds: BoundSet
    radius: float
    xhat_sha256: str
    tail: TailData
    lam: SpectralPair


def validate(p: ProblemData, sol: ApproxSolution, tail: TailData) -> Validation:
    b = compute_bounds(p, sol, tail)
    return Validation(p.kind, b, radii_root(b), xhat_sha256(sol.xhat), tail, p.lam)


def distance_bound(r_psa, r_dde) -> float:
    """Upper bound of ``r_psa + r_dde``; accepts radii or ``Validation`` records."""
    if isinstance(r_psa, Validation) and isinstance(r_dde, Validation):
        if r_psa.xhat_sha256 != r_dde.xhat_sha256:
            raise MismatchedGuess("validations used different approximate zeros")
    a = r_psa.radius if isinstance(r_psa, Validation) else float(r_psa)
    b = r_dde.radius if isinstance(r_dde, Validation) else float(r_dde)
    total = a + b
    return total if total == 0.0 else _up(total)


# -- serialisation ------------------------------------------------------------
_CEIL = Context(prec=17, rounding=ROUND_CEILING)
_FLOOR = Context(prec=17, rounding=ROUND_FLOOR)


def decimal_up(x: float) -> str:
    """Decimal string not smaller than ``x``."""
    return str(_CEIL.plus(Decimal(float(x))))


def decimal_down(x: float) -> str:
    return str(_FLOOR.plus(Decimal(float(x))))


def rect_json(r) -> Dict[str, List[str]]:
    return {
        "re": [decimal_down(r.re.lo), decimal_up(r.re.hi)],
        "im": [decimal_down(r.im.lo), decimal_up(r.im.hi)],
    }


def pair_json(pair: SpectralPair) -> Dict[str, Dict[str, List[str]]]:
    return {"plus": rect_json(pair.plus.enclosure), "minus": rect_json(pair.minus.enclosure)}


def bounds_json(b: BoundSet) -> Dict[str, str]:
    return {k: decimal_up(v) for k, v in b.as_dict().items()}


@dataclass
class ValidationCertificate:
    config: Dict
    lambda_dde: Optional[SpectralPair] = None
    lambda_psa: Optional[SpectralPair] = None
    psa: Optional[Validation] = None
    dde: Optional[Validation] = None
    total: Optional[float] = None
    xhat_sha256: Optional[str] = None
    checks: List[Dict] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        return passed

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> Dict:
        out: Dict = {"config": self.config}
        if self.lambda_dde is not None:
            out["lambda_dde"] = pair_json(self.lambda_dde)
        if self.lambda_psa is not None:
            out["lambda_psa"] = pair_json(self.lambda_psa)
        if self.psa is not None:
            out["bounds_psa"] = bounds_json(self.psa.bounds)
            out["r_psa"] = decimal_up(self.psa.radius)
        if self.dde is not None:
            out["bounds_dde"] = bounds_json(self.dde.bounds)
            out["r_dde"] = decimal_up(self.dde.radius)
        if self.total is not None:
            out["total_bound"] = decimal_up(self.total)
        if self.xhat_sha256 is not None:
            out["xhat_sha256"] = self.xhat_sha256
        out["checks"] = self.checks
        return out
