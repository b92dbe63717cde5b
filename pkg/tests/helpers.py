"""Independent reference computations shared by the test modules.

Rational operations are checked with ``fractions.Fraction`` (exact); elementary
functions with mpmath at 200 bits.  Each ``soundness_*`` function draws random
enclosures, evaluates the library operation, and counts the exact values that
escape the returned enclosure.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from wrightcap.interval import ComplexRect, RealInterval, cos, cplx_exp, exp, sin
from wrightcap.linalg import IntervalArray, matmul


def random_double(rng, lo_exp=-30, hi_exp=30) -> float:
    sign = -1.0 if rng.random() < 0.5 else 1.0
    return sign * float(rng.random() + 0.5) * 10.0 ** float(rng.uniform(lo_exp, hi_exp))


def random_interval(rng, lo_exp=-30, hi_exp=30, positive=False) -> RealInterval:
    a = random_double(rng, lo_exp, hi_exp)
    if positive:
        a = abs(a)
    kind = rng.integers(3)
    if kind == 0:
        return RealInterval(a)
    width = abs(a) * 10.0 ** float(rng.uniform(-16, 0 if kind == 1 else 1))
    hi = a + width
    if positive and hi <= 0:
        hi = a
    return RealInterval(a, max(hi, a))


def sample_points(rng, x: RealInterval, k: int = 3):
    """Endpoints plus ``k`` interior doubles."""
    pts = [x.lo, x.hi]
    for _ in range(k):
        pts.append(float(x.lo + (x.hi - x.lo) * rng.random()))
    return [p for p in pts if x.lo <= p <= x.hi]


def _pick(rng, x: RealInterval) -> float:
    """An endpoint or an interior double of ``x``."""
    u = rng.random()
    if u < 0.25:
        return x.lo
    if u < 0.5:
        return x.hi
    return min(max(float(x.lo + (x.hi - x.lo) * rng.random()), x.lo), x.hi)


def in_iv(x: RealInterval, v) -> bool:
    """Exact containment of a Fraction or mpf in ``x``."""
    if isinstance(v, Fraction):
        lo_ok = x.lo == -math.inf or Fraction(x.lo) <= v
        hi_ok = x.hi == math.inf or v <= Fraction(x.hi)
        return lo_ok and hi_ok
    return mpmath.mpf(x.lo) <= v <= mpmath.mpf(x.hi)


def in_rect(r: ComplexRect, re, im) -> bool:
    return in_iv(r.re, re) and in_iv(r.im, im)


# -- families ---------------------------------------------------------------
def soundness_real_arith(rng, trials: int) -> dict:
    """Exact range containment for + - * / on random intervals."""
    bad = {"add": 0, "sub": 0, "mul": 0, "div": 0, "sqr": 0, "sqrt": 0}
    for _ in range(trials):
        a, b = random_interval(rng), random_interval(rng)
        fa = (Fraction(a.lo), Fraction(a.hi))
        fb = (Fraction(b.lo), Fraction(b.hi))
        prods = [u * v for u in fa for v in fb]
        s, d, m = a + b, a - b, a * b
        bad["add"] += not (in_iv(s, fa[0] + fb[0]) and in_iv(s, fa[1] + fb[1]))
        bad["sub"] += not (in_iv(d, fa[0] - fb[1]) and in_iv(d, fa[1] - fb[0]))
        bad["mul"] += not (in_iv(m, min(prods)) and in_iv(m, max(prods)))
        if not (b.lo <= 0 <= b.hi):
            q = a / b
            quots = [u / v for u in fa for v in fb]
            bad["div"] += not (in_iv(q, min(quots)) and in_iv(q, max(quots)))
        sq = a.sqr()
        lo2 = Fraction(0) if a.lo <= 0 <= a.hi else min(fa[0] ** 2, fa[1] ** 2)
        bad["sqr"] += not (in_iv(sq, lo2) and in_iv(sq, max(fa[0] ** 2, fa[1] ** 2)))
        p = random_interval(rng, positive=True)
        r = p.sqrt()
        with mpmath.workprec(200):
            ok = in_iv(r, mpmath.sqrt(mpmath.mpf(p.lo))) and in_iv(r, mpmath.sqrt(mpmath.mpf(p.hi)))
        bad["sqrt"] += not ok
    return bad


def _trig_range(fn, lo: float, hi: float):
    """Exact-ish range of sin/cos on ``[lo, hi]`` (200-bit critical points)."""
    with mpmath.workprec(200):
        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        vals = [fn(a), fn(b)]
        half = mpmath.pi / 2
        j = int(mpmath.floor(a / half))
        while j * half <= b:
            if j * half >= a:
                vals.append(fn(j * half))
            j += 1
        return min(vals), max(vals)


def soundness_elementary(rng, trials: int) -> dict:
    bad = {"exp": 0, "sin": 0, "cos": 0}
    for _ in range(trials):
        x = random_interval(rng, -3, 2.5)
        e = exp(x)
        with mpmath.workprec(200):
            ok = in_iv(e, mpmath.exp(mpmath.mpf(x.lo))) and in_iv(e, mpmath.exp(mpmath.mpf(x.hi)))
        bad["exp"] += not ok
        y = random_interval(rng, -3, 4)
        for name, f, g in (("sin", sin, mpmath.sin), ("cos", cos, mpmath.cos)):
            r = f(y)
            lo, hi = _trig_range(g, y.lo, y.hi)
            with mpmath.workprec(200):
                bad[name] += not (in_iv(r, lo) and in_iv(r, hi))
    return bad


def _random_rect(rng, lo_exp=-10, hi_exp=10) -> ComplexRect:
    return ComplexRect(random_interval(rng, lo_exp, hi_exp), random_interval(rng, lo_exp, hi_exp))


def soundness_complex(rng, trials: int) -> dict:
    """Sampled containment for rectangle products, quotients and exp."""
    bad = {"cmul": 0, "cdiv": 0, "cexp": 0}
    for _ in range(trials):
        a, b = _random_rect(rng), _random_rect(rng)
        m = a * b
        q = None
        if not (b.re.lo <= 0 <= b.re.hi and b.im.lo <= 0 <= b.im.hi):
            q = a / b
        ok_m = ok_q = True
        for _ in range(4):
            X, Y, U, V = (Fraction(_pick(rng, iv)) for iv in (a.re, a.im, b.re, b.im))
            ok_m &= in_rect(m, X * U - Y * V, X * V + Y * U)
            if q is not None and (U or V):
                den = U * U + V * V
                ok_q &= in_rect(q, (X * U + Y * V) / den, (Y * U - X * V) / den)
        bad["cmul"] += not ok_m
        bad["cdiv"] += not ok_q
        z = ComplexRect(random_interval(rng, -3, 2), random_interval(rng, -3, 3))
        e = cplx_exp(z)
        ok_e = True
        with mpmath.workprec(200):
            for _ in range(4):
                w = mpmath.exp(mpmath.mpc(_pick(rng, z.re), _pick(rng, z.im)))
                ok_e &= in_rect(e, w.real, w.imag)
        bad["cexp"] += not ok_e
    return bad


def soundness_matmul(rng, trials: int, k: int = 3) -> dict:
    """Entrywise containment of exact products of sampled point matrices."""
    bad = {"matmul": 0}
    checks = 0
    while checks < trials:
        scale = 10.0 ** rng.uniform(-5, 5, size=(2, k, k))
        ca = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) * scale[0]
        cb = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) * scale[1]
        ra = np.abs(ca) * 10.0 ** rng.uniform(-16, -2, size=(k, k))
        rb = np.abs(cb) * 10.0 ** rng.uniform(-16, -2, size=(k, k))
        A, B = IntervalArray.ball(ca, ra), IntervalArray.ball(cb, rb)
        C = matmul(A, B)
        pa = _sample_matrix(rng, A)
        pb = _sample_matrix(rng, B)
        for i in range(k):
            for j in range(k):
                re = sum(pa[0][i][t] * pb[0][t][j] - pa[1][i][t] * pb[1][t][j] for t in range(k))
                im = sum(pa[0][i][t] * pb[1][t][j] + pa[1][i][t] * pb[0][t][j] for t in range(k))
                bad["matmul"] += not in_rect(C.rect((i, j)), re, im)
                checks += 1
    return bad


def _sample_matrix(rng, A: IntervalArray):
    t = rng.random((2,) + A.shape)
    re = A.rl + (A.rh - A.rl) * t[0]
    im = A.il + (A.ih - A.il) * t[1]
    re = np.clip(re, A.rl, A.rh)
    im = np.clip(im, A.il, A.ih)
    return ([[Fraction(float(v)) for v in row] for row in re],
            [[Fraction(float(v)) for v in row] for row in im])


# -- characteristic-function oracles -----------------------------------------
def mp_cheb_matrix(n: int, dps: int = 50):
    """Differentiation matrix on ``theta_j = (cos(j pi/n) - 1)/2`` by the
    barycentric-weight formula, at ``dps`` digits."""
    with mpmath.workdps(dps):
        th = [(mpmath.cos(mpmath.pi * j / n) - 1) / 2 for j in range(n + 1)]
        th[0], th[n] = mpmath.mpf(0), mpmath.mpf(-1)
        w = []
        for j in range(n + 1):
            p = mpmath.mpf(1)
            for m in range(n + 1):
                if m != j:
                    p *= th[j] - th[m]
            w.append(1 / p)
        D = mpmath.matrix(n + 1, n + 1)
        for k in range(n + 1):
            for j in range(n + 1):
                if j != k:
                    D[k, j] = (w[j] / w[k]) / (th[k] - th[j])
            D[k, k] = -sum(D[k, j] for j in range(n + 1) if j != k)
        return th, D


def mp_delta_n(n: int, alpha, z, dps: int = 50):
    with mpmath.workdps(dps):
        _, Df = mp_cheb_matrix(n, dps)
        D = Df[1:, 1:]
        ones = mpmath.matrix([1] * n)
        rhs = D * ones
        A = D - mpmath.mpc(z) * mpmath.eye(n)
        v = mpmath.lu_solve(A, rhs)
        return mpmath.mpc(z) + mpmath.mpf(alpha) * v[n - 1]


def fmt(x) -> str:
    return f"{x:.3e}" if isinstance(x, float) and math.isfinite(x) else str(x)
