"""Validated zeros of scalar analytic functions and the characteristic roots
of Wright's equation and of its pseudospectral approximation.

``nk_validate`` applies the scalar Newton-Kantorovich test to the Newton map
``F(z) = z - g(z)/g'(z)``: with ``Y = |F(zhat) - zhat|`` and ``Z`` a bound of
``|g g'' / g'^2|`` on the closed disk of radius ``r*``, ``Z < 1`` and
``r0 = Y / (1 - Z) < r*`` prove a unique zero within ``r0`` of ``zhat``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.special import lambertw

from . import interval as iv
from .cheb import ChebyshevScheme, assemble_an_float, delta_n, delta_n_derivs
from .interval import ComplexRect, RealInterval, as_interval, as_rect, mag_bounds
from .linalg import NotVerifiablyInvertible

RectFn = Callable[[ComplexRect], ComplexRect]


class RootValidationError(ArithmeticError):
    pass


class ContractionFailed(RootValidationError):
    pass


class RadiusTooLarge(RootValidationError):
    pass


class DerivativeVanishes(RootValidationError):
    pass


class SeedNotInRightHalfPlane(RootValidationError):
    pass


class EnclosuresOverlap(RootValidationError):
    pass


class CensusCountMismatch(RootValidationError):
    pass


class UnstableCountNotTwo(RootValidationError):
    """The census found a number of unstable roots other than two."""

    def __init__(self, message: str, roots=None, unstable=None):
        super().__init__(message)
        self.roots = roots or []
        self.unstable = unstable or []


@dataclass(frozen=True)
class RootCertificate:
    zhat: complex
    r0: float
    enclosure: ComplexRect
    Y: float
    Z: float
    rstar: float

    def conj(self) -> "RootCertificate":
        return RootCertificate(
            self.zhat.conjugate(), self.r0, self.enclosure.conj(), self.Y, self.Z, self.rstar
        )


@dataclass(frozen=True)
class SpectralPair:
    plus: RootCertificate
    minus: RootCertificate
    kind: str

    @property
    def re(self) -> RealInterval:
        return self.plus.enclosure.re

    @property
    def im(self) -> RealInterval:
        return self.plus.enclosure.im


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _dn(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _disk_pieces(zhat: complex, rstar: float, k: int) -> List[ComplexRect]:
    """Cover the closed disk by a k-by-k grid of rectangles meeting it."""
    box = ComplexRect.ball(zhat, rstar)
    if k == 1:
        return [box]
    xs = np.linspace(box.re.lo, box.re.hi, k + 1)
    ys = np.linspace(box.im.lo, box.im.hi, k + 1)
    xs[0], xs[-1], ys[0], ys[-1] = box.re.lo, box.re.hi, box.im.lo, box.im.hi
    pieces = []
    centre = ComplexRect.point(zhat)
    for i in range(k):
        for j in range(k):
            piece = ComplexRect(RealInterval(xs[i], xs[i + 1]), RealInterval(ys[j], ys[j + 1]))
            lower, _ = mag_bounds(piece - centre)
            if lower <= rstar:
                pieces.append(piece)
    return pieces


def _z_bound(g, g1, g2, pieces) -> float:
    """Upper bound of ``|g g''| / |g'|^2`` over the pieces."""
    z = 0.0
    for piece in pieces:
        low = mag_bounds(g1(piece))[0]
        if low <= 0.0:
            raise DerivativeVanishes(f"g' may vanish on {piece!r}")
        num = mag_bounds(g(piece) * g2(piece))[1]
        den = (RealInterval(low) * low).lo
        if den <= 0.0:
            raise DerivativeVanishes(f"|g'|^2 underflows on {piece!r}")
        z = max(z, _up(num / den) if num else 0.0)
    return z


def nk_validate(
    g: RectFn,
    g1: RectFn,
    g2: RectFn,
    zhat: complex,
    rstar: float,
    max_split: int = 16,
) -> RootCertificate:
    """Certify a unique zero of ``g`` near ``zhat``.

    The sup of ``|g g''/g'^2|`` is bounded on the rectangle hull of the disk.
    If that fails, the hull is split into a finer grid of rectangles (those
    missing the disk are dropped) up to ``max_split`` per side.
    """
    zhat = complex(zhat)
    c = ComplexRect.point(zhat)
    d1c = g1(c)
    if mag_bounds(d1c)[0] <= 0.0:
        raise DerivativeVanishes("g' may vanish at the centre")
    Y = mag_bounds(g(c) / d1c)[1]
    k = 1
    err: RootValidationError | None = None
    while k <= max_split:
        try:
            Z = _z_bound(g, g1, g2, _disk_pieces(zhat, rstar, k))
        except DerivativeVanishes as exc:
            err = exc
            k *= 2
            continue
        if Z >= 1.0:
            err = ContractionFailed(f"Z = {Z} >= 1")
        else:
            r0 = _up(Y / _dn(1.0 - Z))
            if r0 < rstar:
                return RootCertificate(zhat, r0, ComplexRect.ball(zhat, r0), Y, Z, rstar)
            err = RadiusTooLarge(f"r0 = {r0} >= r* = {rstar}")
        k *= 2
    assert err is not None
    raise err


def validate_with_retry(g, g1, g2, zhat, rstar=1e-4, retries=8) -> RootCertificate:
    """``nk_validate`` halving ``r*`` after a failed contraction."""
    for _ in range(retries + 1):
        try:
            return nk_validate(g, g1, g2, zhat, rstar)
        except (ContractionFailed, DerivativeVanishes):
            rstar *= 0.5
    return nk_validate(g, g1, g2, zhat, rstar)


# -- Wright's characteristic function -----------------------------------
def dde_delta(alpha, z, order: int = 0) -> ComplexRect:
    """``Delta(z) = z + alpha e^{-z}`` (``order`` 0) and its first two derivatives."""
    alpha = as_interval(alpha)
    e = iv.cplx_exp(-as_rect(z)) * alpha
    if order == 0:
        return as_rect(z) + e
    if order == 1:
        return 1.0 - e
    if order == 2:
        return e
    raise ValueError("order must be 0, 1 or 2")


def newton_float(f, df, z0: complex, steps: int = 50, tol: float = 1e-15) -> complex:
    z = complex(z0)
    for _ in range(steps):
        dz = f(z) / df(z)
        z -= dz
        if abs(dz) <= tol * max(1.0, abs(z)):
            break
    return z


def find_dde_pair(alpha, rstar: float = 1e-4) -> SpectralPair:
    """Validated unstable pair of ``Delta`` for ``pi/2 < alpha < 5 pi/2``.

    The seed is the principal Lambert W value ``W(-alpha)``: ``z e^z = -alpha``
    is equivalent to ``Delta(z) = 0``.
    """
    alpha = as_interval(alpha)
    a = alpha.mid
    if not (math.pi / 2 < a < 5 * math.pi / 2):
        raise ValueError(f"alpha = {a} outside (pi/2, 5 pi/2)")
    seed = complex(lambertw(-a, 0))
    if seed.imag < 0:
        seed = seed.conjugate()
    zhat = newton_float(lambda z: z + a * np.exp(-z), lambda z: 1 - a * np.exp(-z), seed)
    if zhat.real <= 0:
        raise SeedNotInRightHalfPlane(f"Newton converged to {zhat}")
    cert = validate_with_retry(
        lambda z: dde_delta(alpha, z),
        lambda z: dde_delta(alpha, z, 1),
        lambda z: dde_delta(alpha, z, 2),
        zhat,
        rstar,
    )
    if cert.enclosure.re.lo <= 0.0:
        raise SeedNotInRightHalfPlane("enclosure touches the imaginary axis")
    return SpectralPair(cert, cert.conj(), "dde")


# -- pseudospectral census ----------------------------------------------
def _psa_fns(s: ChebyshevScheme):
    return (
        lambda z: delta_n(s, z),
        lambda z: delta_n_derivs(s, z)[0],
        lambda z: delta_n_derivs(s, z)[1],
    )


def census_psa(scheme: ChebyshevScheme, rstar: float = 1e-4) -> Tuple[List[RootCertificate], SpectralPair]:
    """Validate all ``n+1`` zeros of ``Delta_n`` and return the unstable pair.

    Seeds are the floating eigenvalues of the linearised system; each is
    polished by Newton on ``Delta_n`` before validation.
    """
    seeds = np.linalg.eigvals(assemble_an_float(scheme))
    g, g1, g2 = _psa_fns(scheme)
    roots: List[RootCertificate] = []
    for z0 in sorted(seeds, key=lambda z: (-z.real, -z.imag)):
        try:
            zhat = _polish_psa(scheme, z0)
            roots.append(validate_with_retry(g, g1, g2, zhat, rstar))
        except (RootValidationError, NotVerifiablyInvertible) as exc:
            raise CensusCountMismatch(f"could not validate the root near {z0}: {exc}") from exc
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if roots[i].enclosure.intersects(roots[j].enclosure):
                raise EnclosuresOverlap(f"roots {i} and {j} overlap")
    if len(roots) != scheme.n + 1:
        raise CensusCountMismatch(f"{len(roots)} roots for n = {scheme.n}")
    unstable, undecided = [], []
    for r in roots:
        if r.enclosure.re.lo > 0.0:
            unstable.append(r)
        elif r.enclosure.re.hi >= 0.0:
            undecided.append(r)
    if undecided:
        raise UnstableCountNotTwo("a root enclosure touches the imaginary axis", roots, unstable)
    if len(unstable) != 2:
        raise UnstableCountNotTwo(f"{len(unstable)} unstable roots", roots, unstable)
    plus = max(unstable, key=lambda r: r.zhat.imag)
    minus = min(unstable, key=lambda r: r.zhat.imag)
    if not (plus.enclosure.im.lo > 0.0 and minus.enclosure.conj().intersects(plus.enclosure)):
        raise UnstableCountNotTwo("unstable roots are not a conjugate pair", roots, unstable)
    return roots, SpectralPair(plus, plus.conj(), "psa")


def _polish_psa(s: ChebyshevScheme, z0: complex) -> complex:
    d = s.D.mid().real
    d1 = s.D1.mid().real
    a = s.alpha.mid
    eye = np.eye(s.n)

    def f(z):
        return z + a * np.linalg.solve(d - z * eye, d1)[-1]

    def df(z):
        w = np.linalg.solve(d - z * eye, d1)
        return 1 + a * np.linalg.solve(d - z * eye, w)[-1]

    return newton_float(f, df, z0, steps=8)
