"""Truncated bivariate Taylor sequences with interval coefficients.

Coefficients are stored by total degree and, within a degree, by increasing
first index: ``(0,0), (0,1), (1,0), (0,2), (1,1), (2,0), ...``.  The flat
position of ``(a, b)`` is ``k (k + 1) / 2 + a`` with ``k = a + b``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from .interval import ComplexRect, RealInterval, as_interval, cplx_exp
from .linalg import IntervalArray, as_iarray, sum_upper

Index = Tuple[int, int]

CSV_HEADER = ["beta1", "beta2", "re_lo", "re_hi", "im_lo", "im_hi"]


def size(trunc: int) -> int:
    """Number of indices of total degree at most ``trunc``."""
    return (trunc + 1) * (trunc + 2) // 2


def flat_index(beta: Index) -> int:
    a, b = beta
    k = a + b
    return k * (k + 1) // 2 + a


def indices(trunc: int) -> List[Index]:
    return [(a, k - a) for k in range(trunc + 1) for a in range(k + 1)]


def index_arrays(trunc: int) -> Tuple[np.ndarray, np.ndarray]:
    idx = np.array(indices(trunc), dtype=int).reshape(-1, 2)
    return idx[:, 0], idx[:, 1]


def degrees(trunc: int) -> np.ndarray:
    b1, b2 = index_arrays(trunc)
    return b1 + b2


@dataclass(frozen=True)
class TaylorSeq2:
    """Coefficients ``x_beta`` for ``|beta| <= trunc``; zero beyond."""

    trunc: int
    coeffs: IntervalArray  # flat, length size(trunc)

    def __post_init__(self):
        if self.coeffs.shape != (size(self.trunc),):
            raise ValueError(f"expected {size(self.trunc)} coefficients, got {self.coeffs.shape}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, trunc: int) -> "TaylorSeq2":
        return cls(trunc, IntervalArray.zeros(size(trunc)))

    @classmethod
    def from_points(cls, values, trunc: int | None = None) -> "TaylorSeq2":
        values = np.asarray(values, dtype=complex)
        if trunc is None:
            trunc = _trunc_of(values.shape[0])
        return cls(trunc, IntervalArray.point(values))

    @classmethod
    def from_dict(cls, coeffs: dict, trunc: int) -> "TaylorSeq2":
        values = np.zeros(size(trunc), dtype=complex)
        for beta, v in coeffs.items():
            values[flat_index(beta)] = v
        return cls.from_points(values, trunc)

    @classmethod
    def from_grid(cls, grid: IntervalArray, trunc: int) -> "TaylorSeq2":
        b1, b2 = index_arrays(trunc)
        return cls(trunc, grid[b1, b2])

    # -- access -----------------------------------------------------------
    def __getitem__(self, beta: Index) -> ComplexRect:
        if beta[0] < 0 or beta[1] < 0 or sum(beta) > self.trunc:
            return ComplexRect(0.0)
        return self.coeffs.rect(flat_index(beta))

    def items(self) -> Iterator[Tuple[Index, ComplexRect]]:
        for i, beta in enumerate(indices(self.trunc)):
            yield beta, self.coeffs.rect(i)

    def mid(self) -> np.ndarray:
        return self.coeffs.mid()

    def grid(self, side: int | None = None) -> IntervalArray:
        """Square array ``G[a, b] = x_(a,b)`` with zeros outside the triangle."""
        side = self.trunc + 1 if side is None else side
        out = np.zeros((4, side, side))
        b1, b2 = index_arrays(self.trunc)
        keep = (b1 < side) & (b2 < side)
        c = self.coeffs
        for k, arr in enumerate((c.rl, c.rh, c.il, c.ih)):
            out[k, b1[keep], b2[keep]] = arr[keep]
        return IntervalArray(*out)

    def retrunc(self, trunc: int) -> "TaylorSeq2":
        """Same sequence stored to a different degree (cut or zero-padded)."""
        if trunc <= self.trunc:
            return TaylorSeq2(trunc, self.coeffs[: size(trunc)])
        pad = IntervalArray.zeros(size(trunc) - size(self.trunc))
        c = self.coeffs
        return TaylorSeq2(
            trunc,
            IntervalArray(
                np.concatenate([c.rl, pad.rl]), np.concatenate([c.rh, pad.rh]),
                np.concatenate([c.il, pad.il]), np.concatenate([c.ih, pad.ih]),
            ),
        )

    def __add__(self, other: "TaylorSeq2") -> "TaylorSeq2":
        t = max(self.trunc, other.trunc)
        return TaylorSeq2(t, self.retrunc(t).coeffs + other.retrunc(t).coeffs)

    def __sub__(self, other: "TaylorSeq2") -> "TaylorSeq2":
        t = max(self.trunc, other.trunc)
        return TaylorSeq2(t, self.retrunc(t).coeffs - other.retrunc(t).coeffs)

    def scale(self, c) -> "TaylorSeq2":
        return TaylorSeq2(self.trunc, self.coeffs * as_iarray(c))


def _trunc_of(n: int) -> int:
    t = int((np.sqrt(8 * n + 1) - 3) // 2)
    while size(t) < n:
        t += 1
    if size(t) != n:
        raise ValueError(f"{n} is not a triangular size")
    return t


def ell1_norm(x: TaylorSeq2) -> RealInterval:
    """Enclosure of ``sum |x_beta|`` (the upper end is the rigorous bound)."""
    lower = float(np.sum(x.coeffs.mag_lower()))
    upper = float(sum_upper(x.coeffs.mag_upper()))
    return RealInterval(min(np.nextafter(lower, -np.inf), upper), upper)


def conv(x: TaylorSeq2, y: TaylorSeq2, out_trunc: int | None = None) -> TaylorSeq2:
    """Cauchy product truncated at total degree ``out_trunc``."""
    full = x.trunc + y.trunc
    out_trunc = full if out_trunc is None else out_trunc
    if out_trunc > full:
        raise ValueError("out_trunc exceeds trunc(x) + trunc(y)")
    side = out_trunc + 1
    gy = y.grid(side)
    acc = IntervalArray.zeros((side, side))
    c = x.coeffs
    nonzero = (c.rl != 0) | (c.rh != 0) | (c.il != 0) | (c.ih != 0)
    for i, (a, b) in enumerate(indices(min(x.trunc, out_trunc))):
        if not nonzero[i]:
            continue
        term = gy[: side - a, : side - b] * x.coeffs[i]
        acc = _place(acc, acc[a:, b:] + term, a, b)
    return TaylorSeq2.from_grid(acc, out_trunc)


def _place(acc: IntervalArray, block: IntervalArray, a: int, b: int) -> IntervalArray:
    out = [arr.copy() for arr in (acc.rl, acc.rh, acc.il, acc.ih)]
    for arr, src in zip(out, (block.rl, block.rh, block.il, block.ih)):
        arr[a:, b:] = src
    return IntervalArray(*out)


def project(x: TaylorSeq2, N: int, part: str = "head") -> TaylorSeq2:
    """``head`` keeps ``|beta| <= N``; ``tail`` keeps ``|beta| > N``."""
    deg = degrees(x.trunc)
    if part == "head":
        keep = deg <= N
    elif part == "tail":
        keep = deg > N
    else:
        raise ValueError("part must be 'head' or 'tail'")
    zero = IntervalArray.zeros(x.coeffs.shape)
    return TaylorSeq2(x.trunc, zero.with_entries(keep, x.coeffs))


# -- diagonal multipliers ------------------------------------------------
@dataclass(frozen=True)
class MultiplierTable:
    """Diagonal values ``m_beta`` of ``r`` (DDE) or ``r_n`` (PSA)."""

    values: IntervalArray  # flat, length size(maxdeg)
    kind: str
    maxdeg: int

    def __getitem__(self, beta: Index) -> ComplexRect:
        return self.values.rect(flat_index(beta))


def exponents(lam, maxdeg: int) -> IntervalArray:
    """Enclosures of ``<lambda, beta> = Re(l+) |beta| + i Im(l+) (b1 - b2)``.

    ``lam`` is any object with ``re`` and ``im`` intervals for the root with
    positive imaginary part; the conjugate root is its exact mirror image.
    """
    re, im = as_interval(lam.re), as_interval(lam.im)
    b1, b2 = index_arrays(maxdeg)
    s = (b1 + b2).astype(float)
    d = (b1 - b2).astype(float)
    re_part = IntervalArray(re.lo, re.hi) * s
    im_part = IntervalArray(im.lo, im.hi) * d
    return IntervalArray(re_part.rl, re_part.rh, im_part.rl, im_part.rh)


def multipliers(kind: str, lam, scheme=None, maxdeg: int = 0) -> MultiplierTable:
    """Tables ``e^{-<lambda,beta>}`` (dde) or ``((D - <lambda_n,beta> I)^{-1} D 1)_n`` (psa)."""
    z = exponents(lam, maxdeg)
    if kind == "dde":
        vals = IntervalArray.from_rects([cplx_exp(-r) for r in z.rects()])
    elif kind == "psa":
        from .cheb import blowup_last_batch
        from .linalg import NotVerifiablyInvertible

        if scheme is None:
            raise ValueError("psa multipliers need a scheme")
        vals, ok = blowup_last_batch(scheme, z)
        if not np.all(ok):
            bad = indices(maxdeg)[int(np.argmin(ok))]
            raise NotVerifiablyInvertible(f"D - <lambda_n, beta> I at beta = {bad}")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return MultiplierTable(vals, kind, maxdeg)


def apply_multiplier(x: TaylorSeq2, m: MultiplierTable) -> TaylorSeq2:
    if m.maxdeg < x.trunc:
        raise ValueError("multiplier table shorter than the sequence")
    return TaylorSeq2(x.trunc, x.coeffs * m.values[: size(x.trunc)])


# -- CSV ------------------------------------------------------------------
def write_csv(x: TaylorSeq2, path) -> None:
    """Write ``x`` to a path or an open text stream."""
    if hasattr(path, "write"):
        _write_rows(x, path)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(x, fh)


def _write_rows(x: TaylorSeq2, fh) -> None:
    c = x.coeffs
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i, (a, b) in enumerate(indices(x.trunc)):
        w.writerow([a, b, repr(float(c.rl[i])), repr(float(c.rh[i])),
                    repr(float(c.il[i])), repr(float(c.ih[i]))])


def read_csv(path) -> TaylorSeq2:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip() for h in rows[0]] != CSV_HEADER:
        raise ValueError(f"missing header {CSV_HEADER}")
    body = rows[1:]
    trunc = max(int(r[0]) + int(r[1]) for r in body) if body else 0
    vals = np.zeros((4, size(trunc)))
    for r in body:
        i = flat_index((int(r[0]), int(r[1])))
        vals[:, i] = [float(v) for v in r[2:6]]
    return TaylorSeq2(trunc, IntervalArray(*vals))
