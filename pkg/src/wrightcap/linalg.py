"""Complex interval arrays, rigorous norms and verified linear solves.

``IntervalArray`` stores a rectangle per entry as four float arrays.  Dense
products use the midpoint-radius form: the midpoint product is computed with
BLAS and enclosed with the a priori bound ``|fl(AB) - AB| <= g_k |A||B|``, which
holds for any summation order.  Radii are propagated through nonnegative
products whose rounding is covered by the same bound.
"""
from __future__ import annotations

import numpy as np

from .interval import ComplexRect, DivisionByZeroInterval, RealInterval, as_rect

_U = 2.0 ** -53
_ETA = 2.0 ** -1074  # smallest subnormal
_INF = np.inf


class DimensionMismatch(ValueError):
    pass


class NotVerifiablyInvertible(ArithmeticError):
    """The contraction test ``||I - R A|| < 1`` failed."""


class NumericallySingular(ArithmeticError):
    pass


def _dn(x):
    return np.nextafter(x, -_INF)


def _up(x):
    return np.nextafter(x, _INF)


def _add_dn(a, b):
    """Lower bound of ``a + b``; exact sums (TwoSum error zero) are not widened."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    with np.errstate(invalid="ignore"):
        exact = np.isfinite(s) & np.isfinite(err) & (err >= 0)
    return np.where(exact, s, _dn(s))


def _add_up(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    with np.errstate(invalid="ignore"):
        exact = np.isfinite(s) & np.isfinite(err) & (err <= 0)
    return np.where(exact, s, _up(s))


def _gamma(k: int) -> float:
    # generous version of (k+2)u / (1 - (k+2)u), also absorbs the rounding
    # of the bounding product itself
    k = max(int(k), 1)
    return 2.0 * (k + 2) * _U


def _enclose_mm(a, b):
    """Rigorous ``[lo, hi]`` for the exact product of float matrices."""
    c = np.matmul(a, b)
    t = np.matmul(np.abs(a), np.abs(b))
    k = a.shape[-1]
    e = _up(_up(_gamma(k) * t) + 2 * k * _ETA)
    return _dn(c - e), _up(c + e)


def _upper_mm(a, b):
    """Upper bound for the exact product of nonnegative float matrices."""
    t = np.matmul(a, b)
    k = a.shape[-1]
    return _up(_up(t * (1.0 + _gamma(k))) + 2 * k * _ETA)


def _mid_rad(lo, hi):
    m = 0.5 * lo + 0.5 * hi
    r = _up(np.maximum(m - lo, hi - m))
    return m, r


def _real_mm(al, ah, bl, bh):
    """Enclosure of the product of real interval matrices."""
    am, ar = _mid_rad(al, ah)
    bm, br = _mid_rad(bl, bh)
    cl, ch = _enclose_mm(am, bm)
    if not (ar.any() or br.any()):
        return cl, ch
    lhs = np.concatenate([np.abs(am), ar], axis=-1)
    rhs = np.concatenate([br, _up(np.abs(bm) + br)], axis=-2)
    rad = _upper_mm(lhs, rhs)
    return _dn(cl - rad), _up(ch + rad)


def _rmul(al, ah, bl, bh):
    """Elementwise product of real intervals."""
    los, his = [], []
    for a, b in ((al, bl), (al, bh), (ah, bl), (ah, bh)):
        p = a * b
        # a product with a zero factor is exactly zero
        exact = (a == 0) | (b == 0)
        los.append(np.where(exact, p, _dn(p)))
        his.append(np.where(exact, p, _up(p)))
    lo = np.minimum(np.minimum(los[0], los[1]), np.minimum(los[2], los[3]))
    hi = np.maximum(np.maximum(his[0], his[1]), np.maximum(his[2], his[3]))
    return lo, hi


def _rdiv(al, ah, bl, bh):
    q1, q2, q3, q4 = al / bl, al / bh, ah / bl, ah / bh
    lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
    hi = np.maximum(np.maximum(q1, q2), np.maximum(q3, q4))
    return _dn(lo), _up(hi)


def _rsqr(lo, hi):
    mig = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(np.abs(lo), np.abs(hi)))
    mag = np.maximum(np.abs(lo), np.abs(hi))
    return np.maximum(0.0, _dn(mig * mig)), _up(mag * mag)


def sum_upper(x, axis=-1):
    """Upper bound of the exact sum of a float array along ``axis``."""
    x = np.asarray(x, dtype=float)
    s = np.sum(x, axis=axis)
    a = np.sum(np.abs(x), axis=axis)
    k = x.shape[axis] if x.ndim else 1
    # an all-zero slice sums to exactly zero
    return np.where(a == 0, 0.0, _up(s + _up(_gamma(k) * a)))


def sum_lower(x, axis=-1):
    return -sum_upper(-np.asarray(x, dtype=float), axis=axis)


class IntervalArray:
    """Array of complex rectangles with broadcasting arithmetic.

    Real matrices are stored with a zero imaginary part.
    """

    __slots__ = ("rl", "rh", "il", "ih")

    def __init__(self, rl, rh, il=None, ih=None):
        rl = np.asarray(rl, dtype=float)
        rh = np.asarray(rh, dtype=float)
        il = np.zeros_like(rl) if il is None else np.asarray(il, dtype=float)
        ih = np.zeros_like(rl) if ih is None else np.asarray(ih, dtype=float)
        rl, rh, il, ih = np.broadcast_arrays(rl, rh, il, ih)
        self.rl, self.rh, self.il, self.ih = (np.array(v) for v in (rl, rh, il, ih))

    # -- constructors -----------------------------------------------------
    @classmethod
    def point(cls, z) -> "IntervalArray":
        z = np.asarray(z, dtype=complex)
        return cls(z.real, z.real, z.imag, z.imag)

    @classmethod
    def zeros(cls, shape) -> "IntervalArray":
        z = np.zeros(shape)
        return cls(z, z, z, z)

    @classmethod
    def from_rects(cls, rects, shape=None) -> "IntervalArray":
        rects = [as_rect(r) for r in rects]
        arr = np.array([[r.re.lo, r.re.hi, r.im.lo, r.im.hi] for r in rects], dtype=float)
        arr = arr.reshape(-1, 4)
        out = cls(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])
        return out.reshape(shape) if shape is not None else out

    @classmethod
    def ball(cls, centre, rad) -> "IntervalArray":
        c = np.asarray(centre, dtype=complex)
        r = np.asarray(rad, dtype=float)
        return cls(_dn(c.real - r), _up(c.real + r), _dn(c.imag - r), _up(c.imag + r))

    # -- shape handling ---------------------------------------------------
    @property
    def shape(self):
        return self.rl.shape

    @property
    def ndim(self):
        return self.rl.ndim

    def __len__(self):
        return len(self.rl)

    def _map(self, f) -> "IntervalArray":
        return IntervalArray(f(self.rl), f(self.rh), f(self.il), f(self.ih))

    def __getitem__(self, idx) -> "IntervalArray":
        return self._map(lambda a: a[idx])

    def reshape(self, *shape) -> "IntervalArray":
        return self._map(lambda a: a.reshape(*shape))

    @property
    def T(self) -> "IntervalArray":
        return self._map(lambda a: np.swapaxes(a, -1, -2))

    def rect(self, idx) -> ComplexRect:
        """Entry at ``idx`` as a scalar ``ComplexRect``."""
        return ComplexRect(
            RealInterval(self.rl[idx], self.rh[idx]), RealInterval(self.il[idx], self.ih[idx])
        )

    def rects(self):
        flat = self.reshape(-1)
        return [flat.rect(i) for i in range(flat.shape[0])]

    def with_entries(self, mask, other: "IntervalArray") -> "IntervalArray":
        """Copy with entries where ``mask`` holds replaced from ``other``."""
        o = _as_iarray(other)
        return IntervalArray(
            np.where(mask, o.rl, self.rl),
            np.where(mask, o.rh, self.rh),
            np.where(mask, o.il, self.il),
            np.where(mask, o.ih, self.ih),
        )

    # -- queries ----------------------------------------------------------
    def mid(self) -> np.ndarray:
        return (0.5 * self.rl + 0.5 * self.rh) + 1j * (0.5 * self.il + 0.5 * self.ih)

    def rad(self) -> np.ndarray:
        """Upper bound on the half-width of each entry (max over both axes)."""
        _, rr = _mid_rad(self.rl, self.rh)
        _, ri = _mid_rad(self.il, self.ih)
        return np.maximum(rr, ri)

    def mag_upper(self) -> np.ndarray:
        mx = np.maximum(np.abs(self.rl), np.abs(self.rh))
        my = np.maximum(np.abs(self.il), np.abs(self.ih))
        sx = np.where(mx == 0, 0.0, _up(mx * mx))
        sy = np.where(my == 0, 0.0, _up(my * my))
        s = _add_up(sx, sy)
        return np.where(s == 0, 0.0, _up(np.sqrt(s)))

    def mag_lower(self) -> np.ndarray:
        dx = np.where(self.rl > 0, self.rl, np.where(self.rh < 0, -self.rh, 0.0))
        dy = np.where(self.il > 0, self.il, np.where(self.ih < 0, -self.ih, 0.0))
        s = _dn(_dn(dx * dx) + _dn(dy * dy))
        return np.maximum(0.0, _dn(np.sqrt(np.maximum(s, 0.0))))

    def contains(self, z) -> np.ndarray:
        if isinstance(z, IntervalArray):
            return (self.rl <= z.rl) & (z.rh <= self.rh) & (self.il <= z.il) & (z.ih <= self.ih)
        z = np.asarray(z, dtype=complex)
        return (self.rl <= z.real) & (z.real <= self.rh) & (self.il <= z.imag) & (z.imag <= self.ih)

    def intersects(self, other: "IntervalArray") -> np.ndarray:
        o = _as_iarray(other)
        return (self.rl <= o.rh) & (o.rl <= self.rh) & (self.il <= o.ih) & (o.il <= self.ih)

    def is_real(self) -> bool:
        return not (self.il.any() or self.ih.any())

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "IntervalArray":
        return IntervalArray(-self.rh, -self.rl, -self.ih, -self.il)

    def conj(self) -> "IntervalArray":
        return IntervalArray(self.rl, self.rh, -self.ih, -self.il)

    def __add__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        return IntervalArray(
            _add_dn(self.rl, o.rl), _add_up(self.rh, o.rh),
            _add_dn(self.il, o.il), _add_up(self.ih, o.ih),
        )

    __radd__ = __add__

    def __sub__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        a_l, a_h = _rmul(self.rl, self.rh, o.rl, o.rh)
        b_l, b_h = _rmul(self.il, self.ih, o.il, o.ih)
        c_l, c_h = _rmul(self.rl, self.rh, o.il, o.ih)
        d_l, d_h = _rmul(self.il, self.ih, o.rl, o.rh)
        return IntervalArray(
            _add_dn(a_l, -b_h), _add_up(a_h, -b_l), _add_dn(c_l, d_l), _add_up(c_h, d_h)
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "IntervalArray":
        sl, sh = _rsqr(self.rl, self.rh)
        tl, th = _rsqr(self.il, self.ih)
        dl, dh = _dn(sl + tl), _up(sh + th)
        if np.any(dl <= 0):
            raise DivisionByZeroInterval("reciprocal of a rectangle touching zero")
        rl, rh = _rdiv(self.rl, self.rh, dl, dh)
        il, ih = _rdiv(-self.ih, -self.il, dl, dh)
        return IntervalArray(rl, rh, il, ih)

    def __truediv__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __matmul__(self, other) -> "IntervalArray":
        o = _as_iarray(other)
        if o is NotImplemented:
            return o
        return matmul(self, o)

    def __rmatmul__(self, other) -> "IntervalArray":
        return matmul(_as_iarray(other), self)

    def sum(self, axis=-1) -> "IntervalArray":
        return IntervalArray(
            sum_lower(self.rl, axis), sum_upper(self.rh, axis),
            sum_lower(self.il, axis), sum_upper(self.ih, axis),
        )

    def __repr__(self) -> str:
        return f"IntervalArray(shape={self.shape}, mid={self.mid()!r})"


# aliases for the two common shapes
IntervalVector = IntervalArray
IntervalMatrix = IntervalArray


def _as_iarray(x):
    if isinstance(x, IntervalArray):
        return x
    if isinstance(x, ComplexRect):
        return IntervalArray(x.re.lo, x.re.hi, x.im.lo, x.im.hi)
    if isinstance(x, RealInterval):
        return IntervalArray(x.lo, x.hi, 0.0, 0.0)
    if isinstance(x, (int, float, complex, np.ndarray, np.number)) and not isinstance(x, bool):
        return IntervalArray.point(x)
    return NotImplemented


def as_iarray(x) -> IntervalArray:
    out = _as_iarray(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to IntervalArray")
    return out


def matmul(a: IntervalArray, b: IntervalArray) -> IntervalArray:
    """Rigorous product of complex interval matrices (batched over leading axes)."""
    if a.shape[-1] != b.shape[-2 if b.ndim > 1 else 0]:
        raise DimensionMismatch(f"{a.shape} @ {b.shape}")
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    if a.is_real() and b.is_real():
        rl, rh = _real_mm(a.rl, a.rh, b.rl, b.rh)
        il = ih = np.zeros_like(rl)
    else:
        # re = [Ar, -Ai] @ [Br; Bi],  im = [Ar, Ai] @ [Bi; Br]
        lre_l = np.concatenate([a.rl, -a.ih], axis=-1)
        lre_h = np.concatenate([a.rh, -a.il], axis=-1)
        rre_l = np.concatenate([b.rl, b.il], axis=-2)
        rre_h = np.concatenate([b.rh, b.ih], axis=-2)
        rl, rh = _real_mm(lre_l, lre_h, rre_l, rre_h)
        lim_l = np.concatenate([a.rl, a.il], axis=-1)
        lim_h = np.concatenate([a.rh, a.ih], axis=-1)
        rim_l = np.concatenate([b.il, b.rl], axis=-2)
        rim_h = np.concatenate([b.ih, b.rh], axis=-2)
        il, ih = _real_mm(lim_l, lim_h, rim_l, rim_h)
    out = IntervalArray(rl, rh, il, ih)
    return out[..., 0] if vec else out


def mat_vec(a: IntervalArray, x: IntervalArray) -> IntervalArray:
    a, x = as_iarray(a), as_iarray(x)
    if a.ndim != 2 or x.ndim != 1 or a.shape[1] != x.shape[0]:
        raise DimensionMismatch(f"{a.shape} x {x.shape}")
    return matmul(a, x)


def inf_norm_upper(a: IntervalArray) -> float:
    """Upper bound of the induced infinity norm (max row sum)."""
    a = as_iarray(a)
    return float(np.max(sum_upper(a.mag_upper(), axis=-1)))


def one_norm_upper(a: IntervalArray) -> float:
    """Upper bound of the induced 1-norm (max column sum)."""
    a = as_iarray(a)
    return float(np.max(sum_upper(a.mag_upper(), axis=-2)))


def identity(n: int) -> IntervalArray:
    return IntervalArray.point(np.eye(n))


def float_inverse(a) -> np.ndarray:
    """LU-based floating inverse; no rigor claimed."""
    a = np.asarray(a)
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise NumericallySingular(str(exc)) from exc
    if not np.all(np.isfinite(inv)):
        raise NumericallySingular("inverse has non-finite entries")
    return inv


def verified_solve_batch(a: IntervalArray, b: IntervalArray):
    """Enclose ``A^{-1} b`` for a stack of systems.

    ``a`` has shape ``(..., n, n)`` and ``b`` shape ``(..., n)``.  Returns the
    enclosure and a boolean mask marking the systems whose contraction test
    ``||I - R A||_inf < 1`` succeeded.  Entries of failed systems are
    meaningless.
    """
    a, b = as_iarray(a), as_iarray(b)
    n = a.shape[-1]
    if a.shape[-2] != n or b.shape[-1] != n:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    am = a.mid()
    try:
        r = np.linalg.inv(am)
    except np.linalg.LinAlgError:
        # fall back to per-system inversion to isolate the singular ones
        flat = am.reshape(-1, n, n)
        r = np.empty_like(flat)
        for i, m in enumerate(flat):
            try:
                r[i] = np.linalg.inv(m)
            except np.linalg.LinAlgError:
                r[i] = 0.0
        r = r.reshape(am.shape)
    r = np.where(np.isfinite(r), r, 0.0)
    xh = np.matmul(r, b.mid()[..., None])[..., 0]
    xh = np.where(np.isfinite(xh), xh, 0.0)
    R = IntervalArray.point(r)
    res = b - matmul(a, IntervalArray.point(xh[..., None]))[..., 0]
    corr = matmul(R, res.reshape(*res.shape, 1))[..., 0]
    c = identity(n) - matmul(R, a)
    rows = sum_upper(c.mag_upper(), axis=-1)
    beta = np.max(rows, axis=-1)
    ok = beta < 1.0
    num = np.max(corr.mag_upper(), axis=-1)
    denom = np.where(ok, _dn(1.0 - beta), 1.0)
    rho = _up(num / denom)
    spread = _up(rows * rho[..., None])
    x = IntervalArray.point(xh) + corr + IntervalArray(-spread, spread, -spread, spread)
    return x, ok


def verified_solve(a: IntervalArray, b: IntervalArray) -> IntervalArray:
    """Enclosure of the solution set of ``A x = b``; success proves ``A`` invertible."""
    a, b = as_iarray(a), as_iarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix of shape {a.shape} is not square")
    x, ok = verified_solve_batch(a, b)
    if not bool(ok):
        raise NotVerifiablyInvertible("||I - R A|| >= 1")
    return x
