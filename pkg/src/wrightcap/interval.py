"""Rigorous real and complex interval arithmetic.

Every operation rounds to nearest and then pushes each endpoint one or more
representable values outward with ``math.nextafter``.  A correctly rounded
operation is off by at most half an ulp, so one nudge is enough for
``+ - * /`` and ``sqrt``.  The libm ``exp``, ``sin`` and ``cos`` are trusted to
within one ulp and get two nudges.

Complex numbers are axis-aligned rectangles of two real intervals.
"""
from __future__ import annotations

import math
from typing import Iterable, Tuple, Union

Number = Union[int, float]

_INF = math.inf

# Largest argument accepted by the interval sine and cosine.
REDUCTION_LIMIT = 2.0 ** 40


class IntervalError(ArithmeticError):
    """Base class for interval failures."""


class DivisionByZeroInterval(IntervalError):
    """The divisor interval contains zero."""


class ArgumentReductionOverflow(IntervalError):
    """A trigonometric argument is beyond the supported reduction range."""


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _two_sum_err(a: float, b: float, s: float) -> float:
    """Rounding error ``(a + b) - s`` of ``s = fl(a + b)`` (NaN on overflow)."""
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _sum_dn(a: float, b: float) -> float:
    s = a + b
    e = _two_sum_err(a, b, s)
    return s if math.isfinite(s) and math.isfinite(e) and e >= 0 else _dn(s)


def _sum_up(a: float, b: float) -> float:
    s = a + b
    e = _two_sum_err(a, b, s)
    return s if math.isfinite(s) and math.isfinite(e) and e <= 0 else _up(s)


def _prod_dn(a: float, b: float) -> float:
    p = a * b
    return p if a == 0 or b == 0 else _dn(p)


def _prod_up(a: float, b: float) -> float:
    p = a * b
    return p if a == 0 or b == 0 else _up(p)


class RealInterval:
    """Closed interval ``[lo, hi]`` of doubles with outward-rounded arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number, hi: Number | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoint is NaN")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("RealInterval is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def hull(cls, *xs: "RealInterval | Number") -> "RealInterval":
        items = [as_interval(x) for x in xs]
        return cls(min(x.lo for x in items), max(x.hi for x in items))

    # -- queries ----------------------------------------------------------
    @property
    def mid(self) -> float:
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def width(self) -> float:
        return _up(self.hi - self.lo)

    @property
    def rad(self) -> float:
        m = self.mid
        return _up(max(m - self.lo, self.hi - m))

    def mag(self) -> float:
        """Largest absolute value in the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> float:
        """Smallest absolute value in the interval."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x: "RealInterval | Number") -> bool:
        x = as_interval(x)
        return self.lo <= x.lo and x.hi <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def intersects(self, other: "RealInterval | Number") -> bool:
        other = as_interval(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "RealInterval":
        return RealInterval(-self.hi, -self.lo)

    def __pos__(self) -> "RealInterval":
        return self

    def __add__(self, other) -> "RealInterval":
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return RealInterval(_sum_dn(self.lo, o.lo), _sum_up(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "RealInterval":
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return RealInterval(_sum_dn(self.lo, -o.hi), _sum_up(self.hi, -o.lo))

    def __rsub__(self, other) -> "RealInterval":
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other) -> "RealInterval":
        o = _coerce(other)
        if o is NotImplemented:
            return o
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return RealInterval(min(_prod_dn(a, b) for a, b in pairs), max(_prod_up(a, b) for a, b in pairs))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealInterval":
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByZeroInterval(f"division by {o!r}")
        q = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return RealInterval(_dn(min(q)), _up(max(q)))

    def __rtruediv__(self, other) -> "RealInterval":
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def reciprocal(self) -> "RealInterval":
        return RealInterval(1.0) / self

    def sqr(self) -> "RealInterval":
        """Square, tighter than ``x * x`` when the interval straddles zero."""
        m, M = self.mig(), self.mag()
        return RealInterval(max(0.0, _prod_dn(m, m)), _prod_up(M, M))

    def sqrt(self) -> "RealInterval":
        if self.hi < 0.0:
            raise ValueError("sqrt of a negative interval")
        lo = 0.0 if self.lo <= 0.0 else max(0.0, _dn(math.sqrt(self.lo)))
        hi = 0.0 if self.hi == 0.0 else _up(math.sqrt(self.hi))
        return RealInterval(lo, hi)

    def __abs__(self) -> "RealInterval":
        return RealInterval(self.mig(), self.mag())

    # -- comparison and display -------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"RealInterval({self.lo!r}, {self.hi!r})"


def as_interval(x: "RealInterval | Number") -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    return _exact(x)


def _exact(x: Number) -> RealInterval:
    f = float(x)
    if isinstance(x, int) and int(f) != x:
        # large integers that do not fit a double exactly
        return RealInterval(_dn(f), _up(f))
    return RealInterval(f, f)


def _coerce(x):
    if isinstance(x, RealInterval):
        return x
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return _exact(x)
    return NotImplemented


# -- elementary functions ------------------------------------------------
def _libm_dn(v: float) -> float:
    return _dn(_dn(v))


def _libm_up(v: float) -> float:
    return _up(_up(v))


def exp(x: "RealInterval | Number") -> RealInterval:
    """Interval exponential; arguments far below zero give ``[0, tiny]``."""
    x = as_interval(x)
    lo = max(0.0, _libm_dn(math.exp(x.lo))) if x.lo > -_INF else 0.0
    try:
        hi = _libm_up(math.exp(x.hi))
    except OverflowError:
        hi = _INF
    if x.lo < -700.0:
        lo = 0.0
    return RealInterval(lo, hi)


# pi = PI_HI + PI_LO with PI_HI the double nearest to pi
_PI_HI = math.pi
_PI_LO = RealInterval(_dn(1.2246467991473532e-16), _up(1.2246467991473532e-16))
PI = RealInterval(math.pi, _up(math.pi))


def _half_pi_multiple(j: int) -> RealInterval:
    """Enclosure of ``j * pi / 2`` from the two-word form of pi."""
    jj = RealInterval(j)
    return jj * (0.5 * _PI_HI) + jj * (_PI_LO * 0.5)


def _trig(x: RealInterval, fn, peaks: dict) -> RealInterval:
    if max(abs(x.lo), abs(x.hi)) > REDUCTION_LIMIT:
        raise ArgumentReductionOverflow(f"|x| > 2^40 in {x!r}")
    if x.hi - x.lo >= 6.28:
        return RealInterval(-1.0, 1.0)
    a, b = fn(x.lo), fn(x.hi)
    lo = max(-1.0, _libm_dn(min(a, b)))
    hi = min(1.0, _libm_up(max(a, b)))
    # critical points j*pi/2 that may lie inside x
    j0 = math.floor(x.lo / (0.5 * _PI_HI)) - 1
    j1 = math.ceil(x.hi / (0.5 * _PI_HI)) + 1
    for j in range(j0, j1 + 1):
        if _half_pi_multiple(j).intersects(x):
            v = peaks.get(j % 4)
            if v == 1.0:
                hi = 1.0
            elif v == -1.0:
                lo = -1.0
    return RealInterval(lo, hi)


def sin(x: "RealInterval | Number") -> RealInterval:
    return _trig(as_interval(x), math.sin, {1: 1.0, 3: -1.0})


def cos(x: "RealInterval | Number") -> RealInterval:
    return _trig(as_interval(x), math.cos, {0: 1.0, 2: -1.0})


def elem_fns(x: "RealInterval | Number", which: str) -> RealInterval:
    """Dispatch to ``exp``, ``sin`` or ``cos`` by name."""
    table = {"exp": exp, "sin": sin, "cos": cos}
    if which not in table:
        raise ValueError(f"unknown function {which!r}")
    return table[which](x)


# -- complex rectangles --------------------------------------------------
class ComplexRect:
    """Rectangle ``re + i*im`` of two real intervals."""

    __slots__ = ("re", "im")

    def __init__(self, re: "RealInterval | Number", im: "RealInterval | Number" = 0.0):
        object.__setattr__(self, "re", as_interval(re))
        object.__setattr__(self, "im", as_interval(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRect is immutable")

    @classmethod
    def point(cls, z: complex) -> "ComplexRect":
        z = complex(z)
        return cls(z.real, z.imag)

    @classmethod
    def ball(cls, z: complex, r: float) -> "ComplexRect":
        """Square of half-width ``r`` centred at ``z``, outward rounded."""
        z = complex(z)
        return cls(
            RealInterval(_dn(z.real - r), _up(z.real + r)),
            RealInterval(_dn(z.imag - r), _up(z.imag + r)),
        )

    @classmethod
    def hull(cls, *zs: "ComplexRect") -> "ComplexRect":
        return cls(RealInterval.hull(*[z.re for z in zs]), RealInterval.hull(*[z.im for z in zs]))

    @property
    def mid(self) -> complex:
        return complex(self.re.mid, self.im.mid)

    def conj(self) -> "ComplexRect":
        return ComplexRect(self.re, -self.im)

    def contains(self, z: "ComplexRect | complex | Number") -> bool:
        z = as_rect(z)
        return self.re.contains(z.re) and self.im.contains(z.im)

    def __contains__(self, z) -> bool:
        return self.contains(z)

    def intersects(self, other: "ComplexRect | complex") -> bool:
        other = as_rect(other)
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def __neg__(self) -> "ComplexRect":
        return ComplexRect(-self.re, -self.im)

    def __add__(self, other) -> "ComplexRect":
        o = _coerce_c(other)
        if o is NotImplemented:
            return o
        return ComplexRect(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "ComplexRect":
        o = _coerce_c(other)
        if o is NotImplemented:
            return o
        return ComplexRect(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "ComplexRect":
        o = _coerce_c(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other) -> "ComplexRect":
        if isinstance(other, RealInterval):
            return ComplexRect(self.re * other, self.im * other)
        o = _coerce_c(other)
        if o is NotImplemented:
            return o
        return ComplexRect(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def reciprocal(self) -> "ComplexRect":
        den = self.re.sqr() + self.im.sqr()
        if den.lo <= 0.0:
            raise DivisionByZeroInterval(f"reciprocal of {self!r}")
        return ComplexRect(self.re / den, -self.im / den)

    def __truediv__(self, other) -> "ComplexRect":
        if isinstance(other, RealInterval):
            return ComplexRect(self.re / other, self.im / other)
        o = _coerce_c(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other) -> "ComplexRect":
        o = _coerce_c(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexRect):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"ComplexRect({self.re!r}, {self.im!r})"


def as_rect(z) -> ComplexRect:
    if isinstance(z, ComplexRect):
        return z
    if isinstance(z, RealInterval):
        return ComplexRect(z, 0.0)
    return ComplexRect.point(complex(z))


def _coerce_c(x):
    if isinstance(x, ComplexRect):
        return x
    if isinstance(x, RealInterval):
        return ComplexRect(x, 0.0)
    if isinstance(x, (int, float, complex)) and not isinstance(x, bool):
        return ComplexRect.point(complex(x))
    return NotImplemented


def cplx_exp(z: "ComplexRect | complex") -> ComplexRect:
    """Enclosure of ``exp`` over a rectangle via ``e^re (cos im + i sin im)``."""
    z = as_rect(z)
    r = exp(z.re)
    return ComplexRect(r * cos(z.im), r * sin(z.im))


def mag_bounds(z: "ComplexRect | complex") -> Tuple[float, float]:
    """Lower and upper bounds of ``|w|`` over the rectangle."""
    z = as_rect(z)
    dx, dy = z.re.mig(), z.im.mig()
    lower = (RealInterval(dx).sqr() + RealInterval(dy).sqr()).sqrt().lo
    upper = (RealInterval(z.re.mag()).sqr() + RealInterval(z.im.mag()).sqr()).sqrt().hi
    return max(0.0, lower), upper


def interval_sum(xs: Iterable[RealInterval]) -> RealInterval:
    total = RealInterval(0.0)
    for x in xs:
        total = total + x
    return total
