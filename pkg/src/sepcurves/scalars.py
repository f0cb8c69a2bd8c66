"""Exact scalar arithmetic: rationals, quadratic surds and dyadic balls.

Rationals are plain :class:`fractions.Fraction`.  A :class:`Surd` is
``a + b*sqrt(n)`` with rational ``a, b`` and a fixed square-free ``n > 1``;
arithmetic is closed for a single ``n`` and mixing distinct radicands is an
error.  A :class:`Ball` is a validated dyadic midpoint/radius enclosure used
when a quantity is only known approximately; every ball operation returns a
ball containing the exact image of its inputs.

Sign determination is exact for rationals and surds.  For balls,
:func:`validated_sign` walks a precision ladder (128 bits doubling up to a
configurable cap, 4096 by default) before giving up with
:class:`~sepcurves.errors.PrecisionError`.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InvalidInputError, PrecisionError

DEFAULT_PRECISION_START = 128
DEFAULT_PRECISION_CAP = 4096


def _squarefree_radicand(n: int) -> tuple[int, int]:
    """Split ``n = s^2 * m`` with ``m`` square-free; returns ``(s, m)``."""
    if n <= 0:
        raise InvalidInputError(f"radicand must be positive, got {n}")
    s, m, d = 1, n, 2
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
            s *= d
        d += 1
    return s, m


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected rational, got {type(x).__name__}")


class Surd:
    """``a + b*sqrt(n)`` with rational a, b and square-free integer n > 1.

    Instances are immutable; ``b`` is never zero (purely rational values are
    represented as :class:`Fraction`, see :func:`make_surd`).
    """

    __slots__ = ("a", "b", "n")

    def __init__(self, a, b, n):
        a = _as_fraction(a)
        b = _as_fraction(b)
        if b == 0:
            raise InvalidInputError("Surd with b == 0; use a Fraction instead")
        s, m = _squarefree_radicand(int(n))
        if m == 1:
            raise InvalidInputError(f"radicand {n} is a perfect square")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b * s)
        object.__setattr__(self, "n", m)

    def __setattr__(self, *args):
        raise AttributeError("Surd is immutable")

    # -- helpers -----------------------------------------------------------

    def _coerce(self, other):
        """Return ``other`` as an (a, b) pair over self's radicand, or None."""
        if isinstance(other, Surd):
            if other.n != self.n:
                raise InvalidInputError(
                    f"mixed radicands sqrt({self.n}) and sqrt({other.n})"
                )
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return _as_fraction(other), Fraction(0)
        return None

    @staticmethod
    def _make(a, b, n):
        if b == 0:
            return a
        s = Surd.__new__(Surd)
        object.__setattr__(s, "a", a)
        object.__setattr__(s, "b", b)
        object.__setattr__(s, "n", n)
        return s

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return Surd._make(self.a + co[0], self.b + co[1], self.n)

    __radd__ = __add__

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return Surd._make(self.a - co[0], self.b - co[1], self.n)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return Surd._make(co[0] - self.a, co[1] - self.b, self.n)

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b = co
        return Surd._make(
            self.a * a + self.b * b * self.n, self.a * b + self.b * a, self.n
        )

    __rmul__ = __mul__

    def __neg__(self):
        return Surd._make(-self.a, -self.b, self.n)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        d = self.a * self.a - self.n * self.b * self.b
        # d == 0 would force sqrt(n) rational; impossible for square-free n>1
        return Surd._make(self.a / d, -self.b / d, self.n)

    def __truediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        if co[1] == 0:
            return Surd._make(self.a / co[0], self.b / co[0], self.n)
        return self * Surd._make(co[0], co[1], self.n).inverse()

    def __rtruediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return Surd._make(co[0], co[1], self.n) * self.inverse() \
            if co[1] != 0 else self.inverse() * co[0]

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.n == other.n and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 by invariant
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.n)

    def conjugate(self):
        return Surd._make(self.a, -self.b, self.n)

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.n})"


def make_surd(a, b, n):
    """Build ``a + b*sqrt(n)``, collapsing to a Fraction when exact."""
    a = _as_fraction(a)
    b = _as_fraction(b)
    if b == 0:
        return a
    s, m = _squarefree_radicand(int(n))
    if m == 1:
        return a + b * s
    return Surd._make(a, b * s, m)


def sign(x) -> int:
    """Exact sign (-1, 0, +1) of a rational or surd."""
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if isinstance(x, Surd):
        a, b, n = x.a, x.b, x.n
        if a == 0:
            return (b > 0) - (b < 0)
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb:
            return sa
        t = a * a - n * b * b
        # t == 0 impossible: sqrt(n) irrational
        return sa if t > 0 else sb
    raise TypeError(f"no exact sign for {type(x).__name__}")


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def rational_bound_abs(x) -> Fraction:
    """A rational upper bound for |x|, exact for rationals."""
    if isinstance(x, (int, Fraction)):
        return abs(_as_fraction(x))
    if isinstance(x, Surd):
        # |a| + |b| * ceil-bound of sqrt(n)
        r = math.isqrt(x.n) + 1
        return abs(x.a) + abs(x.b) * r
    raise TypeError(type(x).__name__)


def scalar_to_float(x) -> float:
    if isinstance(x, Surd):
        return float(x)
    return float(_as_fraction(x))


# ---------------------------------------------------------------------------
# Dyadic numbers and balls
# ---------------------------------------------------------------------------


class Dyadic:
    """Exact dyadic number ``man * 2**exp`` with normalized odd mantissa."""

    __slots__ = ("man", "exp")

    def __init__(self, man: int, exp: int = 0):
        if man == 0:
            exp = 0
        else:
            while man % 2 == 0:
                man //= 2
                exp += 1
        object.__setattr__(self, "man", man)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, *args):
        raise AttributeError("Dyadic is immutable")

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man * (1 << self.exp))
        return Fraction(self.man, 1 << -self.exp)

    def __add__(self, other):
        a, b = self, other
        if a.exp < b.exp:
            return Dyadic(a.man + (b.man << (b.exp - a.exp)), a.exp)
        return Dyadic(b.man + (a.man << (a.exp - b.exp)), b.exp)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Dyadic(-self.man, self.exp)

    def __mul__(self, other):
        return Dyadic(self.man * other.man, self.exp + other.exp)

    def __abs__(self):
        return Dyadic(abs(self.man), self.exp)

    def is_zero(self):
        return self.man == 0

    def __le__(self, other):
        return (self - other).man <= 0

    def __lt__(self, other):
        return (self - other).man < 0

    def __eq__(self, other):
        return isinstance(other, Dyadic) and self.man == other.man and self.exp == other.exp

    def __hash__(self):
        return hash((self.man, self.exp))

    def bit_size(self) -> int:
        return abs(self.man).bit_length()

    def round_up_bits(self, prec: int) -> "Dyadic":
        """Round a nonnegative dyadic up so the mantissa fits in prec bits."""
        if self.man < 0:
            raise ValueError("round_up_bits expects nonnegative input")
        extra = self.bit_size() - prec
        if extra <= 0:
            return self
        m = self.man >> extra
        return Dyadic(m + 1, self.exp + extra)

    def __repr__(self):
        return f"Dyadic({self.man}, {self.exp})"


DY_ZERO = Dyadic(0)


def _round_dyadic(d: Dyadic, prec: int) -> tuple[Dyadic, Dyadic]:
    """Round to nearest with mantissa <= prec bits; returns (value, error bound)."""
    extra = d.bit_size() - prec
    if extra <= 0:
        return d, DY_ZERO
    neg = d.man < 0
    m = abs(d.man)
    half = 1 << (extra - 1)
    q, r = divmod(m, 1 << extra)
    if r >= half:
        q += 1
    out = Dyadic(-q if neg else q, d.exp + extra)
    return out, Dyadic(1, d.exp + extra - 1)


def _fraction_to_dyadic(q: Fraction, prec: int) -> tuple[Dyadic, Dyadic]:
    """Dyadic approximation of a rational with an error bound."""
    n, d = q.numerator, q.denominator
    if n == 0:
        return DY_ZERO, DY_ZERO
    if d == 1:
        return _round_dyadic(Dyadic(n), prec)
    # scale so the quotient carries prec+2 significant bits
    shift = prec + 2 - (abs(n).bit_length() - d.bit_length())
    if shift < 0:
        shift = 0
    m = (abs(n) << shift) // d
    val = Dyadic(-m if n < 0 else m, -shift)
    err = Dyadic(1, -shift)
    v, e = _round_dyadic(val, prec)
    return v, e + err


class Ball:
    """Validated enclosure ``[mid - rad, mid + rad]`` with dyadic endpoints."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: Dyadic, rad: Dyadic, prec: int = DEFAULT_PRECISION_START):
        if rad.man < 0:
            raise InvalidInputError("ball radius must be nonnegative")
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "rad", rad)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *args):
        raise AttributeError("Ball is immutable")

    @staticmethod
    def from_fraction(q, prec: int = DEFAULT_PRECISION_START) -> "Ball":
        v, e = _fraction_to_dyadic(_as_fraction(q), prec)
        return Ball(v, e, prec)

    @staticmethod
    def from_scalar(x, prec: int = DEFAULT_PRECISION_START) -> "Ball":
        if isinstance(x, (int, Fraction)):
            return Ball.from_fraction(x, prec)
        if isinstance(x, Surd):
            return Ball.from_fraction(x.a, prec) + (
                Ball.from_fraction(x.b, prec) * Ball.sqrt_int(x.n, prec)
            )
        if isinstance(x, Ball):
            return x
        raise TypeError(type(x).__name__)

    @staticmethod
    def from_interval(lo, hi, prec: int = DEFAULT_PRECISION_START) -> "Ball":
        lo = _as_fraction(lo)
        hi = _as_fraction(hi)
        mid, e1 = _fraction_to_dyadic((lo + hi) / 2, prec)
        half, e2 = _fraction_to_dyadic((hi - lo) / 2, prec)
        return Ball(mid, (abs(half) + e1 + e2).round_up_bits(prec), prec)

    @staticmethod
    def sqrt_int(n: int, prec: int = DEFAULT_PRECISION_START) -> "Ball":
        """Enclosure of sqrt(n) for a positive integer n."""
        s = math.isqrt(n << (2 * prec))
        # s <= sqrt(n)*2^prec < s+1
        mid = Dyadic(2 * s + 1, -(prec + 1))
        return Ball(mid, Dyadic(1, -(prec + 1)), prec)

    # -- arithmetic, always outward rounded --------------------------------

    def __add__(self, other):
        if not isinstance(other, Ball):
            other = Ball.from_scalar(other, self.prec)
        p = min(self.prec, other.prec)
        m, e = _round_dyadic(self.mid + other.mid, p)
        r = (self.rad + other.rad + e).round_up_bits(p)
        return Ball(m, r, p)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Ball):
            other = Ball.from_scalar(other, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Ball(-self.mid, self.rad, self.prec)

    def __mul__(self, other):
        if not isinstance(other, Ball):
            other = Ball.from_scalar(other, self.prec)
        p = min(self.prec, other.prec)
        m, e = _round_dyadic(self.mid * other.mid, p)
        r = (
            abs(self.mid) * other.rad
            + abs(other.mid) * self.rad
            + self.rad * other.rad
            + e
        ).round_up_bits(p)
        return Ball(m, r, p)

    __rmul__ = __mul__

    def contains_zero(self) -> bool:
        return not (self.rad < abs(self.mid))

    def contains(self, q) -> bool:
        q = _as_fraction(q)
        lo = self.mid.as_fraction() - self.rad.as_fraction()
        hi = self.mid.as_fraction() + self.rad.as_fraction()
        return lo <= q <= hi

    def definite_sign(self):
        """+1/-1 when zero is excluded, else None."""
        if self.rad < abs(self.mid):
            return 1 if self.mid.man > 0 else -1
        return None

    def interval(self) -> tuple[Fraction, Fraction]:
        m, r = self.mid.as_fraction(), self.rad.as_fraction()
        return m - r, m + r

    def __repr__(self):
        m, r = self.mid.as_fraction(), self.rad.as_fraction()
        return f"Ball({float(m):.6g} +/- {float(r):.3g})"


def validated_sign(x, cap_bits: int = DEFAULT_PRECISION_CAP) -> int:
    """Certified sign of a scalar, ball, or precision-indexed ball producer.

    Rationals and surds are decided exactly.  A bare :class:`Ball` either has
    a definite sign or raises :class:`PrecisionError` (a fixed enclosure
    cannot be refined).  A callable ``prec -> Ball`` is re-evaluated along the
    ladder 128, 256, ... up to ``cap_bits`` before giving up.
    """
    if isinstance(x, (int, Fraction, Surd)):
        return sign(x)
    if isinstance(x, Ball):
        s = x.definite_sign()
        if s is None:
            raise PrecisionError(
                f"sign undetermined: ball of radius {float(x.rad.as_fraction()):.3g} straddles zero"
            )
        return s
    if callable(x):
        prec = DEFAULT_PRECISION_START
        while prec <= cap_bits:
            s = x(prec).definite_sign()
            if s is not None:
                return s
            prec *= 2
        raise PrecisionError(f"sign undetermined after precision cap {cap_bits} bits")
    raise TypeError(f"cannot determine sign of {type(x).__name__}")


def format_scalar(x) -> str:
    """Canonical text form: '3/4', '-2', 'sqrt(2)', '1/2*sqrt(2)', '1+sqrt(2)'."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Surd):
        root = f"sqrt({x.n})" if x.b == 1 else (
            f"-sqrt({x.n})" if x.b == -1 else f"{format_scalar(x.b)}*sqrt({x.n})"
        )
        if x.a == 0:
            return root
        joiner = "+" if sign(x.b) > 0 else ""
        return f"{format_scalar(x.a)}{joiner}{root}"
    raise TypeError(type(x).__name__)
