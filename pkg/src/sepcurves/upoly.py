"""Dense univariate polynomials over exact coefficient rings.

Coefficients may be ``int``/``Fraction``, :class:`~sepcurves.scalars.Surd`,
or nested :class:`Poly` (polynomials in a second variable), which is how the
bivariate elimination layer represents forms.  Everything here is exact:
Euclidean and pseudo divisions, GCDs, Yun square-free decomposition, Sturm
chains, certified real-root isolation, resultants and true (determinantal)
subresultant polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import InvalidInputError, InternalCheckError
from .scalars import Ball, Fraction as _F, Surd, is_rational, rational_bound_abs, sign


def _is_zero(c) -> bool:
    if isinstance(c, Poly):
        return not c.cs
    return c == 0


def _coeff_div(a, b):
    """Exact division of coefficients; nested polynomials divide exactly."""
    if isinstance(a, Poly) or isinstance(b, Poly):
        pa = a if isinstance(a, Poly) else Poly.const(a)
        pb = b if isinstance(b, Poly) else Poly.const(b)
        return pa.exact_div(pb)
    if isinstance(b, int):
        b = Fraction(b)
    return a / b


class Poly:
    """Immutable dense univariate polynomial; ``cs[i]`` multiplies ``x**i``."""

    __slots__ = ("cs",)

    def __init__(self, cs=()):
        cs = list(cs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "cs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly((c,))

    @staticmethod
    def variable() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def from_roots(roots) -> "Poly":
        p = Poly.const(Fraction(1))
        for r in roots:
            p = p * Poly((-r, 1))
        return p

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.cs) - 1

    def is_zero(self) -> bool:
        return not self.cs

    def lc(self):
        if not self.cs:
            raise InvalidInputError("zero polynomial has no leading coefficient")
        return self.cs[-1]

    def coeff(self, i):
        return self.cs[i] if 0 <= i < len(self.cs) else 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.cs == other.cs
        return self.degree <= 0 and (self.cs[0] if self.cs else 0) == other

    def __hash__(self):
        return hash(self.cs)

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.cs])

    # -- ring arithmetic ----------------------------------------------------

    def _promote(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Surd)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        a, b = self.cs, o.cs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly([-c for c in self.cs])

    def __mul__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        if not self.cs or not o.cs:
            return Poly()
        out = [0] * (len(self.cs) + len(o.cs) - 1)
        for i, a in enumerate(self.cs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.cs):
                if _is_zero(b):
                    continue
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        return Poly([a * c for a in self.cs])

    def shift_mul_x(self, k: int) -> "Poly":
        if not self.cs:
            return self
        return Poly([0] * k + list(self.cs))

    # -- calculus / evaluation ----------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.cs)][1:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.cs):
            acc = acc * x + c
        return acc

    def eval_ball(self, x: Ball, prec: int) -> Ball:
        acc = Ball.from_fraction(0, prec)
        for c in reversed(self.cs):
            acc = acc * x + Ball.from_scalar(c, prec)
        return acc

    def eval_interval(self, lo, hi):
        """Exact interval Horner; returns scalar bounds (lo_out, hi_out)."""
        alo = ahi = Fraction(0)
        for c in reversed(self.cs):
            # [alo, ahi] * [lo, hi] + c
            cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
            alo = _scalar_min(cands) + c
            ahi = _scalar_max(cands) + c
        return alo, ahi

    # -- division -----------------------------------------------------------

    def divmod_field(self, other: "Poly"):
        """Quotient/remainder with coefficient division (field coefficients)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [0] * max(0, self.degree - other.degree + 1)
        r = list(self.cs)
        dlc = other.lc()
        dd = other.degree
        while len(r) - 1 >= dd and r:
            while r and _is_zero(r[-1]):
                r.pop()
            if len(r) - 1 < dd or not r:
                break
            c = _coeff_div(r[-1], dlc)
            k = len(r) - 1 - dd
            q[k] = c
            for i, oc in enumerate(other.cs):
                r[k + i] = r[k + i] - c * oc
            r.pop()
        return Poly(q), Poly(r)

    def exact_div(self, other: "Poly") -> "Poly":
        """Division known to be exact over the coefficient ring."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [0] * max(0, self.degree - other.degree + 1)
        r = list(self.cs)
        dd = other.degree
        dlc = other.lc()
        while r and len(r) - 1 >= dd:
            if _is_zero(r[-1]):
                r.pop()
                continue
            c = _coeff_div(r[-1], dlc)
            k = len(r) - 1 - dd
            q[k] = c
            for i, oc in enumerate(other.cs):
                r[k + i] = r[k + i] - c * oc
            r.pop()
        rem = Poly(r)
        if not rem.is_zero():
            raise InternalCheckError("exact_div: division was not exact")
        return Poly(q)

    def pseudo_rem(self, other: "Poly") -> "Poly":
        """Pseudo remainder: lc(other)^(d+1) * self = q*other + rem."""
        d = self.degree - other.degree
        if d < 0:
            return self
        lc_o = other.lc()
        r = self
        for _ in range(d + 1):
            if r.is_zero() or r.degree < other.degree:
                r = r.scale(lc_o)
                continue
            k = r.degree - other.degree
            r = r.scale(lc_o) - other.shift_mul_x(k).scale(r.lc())
        return r

    def __repr__(self):
        return f"Poly({list(self.cs)!r})"


def _scalar_min(vals):
    best = vals[0]
    for v in vals[1:]:
        if sign(v - best) < 0:
            best = v
    return best


def _scalar_max(vals):
    best = vals[0]
    for v in vals[1:]:
        if sign(v - best) > 0:
            best = v
    return best


# ---------------------------------------------------------------------------
# GCD, square-free decomposition
# ---------------------------------------------------------------------------


def monic(p: Poly) -> Poly:
    if p.is_zero():
        return p
    lc = p.lc()
    if lc == 1:
        return p
    return p.map_coeffs(lambda c: _coeff_div(c, lc))


def gcd_field(f: Poly, g: Poly) -> Poly:
    """Monic GCD over a field (rational or surd coefficients)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a.divmod_field(b)[1]
        b = _normalize_rational_content(b)
    return monic(a)


def _normalize_rational_content(p: Poly) -> Poly:
    """Divide by a positive rational to keep coefficient sizes tame."""
    if p.is_zero():
        return p
    c = rational_bound_abs(p.lc())
    if c == 0 or c == 1:
        return p
    return p.map_coeffs(lambda x: x / c)


def yun_squarefree(p: Poly) -> list[tuple[int, Poly]]:
    """Yun's algorithm: ``p = lc * prod f_i^i`` with monic square-free f_i.

    Returns ``[(i, f_i)]`` for the nontrivial factors only.
    """
    if p.is_zero():
        raise InvalidInputError("square-free decomposition of zero polynomial")
    if p.degree == 0:
        return []
    g = gcd_field(p, p.derivative())
    if g.degree == 0:
        return [(1, monic(p))]
    out = []
    c = p.divmod_field(g)[0]
    d = p.derivative().divmod_field(g)[0] - c.derivative()
    i = 1
    while c.degree > 0:
        a = gcd_field(c, d)
        if a.degree > 0:
            out.append((i, a))
        c = c.divmod_field(a)[0]
        d = d.divmod_field(a)[0] - c.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> tuple[Poly, list[tuple[int, Poly]]]:
    """Square-free part (monic) plus the multiplicity profile from Yun."""
    fac = yun_squarefree(p)
    sf = Poly.const(Fraction(1))
    for _, f in fac:
        sf = sf * f
    return monic(sf), fac


# ---------------------------------------------------------------------------
# Sturm machinery and real-root isolation
# ---------------------------------------------------------------------------


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        r = chain[-2].divmod_field(chain[-1])[1]
        if r.is_zero():
            break
        chain.append(_normalize_rational_content(-r))
    return [q for q in chain if not q.is_zero()]


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _chain_variations_at(chain, x) -> int:
    return _variations([sign(q(x)) for q in chain])


def _chain_variations_inf(chain, positive: bool) -> int:
    out = []
    for q in chain:
        s = sign(q.lc())
        if not positive and q.degree % 2 == 1:
            s = -s
        out.append(s)
    return _variations(out)


def count_real_roots(p: Poly) -> int:
    """Number of distinct real roots over the whole line."""
    if p.is_zero():
        raise InvalidInputError("zero polynomial")
    if p.degree == 0:
        return 0
    chain = sturm_chain(p)
    return _chain_variations_inf(chain, False) - _chain_variations_inf(chain, True)


class RootCountResult:
    """Exact count over an interval plus endpoint-root metadata."""

    __slots__ = ("count", "endpoint_roots", "deflated")

    def __init__(self, count, endpoint_roots, deflated):
        self.count = count
        self.endpoint_roots = endpoint_roots
        self.deflated = deflated

    def __int__(self):
        return self.count

    def __eq__(self, other):
        return self.count == other

    def __repr__(self):
        return f"RootCountResult({self.count}, endpoint_roots={self.endpoint_roots})"


def count_real_roots_in(p: Poly, lo, hi) -> RootCountResult:
    """Distinct real roots of ``p`` in the open interval (lo, hi).

    Endpoints that happen to be roots are divided out exactly and reported in
    the result metadata, as the documented automatic perturbation.
    """
    if p.is_zero():
        raise InvalidInputError("zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise InvalidInputError("empty interval")
    endpoint_roots = {}
    q = p
    for e in (lo, hi):
        k = 0
        while not q.is_zero() and q.degree > 0 and _is_zero(q(e)):
            q = q.divmod_field(Poly((-e, 1)))[0]
            k += 1
        if k:
            endpoint_roots[e] = k
    if q.degree <= 0:
        return RootCountResult(0, endpoint_roots, q is not p)
    chain = sturm_chain(q)
    n = _chain_variations_at(chain, lo) - _chain_variations_at(chain, hi)
    return RootCountResult(n, endpoint_roots, q is not p)


def cauchy_bound(p: Poly) -> Fraction:
    """Rational B with every real root of p in (-B, B)."""
    lc = p.lc()
    m = Fraction(0)
    for c in p.cs[:-1]:
        b = rational_bound_abs(_coeff_div(c, lc))
        if b > m:
            m = b
    return m + 1


class IsolatingInterval:
    """Open interval (lo, hi) isolating one distinct real root of ``poly``.

    ``poly`` is square-free, endpoints are rational non-roots and the sign of
    ``poly`` changes across the interval.  ``multiplicity`` refers back to the
    root's multiplicity in the original (possibly non-square-free) input.
    """

    __slots__ = ("poly", "lo", "hi", "sign_lo", "multiplicity")

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction, sign_lo: int, multiplicity: int = 1):
        self.poly = poly
        self.lo = lo
        self.hi = hi
        self.sign_lo = sign_lo
        self.multiplicity = multiplicity

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def _split_point(self) -> Fraction:
        return _nonroot_split(self.poly, self.lo, self.hi)

    def refine_once(self) -> None:
        m = self._split_point()
        if sign(self.poly(m)) == self.sign_lo:
            self.lo = m
        else:
            self.hi = m

    def refine_below(self, width) -> "IsolatingInterval":
        while self.width > width:
            self.refine_once()
        return self

    def contains(self, x) -> bool:
        return self.lo < x < self.hi

    def __repr__(self):
        return f"IsolatingInterval({float(self.lo):.6g}, {float(self.hi):.6g})"


def _nonroot_split(p: Poly, a: Fraction, b: Fraction) -> Fraction:
    """A point strictly inside (a, b) where p does not vanish."""
    w = b - a
    den = 2
    while True:
        for num in range(1, den):
            m = a + w * Fraction(num, den)
            if not _is_zero(p(m)):
                return m
        den = den * 2 + 1


def isolate_real_roots(p: Poly) -> list[IsolatingInterval]:
    """Disjoint isolating intervals, one per distinct real root, sorted.

    Works for rational and surd coefficients; multiplicities are recovered
    from the Yun profile of the input.
    """
    if p.is_zero():
        raise InvalidInputError("zero polynomial")
    if p.degree == 0:
        return []
    sf, fac = squarefree_part(p)
    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)
    lo, hi = -bound, bound
    v_lo = _chain_variations_at(chain, lo)
    v_hi = _chain_variations_at(chain, hi)
    out: list[IsolatingInterval] = []
    stack = [(lo, hi, v_lo, v_hi)]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            iv = IsolatingInterval(sf, a, b, sign(sf(a)))
            out.append(iv)
            continue
        m = _nonroot_split(sf, a, b)
        vm = _chain_variations_at(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.sort(key=lambda iv: iv.lo)
    # ensure pairwise disjoint (bisection can leave touching endpoints only)
    if len(fac) > 1 or (fac and fac[0][0] > 1):
        for iv in out:
            for mult, f in fac:
                if int(count_real_roots_in(f, iv.lo, iv.hi)) == 1:
                    iv.multiplicity = mult
                    break
            else:
                raise InternalCheckError("isolated root missing from Yun profile")
    return out


# ---------------------------------------------------------------------------
# Resultants and subresultants
# ---------------------------------------------------------------------------


def resultant_field(f: Poly, g: Poly):
    """Resultant of two polynomials with *field* coefficients (Euclidean)."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    if f.degree == 0:
        return f.cs[0] ** g.degree
    if g.degree == 0:
        return g.cs[0] ** f.degree
    acc = Fraction(1)
    a, b = f, g
    while b.degree > 0:
        r = a.divmod_field(b)[1]
        if r.is_zero():
            return Fraction(0)
        da, db, dr = a.degree, b.degree, r.degree
        s = -1 if (da % 2 == 1 and db % 2 == 1) else 1
        acc = acc * (b.lc() ** (da - dr)) * s
        a, b = b, r
    return acc * (b.cs[0] ** a.degree)


def sylvester_matrix(f: Poly, g: Poly):
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        raise InvalidInputError("resultant of zero polynomial")
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(f.cs)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(g.cs)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_det(mat):
    """Fraction-free determinant over an integral domain with exact division."""
    n = len(mat)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in mat]
    sgn = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return Fraction(0) * m[0][0] if isinstance(m[0][0], Poly) else Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else _coeff_div(num, prev)
            m[i][k] = 0
        prev = pivot
    out = m[n - 1][n - 1]
    return out if sgn > 0 else -out


def resultant_det(f: Poly, g: Poly):
    """Resultant via Bareiss on the Sylvester matrix (any integral domain)."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    if f.degree == 0:
        return f.cs[0] ** g.degree if g.degree > 0 else Fraction(1)
    if g.degree == 0:
        return g.cs[0] ** f.degree
    return bareiss_det(sylvester_matrix(f, g))


def resultant_nested_interp(f: Poly, g: Poly) -> Poly:
    """Resultant in y of two polynomials in y with Poly-in-x coefficients.

    Requires both leading y-coefficients to be nonzero constants so that
    specialization at any x preserves degrees; then the resultant is computed
    by evaluation at small rationals followed by Lagrange interpolation.
    """
    for p in (f, g):
        lc = p.lc()
        if not (isinstance(lc, Poly) and lc.degree == 0) and not is_rational(lc) \
                and not isinstance(lc, Surd):
            raise InternalCheckError("interpolated resultant needs constant leading coefficients")
        if isinstance(lc, Poly) and lc.degree != 0:
            raise InternalCheckError("interpolated resultant needs constant leading coefficients")
    # x-degree bound from the Sylvester matrix row structure
    dx_f = max((c.degree if isinstance(c, Poly) else 0) for c in f.cs if not _is_zero(c))
    dx_g = max((c.degree if isinstance(c, Poly) else 0) for c in g.cs if not _is_zero(c))
    npoints = g.degree * dx_f + f.degree * dx_g + 1
    xs, ys = [], []
    k = 0
    while len(xs) < npoints:
        xs.append(Fraction(k))
        k = -k if k > 0 else -k + 1
    for x in xs:
        fx = Poly([c(x) if isinstance(c, Poly) else c for c in f.cs])
        gx = Poly([c(x) if isinstance(c, Poly) else c for c in g.cs])
        if fx.degree != f.degree or gx.degree != g.degree:
            raise InternalCheckError("degree drop during specialization")
        ys.append(resultant_field(fx, gx))
    return lagrange_interpolate(xs, ys)


def lagrange_interpolate(xs, ys) -> Poly:
    """Newton-form interpolation through exact points."""
    n = len(xs)
    coeffs = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs[i] = _coeff_div(coeffs[i] - coeffs[i - 1], xs[i] - xs[i - j])
    p = Poly.const(coeffs[-1])
    for i in range(n - 2, -1, -1):
        p = p * Poly((-xs[i], 1)) + Poly.const(coeffs[i])
    return p


def subresultant_poly(f: Poly, g: Poly, j: int) -> Poly:
    """True subresultant S_j of f, g in y (coefficients may be nested polys).

    Determinantal definition, evaluated by Bareiss; correct under
    specialization (unlike a bare pseudo-remainder chain whose similarity
    factors may vanish at special parameter values).
    """
    m, n = f.degree, g.degree
    if not (0 <= j < min(m, n)):
        raise InvalidInputError(f"subresultant index {j} out of range for degrees {m},{n}")
    rows = []
    for k in range(n - j - 1, -1, -1):
        rows.append(f.shift_mul_x(k))
    for k in range(m - j - 1, -1, -1):
        rows.append(g.shift_mul_x(k))
    size = m + n - 2 * j
    top_cols = list(range(m + n - j - 1, j, -1))  # y-degrees of the fixed columns
    assert len(top_cols) == size - 1
    out_coeffs = []
    for i in range(j + 1):
        mat = []
        for r in rows:
            row = [r.coeff(d) for d in top_cols]
            row.append(r.coeff(i))
            mat.append(row)
        out_coeffs.append(bareiss_det(mat))
    return Poly(out_coeffs)


def binomial(n: int, k: int) -> int:
    return comb(n, k)
