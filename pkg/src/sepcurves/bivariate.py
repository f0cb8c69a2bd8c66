"""Certified solving of two-form systems F = G = 0 in the projective plane.

Strategy: pick a deterministic projective frame in which (a) neither curve
passes through the fiber direction (0:1:0), so both dehomogenized polynomials
have constant leading y-coefficients, and (b) no common zero lies on the
chart's line at infinity, so the y-resultant r(t) has full degree n*k and
every solution is affine in the frame chart.  Each root class of r then
carries a rational parameterization y = num(t)/den(t) extracted from the true
subresultant of the matching index; classes whose fiber could contain more
than one point are detected exactly and trigger the next frame.

All predicates about solutions (does a form vanish there, is a coordinate
zero, which sign does a form take) reduce to univariate GCD computations and
certified interval refinement against the class polynomial, never to floating
point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (
    DegenerateSystemError,
    FrameSearchError,
    InternalCheckError,
    InvalidInputError,
)
from .forms import HomogeneousForm
from .scalars import Surd, sign
from .upoly import (
    IsolatingInterval,
    Poly,
    binomial,
    count_real_roots_in,
    gcd_field,
    isolate_real_roots,
    monic,
    resultant_nested_interp,
    squarefree_part,
    subresultant_poly,
)

FRAME_SEARCH_LIMIT = 600

COORD_FORMS = tuple(
    HomogeneousForm(3, 1, {tuple(1 if j == i else 0 for j in range(3)): Fraction(1)})
    for i in range(3)
)


class Frame:
    """Projective coordinate change: original = matrix @ tilde."""

    __slots__ = ("matrix", "inverse", "tag")

    def __init__(self, matrix, tag=""):
        self.matrix = tuple(tuple(Fraction(c) for c in row) for row in matrix)
        self.inverse = _invert3(self.matrix)
        self.tag = tag

    def is_identity(self):
        return all(
            self.matrix[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3)
        )

    def to_tilde_point(self, point):
        return tuple(
            sum(self.inverse[i][j] * point[j] for j in range(3)) for i in range(3)
        )

    def from_tilde_row(self, i):
        return self.matrix[i]

    def __repr__(self):
        return f"Frame({self.tag or self.matrix})"


def _invert3(m):
    def det2(a, b, c, d):
        return a * d - b * c

    cof = [
        [
            det2(m[1][1], m[1][2], m[2][1], m[2][2]),
            -det2(m[0][1], m[0][2], m[2][1], m[2][2]),
            det2(m[0][1], m[0][2], m[1][1], m[1][2]),
        ],
        [
            -det2(m[1][0], m[1][2], m[2][0], m[2][2]),
            det2(m[0][0], m[0][2], m[2][0], m[2][2]),
            -det2(m[0][0], m[0][2], m[1][0], m[1][2]),
        ],
        [
            det2(m[1][0], m[1][1], m[2][0], m[2][1]),
            -det2(m[0][0], m[0][1], m[2][0], m[2][1]),
            det2(m[0][0], m[0][1], m[1][0], m[1][1]),
        ],
    ]
    det = m[0][0] * cof[0][0] + m[0][1] * cof[1][0] + m[0][2] * cof[2][0]
    if det == 0:
        raise InvalidInputError("singular frame matrix")
    return tuple(tuple(c / det for c in row) for row in cof)


def _small_rationals():
    yield Fraction(0)
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        yield Fraction(1, k + 1)
        yield Fraction(-1, k + 1)
        k += 1


def candidate_frames():
    """Deterministic frame enumeration: permutations, then layered shears."""
    perms = [
        (0, 1, 2), (2, 1, 0), (1, 0, 2), (0, 2, 1), (1, 2, 0), (2, 0, 1),
    ]

    def perm_matrix(p):
        return [[1 if p[i] == j else 0 for j in range(3)] for i in range(3)]

    def shear(a, b, c):
        # columns: x-tilde -> (1, 0, 0), y-tilde -> (a, 1, b), z-tilde -> (c, 0, 1)
        return [[1, a, c], [0, 1, 0], [0, b, 1]]

    def matmul(A, B):
        return [
            [sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)] for i in range(3)
        ]

    count = 0
    pairs = [(a, b) for a, b in itertools.product(range(-3, 4), repeat=2)]
    pairs.sort(key=lambda ab: (abs(ab[0]) + abs(ab[1]), ab))
    thirds = [0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3, -3]
    for c in thirds:
        for a, b in pairs:
            for p in perms:
                M = matmul(perm_matrix(p), shear(Fraction(a), Fraction(b), Fraction(c)))
                yield Frame(M, tag=f"p{p}a{a}b{b}c{c}")
                count += 1
                if count >= FRAME_SEARCH_LIMIT:
                    return


class _FrameReject(Exception):
    """Internal: current frame fails a genericity condition."""


class SolutionClass:
    """Roots of ``poly`` share the fiber structure: y = num(t)/den(t)."""

    __slots__ = ("poly", "j", "num", "den")

    def __init__(self, poly, j, num, den):
        self.poly = poly
        self.j = j
        self.num = num
        self.den = den


def _as_poly(c):
    return c if isinstance(c, Poly) else Poly.const(c)


class SystemPoint:
    """One certified solution of a plane system (real, or a conjugate pair)."""

    __slots__ = ("system", "cls", "interval", "mult", "is_real", "cplx", "_sign_cache")

    def __init__(self, system, cls, interval, mult, is_real, cplx=None):
        self.system = system
        self.cls = cls
        self.interval = interval
        self.mult = mult
        self.is_real = is_real
        self.cplx = cplx  # (a_interval, s_interval) with t = a +/- i*sqrt(s)
        self._sign_cache = {}

    # -- exact predicates ---------------------------------------------------

    def numerator_of(self, H: HomogeneousForm) -> Poly:
        return self.system.numerator_poly(self.cls, H)

    def vanishes(self, H: HomogeneousForm) -> bool:
        g = gcd_field(self.cls.poly, self.numerator_of(H))
        if g.degree == 0:
            return False
        if not self.is_real:
            raise InternalCheckError("vanishing test for complex points needs class split")
        return int(count_real_roots_in(g, self.interval.lo, self.interval.hi)) == 1

    def sign_of(self, H: HomogeneousForm) -> int:
        """Sign of H at the frame representative (t, y(t), 1); 0 if H vanishes."""
        key = id(H)
        if key in self._sign_cache:
            return self._sign_cache[key]
        if self.vanishes(H):
            self._sign_cache[key] = 0
            return 0
        n_h = self.numerator_of(H)
        dpow = self.system.chart_poly(H).degree
        s = None
        while s is None:
            lo1, hi1 = n_h.eval_interval(self.interval.lo, self.interval.hi)
            lo2, hi2 = self.cls.den.eval_interval(self.interval.lo, self.interval.hi)
            s1 = sign(lo1) if sign(lo1) == sign(hi1) else None
            s2 = sign(lo2) if sign(lo2) == sign(hi2) else None
            if s1 is not None and s2 is not None:
                s = s1 * (s2 if dpow % 2 else 1)
                break
            self.interval.refine_once()
        self._sign_cache[key] = s
        return s

    # -- coordinate enclosures ------------------------------------------------

    def tilde_xy_intervals(self):
        """Intervals for (t, y) in the frame chart, den bounded away from 0."""
        while True:
            dlo, dhi = self.cls.den.eval_interval(self.interval.lo, self.interval.hi)
            if sign(dlo) == sign(dhi) and sign(dlo) != 0:
                break
            self.interval.refine_once()
        nlo, nhi = self.cls.num.eval_interval(self.interval.lo, self.interval.hi)
        cands = [nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi]
        ylo, yhi = cands[0], cands[0]
        for v in cands[1:]:
            if sign(v - ylo) < 0:
                ylo = v
            if sign(v - yhi) > 0:
                yhi = v
        return (self.interval.lo, self.interval.hi), (ylo, yhi)

    def original_intervals(self):
        """Enclosures of the three homogeneous coordinates at the z-tilde=1 rep."""
        (tlo, thi), (ylo, yhi) = self.tilde_xy_intervals()
        out = []
        M = self.system.frame.matrix
        for i in range(3):
            a, b, c = M[i]
            cands = [a * tlo, a * thi]
            lo1, hi1 = min(cands), max(cands)
            cands = [_mul_any(b, ylo), _mul_any(b, yhi)]
            lo2, hi2 = _min_s(cands), _max_s(cands)
            out.append((lo1 + lo2 + c, hi1 + hi2 + c))
        return out

    def refine(self, rounds: int = 1):
        for _ in range(rounds):
            self.interval.refine_once()

    def coordinate_is_zero(self, i: int) -> bool:
        return self.vanishes(COORD_FORMS[i])

    def affine_rep(self):
        """(chart index, affine coordinate intervals) with the chart certified."""
        for i in (2, 0, 1):
            if not self.coordinate_is_zero(i):
                while True:
                    ivs = self.original_intervals()
                    lo, hi = ivs[i]
                    if sign(lo) == sign(hi) and sign(lo) != 0:
                        coords = []
                        for j in range(3):
                            if j == i:
                                coords.append((Fraction(1), Fraction(1)))
                            else:
                                a, b = ivs[j]
                                cands = [a / lo, a / hi, b / lo, b / hi]
                                coords.append((_min_s(cands), _max_s(cands)))
                        return i, coords
                    self.interval.refine_once()
        raise InternalCheckError("projective point with all coordinates zero")

    def float_xyz(self):
        ivs = self.original_intervals()
        return tuple(float((lo + hi) / 2) for lo, hi in ivs)

    def __repr__(self):
        if self.is_real:
            x, y, z = self.float_xyz()
            return f"SystemPoint(({x:.4g}:{y:.4g}:{z:.4g}), mult={self.mult})"
        return f"SystemPoint(complex pair, mult={self.mult})"


def _mul_any(b, v):
    return b * v


def _min_s(vals):
    out = vals[0]
    for v in vals[1:]:
        if sign(v - out) < 0:
            out = v
    return out


def _max_s(vals):
    out = vals[0]
    for v in vals[1:]:
        if sign(v - out) > 0:
            out = v
    return out


class PlaneSystem:
    """All solutions of F = G = 0 with certified exact bookkeeping."""

    def __init__(self, F, G, frame, f, g, res, sf, yun, classes):
        self.F = F
        self.G = G
        self.frame = frame
        self.f = f
        self.g = g
        self.res = res
        self.sf = sf
        self.yun = yun
        self.classes = classes
        self._chart_cache: dict[int, Poly] = {}
        self._numerator_cache: dict[tuple[int, int], Poly] = {}
        self.points = self._build_points()

    # -- helpers -------------------------------------------------------------

    def chart_poly(self, H: HomogeneousForm) -> Poly:
        key = id(H)
        p = self._chart_cache.get(key)
        if p is None:
            Ht = H.linear_substitute(self.frame.matrix)
            p = Ht.dehomogenize_nested(1, 0, 2)
            self._chart_cache[key] = p
        return p

    def numerator_poly(self, cls: SolutionClass, H: HomogeneousForm) -> Poly:
        key = (id(cls), id(H))
        out = self._numerator_cache.get(key)
        if out is not None:
            return out
        ph = self.chart_poly(H)
        d = ph.degree
        out = Poly()
        for i, c in enumerate(ph.cs):
            ci = _as_poly(c)
            if ci.is_zero():
                continue
            out = out + ci * (cls.num ** i) * (cls.den ** (d - i))
        self._numerator_cache[key] = out
        return out

    def multiplicity_of_interval(self, iv: IsolatingInterval) -> int:
        for mult, fac in self.yun:
            if int(count_real_roots_in(fac, iv.lo, iv.hi)) == 1:
                return mult
        raise InternalCheckError("root not covered by Yun profile")

    def _build_points(self):
        pts = []
        self._pending_complex = []
        for cls in self.classes:
            ivs = isolate_real_roots(cls.poly)
            real_degree = len(ivs)
            for iv in ivs:
                pts.append(
                    SystemPoint(self, cls, iv, self.multiplicity_of_interval(iv), True)
                )
            # complex conjugate pairs, grouped by multiplicity layer; box
            # isolation is deferred until someone asks for coordinates
            if real_degree < cls.poly.degree:
                for mult, fac in self.yun:
                    h = gcd_field(cls.poly, fac)
                    if h.degree == 0:
                        continue
                    n_real = len([iv for iv in ivs
                                  if int(count_real_roots_in(h, iv.lo, iv.hi)) == 1])
                    n_cplx = h.degree - n_real
                    if n_cplx:
                        group = [SystemPoint(self, cls, None, mult, False, None)
                                 for _ in range(n_cplx // 2)]
                        pts.extend(group)
                        self._pending_complex.append((h, group))
        return pts

    def ensure_complex_boxes(self):
        """Isolate boxes for complex conjugate pairs (lazy, idempotent)."""
        pending, self._pending_complex = self._pending_complex, []
        for h, group in pending:
            pairs = _isolate_complex_pairs(h)
            if len(pairs) != len(group):
                raise InternalCheckError("complex pair count mismatch")
            pairs.sort(key=lambda ab: (ab[0][0], ab[1][0]))
            for pt, pair in zip(group, pairs):
                pt.cplx = pair

    def real_points(self):
        return [p for p in self.points if p.is_real]

    def total_multiplicity(self):
        tot = 0
        for p in self.points:
            tot += p.mult if p.is_real else 2 * p.mult
        return tot

    def vanishing_factor(self, cls: SolutionClass, H: HomogeneousForm) -> Poly:
        """Monic factor of cls.poly whose roots are exactly where H vanishes."""
        return gcd_field(cls.poly, self.numerator_poly(cls, H))


def _chart_nested(F: HomogeneousForm, frame: Frame) -> tuple[Poly, object]:
    Ft = F.linear_substitute(frame.matrix)
    lc = Ft.coefficient((0, F.degree, 0))
    return Ft.dehomogenize_nested(1, 0, 2), lc


def _solve_in_frame(F: HomogeneousForm, G: HomogeneousForm, frame: Frame) -> PlaneSystem:
    f, lcF = _chart_nested(F, frame)
    g, lcG = _chart_nested(G, frame)
    if lcF == 0 or lcG == 0:
        raise _FrameReject("curve passes through the fiber direction")
    res = resultant_nested_interp(f, g)
    if res.is_zero():
        raise DegenerateSystemError("forms share a common component")
    if res.degree != F.degree * G.degree:
        raise _FrameReject("common zero on the chart line at infinity")
    sf, yun = squarefree_part(res)
    classes = _split_classes(f, g, sf)
    return PlaneSystem(F, G, frame, f, g, res, sf, yun, classes)


def _flatten_scalar(c):
    if isinstance(c, Poly):
        if c.degree > 0:
            raise InternalCheckError("expected constant coefficient")
        return c.cs[0] if c.cs else Fraction(0)
    return c


def _split_classes(f: Poly, g: Poly, sf: Poly) -> list[SolutionClass]:
    m, n = f.degree, g.degree
    if m < n:
        f, g = g, f
        m, n = n, m
    classes = []
    rem = sf
    for j in range(1, n):
        if rem.degree == 0:
            break
        Sj = subresultant_poly(f, g, j)
        coeffs = [_as_poly(Sj.coeff(i)) for i in range(j + 1)]
        psc = coeffs[j]
        if psc.is_zero():
            continue
        g_j = gcd_field(rem, psc)
        cls_poly = rem.divmod_field(g_j)[0]
        rem = g_j
        if cls_poly.degree == 0:
            continue
        num, den = -coeffs[j - 1], psc.scale(j)
        if j >= 2:
            _verify_single_fiber(cls_poly, coeffs, j)
        classes.append(SolutionClass(monic(cls_poly), j, num, den))
    if rem.degree > 0:
        # remaining roots: the fiber gcd is g itself (degree n)
        coeffs = [_as_poly(c) for c in g.cs]
        num, den = -coeffs[n - 1], coeffs[n].scale(n)
        if n >= 2:
            _verify_single_fiber(rem, coeffs, n)
        classes.append(SolutionClass(monic(rem), n, num, den))
    return classes


def _verify_single_fiber(cls_poly: Poly, coeffs: list[Poly], j: int) -> None:
    """Check S_j(t, y) = c*(y - y0)^j for every root of cls_poly, else reject.

    Identity: c_i * (j*c_j)^(j-i) == binom(j,i) * c_j * c_{j-1}^(j-i)
    for i = 0..j-2, as polynomials modulo cls_poly.
    """
    cj = coeffs[j]
    cj1 = coeffs[j - 1]
    for i in range(j - 1):
        lhs = coeffs[i] * (cj.scale(j) ** (j - i))
        rhs = (cj * (cj1 ** (j - i))).scale(binomial(j, i))
        diff = lhs - rhs
        if diff.is_zero():
            continue
        if gcd_field(cls_poly, diff).degree != cls_poly.degree:
            raise _FrameReject("fiber carries more than one solution")


def solve_system(F: HomogeneousForm, G: HomogeneousForm, frames=None,
                 cross_check: bool = False) -> PlaneSystem:
    """Certified solutions of F = G = 0; raises on common components.

    With ``cross_check`` a second independent frame re-solves the system and
    point sets, multiplicities and realness are verified to agree.
    """
    if F.nvars != 3 or G.nvars != 3:
        raise InvalidInputError("plane systems are trivariate")
    if F.is_zero() or G.is_zero():
        raise InvalidInputError("zero form in system")
    first = None
    it = frames if frames is not None else candidate_frames()
    for frame in it:
        try:
            sys_a = _solve_in_frame(F, G, frame)
        except _FrameReject:
            continue
        if first is None:
            first = sys_a
            if not cross_check:
                return first
            continue
        _cross_verify(first, sys_a)
        return first
    if first is not None:
        raise FrameSearchError("no second frame available for cross-check")
    raise FrameSearchError("frame search exhausted without a generic frame")


def _cross_verify(sys_a: PlaneSystem, sys_b: PlaneSystem) -> None:
    if sys_a.total_multiplicity() != sys_b.total_multiplicity():
        raise InternalCheckError("elimination directions disagree on total multiplicity")
    ra = sorted(p.mult for p in sys_a.real_points())
    rb = sorted(p.mult for p in sys_b.real_points())
    if ra != rb:
        raise InternalCheckError("elimination directions disagree on real points")
    # match real points one-to-one by refining boxes until unambiguous
    bs = list(sys_b.real_points())
    for pa in sys_a.real_points():
        for _ in range(80):
            boxa = pa.original_intervals()
            cands = [pb for pb in bs if _boxes_overlap(boxa, pb.original_intervals())]
            if len(cands) == 1:
                if cands[0].mult != pa.mult:
                    raise InternalCheckError("multiplicity mismatch across frames")
                bs.remove(cands[0])
                break
            if not cands:
                raise InternalCheckError("point missing in cross-check frame")
            pa.refine()
            for pb in cands:
                pb.refine()
        else:
            raise InternalCheckError("cross-check matching did not converge")


def _boxes_overlap(b1, b2) -> bool:
    # overlap in P^2: all pairwise cross-product intervals must straddle zero
    for i in range(3):
        for j in range(i + 1, 3):
            lo = _min_s([b1[i][0] * b2[j][0], b1[i][0] * b2[j][1],
                         b1[i][1] * b2[j][0], b1[i][1] * b2[j][1]])
            hi = _max_s([b1[i][0] * b2[j][0], b1[i][0] * b2[j][1],
                         b1[i][1] * b2[j][0], b1[i][1] * b2[j][1]])
            lo2 = _min_s([b1[j][0] * b2[i][0], b1[j][0] * b2[i][1],
                          b1[j][1] * b2[i][0], b1[j][1] * b2[i][1]])
            hi2 = _max_s([b1[j][0] * b2[i][0], b1[j][0] * b2[i][1],
                          b1[j][1] * b2[i][0], b1[j][1] * b2[i][1]])
            # cross product interval [lo - hi2, hi - lo2] must contain 0
            if sign(lo - hi2) > 0 or sign(hi - lo2) < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# Complex-root isolation for a square-free real polynomial
# ---------------------------------------------------------------------------


def _re_im_parts(p: Poly) -> tuple[HomogeneousForm, HomogeneousForm]:
    """p(a + i b) split as P(a, s) + i*b*Q(a, s) with s = b^2, homogenized."""
    re_terms: dict = {}
    im_terms: dict = {}
    deg = p.degree
    for k, c in enumerate(p.cs):
        if c == 0:
            continue
        for l in range(0, k // 2 + 1):
            e = (k - 2 * l, l)
            coef = c * binomial(k, 2 * l) * ((-1) ** l)
            re_terms[e] = re_terms.get(e, 0) + coef
        for l in range(0, (k - 1) // 2 + 1):
            e = (k - 1 - 2 * l, l)
            coef = c * binomial(k, 2 * l + 1) * ((-1) ** l)
            im_terms[e] = im_terms.get(e, 0) + coef
    def homog(terms):
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return None
        dd = max(a + s for (a, s) in terms)
        out = {(a, s, dd - a - s): c for (a, s), c in terms.items()}
        return HomogeneousForm(3, dd, out)
    return homog(re_terms), homog(im_terms)


def _isolate_complex_pairs(h: Poly):
    """Conjugate pairs of non-real roots of square-free h as (a_iv, s_iv)."""
    P, Q = _re_im_parts(h)
    if P is None or Q is None:
        return []
    sform = HomogeneousForm(3, 1, {(0, 1, 0): Fraction(1)})
    wform = HomogeneousForm(3, 1, {(0, 0, 1): Fraction(1)})
    try:
        system = solve_system(P, Q)
    except DegenerateSystemError as exc:  # impossible for square-free h
        raise InternalCheckError(f"complex isolation degenerated: {exc}")
    out = []
    for pt in system.real_points():
        if not pt.is_real:
            continue
        if pt.vanishes(wform):
            continue
        s_sign = pt.sign_of(sform) * pt.sign_of(wform)
        if s_sign <= 0:
            continue
        a_iv, s_iv = _affine_in_w(pt)
        out.append((a_iv, s_iv))
    return out


def _affine_in_w(pt: SystemPoint):
    while True:
        ivs = pt.original_intervals()
        wlo, whi = ivs[2]
        if sign(wlo) == sign(whi) and sign(wlo) != 0:
            alo, ahi = ivs[0]
            slo, shi = ivs[1]
            a_c = [alo / wlo, alo / whi, ahi / wlo, ahi / whi]
            s_c = [slo / wlo, slo / whi, shi / wlo, shi / whi]
            return (_min_s(a_c), _max_s(a_c)), (_min_s(s_c), _max_s(s_c))
        pt.refine()
