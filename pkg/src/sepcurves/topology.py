"""Certified topology of the real locus of a smooth plane projective curve.

The curve is swept in a generic affine chart: a deterministic projective
frame is chosen so that (a) the curve misses the chart's fiber direction
(0:1:0), making every affine fiber bounded, and (b) the curve crosses the
chart's line at infinity transversally.  Fibers at rational stations are
isolated exactly by Sturm bisection; across each critical band the local
connection is decided by certified box counts around the isolated critical
points (turn / pass-through patterns); unbounded ends reconnect through the
real points at infinity, matched by slope order in the neighbouring chart.

Components come out as closed walks of monotone pieces.  Ovals and
pseudolines are told apart by the parity of infinity crossings, which is the
intersection parity with a fixed generic line.  Nesting is decided by exact
segment-crossing parity against a reference line that certifiably misses the
oval under test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bivariate import (
    COORD_FORMS,
    Frame,
    PlaneSystem,
    SystemPoint,
    candidate_frames,
    solve_system,
)
from .errors import (
    DegenerateSystemError,
    FrameSearchError,
    InternalCheckError,
    InvalidInputError,
    PrecisionError,
    SingularCurveError,
)
from .forms import HomogeneousForm
from .scalars import sign
from .upoly import (
    IsolatingInterval,
    Poly,
    count_real_roots_in,
    gcd_field,
    isolate_real_roots,
    squarefree_part,
)

_BAND_ROUNDS = 240


# ---------------------------------------------------------------------------
# Smoothness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothnessReport:
    degree: int
    genus: int


def genus_of_degree(n: int) -> int:
    return (n - 1) * (n - 2) // 2


def check_smooth(F: HomogeneousForm) -> SmoothnessReport:
    """Certify that F, F_x, F_y, F_z have no common projective zero.

    Raises :class:`SingularCurveError` with a candidate singular point
    otherwise.  By Euler's relation a common zero of the partials lies on F,
    so only the gradient system is examined.
    """
    if F.nvars != 3:
        raise InvalidInputError("smoothness check expects a trivariate form")
    if F.is_zero():
        raise InvalidInputError("zero form is not a curve")
    n = F.degree
    if n == 1:
        return SmoothnessReport(1, 0)
    parts = [F.partial(i) for i in range(3)]
    zero_idx = [i for i, p in enumerate(parts) if p.is_zero()]
    if zero_idx:
        # F ignores a variable: a cone with apex at that coordinate point
        apex = [Fraction(0)] * 3
        apex[zero_idx[0]] = Fraction(1)
        raise SingularCurveError(
            "curve is a cone (independent of one variable)", witness=tuple(apex)
        )
    pair_orders = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
    degenerate = 0
    for i, j, k in pair_orders:
        try:
            system = solve_system(parts[i], parts[j])
        except DegenerateSystemError:
            degenerate += 1
            continue
        except FrameSearchError:
            continue
        return _smoothness_from_candidates(F, system, parts[k], n)
    if degenerate:
        return _smoothness_degenerate_gradients(F, parts, n)
    raise FrameSearchError("no frame admitted the gradient system")


def _smoothness_from_candidates(F, system: PlaneSystem, third, n) -> SmoothnessReport:
    for cls in system.classes:
        bad = system.vanishing_factor(cls, third)
        if bad.degree > 0:
            ivs = isolate_real_roots(bad)
            if ivs:
                pt = SystemPoint(system, cls, ivs[0], 1, True)
                box = pt.original_intervals()
                raise SingularCurveError(
                    "curve is singular", witness=tuple((lo, hi) for lo, hi in box)
                )
            raise SingularCurveError(
                "curve has a non-real singular point", witness=None
            )
    return SmoothnessReport(n, genus_of_degree(n))


def _smoothness_degenerate_gradients(F, parts, n) -> SmoothnessReport:
    # two partials share a factor h; every zero of (h, remaining partial)
    # is singular, and such zeros exist whenever both have positive degree
    from .upoly import Poly as _P

    for i, j, k in [(0, 1, 2), (0, 2, 1), (1, 2, 0)]:
        h = _form_gcd(parts[i], parts[j])
        if h is None or h.degree == 0:
            continue
        try:
            system = solve_system(h, parts[k])
        except DegenerateSystemError:
            hh = _form_gcd(h, parts[k])
            raise SingularCurveError(
                "curve has a one-dimensional singular gradient locus",
                witness=None,
            )
        for cls in system.classes:
            ivs = isolate_real_roots(cls.poly)
            if ivs:
                pt = SystemPoint(system, cls, ivs[0], 1, True)
                raise SingularCurveError(
                    "curve is singular",
                    witness=tuple(pt.original_intervals()),
                )
        raise SingularCurveError("curve has non-real singular points", witness=None)
    return SmoothnessReport(n, genus_of_degree(n))


def _form_gcd(A: HomogeneousForm, B: HomogeneousForm):
    """GCD of two trivariate forms via nested subresultant PRS in y."""
    fa = A.dehomogenize_nested(1, 0, 2)
    fb = B.dehomogenize_nested(1, 0, 2)
    if fa.is_zero() or fb.is_zero():
        return None
    if fa.degree < fb.degree:
        fa, fb = fb, fa
    while not fb.is_zero() and fb.degree > 0:
        r = fa.pseudo_rem(fb)
        fa, fb = fb, _primitive_nested(r)
    if fb.is_zero():
        g = _primitive_nested(fa)
        return _nested_to_form(g, A.nvars)
    return None


def _primitive_nested(p: Poly) -> Poly:
    if p.is_zero():
        return p
    cont = None
    for c in p.cs:
        cp = c if isinstance(c, Poly) else Poly.const(c)
        if cp.is_zero():
            continue
        cont = cp if cont is None else gcd_field(cont, cp)
        if cont.degree == 0:
            return p
    if cont is None or cont.degree == 0:
        return p
    return p.map_coeffs(lambda c: (c if isinstance(c, Poly) else Poly.const(c)).exact_div(cont))


def _nested_to_form(p: Poly, nvars: int) -> HomogeneousForm:
    """Homogenize a nested poly (y over x) back to a trivariate form."""
    terms = {}
    deg = 0
    for dy, c in enumerate(p.cs):
        cp = c if isinstance(c, Poly) else Poly.const(c)
        for dx, cc in enumerate(cp.cs):
            if cc == 0:
                continue
            deg = max(deg, dx + dy)
    for dy, c in enumerate(p.cs):
        cp = c if isinstance(c, Poly) else Poly.const(c)
        for dx, cc in enumerate(cp.cs):
            if cc == 0:
                continue
            terms[(dx, dy, deg - dx - dy)] = cc
    return HomogeneousForm(3, deg, terms)


# ---------------------------------------------------------------------------
# Sweep data structures
# ---------------------------------------------------------------------------


@dataclass
class Station:
    x: Fraction
    roots: list  # list[IsolatingInterval] sorted ascending


@dataclass
class Piece:
    """Monotone piece of a traced branch.

    kind 'arc': graph over x between stations (x1, rank1) -> (x2, rank2).
    kind 'turn': graph over y inside a critical box at one station side.
    """

    kind: str
    comp: int = -1
    x1: Fraction = None
    x2: Fraction = None
    s1: int = -1  # station indices
    s2: int = -1
    rank1: int = -1
    rank2: int = -1
    turn_side: str = ""  # 'left' (u-turn opens right, at station s1) or 'right'
    box: tuple = None  # (xlo, xhi, ylo, yhi) for turns
    crit_point: SystemPoint = None
    tube: tuple = None  # verified (ylo, yhi) for arcs


@dataclass
class InfinityLink:
    slope: IsolatingInterval
    plus_rank: int
    minus_rank: int
    comp: int = -1


@dataclass
class TracedComponent:
    index: int
    kind: str  # 'oval' | 'pseudoline'
    walk: list  # ordered traversal: ('piece', Piece, forward: bool) | ('link', InfinityLink, from_plus: bool)
    nesting_depth: int = 0

    @property
    def n_links(self):
        return sum(1 for item in self.walk if item[0] == "link")


class CurveTopology:
    """Connected components of X(R) with traced, queryable polylines."""

    def __init__(self, form, report, frame, f, stations, pieces, links, components):
        self.form = form
        self.degree = report.degree
        self.genus = report.genus
        self.frame = frame
        self.f = f  # nested chart poly in sweep frame
        self.stations = stations
        self.pieces = pieces
        self.links = links
        self.components = components

    @property
    def n_components(self):
        return len(self.components)

    def component_types(self):
        return [c.kind for c in self.components]

    def fiber(self, x: Fraction):
        fx = Poly([c(x) if isinstance(c, Poly) else c for c in self.f.cs])
        return isolate_real_roots(fx)

    def substituted_y(self, yval):
        """f(x, y=yval) as a univariate polynomial in x."""
        out = Poly()
        for i, c in enumerate(self.f.cs):
            cp = c if isinstance(c, Poly) else Poly.const(c)
            if not cp.is_zero():
                out = out + cp.scale(yval ** i)
        return out

    def __repr__(self):
        kinds = ", ".join(c.kind for c in self.components)
        return f"CurveTopology(r={self.n_components}: {kinds}, genus={self.genus})"
