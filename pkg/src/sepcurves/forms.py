"""Homogeneous forms with exact coefficients, plus the input text grammar.

A form is stored sparsely as ``{exponent tuple: coefficient}`` with every
exponent tuple summing to the total degree.  Coefficients are rational or a
quadratic surd over one fixed radicand.  The parser accepts the CLI grammar:
variables ``x, y, z`` (or ``x0..xm``), integer / rational ``3/4`` / decimal /
``sqrt(n)`` coefficients, operators ``+ - * ^``, juxtaposition products like
``3x^2y``, parentheses, insignificant whitespace.  Decimal literals become
exact rationals.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidInputError, ParseError
from .scalars import Ball, Surd, format_scalar, make_surd, sign
from .upoly import Poly


def _is_zero(c) -> bool:
    return c == 0


class HomogeneousForm:
    """Trivariate (or (m+1)-variate) homogeneous polynomial, exact and sparse."""

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int, terms: dict):
        clean = {}
        for e, c in terms.items():
            if _is_zero(c):
                continue
            if len(e) != nvars or any(k < 0 for k in e) or sum(e) != degree:
                raise InvalidInputError(
                    f"exponent {e} does not match {nvars} variables of total degree {degree}"
                )
            clean[tuple(e)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("HomogeneousForm is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousForm)
            and self.nvars == other.nvars
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.degree, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    # -- arithmetic ----------------------------------------------------------

    def _check_compat(self, other):
        if self.nvars != other.nvars:
            raise InvalidInputError("forms over different variable counts")

    def __add__(self, other):
        self._check_compat(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise InvalidInputError("adding forms of different degrees")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        deg = self.degree if not self.is_zero() else other.degree
        return HomogeneousForm(self.nvars, deg, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return HomogeneousForm(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Surd)):
            return self.scale(other)
        self._check_compat(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return HomogeneousForm(self.nvars, self.degree + other.degree, out)

    __rmul__ = __mul__

    def scale(self, c) -> "HomogeneousForm":
        if _is_zero(c):
            return HomogeneousForm(self.nvars, self.degree, {})
        return HomogeneousForm(self.nvars, self.degree, {e: c * v for e, v in self.terms.items()})

    def partial(self, i: int) -> "HomogeneousForm":
        out: dict = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c * e[i]
        return HomogeneousForm(self.nvars, self.degree - 1, out)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise InvalidInputError("point arity mismatch")
        acc = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for xi, k in zip(point, e):
                for _ in range(k):
                    t = t * xi
            acc = acc + t
        return acc

    def eval_ball(self, point_balls, prec: int) -> Ball:
        acc = Ball.from_fraction(0, prec)
        for e, c in self.terms.items():
            t = Ball.from_scalar(c, prec)
            for b, k in zip(point_balls, e):
                for _ in range(k):
                    t = t * b
            acc = acc + t
        return acc

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), Fraction(0))

    def linear_substitute(self, matrix) -> "HomogeneousForm":
        """Form F(M @ xnew): each old variable becomes a linear form in the new ones."""
        n = self.nvars
        lin = []
        for i in range(n):
            t = {}
            for j in range(n):
                if not _is_zero(matrix[i][j]):
                    e = [0] * n
                    e[j] = 1
                    t[tuple(e)] = matrix[i][j]
            lin.append(HomogeneousForm(n, 1, t))
        out = HomogeneousForm(n, self.degree, {})
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                for _ in range(k):
                    term = lin[i] if term is None else term * lin[i]
            if term is None:
                term = HomogeneousForm(n, 0, {tuple([0] * n): Fraction(1)})
            out = out + term.scale(c)
        return out

    # -- chart restrictions (trivariate only) ---------------------------------

    def dehomogenize_nested(self, y_var: int, x_var: int, one_var: int) -> Poly:
        """Restrict to the chart ``one_var = 1`` as a Poly in y over Poly in x."""
        if self.nvars != 3:
            raise InvalidInputError("nested dehomogenization is for trivariate forms")
        cols: dict[int, dict[int, object]] = {}
        for e, c in self.terms.items():
            dy, dx = e[y_var], e[x_var]
            cols.setdefault(dy, {})[dx] = cols.get(dy, {}).get(dx, 0) + c
        if not cols:
            return Poly()
        out = []
        for dy in range(max(cols) + 1):
            row = cols.get(dy, {})
            if row:
                out.append(Poly([row.get(i, 0) for i in range(max(row) + 1)]))
            else:
                out.append(Poly())
        return Poly(out)

    def restrict_line_at_infinity(self, x_var: int, y_var: int, zero_var: int) -> Poly:
        """Binary form on ``zero_var = 0`` as a univariate poly in slope y/x.

        Returns p(t) with p(t) = F(1, t, 0) in the (x_var, y_var) reading; the
        coefficient of x^degree sits in p's constant term pattern.
        """
        out = [0] * (self.degree + 1)
        for e, c in self.terms.items():
            if e[zero_var] != 0:
                continue
            out[e[y_var]] = out[e[y_var]] + c
        return Poly(out)

    # -- canonical output ------------------------------------------------------

    def variable_names(self):
        if self.nvars == 3:
            return ("x", "y", "z")
        return tuple(f"x{i}" for i in range(self.nvars))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self.variable_names()
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k > 0
            )
            cs = format_scalar(c)
            if mono:
                if cs == "1":
                    body = mono
                elif cs == "-1":
                    body = f"-{mono}"
                else:
                    wrapped = f"({cs})" if ("+" in cs[1:] or "-" in cs[1:] or "sqrt" in cs) else cs
                    body = f"{wrapped}*{mono}"
            else:
                body = cs
            parts.append(body)
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"HomogeneousForm({self.to_text()!r})"


def form_monomial(nvars: int, exps, coeff=Fraction(1)) -> HomogeneousForm:
    return HomogeneousForm(nvars, sum(exps), {tuple(exps): coeff})


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d+|\d+)|(?P<name>[a-zA-Z][a-zA-Z0-9]*)|(?P<op>[-+*/^()])|(?P<bad>\S))"
)


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text: str):
    toks = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        line = line.replace("−", "-").replace("·", "*")
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if not m:
                break
            col = m.start(m.lastgroup) + 1
            if m.lastgroup == "bad":
                raise ParseError(f"unexpected character {m.group('bad')!r}", lineno, col)
            if m.lastgroup is None:
                break
            if m.lastgroup == "name":
                # split juxtaposed single-letter variables: "xz" -> x, z;
                # keep "sqrt" and indexed names like "x12" intact
                word = m.group("name")
                for part in re.findall(r"sqrt|x\d+|[a-zA-Z]|\d+", word):
                    kind = "num" if part.isdigit() else "name"
                    toks.append(_Tok(kind, part, lineno, col))
            else:
                toks.append(_Tok(m.lastgroup, m.group(m.lastgroup), lineno, col))
            pos = m.end()
    toks.append(_Tok("end", "", lineno if text else 1, len(text) + 1))
    return toks


class _Parser:
    """Recursive-descent parser producing a sparse multivariate dict."""

    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.var_names: list[str] = []

    def peek(self):
        return self.toks[self.i]

    def pop(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def var_index(self, name: str, tok) -> int:
        if name in ("x", "y", "z"):
            idx = {"x": 0, "y": 1, "z": 2}[name]
            style = "xyz"
        elif re.fullmatch(r"x\d+", name):
            idx = int(name[1:])
            style = "indexed"
        else:
            raise ParseError(f"unknown variable {name!r}", tok.line, tok.col)
        if self.var_names and self.var_names[0] != style:
            raise ParseError("cannot mix x,y,z with indexed variables", tok.line, tok.col)
        self.var_names = [style]
        return idx

    # polynomial represented as {exps tuple (variable-indexed, ragged): coeff}
    def parse(self):
        poly = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected token {self.peek().value!r}")
        return poly

    def expr(self):
        negate = False
        if self.peek().kind == "op" and self.peek().value in "+-":
            negate = self.pop().value == "-"
        acc = self.term()
        if negate:
            acc = {e: -c for e, c in acc.items()}
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.pop().value
            t = self.term()
            for e, c in t.items():
                acc[e] = acc.get(e, 0) + (c if op == "+" else -c)
        return acc

    def term(self):
        acc = self.factor()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.pop()
                acc = _dict_mul(acc, self.factor())
            elif t.kind in ("num", "name") or (t.kind == "op" and t.value == "("):
                acc = _dict_mul(acc, self.factor())
            else:
                return acc

    def factor(self):
        base = self.base()
        if self.peek().kind == "op" and self.peek().value == "^":
            self.pop()
            t = self.pop()
            if t.kind != "num" or "." in t.value:
                raise ParseError("exponent must be a nonnegative integer", t.line, t.col)
            k = int(t.value)
            out = {(): Fraction(1)}
            for _ in range(k):
                out = _dict_mul(out, base)
            return out
        return base

    def base(self):
        t = self.pop()
        if t.kind == "num":
            val = _literal_to_fraction(t.value)
            if self.peek().kind == "op" and self.peek().value == "/":
                nxt = self.toks[self.i + 1]
                if nxt.kind == "num" and "." not in nxt.value:
                    self.pop()
                    den = int(self.pop().value)
                    if den == 0:
                        raise ParseError("zero denominator", t.line, t.col)
                    val = val / den
                else:
                    raise ParseError("'/' is only allowed inside rational literals", t.line, t.col)
            return {(): val}
        if t.kind == "name":
            if t.value == "sqrt":
                if not (self.peek().kind == "op" and self.peek().value == "("):
                    raise ParseError("sqrt must be followed by (n)", t.line, t.col)
                self.pop()
                n_tok = self.pop()
                if n_tok.kind != "num" or "." in n_tok.value:
                    raise ParseError("sqrt expects a positive integer", n_tok.line, n_tok.col)
                close = self.pop()
                if not (close.kind == "op" and close.value == ")"):
                    raise ParseError("missing ')' after sqrt", close.line, close.col)
                return {(): make_surd(0, 1, int(n_tok.value))}
            idx = self.var_index(t.value, t)
            e = [0] * (idx + 1)
            e[idx] = 1
            return {tuple(e): Fraction(1)}
        if t.kind == "op" and t.value == "(":
            inner = self.expr()
            close = self.pop()
            if not (close.kind == "op" and close.value == ")"):
                raise ParseError("missing closing parenthesis", close.line, close.col)
            return inner
        raise ParseError(f"unexpected token {t.value!r}", t.line, t.col)


def _literal_to_fraction(text: str) -> Fraction:
    if "." in text:
        whole, frac = text.split(".")
        den = 10 ** len(frac)
        return Fraction(int(whole) * den + int(frac or 0), den)
    return Fraction(int(text))


def _dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            n = max(len(e1), len(e2))
            e = tuple(
                (e1[i] if i < len(e1) else 0) + (e2[i] if i < len(e2) else 0) for i in range(n)
            )
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def parse_form(text: str, nvars: int | None = None) -> HomogeneousForm:
    """Parse polynomial text into a homogeneous form; inhomogeneity is an error."""
    parser = _Parser(text)
    d = parser.parse()
    d = {e: c for e, c in d.items() if c != 0}
    if not d:
        raise ParseError("zero polynomial is not a valid form", 1, 1)
    width = max((len(e) for e in d), default=0)
    if nvars is not None:
        if width > nvars:
            raise ParseError(f"form uses more than {nvars} variables", 1, 1)
        width = nvars
    elif parser.var_names and parser.var_names[0] == "xyz":
        width = 3
    terms = {}
    degree = None
    for e, c in d.items():
        e = tuple(e) + (0,) * (width - len(e))
        t = sum(e)
        if degree is None:
            degree = t
        elif degree != t:
            raise ParseError(
                f"polynomial is not homogeneous: mixed degrees {degree} and {t}", 1, 1
            )
        terms[e] = c
    return HomogeneousForm(width, degree, terms)
