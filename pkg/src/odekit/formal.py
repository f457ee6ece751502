"""Formal solutions at the irregular singular point at infinity.

Solutions are sought in the shape ``exp(q(z)) z^gamma U(z)`` where ``q`` is a
polynomial in ``z^(1/p)`` without constant term (the exponential part) and
``U`` a series in descending powers of ``z^(1/p)``.  Operators are first
scaled to polynomial coefficients, after which every quantity in the Newton
iteration is a finite Laurent-Puiseux sum, so nothing is truncated until the
series stage.

Exact arithmetic over Q(i) is used throughout unless a characteristic
equation has roots outside Q(i); such branches continue in machine complex
numbers and every value derived from them is flagged ``approximate``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np
from sympy import QQ, QQ_I, Poly as SymPoly, Symbol

from .field import GaussRat, NearTieError, Order, Poly, RatFun, ray_compare, scalar_expr
from .linop import LinOp, determinant

Scalar = Union[GaussRat, complex]

EPS = 1e-9
ROOT_CLUSTER = 1e-6
DEFAULT_TRUNC = 8


class UnsupportedLogError(NotImplementedError):
    """The requested exponential part is repeated, so solutions carry logarithms."""


class FormalError(ArithmeticError):
    pass


def _nz(c: Scalar) -> bool:
    if isinstance(c, complex):
        return abs(c) > EPS
    return bool(c)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# --------------------------------------------------------------------------- Puiseux sums


class Puiseux:
    """Finite sum ``sum c_e z^e`` with rational exponents; exact or complex scalars."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None) -> None:
        self.terms: dict[Fraction, Scalar] = {e: c for e, c in (terms or {}).items() if _nz(c)}

    @classmethod
    def const(cls, c) -> "Puiseux":
        return cls({Fraction(0): _scalar(c)})

    @classmethod
    def monomial(cls, c, e) -> "Puiseux":
        return cls({Fraction(e): _scalar(c)})

    @classmethod
    def from_ratfun(cls, r: RatFun) -> "Puiseux":
        """Exact conversion; the denominator must be a monomial."""
        if len(r.den.exponents()) != 1:
            raise FormalError("only Laurent polynomials convert exactly")
        shift = r.den.degree
        c0 = r.den.lc()
        p = r.ram
        return cls({Fraction(j - shift, p): c / c0 for j, c in enumerate(r.num.coeffs) if c})

    def _coerce(self, other) -> "Puiseux":
        if isinstance(other, Puiseux):
            return other
        return Puiseux.const(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_exact(self) -> bool:
        return all(isinstance(c, GaussRat) for c in self.terms.values())

    def lead_exp(self) -> Fraction:
        if not self.terms:
            raise FormalError("zero series has no leading exponent")
        return max(self.terms)

    def lead(self) -> Scalar:
        return self.terms[self.lead_exp()]

    def coeff(self, e) -> Scalar:
        return self.terms.get(Fraction(e), GaussRat(0))

    def ram(self) -> int:
        return reduce(_lcm, (e.denominator for e in self.terms), 1)

    def __add__(self, other) -> "Puiseux":
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return Puiseux(out)

    __radd__ = __add__

    def __neg__(self) -> "Puiseux":
        return Puiseux({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Puiseux":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Puiseux":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Puiseux":
        if not isinstance(other, Puiseux):
            c = _scalar(other)
            return Puiseux({e: c * x for e, x in self.terms.items()})
        out: dict[Fraction, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Puiseux(out)

    __rmul__ = __mul__

    def derive(self) -> "Puiseux":
        return Puiseux({e - 1: c * e for e, c in self.terms.items() if e != 0})

    def integrate(self) -> "Puiseux":
        if Fraction(-1) in self.terms:
            raise FormalError("integral of z^-1 is not a Puiseux sum")
        return Puiseux({e + 1: c * Fraction(1) / (e + 1) for e, c in self.terms.items()})

    def truncate_above(self, bound: Fraction) -> "Puiseux":
        """Keep terms with exponent > bound."""
        return Puiseux({e: c for e, c in self.terms.items() if e > bound})

    def inverse(self):
        raise FormalError("Puiseux sums are not inverted in place; scale operators instead")

    def to_complex(self) -> "Puiseux":
        return Puiseux({e: complex(c) for e, c in self.terms.items()})

    def to_poly(self) -> Poly:
        """Exact polynomial in ``z^(1/p)``; exponents must be nonnegative."""
        p = self.ram()
        if any(e < 0 for e in self.terms):
            raise FormalError("negative exponent in polynomial conversion")
        if not self.terms:
            return Poly()
        top = int(self.lead_exp() * p)
        return Poly([self.terms.get(Fraction(j, p), GaussRat(0)) for j in range(top + 1)], p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Puiseux):
            other = self._coerce(other)
        return not (self - other).terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def expr(self) -> str:
        if not self.terms:
            return "0"
        return _render_terms(sorted(self.terms.items(), reverse=True))

    def __repr__(self) -> str:
        return f"Puiseux({self.expr()!r})"


def _scalar(c) -> Scalar:
    if isinstance(c, (GaussRat, complex)):
        return c
    if isinstance(c, float):
        return complex(c)
    return GaussRat.coerce(c)


def render_scalar(c: Scalar) -> tuple[str, bool]:
    if isinstance(c, complex):
        return f"({c.real:.12g}{c.imag:+.12g}*i)", True
    return scalar_expr(c)


def _render_terms(items: Iterable[tuple[Fraction, Scalar]]) -> str:
    out = []
    for e, c in items:
        txt, _ = render_scalar(c)
        if e == 0:
            out.append(txt)
            continue
        mono = "z" if e == 1 else (f"z^{e}" if e.denominator == 1 and e > 0 else f"z^({e})")
        if c == 1:
            out.append(mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            out.append(f"{txt}*{mono}")
    s = out[0]
    for t in out[1:]:
        s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return s


# --------------------------------------------------------------------------- parts


@dataclass(frozen=True)
class ExpPart:
    """Exponential part: a polynomial in ``z^(1/p)`` with zero constant term."""

    terms: tuple[tuple[Fraction, Scalar], ...]

    def __post_init__(self) -> None:
        if any(e == 0 for e, _ in self.terms):
            raise ValueError("exponential parts have zero constant term")
        if any(e < 0 for e, _ in self.terms):
            raise ValueError("exponential parts are polynomials in z^(1/p)")

    @classmethod
    def from_puiseux(cls, q: Puiseux) -> "ExpPart":
        return cls(tuple(sorted(((e, c) for e, c in q.terms.items()), reverse=True)))

    @classmethod
    def from_poly(cls, poly: Poly) -> "ExpPart":
        if poly.coeff(0):
            raise ValueError("exponential parts have zero constant term")
        return cls.from_puiseux(Puiseux({Fraction(j, poly.ram): c for j, c in enumerate(poly.coeffs) if c}))

    @classmethod
    def zero(cls) -> "ExpPart":
        return cls(())

    @property
    def approximate(self) -> bool:
        return any(isinstance(c, complex) for _, c in self.terms)

    @property
    def ram(self) -> int:
        return reduce(_lcm, (e.denominator for e, _ in self.terms), 1)

    @property
    def poly(self) -> Poly:
        if self.approximate:
            raise FormalError("approximate exponential part has no exact polynomial")
        return self.puiseux().to_poly()

    def puiseux(self) -> Puiseux:
        return Puiseux(dict(self.terms))

    def derivative(self) -> Puiseux:
        return self.puiseux().derive()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpPart") -> "ExpPart":
        return ExpPart.from_puiseux(self.puiseux() + other.puiseux())

    def __sub__(self, other: "ExpPart") -> "ExpPart":
        return ExpPart.from_puiseux(self.puiseux() - other.puiseux())

    def __neg__(self) -> "ExpPart":
        return ExpPart.from_puiseux(-self.puiseux())

    def scale(self, c) -> "ExpPart":
        return ExpPart.from_puiseux(self.puiseux() * c)

    def expr(self) -> str:
        return _render_terms(self.terms) if self.terms else "0"

    def __str__(self) -> str:
        return self.expr()

    def sort_key(self):
        out = []
        for e, c in self.terms:
            z = complex(c)
            out.append((e, z.real, z.imag))
        return tuple(out)

    def close_to(self, other: "ExpPart", tol: float = 1e-7) -> bool:
        d = self.puiseux().to_complex() - other.puiseux().to_complex()
        return all(abs(c) < tol for c in d.terms.values())


@dataclass(frozen=True)
class ExpParts:
    parts: tuple[tuple[ExpPart, int], ...]
    ram: int
    approximate: bool

    def multiset(self) -> list[ExpPart]:
        return [q for q, m in self.parts for _ in range(m)]

    def total(self) -> int:
        return sum(m for _, m in self.parts)

    def to_json(self) -> dict:
        return {"parts": [{"poly": q.expr()} for q in self.multiset()], "ram": self.ram}


@dataclass(frozen=True)
class FormalSol:
    """``exp(exp_part) z^gamma sum_n series[n] z^(-n/ram)``, log-free."""

    exp_part: ExpPart
    gamma: Scalar
    series: tuple[Scalar, ...]
    ram: int
    trunc: int
    log_degree: int = 0
    approximate: bool = False

    def __post_init__(self) -> None:
        if self.trunc < 0:
            raise ValueError("truncation order must be nonnegative")
        if self.trunc and not any(_nz(c) for c in self.series):
            raise ValueError("leading series must not vanish")

    def U(self) -> Puiseux:
        return Puiseux({Fraction(-n, self.ram): c for n, c in enumerate(self.series)})

    def to_json(self) -> dict:
        return {
            "exp": self.exp_part.expr(),
            "gamma": render_scalar(self.gamma)[0] if isinstance(self.gamma, complex) else str(self.gamma),
            "series": [render_scalar(c)[0] if isinstance(c, complex) else str(c) for c in self.series],
            "trunc": self.trunc,
        }


# --------------------------------------------------------------------------- operators as Puiseux


def _scaled_coeffs(L: LinOp) -> list[Puiseux]:
    """Coefficients of ``L`` times a common denominator: Laurent-Puiseux polynomials."""
    cs = []
    for c in L.coeffs:
        if hasattr(c, "to_ratfun") and not isinstance(c, RatFun):
            c = c.to_ratfun()
        if not isinstance(c, RatFun):
            raise TypeError("formal analysis needs rational-function coefficients")
        cs.append(c)
    if not cs:
        raise FormalError("zero operator")
    den = reduce(lambda a, b: a * b.divmod(a.gcd(b))[0], (c.den for c in cs))
    out = []
    for c in cs:
        r = c * RatFun(den)
        out.append(Puiseux.from_ratfun(r))
    return out


def _as_op(cs: Sequence[Puiseux]) -> LinOp:
    return LinOp(list(cs), Puiseux())


def _shift(cs: Sequence[Puiseux], u: Puiseux) -> list[Puiseux]:
    L = _as_op(cs).shift(u)
    return [L.coeff(j) for j in range(len(cs))]


def _falling(x, j: int):
    out = GaussRat(1) if not isinstance(x, complex) else 1 + 0j
    for r in range(j):
        out = out * (x - r)
    return out


# --------------------------------------------------------------------------- root finding


def _to_qqi(c: GaussRat):
    return QQ_I(QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator))


def _from_qqi(g) -> GaussRat:
    return GaussRat(Fraction(int(g.x.numerator), int(g.x.denominator)), Fraction(int(g.y.numerator), int(g.y.denominator)))


_X = Symbol("x")


def _exact_roots(coeffs: Sequence[GaussRat]) -> tuple[list[tuple[GaussRat, int]], list[tuple[list[complex], int]]]:
    """Roots of ``sum coeffs[j] x^j`` in Q(i), plus leftover root-free factors.

    Square-free factors come from Yun's algorithm, so multiplicities are exact.
    A root ``r`` in Q(i) of a factor with Gaussian-integer coefficients and
    leading coefficient ``c`` has ``c*r`` a Gaussian integer: high-precision
    numerical roots are rounded on that lattice and confirmed by exact
    evaluation.  Leftover factors have no root in Q(i).
    """
    if len(coeffs) == 2:
        return [(-coeffs[0] / coeffs[1], 1)], []
    roots, rest = [], []
    for a, m in _yun(Poly(tuple(coeffs))):
        found = _lattice_roots(a)
        if found is None:
            return _factor_roots(coeffs)
        for r in found:
            a = a.divmod(Poly((-r, GaussRat(1))))[0]
            roots.append((r, m))
        if a.degree > 0:
            rest.append(([complex(c) for c in a.coeffs], m))
    return roots, rest


def _yun(f: Poly) -> list[tuple[Poly, int]]:
    """Square-free decomposition ``f = lc * prod a_i^i`` (factors of degree >= 1 only)."""
    fp = f.diff_s()
    b = f.gcd(fp)
    c = f.divmod(b)[0]
    d = fp.divmod(b)[0] - c.diff_s()
    out, i = [], 1
    while c.degree > 0:
        a = c.gcd(d)
        c = c.divmod(a)[0]
        d = d.divmod(a)[0] - c.diff_s()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def _lattice_roots(a: Poly) -> list[GaussRat] | None:
    """Roots in Q(i) of a square-free ``a``; None if the numerics cannot be trusted."""
    den = 1
    for c in a.coeffs:
        den = den * c.re.denominator // gcd(den, c.re.denominator)
        den = den * c.im.denominator // gcd(den, c.im.denominator)
    ints = [c * den for c in a.coeffs]
    lead = ints[-1]
    with mpmath.workdps(60):
        try:
            approx, err = mpmath.polyroots([mpmath.mpc(int(c.re), int(c.im)) for c in reversed(ints)],
                                           maxsteps=200, extraprec=120, error=True)
        except mpmath.libmp.NoConvergence:
            return None
        if err > mpmath.mpf(10) ** -30:
            return None
        out = []
        for r in approx:
            w = r * mpmath.mpc(int(lead.re), int(lead.im))
            g = GaussRat(int(mpmath.nint(w.real)), int(mpmath.nint(w.imag)))
            if abs(w - mpmath.mpc(int(g.re), int(g.im))) > mpmath.mpf(10) ** -20:
                continue
            cand = g / lead
            if not _horner(a.coeffs, cand) and cand not in out:
                out.append(cand)
    return out


def _horner(coeffs: Sequence[GaussRat], x: GaussRat) -> GaussRat:
    acc = GaussRat(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _factor_roots(coeffs: Sequence[GaussRat]) -> tuple[list[tuple[GaussRat, int]], list[tuple[list[complex], int]]]:
    """Slow fallback: full factorisation over Q(i)."""
    P = SymPoly.from_list([_to_qqi(c) for c in reversed(coeffs)], _X, domain=QQ_I)
    _, factors = P.factor_list()
    roots, rest = [], []
    for f, m in factors:
        cs = f.rep.to_list()
        if len(cs) == 2:
            roots.append((_from_qqi(-cs[1] / cs[0]), m))
        elif len(cs) > 2:
            rest.append(([complex(_from_qqi(c)) for c in reversed(cs)], m))
    return roots, rest


def _numeric_roots(coeffs: Sequence[complex]) -> list[tuple[complex, int]]:
    rs = np.roots([complex(c) for c in reversed(coeffs)])
    out: list[list] = []
    for r in rs:
        for slot in out:
            if abs(slot[0] - r) < ROOT_CLUSTER * max(1.0, abs(r)):
                slot[0] = (slot[0] * slot[1] + r) / (slot[1] + 1)
                slot[1] += 1
                break
        else:
            out.append([complex(r), 1])
    return [(complex(r), m) for r, m in out]


# --------------------------------------------------------------------------- Newton iteration


def _upper_hull(pts: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _edges(cs: Sequence[Puiseux]) -> tuple[int, list[tuple[Fraction, int, int]]]:
    """Lowest index with nonzero coefficient and the hull edges as (s, j1, j2).

    Along an edge, ``y'/y ~ c z^s`` balances the terms ``a_j (y'/y)^j``.
    """
    pts = [(j, c.lead_exp()) for j, c in enumerate(cs) if c]
    hull = _upper_hull(pts)
    edges = []
    for (j1, d1), (j2, d2) in zip(hull, hull[1:]):
        edges.append((Fraction(d1 - d2, j2 - j1), j1, j2))
    return pts[0][0], edges


def _char_poly(cs: Sequence[Puiseux], s: Fraction, j1: int, j2: int) -> list[Scalar]:
    top = max(c.lead_exp() + j * s for j, c in enumerate(cs) if c)
    vals = {j: cs[j].lead() for j in range(j1, j2 + 1) if cs[j] and cs[j].lead_exp() + j * s == top}
    zero = GaussRat(0) if all(isinstance(c, GaussRat) for c in vals.values()) else 0j
    return [vals.get(j, zero) for j in range(j1, j2 + 1)]


def _branch(cs: list[Puiseux], prefix: tuple[tuple[Fraction, Scalar], ...], s_max: Fraction | None, mult: int,
            out: list[tuple[Puiseux, int, bool]], approx: bool) -> None:
    jmin, edges = _edges(cs)
    stop = jmin
    width = jmin
    for s, j1, j2 in edges:
        if s_max is not None and s >= s_max:
            continue
        width += j2 - j1
        if s <= -1:
            stop += j2 - j1
            continue
        chi = _char_poly(cs, s, j1, j2)
        if all(isinstance(c, GaussRat) for c in chi):
            roots, rest = _exact_roots(chi)
            numeric = [(r, m) for f, fm in rest for r, _ in _numeric_roots(f) for m in [fm]]
        else:
            roots, numeric = [], _numeric_roots(chi)
        for c, m in roots:
            u = Puiseux.monomial(c, s)
            _branch(_shift(cs, u), prefix + ((s, c),), s, m, out, approx)
        for c, m in numeric:
            u = Puiseux.monomial(c, s)
            _branch(_shift([x.to_complex() for x in cs], u), prefix + ((s, c),), s, m, out, True)
    if width != mult:
        raise FormalError(f"Newton iteration lost track of solutions ({width} != {mult})")
    if stop:
        q = Puiseux()
        for s, c in prefix:
            q = q + Puiseux.monomial(c * Fraction(1) / (s + 1) if isinstance(c, GaussRat) else c / float(s + 1), s + 1)
        out.append((q, stop, approx))


def exponential_parts(L: LinOp) -> ExpParts:
    """Exponential parts of the formal solutions at infinity, with multiplicities."""
    cs = _scaled_coeffs(L)
    k = len(cs) - 1
    found: list[tuple[Puiseux, int, bool]] = []
    if k >= 1:
        _branch(cs, (), None, k, found, False)
    merged: list[list] = []
    for q, m, approx in found:
        part = ExpPart.from_puiseux(q)
        for slot in merged:
            if slot[0] == part:
                slot[1] += m
                break
        else:
            merged.append([part, m, approx])
    merged.sort(key=lambda t: _desc_key(t[0]))
    ram = reduce(_lcm, (t[0].ram for t in merged), 1)
    return ExpParts(tuple((p, m) for p, m, _ in merged), ram, any(a for *_, a in merged))


def _desc_key(q: ExpPart):
    # larger leading terms first; real part before imaginary part
    out = []
    for e, c in q.terms:
        z = complex(c)
        out.append((-e, -z.real, -z.imag))
    return tuple(out) + ((1,),)


# --------------------------------------------------------------------------- formal solutions


def _phi_tables(cs: Sequence[Puiseux]) -> tuple[Fraction, int, dict[int, list[tuple[int, Scalar]]]]:
    """Indicial data: top exponent delta0, ramification p, and phi_m as (j, coefficient) lists."""
    pts = [(e - j, j, c) for j, b in enumerate(cs) for e, c in b.terms.items()]
    delta0 = max(x for x, _, _ in pts)
    p = reduce(_lcm, ((delta0 - x).denominator for x, _, _ in pts), 1)
    phis: dict[int, list[tuple[int, Scalar]]] = {}
    for x, j, c in pts:
        m = int((delta0 - x) * p)
        phis.setdefault(m, []).append((j, c))
    return delta0, p, phis


def _phi_eval(terms: list[tuple[int, Scalar]], x) -> Scalar:
    out = None
    for j, c in terms:
        t = c * _falling(x, j)
        out = t if out is None else out + t
    return out


def _find_part(L: LinOp, part: ExpPart) -> tuple[int, bool]:
    parts = exponential_parts(L)
    for q, m in parts.parts:
        if q == part or (parts.approximate and q.close_to(part)):
            return m, parts.approximate
    raise FormalError(f"{part.expr()} is not an exponential part of the operator")


def formal_solution(L: LinOp, part: ExpPart, order: int = DEFAULT_TRUNC) -> FormalSol:
    """Log-free formal solution with the given exponential part, ``order`` series terms."""
    if order < 1:
        raise ValueError("order must be >= 1")
    mult, approx = _find_part(L, part)
    if mult > 1:
        raise UnsupportedLogError(f"exponential part {part.expr()} has multiplicity {mult}")
    cs = _scaled_coeffs(L)
    if approx or part.approximate:
        cs = [c.to_complex() for c in cs]
        approx = True
    cs = _shift(cs, part.derivative())
    delta0, p, phis = _phi_tables(cs)
    phi0 = phis[0]
    degree = max(j for j, _ in phi0)
    if degree != 1 and not (len(phi0) == 1 and degree >= 1):
        raise FormalError("indicial equation is not linear; the part is not simple")
    # phi0(x) = a + b x  when J = {0, 1};  b x (x-1)...(x-j+1) reduces to x = 0 otherwise
    if len(phi0) == 1:
        gamma = 0j if approx else GaussRat(0)
        if phi0[0][0] > 1:
            raise FormalError("indicial equation has a repeated root")
    else:
        a = next((c for j, c in phi0 if j == 0), None)
        b = next(c for j, c in phi0 if j == 1)
        gamma = -a / b
    zero = 0j if approx else GaussRat(0)
    u: list[Scalar] = [1 + 0j if approx else GaussRat(1)]
    for N in range(1, order):
        acc = zero
        for n in range(N):
            terms = phis.get(N - n)
            if terms and _nz(u[n]):
                acc = acc + u[n] * _phi_eval(terms, gamma - Fraction(n, p))
        den = _phi_eval(phi0, gamma - Fraction(N, p))
        if not _nz(den):
            raise FormalError("recursion hit a vanishing indicial value")
        u.append(-acc / den)
    return FormalSol(part, gamma, tuple(u), p, order, 0, approx)


def residual(L: LinOp, sol: FormalSol) -> tuple[Puiseux, Fraction]:
    """``L[y]/(e^q z^gamma)`` for the truncated solution and the bound its exponents must stay below.

    The operator is used in its denominator-cleared form; the bound is the
    exponent contributed by the last retained term.
    """
    cs = _scaled_coeffs(L)
    if sol.approximate:
        cs = [c.to_complex() for c in cs]
    g = sol.exp_part.derivative() + Puiseux.monomial(sol.gamma, -1)
    V = sol.U()
    out = cs[0] * V
    for b in cs[1:]:
        V = V.derive() + g * V
        out = out + b * V
    shifted = _shift(cs, sol.exp_part.derivative())
    delta0, _, _ = _phi_tables(shifted)
    bound = delta0 - Fraction(sol.trunc - 1, sol.ram)
    return out, bound


# --------------------------------------------------------------------------- Wronskian


def formal_wronskian(sols: Sequence[FormalSol]) -> FormalSol:
    """Wronskian of log-free formal solutions, kept to the precision the inputs support."""
    k = len(sols)
    if k == 0:
        raise ValueError("empty list")
    for a, b in combinations(range(k), 2):
        if sols[a].exp_part == sols[b].exp_part:
            raise ValueError("exponential parts must differ by non-constants")
    approx = any(s.approximate for s in sols)
    cols = []
    growth = []
    for s in sols:
        qd = s.exp_part.derivative()
        g = qd + Puiseux.monomial(s.gamma, -1)
        gdeg = max(g.lead_exp(), Fraction(-1)) if g else Fraction(-1)
        growth.append(gdeg)
        V = s.U()
        col = [V]
        for _ in range(k - 1):
            V = V.derive() + g * V
            col.append(V)
        cols.append(col)
    M = [[cols[j][i] for j in range(k)] for i in range(k)]
    det = determinant(M)
    # exponents above this bound are unaffected by the truncated tails
    e_max = sum(i * g for i, g in enumerate(sorted(growth)))
    precise = e_max - min(Fraction(s.trunc, s.ram) for s in sols)
    if not det or det.lead_exp() <= precise:
        raise FormalError("truncation too short to determine the Wronskian; raise the order")
    e0 = det.lead_exp()
    p = reduce(_lcm, [det.ram()] + [s.ram for s in sols] + [s.exp_part.ram for s in sols], 1)
    n_terms = math.ceil((e0 - precise) * p)
    series = tuple(det.coeff(e0 - Fraction(n, p)) if not approx else complex(det.coeff(e0 - Fraction(n, p)))
                   for n in range(n_terms))
    gamma = sum((s.gamma for s in sols), GaussRat(0) if not approx else 0j) + e0
    q = reduce(lambda a, b: a + b, (s.exp_part for s in sols))
    return FormalSol(q, gamma, series, p, n_terms, 0, approx)


# --------------------------------------------------------------------------- Abel


def laurent_at_infinity(r: RatFun, above: Fraction) -> Puiseux:
    """Expansion of ``r`` at infinity, keeping exponents strictly greater than ``above``."""
    if r.is_zero():
        return Puiseux()
    p = r.ram
    num, den = list(r.num.coeffs), r.den.coeffs
    dd = len(den) - 1
    inv = den[-1].inverse()
    out: dict[Fraction, GaussRat] = {}
    # long division in descending powers of s
    work = dict(enumerate(num))
    top = len(num) - 1
    e = top - dd
    while Fraction(e, p) > above:
        c = work.get(e + dd, GaussRat(0)) * inv
        if c:
            out[Fraction(e, p)] = c
            for j, d in enumerate(den):
                work[e + j] = work.get(e + j, GaussRat(0)) - c * d
        e -= 1
    return Puiseux(out)


def abel_target(L: LinOp) -> Puiseux:
    """Polynomial part of ``-integral(a_{k-1}/a_k)``."""
    k = L.order
    a = L.coeff(k - 1) / L.lead
    if hasattr(a, "to_ratfun") and not isinstance(a, RatFun):
        a = a.to_ratfun()
    ser = laurent_at_infinity(a, Fraction(-1))
    return -ser.integrate()


def check_abel(L: LinOp) -> bool:
    """Do the exponential parts sum, with multiplicity, to the polynomial part of ``-integral a_{k-1}``?"""
    k = L.order
    if k < 1:
        raise ValueError("operator of order >= 1 required")
    a = L.coeff(k - 1) / L.lead
    if hasattr(a, "to_ratfun") and not isinstance(a, RatFun):
        a = a.to_ratfun()
    if not a.is_zero() and a.deg_infty() >= 0:
        raise ValueError("precondition violated: a_{k-1} must vanish at infinity")
    parts = exponential_parts(L)
    total = Puiseux()
    for q, m in parts.parts:
        total = total + q.puiseux() * m
    diff = total - abel_target(L)
    if parts.approximate:
        return all(abs(complex(c)) < 1e-7 for c in diff.terms.values())
    return diff.is_zero()


# --------------------------------------------------------------------------- Hille


@dataclass(frozen=True)
class CriticalRayData:
    angles: tuple[float, ...]
    z_lead_coeff: Scalar
    z_lead_exp: Fraction
    solutions: tuple[FormalSol, ...]
    n: int
    c_n: GaussRat


def hille_second_order(a_star: RatFun, order: int = DEFAULT_TRUNC) -> CriticalRayData:
    """Critical rays and formal solutions of ``w'' + a_star w = 0``."""
    n = a_star.deg_infty()
    if a_star.is_zero() or n < -1:
        raise ValueError("need deg_infty(a_star) >= -1")
    if Fraction(n).denominator != 1:
        raise ValueError("deg_infty(a_star) must be an integer")
    n = int(n)
    c = a_star.lc_infty()
    arg = cmath.phase(complex(c))
    angles = sorted(((2 * math.pi * j - arg) / (n + 2)) % (2 * math.pi) for j in range(n + 2))
    root = c.sqrt()
    if root is None:
        lead = 2 * cmath.sqrt(complex(c)) / (n + 2)
    else:
        lead = root * Fraction(2, n + 2)
    L = LinOp([a_star, 0, 1])
    parts = exponential_parts(L)
    sols = tuple(formal_solution(L, q, order) for q, m in parts.parts if m == 1)
    return CriticalRayData(tuple(angles), lead, Fraction(n + 2, 2), sols, n, c)


# --------------------------------------------------------------------------- bookkeeping


def shifted_parts(qs: Sequence[ExpPart], kappa: ExpPart, lam: int) -> list[ExpPart]:
    """``q_j + kappa`` for ``j != lam`` and ``q_lam - (k-1) kappa`` (1-based ``lam``)."""
    k = len(qs)
    if not 1 <= lam <= k:
        raise ValueError("lambda out of range")
    return [q - kappa.scale(k - 1) if j == lam else q + kappa for j, q in enumerate(qs, start=1)]


class RayCase(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    NONE = "NONE"


def classify_parts_on_ray(parts: Sequence[ExpPart], theta: float) -> tuple[RayCase, tuple[ExpPart, ...]]:
    """Which ordering pattern three parts form along the ray arg z = theta.

    Returns the case and the parts as ``(kappa_1, kappa_2, kappa_3)``.
    """
    if len(parts) != 3:
        raise ValueError("exactly three parts")
    if len({p for p in parts}) != 3:
        raise ValueError("parts must be pairwise distinct")
    zero = Poly()
    zeros = [p for p in parts if p.is_zero()]
    rest = [p for p in parts if not p.is_zero()]
    neg, pos = [], []
    for p in rest:
        o = ray_compare(p.poly, zero, theta)
        if o is Order.PREC:
            neg.append(p)
        elif o is Order.SUCC:
            pos.append(p)
        else:
            return RayCase.NONE, tuple(parts)
    if len(neg) == 2:
        o = ray_compare(neg[0].poly, neg[1].poly, theta)
        if o is Order.SIM:
            return RayCase.NONE, tuple(parts)
        if o is Order.SUCC:
            neg.reverse()
    if not zeros and len(neg) == 2 and len(pos) == 1:
        return RayCase.A, (neg[0], neg[1], pos[0])
    if zeros and len(neg) == 2:
        return RayCase.B, (neg[0], neg[1], zeros[0])
    if zeros and len(neg) == 1 and len(pos) == 1:
        return RayCase.C, (neg[0], zeros[0], pos[0])
    return RayCase.NONE, tuple(parts)


__all__ = [
    "CriticalRayData", "ExpPart", "ExpParts", "FormalSol", "NearTieError", "Puiseux", "RayCase",
    "UnsupportedLogError", "check_abel", "classify_parts_on_ray", "exponential_parts", "formal_solution",
    "formal_wronskian", "hille_second_order", "residual", "shifted_parts", "laurent_at_infinity",
]
