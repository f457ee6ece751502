"""Differential field towers over Q(i)(z).

A tower is Q(i)(s, x_1, ..., x_n) where ``s = z^(1/P)`` and every ``x_j`` is a
generator whose derivative is fixed by its kind:

* ``exp``  (also spelled ``logderiv``): ``t'/t = u``
* ``prim``: ``t' = u`` (``u = 0`` gives a symbolic constant)
* ``root``: ``t = z^(1/q)``; realised as a power of ``s``, so no new variable
* ``free``: a differential indeterminate ``T`` with jets ``T', T'', ...`` up to a
  declared order; differentiating the top jet is an error

Elements are stored as a pair ``(A, B)`` of rational functions over Q, meaning
``A + i*B``.  Both parts are reduced quotients, so zero testing is structural
under the assumption that the generators are algebraically independent.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from sympy import QQ
from sympy.polys.fields import FracElement, field

from .field import GaussRat, Poly, RatFun, gr, scalar_expr

Scalar = Union[int, Fraction, GaussRat]


class GenKind(enum.Enum):
    EXP = "exp"
    PRIM = "prim"
    ROOT = "root"
    FREE = "free"


class TowerError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    kind: GenKind
    arg: object  # TowerElem for EXP/PRIM, int for ROOT and FREE


def _q(x: Fraction) -> object:
    return QQ(x.numerator, x.denominator)


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _jet_name(name: str, j: int) -> str:
    return name + "'" * j


class Tower:
    """An immutable differential field; extend it to get a new tower."""

    def __init__(self, ram: int = 1, gens: Sequence[Generator] = (), _vars: Sequence[str] = ()) -> None:
        self.ram = ram
        self.gens: tuple[Generator, ...] = tuple(gens)
        self.var_names: tuple[str, ...] = tuple(_vars)
        self.K, *syms = field(",".join(["s"] + [f"x{j}" for j in range(len(self.var_names))]), QQ)
        self._syms = syms
        self._index = {n: j + 1 for j, n in enumerate(self.var_names)}
        self._derivs: list[tuple[FracElement, FracElement] | None] = []
        self._aliases: dict[str, TowerElem] = {}
        self._build_derivatives()

    # -- construction -----------------------------------------------------

    def _build_derivatives(self) -> None:
        K, p = self.K, self.ram
        s = self._syms[0]
        # ds/dz = 1/(p s^(p-1))
        self._derivs = [(K.one / (p * s ** (p - 1)), K.zero)]
        defs: dict[str, tuple[FracElement, FracElement] | None] = {}
        for g in self.gens:
            if g.kind is GenKind.ROOT:
                self._aliases[g.name] = self._elem(s ** (p // g.arg), K.zero)
            elif g.kind is GenKind.FREE:
                for j in range(g.arg + 1):
                    nxt = _jet_name(g.name, j + 1)
                    defs[_jet_name(g.name, j)] = (self._syms[self._index[nxt]], K.zero) if j < g.arg else None
            else:
                u = self.convert(g.arg)
                x = self._syms[self._index[g.name]]
                if g.kind is GenKind.EXP:
                    defs[g.name] = (u.re * x, u.im * x)
                else:
                    defs[g.name] = (u.re, u.im)
        for n in self.var_names:
            self._derivs.append(defs[n])

    def _extend(self, gen: Generator, new_vars: Sequence[str] = (), ram: int | None = None) -> "Tower":
        names = {g.name for g in self.gens} | set(self.var_names) | {"z"}
        for n in (gen.name, *new_vars):
            if n in names:
                raise TowerError(f"generator name {n!r} already used")
        return Tower(ram or self.ram, self.gens + (gen,), self.var_names + tuple(new_vars))

    def adjoin_exp(self, name: str, u) -> "Tower":
        """Generator t with t'/t = u."""
        return self._extend(Generator(name, GenKind.EXP, self.convert(u)), (name,))

    def adjoin_prim(self, name: str, u) -> "Tower":
        """Generator t with t' = u."""
        return self._extend(Generator(name, GenKind.PRIM, self.convert(u)), (name,))

    def adjoin_const(self, name: str) -> "Tower":
        return self.adjoin_prim(name, 0)

    def adjoin_root(self, name: str, q: int) -> "Tower":
        """Alias ``name = z^(1/q)``; the base variable becomes ``z^(1/lcm)``."""
        if q < 1:
            raise TowerError("root index must be positive")
        ram = self.ram * q // gcd(self.ram, q)
        return self._extend(Generator(name, GenKind.ROOT, q), (), ram)

    def adjoin_free(self, name: str, order: int) -> "Tower":
        """Differential indeterminate with jets up to ``order``."""
        if order < 0:
            raise TowerError("jet order must be nonnegative")
        jets = [_jet_name(name, j) for j in range(order + 1)]
        return self._extend(Generator(name, GenKind.FREE, order), jets)

    # -- access -----------------------------------------------------------

    @property
    def z(self) -> "TowerElem":
        return self._elem(self._syms[0] ** self.ram, self.K.zero)

    def gen(self, name: str) -> "TowerElem":
        if name == "z":
            return self.z
        if name in self._aliases:
            return self._aliases[name]
        if name in self._index:
            return self._elem(self._syms[self._index[name]], self.K.zero)
        raise TowerError(f"undeclared generator {name!r}")

    def names(self) -> list[str]:
        return list(self.var_names) + list(self._aliases)

    def __contains__(self, name: str) -> bool:
        return name == "z" or name in self._index or name in self._aliases

    def _elem(self, re: FracElement, im: FracElement) -> "TowerElem":
        e = object.__new__(TowerElem)
        e.tower, e.re, e.im = self, re, im
        return e

    def zero(self) -> "TowerElem":
        return self._elem(self.K.zero, self.K.zero)

    def one(self) -> "TowerElem":
        return self._elem(self.K.one, self.K.zero)

    def __call__(self, x) -> "TowerElem":
        return self.convert(x)

    def convert(self, x) -> "TowerElem":
        """Coerce scalars, RatFuns and elements of sub-towers."""
        if isinstance(x, TowerElem):
            if x.tower is self:
                return x
            return self._embed(x)
        if isinstance(x, RatFun):
            return self._from_poly(x.num) / self._from_poly(x.den)
        if isinstance(x, Poly):
            return self._from_poly(x)
        c = gr(x)
        return self._elem(self.K(_q(c.re)), self.K(_q(c.im)))

    def _from_poly(self, p: Poly) -> "TowerElem":
        if self.ram % p.ram:
            raise TowerError(f"z^(1/{p.ram}) needs a root generator of index {p.ram}")
        f = self.ram // p.ram
        n = len(self.var_names)
        R = self.K.ring
        re = R.from_dict({(f * j,) + (0,) * n: _q(c.re) for j, c in enumerate(p.coeffs) if c.re})
        im = R.from_dict({(f * j,) + (0,) * n: _q(c.im) for j, c in enumerate(p.coeffs) if c.im})
        return self._elem(self.K.new(re), self.K.new(im))

    def _embed(self, x: "TowerElem") -> "TowerElem":
        src = x.tower
        if self.ram % src.ram:
            raise TowerError("element needs a finer root than this tower declares")
        f = self.ram // src.ram
        try:
            pos = [self._index[n] for n in src.var_names]
        except KeyError as exc:
            raise TowerError(f"generator {exc.args[0]!r} not in target tower") from None
        width = len(self.var_names) + 1
        R = self.K.ring

        def move(poly):
            out = {}
            for mon, c in poly.terms():
                m = [0] * width
                m[0] = mon[0] * f
                for k, e in enumerate(mon[1:]):
                    m[pos[k]] = e
                out[tuple(m)] = c
            return R.from_dict(out)

        def frac(F):
            return self.K.new(move(F.numer), move(F.denom))

        return self._elem(frac(x.re), frac(x.im))

    def var_symbol(self, name: str):
        return self.K.ring.gens[self._index[name]]

    def declaration(self) -> str:
        """Config-file text that rebuilds this tower."""
        lines = []
        for g in self.gens:
            arg = g.arg if isinstance(g.arg, int) else g.arg.expr()
            lines.append(f"gen {g.name} : {g.kind.value} = {arg};")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"Tower(ram={self.ram}, gens={[g.name for g in self.gens]})"


def _canon(F: FracElement):
    c = F.denom.LC
    return F.numer.quo_ground(c), F.denom.quo_ground(c)


class TowerElem:
    """Element ``re + i*im`` of a tower; immutable value type."""

    __slots__ = ("tower", "re", "im")

    def _lift(self, other) -> "TowerElem | None":
        if isinstance(other, TowerElem):
            if other.tower is self.tower:
                return other
            try:
                return self.tower.convert(other)
            except TowerError:
                return None
        if isinstance(other, (int, Fraction, GaussRat, RatFun, Poly)):
            return self.tower.convert(other)
        return None

    def _new(self, re, im) -> "TowerElem":
        return self.tower._elem(re, im)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, TowerElem):
                return other.tower.convert(self) + other
            return NotImplemented
        return self._new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "TowerElem":
        return self._new(-self.re, -self.im)

    def __pos__(self) -> "TowerElem":
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, TowerElem):
                return other.tower.convert(self) - other
            return NotImplemented
        return self._new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, TowerElem):
                return other.tower.convert(self) * other
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return self._new(a * c, b)
        if not b:
            return self._new(a * c, a * d)
        if not d:
            return self._new(a * c, b * c)
        return self._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "TowerElem":
        a, b = self.re, self.im
        if not a and not b:
            raise ZeroDivisionError("inverse of zero tower element")
        if not b:
            return self._new(1 / a, b)
        n = a * a + b * b
        return self._new(a / n, -b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, TowerElem):
                return other.tower.convert(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "TowerElem":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = self.tower.one()
        for _ in range(abs(n)):
            out = out * base
        return out

    def conjugate(self) -> "TowerElem":
        return self._new(self.re, -self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            if isinstance(other, TowerElem):
                try:
                    return (other.tower.convert(self) - other).is_zero()
                except TowerError:
                    return False
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self) -> int:
        if self.is_const():
            return hash(self.const_value())
        return hash((_canon(self.re), _canon(self.im)))

    # -- derivation -------------------------------------------------------

    def derive(self) -> "TowerElem":
        """d/dz using each generator's defining relation."""
        re_r, re_i = _derive_real(self.tower, self.re)
        if not self.im:
            return self._new(re_r, re_i)
        im_r, im_i = _derive_real(self.tower, self.im)
        # (A + iB)' = A' + i B'
        return self._new(re_r - im_i, re_i + im_r)

    # -- inspection -------------------------------------------------------

    def free_vars(self) -> set[str]:
        names = ["s", *self.tower.var_names]
        out = set()
        for F in (self.re, self.im):
            for poly in (F.numer, F.denom):
                for mon in poly.monoms():
                    out.update(names[k] for k, e in enumerate(mon) if e)
        return out

    def is_const(self) -> bool:
        return not self.free_vars()

    def const_value(self) -> GaussRat:
        if not self.is_const():
            raise TowerError("element is not a rational constant")
        return GaussRat(_frac(self.re.numer.LC) / _frac(self.re.denom.LC) if self.re else 0,
                        _frac(self.im.numer.LC) / _frac(self.im.denom.LC) if self.im else 0)

    def is_rational(self) -> bool:
        """True when the element lies in Q(i)(z^(1/P)), free of generators."""
        return self.free_vars() <= {"s"}

    def to_ratfun(self) -> RatFun:
        if not self.is_rational():
            raise TowerError("element involves generators; not a rational function of z")
        p = self.tower.ram

        def poly(P) -> Poly:
            cs: dict[int, Fraction] = {}
            for mon, c in P.terms():
                cs[mon[0]] = _frac(c)
            top = max(cs) if cs else -1
            return Poly([cs.get(j, 0) for j in range(top + 1)], p)

        def rf(F) -> RatFun:
            return RatFun(poly(F.numer), poly(F.denom))

        return rf(self.re) + rf(self.im) * GaussRat(0, 1)

    def _parts(self):
        """Common-denominator form: (list of ((monomial), GaussRat)), denominator poly."""
        R = self.tower.K.ring
        A, B = self.re, self.im
        if not B:
            D = A.denom
            num = {m: GaussRat(_frac(c)) for m, c in A.numer.terms()}
        elif not A:
            D = B.denom
            num = {m: GaussRat(0, _frac(c)) for m, c in B.numer.terms()}
        else:
            g = A.denom.gcd(B.denom)
            D = A.denom * B.denom.quo(g)
            na = A.numer * D.quo(A.denom)
            nb = B.numer * D.quo(B.denom)
            num = {}
            for m, c in na.terms():
                num[m] = GaussRat(_frac(c))
            for m, c in nb.terms():
                num[m] = num.get(m, GaussRat(0)) + GaussRat(0, _frac(c))
        lc = _frac(D.LC)
        D = D.quo_ground(D.LC)
        num = {m: c / lc for m, c in num.items() if c}
        return num, D, R

    def degree_in(self, name: str) -> int:
        k = self.tower._index[name]
        num, D, _ = self._parts()
        if D.degree(k) > 0:
            raise TowerError(f"denominator depends on {name}")
        return max((m[k] for m in num), default=-1)

    def coeffs_in(self, name: str) -> list["TowerElem"]:
        """Coefficients of the element as a polynomial in generator ``name``."""
        T = self.tower
        k = T._index[name]
        num, D, R = self._parts()
        if D.degree(k) > 0:
            raise TowerError(f"denominator depends on {name}")
        top = max((m[k] for m in num), default=-1)
        groups: list[dict] = [{} for _ in range(top + 1)]
        for m, c in num.items():
            mm = list(m)
            mm[k] = 0
            groups[m[k]][tuple(mm)] = c
        den = T.K.new(D)
        out = []
        for grp in groups:
            re = R.from_dict({m: _q(c.re) for m, c in grp.items() if c.re})
            im = R.from_dict({m: _q(c.im) for m, c in grp.items() if c.im})
            out.append(T._elem(T.K.new(re) / den, T.K.new(im) / den))
        return out

    def __call__(self, at: dict[str, complex]) -> complex:
        """Numerical value with z and generators given (z is required)."""
        T = self.tower
        s = complex(at["z"]) ** (1.0 / T.ram)
        vals = [s] + [complex(at[n]) for n in T.var_names]

        def ev(P):
            return sum(complex(float(_frac(c))) * _mono(vals, m) for m, c in P.terms())

        def evf(F):
            return ev(F.numer) / ev(F.denom)

        return evf(self.re) + 1j * evf(self.im)

    # -- rendering --------------------------------------------------------

    def expr(self) -> str:
        num, D, _ = self._parts()
        names = self.tower.var_names
        p = self.tower.ram
        if not num:
            return "0"
        top = _render_poly(num, names, p)
        if D.is_ground:
            return top
        dterms = {m: GaussRat(_frac(c)) for m, c in D.terms()}
        bottom = _render_poly(dterms, names, p)
        if len(num) > 1 or top.startswith("-"):
            top = f"({top})"
        if len(dterms) > 1 or not _is_atom(bottom):
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def __str__(self) -> str:
        return self.expr()

    def __repr__(self) -> str:
        return f"TowerElem({self.expr()!r})"


def _is_atom(txt: str) -> bool:
    return "*" not in txt and "^" not in txt


def _mono(vals, mon) -> complex:
    out = 1 + 0j
    for v, e in zip(vals, mon):
        if e:
            out *= v ** e
    return out


def _render_mono(mon, names, p) -> str:
    parts = []
    if mon[0]:
        e = Fraction(mon[0], p)
        parts.append("z" if e == 1 else (f"z^{e}" if e.denominator == 1 else f"z^({e})"))
    for n, e in zip(names, mon[1:]):
        if e:
            parts.append(n if e == 1 else f"{n}^{e}")
    return "*".join(parts)


def _render_poly(terms: dict, names, p) -> str:
    out = []
    for mon in sorted(terms, key=lambda m: (sum(m[1:]), m[1:], m[0]), reverse=True):
        c = terms[mon]
        mono = _render_mono(mon, names, p)
        if not mono:
            out.append(scalar_expr(c)[0])
        elif c == 1:
            out.append(mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            out.append(f"{scalar_expr(c)[0]}*{mono}")
    txt = out[0]
    for t in out[1:]:
        txt += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return txt


def _derive_real(T: Tower, F: FracElement) -> tuple[FracElement, FracElement]:
    """Derivative of a Q-rational function, as a complex pair."""
    if not F:
        return F, F
    n, d = F.numer, F.denom
    nr, ni = _derive_poly(T, n)
    if d.is_ground:
        return nr / d, ni / d
    dr, di = _derive_poly(T, d)
    Kn, Kd = T.K.new(n), T.K.new(d)
    d2 = Kd * Kd
    return (nr * Kd - Kn * dr) / d2, (ni * Kd - Kn * di) / d2


def _derive_poly(T: Tower, P) -> tuple[FracElement, FracElement]:
    K = T.K
    re, im = K.zero, K.zero
    gens = K.ring.gens
    degs = P.degrees()
    for k, x in enumerate(gens):
        if not degs[k]:
            continue
        dx = T._derivs[k]
        if dx is None:
            raise TowerError(f"derivative of top jet {T.var_names[k - 1]!r} is not declared")
        part = K.new(P.diff(x))
        if dx[0]:
            re = re + part * dx[0]
        if dx[1]:
            im = im + part * dx[1]
    return re, im


def logderiv_powers(w: TowerElem, m: int) -> list[TowerElem]:
    """r_1..r_m with r_1 = w and r_{j+1} = r_j' + w r_j, i.e. r_j = f^(j)/f when f'/f = w."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = [w]
    for _ in range(m - 1):
        r = out[-1]
        out.append(r.derive() + w * r)
    return out


def derive(e: TowerElem) -> TowerElem:
    return e.derive()


def is_zero(e: TowerElem) -> bool:
    return e.is_zero()


def parse_declarations(text: str, evaluate) -> Tower:
    """Build a tower from ``gen NAME : KIND = ARG;`` lines.

    ``evaluate(expr_text, tower)`` turns an argument expression into an element
    of the tower built so far; it is supplied by the expression front-end.
    """
    T = Tower()
    for raw in text.replace("\n", ";").split(";"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("gen "):
            raise TowerError(f"expected 'gen NAME : KIND = ARG', got {line!r}")
        head, _, arg = line[4:].partition("=")
        name, _, kind = head.partition(":")
        name, kind, arg = name.strip(), kind.strip().lower(), arg.strip()
        if not name or not kind or not arg:
            raise TowerError(f"malformed generator declaration {line!r}")
        if kind in ("exp", "logderiv"):
            T = T.adjoin_exp(name, evaluate(arg, T))
        elif kind == "prim":
            T = T.adjoin_prim(name, evaluate(arg, T))
        elif kind == "root":
            T = T.adjoin_root(name, int(arg))
        elif kind == "free":
            T = T.adjoin_free(name, int(arg))
        else:
            raise TowerError(f"unknown generator kind {kind!r}")
    return T
