"""Exact scalars and univariate rational functions over the Gaussian rationals.

A `Poly` is a polynomial in ``s = z^(1/p)`` where ``p`` is the ramification
index carried by the value itself.  A `RatFun` is a reduced quotient of two
such polynomials with a monic denominator.  Values of different ramification
are lifted to the lcm of their indices before any arithmetic, and results are
compressed back to the smallest index that represents them, so equal
functions always have identical representations.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.polyclasses import DMP

Rat = Fraction

Number = Union[int, Fraction, "GaussRat"]

TOL = 1e-12


class NearTieError(ArithmeticError):
    """A ray comparison landed within tolerance of zero without being exactly zero."""


class GaussRat:
    """Immutable element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def coerce(x: Number) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        raise TypeError(f"cannot use {type(x).__name__} as an exact Gaussian rational")

    @classmethod
    def parse(cls, text: str) -> "GaussRat":
        """Read the canonical rendering produced by ``str``."""
        t = text.strip().replace(" ", "")
        if not t.endswith("i"):
            return cls(Fraction(t))
        body = t[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        re_txt, im_txt = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
        if im_txt in ("", "+"):
            im_txt = "1"
        elif im_txt == "-":
            im_txt = "-1"
        return cls(Fraction(re_txt), Fraction(im_txt))

    def _binop(self, other, exact, inexact):
        if isinstance(other, (complex, float)):
            return inexact(complex(self), other)
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return exact(o)

    def __add__(self, other):
        return self._binop(other, lambda o: GaussRat(self.re + o.re, self.im + o.im), lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda o: GaussRat(self.re - o.re, self.im - o.im), lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda o: GaussRat(o.re - self.re, o.im - self.im), lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(
            other,
            lambda o: GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re),
            lambda a, b: a * b,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self._binop(other, lambda o: self * o.inverse(), lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda o: o * self.inverse(), lambda a, b: b / a)

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __pos__(self) -> "GaussRat":
        return self

    def __pow__(self, n: int) -> "GaussRat":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = GaussRat(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def sqrt(self) -> "GaussRat | None":
        """Exact square root with nonnegative real part, or None if not in Q(i)."""
        a, b = self.re, self.im
        norm = _frac_sqrt(a * a + b * b)
        if norm is None:
            return None
        x = _frac_sqrt((a + norm) / 2)
        if x is None:
            return None
        if x == 0:
            y = _frac_sqrt(-a)
            return None if y is None else GaussRat(0, y)
        return GaussRat(x, b / (2 * x))

    def __repr__(self) -> str:
        return f"GaussRat({self})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        im = "" if abs(self.im) == 1 else str(abs(self.im))
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def gr(x: Number) -> GaussRat:
    return GaussRat.coerce(x)


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)


def scalar_expr(c: GaussRat) -> tuple[str, bool]:
    """Expression-syntax rendering of a scalar; flag says whether it is atomic.

    Atomic renderings may be written before ``*`` without parentheses.
    """
    if c.im == 0:
        q = c.re
        if q.denominator == 1:
            return str(q), q >= 0
        return f"({q})" if q > 0 else f"-({-q})", q > 0
    if c.re == 0:
        q = c.im
        if abs(q) == 1:
            return ("i" if q > 0 else "-i"), q > 0
        body = str(abs(q)) if q.denominator == 1 else f"({abs(q)})"
        return (f"{body}*i" if q > 0 else f"-{body}*i"), False
    im_abs = abs(c.im)
    im_txt = "i" if im_abs == 1 else (f"{im_abs}*i" if im_abs.denominator == 1 else f"({im_abs})*i")
    return f"({c.re}{'-' if c.im < 0 else '+'}{im_txt})", True


# --------------------------------------------------------------------------- Poly


def _strip(cs: Iterable[GaussRat]) -> tuple[GaussRat, ...]:
    out = list(cs)
    while out and not out[-1]:
        out.pop()
    return tuple(out)


class Poly:
    """Polynomial in ``s = z^(1/ram)`` with GaussRat coefficients, ascending."""

    __slots__ = ("coeffs", "ram")

    def __init__(self, coeffs: Sequence[Number] = (), ram: int = 1) -> None:
        if ram < 1:
            raise ValueError("ramification index must be >= 1")
        object.__setattr__(self, "coeffs", _strip(gr(c) for c in coeffs))
        object.__setattr__(self, "ram", ram)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple[GaussRat, ...], ram: int) -> "Poly":
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", _strip(coeffs))
        object.__setattr__(p, "ram", ram)
        return p

    @classmethod
    def monomial(cls, c: Number, e: int, ram: int = 1) -> "Poly":
        return cls._raw((ZERO,) * e + (gr(c),), ram)

    @property
    def degree(self) -> int:
        """Degree in ``s``; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> GaussRat:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, j: int) -> GaussRat:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def lift(self, ram: int) -> "Poly":
        """Same function written in ``z^(1/ram)``; ``ram`` must be a multiple of ``self.ram``."""
        if ram == self.ram:
            return self
        if ram % self.ram:
            raise ValueError("target ramification must be a multiple of the current one")
        f = ram // self.ram
        out = [ZERO] * (f * self.degree + 1) if self.coeffs else []
        for j, c in enumerate(self.coeffs):
            out[f * j] = c
        return Poly._raw(tuple(out), ram)

    def stretch(self, n: int) -> "Poly":
        """Substitute ``s -> s^n`` keeping the ramification index."""
        return Poly._raw(self.lift(self.ram * n).coeffs, self.ram)

    def exponents(self) -> list[int]:
        return [j for j, c in enumerate(self.coeffs) if c]

    def __add__(self, other: "Poly") -> "Poly":
        a, b = _common(self, other)
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly._raw(tuple(a.coeff(j) + b.coeff(j) for j in range(n)), a.ram)

    def __sub__(self, other: "Poly") -> "Poly":
        a, b = _common(self, other)
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly._raw(tuple(a.coeff(j) - b.coeff(j) for j in range(n)), a.ram)

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs), self.ram)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = gr(other)
            return Poly._raw(tuple(c * x for x in self.coeffs), self.ram)
        a, b = _common(self, other)
        if not a.coeffs or not b.coeffs:
            return Poly._raw((), a.ram)
        if min(len(a.coeffs), len(b.coeffs)) >= _DMP_MUL_MIN:
            da, db = _to_dmps(a, b)
            return _from_dmp(da.mul(db), a.ram)
        out = [ZERO] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(tuple(out), a.ram)

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        a, b = _common(self, other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(a.coeffs)
        db = b.degree
        inv = b.lc().inverse()
        q = [ZERO] * max(len(r) - db, 0)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] * inv
            if not c:
                continue
            q[i - db] = c
            for j, y in enumerate(b.coeffs):
                r[i - db + j] = r[i - db + j] - c * y
        return Poly._raw(tuple(q), a.ram), Poly._raw(tuple(r[:db]), a.ram)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.lc().inverse()

    def gcd(self, other: "Poly") -> "Poly":
        a, b = _common(self, other)
        da, db = _to_dmps(a, b)
        return _from_dmp(da.gcd(db), a.ram).monic()

    def cancel(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """``(self/g, other/g)`` for ``g = gcd(self, other)``; both divisions exact."""
        a, b = _common(self, other)
        da, db = _to_dmps(a, b)
        g = da.gcd(db)
        return _from_dmp(da.exquo(g), a.ram), _from_dmp(db.exquo(g), a.ram)

    def diff_s(self) -> "Poly":
        """Derivative with respect to ``s`` (not z)."""
        return Poly._raw(tuple(c * j for j, c in enumerate(self.coeffs) if j), self.ram)

    def __call__(self, x: complex) -> complex:
        """Numerical value at ``s = x``."""
        out = 0j
        for c in reversed(self.coeffs):
            out = out * x + complex(c)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = _common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        p = _compress(self.coeffs, self.ram)
        return hash((p.coeffs, p.ram))

    def __repr__(self) -> str:
        return f"Poly({self.expr()!r})"

    def __str__(self) -> str:
        return self.expr()

    def expr(self) -> str:
        """Rendering in the expression syntax, highest power first."""
        if not self.coeffs:
            return "0"
        terms = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c:
                terms.append(_term(c, Fraction(j, self.ram)))
        return _join(terms)


def _term(c: GaussRat, e: Fraction) -> str:
    if e == 0:
        txt, _ = scalar_expr(c)
        return txt
    mono = "z" if e == 1 else (f"z^{e}" if e.denominator == 1 and e > 0 else f"z^({e})")
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    txt, _ = scalar_expr(c)
    return f"{txt}*{mono}"


def _join(terms: list[str]) -> str:
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


_DMP_MUL_MIN = 5


# Large gcds go through sympy's dense polynomials: plain Euclid over Fraction
# coefficients is an order of magnitude slower once degrees reach the 40s.
# Real inputs stay over QQ, where the flint backend applies.
def _to_dmps(a: Poly, b: Poly) -> tuple[DMP, DMP]:
    real = all(c.is_real() for c in a.coeffs) and all(c.is_real() for c in b.coeffs)
    return _to_dmp(a, real), _to_dmp(b, real)


def _to_dmp(p: Poly, real: bool = False) -> DMP:
    if real:
        return DMP([QQ(c.re.numerator, c.re.denominator) for c in reversed(p.coeffs)], QQ)
    return DMP([QQ_I(QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator))
                for c in reversed(p.coeffs)], QQ_I)


def _rat(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _from_dmp(d: DMP, ram: int) -> Poly:
    if d.dom == QQ:
        return Poly._raw(tuple(GaussRat(_rat(c)) for c in reversed(d.to_list())), ram)
    return Poly._raw(tuple(GaussRat(_rat(c.x), _rat(c.y)) for c in reversed(d.to_list())), ram)


def _common(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if a.ram == b.ram:
        return a, b
    m = a.ram * b.ram // gcd(a.ram, b.ram)
    return a.lift(m), b.lift(m)


def _compress(coeffs: tuple[GaussRat, ...], ram: int, *others: tuple[GaussRat, ...]) -> Poly:
    g = ram
    for cs in (coeffs, *others):
        for j, c in enumerate(cs):
            if c:
                g = gcd(g, j)
    if g == 1:
        return Poly._raw(coeffs, ram)
    return Poly._raw(coeffs[::g], ram // g)


# --------------------------------------------------------------------------- RatFun


class RatFun:
    """Reduced quotient ``num/den`` of polynomials in ``z^(1/ram)``, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Number = 0, den: Poly | Number = 1) -> None:
        if not isinstance(num, Poly):
            num = Poly((num,))
        if not isinstance(den, Poly):
            den = Poly((den,), num.ram)
        num, den = _common(num, den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly._raw((), 1), Poly._raw((ONE,), 1)
        else:
            if den.degree > 0:
                num, den = num.cancel(den)
            inv = den.lc().inverse()
            num, den = num * inv, den * inv
            num, den = _shrink(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    @classmethod
    def z(cls, ram: int = 1) -> "RatFun":
        """The variable z, or ``z^(1/ram)`` when ``ram > 1``."""
        return cls(Poly((0, 1), ram))

    @classmethod
    def monomial(cls, c: Number, e: Fraction | int) -> "RatFun":
        e = Fraction(e)
        ram = e.denominator
        j = e.numerator
        if j >= 0:
            return cls(Poly.monomial(c, j, ram))
        return cls(Poly((c,), ram), Poly.monomial(1, -j, ram))

    @staticmethod
    def coerce(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Poly):
            return RatFun(x)
        return RatFun(gr(x))

    @property
    def ram(self) -> int:
        return self.num.ram

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def const_value(self) -> GaussRat:
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def lift(self, ram: int) -> tuple[Poly, Poly]:
        return self.num.lift(ram), self.den.lift(ram)

    def __add__(self, other):
        try:
            o = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun._make(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = gr(other)
            return RatFun._make(self.num * c, self.den) if c else RatFun()
        try:
            o = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            n = n.numerator
        if not isinstance(n, int):
            if isinstance(n, Fraction) and self._is_z():
                return RatFun.monomial(1, n)
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        return RatFun(_ppow(base.num, abs(n)), _ppow(base.den, abs(n)))

    def _is_z(self) -> bool:
        return self.den.degree == 0 and self.num.ram == 1 and self.num.coeffs == (ZERO, ONE)

    def derive(self) -> "RatFun":
        """d/dz through the chain rule ``ds/dz = s^(1-p)/p``."""
        n, d = self.num, self.den
        top = n.diff_s() * d - n * d.diff_s()
        p = self.ram
        # d/dz = (1/p) s^(1-p) d/ds
        return RatFun(top * Fraction(1, p), d * d * Poly.monomial(1, p - 1, p))

    def subs_power(self, n: int) -> "RatFun":
        """Substitute ``z -> z^n``."""
        return RatFun(self.num.stretch(n), self.den.stretch(n))

    def deg_infty(self) -> Fraction | float:
        return deg_infty(self)

    def lc_infty(self) -> GaussRat:
        """Leading coefficient at infinity."""
        return self.num.lc() / self.den.lc()

    def __call__(self, x: complex) -> complex:
        s = complex(x) ** (1.0 / self.ram)
        return self.num(s) / self.den(s)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GaussRat)):
            other = RatFun.coerce(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num.ram == other.num.ram and self.num.coeffs == other.num.coeffs and self.den.coeffs == other.den.coeffs

    def __hash__(self) -> int:
        if self.is_const():
            return hash(self.num.coeff(0))
        return hash((self.num.coeffs, self.den.coeffs, self.ram))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"RatFun({self.expr()!r})"

    def __str__(self) -> str:
        return self.expr()

    def expr(self) -> str:
        num = self.num.expr()
        if self.den.degree == 0:
            return num
        if len(self.den.exponents()) == 1:
            # den = s^e: render as Laurent monomials
            e = self.den.degree
            terms = [_term(c, Fraction(j - e, self.ram)) for j, c in reversed(list(enumerate(self.num.coeffs))) if c]
            return _join(terms)
        n_atomic = len(self.num.exponents()) == 1 and not num.startswith("-")
        return f"{num if n_atomic else '(' + num + ')'}/({self.den.expr()})"

    @classmethod
    def _make(cls, num: Poly, den: Poly) -> "RatFun":
        r = object.__new__(cls)
        object.__setattr__(r, "num", num)
        object.__setattr__(r, "den", den)
        return r


def _ppow(p: Poly, n: int) -> Poly:
    out = Poly._raw((ONE,), p.ram)
    while n:
        if n & 1:
            out = out * p
        p = p * p
        n >>= 1
    return out


def _shrink(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    n = _compress(num.coeffs, num.ram, den.coeffs)
    if n.ram == num.ram:
        return num, den
    g = num.ram // n.ram
    return n, Poly._raw(den.coeffs[::g], n.ram)


def ratfun_arith(op: str, a: RatFun, b: RatFun | None = None) -> RatFun:
    """Dispatch by name; mixed ramification is lifted to the lcm."""
    if op == "derive":
        return a.derive()
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def deg_infty(a: RatFun) -> Fraction | float:
    """Exact degree at infinity; ``-inf`` for the zero function."""
    if a.is_zero():
        return -math.inf
    return Fraction(a.num.degree - a.den.degree, a.ram)


# --------------------------------------------------------------------------- ray order


class Order(enum.Enum):
    PREC = "PREC"
    SIM = "SIM"
    SUCC = "SUCC"


def _quarter_turns(theta: float) -> int | None:
    q = theta / (math.pi / 2)
    r = round(q)
    return r if abs(q - r) < 1e-12 else None


def _re_rotated(c: GaussRat, j: int, p: int, theta: float, quarters: int | None) -> Fraction | float:
    """Re(c * e^{i j theta / p}); exact when the angle is a multiple of pi/2."""
    if quarters is not None and (j * quarters) % p == 0:
        n = (j * quarters // p) % 4
        return (c.re, -c.im, -c.re, c.im)[n]
    a = j * theta / p
    return float(c.re) * math.cos(a) - float(c.im) * math.sin(a)


def ray_compare(pq: Poly, qq: Poly, theta: float) -> Order:
    """Order of ``Re pq(r e^{i theta})`` against ``Re qq(r e^{i theta})`` as r -> oo."""
    diff = pq - qq
    quarters = _quarter_turns(theta)
    for j in range(diff.degree, -1, -1):
        c = diff.coeffs[j]
        if not c:
            continue
        v = _re_rotated(c, j, diff.ram, theta, quarters)
        if isinstance(v, Fraction):
            if v:
                return Order.SUCC if v > 0 else Order.PREC
            continue
        if abs(v) <= TOL:
            raise NearTieError(f"coefficient of r^{Fraction(j, diff.ram)} is within {TOL} of zero; perturb theta")
        return Order.SUCC if v > 0 else Order.PREC
    return Order.SIM
