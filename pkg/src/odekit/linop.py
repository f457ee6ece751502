"""Linear differential operators ``sum a_j D^j`` over a differential field.

Coefficients are duck-typed: anything with ring operators, ``derive()``,
``is_zero()`` and ``inverse()`` works, which covers `RatFun`, `TowerElem`
and the truncated series of the formal module.  Plain scalars are promoted
to `RatFun`.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .field import GaussRat, RatFun
from .tower import TowerElem, logderiv_powers

Coeff = object  # RatFun | TowerElem


def _is_field_elem(x) -> bool:
    return hasattr(x, "derive") and hasattr(x, "is_zero")


def _promote(cs: Sequence, like=None) -> list:
    ref = like
    for c in cs:
        if _is_field_elem(c) and not isinstance(c, RatFun):
            ref = c
            break
        if ref is None and isinstance(c, RatFun):
            ref = c
    if ref is None:
        ref = RatFun()
    zero = ref * 0
    return [c if _is_field_elem(c) and type(c) is type(zero) else zero + c for c in cs], zero


class LinOp:
    """Immutable operator; ``coeffs[j]`` multiplies ``D^j``."""

    __slots__ = ("coeffs", "_zero")

    def __init__(self, coeffs: Sequence = (), like=None) -> None:
        cs, zero = _promote(list(coeffs), like)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple = tuple(cs)
        self._zero = zero

    @classmethod
    def D(cls, like=None) -> "LinOp":
        z = _promote([0], like)[1]
        return cls([z, z + 1])

    @classmethod
    def monomial(cls, c, j: int, like=None) -> "LinOp":
        cs, z = _promote([c], like)
        return cls([z] * j + cs)

    @property
    def order(self) -> int:
        """Order; -1 for the zero operator."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self._zero

    def coeff(self, j: int):
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else self._zero

    def zero_elem(self):
        return self._zero

    def one_elem(self):
        return self._zero + 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and (self.lead - 1).is_zero()

    def monic(self) -> "LinOp":
        inv = self.lead.inverse()
        return LinOp([inv * c for c in self.coeffs], self._zero)

    def _other(self, other) -> "LinOp":
        if isinstance(other, LinOp):
            return other
        return LinOp([other], self._zero)

    def __add__(self, other) -> "LinOp":
        o = self._other(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return LinOp([self.coeff(j) + o.coeff(j) for j in range(n)], self._zero)

    __radd__ = __add__

    def __neg__(self) -> "LinOp":
        return LinOp([-c for c in self.coeffs], self._zero)

    def __sub__(self, other) -> "LinOp":
        return self + (-self._other(other))

    def __rsub__(self, other) -> "LinOp":
        return self._other(other) + (-self)

    def __mul__(self, other) -> "LinOp":
        """Composition; a coefficient on the right acts as multiplication operator."""
        return compose(self, self._other(other))

    def __rmul__(self, other) -> "LinOp":
        # coefficient on the left: plain left multiplication
        return LinOp([other * c for c in self.coeffs], self._zero)

    def __matmul__(self, other) -> "LinOp":
        return compose(self, self._other(other))

    def __rmatmul__(self, other) -> "LinOp":
        return compose(self._other(other), self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinOp):
            other = self._other(other)
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all((a - b).is_zero() for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(len(self.coeffs))

    def derive_left(self) -> "LinOp":
        """The operator ``D o self``."""
        k = len(self.coeffs)
        out = [self._zero] * (k + 1)
        for j, c in enumerate(self.coeffs):
            out[j] = out[j] + c.derive()
            out[j + 1] = out[j + 1] + c
        return LinOp(out, self._zero)

    def apply(self, y):
        """``L[y] = sum a_j y^(j)``."""
        out = self._zero
        d = y
        for j, c in enumerate(self.coeffs):
            if j:
                d = d.derive()
            if not c.is_zero():
                out = out + c * d
        return out

    def apply_logderiv(self, w):
        return apply_logderiv(self, w)

    def shift(self, u) -> "LinOp":
        """``L(D + u)``: satisfies ``L[X y] = X * L(D + X'/X)[y]`` when u = X'/X."""
        X = LinOp([u, 1], self._zero)
        out = LinOp([], self._zero)
        for c in reversed(self.coeffs):
            out = compose(out, X) + LinOp([c], self._zero)
        return out

    def map_coeffs(self, f) -> "LinOp":
        return LinOp([f(c) for c in self.coeffs])

    def expr(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for j in range(self.order, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            terms.append(_op_term(c, j))
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __str__(self) -> str:
        return self.expr()

    def __repr__(self) -> str:
        return f"LinOp({self.expr()!r})"


def _atomic(txt: str) -> bool:
    if txt.startswith("(") and txt.endswith(")"):
        depth = 0
        for k, ch in enumerate(txt):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and k < len(txt) - 1:
                return False
        return True
    return all(ch.isalnum() or ch in "_'" for ch in txt)


def _op_term(c, j: int) -> str:
    txt = c.expr()
    if j == 0:
        return txt
    mono = "D" if j == 1 else f"D^{j}"
    if (c - 1).is_zero():
        return mono
    neg = (-c).expr()
    if (c + 1).is_zero():
        return "-" + mono
    if txt.startswith("-") and _atomic(neg):
        return f"-{neg}*{mono}"
    return f"{txt if _atomic(txt) else '(' + txt + ')'}*{mono}"


def apply_logderiv(L: LinOp, w):
    """``L[f]/f = sum a_j r_j`` where ``r_j = f^(j)/f`` for f'/f = w."""
    out = L.coeff(0)
    if L.order >= 1:
        rs = logderiv_powers(w, L.order)
        for j in range(1, L.order + 1):
            c = L.coeffs[j]
            if not c.is_zero():
                out = out + c * rs[j - 1]
    return out


def compose(A: LinOp, B: LinOp) -> LinOp:
    """``A o B = sum a_j (D^j o B)``, building ``D^j o B`` by repeated left derivation."""
    if A.is_zero() or B.is_zero():
        return LinOp([], B._zero)
    out = LinOp([], B._zero)
    Dj = B
    for j, c in enumerate(A.coeffs):
        if j:
            Dj = Dj.derive_left()
        if not c.is_zero():
            out = out + LinOp([c * b for b in Dj.coeffs], B._zero)
    return out


def right_divide(N: LinOp, P: LinOp) -> tuple[LinOp, LinOp]:
    """``N = Q o P + R`` with ``ord R < ord P``."""
    if P.order < 1:
        raise ValueError("right division needs a divisor of order >= 1")
    try:
        inv = P.lead.inverse()
    except ZeroDivisionError:
        raise ValueError("leading coefficient of divisor is not invertible") from None
    shifts = [P]  # shifts[d] = D^d o P, built once
    qs: list = []
    R = N
    while R.order >= P.order:
        d = R.order - P.order
        while len(shifts) <= d:
            shifts.append(shifts[-1].derive_left())
        c = R.lead * inv
        qs.append((d, c))
        R = R - LinOp([c * b for b in shifts[d].coeffs], N._zero)
    Q = LinOp([], N._zero)
    if qs:
        top = qs[0][0]
        cs = [N._zero] * (top + 1)
        for d, c in qs:
            cs[d] = cs[d] + c
        Q = LinOp(cs, N._zero)
    return Q, R


def gcrd(ops: Sequence[LinOp]) -> LinOp:
    """Monic greatest common right divisor by the Euclidean algorithm."""
    if not ops:
        raise ValueError("gcrd of an empty list")
    nonzero = [op for op in ops if not op.is_zero()]
    if not nonzero:
        return ops[0]
    g = nonzero[0]
    for op in nonzero[1:]:
        a, b = (g, op) if g.order >= op.order else (op, g)
        while not b.is_zero():
            if b.order == 0:
                a = LinOp([b.one_elem()])
                break
            b = _primitive(b)
            a, b = b, right_divide(a, b)[1]
        g = a
    return g.monic()


def _primitive(L: LinOp) -> LinOp:
    """Left multiple of ``L`` by a scalar with polynomial, content-free coefficients.

    Same right divisors as ``L``; keeps coefficient growth in the Euclidean
    remainder sequence down.  Non-rational coefficients are made monic instead.
    """
    if not all(isinstance(c, RatFun) for c in L.coeffs):
        return L.monic()
    den = L.coeffs[-1].den
    for c in L.coeffs:
        if not c.is_zero():
            den = den * c.den.divmod(den.gcd(c.den))[0]
    nums = [(c * RatFun(den)).num for c in L.coeffs]
    g = None
    for n in nums:
        if not n.is_zero():
            g = n if g is None else g.gcd(n)
    return LinOp([RatFun(n.divmod(g)[0]) for n in nums], L._zero)


def gauge_normalize(L: LinOp) -> tuple[LinOp, object]:
    """Remove the ``D^(k-1)`` term: returns ``(L(D + u), u)`` with ``u = -a_{k-1}/k``."""
    k = L.order
    if k < 2:
        raise ValueError("gauge normalization needs order >= 2")
    if not L.is_monic():
        raise ValueError("gauge normalization needs a monic operator")
    u = L.coeff(k - 1) * Fraction(-1, k)
    return L.shift(u), u


def change_variables(L: LinOp, n: int) -> LinOp:
    """Operator acting on ``f(z^n)``: ``out[f(z^n)] = (n z^(n-1))^k (L f)(z^n)``."""
    if n < 2:
        raise ValueError("change of variables needs n >= 2")
    cs = []
    for c in L.coeffs:
        if isinstance(c, TowerElem):
            c = c.to_ratfun()
        if not isinstance(c, RatFun):
            raise TypeError("change of variables needs rational-function coefficients")
        cs.append(c)
    k = L.order
    z = RatFun.z()
    w = n * z ** (n - 1)
    winv = w.inverse()
    # c[m][p]: f^(m)(z^n) = sum_p c[m][p] * (d/dz)^p f(z^n)
    c_tab = [[RatFun(1)]]
    for m in range(k):
        prev = c_tab[-1]
        row = []
        for p in range(m + 2):
            acc = RatFun()
            if p <= m:
                acc = acc + prev[p].derive()
            if p >= 1:
                acc = acc + prev[p - 1]
            row.append(acc * winv)
        c_tab.append(row)
    out = [RatFun()] * (k + 1)
    for j, a in enumerate(cs):
        if a.is_zero():
            continue
        aj = a.subs_power(n)
        for p, cp in enumerate(c_tab[j]):
            out[p] = out[p] + aj * cp
    wk = w ** k
    return LinOp([wk * c for c in out])


def _det_minors(M: list[list]) -> object:
    n = len(M)
    if n == 1:
        return M[0][0]
    out = None
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det_minors(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out if out is not None else M[0][0] * 0


def _det_bareiss(M: list[list]) -> object:
    A = [row[:] for row in M]
    n = len(A)
    sign = 1
    prev = A[0][0] * 0 + 1
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not A[r][k].is_zero()), None)
            if swap is None:
                return A[0][0] * 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def determinant(M: list[list]) -> object:
    """Exact determinant: minors up to size 5, fraction-free elimination beyond."""
    return _det_minors(M) if len(M) <= 5 else _det_bareiss(M)


def wronskian(elems: Sequence) -> object:
    if not elems:
        raise ValueError("wronskian of an empty list")
    rows = [list(elems)]
    for _ in range(len(elems) - 1):
        rows.append([e.derive() for e in rows[-1]])
    return determinant(rows)


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def leibniz_det(M: list[list]) -> object:
    """Determinant by the permutation expansion; used as an independent check."""
    n = len(M)
    out = M[0][0] * 0
    for perm in permutations(range(n)):
        term = M[0][0] * 0 + permutation_sign(perm)
        for i, j in enumerate(perm):
            term = term * M[i][j]
        out = out + term
    return out

