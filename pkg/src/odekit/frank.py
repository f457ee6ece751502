"""Operator relations from the auxiliary-function construction for a pair of operators.

Given ``k`` and coefficient lists ``c_0..c_{k-2}`` and ``C_0..C_{k-2}`` the module
generates the ``k`` relations ``S_mu[Phi] = T_mu[G]`` linking the auxiliary
functions, derives their low-order consequences, eliminates ``Phi`` and
provides the substitution rules for logarithmic derivatives used with them.

Conventions: ``C_k = 1``, ``c_{k-1} = C_{k-1} = 0`` and every index below 0
gives 0.  ``D_mu = C_mu - c_mu`` is always recomputed from the lists.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Sequence

from .linop import LinOp, compose, gcrd
from .tower import Tower, TowerElem


@dataclass(frozen=True)
class FrankSystem:
    k: int
    c: tuple
    C: tuple

    def __post_init__(self) -> None:
        if self.k < 3:
            raise ValueError("k >= 3 required")
        if len(self.c) != self.k - 1 or len(self.C) != self.k - 1:
            raise ValueError("need k-1 coefficients c_0..c_{k-2} and C_0..C_{k-2}")

    @property
    def zero(self):
        ref = next((x for x in (*self.c, *self.C) if hasattr(x, "derive")), None)
        return LinOp([0], ref).zero_elem()

    def c_(self, mu: int):
        if 0 <= mu <= self.k - 2:
            return self.zero + self.c[mu]
        return self.zero

    def C_(self, mu: int):
        if mu == self.k:
            return self.zero + 1
        if 0 <= mu <= self.k - 2:
            return self.zero + self.C[mu]
        return self.zero

    def D_(self, mu: int):
        return self.C_(mu) - self.c_(mu)

    def op(self, cs: Sequence) -> LinOp:
        return LinOp(list(cs), self.zero)


@dataclass(frozen=True)
class Relation:
    """``left[Phi] = right[G]``."""

    left: LinOp
    right: LinOp
    mu: int | None = None

    def residual(self, G, Phi):
        return self.left.apply(Phi) - self.right.apply(G)

    def scale(self, a) -> "Relation":
        return Relation(a * self.left, a * self.right, self.mu)


def m_k_mu(k: int, Cs: Sequence, mu: int, like=None) -> LinOp:
    """``sum_{m=mu}^{k} binom(m, mu) C_m D^(m-mu)`` with ``C_k = 1, C_{k-1} = 0``."""
    if not -1 <= mu <= k:
        raise ValueError("mu out of range")
    ref = like if like is not None else next((x for x in Cs if hasattr(x, "derive")), None)
    zero = LinOp([0], ref).zero_elem()
    if mu == -1:
        return LinOp([], zero)

    def C(m: int):
        if m == k:
            return zero + 1
        if m == k - 1:
            return zero
        return zero + Cs[m]

    return LinOp([comb(m, mu) * C(m) for m in range(mu, k + 1)], zero)


def _M(sys: FrankSystem, mu: int) -> LinOp:
    return m_k_mu(sys.k, [sys.C_(m) for m in range(sys.k - 1)], mu, sys.zero)


def relation_ops(sys: FrankSystem, mu: int) -> Relation:
    """Raw relation ``S_mu[Phi] = T_mu[G]`` for ``0 <= mu <= k-1``."""
    k = sys.k
    if not 0 <= mu <= k - 1:
        raise ValueError("mu out of range")
    c_mu = sys.c_(mu)
    S = _M(sys, mu) - c_mu
    T = -_M(sys, mu - 1) + c_mu * _M(sys, k - 1) + (c_mu.derive() + sys.c_(mu - 1))
    return Relation(S, T, mu)


def frank_equation(sys: FrankSystem, mu: int) -> Relation:
    """Relation ``mu``; the top one is scaled by ``-1/k`` so its left side is ``-D``."""
    rel = relation_ops(sys, mu)
    if mu == sys.k - 1:
        return rel.scale(Fraction(-1, sys.k))
    return rel


def u_operator(sys: FrankSystem) -> LinOp:
    """``U`` with ``Phi' = U[G]`` (from the top relation)."""
    k = sys.k
    return sys.op([sys.D_(k - 2) * Fraction(-1, k), 0, Fraction(-(k - 1), 2)])


def eliminate_derivatives(rel: Relation, U: LinOp) -> Relation:
    """Replace ``Phi^(j)``, j >= 1, using ``Phi' = U[G]``: result has order-0 left side."""
    S = rel.left
    right = rel.right
    for j in range(1, S.order + 1):
        s = S.coeffs[j]
        if s.is_zero():
            continue
        chain = U
        for _ in range(j - 1):
            chain = chain.derive_left()
        right = right - s * chain
    return Relation(LinOp([S.coeff(0)], S.zero_elem()), right, rel.mu)


@dataclass(frozen=True)
class ReducedRelations:
    """Third-order, fourth-order and second-order consequences, plus their free coefficients."""

    third: Relation
    fourth: Relation
    second: Relation
    d1: object
    d2: object
    d3: object
    d4: object


def reduced_relations(sys: FrankSystem) -> ReducedRelations:
    """Eliminate ``Phi'`` from the two relations below the top one, then combine them."""
    k = sys.k
    U = u_operator(sys)
    third = eliminate_derivatives(relation_ops(sys, k - 2), U)
    fourth = eliminate_derivatives(relation_ops(sys, k - 3), U).scale(Fraction(2, k - 2))
    a = third.left.coeff(0)
    # (a Phi)' = a' Phi + a U[G]  =>  a' Phi = (D o right - a U)[G]
    third_d = Relation(sys.op([a.derive()]), third.right.derive_left() - a * U)
    second = Relation(fourth.left - third_d.left, fourth.right - third_d.right)
    return ReducedRelations(
        third, fourth, second,
        fourth.right.coeff(1), fourth.right.coeff(0),
        second.right.coeff(1), second.right.coeff(0),
    )


class FrankCase(enum.Enum):
    IDENTICAL = "case-1"  # all D_mu vanish: the two operators coincide
    REDUCIBLE = "case-2"


@dataclass(frozen=True)
class Elimination:
    case: FrankCase
    nu: int | None = None
    tstar: LinOp | None = None
    reduced: tuple[LinOp, ...] = ()
    gcrd: LinOp | None = None


def eliminate_phi(sys: FrankSystem) -> Elimination:
    """Express ``Phi = T*[G]`` and collect the operators that must annihilate ``G``."""
    k = sys.k
    nonzero = [mu for mu in range(k - 1) if not sys.D_(mu).is_zero()]
    if not nonzero:
        return Elimination(FrankCase.IDENTICAL)
    nu = max(nonzero)
    U = u_operator(sys)
    rel = eliminate_derivatives(relation_ops(sys, nu), U)
    tstar = rel.left.coeff(0).inverse() * rel.right
    reduced = [U - tstar.derive_left()]
    for mu in range(k - 1):
        r = relation_ops(sys, mu)
        reduced.append(compose(r.left, tstar) - r.right)
    nz = [op for op in reduced if not op.is_zero()]
    return Elimination(FrankCase.REDUCIBLE, nu, tstar, tuple(reduced), gcrd(nz) if nz else None)


def check_pair(sys: FrankSystem, G, Phi) -> list:
    """Residual of every relation ``mu = 0..k-1`` for a concrete pair."""
    return [relation_ops(sys, mu).residual(G, Phi) for mu in range(sys.k)]


# --------------------------------------------------------------------------- polynomial helpers


def _padd(a: list, b: list, zero) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]


def _pmul(a: list, b: list, zero) -> list:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _pscale(a: list, c) -> list:
    return [c * x for x in a]


def _pderive(a: list, var_derivative: list, zero) -> list:
    """Derivative of ``sum a_i X^i`` when ``X'`` is the polynomial ``var_derivative`` in X."""
    out = [x.derive() for x in a]
    for i in range(1, len(a)):
        term = _pmul(_pscale(var_derivative, a[i] * i), [zero] * (i - 1) + [zero + 1], zero)
        out = _padd(out, term, zero)
    return out


def _ptrim(a: list) -> list:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def logderiv_substitution(d0, d1, nu1, nu0, k: int, L: LinOp | None = None) -> list:
    """Coefficients ``b_j`` with ``L[p]/p = sum b_j Q^j`` where ``Q = q'/q``.

    Uses ``p'/p = d0 Q + d1`` and ``Q' = -Q^2 - nu1 Q - nu0`` (q solves
    ``q'' + nu1 q' + nu0 q = 0``).  ``L`` defaults to ``D^k``.
    """
    zero = d0 * 0
    riccati = [-nu0 + zero, -nu1 + zero, zero - 1]
    r1 = [d1 + zero, d0 + zero]
    rs = [[zero + 1], r1]
    order = k if L is None else L.order
    for _ in range(order - 1):
        r = rs[-1]
        rs.append(_padd(_pderive(r, riccati, zero), _pmul(r1, r, zero), zero))
    if L is None:
        out = rs[k]
    else:
        out = []
        for j, a in enumerate(L.coeffs):
            out = _padd(out, _pscale(rs[j], a), zero)
    out = list(out) + [zero] * (max(order, k) + 1 - len(out))
    return out


def falling_factorial(x, k: int):
    return prod((x - j for j in range(k)), start=x * 0 + 1)


def second_order_residual(d0, d1, nu1, nu0, e1, e0) -> tuple:
    """``(E2, E1, E0)`` with ``E2 p''/p + E1 p'/p + E0 = (p'/p)^2 + e1 p'/p + e0``."""
    zero = d0 * 0
    if (d0 + zero).is_zero() or (d0 - 1).is_zero():
        raise ValueError("d0 must avoid 0 and 1")
    A = (d0 + zero).inverse()
    B = -d1 * A
    den = A - A * A
    E2 = A / den
    E1 = (A.derive() + 2 * A * B + nu1 * A) / den + e1
    E0 = (B.derive() + B * B + nu1 * B + nu0) / den + e0
    return E2, E1, E0


def lem3_second_coeff(B2, B1, B0, E1):
    """``E0`` making ``D^3 + B2 D^2 + B1 D + B0`` right-divisible by ``D^2 + E1 D + E0``."""
    return -E1.derive() + E1 * E1 - E1 * B2 + B1


def t_tower(jets: int, consts: Sequence[str] = ()) -> Tower:
    """Tower with a free ``T`` (jets up to ``jets``), symbolic constants and ``E = e^{-T}``."""
    Tw = Tower()
    for name in consts:
        Tw = Tw.adjoin_const(name)
    Tw = Tw.adjoin_free("T", jets)
    return Tw.adjoin_exp("E", -Tw.gen("T'"))


def _q_of(q_coeffs: Sequence, T: TowerElem) -> TowerElem:
    out = T * 0
    for c in reversed(list(q_coeffs)):
        out = out * T + c
    return out


def _q_prime_of(q_coeffs: Sequence, T: TowerElem) -> TowerElem:
    return _q_of([c * i for i, c in enumerate(q_coeffs)][1:], T) if len(q_coeffs) > 1 else T * 0


def rj_mu_recursion(q_coeffs: Sequence, T: TowerElem, jmax: int) -> dict[tuple[int, int], TowerElem]:
    """``R_{j,mu}``: coefficients of ``Y1^mu`` in ``S_j`` with ``Y1' = T'(1 - Y1)``.

    ``S_1 = Q(T) T'`` and ``S_{j+1} = Y1 S_j' - j Y1' S_j + S_1 S_j``; ``q_coeffs``
    are the (constant) coefficients of Q, ascending.
    """
    zero = T * 0
    Tp = T.derive()
    y_der = [Tp, -Tp]
    S1 = [_q_of(q_coeffs, T) * Tp]
    S = S1
    out: dict[tuple[int, int], TowerElem] = {}
    for j in range(1, jmax + 1):
        S = _ptrim(S)
        for mu, r in enumerate(S):
            out[(j, mu)] = r
        if j == jmax:
            break
        dS = _pderive(S, y_der, zero)
        nxt = _padd([zero] + dS, _pscale(_pmul(y_der, S, zero), -j), zero)
        S = _padd(nxt, _pmul(S1, S, zero), zero)
    return out


def t3_formula(q_coeffs: Sequence, T: TowerElem, k: int, d2: Fraction) -> TowerElem:
    d2 = Fraction(d2)
    if (k * d2).denominator != 1 or not 0 <= d2 <= Fraction(1, 2):
        raise ValueError("need k*d2 integral and 0 <= d2 <= 1/2")
    Tp = T.derive()
    Tpp = Tp.derive()
    Q = _q_of(q_coeffs, T)
    Qp = _q_prime_of(q_coeffs, T)
    acc = T * 0
    for j in range(k - 1):
        acc = acc + Fraction(j - k + 1) / (Q - j)
    out = acc * Qp * Tp * Fraction(1, k)
    out = out - (d2 * (Q - (k - 1)) + Fraction(k - 1, 2)) * Tp
    return out - Fraction(k - 1, 2) * Tpp / Tp


def pole_weight(k: int, m: int) -> tuple[Fraction, Fraction]:
    """``(g')^{-k} = (-1)^k m(m+1)...(m+k-1)`` and ``chi(m) = m...(m+k-1)/(m+(k-1)/2)^k``."""
    if k < 2 or m < 1:
        raise ValueError("need k >= 2 and m >= 1")
    rising = prod(range(m, m + k))
    return Fraction((-1) ** k * rising), Fraction(rising) / (m + Fraction(k - 1, 2)) ** k
