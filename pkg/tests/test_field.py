from fractions import Fraction
import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from odekit.field import (GaussRat, I, NearTieError, ONE, Order, Poly, RatFun, ZERO, gr, ray_compare,
                          scalar_expr)

from conftest import Z, fracs, gauss, gauss_polys, ratfuns, real_polys, sym_equal, to_sympy


class TestGaussRat:
    def test_rendering_round_trip(self):
        for g in (GaussRat(Fraction(1, 2), Fraction(-3, 4)), I, -I, GaussRat(3), GaussRat(0, 2), ZERO):
            assert GaussRat.parse(str(g)) == g

    def test_scalar_expr_forms(self):
        assert scalar_expr(GaussRat(Fraction(2, 3)))[0] == "(2/3)"
        assert scalar_expr(GaussRat(Fraction(-2, 3)))[0] == "-(2/3)"
        assert scalar_expr(I)[0] == "i"
        assert scalar_expr(GaussRat(0, -2))[0] == "-2*i"

    def test_fraction_interop(self):
        assert GaussRat(Fraction(1, 2)) == Fraction(1, 2)
        assert hash(GaussRat(Fraction(1, 2))) == hash(Fraction(1, 2))
        assert I * I == -1

    def test_mixing_with_complex_goes_inexact(self):
        v = GaussRat(1, 1) * 2j
        assert isinstance(v, complex) and v == complex(-2, 2)

    @given(gauss, gauss, gauss)
    def test_field_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        if a:
            assert a * a.inverse() == ONE
        assert complex(a * b) == pytest.approx(complex(a) * complex(b))

    def test_sqrt_exact_or_none(self):
        assert GaussRat(-4).sqrt() ** 2 == -4
        assert GaussRat(0, 2).sqrt() ** 2 == GaussRat(0, 2)
        assert GaussRat(2).sqrt() is None

    def test_immutable(self):
        with pytest.raises(AttributeError):
            I.re = 3

    def test_coerce_rejects_float(self):
        with pytest.raises(TypeError):
            gr(0.5)


class TestPoly:
    def test_degree_and_zero(self):
        assert Poly().degree == -1
        assert Poly([0, 0, 3]).degree == 2

    @given(real_polys, real_polys.filter(lambda p: not p.is_zero()))
    def test_divmod_reconstructs(self, a, b):
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.degree < b.degree

    @given(real_polys, real_polys, real_polys)
    def test_gcd_divides_and_is_monic(self, a, b, c):
        g = (a * c).gcd(b * c)
        if g.is_zero():
            return
        assert g.lc() == 1
        assert (a * c).divmod(g)[1].is_zero() and (b * c).divmod(g)[1].is_zero()
        if not c.is_zero():
            assert g.divmod(c.monic())[1].is_zero()

    def test_lift_and_equality_across_ramification(self):
        p = Poly([1, 2])  # 1 + 2z
        assert p.lift(2) == p
        assert p.lift(2).coeffs == Poly([1, 0, 2], 2).coeffs

    def test_expr(self):
        assert Poly([0, 0, 0, Fraction(2, 3)], 2).expr() == "(2/3)*z^(3/2)"


class TestRatFun:
    @settings(max_examples=60, deadline=None)
    @given(ratfuns(), ratfuns(), st.sampled_from(["+", "-", "*", "/"]))
    def test_arithmetic_matches_sympy(self, a, b, op):
        if op == "/" and b.is_zero():
            return
        got = {"+": a + b, "-": a - b, "*": a * b, "/": a / b if not b.is_zero() else None}[op]
        want = {"+": to_sympy(a) + to_sympy(b), "-": to_sympy(a) - to_sympy(b),
                "*": to_sympy(a) * to_sympy(b), "/": to_sympy(a) / to_sympy(b)}[op]
        assert sym_equal(to_sympy(got), want)

    @settings(max_examples=60, deadline=None)
    @given(ratfuns(ram=2))
    def test_derivative_matches_sympy(self, r):
        assert sym_equal(to_sympy(r.derive()), sympy.diff(to_sympy(r), Z))

    @given(ratfuns(), ratfuns())
    def test_leibniz(self, a, b):
        assert (a * b).derive() == a.derive() * b + a * b.derive()

    def test_canonical_form(self):
        z = RatFun.z()
        r = (z * z - 1) / (2 * z - 2)
        assert r == (z + 1) / 2 and r.den.lc() == 1
        half = RatFun.z(2)
        assert (half * half).ram == 1  # z^(1/2)^2 compresses back to z

    def test_fractional_power_of_z(self):
        r = RatFun.z() ** Fraction(3, 2)
        assert r.ram == 2 and r.derive() == Fraction(3, 2) * RatFun.z() ** Fraction(1, 2)

    def test_deg_infty(self):
        z = RatFun.z()
        assert ((z ** 3 + 1) / (z - 4)).deg_infty() == 2
        assert RatFun().deg_infty() == -math.inf

    def test_subs_power(self):
        z = RatFun.z()
        assert ((z + 1) / z).subs_power(3) == (z ** 3 + 1) / z ** 3

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            RatFun(1) / RatFun(0)


class TestRayOrder:
    def test_exact_axes(self):
        z = Poly([0, 1])
        assert ray_compare(z, Poly(), 0.0) is Order.SUCC
        assert ray_compare(z, Poly(), math.pi) is Order.PREC
        assert ray_compare(Poly([5, 1]), Poly([0, 1]), math.pi / 2) is Order.SUCC
        assert ray_compare(z, z, 1.0) is Order.SIM

    def test_near_tie_raises(self):
        # Re((1+i) e^{i pi/4}) vanishes, but only up to rounding
        with pytest.raises(NearTieError):
            ray_compare(Poly([0, GaussRat(1, 1)]), Poly(), math.pi / 4)

    def test_axis_snaps_to_exact(self):
        assert ray_compare(Poly([0, 1]), Poly([1]), math.pi / 2 + 1e-14) is Order.PREC

    @given(st.floats(0.01, 6.2), real_polys, real_polys)
    def test_matches_numeric_growth(self, theta, p, q):
        try:
            o = ray_compare(p, q, theta)
        except NearTieError:
            return
        d = p - q
        if d.degree <= 0:
            return
        r = 1e6
        v = complex(d(r * complex(math.cos(theta), math.sin(theta)))).real
        if abs(v) > 1e-3 * r ** d.degree:
            assert (o is Order.SUCC) == (v > 0)
