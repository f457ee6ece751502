import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from odekit.field import GaussRat, RatFun
from odekit.tower import Tower, TowerError, parse_declarations
from odekit.cli.expr import Scope, eval_scalar


def exp_log_tower():
    T = Tower().adjoin_exp("t", 2 * RatFun.z())  # t = e^{z^2}
    T = T.adjoin_prim("L", RatFun.z().inverse())  # L = log z
    return T


def actual(z):
    return {"z": z, "t": cmath.exp(z * z), "L": cmath.log(z)}


def numeric_derivative(f, z, h=1e-6):
    return (f(z + h) - f(z - h)) / (2 * h)


@st.composite
def tower_elems(draw, T):
    gens = [T.z, T.gen("t"), T.gen("L"), T.one() * GaussRat(0, 1)]
    out = T.zero()
    for _ in range(draw(st.integers(1, 3))):
        term = T.one() * draw(st.integers(-3, 3))
        for _ in range(draw(st.integers(0, 2))):
            term = term * draw(st.sampled_from(gens))
        out = out + term
    den = T.one() + draw(st.sampled_from(gens)) * draw(st.integers(1, 3))
    return out / den


T0 = exp_log_tower()


class TestDerivation:
    def test_generator_relations(self):
        t, L, z = T0.gen("t"), T0.gen("L"), T0.z
        assert t.derive() == 2 * z * t
        assert L.derive() == z.inverse()

    @settings(max_examples=40, deadline=None)
    @given(tower_elems(T0))
    def test_derivative_matches_finite_difference(self, e):
        z0 = complex(0.7, 0.3)
        try:
            want = numeric_derivative(lambda w: e(actual(w)), z0)
            got = e.derive()(actual(z0))
        except ZeroDivisionError:
            return
        assert abs(got - want) <= 1e-4 * max(1.0, abs(want))

    @given(tower_elems(T0), tower_elems(T0))
    @settings(max_examples=30, deadline=None)
    def test_leibniz_and_quotient(self, a, b):
        assert (a * b).derive() == a.derive() * b + a * b.derive()
        if not b.is_zero():
            assert (a / b).derive() == (a.derive() * b - a * b.derive()) / (b * b)

    def test_gaussian_coefficients(self):
        t = T0.gen("t")
        e = GaussRat(0, 1) * t + 1
        assert (e * e.conjugate()) == t * t + 1
        assert e.expr() == "i*t + 1"

    def test_free_jets(self):
        T = Tower().adjoin_free("T", 2)
        x = T.gen("T")
        assert x.derive() == T.gen("T'")
        assert x.derive().derive() == T.gen("T''")
        with pytest.raises(TowerError):
            T.gen("T''").derive()


class TestRootsAndEmbedding:
    def test_root_generator_is_exact(self):
        T = Tower().adjoin_root("r", 2)
        r = T.gen("r")
        assert r * r == T.z
        assert r.derive() == Fraction(1, 2) / r

    def test_ramified_ratfun_converts(self):
        T = Tower().adjoin_root("r", 2)
        assert T.convert(RatFun.z() ** Fraction(3, 2)) == T.gen("r") ** 3
        with pytest.raises(TowerError):
            Tower().convert(RatFun.z() ** Fraction(1, 2))

    def test_elements_lift_into_extensions(self):
        T1 = Tower().adjoin_exp("t", 1)
        T2 = T1.adjoin_prim("L", RatFun.z().inverse())
        a = T1.gen("t") + 1
        b = T2.gen("L")
        assert (a + b).tower is T2
        assert (a * b).derive() == T2.convert(a).derive() * b + T2.convert(a) * b.derive()

    def test_duplicate_names_rejected(self):
        with pytest.raises(TowerError):
            Tower().adjoin_exp("t", 1).adjoin_exp("t", 2)

    def test_polynomial_view(self):
        t = T0.gen("t")
        e = 3 * t * t + T0.z * t - 1
        cs = e.coeffs_in("t")
        assert [c.expr() for c in cs] == ["-1", "z", "3"]
        assert e.degree_in("t") == 2
        with pytest.raises(TowerError):
            (1 / (t + 1)).coeffs_in("t")

    def test_rational_round_trip(self):
        r = (RatFun.z() ** 2 + 1) / (RatFun.z() - 3)
        assert T0.convert(r).to_ratfun() == r
        with pytest.raises(TowerError):
            T0.gen("t").to_ratfun()


class TestDeclarations:
    def test_parse_and_render(self):
        text = "gen H' : exp = z;\ngen H : prim = H';\ngen eH : logderiv = H';\ngen r : root = 2;\ngen T : free = 1;"
        T = parse_declarations(text, lambda arg, tw: eval_scalar(arg, Scope(tw)))
        assert T.gen("H").derive() == T.gen("H'")
        assert T.gen("eH").derive() == T.gen("H'") * T.gen("eH")
        again = parse_declarations(T.declaration(), lambda arg, tw: eval_scalar(arg, Scope(tw)))
        assert again.names() == T.names()

    def test_bad_declarations(self):
        ev = lambda arg, tw: eval_scalar(arg, Scope(tw))
        for bad in ("gen x exp = 1;", "let x : exp = 1;", "gen x : weird = 1;"):
            with pytest.raises(TowerError):
                parse_declarations(bad, ev)
