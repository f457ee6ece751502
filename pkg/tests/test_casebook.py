import json
from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from odekit.casebook import (RunConfig, Report, Status, reports_json, run_all, solve_example2, verify_example1,
                             verify_example2, verify_example3, verify_exponential_elimination, verify_theorem_reps)
from odekit.field import Poly, RatFun

from conftest import Z, to_sympy

z = RatFun.z()


def statuses(rep):
    return {c.label: c.status for c in rep.checks}


def all_pass(rep):
    return rep.checks and all(c.status is Status.PASS for c in rep.checks)


def vanishes(expr, points=(sympy.Rational(3, 2), sympy.Rational(13, 7))) -> bool:
    return all(abs(complex(sympy.N(expr.subs(Z, p), 40))) < 1e-25 for p in points)


# --------------------------------------------------------------------------- Example I


def example1_oracle(delta, k: int, m: int):
    """M_k applied with sympy, H an undefined function and H'' = delta H'."""
    H = sympy.Function("H")(Z)
    d = to_sympy(delta)
    g = [None, sympy.Integer(1)]  # H^(j) = g_j H'
    for _ in range(k + 1):
        g.append(sympy.expand(sympy.diff(g[-1], Z) + g[-1] * d))

    def reduce(e):
        for j in range(k + 2, 1, -1):
            e = e.subs(sympy.Derivative(H, (Z, j)), g[j] * sympy.Derivative(H, Z))
        return e

    def M(y):
        for j in range(k, 0, -1):
            y = sympy.diff(y, Z) + j * d * y
        return y

    Hp = sympy.Derivative(H, Z)
    phi = reduce(M(Hp ** -k * sympy.exp(H))) / sympy.exp(H)
    psi = reduce(M(Hp ** -k * H ** -m)) * H ** (m + k)
    return sympy.simplify(phi), sympy.simplify(psi)


class TestExample1:
    @pytest.mark.parametrize("delta,k,m", [(z, 1, 1), (z, 2, 3), (z, 3, 2), (z * z - 1, 2, 1)])
    def test_against_sympy(self, delta, k, m):
        phi, psi = example1_oracle(delta, k, m)
        rep = verify_example1(delta, k, m)
        assert all_pass(rep)
        assert phi == 1
        assert rep.values["c"] == str(psi)

    def test_documented_case(self):
        rep = verify_example1(z, 3, 2)
        assert rep.values["c"] == "-24" == str((-1) ** 3 * 2 * 3 * 4)

    @settings(max_examples=10, deadline=None)
    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=3).filter(any), st.integers(1, 4), st.integers(1, 3),
           st.data())
    def test_random(self, cs, k, m, data):
        delta = RatFun(Poly(cs))
        pc = data.draw(st.lists(st.integers(-3, 3), min_size=1, max_size=k))
        rep = verify_example1(delta, k, m, pc)
        assert all_pass(rep)
        assert Fraction(rep.values["c"]) == (-1) ** k * prod(range(m, m + k))

    def test_preconditions(self):
        with pytest.raises(ValueError):
            verify_example1(RatFun(0), 2, 1)
        with pytest.raises(ValueError):
            verify_example1(z, 2, 1, [1, 2, 3])


# --------------------------------------------------------------------------- Example II


def example2_cramer(P):
    """b1, b2 and B2 from sympy: F/f (1 - t)^3 collected in t = e^z, then Cramer on B1 = B0 = 0."""
    p = to_sympy(P)
    t, b1, b2 = sympy.symbols("t b1 b2")
    y = p / (1 - sympy.exp(Z))
    yp = sympy.diff(y, Z)
    f2 = yp + y ** 2
    f3 = sympy.diff(yp, Z) + 3 * y * yp + y ** 3
    Ff = (f3 + b2 * f2 + b1 * y).subs(sympy.exp(Z), t)
    poly = sympy.Poly(sympy.cancel(sympy.together(Ff * (1 - t) ** 3)), t)
    B0, B1, B2 = (poly.coeff_monomial(t ** j) for j in range(3))
    assert poly.degree() <= 2
    A = sympy.Matrix([[B1.coeff(b1), B1.coeff(b2)], [B0.coeff(b1), B0.coeff(b2)]])
    rhs = sympy.Matrix([-B1.subs({b1: 0, b2: 0}), -B0.subs({b1: 0, b2: 0})])
    det = A.det()
    x1 = sympy.Matrix([[rhs[0], A[0, 1]], [rhs[1], A[1, 1]]]).det() / det
    x2 = sympy.Matrix([[A[0, 0], rhs[0]], [A[1, 0], rhs[1]]]).det() / det
    return sympy.cancel(x1), sympy.cancel(x2), sympy.cancel(B2.subs({b1: x1, b2: x2}))


class TestExample2:
    def test_documented_case(self):
        rep = verify_example2(z)
        assert all_pass(rep)
        b1, b2, B2 = example2_cramer(z)
        sol = solve_example2(z)
        assert sympy.cancel(to_sympy(sol.b1) - b1) == 0
        assert sympy.cancel(to_sympy(sol.b2) - b2) == 0
        assert sympy.cancel(to_sympy(sol.B[2]) - B2) == 0
        assert sol.B[0].is_zero() and sol.B[1].is_zero()

    @settings(max_examples=8, deadline=None)
    @given(st.lists(st.integers(-4, 4), min_size=2, max_size=5).filter(lambda c: any(c[1:])))
    def test_random_against_cramer(self, cs):
        P = RatFun(Poly(cs))
        sol = solve_example2(P)
        b1, b2, B2 = example2_cramer(P)
        assert sympy.cancel(to_sympy(sol.b1) - b1) == 0
        assert sympy.cancel(to_sympy(sol.b2) - b2) == 0
        assert sympy.cancel(to_sympy(sol.B[2]) - B2) == 0 and not sol.B[2].is_zero()

    def test_variants(self):
        for target, keep in (("B1", 1), ("B0", 0)):
            sol = solve_example2(z * z + 1, target)
            assert not sol.B[keep].is_zero()
            assert all(sol.B[j].is_zero() for j in range(3) if j != keep)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            verify_example2(RatFun(0))
        with pytest.raises(ValueError):
            solve_example2(RatFun(-1))  # (Q1 + Q0) P = P + P^2 vanishes
        with pytest.raises(ValueError):
            solve_example2(z, "B3")


# --------------------------------------------------------------------------- Example III


def example3_oracle(m: int, p1, rep) -> bool:
    """F/f from the reported e_j equals (P-P^2)((P-2)-(P-2)^2)(Y')^4/h^4, checked numerically."""
    Y = Z ** sympy.Rational(m, 2)
    P = sum(c * Y ** j for j, c in enumerate(p1))
    h = sympy.cosh(Y)
    # f'/f = P h'/h; f^(j)/f follows from the log-derivative alone
    w = P * sympy.diff(h, Z) / h
    derivs = [sympy.Integer(1), w]
    for _ in range(3):
        derivs.append(sympy.diff(derivs[-1], Z) + w * derivs[-1])
    e = [to_sympy(rep.values[f"e{j}"]) for j in range(4)]
    lhs = derivs[4] + sum(e[j] * derivs[j] for j in range(4))
    Yp = sympy.diff(Y, Z)
    rhs = (P - P ** 2) * ((P - 2) - (P - 2) ** 2) * Yp ** 4 / h ** 4
    return vanishes(lhs - rhs)


class TestExample3:
    @pytest.mark.parametrize("m,p1", [(2, [0, 0, 1]), (1, [1, 0, 2]), (3, [-1, 0, 1]), (2, [2, 0, -3, 0, 1])])
    def test_against_sympy(self, m, p1):
        rep = verify_example3(m, p1)
        assert all_pass(rep)
        assert example3_oracle(m, p1, rep)

    def test_first_stage_quotient_sympy(self):
        Y = Z
        P = Y ** 2
        h = sympy.cosh(Y)
        w = P * sympy.diff(h, Z) / h
        b1 = -sympy.diff(P, Z) / P - sympy.diff(Y, Z, 2) / sympy.diff(Y, Z)
        b0 = -(P * sympy.diff(Y, Z)) ** 2
        Rf = sympy.diff(w, Z) + w ** 2 + b1 * w + b0
        assert vanishes(Rf - (P - P ** 2) * sympy.diff(Y, Z) ** 2 / h ** 2)

    def test_degenerate(self):
        rep = verify_example3(2, [1])
        st_ = statuses(rep)
        assert st_["R/f = (P - P^2)(Y')^2/h^2"] is Status.PASS
        assert Status.SKIPPED in st_.values() and Status.FAIL not in st_.values()
        assert rep.values["R/f"] == "0"


# --------------------------------------------------------------------------- representations


class TestRepresentations:
    @pytest.mark.parametrize("k,m", [(2, 1), (3, 2), (4, 1)])
    def test_representations(self, k, m):
        rep = verify_theorem_reps(k, z, m)
        assert all_pass(rep)
        assert rep.values["c"] == str(m * (m + 1))

    @pytest.mark.parametrize("k", [3, 4])
    def test_exponential_elimination(self, k):
        assert all_pass(verify_exponential_elimination(k))


# --------------------------------------------------------------------------- driver


class TestDriver:
    def test_default_run_passes_and_is_deterministic(self):
        a = reports_json(run_all(RunConfig(seed=5)), 5)
        b = reports_json(run_all(RunConfig(seed=5)), 5)
        assert a == b
        body = json.loads(a)
        assert body["status"] == "EXACT-PASS" and body["seed"] == 5
        names = [r["scenario"] for r in body["reports"]]
        assert all(r["checks"] for r in body["reports"])
        assert "elapsed_ms" not in body["reports"][0]
        groups = [n.split("[")[0] for n in names]
        assert groups == sorted(groups)

    def test_filter(self):
        reps = run_all(RunConfig(seed=1, scenarios=("example2",)))
        assert reps and all(r.scenario.startswith("example2[") for r in reps)
        with pytest.raises(ValueError):
            run_all(RunConfig(scenarios=("nope",)))

    def test_seed_changes_inputs(self):
        a = [r.scenario for r in run_all(RunConfig(seed=1, scenarios=("example2",)))]
        b = [r.scenario for r in run_all(RunConfig(seed=2, scenarios=("example2",)))]
        assert a != b

    def test_failure_is_reported_with_residual(self):
        rep = Report("synthetic")
        rep.identity("x = 0", "anchor", z + 1)
        assert not rep.ok and rep.checks[0].residual == "z + 1"
        body = json.loads(reports_json([rep], 0, timings=True))
        assert body["status"] == "FAIL"
        assert body["reports"][0]["checks"][0] == {"label": "x = 0", "anchor": "anchor", "status": "FAIL",
                                                   "residual": "z + 1"}
        assert "elapsed_ms" in body["reports"][0]
