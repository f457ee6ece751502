"""Shared strategies and independent oracles."""
from __future__ import annotations

import sys
from fractions import Fraction

import sympy
from hypothesis import strategies as st
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from odekit.field import GaussRat, Poly, RatFun

Z = sympy.Symbol("z", positive=True)
_TRANSFORMS = standard_transformations + (convert_xor,)


def to_sympy(x) -> sympy.Expr:
    """Read a rendering back through sympy's parser: independent of our own arithmetic."""
    return parse_expr(x.expr() if hasattr(x, "expr") else str(x), {"z": Z, "i": sympy.I},
                      transformations=_TRANSFORMS)


def sym_equal(a: sympy.Expr, b: sympy.Expr) -> bool:
    return sympy.simplify(a - b) == 0


small = st.integers(-5, 5)
fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
gauss = st.builds(GaussRat, fracs, fracs)
real_polys = st.lists(small, min_size=1, max_size=4).map(lambda cs: Poly(cs))
gauss_polys = st.lists(gauss, min_size=1, max_size=3).map(lambda cs: Poly(cs))


@st.composite
def ratfuns(draw, ram: int = 1, nonzero: bool = False):
    num = draw(st.lists(small, min_size=1, max_size=4))
    den = draw(st.lists(small, min_size=1, max_size=3).filter(lambda c: any(c)))
    r = RatFun(Poly(num, ram), Poly(den, ram))
    if nonzero and r.is_zero():
        r = r + 1
    return r


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
