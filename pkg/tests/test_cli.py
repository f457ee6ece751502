import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from odekit.cli import ExprError, Scope, evaluate, main, parse, render
from odekit.cli.expr import Bin, Name, Neg, Num, eval_operator
from odekit.field import RatFun
from odekit.linop import LinOp

GOLDEN = Path(__file__).parent / "data" / "parse_golden.tsv"


def golden():
    for line in GOLDEN.read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            src, want = line.split("\t")
            yield src, want


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParser:
    @pytest.mark.parametrize("src,want", list(golden()))
    def test_golden_render_and_round_trip(self, src, want):
        ast = parse(src)
        assert render(ast) == want
        assert parse(render(ast)) == ast

    def test_shapes(self):
        ast = parse("D^2 - z")
        assert isinstance(ast, Bin) and ast.op == "-" and isinstance(ast.left, Bin) and ast.left.op == "^"
        assert eval_operator("D^2 - z", Scope()).order == 2
        comp = parse("(D + delta) @ (D + 2*delta)")
        assert isinstance(comp, Bin) and comp.op == "@"

    def test_precedence(self):
        # ^ > unary minus > (*, /, @) > (+, -)
        assert render(parse("-z^2")) == "(-(z ^ 2))"
        assert render(parse("a*b+c@d")) == "((a * b) + (c @ d))"
        assert render(parse("2^3^2")) == "(2 ^ (3 ^ 2))"

    @pytest.mark.parametrize("src,col", [("D^2 +", 6), ("(z", 3), ("z )", 3), ("2 * * z", 5), ("z $ 1", 3)])
    def test_syntax_error_positions(self, src, col):
        with pytest.raises(ExprError) as e:
            parse(src)
        assert e.value.line == 1 and e.value.col == col and e.value.kind == "syntax error"
        assert str(e.value).startswith(f"syntax error at line 1, column {col}")

    def test_multiline_position(self):
        with pytest.raises(ExprError) as e:
            parse("z +\n  * 2")
        assert (e.value.line, e.value.col) == (2, 3)

    def test_decimals_rejected(self):
        with pytest.raises(ExprError) as e:
            parse("0.5*z")
        assert "decimal" in str(e.value) and e.value.col == 1

    @given(st.recursive(
        st.one_of(st.integers(0, 50).map(lambda v: Num(None, v)), st.sampled_from(["z", "D", "i", "a'"]).map(
            lambda n: Name(None, n))),
        lambda inner: st.one_of(inner.map(lambda a: Neg(None, a)),
                                st.tuples(st.sampled_from("+-*/@^"), inner, inner).map(
                                    lambda t: Bin(None, t[0], t[1], t[2]))),
        max_leaves=12))
    def test_render_parse_round_trip(self, ast):
        assert parse(render(ast)) == ast


class TestEvaluation:
    def test_names(self):
        with pytest.raises(ExprError) as e:
            evaluate(parse("z + q"), Scope())
        assert e.value.kind == "name error" and e.value.col == 5

    def test_type_errors(self):
        with pytest.raises(ExprError) as e:
            eval_operator("z + 1", Scope())
        assert e.value.kind == "type error"
        for bad in ("z @ D", "1 / D", "D^(1/2)", "z^z", "(z+1)^(1/2)"):
            with pytest.raises(ExprError):
                evaluate(parse(bad), Scope())

    def test_values(self):
        s = Scope()
        z = RatFun.z()
        assert evaluate(parse("z^(3/2)"), s) == RatFun.monomial(1, "3/2")
        assert evaluate(parse("(D - z) @ (D + z)"), s) == LinOp([1 - z * z, 0, 1])
        assert evaluate(parse("D*z"), s) == LinOp([1, z])
        assert evaluate(parse("z*D"), s) == LinOp([0, z])
        assert evaluate(parse("(D^2 + 2*D)/2"), s) == LinOp([0, 1, RatFun(1) / 2])


class TestCommands:
    def test_exp_parts_airy(self, capsys):
        code, out, _ = run(capsys, "exp-parts", "D^2 - z")
        assert code == 0
        assert out.strip() == '{"parts":[{"poly":"(2/3)*z^(3/2)"},{"poly":"-(2/3)*z^(3/2)"}],"ram":2}'

    def test_exp_parts_ray(self, capsys):
        code, out, _ = run(capsys, "--theta", "0", "exp-parts", "(D + 2) @ (D + 1) @ (D - 1)")
        body = json.loads(out)
        assert code == 0 and body["ray"]["ascending"] == ["-2*z", "-z", "z"] and body["ray"]["case"] == "A"

    def test_rdivide(self, capsys):
        assert run(capsys, "rdivide", "D^2", "D")[1].strip() == '{"q":"D","r":"0"}'

    def test_algebra_verbs(self, capsys):
        assert json.loads(run(capsys, "compose", "D", "z*D")[1]) == {"op": "z*D^2 + D"}
        assert json.loads(run(capsys, "gcrd", "D^2 - 1", "D^2 + D - 2")[1]) == {"gcrd": "D - 1"}
        assert json.loads(run(capsys, "gauge", "D^2 + 4*D + 4")[1]) == {"op": "D^2", "u": "-2"}
        assert json.loads(run(capsys, "changevar", "D^2 + z^2*D + z")[1])["op"] == \
            "D^2 + (2*z^5 - z^(-1))*D + 4*z^4"

    def test_wronskian(self, capsys):
        body = json.loads(run(capsys, "wronskian", "D^2 - 1")[1])
        assert body["exp"] == "0" and body["series"][0] == "-2"
        assert json.loads(run(capsys, "wronskian", "1", "z")[1]) == {"wronskian": "1"}
        assert run(capsys, "wronskian", "D", "z")[0] == 2

    def test_formal_solve(self, capsys):
        body = json.loads(run(capsys, "--trunc", "4", "formal-solve", "D^2 - z")[1])
        assert body["ram"] == 2
        assert [s["gamma"] for s in body["solutions"]] == ["-1/4", "-1/4"]
        assert body["solutions"][0]["series"] == ["1", "0", "0", "5/48"]

    def test_tower_file(self, capsys, tmp_path):
        f = tmp_path / "t.tower"
        f.write_text("gen E : exp = 1  # E' = E\n", encoding="utf-8")
        code, out, _ = run(capsys, "--tower", str(f), "wronskian", "E", "E^2")
        assert code == 0 and json.loads(out) == {"wronskian": "E^3"}
        code, _, err = run(capsys, "wronskian", "E", "E^2")
        assert code == 2 and "name error" in err

    def test_frank(self, capsys):
        code, out, _ = run(capsys, "frank", "gen", "--k", "3", "--c", "0,0", "--C", "1,0")
        body = json.loads(out)
        assert code == 0 and body["k"] == 3 and body["D"] == ["1", "0"] and len(body["relations"]) == 3
        top = body["relations"][2]
        assert top == {"mu": 2, "phi": "-D", "g": "D^2"}
        code, out, _ = run(capsys, "frank-check", "--k", "3", "--c", "0,0", "--C", "1,0", "--pair", "G=z,Phi=1")
        assert code == 1 and json.loads(out)["status"] == "FAIL"

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "verify", "example2", "--P", "z")
        body = json.loads(out)
        assert code == 0 and body["status"] == "EXACT-PASS" and body["reports"][0]["scenario"] == "example2[P=z]"
        code, out, _ = run(capsys, "--format", "text", "verify", "example1", "--k", "3", "--m", "2")
        assert code == 0 and "value c = -24" in out

    def test_report_bytes_are_stable(self, capsys, tmp_path):
        a = run(capsys, "--seed", "7", "report", "--scenario", "example2")[1]
        b = run(capsys, "--seed", "7", "report", "--scenario", "example2", "--out", str(tmp_path / "r.json"))[1]
        assert a == b and json.loads(a)["seed"] == 7
        assert (tmp_path / "r.json").read_text(encoding="utf-8") == a

    def test_usage_errors(self, capsys):
        assert run(capsys, "nope")[0] == 2
        code, _, err = run(capsys, "exp-parts", "D^2 +")
        assert code == 2 and "syntax error at line 1, column 6" in err
        assert run(capsys, "exp-parts", "0.5*D")[0] == 2
        assert run(capsys, "verify", "example9")[0] == 2

    def test_console_entry_point(self):
        p = subprocess.run([sys.executable, "-m", "odekit", "rdivide", "D^2", "D"], capture_output=True, text=True)
        assert p.returncode == 0 and p.stdout.strip() == '{"q":"D","r":"0"}'
