"""Expression grammar, canonical printing, command dispatch, exit codes,
and the JSON report document."""

import io
import json

import jsonschema
import pytest

from pdfol.cli import main
from pdfol.errors import InputError
from pdfol.parser import parse_expr, print_form
from pdfol.report import canonical_bytes
from pdfol.rings import rational

SADDLE_EXPR = "d(y^2+x^4) + -5*x^2*(1+x)*dy"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("FF_ORDER", raising=False)
    monkeypatch.delenv("FF_PRECISION", raising=False)


# ------------------------------------------------------------------ parser


def test_parse_differential_expansion():
    e = parse_expr("d(y^2+x^4)")
    assert dict(e.form.a.coeffs) == {(3, 0): rational(4)}
    assert dict(e.form.b.coeffs) == {(0, 1): rational(2)}


def test_parse_saddle_expression():
    e = parse_expr(SADDLE_EXPR)
    assert dict(e.form.b.coeffs) == {(0, 1): rational(2),
                                     (2, 0): rational(-5),
                                     (3, 0): rational(-5)}


def test_syntax_error_carries_offset():
    with pytest.raises(InputError, match="offset 6"):
        parse_expr("dx + (")


def test_unknown_symbol():
    with pytest.raises(InputError, match="unknown symbol 'w'"):
        parse_expr("w*dx")
    # the parameter symbol exists only once declared
    with pytest.raises(InputError, match="unknown symbol 'b'"):
        parse_expr("b*x*dx")
    assert parse_expr("b*x*dx", mode="param:b").form.a.coeffs


def test_zero_form_rejected():
    with pytest.raises(InputError, match="zero form"):
        parse_expr("x*dy - x*dy")
    with pytest.raises(InputError, match="function part"):
        parse_expr("x + dx")


def test_form_products_rejected():
    with pytest.raises(InputError, match="two 1-forms"):
        parse_expr("dx*dy")
    with pytest.raises(InputError, match="exponentiate"):
        parse_expr("dx^2")
    with pytest.raises(InputError, match="of a 1-form"):
        parse_expr("d(x*dx)")


def test_decimal_literal_needs_float_mode():
    with pytest.raises(InputError, match="float mode"):
        parse_expr("0.5*dx")
    assert parse_expr("0.5*dx", mode="float").form.a.coeffs


def test_unary_sign_chains():
    assert parse_expr("--x*dx") == parse_expr("x*dx")
    assert parse_expr("+-+x*dx") == parse_expr("0 - x*dx")


CORPUS = [
    "dx",
    "dy",
    "x*dx",
    "y*dy",
    "2*dx + 3*dy",
    "-dx",
    "x^2*dx + y^2*dy",
    "1/2*x*dx - 2/3*y*dy",
    "d(y^2+x^4)",
    "d(y^2+x^6)",
    "d(x*y)",
    "d((1+x)*(1+y))",
    "d(y^2+x^4) + -5*x^2*(1+x)*dy",
    "d(y^2+x^4) + 4*x^2*dy",
    "d(y^2+x^6) + 4*x^3*dy",
    "d(y^2+x^4) + -5*x^2*(1+x+x^2)*dy",
    "2*y*dx + x*dy",
    "(2*y + x^3)*dx + (x - y^2)*dy",
    "x*y*dx - x^2*dy",
    "(1+x)^3*dx",
    "d(y^2) + x^5*dy",
    "d(x^4) + y*dy",
    "-1/3*x^2*y*dx + 7*x*y^2*dy",
    "d(y^2+x^8) + 11/2*x^4*dy",
    "x^3*dx - -2*y*dy",
    "(x + y)*(x - y)*dx + dy",
    "d(y^2 + x^4 + x^5)",
    "5*x^2*y^3*dx + 1/7*x^3*y^2*dy",
    "d((y + x^2)^2) + x^3*dy",
    "x^10*dx + y^10*dy",
]


def test_round_trip_corpus():
    assert len(CORPUS) >= 30
    for text in CORPUS:
        first = parse_expr(text)
        printed = print_form(first.form)
        second = parse_expr(printed)
        assert second == first, text
        assert print_form(second.form) == printed, text


def test_round_trip_param_and_float():
    for mode in ("param:b", "float"):
        text = ("d(y^2+x^4) + -5*x^2*(1+b*x)*dy" if mode.startswith("param")
                else "d(y^2+x^4) + -5.0*x^2*(1+x)*dy")
        first = parse_expr(text, mode=mode)
        printed = print_form(first.form)
        assert parse_expr(printed, mode=mode) == first


def test_mode_validation():
    with pytest.raises(InputError, match="unknown mode"):
        parse_expr("dx", mode="symbolic")
    with pytest.raises(InputError, match="reserved"):
        parse_expr("dx", mode="param:dy")
    with pytest.raises(InputError, match="identifier"):
        parse_expr("dx", mode="param:2b")


# --------------------------------------------------------------- commands


def test_cli_gpd_detects_resonance():
    code, out, _ = run(["gpd", "--p", "2", "--alpha", "-5/1"])
    assert code == 0
    assert "m: 6" in out and "z1: 2" in out and "z2: 1/2" in out
    assert "alpha_check: True" in out


def test_cli_gpd_negative_answer():
    code, out, _ = run(["gpd", "--p", "2", "--alpha", "-13/3"])
    assert code == 0
    assert "resonant: False" in out


def test_cli_gpd_irrational_exact_exits_3():
    code, out, err = run(["gpd", "--p", "2", "--m", "2"])
    assert code == 3
    assert "alpha irrational in exact mode" in err
    assert "-4.24264" in err
    code, out, _ = run(["gpd", "--p", "2", "--m", "2", "--mode", "float"])
    assert code == 0
    assert "-4.24264" in out


def test_cli_classify_pipeline():
    code, out, _ = run(["classify", "--expr", SADDLE_EXPR,
                        "--order", "24", "--mode", "exact"])
    assert code == 0
    assert "case: saddle" in out
    assert "subcase: resonant_pair" in out
    assert "verdict: GeneralizedPD" in out
    assert "epsilon: 5934060/1" in out


def test_cli_normal_form():
    code, out, _ = run(["normal-form", "--expr", SADDLE_EXPR])
    assert code == 0
    assert "m: 6" in out and "order: 18" in out
    assert "epsilon: 5934060" in out
    assert "residual_valuation: inf" in out


def test_cli_blowup_chain_and_chart():
    code, out, _ = run(["blowup", "--expr", SADDLE_EXPR, "--times", "2"])
    assert code == 0
    assert "labels: D1 D2" in out
    assert "self-intersections: -2 -1" in out
    code, out, _ = run(["blowup", "--expr", SADDLE_EXPR, "--times", "1",
                        "--chart", "2"])
    assert code == 0
    assert "chart 2" in out


def test_cli_cs_index():
    code, out, _ = run(["cs-index", "--expr", "2*y*dx + x*dy"])
    assert code == 0
    assert "cs_index: -1/2" in out


def test_cli_holonomy_formal():
    code, out, _ = run(["holonomy", "--formal", "--m", "2", "--order", "3"])
    assert code == 0
    assert "multiplier:" in out and "series:" in out


def test_cli_holonomy_numeric():
    code, out, _ = run(["holonomy", "--numeric", "--radius", "1.0",
                        "--samples", "0.05", "--mode", "float",
                        "--expr", "x*dy - 2*y*dx - x^2*dx"])
    assert code == 0
    assert "0.05 ->" in out and "-0.0499" in out


def test_cli_exit_codes_cover_error_classes():
    code, _, err = run(["classify", "--expr", "dx + ("])
    assert code == 2 and "error[input]" in err
    code, _, err = run(["classify", "--expr", "x*dx + y*dy"])
    assert code == 3 and "error[math]" in err
    code, _, err = run(["normal-form", "--expr", SADDLE_EXPR, "--order", "4"])
    assert code == 4 and "error[precision]" in err


def test_cli_requires_expression():
    code, _, err = run(["classify"])
    assert code == 2
    code, _, err = run(["classify", "--expr", "dx", "--input", "f"])
    assert code == 2 and "mutually exclusive" in err


def test_env_defaults(monkeypatch):
    cusp = "d(y^2+x^3) + 4*x^2*dy"
    monkeypatch.setenv("FF_ORDER", "30")
    code, out, _ = run(["report", "--json", "--expr", cusp])
    assert code == 0
    assert json.loads(out)["canonical"]["input"]["order"] == 30
    code, out, _ = run(["report", "--json", "--expr", cusp,
                        "--order", "26"])
    assert json.loads(out)["canonical"]["input"]["order"] == 26
    monkeypatch.setenv("FF_ORDER", "nope")
    code, _, err = run(["classify", "--expr", cusp])
    assert code == 2 and "FF_ORDER" in err
    monkeypatch.delenv("FF_ORDER")
    monkeypatch.setenv("FF_PRECISION", "52")
    code, _, err = run(["classify", "--expr", cusp, "--mode", "float"])
    assert code == 3  # below the mantissa floor


def test_input_file_and_directory(tmp_path):
    one = tmp_path / "one.txt"
    one.write_text(SADDLE_EXPR + "\n", encoding="utf-8")
    code, out, _ = run(["classify", "--input", str(one)])
    assert code == 0 and "verdict: GeneralizedPD" in out
    (tmp_path / "two.txt").write_text("d(y^2+x^4) + 4*x^2*dy\n",
                                      encoding="utf-8")
    code, out, _ = run(["classify", "--input", str(tmp_path)])
    assert code == 0
    assert "== one.txt ==" in out and "== two.txt ==" in out
    code, out, _ = run(["report", "--json", "--input", str(tmp_path)])
    assert code == 0
    docs = json.loads(out)
    assert isinstance(docs, list) and len(docs) == 2


# ----------------------------------------------------------------- report


REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "canonical", "timing"],
    "properties": {
        "schema_version": {"const": "1"},
        "timing": {
            "type": "object",
            "required": ["seconds"],
            "properties": {"seconds": {"type": "number"}},
        },
        "canonical": {
            "type": "object",
            "required": ["tool", "input", "classification", "reduction",
                         "singular_points", "normal_form", "holonomy"],
            "properties": {
                "tool": {
                    "type": "object",
                    "required": ["name", "version"],
                },
                "input": {
                    "type": "object",
                    "required": ["source", "canonical", "mode", "order"],
                },
                "classification": {
                    "type": "object",
                    "required": ["case", "verdict"],
                },
                "reduction": {"type": ["object", "null"]},
                "singular_points": {"type": ["array", "null"]},
                "normal_form": {"type": ["object", "null"]},
                "holonomy": {"type": ["object", "null"]},
            },
        },
    },
}

RATIONAL = r"^-?\d+/\d+$"


def test_report_json_schema_and_content():
    code, out, _ = run(["report", "--json", "--expr", SADDLE_EXPR])
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    canonical = doc["canonical"]
    import re
    assert re.match(RATIONAL, canonical["classification"]["epsilon"])
    assert canonical["classification"]["epsilon"] == "5934060/1"
    assert canonical["normal_form"]["residual_valuation"] == "inf"
    assert canonical["holonomy"]["dichotomy"] == "Abelian"
    assert canonical["holonomy"]["sz_lambda"]["ratio"] == "4/1"
    assert all(re.match(RATIONAL, pt["cs_index"])
               for pt in canonical["singular_points"])
    assert canonical["reduction"]["labels"] == ["D1", "D2"]


def test_report_not_applicable_sections_are_null():
    code, out, _ = run(["report", "--json", "--expr",
                        "d(y^2+x^3) + 4*x^2*dy"])  # cusp: 2p > n
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["canonical"]["classification"]["case"] == "cusp"
    assert doc["canonical"]["normal_form"] is None
    assert doc["canonical"]["holonomy"] is None


def test_report_canonical_section_is_byte_stable():
    _, first, _ = run(["report", "--json", "--expr", SADDLE_EXPR])
    _, second, _ = run(["report", "--json", "--expr", SADDLE_EXPR])
    assert canonical_bytes(json.loads(first)) == \
        canonical_bytes(json.loads(second))


def test_report_param_mode():
    code, out, _ = run(["report", "--json", "--mode", "param:b", "--expr",
                        "d(y^2+x^4) + -5*x^2*(1+b*x)*dy"])
    assert code == 0
    doc = json.loads(out)
    eps = doc["canonical"]["classification"]["epsilon"]
    assert eps["param"] == "b"
    assert eps["coeffs"][6] == "5934060/1"
    assert all(c == "0/1" for c in eps["coeffs"][:6])
