import json
import shutil
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from relforge.cli import REPORT_SCHEMA, main, run_command
from relforge.corpus import Workspace, default_corpus_dir
from relforge.errors import DivisionByZeroPolynomial, ExpressionSyntaxError, UnknownCorpusEntry
from relforge.grammar import format_poly, format_ratfunc, parse_expression
from relforge.numberfield import make_number_field
from relforge.polyring import Poly, RatFunc

z = Poly.z()


def test_parse_rational_function():
    r = parse_expression("z^2/(1-z^3)")
    assert isinstance(r, RatFunc)
    assert r == RatFunc(z ** 2, 1 - z ** 3)


def test_parse_product_expands():
    p = parse_expression("(1+z-z^2)*(1+z^3-z^6)")
    assert p == (1 + z - z ** 2) * (1 + z ** 3 - z ** 6)
    assert p.degree == 8


def test_parse_errors():
    with pytest.raises(DivisionByZeroPolynomial):
        parse_expression("z/(z-z)")
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("1 + * z")
    assert info.value.args


def test_round_trip():
    K = make_number_field([-5, 0, 1])
    samples = [z ** 3 - Fraction(1, 2) * z + 7, Poly([0, 0, -3, 1]), Poly([K.gen(), 0, (1 - K.gen()) / 2])]
    for p in samples:
        text = format_poly(p)
        assert parse_expression(text, p.field) == p
        assert format_poly(parse_expression(text, p.field)) == text
    r = RatFunc(z ** 2 + 1, 3 * z - 1)
    assert parse_expression(format_ratfunc(r)) == r


def test_corpus_loads_quickly():
    start = time.perf_counter()
    out = Workspace().validate_all()
    assert time.perf_counter() - start < 5
    assert "tm3" in out["functions"] and "phi" in out["points"]


def test_corpus_override(tmp_path, monkeypatch):
    src = default_corpus_dir()
    for kind in ("functions", "points"):
        (tmp_path / kind).mkdir()
    shutil.copy(src / "functions" / "bs.json", tmp_path / "functions" / "bs.json")
    monkeypatch.setenv("RELFORGE_CORPUS", str(tmp_path))
    ws = Workspace()
    assert ws.names("functions") == ["bs"]
    with pytest.raises(UnknownCorpusEntry):
        ws.function("tm3")
    code, report = run_command(["corpus", "list"])
    assert code == 0
    assert report["result"]["entries"]["functions"] == ["bs"]


def test_degenerate_command():
    code, report = run_command(["degenerate", "--relation", "tm3.rel", "--point", "phi", "--json"])
    assert code == 0
    assert report["schema"] == REPORT_SCHEMA
    assert report["status"] == "ok"
    assert report["result"]["closed_form"] == "f(phi) = phi^2/(1-phi^3)"
    assert report["result"]["values"] == {"f": "1/4*t-1/4"}
    assert report["result"]["consistency"]["contains_zero"]


def test_verify_command():
    code, report = run_command(["verify", "--relation", "bessel.rel", "--terms", "200"])
    assert code == 0
    assert report["result"]["passed"] is True


def test_scan_command():
    code, report = run_command(["scan", "--relation", "tm3.rel", "--radius", "99/100"])
    assert code == 0
    hits = report["result"]["hits"]
    assert len(hits) == 1
    assert parse_expression(hits[0]["factor"]).monic() == z ** 2 - z - 1


def test_exit_codes():
    assert run_command(["no-such-command"])[0] == 2
    code, report = run_command(["eval", "geom2", "--point", "sqrt2_2", "--width", "1e-10"])
    assert code == 1
    assert report["error"]["name"] in ("OrbitHitsSingularity", "NoBoundAvailable")
    code, report = run_command(["series", "nosuchfunction"])
    assert code == 2 and report["status"] == "usage"
    code, report = run_command(["groebner", "X1^2 - z +", "--vars", "X1"])
    assert code == 2


def test_cli_examples_cover_pipeline():
    code, rep = run_command(["minimize", "bs", "--degree", "1"])
    assert code == 0 and rep["result"]["certificate"]["status"].startswith("proved")
    code, rep = run_command(["denominator", "geom2"])
    assert code == 0 and rep["result"]["denominator"] == "z-1/2"
    code, rep = run_command(["level", "geom2", "--radius", "3/5"])
    assert code == 1 and rep["error"]["name"] == "NotAnalyticOnDisk"
    code, rep = run_command(["check-value", "bs", "--point", "third", "--candidate", "1"])
    assert code == 0 and rep["result"]["verdict"] == "refuted"
    code, rep = run_command(["badset", "(z-1)*X2 - X1", "--vars", "X2,X1", "--keep", "1"])
    assert code == 0 and rep["result"]["bad_set"] == "z-1"


def test_console_script_json_output():
    out = subprocess.run([sys.executable, "-m", "relforge.cli", "series", "bs", "--terms", "8", "--json"],
                         capture_output=True, text=True, check=True)
    data = json.loads(out.stdout)
    assert data["schema"] == REPORT_SCHEMA
    assert [Fraction(c) for c in data["result"]["coeffs"]] == [1, 1, 0, 1, 1, 0, 0, 1]
    assert main(["corpus", "validate"]) == 0
