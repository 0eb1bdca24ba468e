"""Command-line behaviour: exit codes, formats, determinism and schema validity."""
import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from silverline.cli import main, schema_text
from silverline.dichotomy import DichotomyCertificate, verify_certificate
from silverline.numfield import FieldElement
from silverline.polynomials import IntPolynomial


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_polys_three():
    code, text = run("polys", "3", "--emit", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 3
    assert {r["primitive"] for r in rows} == {"yes"}


def test_polys_four_marks_reducible():
    code, text = run("polys", "4", "--emit", "json")
    rows = json.loads(text)
    assert len(rows) == 7
    row = next(r for r in rows if r["polynomial"] == "x^4 - x^2 - x - 1")
    assert row["irreducible"] == "no"
    assert row["factors"] == "(x + 1) * (x^3 - x^2 - 1)"
    assert next(r for r in rows if r["bits"] == "0101")["primitive"] == "no"


def test_usage_errors(capsys):
    assert run("polys", "1")[0] == 2
    assert run("root", "--poly", "100")[0] == 2
    assert run("nonsense")[0] == 2
    assert run("tile", "--tiles", "5")[0] == 2  # neither --poly nor --rule


def test_module_error_is_json(capsys):
    code, _ = run("dichotomy", "--poly", "0101", "--degree-bound", "4")
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "CannotCertifyError"
    code, _ = run("tile", "--rule", "13,1")  # tile 3 does not exist
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "InvalidRuleError" and err["row"] == 1 and err["tile"] == 3
    code, _ = run("converge", "--rule", "11,1")  # reducible partition matrix
    assert code == 1
    assert json.loads(capsys.readouterr().err)["error"] == "PreconditionError"


def test_integers_delta_column():
    code, text = run("integers", "2", "--count", "10", "--digits", "12")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 10
    deltas = {r["delta_trunc"] for r in rows[1:]}
    # decimals are truncated, never rounded up
    assert deltas == {"1", "0.618033988749"}
    assert [r["bits"] for r in rows[:5]] == ["0", "1", "10", "100", "101"]


def test_tile_json_matches_schema():
    code, text = run("tile", "--poly", "111", "--tiles", "50", "--emit", "json")
    assert code == 0
    data = json.loads(text)
    jsonschema.validate(data, json.loads(schema_text()))
    assert len(data["prefix"]) == 50 and len(data["endpoints"]) == 51


def test_tile_round_trip_exact():
    _, text = run("tile", "--poly", "11", "--tiles", "20", "--emit", "json")
    data = json.loads(text)
    modulus = IntPolynomial(int(c) for c in data["modulus"])
    lengths = {t["index"]: FieldElement(modulus, [Fraction(c) for c in t["length_coords"]]) for t in data["prototiles"]}
    phi = FieldElement.generator(modulus)
    assert lengths == {1: phi**0, 2: phi.inverse()}


def test_dichotomy_certificate(capsys):
    code, text = run("dichotomy", "--poly", "11", "--degree-bound", "10", "--progress")
    assert code == 0
    data = json.loads(text)
    assert data["verified_degree"] == 10
    assert "verified" in capsys.readouterr().err
    cert = DichotomyCertificate.from_json(data)
    assert verify_certificate(cert, 6).ok


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("digits = 4\noutput_format = json\n")
    _, text = run("root", "--poly", "11", "--config", str(cfg))
    assert json.loads(text)["decimal"] == "1.6180"
    _, text = run("root", "--poly", "11", "--config", str(cfg), "--digits", "6")
    assert json.loads(text)["decimal"] == "1.618033"


def test_bad_config_is_usage_error(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("digits = many\n")
    assert run("polys", "3", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("integers", "3", "--count", "40", "--emit", "csv"),
        ("tile", "--poly", "011", "--tiles", "40", "--emit", "json"),
        ("matrix", "perron", "--poly", "101", "--emit", "json"),
        ("dichotomy", "--poly", "111", "--degree-bound", "6"),
    ],
)
def test_deterministic(argv):
    assert run(*argv) == run(*argv)


def test_other_subcommands():
    code, text = run("normal-form", "3", "1111", "--emit", "json")
    assert code == 0 and json.loads(text)["normal_form"] == "10001"
    code, text = run("converge", "--rule", "31,1,2", "--emit", "json")
    assert json.loads(text)["k"] == 3
    code, text = run("matrix", "intertwine", "--poly", "111", "--emit", "json")
    assert json.loads(text)["BM_equals_MA"] is True
    code, text = run("root", "--poly", "1111", "--emit", "json")
    assert json.loads(text)["bound_check"]["inside"] is True


def test_verify_all():
    code, text = run("verify-all")
    assert code == 0
    assert text.count("PASS") == 12


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "silverline", "polys", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "x^2 - x - 1" in proc.stdout
