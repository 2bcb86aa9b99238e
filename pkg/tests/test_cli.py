import json
import subprocess
import sys

import pytest

from binorbit.cli import catalog_rows, generic_stabilizer_order, main, partitions
from binorbit.forms import MultiplicityProfile
from binorbit.report import ReportDocument, decode_int, encode_int

from conftest import CORPUS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def analyze_json(capsys, *argv):
    code, out, err = run(capsys, "analyze", *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_analyze_three_points(capsys):
    doc = analyze_json(capsys, "x*y*(x+y)")
    assert (doc["dimension"], doc["predegree"], doc["stabilizer"]["order"], doc["degree"], doc["smooth"]) == (
        3, 6, 6, 1, True)
    assert doc["stabilizer"]["certified"]


def test_analyze_surface(capsys):
    doc = analyze_json(capsys, "x^3*y^2")
    assert doc["dimension"] == 2 and doc["degree"] == 12
    assert [(b["kind"], b["multiplicity"]) for b in doc["boundary"]] == [("DFold", 2)]


def test_analyze_icosahedron(capsys):
    doc = analyze_json(capsys, "x^11*y + 11*x^6*y^6 - x*y^11")
    assert (doc["predegree"], doc["stabilizer"]["order"], doc["degree"], doc["smooth"]) == (1320, 60, 22, True)


def test_analyze_given_and_skipped_stabilizer(capsys):
    doc = analyze_json(capsys, "x*(x-y)*(x-3*y)*(x-7*y)", "--stab", "4")
    assert doc["degree"] == 6 and doc["stabilizer"]["source"] == "given"
    doc = analyze_json(capsys, "x*(x-y)*(x-3*y)*(x-7*y)", "--no-numeric")
    assert doc["degree"] is None
    assert [b["premultiplicity"] for b in doc["boundary"]] == [12, 8]


def test_analyze_table(capsys):
    code, out, _ = run(capsys, "analyze", "x^4 + 2*t*x^2*y^2 + y^4", "--minpoly", "t^2+3")
    assert code == 0
    assert "stabilizer         12" in out and "Pair(1,3)" in out


@pytest.mark.parametrize("argv, code, tag", [
    (("analyze", "x^2 + x*y^2"), 2, "PARSE"),
    (("analyze", "t*x*y"), 2, "FIELD"),
    (("analyze", "x*y*(x+y)", "--stab", "4"), 4, "INCONSISTENT"),
    (("analyze", "x*(x-y)*(x-3*y)*(x-7*y)", "--tol", "0.01"), 3, "NUMERIC"),
    (("special", "C3", "1", "1", "1"), 2, "DOMAIN"),
    (("oracle", "1,0"), 2, "PARSE"),
])
def test_exit_codes(capsys, argv, code, tag):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert f"[{tag}]" in err


@pytest.mark.parametrize("label, text, minpoly, stab", CORPUS)
def test_json_roundtrip(capsys, label, text, minpoly, stab):
    argv = [text] + (["--minpoly", minpoly] if minpoly else [])
    doc = analyze_json(capsys, *argv)
    back = ReportDocument.from_dict(doc)
    assert back.to_dict() == doc
    assert ReportDocument.from_json(back.to_json()) == back
    if stab is not None:
        assert doc["stabilizer"]["order"] == stab


def test_large_integers_are_strings():
    assert encode_int(2 ** 60) == str(2 ** 60)
    assert encode_int(2 ** 52) == 2 ** 52
    assert decode_int(str(2 ** 60)) == 2 ** 60


def test_schema_version_checked(capsys):
    doc = analyze_json(capsys, "x*y*(x+y)")
    doc["schema_version"] = 99
    with pytest.raises(ValueError):
        ReportDocument.from_dict(doc)


def test_special_exceptional(capsys):
    code, out, _ = run(capsys, "special", "S4", "5852", "561", "19656", "--json")
    data = json.loads(out)
    assert code == 0 and data["roster"]["C"] == 3
    assert data["checks"][0]["ok"]


def test_special_dn(capsys):
    code, out, _ = run(capsys, "special", "Dn", "--n", "4", "1", "2", "3", "--json")
    data = json.loads(out)
    assert code == 0 and data["roster"]["A"] == 1
    assert all(c["ok"] for c in data["checks"])


def test_special_a4_upgrade(capsys):
    code, out, _ = run(capsys, "special", "A4", "1", "1", "5")
    assert code == 0
    assert "the stabilizer is S_4" in out
    assert "stabilizer 24" in out


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "1,1,1,1,1")
    assert code == 0 and "60" in out and "agree" in out


def test_stabilizer_command(capsys):
    code, out, _ = run(capsys, "stabilizer", "x*y*(x^2-y^2)")
    assert code == 0 and out.splitlines()[0].split() == ["order", "8"]


def test_catalog_contains_balanced_surface(capsys):
    code, out, _ = run(capsys, "catalog", "6", "--json")
    rows = json.loads(out)["rows"]
    row = next(r for r in rows if r["profile"] == [3, 3])
    assert row["dimension"] == 2 and row["degree"] == 9
    assert all(not r["problems"] for r in rows)


def test_catalog_determinism():
    a, b, c = catalog_rows(6, 3), catalog_rows(6, 3), catalog_rows(6, 4)
    assert a == b
    keys = ("d", "profile", "s", "dimension", "predegree", "oracle_predegree", "boundary")
    assert [{k: r[k] for k in keys} for r in a] == [{k: r[k] for k in keys} for r in c]


def test_partitions_and_generic_orders():
    assert len(list(partitions(8))) == 22
    assert generic_stabilizer_order(MultiplicityProfile((1, 1, 1))) == 6
    assert generic_stabilizer_order(MultiplicityProfile((2, 2, 1, 1))) == 2
    assert generic_stabilizer_order(MultiplicityProfile((2, 1, 1, 1))) == 1
    assert generic_stabilizer_order(MultiplicityProfile((1,) * 4)) == 4


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "binorbit.cli", "oracle", "2,1,1"],
                         capture_output=True, text=True, check=True)
    assert "12" in out.stdout
