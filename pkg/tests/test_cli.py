import json
import subprocess
import sys

import pytest

from hnpobs.cli import main


def run(capsysbinary, *argv):
    code = main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out.decode("utf-8"), err.decode("utf-8")


@pytest.fixture
def s3_files(tmp_path):
    (tmp_path / "s3.gens").write_text("# S3\n(1,2,3)\n(1,2)\n")
    (tmp_path / "c2.gens").write_text("(1,2)\n")
    (tmp_path / "c3.gens").write_text("degree 3\n(1,2,3)\n")
    (tmp_path / "a4.gens").write_text("(1,2,3)\n(2,3,4)\n")
    (tmp_path / "bad.gens").write_text("(1,2\n")
    return tmp_path


def test_analyze_c2(capsysbinary):
    code, raw, _ = run(capsysbinary, "analyze", "--fixture", "m11", "--class", "C2")
    assert code == 0
    d = json.loads(raw)
    assert d["schema_version"] == "1"
    assert d["h1"] == [2] and d["ker_psi1"] == [2] and d["dnr"] == []
    assert [m["label"] for m in d["minimal_true"]] == ["C2 x C2", "Q8"]
    assert d["counts"] == {"true": 20, "false": 19}
    assert d["subgroup"]["order"] == 2 and d["subgroup"]["label"] == "C2"
    assert d["group"]["generators"] == ["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"]
    assert json.loads(json.dumps(d)) == d


def test_analyze_v4(capsysbinary):
    code, out, _ = run(capsysbinary, "analyze", "--fixture", "m11", "--class", "V4")
    assert code == 0 and json.loads(out)["h1"] == []


def test_analyze_deterministic_across_jobs(capsysbinary):
    args = ["analyze", "--fixture", "m11", "--class", "C8"]
    _, a, _ = run(capsysbinary, *args)
    _, b, _ = run(capsysbinary, *args, "--jobs", "2")
    _, c, _ = run(capsysbinary, *args)
    assert a == b == c


def test_minimal(capsysbinary):
    code, out, _ = run(capsysbinary, "minimal", "--fixture", "m11", "--class", "(C3 x C3) : C8")
    assert code == 0
    assert [m["label"] for m in json.loads(out)["minimal_true"]] == ["QD16"]
    code, out, _ = run(capsysbinary, "minimal", "--fixture", "m11", "--class", "C5 : C4",
                       "--format", "md")
    assert code == 0 and out.strip().endswith("Q8, D8")


def test_scenario(capsysbinary):
    code, out, _ = run(capsysbinary, "scenario", "--fixture", "m11", "--class", "C8", "--place", "QD16")
    d = json.loads(out)
    assert code == 0 and d["hnp_holds"] and d["tamagawa"] == "1"
    code, out, _ = run(capsysbinary, "scenario", "--fixture", "m11", "--class", "C8", "--place", "D8")
    d = json.loads(out)
    assert not d["hnp_holds"] and d["sha"] == [2] and d["tamagawa"] == "1/2"
    code, out, _ = run(capsysbinary, "scenario", "--fixture", "m11", "--class", "C8")
    d = json.loads(out)
    assert d["obstruction"] == d["h1"] == [2] and d["places"] == []


def test_scenario_strict_flag(capsysbinary):
    code, out, _ = run(capsysbinary, "scenario", "--fixture", "m11", "--class", "C2",
                       "--place", "V4", "--strict")
    d = json.loads(out)
    assert code == 0 and d["strict"] and d["hnp_holds"]


def test_tables(capsysbinary):
    code, out, _ = run(capsysbinary, "tables")
    assert code == 0
    t1, t2 = out.split("Table 2")
    rows1 = [r for r in t1.splitlines() if r.startswith("| ") and not r.startswith("| H ")]
    rows2 = [r for r in t2.splitlines() if r.startswith("| ") and not r.startswith("| H ")]
    assert len(rows1) == 25 and len(rows2) == 13
    assert "| C5 : C4 | C4 | 20 | 396 | Z/2Z |" in rows2
    assert "| PSL(2,11) | V4 | 660 | 12 | 0 |" in rows1
    assert "| S3^(1) | C2 | 6 | 1320 | Z/2Z |" in rows2
    assert "D8 = D4" in out


def test_tables_json(capsysbinary):
    code, out, _ = run(capsysbinary, "tables", "--format", "json")
    d = json.loads(out)
    assert len(d["table1"]) == 25 and len(d["table2"]) == 13
    assert all(r["h1"] == [2] for r in d["table2"])


def test_verify_and_export(capsysbinary, tmp_path):
    code, out, _ = run(capsysbinary, "verify-fixtures", "--format", "md", "--export", str(tmp_path))
    assert code == 0 and out.startswith("38/38 ok")
    assert (tmp_path / "class21.gens").read_text().count("\n") >= 3
    code, out, _ = run(capsysbinary, "analyze", "--group", str(tmp_path / "m11.gens"),
                       "--subgroup", str(tmp_path / "class04.gens"))
    d = json.loads(out)
    assert code == 0 and d["h1"] is None and d["unramified_obstruction"] == []


def test_file_inputs(capsysbinary, s3_files):
    g = str(s3_files / "s3.gens")
    code, out, _ = run(capsysbinary, "analyze", "--group", g, "--subgroup", str(s3_files / "c2.gens"),
                       "--place", str(s3_files / "c3.gens"), "--schur-trivial", "M(S3)=0")
    d = json.loads(out)
    assert code == 0
    assert d["group"]["label"] == "S3" and d["subgroup"]["label"] == "C2"
    assert d["h1"] == [] and len(d["classes"]) == 1


def test_exit_codes(capsysbinary, s3_files):
    g = str(s3_files / "s3.gens")
    assert run(capsysbinary)[0] == 1
    assert run(capsysbinary, "frobnicate")[0] == 1
    assert run(capsysbinary, "analyze", "--fixture", "m11")[0] == 1
    assert run(capsysbinary, "analyze", "--fixture", "m11", "--class", "S3")[0] == 1
    assert run(capsysbinary, "analyze", "--fixture", "m12", "--class", "C2")[0] == 1
    assert run(capsysbinary, "analyze", "--group", str(s3_files / "bad.gens"), "--subgroup", g)[0] == 2
    assert run(capsysbinary, "analyze", "--group", str(s3_files / "nope.gens"), "--subgroup", g)[0] == 2
    assert run(capsysbinary, "analyze", "--group", str(s3_files / "a4.gens"),
               "--subgroup", g, "--cap", "10")[0] == 3
    # (1,2) is not in A4
    code, _, err = run(capsysbinary, "analyze", "--group", str(s3_files / "a4.gens"),
                       "--subgroup", str(s3_files / "c2.gens"))
    assert code == 4 and "not an element" in err
    # no M(G)=0 assertion for a file group
    assert run(capsysbinary, "scenario", "--group", g, "--subgroup", str(s3_files / "c2.gens"))[0] == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hnpobs", "verify-fixtures", "--format", "md"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("38/38 ok")
