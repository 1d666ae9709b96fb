import json

import pytest

from cdu.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_ddt_summary_csv(capsys):
    rc, out, _ = run(capsys, "ddt", "--field", "2^3", "--gold", "1",
                     "--perturb", "bin:0,1", "--c", "all", "--format", "csv")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "c,max"
    assert len(lines) == 1 + 7  # every c != 1 over GF(8)
    assert max(int(l.split(",")[1]) for l in lines[1:]) == 3


def test_ddt_identity_all_ones(capsys):
    rc, out, _ = run(capsys, "ddt", "--field", "2^2", "--fn", "identity", "--c", "2")
    assert rc == 0
    rows = [l for l in out.strip().splitlines()[1:]]
    assert all(l.endswith(",1") for l in rows)
    assert len(rows) == 16


def test_ddt_three_way_verify(capsys):
    rc, out, _ = run(capsys, "ddt", "--field", "3^2", "--gold", "1",
                     "--c", "2", "--method", "verify")
    assert rc == 0
    assert "char=brute=closed on 81 entries" in out


def test_ddt_json_and_methods_agree(capsys):
    rc, out, _ = run(capsys, "ddt", "--field", "2^3", "--gold", "1",
                     "--perturb", "mono:0", "--c", "3", "--format", "json",
                     "--method", "closed")
    assert rc == 0
    closed = json.loads(out)
    rc, out, _ = run(capsys, "ddt", "--field", "2^3", "--gold", "1",
                     "--perturb", "mono:0", "--c", "3", "--format", "json",
                     "--method", "char")
    brute_like = json.loads(out)
    assert closed["counts"] == brute_like["counts"]
    assert closed["uniformity"] == brute_like["uniformity"]


def test_ddt_nonzero_range_and_md(capsys):
    rc, out, _ = run(capsys, "ddt", "--field", "2^3", "--fn", "pow:3",
                     "--c", "nonzero", "--format", "md")
    assert rc == 0
    assert "beta =" in out
    assert out.count("|") > 10


def test_ddt_usage_errors(capsys):
    rc, _, err = run(capsys, "ddt", "--field", "2^3", "--c", "2")
    assert rc == 1  # no function given
    rc, _, err = run(capsys, "ddt", "--field", "2^3", "--fn", "identity",
                     "--c", "2", "--method", "closed")
    assert rc == 1  # closed needs --gold
    rc, _, err = run(capsys, "ddt", "--field", "nonsense", "--fn", "identity", "--c", "2")
    assert rc == 1
    rc, _, err = run(capsys, "ddt", "--field", "2^3", "--fn", "identity", "--c", "99")
    assert rc == 1


def test_ddt_modulus_override(capsys):
    rc, out, _ = run(capsys, "ddt", "--field", "2^3", "--modulus", "1,0,1,1",
                     "--fn", "identity", "--c", "0", "--format", "json")
    assert rc == 0
    assert json.loads(out)["uniformity"] == 1
    rc, _, _ = run(capsys, "ddt", "--field", "2^3", "--modulus", "1,1,1,1",
                   "--fn", "identity", "--c", "0")
    assert rc == 1  # reducible modulus


def test_ddt_file_function(tmp_path, capsys):
    path = tmp_path / "fn.txt"
    path.write_text("0,1,2,3,4,5,6,7")
    rc, out, _ = run(capsys, "ddt", "--field", "2^3", "--fn", f"file:{path}",
                     "--c", "0", "--format", "json")
    assert rc == 0
    assert json.loads(out)["uniformity"] == 1


def test_tables_n3_diff(capsys):
    rc, out, err = run(capsys, "tables", "--n", "3", "--diff", "--format", "csv")
    assert rc == 0
    assert "3,0,1,3,4" in out
    assert "all cells match" in err


def test_tables_markdown(capsys):
    rc, out, _ = run(capsys, "tables", "--n", "3")
    assert rc == 0
    assert "| (1,2) | 4 | 4 |" in out


def test_verify_quick_json(capsys):
    rc, out, _ = run(capsys, "verify", "--quick", "--json",
                     "--suite", "bluher", "--suite", "orthogonality")
    assert rc == 0
    rep = json.loads(out)
    assert rep["passed"] and len(rep["suites"]) == 2


def test_verify_inject_fault_fails(capsys):
    rc, out, _ = run(capsys, "verify", "--quick", "--suite", "threeway",
                     "--inject-fault", "t1")
    assert rc == 2
    assert "counterexample" in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("field = 2^3\nfn = identity\nc = 0\nformat = json\n")
    rc, out, _ = run(capsys, "ddt", "--config", str(cfg), "--c", "0")
    assert rc == 0
    assert json.loads(out)["uniformity"] == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("no_such_key = 1\n")
    rc, _, _ = run(capsys, "ddt", "--config", str(bad), "--field", "2^2",
                   "--fn", "identity", "--c", "0")
    assert rc == 1


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "table.csv"
    rc, out, _ = run(capsys, "ddt", "--field", "2^2", "--fn", "identity",
                     "--c", "0", "--out", str(dest))
    assert rc == 0 and out == ""
    assert dest.read_text().startswith("a,b,count")


def test_determinism_same_seed(capsys):
    args = ("ddt", "--field", "2^4", "--gold", "1", "--perturb", "bin:0,3",
            "--c", "all", "--format", "json", "--seed", "7")
    rc1, out1, _ = run(capsys, *args)
    rc2, out2, _ = run(capsys, *args)
    assert rc1 == rc2 == 0 and out1 == out2
