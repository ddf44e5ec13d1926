import json

import pytest

from fgt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_s4(capsys):
    code, out, _ = run(capsys, "analyze", "S(4)")
    assert code == 0
    assert "order 24" in out
    assert "chief factor orders: [4, 3, 2]" in out
    assert "Z=1" in out  # supersoluble hypercentre is trivial


def test_analyze_trivial(capsys):
    code, out, _ = run(capsys, "analyze", "C(1)")
    assert code == 0
    assert "order 1" in out


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "A(4)", "--formation", "U_p:2",
                       "--format", "json")
    assert code == 0
    info = json.loads(out)
    assert info["hypercentre_order"]["U_p:2"] == 1


def test_analyze_parse_error(capsys):
    code, _, err = run(capsys, "analyze", "Z(5)")
    assert code == 2
    assert "error" in err


def test_analyze_cap_error(capsys):
    code, _, err = run(capsys, "analyze", "C(9999)")
    assert code == 2


def test_subgroups_listing(capsys):
    code, out, _ = run(capsys, "subgroups", "Q8", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "index,order,mask,normal,s_quasinormal"
    assert len(lines) == 7  # header + 6 subgroups


def test_check_cn_holds(capsys):
    code, out, _ = run(capsys, "check", "S(3)", "cn", "--gens", "(1 2)")
    assert code == 0
    assert "holds" in out


def test_check_sqn_fails(capsys):
    code, out, _ = run(capsys, "check", "S(3)", "sqn", "--gens", "(1 2)")
    assert code == 1


def test_check_wfsqn_trivial_subgroup(capsys):
    code, out, _ = run(capsys, "check", "S(4)", "wfsqn", "--index", "0",
                       "--formation", "U")
    assert code == 0


def test_check_supplement(capsys):
    code, out, _ = run(capsys, "check", "S(3)", "supp:p_nilpotent:2",
                       "--gens", "(1 2)")
    assert code == 0


def test_check_elements_selector(capsys):
    code, out, _ = run(capsys, "check", "Q8", "sqn", "--elements", "1")
    assert code == 0


def test_check_bad_tag(capsys):
    code, _, err = run(capsys, "check", "S(3)", "bogus", "--index", "0")
    assert code == 2


def test_check_bad_selector(capsys):
    code, _, err = run(capsys, "check", "S(3)", "sqn", "--gens", "(1 9)")
    assert code == 2
    code, _, err = run(capsys, "check", "S(3)", "sqn")
    assert code == 2


def test_corpus_listing(capsys):
    code, out, _ = run(capsys, "corpus", "--max-order", "12")
    assert code == 0
    assert "A(4)" in out.splitlines()


def test_verify_small(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "L2.5.1", "--max-order", "12",
                       "--out", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "L2.5.1.json").read_text())
    assert report["violations"] == 0
    assert report["theorem"] == "L2.5.1"


def test_verify_prefix_selector(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "L2.5", "--max-order", "10",
                       "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "L2.5.1.json").exists()
    assert (tmp_path / "L2.5.2.json").exists()


def test_verify_unknown_id(tmp_path, capsys):
    code, _, err = run(capsys, "verify", "L7.7", "--out", str(tmp_path))
    assert code == 2


def test_verify_skip_exit_code(tmp_path, capsys, monkeypatch):
    # a table cap of 80 admits A(5) itself but not the order-3600 product
    # needed for its centrality checks, so those instances are skipped
    monkeypatch.setenv("FGT_TABLE_CAP", "80")
    code, out, _ = run(capsys, "verify", "L2.1a", "--max-order", "60",
                       "--families", "cyclic,alternating",
                       "--out", str(tmp_path), "--skip-threshold", "0.0")
    assert code == 4
    report = json.loads((tmp_path / "L2.1a.json").read_text())
    skipped = [r for r in report["instances"] if "skipped" in r]
    assert skipped and all(r["group"] == "A(5)" for r in skipped)
    assert all("cap" in r["skipped"] for r in skipped)


def test_verify_parallel_matches_serial(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", "L2.6", "--max-order", "16",
                     "--out", str(tmp_path / "serial"))
    assert code == 0
    code, _, _ = run(capsys, "verify", "L2.6", "--max-order", "16",
                     "--jobs", "2", "--out", str(tmp_path / "par"))
    assert code == 0
    a = (tmp_path / "serial" / "L2.6.json").read_text()
    b = (tmp_path / "par" / "L2.6.json").read_text()
    assert a == b


def test_cache_cli_cycle(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    code, out, _ = run(capsys, "cache", "warm", "--max-order", "10",
                       "--cache-dir", cache)
    assert code == 0
    code, out, _ = run(capsys, "cache", "validate", "--max-order", "10",
                       "--cache-dir", cache)
    assert code == 0
    assert "0 purged" in out
    code, out, _ = run(capsys, "cache", "purge", "--cache-dir", cache)
    assert code == 0
    code, _, err = run(capsys, "cache", "warm")
    assert code == 2  # no cache dir configured


def test_env_overrides(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FGT_MAX_ORDER", "6")
    code, out, _ = run(capsys, "corpus")
    assert code == 0
    exprs = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert all("C(" in e or "D(6)" == e for e in exprs)
