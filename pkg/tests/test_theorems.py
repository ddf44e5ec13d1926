import json

import pytest

from fgt.config import EngineConfig
from fgt.dsl import build_from_expr
from fgt.errors import ConfigError
from fgt.theorems import (
    THEOREMS,
    build_corpus,
    check_conclusion,
    check_hypothesis,
    resolve_theorem_ids,
    vacuity_audit,
    verify,
    verify_many,
)


@pytest.fixture(scope="module")
def cfg24():
    return EngineConfig(max_order=24)


@pytest.fixture(scope="module")
def corpus24(cfg24):
    return build_corpus(cfg24)


def test_corpus_trivial():
    assert build_corpus(EngineConfig(max_order=1)) == ["C(1)"]


def test_corpus_members(corpus24):
    for expr in ("S(4)", "SL23", "A(4)", "D(24)", "M16", "Dic(8)"):
        assert expr in corpus24
    # every expression is at most the configured order
    for expr in corpus24:
        assert build_from_expr(expr).order <= 24


def test_corpus_includes_a5_at_60():
    corpus = build_corpus(EngineConfig(max_order=60))
    assert "A(5)" in corpus


def test_corpus_deterministic(cfg24, corpus24):
    assert build_corpus(cfg24) == corpus24


def test_corpus_fingerprints_unique(corpus24, cfg24):
    fps = [build_from_expr(e, table_cap=cfg24.table_cap).fingerprint()
           for e in corpus24]
    assert len(fps) == len(set(fps))


def test_corpus_rejects_overcap():
    with pytest.raises(ConfigError):
        build_corpus(EngineConfig(max_order=500, lattice_cap=256))


def test_resolve_ids():
    assert resolve_theorem_ids("L3.1") == ["L3.1"]
    assert resolve_theorem_ids("L2.2") == [f"L2.2.{i}" for i in range(1, 8)]
    assert len(resolve_theorem_ids("all")) == len(THEOREMS) == 26 - 2
    with pytest.raises(ConfigError):
        resolve_theorem_ids("L9.9")


def test_check_hypothesis_l31_s3(s3, cfg24):
    assert check_hypothesis("L3.1", s3, {"p": 2}, cfg24)
    assert check_conclusion("L3.1", s3, {"p": 2}, cfg24)


def test_check_hypothesis_l31_a4(a4, cfg24):
    # all three maximal subgroups of V4 fail both alternatives
    out = THEOREMS["L3.1"].eval_fn(a4, {"p": 2}, cfg24)
    assert not out.hypothesis
    assert out.conclusion is False
    assert len(out.witnesses["failing"]) == 3


def test_check_hypothesis_t35_sl23(sl23, cfg24):
    out = THEOREMS["T3.5"].eval_fn(sl23, {}, cfg24)
    assert not out.conclusion  # not supersoluble
    assert not out.hypothesis  # forced by the proven statement
    assert out.witnesses["failing"]


def test_verify_empty_corpus(cfg24):
    rep = verify("T3.5", [], cfg24)
    assert len(rep.instances) == 0
    assert rep.violations == 0


def test_verify_single_suite(cfg24):
    rep = verify("L2.5.1", ["D(6)", "D(10)", "C(8)", "A(4)"], cfg24)
    assert rep.violations == 0
    assert rep.skipped == 0
    groups_seen = {r.group for r in rep.instances}
    assert groups_seen == {"D(6)", "D(10)", "C(8)", "A(4)"}


def test_l26_vacuous_hall(a5, cfg24):
    out = THEOREMS["L2.6"].eval_fn(a5, {"pi": [3, 5]}, cfg24)
    assert not out.hypothesis  # no subgroup of order 15 exists
    assert out.witnesses["hall_count"] == 0


def test_report_json_deterministic(cfg24):
    corpus = ["D(6)", "Q8", "S(4)"]
    a = verify("L2.2.1", corpus, cfg24).to_json()
    b = verify("L2.2.1", corpus, cfg24).to_json()
    assert a == b
    payload = json.loads(a)
    assert payload["theorem"] == "L2.2.1"
    assert payload["violations"] == 0
    assert {"group", "params", "hypothesis", "conclusion", "nontrivial"} <= \
        set(payload["instances"][0].keys())


def test_vacuity_audit_low_signal(cfg24):
    # a p-group-only corpus makes the p-nilpotence criteria trivially true
    rep = verify("L3.1", ["C(8)", "D(8)", "Q8", "C(2)xC(2)"], cfg24)
    audit = vacuity_audit(rep, floor=1)
    assert audit["nontrivial"] == 0
    assert audit["low_signal"]


def test_vacuity_audit_counts(cfg24, corpus24):
    rep = verify("L3.1", corpus24, cfg24)
    audit = vacuity_audit(rep, floor=10)
    assert audit["nontrivial"] >= 10
    assert not audit["low_signal"]


def test_pair_scan_limit():
    cfg = EngineConfig(max_order=24, pair_scan_max_order=8)
    rep = verify("S4.IMPL", ["D(6)", "Q8", "S(4)"], cfg)
    groups_seen = {r.group for r in rep.instances}
    assert "S(4)" not in groups_seen  # above the pair-scan bound
    assert {"D(6)", "Q8"} <= groups_seen


def test_skipped_on_cap():
    cfg = EngineConfig(max_order=24, lattice_cap=8)
    rep = verify("L2.2.1", ["C(4)", "S(4)"], cfg)
    skipped = [r for r in rep.instances if r.skipped]
    assert len(skipped) == 1
    assert skipped[0].group == "S(4)"
    assert "cap" in skipped[0].skipped
    assert rep.skip_rate == 0.5


def test_verify_many_group_major(cfg24):
    reports = verify_many(["L2.5.1", "L2.6"], ["D(6)", "D(10)"], cfg24)
    assert set(reports) == {"L2.5.1", "L2.6"}
    for rep in reports.values():
        assert rep.violations == 0


def test_all_suites_tiny_corpus():
    cfg = EngineConfig(max_order=12)
    corpus = build_corpus(cfg)
    reports = verify_many(["all"], corpus, cfg)
    assert len(reports) == len(THEOREMS)
    for rep in reports.values():
        assert rep.violations == 0, rep.theorem
