"""Acceptance criteria, one test per criterion.

A single session-scoped pass over the default corpus (all catalog groups of
order <= 100) drives every suite and collects the cross-validation data;
each criterion test then asserts on the collected results and prints a
PASS line. Run with `pytest tests/test_acceptance.py -v -s` to see them.
"""

import time

import pytest

from fgt.config import EngineConfig
from fgt.dsl import build_from_expr
from fgt.formations import (
    chief_series,
    f_hypercentre,
    f_hypercentre_via_join,
    f_residual,
    formation,
    is_f_central,
    standard_formations,
    u_centrality_shortcut,
)
from fgt.groups import check_group_invariants, conjugacy_classes
from fgt.embeddings import embedding_predicate, has_supplement
from fgt.quotients import quotient
from fgt.subgroups import all_subgroups, normal_subgroups
from fgt.theorems import (
    THEOREMS,
    VerificationReport,
    run_instances,
    build_corpus,
    vacuity_audit,
)
from fgt import kernels

LEMMA_SUITES = ("L2.1a", "L2.1b", "L2.2.1", "L2.2.2", "L2.2.3", "L2.2.4",
                "L2.2.5", "L2.2.6", "L2.2.7", "L2.3.1", "L2.3.2", "L2.3.3",
                "L2.4", "L2.5.1", "L2.5.2", "L2.6", "L2.7")
THEOREM_SUITES = ("L3.1", "T3.2", "L3.3", "T3.4", "T3.5", "L3.6", "T3.7",
                  "T3.8")


class FullRun:
    def __init__(self):
        self.cfg = EngineConfig(max_order=100)
        self.corpus = build_corpus(self.cfg)
        self.elapsed = 0.0
        self.reports = {}
        self.shortcut_mismatches = []
        self.hypercentre_mismatches = []
        self.invariant_failures = []
        self.sylow_failures = []
        self.quotient_failures = []


def _structural_checks(run, g, expr):
    try:
        check_group_invariants(g)
    except Exception as exc:  # noqa: BLE001 - collected for the report
        run.invariant_failures.append(f"{expr}: {exc}")
    lattice = all_subgroups(g, lattice_cap=run.cfg.lattice_cap)
    for p in g.primes():
        sylows = lattice.sylow(p)
        if not sylows or len(sylows) % p != 1:
            run.sylow_failures.append(f"{expr}: count at p={p}")
            continue
        orbit = {sylows[0].mask}
        queue = [sylows[0].mask]
        while queue:
            m = queue.pop()
            for x in range(g.order):
                c = kernels.conjugate(g.flat, g.inv_arr, g.order, m, x)
                if c not in orbit:
                    orbit.add(c)
                    queue.append(c)
        if orbit != {s.mask for s in sylows}:
            run.sylow_failures.append(f"{expr}: conjugacy at p={p}")
    for n_sub in normal_subgroups(g):
        qm = quotient(g, n_sub)
        if qm.coset_reps[0] != 0:
            run.quotient_failures.append(f"{expr}: coset rep 0")
        if qm.target.order * n_sub.order != g.order:
            run.quotient_failures.append(f"{expr}: order")
        kernel = [x for x in range(g.order) if qm.proj[x] == 0]
        if kernel != n_sub.members():
            run.quotient_failures.append(f"{expr}: kernel")


def _oracle_checks(run, g, expr):
    u = formation("U")
    series = chief_series(g)
    for f in series.factors:
        if is_f_central(g, f, u) != u_centrality_shortcut(f):
            run.shortcut_mismatches.append(f"{expr}: {f.order}")
    for form in standard_formations(g, ("U", "U_p", "N_p")):
        greedy = f_hypercentre(g, form)
        joined = f_hypercentre_via_join(g, form)
        if greedy.mask != joined.mask:
            run.hypercentre_mismatches.append(f"{expr}: {form.tag}")


@pytest.fixture(scope="session")
def full_run():
    run = FullRun()
    ids = list(THEOREMS)
    buckets = {tid: [] for tid in ids}
    started = time.time()
    for expr in run.corpus:
        g = build_from_expr(expr, table_cap=run.cfg.table_cap)
        for tid in ids:
            buckets[tid].extend(run_instances(THEOREMS[tid], g, expr, run.cfg))
        _oracle_checks(run, g, expr)
        _structural_checks(run, g, expr)
    run.elapsed = time.time() - started
    run.reports = {tid: VerificationReport(tid, run.corpus,
                                           run.cfg.snapshot(), buckets[tid])
                   for tid in ids}
    return run


def _announce(name, ok, detail=""):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_criterion_1_lemma_suites(full_run):
    bad = []
    for tid in LEMMA_SUITES:
        rep = full_run.reports[tid]
        if rep.violations or rep.skipped:
            bad.append((tid, rep.violations, rep.skipped))
    detail = (f"corpus={len(full_run.corpus)} groups <= 100, "
              f"wall={full_run.elapsed:.0f}s")
    _announce("1 lemma suites", not bad and full_run.elapsed <= 600,
              detail + (f" failures={bad}" if bad else ""))


def test_criterion_2_theorem_suites(full_run):
    bad = []
    for tid in THEOREM_SUITES:
        rep = full_run.reports[tid]
        if rep.violations:
            bad.append((tid, rep.violations))
    floors = {}
    for tid in ("L3.1", "T3.5", "L3.6"):
        audit = vacuity_audit(full_run.reports[tid], floor=10)
        floors[tid] = audit["nontrivial"]
        if audit["low_signal"]:
            bad.append((tid, "low signal", audit["nontrivial"]))
    _announce("2 theorem suites", not bad,
              f"nontrivial counts {floors}" + (f" failures={bad}" if bad else ""))


def test_criterion_3_implication_suite(full_run):
    rep = full_run.reports["S4.IMPL"]
    scanned = {r.group for r in rep.instances}
    big = [e for e in scanned
           if build_from_expr(e).order > full_run.cfg.pair_scan_max_order]
    ok = rep.violations == 0 and rep.skipped == 0 and not big
    _announce("3 implication suite", ok,
              f"instances={len(rep.instances)} over {len(scanned)} groups <= "
              f"{full_run.cfg.pair_scan_max_order}, violations={rep.violations}")


def test_criterion_4_oracle_equivalences(full_run):
    rep = full_run.reports["L2.2.6"]
    problems = []
    if rep.violations or rep.skipped:
        problems.append(f"O^p criterion: {rep.violations} violations")
    if full_run.shortcut_mismatches:
        problems.append(f"prime-order shortcut: {full_run.shortcut_mismatches[:3]}")
    if full_run.hypercentre_mismatches:
        problems.append(f"join vs greedy: {full_run.hypercentre_mismatches[:3]}")
    _announce("4 oracle equivalences", not problems, "; ".join(problems))


def test_criterion_5_known_values():
    s3 = build_from_expr("S(3)")
    s4 = build_from_expr("S(4)")
    a4 = build_from_expr("A(4)")
    q8 = build_from_expr("Q8")
    d4 = build_from_expr("D(8)")
    checks = {
        "subgroups(A4)=10": len(all_subgroups(a4)) == 10,
        "subgroups(Q8)=6": len(all_subgroups(q8)) == 6,
        "subgroups(D4)=10": len(all_subgroups(d4)) == 10,
        "subgroups(S4)=30": len(all_subgroups(s4)) == 30,
        "sqn(A4)={1,V4,A4}": [h.order for h in
                              all_subgroups(a4).s_quasinormal_subgroups()]
        == [1, 4, 12],
        "Z_U(S3)=S3": f_hypercentre(s3, formation("U")).order == 6,
        "Z_U(A4)=1": f_hypercentre(a4, formation("U")).order == 1,
        "Z_U2(A4)=1": f_hypercentre(a4, formation("U_p:2")).order == 1,
        "(S4)^U=V4": f_residual(s4, formation("U")).order == 4,
    }
    c2 = next(h for h in all_subgroups(a4).subgroups if h.order == 2)
    checks["no wfsqn witness"] = not embedding_predicate(
        a4, c2, "wfsqn", formation("U_p:2")).holds
    checks["no 2-nilpotent supplement"] = not has_supplement(
        a4, c2, "p_nilpotent", p=2).holds
    bad = [k for k, v in checks.items() if not v]
    _announce("5 known-value fixtures", not bad, f"failed: {bad}" if bad else
              f"{len(checks)} fixtures")


def test_criterion_6_determinism(tmp_path_factory):
    from fgt.theorems import verify_many

    corpus_cfg = EngineConfig(max_order=40)
    corpus = build_corpus(corpus_cfg)
    cache_dir = tmp_path_factory.mktemp("det-cache")
    cold_cfg = EngineConfig(max_order=40, cache_dir=str(cache_dir))
    first = verify_many(["all"], corpus, cold_cfg)
    warm_cfg = EngineConfig(max_order=40, cache_dir=str(cache_dir))
    second = verify_many(["all"], corpus, warm_cfg)
    plain = verify_many(["all"], corpus, EngineConfig(max_order=40))
    mismatch = [tid for tid in first
                if first[tid].to_json() != second[tid].to_json()
                or first[tid].to_json() != plain[tid].to_json()]
    _announce("6 determinism", not mismatch,
              f"{len(first)} reports byte-identical cold/warm/no-cache"
              + (f" mismatches={mismatch}" if mismatch else ""))


def test_criterion_7_structural_invariants(full_run):
    problems = (full_run.invariant_failures + full_run.sylow_failures
                + full_run.quotient_failures)
    _announce("7 structural invariants", not problems,
              f"{len(full_run.corpus)} groups checked"
              + (f" failures={problems[:5]}" if problems else ""))
