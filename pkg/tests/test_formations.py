import random

import pytest

from fgt import groups
from fgt.dsl import build_from_expr
from fgt.errors import ResidualNotWitnessed, UnknownFormation
from fgt.formations import (
    ChiefFactor,
    Formation,
    chief_series,
    f_hypercentre,
    f_hypercentre_via_join,
    f_residual,
    factor_centralizer,
    factor_semidirect,
    formation,
    is_f_central,
    is_f_hypercentral,
    is_in_class,
    standard_formations,
    u_centrality_shortcut,
)
from fgt.quotients import quotient
from fgt.subgroups import normal_subgroups, trivial_subgroup, whole_subgroup


def test_chief_series_s4(s4):
    series = chief_series(s4)
    assert series.factor_orders() == [4, 3, 2]
    assert [h.order for h in series.subgroups] == [1, 4, 12, 24]


def test_chief_series_simple(a5):
    assert chief_series(a5).factor_orders() == [60]


def test_chief_series_c6_lex_rule():
    c6 = groups.cyclic(6)
    # both refinements are valid; the lexicographic rule picks the one
    # through {0, 3}, the order-2 subgroup
    series = chief_series(c6)
    assert series.factor_orders() == [2, 3]
    assert series.subgroups[1].members() == [0, 3]


def test_chief_series_between(s4):
    a4_sub = normal_subgroups(s4)[2]
    series = chief_series(s4, ceiling=a4_sub)
    assert series.factor_orders() == [4, 3]
    upper = chief_series(s4, floor=a4_sub)
    assert upper.factor_orders() == [2]


@pytest.mark.parametrize("expr", ["S(4)", "D(12)", "A(4)", "C(12)", "Q8",
                                  "SL23", "D(8)xC(2)"])
def test_series_independent_verdicts(expr):
    g = build_from_expr(expr)
    forms = standard_formations(g)
    n_subs = normal_subgroups(g)
    for seed in (1, 7, 42):
        rng = random.Random(seed)
        for form in forms:
            for n in n_subs:
                assert is_f_hypercentral(g, n, form) == \
                    is_f_hypercentral(g, n, form, rng=rng)


def test_factor_semidirect_s3(s3):
    a3 = normal_subgroups(s3)[1]
    f = ChiefFactor(trivial_subgroup(s3), a3)
    assert factor_centralizer(s3, f).mask == a3.mask
    sd = factor_semidirect(s3, f)
    assert sd.order == 6
    assert not sd.is_abelian()
    assert is_f_central(s3, f, formation("U"))


def test_factor_semidirect_a4(a4):
    v4 = normal_subgroups(a4)[1]
    f = ChiefFactor(trivial_subgroup(a4), v4)
    sd = factor_semidirect(a4, f)
    assert sd.order == 12
    assert [h.order for h in normal_subgroups(sd)] == [1, 4, 12]
    assert not is_f_central(a4, f, formation("U"))


def test_factor_semidirect_central_factor():
    c6 = groups.cyclic(6)
    series = chief_series(c6)
    f = series.factors[0]
    sd = factor_semidirect(c6, f)
    assert sd.order == f.order  # trivial acting group
    assert sd.is_abelian()


def test_u_shortcut_agrees(s4, a4, sl23, d12):
    u = formation("U")
    for g in (s4, a4, sl23, d12):
        for f in chief_series(g).factors:
            assert is_f_central(g, f, u) == u_centrality_shortcut(f)


def test_hypercentre_values(s3, a4):
    assert f_hypercentre(s3, formation("U")).order == 6
    assert f_hypercentre(a4, formation("U")).order == 1
    assert f_hypercentre(a4, formation("U_p:2")).order == 1
    c1 = groups.cyclic(1)
    assert f_hypercentre(c1, formation("U")).order == 1


def test_hypercentre_join_equals_greedy(s4, a4, d12, q8, sl23):
    for g in (s4, a4, d12, q8, sl23):
        for form in standard_formations(g, ("U", "U_p", "N_p")):
            assert f_hypercentre(g, form).mask == \
                f_hypercentre_via_join(g, form).mask


def test_hypercentre_full_iff_member(s4, a4, d12, q8, sl23):
    for g in (s4, a4, d12, q8, sl23):
        for form in standard_formations(g):
            assert (f_hypercentre(g, form).order == g.order) == form.member(g)


def test_residuals(s3, s4, a4):
    u = formation("U")
    res = f_residual(s4, u)
    assert res.order == 4
    assert res.mask == normal_subgroups(s4)[1].mask
    assert f_residual(a4, formation("N_p:2")).order == 4
    assert f_residual(s3, u).order == 1


def test_residual_minimality(s4, d12, sl23):
    for g in (s4, d12, sl23):
        for form in standard_formations(g):
            res = f_residual(g, form)
            assert form.member(quotient(g, res).target)
            for n in normal_subgroups(g):
                if form.member(quotient(g, n).target):
                    assert res.mask & n.mask == res.mask


def test_residual_not_witnessed():
    # "cyclic groups" is not subdirect-closed: both C2 quotients of V4 are
    # cyclic but V4 itself is not
    fake = Formation("cyclictest", "cyclic groups",
                     lambda g: any(o == g.order for o in g.elem_order),
                     saturated=False, s_closed=True, contains_U=False)
    v4 = build_from_expr("C(2)xC(2)")
    with pytest.raises(ResidualNotWitnessed):
        f_residual(v4, fake)


def test_class_predicates(s3, s4, a4, a5, q8):
    assert is_in_class(s3, "p_nilpotent", p=2)
    assert not is_in_class(s3, "p_nilpotent", p=3)
    assert not is_in_class(a4, "supersoluble")
    assert is_in_class(s3, "supersoluble")
    assert not is_in_class(a5, "soluble")
    assert is_in_class(s4, "soluble")
    assert is_in_class(q8, "nilpotent")
    assert not is_in_class(s4, "nilpotent")
    assert is_in_class(s3, "sylow_tower_supersoluble")
    assert not is_in_class(s4, "sylow_tower_supersoluble")
    assert is_in_class(a5, "p_soluble", p=7)
    assert not is_in_class(a5, "p_soluble", p=2)
    assert is_in_class(s3, "pi_closed", pi={3})
    assert not is_in_class(s3, "pi_closed", pi={2})
    assert is_in_class(s3, "C_pi", pi={2})
    assert is_in_class(a5, "C_pi", pi={2, 3})
    assert is_in_class(s4, "p_supersoluble", p=3)
    assert not is_in_class(s4, "p_supersoluble", p=2)


def test_cyclic_in_every_class():
    g = groups.cyclic(12)
    assert is_in_class(g, "nilpotent")
    assert is_in_class(g, "soluble")
    assert is_in_class(g, "supersoluble")
    assert is_in_class(g, "sylow_tower_supersoluble")
    for p in (2, 3, 5):
        assert is_in_class(g, "p_nilpotent", p=p)
        assert is_in_class(g, "p_supersoluble", p=p)
        assert is_in_class(g, "p_soluble", p=p)
    assert is_in_class(g, "pi_closed", pi={2})
    assert is_in_class(g, "C_pi", pi={3})


def test_trivial_group_everywhere():
    c1 = groups.cyclic(1)
    assert is_in_class(c1, "supersoluble")
    assert is_in_class(c1, "p_nilpotent", p=5)
    for form in standard_formations(c1):
        assert form.member(c1)


def test_registry():
    u2 = formation("U_p:2")
    assert u2.saturated and u2.s_closed and u2.contains_U
    n3 = formation("N_p:3")
    assert n3.saturated and n3.s_closed and not n3.contains_U
    assert formation("U") is formation("U")
    with pytest.raises(UnknownFormation):
        formation("X")
    with pytest.raises(UnknownFormation):
        formation("U_p:4")


def test_membership_quotient_closed(s4, d12, sl23):
    # spot check of homomorph closure on the registered classes
    for g in (s4, d12, sl23):
        for form in standard_formations(g):
            if not form.member(g):
                continue
            for n in normal_subgroups(g):
                assert form.member(quotient(g, n).target)


def test_membership_isomorphism_invariant(s3):
    rng = random.Random(3)
    perm = [0] + rng.sample(range(1, 6), 5)
    inv = [perm.index(i) for i in range(6)]
    table = [[inv[s3.table[perm[a]][perm[b]]] for b in range(6)]
             for a in range(6)]
    h = groups.build_from_table(table)
    for form in standard_formations(s3):
        assert form.member(h) == form.member(s3)


def test_residual_quotient_membership_bound(s4):
    # if G/N lies in the class then the residual sits inside N
    u = formation("U")
    res = f_residual(s4, u)
    for n in normal_subgroups(s4):
        if u.member(quotient(s4, n).target):
            assert res.mask & n.mask == res.mask
