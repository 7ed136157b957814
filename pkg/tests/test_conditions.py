"""Condition deciders, normal-subloop enumeration, Sylow status, reports."""

import pytest

from loopplex import (
    ElementSet,
    associator_subloop,
    builtin,
    check_A,
    check_B_fast,
    check_B_oracle,
    check_C,
    enumerate_normal_subloops,
    evaluate,
    expression_leaves,
    find_B_violation,
    full_product_mask,
    hp_report,
    is_normal,
    matches_kind,
    quotient,
    sylow2_status,
    verify_theorems,
)
from loopplex.errors import BudgetExceeded, NotAGroup

from oracles import brute_normal_subloops


# -- condition (A) -------------------------------------------------------------


def test_check_a(fig1):
    ok, sel = check_A(fig1)
    assert not ok and sel is None
    ok, sel = check_A(builtin("cyclic(3)"))
    assert ok and matches_kind(builtin("cyclic(3)"), sel, "transversal")
    ok, _ = check_A(builtin("cyclic(4)"))
    assert not ok


# -- condition (B) -------------------------------------------------------------


def test_check_b_fast_goldens(fig1, fig2):
    assert check_B_fast(fig1)
    assert check_B_fast(fig2)
    assert check_B_fast(builtin("klein4"))
    for name in ("cyclic(2)", "cyclic(4)", "cyclic(8)", "cyclic(6)", "sym3"):
        assert not check_B_fast(builtin(name)), name


def test_check_b_odd_order_loops_always_pass(small_loops):
    for Q in small_loops:
        if Q.n % 2 == 1:
            assert check_B_fast(Q)


def test_b_fast_agrees_with_oracle(small_loops, group_catalog):
    for Q in small_loops:
        assert check_B_fast(Q) == check_B_oracle(Q)
    for name, G in group_catalog:
        assert check_B_fast(G) == check_B_oracle(G), name


def test_find_b_violation_z6():
    z6 = builtin("cyclic(6)")
    N = find_B_violation(z6)
    assert N is not None and len(N) == 3
    assert is_normal(z6, N)
    Qbar, _ = quotient(z6, N)
    assert Qbar.n == 2


def test_find_b_violation_none_for_klein4():
    assert find_B_violation(builtin("klein4")) is None


# -- normal subloop enumeration ---------------------------------------------------


def test_enumerate_normal_subloops_trivial():
    out = enumerate_normal_subloops(builtin("cyclic(1)"))
    assert len(out) == 1 and out[0].members() == (0,)


def test_enumerate_normal_subloops_s3():
    sizes = sorted(len(N) for N in enumerate_normal_subloops(builtin("sym3")))
    assert sizes == [1, 3, 6]


def test_enumerate_normal_subloops_fig2_simple(fig2):
    sizes = sorted(len(N) for N in enumerate_normal_subloops(fig2))
    assert sizes == [1, 5]


def test_enumerate_normal_subloops_matches_brute_force(small_loops, fig1):
    for Q in list(small_loops) + [fig1]:
        got = sorted(N.mask for N in enumerate_normal_subloops(Q))
        assert got == sorted(brute_normal_subloops(Q))


def test_enumerate_normal_subloops_budget(fig1):
    with pytest.raises(BudgetExceeded):
        enumerate_normal_subloops(fig1, max_order=4)


# -- condition (C) ------------------------------------------------------------------


def test_check_c_goldens(fig1):
    ok, wit = check_C(fig1)
    assert ok
    element, expr = wit
    assert element in associator_subloop(fig1)
    assert evaluate(fig1, expr) == element
    assert sorted(expression_leaves(expr)) == list(range(6))
    ok, wit = check_C(builtin("cyclic(2)"))
    assert not ok and wit is None


def test_check_c_groups_reduce_to_identity_membership(group_catalog):
    for name, G in group_catalog:
        ok, _ = check_C(G)
        assert ok == (full_product_mask(G, 1) & 1 == 1), name


# -- Sylow status ---------------------------------------------------------------------


def test_sylow2_status_goldens():
    assert sylow2_status(builtin("cyclic(3)")) == "trivial"
    assert sylow2_status(builtin("cyclic(7)")) == "trivial"
    assert sylow2_status(builtin("sym3")) == "cyclic"
    assert sylow2_status(builtin("cyclic(8)")) == "cyclic"
    assert sylow2_status(builtin("cyclic(12)")) == "cyclic"
    assert sylow2_status(builtin("klein4")) == "noncyclic"
    assert sylow2_status(builtin("dihedral(4)")) == "noncyclic"
    assert sylow2_status(builtin("quaternion8")) == "noncyclic"
    assert sylow2_status(builtin("abelian(2,4)")) == "noncyclic"
    assert sylow2_status(builtin("dihedral(6)")) == "noncyclic"


def test_sylow2_requires_group(fig2):
    with pytest.raises(NotAGroup):
        sylow2_status(fig2)


def test_sylow2_budget():
    with pytest.raises(BudgetExceeded):
        sylow2_status(builtin("cyclic(25)"), max_order=24)


# -- reports ---------------------------------------------------------------------------


def test_hp_report_fig1(fig1):
    report = hp_report(fig1)
    assert (report.a, report.b, report.c) == (False, True, True)
    assert report.is_bc_counterexample
    assert report.b_oracle_agrees
    assert report.associator_size == 6 and report.derived_size == 6
    assert report.full_products == tuple(range(6))


def test_hp_report_z3():
    report = hp_report(builtin("cyclic(3)"))
    assert (report.a, report.b, report.c) == (True, True, True)
    assert not report.is_bc_counterexample
    assert matches_kind(builtin("cyclic(3)"), report.transversal, "transversal")


def test_hp_report_z4():
    report = hp_report(builtin("cyclic(4)"))
    assert (report.a, report.b, report.c) == (False, False, False)
    assert report.full_products == (2,)
    assert report.b_violation is not None
    assert len(report.b_violation) == 1  # the trivial subloop: Z4 itself is Z_{2^2}


def test_hp_report_consistency_across_small_loops(small_loops):
    for Q in small_loops:
        report = hp_report(Q, with_oracle=False)
        assert report.b == report.c
        if report.a:
            assert report.c


# -- theorem suite ------------------------------------------------------------------------


def test_suite_passes_on_small_loops(small_loops):
    for Q in small_loops[::4]:
        results = verify_theorems(Q, word_len=3)
        bad = [r for r in results if not r.ok]
        assert not bad, (Q.table, bad)


def test_suite_passes_on_figures(fig1, fig2):
    for Q in (fig1, fig2):
        results = verify_theorems(Q)
        assert all(r.ok for r in results)
        assert not any(r.skipped for r in results)


def test_suite_four_way_equivalence_claim(group_catalog):
    for name, G in group_catalog:
        results = verify_theorems(G, word_len=2)
        claims = {r.claim: r for r in results}
        four = claims["group.four-way-equivalence"]
        assert four.passed, (name, four.details)
