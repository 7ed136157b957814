"""Parsing, builtins, enumeration, canonical forms, sweeps."""

import json

import pytest

from loopplex import (
    LoopTable,
    Perm,
    analyze_loop,
    builtin,
    canonical_form,
    canonical_id,
    enumerate_loops,
    is_isomorphic,
    parse_table,
    run_sweep,
    serialize_table,
)
from loopplex.catalog import FIG1_ROWS, FIG2_ROWS
from loopplex.errors import BudgetExceeded, ParseError, UnknownName


# -- parsing ---------------------------------------------------------------------


def test_parse_fig1_text():
    text = "\n".join(" ".join(str(v) for v in row) for row in FIG1_ROWS)
    Q = parse_table(text)
    assert Q.n == 6
    assert Q.table == builtin("fig1").table


def test_parse_with_comments_and_header():
    text = "# a loop\n3\n# body\n1 2 3\n2 3 1\n3 1 2\n"
    Q = parse_table(text)
    assert Q.n == 3
    assert Q.table == builtin("cyclic(3)").table


def test_parse_trivial():
    assert parse_table("1").n == 1


def test_parse_round_trip(fig2):
    assert parse_table(serialize_table(fig2)).table == fig2.table
    for name in ("cyclic(4)", "sym3", "quaternion8"):
        Q = builtin(name)
        assert parse_table(serialize_table(Q)).table == Q.table


def test_parse_error_positions():
    with pytest.raises(ParseError) as info:
        parse_table("1 2\n2 x\n")
    assert info.value.line == 2 and info.value.column == 2

    with pytest.raises(ParseError) as info:
        parse_table("1 2\n2 2\n")
    assert info.value.line == 2

    with pytest.raises(ParseError) as info:
        parse_table("1 1\n2 2\n")
    assert info.value.line == 1

    with pytest.raises(ParseError) as info:
        parse_table("1 2\n2 3\n")  # symbol out of range
    assert info.value.line == 2 and info.value.column == 2

    with pytest.raises(ParseError):
        parse_table("# only comments\n")

    with pytest.raises(ParseError):
        parse_table("1 2 3\n2 3 1\n")  # wrong row count vs width


# -- builtins ---------------------------------------------------------------------


def test_builtin_fig_goldens():
    fig1 = builtin("fig1")
    assert tuple(s + 1 for s in fig1.table[4]) == (5, 3, 6, 2, 4, 1)
    fig2 = builtin("fig2")
    assert tuple(s + 1 for s in fig2.table[3]) == (4, 3, 5, 1, 2)


def test_builtin_cyclic3():
    assert builtin("cyclic(3)").table == ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def test_builtin_groups_are_groups(group_catalog):
    for name, G in group_catalog:
        assert G.is_group(), name


def test_builtin_group_identities():
    assert builtin("klein4").table == builtin("abelian(2,2)").table
    assert is_isomorphic(builtin("sym3"), builtin("dihedral(3)")) is not None
    assert builtin("elementary_abelian(2,3)").n == 8
    q8 = builtin("quaternion8")
    involutions = [x for x in range(1, 8) if q8.mul(x, x) == 0]
    assert len(involutions) == 1  # only -1 squares to 1


def test_builtin_unknown_names():
    for bad in ("nope", "cyclic", "cyclic(0)", "fig1(3)", "abelian()"):
        with pytest.raises(UnknownName):
            builtin(bad)


# -- enumeration ---------------------------------------------------------------------


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_loops(1)) == 1
    assert sum(1 for _ in enumerate_loops(2)) == 1
    assert sum(1 for _ in enumerate_loops(3)) == 1
    assert sum(1 for _ in enumerate_loops(4)) == 4
    assert sum(1 for _ in enumerate_loops(5)) == 56


def test_enumeration_up_to_iso_counts():
    assert sum(1 for _ in enumerate_loops(4, up_to_iso=True)) == 2
    order5 = list(enumerate_loops(5, up_to_iso=True))
    assert len(order5) == 6
    assert sum(1 for Q in order5 if not Q.is_group()) == 5


def test_enumeration_emits_valid_normalized_tables():
    for Q in enumerate_loops(4):
        LoopTable(Q.table)  # full validation


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        next(enumerate_loops(7))


def test_enumeration_deterministic():
    first = next(enumerate_loops(5))
    again = next(enumerate_loops(5))
    assert first.table == again.table


# -- canonical forms ---------------------------------------------------------------------


def test_canonical_form_invariant_under_relabeling(fig2):
    base = canonical_form(fig2)
    for tail in ((2, 1, 3, 4), (4, 3, 2, 1), (3, 4, 1, 2)):
        relabeled = fig2.relabel(Perm((0,) + tail))
        assert canonical_form(relabeled) == base


def test_canonical_form_separates_groups():
    assert canonical_form(builtin("cyclic(4)")) != canonical_form(builtin("klein4"))


def test_canonical_form_equality_is_isomorphism(order5_classes):
    forms = [canonical_form(Q) for Q in order5_classes]
    assert len(set(forms)) == 6
    for i, Qi in enumerate(order5_classes):
        for j, Qj in enumerate(order5_classes):
            same = canonical_form(Qi) == canonical_form(Qj)
            assert same == (is_isomorphic(Qi, Qj) is not None), (i, j)


def test_canonical_id_stable(fig1):
    assert canonical_id(fig1) == canonical_id(builtin("fig1"))
    assert canonical_id(fig1).startswith("6-")


# -- sweeps ----------------------------------------------------------------------------------


def test_sweep_order4_schema():
    records = run_sweep([4])
    assert len(records) == 4
    payload = json.loads(records[0].to_json())
    assert set(payload) == {"id", "n", "group", "aq", "dq", "p1", "cond",
                            "counts", "suite"}
    assert set(payload["cond"]) == {"A", "B", "C"}
    assert set(payload["counts"]) == {"transversal", "rrt"}


def test_sweep_order5_census():
    records = run_sweep([5], up_to_iso=True)
    assert len(records) == 6
    special = [r for r in records if len(r.p1) == 4 and r.dq == 5]
    assert len(special) == 3
    assert all(r.suite == "pass" for r in records)


def test_sweep_small_orders_have_no_bc_counterexample():
    records = run_sweep([1, 2, 3, 4, 5])
    assert len(records) == 63
    assert all(not (r.cond[1] and r.cond[2] and not r.cond[0]) for r in records)
    assert all(r.cond[1] == r.cond[2] for r in records)


def test_sweep_workers_deterministic():
    solo = run_sweep([4, 5], up_to_iso=True)
    multi = run_sweep([4, 5], up_to_iso=True, workers=2)
    assert [r.to_json() for r in solo] == [r.to_json() for r in multi]


def test_analyze_loop_fig1(fig1):
    record = analyze_loop(fig1)
    assert record.counts == (0, 168)
    assert record.cond == (False, True, True)
    assert not record.group
    assert record.n == 6


def test_sweep_all_checks_small():
    records = run_sweep([1, 2, 3, 4], checks="all")
    assert all(r.suite == "pass" for r in records)
