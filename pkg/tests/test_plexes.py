"""Selections: regularity, search/count, cycles, and group constructions."""

import pytest

from loopplex import (
    CellSelection,
    RegularityProfile,
    associator_subloop,
    builtin,
    count_selections,
    cycle_decompose_regular,
    find_selection,
    is_regular,
    matches_kind,
    regular_set_from_unit_product,
    translate_partition,
    transversal_from_full_product,
)
from loopplex.errors import (
    ContiguousUnitSubsequence,
    NotAGroup,
    NotRegular,
    NotRegularRowTransversal,
    ProductNotIdentity,
)

from oracles import (
    brute_all_selections,
    brute_kplex_count,
    brute_regular_row_kplex_count,
    brute_regular_row_transversal_count,
    brute_transversal_count,
)

# the bracketed cells of the order-6 counterexample figure, 0-based
FIG1_BRACKETED = [(0, 0), (1, 3), (2, 2), (3, 0), (4, 5), (5, 0)]


# -- regularity ----------------------------------------------------------------


def test_bracketed_selection_is_regular(fig1):
    sel = CellSelection.from_cells(fig1, FIG1_BRACKETED)
    assert is_regular(fig1, sel)
    assert matches_kind(fig1, sel, "regular_row_k_plex", 1)


def test_empty_selection_is_regular(fig1):
    assert is_regular(fig1, CellSelection(()))


def test_whole_table_is_regular(fig1):
    cells = [(r, c) for r in range(6) for c in range(6)]
    sel = CellSelection.from_cells(fig1, cells)
    assert is_regular(fig1, sel)
    assert matches_kind(fig1, sel, "k_plex", 6)


def test_regularity_profile(fig1):
    sel = CellSelection.from_cells(fig1, FIG1_BRACKETED)
    profile = RegularityProfile.of(fig1, sel)
    assert profile.row_counts == (1,) * 6
    assert profile.column_counts == profile.entry_counts


def test_selection_validation(fig1):
    with pytest.raises(ValueError):
        CellSelection.from_cells(fig1, [(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        CellSelection.from_cells(fig1, [(0, 1, 5)])  # entry of (0,1) is 1


# -- find ------------------------------------------------------------------------


def test_fig1_has_no_transversal(fig1):
    assert find_selection(fig1, "transversal") is None


def test_z4_has_no_transversal():
    assert find_selection(builtin("cyclic(4)"), "transversal") is None


def test_z3_transversal_found_and_validated():
    z3 = builtin("cyclic(3)")
    sel = find_selection(z3, "transversal")
    assert sel is not None
    assert matches_kind(z3, sel, "transversal")


def test_find_is_lexicographically_first():
    z3 = builtin("cyclic(3)")
    found = find_selection(z3, "transversal")
    all_sels = brute_all_selections(z3, "transversal", 1)
    assert found.cells == min(all_sels)
    z5 = builtin("cyclic(5)")
    found = find_selection(z5, "regular_row_k_plex", 1)
    all_sels = brute_all_selections(z5, "regular_row_k_plex", 1)
    assert found.cells == min(all_sels)


def test_row_k_plex_find(fig1):
    sel = find_selection(fig1, "row_k_plex", 2)
    assert matches_kind(fig1, sel, "row_k_plex", 2)
    assert find_selection(fig1, "row_k_plex", 7) is None


# -- count -----------------------------------------------------------------------


def test_fig1_counts(fig1):
    assert count_selections(fig1, "transversal") == 0
    assert count_selections(fig1, "regular_row_k_plex", 1) == 168


def test_small_cyclic_counts():
    assert count_selections(builtin("cyclic(3)"), "transversal") == 3
    assert count_selections(builtin("cyclic(5)"), "transversal") == 15
    assert count_selections(builtin("cyclic(7)"), "transversal") == 133


def test_counts_match_brute_force(small_loops):
    for Q in small_loops[::4]:
        assert count_selections(Q, "transversal") == brute_transversal_count(Q)
        assert count_selections(Q, "regular_row_k_plex", 1) == \
            brute_regular_row_transversal_count(Q)


def test_fig1_rrt_count_matches_brute_force(fig1):
    assert brute_regular_row_transversal_count(fig1) == 168


def test_kplex_counts_match_brute_force():
    z4 = builtin("cyclic(4)")
    assert count_selections(z4, "k_plex", 2) == brute_kplex_count(z4, 2)
    assert count_selections(z4, "regular_row_k_plex", 2) == \
        brute_regular_row_kplex_count(z4, 2)
    z5 = builtin("cyclic(5)")
    assert count_selections(z5, "k_plex", 2) == brute_kplex_count(z5, 2)


def test_transversal_equals_1plex(small_loops):
    for Q in small_loops[::6]:
        assert count_selections(Q, "transversal") == \
            count_selections(Q, "k_plex", 1)


def test_row_k_plex_closed_form(fig1):
    assert count_selections(fig1, "row_k_plex", 2) == 15**6
    assert count_selections(fig1, "row_k_plex", 7) == 0


# -- cycle decomposition ------------------------------------------------------------


def test_cycle_decomposition_of_bracketed_selection(fig1):
    sel = CellSelection.from_cells(fig1, FIG1_BRACKETED)
    cycles = cycle_decompose_regular(fig1, sel)
    got = sorted(c for cyc in cycles for c in cyc.cells)
    assert got == sorted(sel.cells)
    aq = associator_subloop(fig1)
    for cyc in cycles:
        assert is_regular(fig1, cyc.selection)
        assert cyc.nested_row_product(fig1) in aq


def test_cycle_decomposition_identity_cell(fig1):
    sel = CellSelection.from_cells(fig1, [(0, 3)])  # (1, y, y) cell
    cycles = cycle_decompose_regular(fig1, sel)
    assert len(cycles) == 1
    assert cycles[0].nested_row_product(fig1) == 0


def test_cycle_decomposition_requires_regular(fig1):
    sel = CellSelection.from_cells(fig1, [(1, 0)])  # column 1, entry 2
    with pytest.raises(NotRegular):
        cycle_decompose_regular(fig1, sel)


def test_cycle_products_across_small_loops(small_loops):
    for Q in small_loops:
        aq = associator_subloop(Q)
        for k in (1, 2):
            sel = find_selection(Q, "regular_row_k_plex", k)
            if sel is None:
                continue
            for cyc in cycle_decompose_regular(Q, sel):
                assert cyc.nested_row_product(Q) in aq


# -- constructions --------------------------------------------------------------------


def test_unit_product_construction_z3():
    z3 = builtin("cyclic(3)")
    sel = regular_set_from_unit_product(z3, [1, 2])
    assert sel.cells == ((1, 2, 0), (2, 0, 2))
    assert is_regular(z3, sel)


def test_unit_product_construction_identity():
    z3 = builtin("cyclic(3)")
    sel = regular_set_from_unit_product(z3, [0])
    assert sel.cells == ((0, 0, 0),)


def test_unit_product_construction_s3_reflection_twice():
    s3 = builtin("sym3")
    t = next(x for x in range(1, 6) if s3.mul(x, x) == 0)
    sel = regular_set_from_unit_product(s3, [t, t])
    assert sel.cells == tuple(sorted([(t, t, 0), (t, 0, t)]))
    assert is_regular(s3, sel)


def test_unit_product_construction_errors(fig2):
    z4 = builtin("cyclic(4)")
    with pytest.raises(NotAGroup):
        regular_set_from_unit_product(fig2, [1, 1])
    with pytest.raises(ProductNotIdentity):
        regular_set_from_unit_product(z4, [1, 2])
    with pytest.raises(ContiguousUnitSubsequence) as info:
        regular_set_from_unit_product(z4, [2, 2, 2, 2])
    assert (info.value.start, info.value.stop) == (0, 2)


def test_transversal_from_full_product_z3():
    z3 = builtin("cyclic(3)")
    sel = transversal_from_full_product(z3, [0, 1, 2])
    assert matches_kind(z3, sel, "regular_row_k_plex", 1)
    assert len(sel) == 3


def test_transversal_from_full_product_trivial():
    t = builtin("cyclic(1)")
    sel = transversal_from_full_product(t, [0])
    assert sel.cells == ((0, 0, 0),)


def test_transversal_from_full_product_klein4():
    from itertools import permutations

    v4 = builtin("klein4")
    # the product of all elements of the Klein group is the identity in
    # any order, so every ordering must work
    for ordering in permutations(range(4)):
        sel = transversal_from_full_product(v4, list(ordering))
        assert matches_kind(v4, sel, "regular_row_k_plex", 1)


def test_transversal_from_full_product_errors():
    z2 = builtin("cyclic(2)")
    with pytest.raises(ProductNotIdentity):
        transversal_from_full_product(z2, [0, 1])
    z3 = builtin("cyclic(3)")
    with pytest.raises(ValueError):
        transversal_from_full_product(z3, [0, 1, 1])


def test_translate_partition_z3():
    z3 = builtin("cyclic(3)")
    sel = transversal_from_full_product(z3, [0, 1, 2])
    parts = translate_partition(z3, sel)
    assert len(parts) == 3
    seen = set()
    for part in parts:
        assert matches_kind(z3, part, "regular_row_k_plex", 1)
        seen.update((r, c) for r, c, _ in part)
    assert len(seen) == 9


def test_translate_partition_klein4():
    v4 = builtin("klein4")
    sel = transversal_from_full_product(v4, [0, 1, 2, 3])
    parts = translate_partition(v4, sel)
    assert len(parts) == 4
    seen = {(r, c) for part in parts for r, c, _ in part}
    assert len(seen) == 16


def test_translate_partition_trivial():
    t = builtin("cyclic(1)")
    parts = translate_partition(t, CellSelection.from_cells(t, [(0, 0)]))
    assert len(parts) == 1
    assert parts[0].cells == ((0, 0, 0),)


def test_translate_partition_errors(fig1):
    z3 = builtin("cyclic(3)")
    with pytest.raises(NotRegularRowTransversal):
        translate_partition(z3, CellSelection.from_cells(z3, [(0, 0)]))
    bracketed = CellSelection.from_cells(fig1, FIG1_BRACKETED)
    with pytest.raises(NotAGroup):
        translate_partition(fig1, bracketed)
