"""Full k-product sets: DP against the naive oracle, witnesses, P^omega."""

import pytest
from hypothesis import given, settings, strategies as st

from loopplex import (
    ElementSet,
    Leaf,
    Multiset,
    Node,
    associator_subloop,
    builtin,
    coset_profile,
    derived_subloop,
    evaluate,
    expression_leaves,
    full_product_mask,
    p_omega,
    product_set,
    product_set_of_multiset,
    witness,
)
from loopplex.errors import EmptyMultiset, KTooLargeForBudget, WitnessesDisabled

from oracles import naive_product_set


def members(ps):
    return ps.achievable.members()


# -- golden values ---------------------------------------------------------------


def test_fig2_full_products(fig2):
    assert members(product_set(fig2, 1)) == (1, 2, 3, 4)  # symbols 2..5


def test_fig1_full_products(fig1):
    assert members(product_set(fig1, 1)) == (0, 1, 2, 3, 4, 5)


def test_singleton_multiset(fig2):
    M = Multiset.from_elements(5, [3])
    assert members(product_set_of_multiset(fig2, M)) == (3,)


def test_z3_full_product_is_identity():
    assert members(product_set(builtin("cyclic(3)"), 1)) == (0,)


def test_z2_full_product():
    assert members(product_set(builtin("cyclic(2)"), 1)) == (1,)


def test_identity_in_p2(small_loops):
    for Q in small_loops:
        assert 0 in product_set(Q, 2).achievable


def test_empty_multiset_rejected(fig2):
    with pytest.raises(EmptyMultiset):
        product_set_of_multiset(fig2, Multiset((0,) * 5))


def test_budget_guard():
    with pytest.raises(KTooLargeForBudget):
        product_set(builtin("fig1"), 3, max_states=100)


# -- oracle equivalence ------------------------------------------------------------


def test_dp_matches_naive_full_products(small_loops):
    for Q in small_loops:
        if Q.n > 4:
            continue
        got = set(members(product_set(Q, 1)))
        assert got == naive_product_set(Q, tuple(range(Q.n)))


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_dp_matches_naive_on_multisets(small_loops, data):
    Q = data.draw(st.sampled_from([q for q in small_loops if q.n >= 2]))
    size = data.draw(st.integers(1, 5))
    elems = tuple(data.draw(st.integers(0, Q.n - 1)) for _ in range(size))
    M = Multiset.from_elements(Q.n, elems)
    got = set(members(product_set_of_multiset(Q, M)))
    assert got == naive_product_set(Q, elems)


# -- witnesses ----------------------------------------------------------------------


def test_witness_reconstruction(fig2):
    ps = product_set(fig2, 1, witnesses=True)
    for target in range(5):
        expr = witness(ps, target)
        if target == 0:
            assert expr is None  # identity is not a full product here
        else:
            assert evaluate(fig2, expr) == target
            assert sorted(expression_leaves(expr)) == [0, 1, 2, 3, 4]


def test_witness_singleton(fig2):
    ps = product_set_of_multiset(fig2, Multiset.from_elements(5, [2]),
                                 witnesses=True)
    assert witness(ps, 2) == Leaf(2)


def test_witness_structure(fig1):
    ps = product_set(fig1, 1, witnesses=True)
    expr = witness(ps, 0)
    assert isinstance(expr, Node)
    assert evaluate(fig1, expr) == 0


def test_witnesses_disabled(fig2):
    ps = product_set(fig2, 1)
    with pytest.raises(WitnessesDisabled):
        witness(ps, 1)


# -- coset profiles ------------------------------------------------------------------


def test_group_profile_is_full_coset(group_catalog):
    for name, G in group_catalog:
        profile = coset_profile(G, product_set(G, 1))
        assert profile.covers_all, name
        assert len(profile.derived_coset) == profile.derived_size, name
        # for groups every A(Q)-coset is a single element
        assert profile.associator_size == 1, name


def test_fig1_profile(fig1):
    profile = coset_profile(fig1, product_set(fig1, 1))
    assert profile.derived_coset == tuple(range(6))
    assert profile.covers_all


def test_p2_lands_in_derived_subloop(small_loops):
    for Q in small_loops:
        profile = coset_profile(Q, product_set(Q, 2))
        assert set(profile.derived_coset) == set(derived_subloop(Q).members())


# -- lemma properties over small loops -------------------------------------------------


def test_pk_lemma_parts(small_loops):
    for Q in small_loops:
        n = Q.n
        pk = {k: full_product_mask(Q, k) for k in (1, 2, 3)}
        # products compose into higher levels
        for i, j in ((1, 1), (1, 2), (2, 1)):
            for a in range(n):
                if not pk[i] >> a & 1:
                    continue
                for b in range(n):
                    if pk[j] >> b & 1:
                        assert pk[i + j] >> Q.mul(a, b) & 1
        assert pk[1].bit_count() <= pk[2].bit_count() <= pk[3].bit_count()
        assert pk[1] & ~pk[3] == 0
        dq = derived_subloop(Q)
        assert pk[2] & ~dq.mask == 0
        # P(Q) sits in a coset aQ' whose square is the identity coset
        a = min(x for x in range(n) if pk[1] >> x & 1)
        assert Q.mul(a, a) in dq


# -- P^omega ------------------------------------------------------------------------------


def test_p_omega_z3():
    om = p_omega(builtin("cyclic(3)"))
    assert om.achievable.members() == (0,)


def test_p_omega_fig2(fig2):
    om = p_omega(fig2)
    assert om.achievable.members() == (0, 1, 2, 3, 4)


def test_p_omega_fig1(fig1):
    om = p_omega(fig1)
    assert om.k == 1
    assert len(om.achievable) == 6


def test_p_omega_groups_union_of_cosets():
    """For a group, P^omega is G' or G' plus the coset holding P(G)."""
    for name in ("cyclic(2)", "cyclic(3)", "cyclic(4)", "cyclic(5)",
                 "cyclic(6)", "klein4", "sym3"):
        G = builtin(name)
        om = p_omega(G)
        dq = derived_subloop(G)
        p1 = full_product_mask(G, 1)
        expected = dq.mask
        if p1 & ~dq.mask:
            a = min(x for x in range(G.n) if p1 >> x & 1)
            coset = 0
            for s in dq:
                coset |= 1 << G.mul(a, s)
            expected |= coset
        assert om.achievable.mask == expected, name


def test_p_omega_stabilization_consistency(small_loops):
    for Q in small_loops[::5]:
        om = p_omega(Q)
        k = om.k
        masks = {j: full_product_mask(Q, j) for j in range(1, k + 4)}
        assert masks[k] == masks[k + 2]
        assert masks[k + 1] == masks[k + 3]
        assert om.achievable.mask == masks[k] | masks[k + 1]
