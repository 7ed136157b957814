"""Deciders for the transversal/normal-subloop/product conditions.

For a finite loop Q the three conditions under study are:

* (A) the multiplication table of Q has a transversal,
* (B) no normal subloop N of odd size has Q/N cyclic of 2-power order,
* (C) the associator subloop A(Q) meets the full product set P(Q).

(B) and (C) are equivalent and (A) implies (C) in every loop; the report
machinery asserts both on every input and treats a violation as a fatal
inconsistency. (B) and (C) together do not imply (A); the smallest
counterexamples have order 6 and the report flags them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    ElementSet,
    Letter,
    LoopTable,
    _cosets_of_mask,
    associator_subloop,
    derived_subloop,
    evaluate_word,
    induced_map,
    is_normal,
    normal_closure,
    quotient,
    subloop_closure,
)
from .errors import BudgetExceeded, InconsistencyDetected, NotAGroup
from .plexes import (
    CellSelection,
    cycle_decompose_regular,
    find_selection,
    matches_kind,
    translate_partition,
    transversal_from_full_product,
)
from .products import (
    Expression,
    coset_profile,
    expression_leaves,
    full_product_mask,
    p_omega,
    product_set,
    witness,
)


def check_A(Q: LoopTable) -> tuple[bool, Optional[CellSelection]]:
    """Transversal existence, with a validated witness when one exists."""
    sel = find_selection(Q, "transversal")
    return sel is not None, sel


def check_B_fast(Q: LoopTable) -> bool:
    """Condition (B) via the abelian quotient Q/Q'.

    (B) fails exactly when |Q'| is odd and the product of all elements
    of the abelian group Q/Q' is not the identity; the latter happens
    exactly when that group has a nontrivial cyclic Sylow 2-subgroup,
    which lifts to an odd normal subloop with cyclic 2-power quotient.
    """
    dq = derived_subloop(Q)
    if len(dq) % 2 == 0:
        return True
    G, _ = quotient(Q, dq)
    acc = 0
    for x in range(1, G.n):
        acc = G.mul(acc, x)
    return acc == 0


def find_B_violation(Q: LoopTable, max_order: int = 12) -> Optional[ElementSet]:
    """An odd normal subloop with cyclic 2-power quotient, if any exists."""
    for N in enumerate_normal_subloops(Q, max_order=max_order):
        if len(N) % 2 == 0 or len(N) == Q.n:
            continue
        m = Q.n // len(N)
        if m & (m - 1) or m < 2:
            continue
        G, _ = quotient(Q, N)
        if G.is_group() and _has_element_of_order(G, m):
            return N
    return None


def check_B_oracle(Q: LoopTable, max_order: int = 12) -> bool:
    """Condition (B) by brute force over all normal subloops."""
    return find_B_violation(Q, max_order=max_order) is None


def check_C(Q: LoopTable) -> tuple[bool, Optional[tuple[int, Expression]]]:
    """Does P(Q) meet A(Q)? Returns the smallest common element with a witness."""
    aq = associator_subloop(Q)
    ps = product_set(Q, 1, witnesses=True)
    common = aq & ps.achievable
    if not common:
        return False, None
    element = min(common)
    expr = witness(ps, element)
    return True, (element, expr)


def enumerate_normal_subloops(Q: LoopTable, max_order: int = 12) -> list[ElementSet]:
    """All normal subloops, as the join closure of singleton normal closures.

    Every normal subloop is the join of the normal closures of its own
    elements, so closing the singleton closures under pairwise joins is
    complete. Polynomial in the number of normal subloops.
    """
    if Q.n > max_order:
        raise BudgetExceeded(f"normal subloop enumeration capped at order {max_order}")
    masks = {1}
    for x in range(1, Q.n):
        masks.add(normal_closure(Q, ElementSet.from_elements(Q.n, [x])).mask)
    while True:
        fresh = set()
        for a in masks:
            for b in masks:
                if a < b and (a | b) not in masks:
                    joined = normal_closure(Q, ElementSet(Q.n, a | b)).mask
                    if joined not in masks:
                        fresh.add(joined)
        if not fresh:
            break
        masks |= fresh
    out = [ElementSet(Q.n, m) for m in sorted(masks)]
    assert all(is_normal(Q, N) for N in out)
    return out


def _element_orders(G: LoopTable) -> list[int]:
    orders = [1] * G.n
    for x in range(1, G.n):
        acc = x
        k = 1
        while acc != 0:
            acc = G.mul(acc, x)
            k += 1
        orders[x] = k
    return orders


def _has_element_of_order(G: LoopTable, m: int) -> bool:
    return m in _element_orders(G)


def sylow2_status(G: LoopTable, max_order: int = 24) -> str:
    """'trivial', 'cyclic', or 'noncyclic' Sylow 2-subgroups of a group.

    Builds a maximal 2-subgroup by closure: starts from the cyclic
    subgroups generated by elements of 2-power order and repeatedly
    extends any found 2-subgroup by one more such element whenever the
    closure stays a 2-group. A proper 2-subgroup always extends inside
    its normalizer, so the greedy search reaches full Sylow size.
    """
    if not G.is_group():
        raise NotAGroup("Sylow subgroups are only computed for groups")
    if G.n > max_order:
        raise BudgetExceeded(f"Sylow search capped at order {max_order}")
    target = 1
    while G.n % (target * 2) == 0:
        target *= 2
    if target == 1:
        return "trivial"
    orders = _element_orders(G)
    two_elements = [x for x in range(1, G.n) if orders[x] & (orders[x] - 1) == 0]
    subgroups = {1}
    for x in two_elements:
        subgroups.add(subloop_closure(G, ElementSet.from_elements(G.n, [x])).mask)
    best = max(subgroups, key=lambda m: m.bit_count())
    while best.bit_count() < target:
        grown = set()
        for S in subgroups:
            for x in two_elements:
                if S >> x & 1:
                    continue
                T = subloop_closure(G, ElementSet(G.n, S | 1 << x)).mask
                size = T.bit_count()
                if size & (size - 1) == 0 and T not in subgroups:
                    grown.add(T)
        assert grown, "2-subgroup failed to extend below Sylow size"
        subgroups |= grown
        best = max(subgroups, key=lambda m: m.bit_count())
    sylow = ElementSet(G.n, best)
    if any(orders[x] == target for x in sylow):
        return "cyclic"
    return "noncyclic"


@dataclass(frozen=True)
class HPReport:
    """Per-loop verdicts for conditions (A), (B), (C) plus witnesses."""

    order: int
    a: bool
    b: bool
    c: bool
    transversal: Optional[CellSelection]
    b_violation: Optional[ElementSet]
    c_witness: Optional[tuple[int, Expression]]
    associator_size: int
    derived_size: int
    full_products: tuple[int, ...]
    b_oracle_agrees: Optional[bool]

    @property
    def is_bc_counterexample(self) -> bool:
        """True when the loop satisfies (B) and (C) but has no transversal."""
        return self.b and self.c and not self.a


def hp_report(Q: LoopTable, with_oracle: bool = True, oracle_max_order: int = 12) -> HPReport:
    """Run all three condition checks and assert the universal implications."""
    a, transversal = check_A(Q)
    b = check_B_fast(Q)
    c, c_wit = check_C(Q)
    if b != c:
        raise InconsistencyDetected(f"(B)={b} but (C)={c}; these are equivalent")
    if a and not c:
        raise InconsistencyDetected("(A) holds but (C) fails; (A) implies (C)")
    violation = None
    oracle_agrees = None
    if with_oracle and Q.n <= oracle_max_order:
        violation = find_B_violation(Q, max_order=oracle_max_order)
        oracle_agrees = (violation is None) == b
        if not oracle_agrees:
            raise InconsistencyDetected("fast (B) check disagrees with the enumeration oracle")
    ps1 = ElementSet(Q.n, full_product_mask(Q, 1))
    return HPReport(
        order=Q.n,
        a=a,
        b=b,
        c=c,
        transversal=transversal,
        b_violation=violation,
        c_witness=c_wit,
        associator_size=len(associator_subloop(Q)),
        derived_size=len(derived_subloop(Q)),
        full_products=ps1.members(),
        b_oracle_agrees=oracle_agrees,
    )


# -- theorem suite -----------------------------------------------------------


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    passed: bool
    details: str = ""
    skipped: bool = False

    @property
    def ok(self) -> bool:
        """Not a failure: either verified or explicitly skipped for budget."""
        return self.passed or self.skipped


def _claim(results: list, claim: str, passed: bool, details: str = "",
           skipped: bool = False) -> None:
    results.append(ClaimResult(claim, bool(passed), details, skipped))


def _mask_members(mask: int, n: int) -> list[int]:
    return [x for x in range(n) if mask >> x & 1]


def _mul_masks(Q: LoopTable, a: int, b: int) -> int:
    out = 0
    for x in _mask_members(a, Q.n):
        row = Q.table[x]
        for y in _mask_members(b, Q.n):
            out |= 1 << row[y]
    return out


def _word_alphabet(Q: LoopTable) -> list[Letter]:
    """Fixed documented alphabet: translations by the two smallest
    non-identity elements, on both sides, with both exponents."""
    if Q.n == 1:
        return [Letter("left", 0, 1)]
    a = 1
    b = 2 if Q.n > 2 else 1
    return [
        Letter("left", a, 1), Letter("left", b, -1),
        Letter("right", a, 1), Letter("right", b, -1),
        Letter("left", b, 1), Letter("right", a, -1),
    ]


def _words(alphabet, max_len: int):
    from itertools import product as iproduct

    for length in range(1, max_len + 1):
        yield from iproduct(alphabet, repeat=length)


def _check_induced_translation(Q: LoopTable, max_len: int) -> tuple[bool, str]:
    aq = associator_subloop(Q)
    dq = derived_subloop(Q)
    for N, left_only in ((aq, True), (dq, False)):
        Qbar, part = quotient(Q, N)
        alphabet = _word_alphabet(Q)
        if left_only:
            alphabet = [l for l in alphabet if l.side == "left"]
        for word in _words(alphabet, max_len):
            rho = evaluate_word(Q, word)
            induced = induced_map(Q, word, N)
            expected = Qbar.translation("left", part.index_of[rho(0)])
            if induced != expected:
                return False, f"word {word} fails on N of size {len(N)}"
    return True, ""


def _check_coset_lifting(Q: LoopTable, oracle_max_order: int) -> tuple[bool, str]:
    p1 = full_product_mask(Q, 1)
    for N in enumerate_normal_subloops(Q, max_order=oracle_max_order):
        Qbar, part = quotient(Q, N)
        pbar = full_product_mask(Qbar, 1)
        members = _mask_members(pbar, Qbar.n)
        # all left-to-right |N|-fold coset products drawn from P(Q/N)
        current = set(members)
        for _ in range(len(N) - 1):
            current = {Qbar.mul(a, b) for a in current for b in members}
        for target_coset in current:
            coset_mask = part.coset_mask(target_coset)
            if not (p1 & coset_mask):
                return False, f"P(Q) misses a coset product for |N|={len(N)}"
    return True, ""


def verify_theorems(Q: LoopTable, k_max: int = 3, word_len: int = 4,
                    oracle_max_order: int = 12,
                    max_states: int = 1 << 24,
                    pomega_work_cap: int = 2 * 10**8) -> list[ClaimResult]:
    """Check every instance-verifiable claim on one loop.

    Failures are returned as data, never raised; an all-pass list is the
    expected outcome on every input. The P^omega claim needs a level-4
    product DP whose work grows like 15^n, so it is marked skipped (not
    failed) on loops where that estimate exceeds ``pomega_work_cap``.
    """
    results: list[ClaimResult] = []
    n = Q.n
    aq = associator_subloop(Q)
    dq = derived_subloop(Q)
    pk = {k: full_product_mask(Q, k, max_states) for k in range(1, k_max + 1)}

    _claim(results, "pk.identity-in-p2", pk[2] >> 0 & 1 == 1)

    ok = all(
        _mul_masks(Q, pk[i], pk[j]) & ~pk[i + j] == 0
        for i in range(1, k_max) for j in range(1, k_max + 1 - i)
    )
    sizes = [pk[k].bit_count() for k in range(1, k_max + 1)]
    ok = ok and all(sizes[i] <= sizes[i + 1] for i in range(len(sizes) - 1))
    _claim(results, "pk.product-monotone", ok)

    d_index, _ = _cosets_of_mask(Q, dq.mask)
    single = all(
        len({d_index[x] for x in _mask_members(pk[k], n)}) == 1
        for k in range(1, k_max + 1)
    )
    _claim(results, "pk.single-derived-coset", single)

    _claim(results, "pk.parity-chain",
           all(pk[k] & ~pk[k + 2] == 0 for k in range(1, k_max - 1)))

    _claim(results, "pk.p2-in-derived", pk[2] & ~dq.mask == 0)

    rep = min(_mask_members(pk[1], n))
    square_coset = d_index[Q.mul(rep, rep)]
    _claim(results, "pk.first-coset-square", square_coset == d_index[0],
           "a^2 must fall in the derived subloop for P(Q) in aQ'")

    ok, details = _check_coset_lifting(Q, oracle_max_order)
    _claim(results, "lifting.quotient-products", ok, details)

    profile = coset_profile(Q, product_set(Q, 1, max_states=max_states))
    _claim(results, "dh.associator-cosets", profile.covers_all,
           f"{len(profile.hit_associator_cosets)} cosets hit")

    _claim(results, "derived.iff-b",
           (pk[1] & ~dq.mask == 0) == check_B_fast(Q))

    plex_ok = True
    cycle_ok = True
    plex_details = []
    for k in range(1, k_max + 1):
        sel = find_selection(Q, "regular_row_k_plex", k)
        if sel is None:
            continue
        plex_details.append(f"k={k}")
        if pk[k] & aq.mask == 0:
            plex_ok = False
        cycles = cycle_decompose_regular(Q, sel)
        got = sorted(c for cyc in cycles for c in cyc.cells)
        if got != sorted(sel.cells):
            cycle_ok = False
        for cyc in cycles:
            if cyc.nested_row_product(Q) not in aq:
                cycle_ok = False
    _claim(results, "plex.products-hit-associator", plex_ok,
           "found " + (", ".join(plex_details) or "none"))
    _claim(results, "plex.cycle-products", cycle_ok)

    Qbar, part = quotient(Q, aq)
    dbar = derived_subloop(Qbar)
    image = {part.index_of[x] for x in dq}
    _claim(results, "derived.quotient-by-associator",
           set(dbar.members()) == image)

    if 15**n > pomega_work_cap:
        _claim(results, "pomega.subloop-and-stabilization", False,
               f"skipped: level-4 DP work 15^{n} above cap", skipped=True)
    else:
        try:
            om = p_omega(Q, max_states=max_states)
            mask = om.achievable.mask
            closure = subloop_closure(Q, om.achievable)
            pom_ok = closure.mask == mask and mask >> 0 & 1 == 1
            details = f"stabilizes at k={om.k}"
            if pom_ok and is_normal(Q, closure):
                # when normal: the union is Q' itself or Q' plus one coset
                # whose elements square into Q'
                pom_ok = mask == dq.mask or (
                    mask.bit_count() == 2 * len(dq)
                    and dq.mask & ~mask == 0
                    and all(d_index[Q.mul(x, x)] == d_index[0]
                            for x in _mask_members(mask & ~dq.mask, n))
                )
                details += "; normal"
        except BudgetExceeded as exc:
            pom_ok = False
            details = str(exc)
        _claim(results, "pomega.subloop-and-stabilization", pom_ok, details)

    ok, details = _check_induced_translation(Q, word_len)
    _claim(results, "induced.left-translation", ok, details)

    if Q.is_group():
        _claim(results, "group.four-way-equivalence",
               *_check_group_equivalence(Q))
    return results


def _check_group_equivalence(G: LoopTable) -> tuple[bool, str]:
    """Regular row transversal <=> n-way partition <=> Sylow status <=> 1 in P(G),
    with the constructive path exercised whenever 1 in P(G)."""
    rrt = find_selection(G, "regular_row_k_plex", 1)
    has_rrt = rrt is not None
    status = sylow2_status(G)
    sylow_ok = status != "cyclic"
    ps = product_set(G, 1, witnesses=True)
    one_in_p = 0 in ps.achievable
    if not (has_rrt == sylow_ok == one_in_p):
        return False, f"rrt={has_rrt} sylow={status} one_in_p={one_in_p}"
    if has_rrt:
        parts = translate_partition(G, rrt)
        if len(parts) != G.n:
            return False, "partition has wrong size"
    if one_in_p:
        expr = witness(ps, 0)
        ordering = expression_leaves(expr)
        built = transversal_from_full_product(G, ordering)
        if not matches_kind(G, built, "regular_row_k_plex", 1):
            return False, "constructive path failed validation"
        translate_partition(G, built)
    return True, f"sylow={status}"
