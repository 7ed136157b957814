"""Full k-product sets over multisets of loop elements.

P^k(H) is the set of elements expressible as a product using every
element of the multiset H exactly k times, over all orderings and
associations. Computed by dynamic programming over sub-multisets:
reach({x}) = {x}, and the reach of a larger multiset is the union of
reach(T)*reach(S-T) over splits. An optional witness store reconstructs
one explicit product expression per achievable element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from . import _kernels
from .core import ElementSet, LoopTable, associator_subloop, derived_subloop, _cosets_of_mask
from .errors import BudgetExceeded, EmptyMultiset, NotInSingleCoset, WitnessesDisabled

DEFAULT_STATE_CAP = 1 << 24


@dataclass(frozen=True)
class Multiset:
    """A multiset of loop elements, as a count per element index."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts):
            raise ValueError("negative multiplicity")

    @classmethod
    def from_elements(cls, n: int, elements) -> "Multiset":
        counts = [0] * n
        for x in elements:
            counts[x] += 1
        return cls(tuple(counts))

    @classmethod
    def uniform(cls, n: int, k: int) -> "Multiset":
        """k copies of every element of a loop of order n."""
        return cls((k,) * n)

    @property
    def size(self) -> int:
        return sum(self.counts)

    def elements(self):
        for x, c in enumerate(self.counts):
            for _ in range(c):
                yield x

    def __bool__(self) -> bool:
        return self.size > 0


@dataclass(frozen=True)
class Leaf:
    element: int


@dataclass(frozen=True)
class Node:
    left: "Expression"
    right: "Expression"


Expression = Union[Leaf, Node]


def evaluate(Q: LoopTable, expr: Expression) -> int:
    if isinstance(expr, Leaf):
        return expr.element
    return Q.mul(evaluate(Q, expr.left), evaluate(Q, expr.right))


def expression_leaves(expr: Expression) -> list[int]:
    """Leaf elements in left-to-right order."""
    if isinstance(expr, Leaf):
        return [expr.element]
    return expression_leaves(expr.left) + expression_leaves(expr.right)


def format_expression(Q: LoopTable, expr: Expression) -> str:
    if isinstance(expr, Leaf):
        return str(Q.symbols[expr.element])
    return f"({format_expression(Q, expr.left)}*{format_expression(Q, expr.right)})"


@dataclass(frozen=True)
class ProductSet:
    """The achievable full products of one multiset, plus DP internals."""

    loop: LoopTable
    multiset: Multiset
    achievable: ElementSet
    _reach: tuple
    _witness: Optional[dict]

    @property
    def has_witnesses(self) -> bool:
        return self._witness is not None


def _strides(counts) -> list[int]:
    strides = []
    acc = 1
    for c in counts:
        strides.append(acc)
        acc *= c + 1
    return strides


def product_set_of_multiset(Q: LoopTable, M: Multiset, witnesses: bool = False,
                            max_states: int = DEFAULT_STATE_CAP) -> ProductSet:
    """All achievable products of the multiset M, in any order/association."""
    if len(M.counts) != Q.n:
        raise ValueError("multiset is over a different element range")
    if not M:
        raise EmptyMultiset("cannot form products of an empty multiset")
    flat = Q.table
    if witnesses:
        reach, wit = _kernels.reach_table_with_witness(flat, Q.n, M.counts, max_states)
    else:
        reach, wit = _kernels.reach_table(flat, Q.n, M.counts, max_states), None
    strides = _strides(M.counts)
    full = sum(c * s for c, s in zip(M.counts, strides))
    mask = int(reach[full])
    assert mask != 0, "nonempty multiset with empty product set"
    return ProductSet(Q, M, ElementSet(Q.n, mask), tuple(reach), wit)


def product_set(Q: LoopTable, k: int, witnesses: bool = False,
                max_states: int = DEFAULT_STATE_CAP) -> ProductSet:
    """P^k(Q): products using every element of the loop exactly k times."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return product_set_of_multiset(Q, Multiset.uniform(Q.n, k),
                                   witnesses=witnesses, max_states=max_states)


def full_product_mask(Q: LoopTable, k: int, max_states: int = DEFAULT_STATE_CAP) -> int:
    """Bitmask of P^k(Q), cached on the loop.

    One DP at level k yields P^j for every j <= k (they are sub-states),
    so repeated mixed-k queries against one loop stay cheap.
    """
    key = ("pk", k)
    if key not in Q._cache:
        reach = _kernels.reach_table(Q.table, Q.n, (k,) * Q.n, max_states)
        strides = _strides((k,) * Q.n)
        unit = sum(strides)
        for j in range(1, k + 1):
            Q._cache.setdefault(("pk", j), int(reach[j * unit]))
    return Q._cache[key]


def witness(ps: ProductSet, target: int) -> Optional[Expression]:
    """One expression over exactly ps.multiset evaluating to target, or None.

    The reconstructed expression is re-evaluated and its leaf multiset
    compared against the requested one before being returned.
    """
    if ps._witness is None:
        raise WitnessesDisabled("product set was computed without witnesses")
    if target not in ps.achievable:
        return None
    Q = ps.loop
    counts = ps.multiset.counts
    strides = _strides(counts)

    def size_of(key: int) -> int:
        s = 0
        for x, c in enumerate(counts):
            s += key // strides[x] % (c + 1)
        return s

    def build(key: int, e: int) -> Expression:
        if size_of(key) == 1:
            assert key == strides[e], "inconsistent witness leaf"
            return Leaf(e)
        lk, a, b = ps._witness[(key, e)]
        return Node(build(lk, a), build(key - lk, b))

    full = sum(c * s for c, s in zip(counts, strides))
    expr = build(full, target)
    assert evaluate(Q, expr) == target
    assert sorted(expression_leaves(expr)) == sorted(ps.multiset.elements())
    return expr


class POmega(NamedTuple):
    """Stabilized union of all full k-product sets."""

    k: int
    achievable: ElementSet


def p_omega(Q: LoopTable, max_k: Optional[int] = None,
            max_states: int = DEFAULT_STATE_CAP) -> POmega:
    """Union of P^k(Q) over all k, with its stabilization index.

    The even and odd chains P^k <= P^{k+2} each grow monotonically, so
    the union is P^k union P^{k+1} once P^k = P^{k+2} and
    P^{k+1} = P^{k+3}; that first k is returned. The union is closed
    under multiplication (it is a subloop).

    One reachability DP at level K yields every P^j with j <= K, so the
    probe level starts at 4 (enough to certify stabilization at k=1,
    which is the common case) and is raised until the criterion fires.
    """
    if max_k is None:
        max_k = 2 * Q.n + 4
    probe = min(4, max_k)
    while True:
        full_product_mask(Q, probe, max_states)
        masks = [Q._cache[("pk", j)] for j in range(1, probe + 1)]
        for t in range(1, len(masks) - 2):
            if masks[t - 1] == masks[t + 1] and masks[t] == masks[t + 2]:
                union = masks[t - 1] | masks[t]
                _assert_closed(Q, union)
                return POmega(t, ElementSet(Q.n, union))
        if probe >= max_k:
            raise BudgetExceeded(f"no stabilization of P^k within k <= {max_k}")
        probe = min(probe + 2, max_k)


def _assert_closed(Q: LoopTable, mask: int) -> None:
    elems = [x for x in range(Q.n) if mask >> x & 1]
    for a in elems:
        for b in elems:
            assert mask >> Q.table[a][b] & 1, "P^omega not closed under product"


@dataclass(frozen=True)
class CosetProfile:
    """Where a product set sits relative to Q' and A(Q) cosets."""

    derived_size: int
    associator_size: int
    derived_coset: tuple[int, ...]
    hit_associator_cosets: tuple[tuple[int, ...], ...]
    missed_associator_cosets: tuple[tuple[int, ...], ...]

    @property
    def covers_all(self) -> bool:
        return not self.missed_associator_cosets


def coset_profile(Q: LoopTable, ps: ProductSet) -> CosetProfile:
    """Locate ps.achievable within the coset structure of Q' and A(Q).

    Any two products of one multiset agree modulo Q', so the achievable
    set must sit inside a single coset of Q'; a violation is a bug in the
    DP, never valid data. The profile records which A(Q)-cosets inside
    that coset are hit.
    """
    dq = derived_subloop(Q)
    aq = associator_subloop(Q)
    d_index, _ = _cosets_of_mask(Q, dq.mask)
    a_index, _ = _cosets_of_mask(Q, aq.mask)
    targets = ps.achievable.members()
    d_cosets = {d_index[x] for x in targets}
    if len(d_cosets) != 1:
        raise NotInSingleCoset(
            f"products spread over {len(d_cosets)} cosets of the derived subloop")
    d_coset = d_cosets.pop()
    coset_members = tuple(x for x in range(Q.n) if d_index[x] == d_coset)
    inside = sorted({a_index[x] for x in coset_members})
    hit = {a_index[x] for x in targets}
    hit_cosets = tuple(tuple(x for x in range(Q.n) if a_index[x] == c)
                       for c in inside if c in hit)
    missed_cosets = tuple(tuple(x for x in range(Q.n) if a_index[x] == c)
                          for c in inside if c not in hit)
    return CosetProfile(
        derived_size=len(dq),
        associator_size=len(aq),
        derived_coset=coset_members,
        hit_associator_cosets=hit_cosets,
        missed_associator_cosets=missed_cosets,
    )
