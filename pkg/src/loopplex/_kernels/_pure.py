"""Pure-Python kernels: reference semantics for the compiled twins.

Cell selections are searched and counted with a row-by-row dynamic
program over collapsed states rather than a plain DFS: two partial
selections that agree on the per-symbol usage state are interchangeable,
and merging them shrinks the search space by many orders of magnitude on
exhaustive counts (an order-8 regular row 3-plex count visits ~70k states
against billions of DFS nodes).

State encodings (one integer key per state):

* ``plex`` kind: 2n digits in base k+2; digit s is the count of symbol s
  used as a column, digit n+s its count as an entry. A k-plex is a path
  of n per-row column k-subsets ending at the all-k state. Base k+2
  rather than k+1 so that adding a row's delta never carries between
  digits; digits above k are rejected by validation.
* ``regular`` kind: n digits in base 2n+1 with offset n; digit s is the
  column-minus-entry balance of symbol s. A regular selection is a path
  ending at the all-zero balance. Valid digits stay strictly inside the
  base, so adding a delta never carries here either.
"""

from __future__ import annotations

from itertools import combinations

from ..errors import BudgetExceeded, KTooLargeForBudget

DEFAULT_STATE_BUDGET = 1 << 22
DEFAULT_REACH_BUDGET = 1 << 24

PLEX = "plex"
REGULAR = "regular"


def _encoding(n: int, k: int, kind: str):
    """(base, digit count) of the state encoding."""
    if kind == PLEX:
        return k + 2, 2 * n
    if kind == REGULAR:
        return 2 * n + 1, n
    raise ValueError(f"unknown selection kind {kind!r}")


def _row_deltas(table, n: int, k: int, kind: str):
    """Per-row (delta, sparse digit increments, combo) triples.

    Combos are in lexicographic order, which makes every downstream
    count and find deterministic.
    """
    base, _ = _encoding(n, k, kind)
    pw = [base**i for i in range(2 * n)]
    out = []
    for r in range(n):
        row = table[r]
        deltas = []
        for combo in combinations(range(n), k):
            incs: dict[int, int] = {}
            for c in combo:
                if kind == PLEX:
                    incs[c] = incs.get(c, 0) + 1
                    incs[n + row[c]] = incs.get(n + row[c], 0) + 1
                else:
                    incs[c] = incs.get(c, 0) + 1
                    incs[row[c]] = incs.get(row[c], 0) - 1
            sparse = tuple((p, v) for p, v in sorted(incs.items()) if v != 0)
            delta = sum(v * pw[p] for p, v in sparse)
            deltas.append((delta, sparse, combo))
        out.append(deltas)
    return out


def _decode(key: int, base: int, ndigits: int) -> list[int]:
    digits = []
    for _ in range(ndigits):
        digits.append(key % base)
        key //= base
    return digits


def _start_and_target(n: int, k: int, kind: str) -> tuple[int, int]:
    base, ndigits = _encoding(n, k, kind)
    if kind == PLEX:
        return 0, sum(k * base**i for i in range(ndigits))
    zero = sum(n * base**i for i in range(ndigits))
    return zero, zero


def _digits_valid(digits, n: int, k: int, kind: str,
                  rows_done: int, rows_left: int) -> bool:
    """Can a partial selection with this usage state still complete?

    Each later row raises any single column count, entry count, or
    balance digit by at most one, which gives the deficit and magnitude
    bounds; the L1 balance bound comes from each selected cell moving
    the total imbalance by at most two.
    """
    if kind == PLEX:
        for d in digits:
            if d > k or d > rows_done or k - d > rows_left:
                return False
        return True
    limit = min(rows_done, rows_left)
    l1 = 0
    for d in digits:
        b = d - n
        if b < -limit or b > limit:
            return False
        l1 += b if b >= 0 else -b
    return l1 <= 2 * k * rows_left


def count_selections(table, n: int, k: int, kind: str,
                     max_states: int = DEFAULT_STATE_BUDGET) -> int:
    """Exact number of selections with k cells per row of the given kind."""
    if k > n:
        return 0
    base, ndigits = _encoding(n, k, kind)
    deltas = _row_deltas(table, n, k, kind)
    start, target = _start_and_target(n, k, kind)
    states = {start: 1}
    for r in range(n):
        rows_left = n - r - 1
        nxt: dict[int, int] = {}
        for key, cnt in states.items():
            for delta, _sparse, _combo in deltas[r]:
                nk = key + delta
                if _digits_valid(_decode(nk, base, ndigits), n, k, kind,
                                 r + 1, rows_left):
                    nxt[nk] = nxt.get(nk, 0) + cnt
        if len(nxt) > max_states:
            raise BudgetExceeded(
                f"selection DP level width {len(nxt)} exceeds {max_states}")
        states = nxt
    return states.get(target, 0)


def find_selection(table, n: int, k: int, kind: str,
                   max_states: int = DEFAULT_STATE_BUDGET):
    """Lexicographically first selection of the kind, or None.

    Runs the DP backward from the target to collect the completable
    states of every level, then walks forward taking the smallest column
    combination that stays completable. Backward steps subtract deltas on
    decoded digits so no mixed-radix borrow can corrupt a key.
    """
    if k > n:
        return None
    base, ndigits = _encoding(n, k, kind)
    deltas = _row_deltas(table, n, k, kind)
    start, target = _start_and_target(n, k, kind)
    feasible: list[set[int]] = [set() for _ in range(n + 1)]
    feasible[n].add(target)
    for r in range(n - 1, -1, -1):
        rows_left = n - r
        for key in feasible[r + 1]:
            digits = _decode(key, base, ndigits)
            for delta, sparse, _combo in deltas[r]:
                ok = True
                applied = 0
                for pos, inc in sparse:
                    nd = digits[pos] - inc
                    if nd < 0 or nd >= base:
                        ok = False
                        break
                    digits[pos] = nd
                    applied += 1
                if ok and _digits_valid(digits, n, k, kind, r, rows_left):
                    feasible[r].add(key - delta)
                for pos, inc in sparse[:applied]:
                    digits[pos] += inc
        if len(feasible[r]) > max_states:
            raise BudgetExceeded(
                f"selection DP level width {len(feasible[r])} exceeds {max_states}")
    if start not in feasible[0]:
        return None
    key = start
    chosen = []
    for r in range(n):
        for delta, _sparse, combo in deltas[r]:
            nk = key + delta
            if nk in feasible[r + 1]:
                chosen.append(combo)
                key = nk
                break
        else:
            raise AssertionError("feasible state with no feasible successor")
    return chosen


# -- sub-multiset reachability ---------------------------------------------


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mul_sets(table, amask: int, bmask: int) -> int:
    out = 0
    for a in _bits(amask):
        row = table[a]
        for b in _bits(bmask):
            out |= 1 << row[b]
    return out


def _state_space(counts, max_states: int):
    radices = [c + 1 for c in counts]
    total = 1
    for r in radices:
        total *= r
        if total > max_states:
            raise KTooLargeForBudget(
                f"reachability DP needs {total}+ states, budget is {max_states}")
    strides = []
    acc = 1
    for r in radices:
        strides.append(acc)
        acc *= r
    return radices, strides, total


def _buckets_by_size(radices, total):
    buckets: dict[int, list[int]] = {}
    for key in range(total):
        rem = key
        s = 0
        for r in radices:
            s += rem % r
            rem //= r
        buckets.setdefault(s, []).append(key)
    return buckets


def _sub_states(key, radices, strides):
    """All sub-multiset keys of a state key, ascending.

    Odometer over the digit vector, maintaining the key incrementally so
    each step is O(1) amortized.
    """
    digits = []
    rem = key
    for r in radices:
        digits.append(rem % r)
        rem //= r
    n = len(digits)
    sub = [0] * n
    skey = 0
    while True:
        yield skey
        i = 0
        while i < n:
            if sub[i] < digits[i]:
                sub[i] += 1
                skey += strides[i]
                break
            skey -= sub[i] * strides[i]
            sub[i] = 0
            i += 1
        if i == n:
            return


def reach_table(table, n: int, counts,
                max_states: int = DEFAULT_REACH_BUDGET):
    """Reachable products for every sub-multiset of ``counts``.

    Returns a list indexed by mixed-radix state key (radix counts[i]+1
    per element); entry S is the bitmask of elements expressible as a
    product, in some order and association, of exactly the multiset S.
    Splits are enumerated once per unordered pair and multiplied in both
    orders, since loops are not commutative.
    """
    radices, strides, total = _state_space(counts, max_states)
    buckets = _buckets_by_size(radices, total)
    reach = [0] * total
    for x in range(n):
        if counts[x] > 0:
            reach[strides[x]] = 1 << x
    for size in sorted(buckets):
        if size < 2:
            continue
        for key in buckets[size]:
            acc = 0
            for tkey in _sub_states(key, radices, strides):
                ckey = key - tkey
                if tkey == 0 or ckey == 0 or tkey > ckey:
                    continue
                a, b = reach[tkey], reach[ckey]
                acc |= _mul_sets(table, a, b)
                if tkey != ckey:
                    acc |= _mul_sets(table, b, a)
            reach[key] = acc
    return reach


def reach_table_with_witness(table, n: int, counts,
                             max_states: int = DEFAULT_REACH_BUDGET):
    """Like :func:`reach_table`, also recording one split per new element.

    The witness store maps (state key, element) to (left key, left value,
    right value): the first discovered split whose halves multiply to the
    element. Deterministic because states, splits and set members are all
    scanned in ascending order.
    """
    radices, strides, total = _state_space(counts, max_states)
    buckets = _buckets_by_size(radices, total)
    reach = [0] * total
    witness: dict[tuple[int, int], tuple[int, int, int]] = {}
    for x in range(n):
        if counts[x] > 0:
            reach[strides[x]] = 1 << x
    for size in sorted(buckets):
        if size < 2:
            continue
        for key in buckets[size]:
            acc = 0
            for tkey in _sub_states(key, radices, strides):
                ckey = key - tkey
                if tkey == 0 or ckey == 0 or tkey > ckey:
                    continue
                sides = ((tkey, ckey),) if tkey == ckey else ((tkey, ckey), (ckey, tkey))
                for lk, rk in sides:
                    left, right = reach[lk], reach[rk]
                    for a in _bits(left):
                        row = table[a]
                        for b in _bits(right):
                            e = row[b]
                            bit = 1 << e
                            if not acc & bit:
                                acc |= bit
                                witness[(key, e)] = (lk, a, b)
            reach[key] = acc
    return reach, witness
