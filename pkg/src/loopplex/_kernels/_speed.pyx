# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: selection-counting level DP and sub-multiset reach DP.

Semantics match ``loopplex._kernels._pure`` exactly; inputs that would
overflow 64-bit keys or counts are delegated back to the pure kernels,
which use arbitrary-precision integers.
"""

from itertools import combinations
from math import comb

from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector
from libcpp.pair cimport pair
from cython.operator cimport dereference as deref, preincrement as inc

from ..errors import BudgetExceeded, KTooLargeForBudget

from . import _pure

DEF MAXN = 16

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


# -- shared helpers ----------------------------------------------------------


cdef int _decode_digits(int64_t key, int64_t base, int ndigits, int* out) nogil:
    cdef int i
    for i in range(ndigits):
        out[i] = <int>(key % base)
        key //= base
    return 0


cdef bint _plex_ok(int* digits, int ndigits, int k, int rows_done,
                   int rows_left) nogil:
    cdef int i, d
    for i in range(ndigits):
        d = digits[i]
        if d > k or d > rows_done or k - d > rows_left:
            return False
    return True


cdef bint _regular_ok(int* digits, int n, int k, int rows_done,
                      int rows_left) nogil:
    cdef int limit = rows_done if rows_done < rows_left else rows_left
    cdef int i, b, l1 = 0
    for i in range(n):
        b = digits[i] - n
        if b < -limit or b > limit:
            return False
        l1 += b if b >= 0 else -b
    return l1 <= 2 * k * rows_left


def _encoding_fits(int n, int k, str kind):
    if kind == "plex":
        return (k + 2) ** (2 * n) < (1 << 62)
    return (2 * n + 1) ** n < (1 << 62)


cdef class _Deltas:
    """Per-row combo deltas in both integer and sparse-digit form."""

    cdef vector[vector[int64_t]] delta
    cdef vector[vector[vector[pair[int, int]]]] sparse
    cdef public list combos
    cdef public int64_t base
    cdef public int ndigits

    def __init__(self, table, int n, int k, str kind):
        cdef int64_t base
        cdef int ndigits
        if kind == "plex":
            base = k + 2
            ndigits = 2 * n
        else:
            base = 2 * n + 1
            ndigits = n
        self.base = base
        self.ndigits = ndigits
        self.combos = list(combinations(range(n), k))
        pw = [base ** i for i in range(ndigits)]
        cdef int r, c
        self.delta.resize(n)
        self.sparse.resize(n)
        for r in range(n):
            row = table[r]
            for combo in self.combos:
                incs = {}
                for c in combo:
                    if kind == "plex":
                        incs[c] = incs.get(c, 0) + 1
                        incs[n + row[c]] = incs.get(n + row[c], 0) + 1
                    else:
                        incs[c] = incs.get(c, 0) + 1
                        incs[row[c]] = incs.get(row[c], 0) - 1
                items = [(p, v) for p, v in sorted(incs.items()) if v != 0]
                self.delta[r].push_back(sum(v * pw[p] for p, v in items))
                sp = vector[pair[int, int]]()
                for p, v in items:
                    sp.push_back(pair[int, int](p, v))
                self.sparse[r].push_back(sp)


def count_selections(table, int n, int k, str kind, max_states=None):
    """Exact number of selections with k cells per row of the given kind."""
    if max_states is None:
        max_states = _pure.DEFAULT_STATE_BUDGET
    if k > n:
        return 0
    if not _encoding_fits(n, k, kind) or comb(n, k) ** n >= (1 << 62):
        return _pure.count_selections(table, n, k, kind, max_states)
    dd = _Deltas(table, n, k, kind)
    start, target = _pure._start_and_target(n, k, kind)
    cdef int64_t cstart = start, ctarget = target, base = dd.base
    cdef int ndigits = dd.ndigits
    cdef bint plex = kind == "plex"
    cdef unordered_map[int64_t, uint64_t] states, nxt
    cdef unordered_map[int64_t, uint64_t].iterator it
    states[cstart] = 1
    cdef int r, rows_left, ci, ncombos
    cdef int64_t key, nk
    cdef uint64_t cnt
    cdef int digits[2 * MAXN]
    cdef int64_t budget = <int64_t>max_states
    for r in range(n):
        rows_left = n - r - 1
        ncombos = dd.delta[r].size()
        nxt.clear()
        it = states.begin()
        while it != states.end():
            key = deref(it).first
            cnt = deref(it).second
            for ci in range(ncombos):
                nk = key + dd.delta[r][ci]
                _decode_digits(nk, base, ndigits, digits)
                if plex:
                    if not _plex_ok(digits, ndigits, k, r + 1, rows_left):
                        continue
                else:
                    if not _regular_ok(digits, n, k, r + 1, rows_left):
                        continue
                nxt[nk] += cnt
            inc(it)
        if <int64_t>nxt.size() > budget:
            raise BudgetExceeded(
                f"selection DP level width {nxt.size()} exceeds {max_states}")
        states.swap(nxt)
    it = states.find(ctarget)
    if it == states.end():
        return 0
    return int(deref(it).second)


def find_selection(table, int n, int k, str kind, max_states=None):
    """Lexicographically first selection of the kind, or None."""
    if max_states is None:
        max_states = _pure.DEFAULT_STATE_BUDGET
    if k > n:
        return None
    if not _encoding_fits(n, k, kind):
        return _pure.find_selection(table, n, k, kind, max_states)
    dd = _Deltas(table, n, k, kind)
    start, target = _pure._start_and_target(n, k, kind)
    cdef int64_t cstart = start, base = dd.base
    cdef int ndigits = dd.ndigits
    cdef bint plex = kind == "plex"
    cdef vector[unordered_set[int64_t]] feasible
    feasible.resize(n + 1)
    feasible[n].insert(<int64_t>target)
    cdef int r, rows_left, ci, ncombos, j, pos, val
    cdef int64_t key, pk, nk
    cdef int digits[2 * MAXN]
    cdef bint ok
    cdef unordered_set[int64_t].iterator sit
    cdef int64_t budget = <int64_t>max_states
    for r in range(n - 1, -1, -1):
        rows_left = n - r
        ncombos = dd.delta[r].size()
        sit = feasible[r + 1].begin()
        while sit != feasible[r + 1].end():
            key = deref(sit)
            for ci in range(ncombos):
                _decode_digits(key, base, ndigits, digits)
                ok = True
                for j in range(<int>dd.sparse[r][ci].size()):
                    pos = dd.sparse[r][ci][j].first
                    val = digits[pos] - dd.sparse[r][ci][j].second
                    if val < 0 or val >= base:
                        ok = False
                        break
                    digits[pos] = val
                if not ok:
                    continue
                if plex:
                    ok = _plex_ok(digits, ndigits, k, r, rows_left)
                else:
                    ok = _regular_ok(digits, n, k, r, rows_left)
                if ok:
                    feasible[r].insert(key - dd.delta[r][ci])
            inc(sit)
        if <int64_t>feasible[r].size() > budget:
            raise BudgetExceeded(
                f"selection DP level width {feasible[r].size()} exceeds {max_states}")
    if feasible[0].find(cstart) == feasible[0].end():
        return None
    chosen = []
    key = cstart
    for r in range(n):
        ncombos = dd.delta[r].size()
        for ci in range(ncombos):
            nk = key + dd.delta[r][ci]
            if feasible[r + 1].find(nk) != feasible[r + 1].end():
                chosen.append(dd.combos[ci])
                key = nk
                break
        else:
            raise AssertionError("feasible state with no feasible successor")
    return chosen


# -- sub-multiset reachability ------------------------------------------------


def reach_table(table, int n, counts, max_states=None):
    """Reachable products for every sub-multiset of ``counts``."""
    if max_states is None:
        max_states = _pure.DEFAULT_REACH_BUDGET
    total_py = 1
    for c in counts:
        total_py *= c + 1
        if total_py > max_states:
            raise KTooLargeForBudget(
                f"reachability DP needs {total_py}+ states, budget is {max_states}")
    cdef int64_t total = total_py
    cdef int i, x, r
    cdef vector[int64_t] radix, stride
    cdef int64_t acc = 1
    for c in counts:
        radix.push_back(c + 1)
        stride.push_back(acc)
        acc *= c + 1
    cdef vector[int] flat
    for row in table:
        for v in row:
            flat.push_back(v)
    cdef vector[uint64_t] reach = vector[uint64_t](total, 0)
    for x in range(n):
        if counts[x] > 0:
            reach[stride[x]] = <uint64_t>1 << x

    # bucket states by total size, counting sort
    cdef int maxsize = 0
    for c in counts:
        maxsize += c
    cdef vector[int] size_of = vector[int](total, 0)
    cdef int64_t key, rem
    cdef int s
    for key in range(total):
        rem = key
        s = 0
        for i in range(n):
            s += <int>(rem % radix[i])
            rem //= radix[i]
        size_of[key] = s
    cdef vector[vector[int64_t]] buckets
    buckets.resize(maxsize + 1)
    for key in range(total):
        buckets[size_of[key]].push_back(key)

    cdef int digits[MAXN]
    cdef int sub[MAXN]
    cdef int64_t tkey, ckey
    cdef uint64_t out, amask, bmask, mm
    cdef int a, b
    for s in range(2, maxsize + 1):
        for key in buckets[s]:
            rem = key
            for i in range(n):
                digits[i] = <int>(rem % radix[i])
                rem //= radix[i]
                sub[i] = 0
            out = 0
            tkey = 0
            while True:
                # advance odometer first so tkey=0 is skipped naturally
                i = 0
                while i < n:
                    if sub[i] < digits[i]:
                        sub[i] += 1
                        tkey += stride[i]
                        break
                    tkey -= sub[i] * stride[i]
                    sub[i] = 0
                    i += 1
                if i == n:
                    break
                ckey = key - tkey
                if ckey == 0 or tkey > ckey:
                    continue
                amask = reach[tkey]
                bmask = reach[ckey]
                mm = amask
                while mm:
                    a = __builtin_ctzll(mm)
                    mm &= mm - 1
                    r = a * n
                    # a * b for each b in bmask
                    out |= _mul_row(flat, r, bmask)
                if tkey != ckey:
                    mm = bmask
                    while mm:
                        a = __builtin_ctzll(mm)
                        mm &= mm - 1
                        r = a * n
                        out |= _mul_row(flat, r, amask)
            reach[key] = out
    return [int(reach[key]) for key in range(total)]


cdef inline uint64_t _mul_row(vector[int]& flat, int rowbase,
                              uint64_t bmask) nogil:
    cdef uint64_t out = 0
    cdef int b
    while bmask:
        b = __builtin_ctzll(bmask)
        bmask &= bmask - 1
        out |= <uint64_t>1 << flat[rowbase + b]
    return out
