"""Transversals, k-plexes, regular selections, and their constructions.

A cell selection is a set of (row, column, entry) triples from a loop's
multiplication table. The searched kinds:

* ``transversal``: one cell per row, all columns distinct, all entries
  distinct (a 1-plex).
* ``k_plex``: every symbol appears exactly k times as a row, as a
  column, and as an entry.
* ``row_k_plex``: exactly k cells in every row, nothing else required.
* ``regular_row_k_plex``: a row k-plex in which every symbol occurs as
  a column exactly as often as it occurs as an entry.

Counting and finding share the kernel DP; every find result is
re-validated against the kind's definition, independently of the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import _kernels
from .core import LoopTable
from .errors import (
    ContiguousUnitSubsequence,
    NotAGroup,
    NotRegular,
    NotRegularRowTransversal,
    ProductNotIdentity,
)

KINDS = ("transversal", "k_plex", "row_k_plex", "regular_row_k_plex")


@dataclass(frozen=True)
class CellSelection:
    """A set of distinct cells of one multiplication table, canonically sorted."""

    cells: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_cells(cls, Q: LoopTable, cells) -> "CellSelection":
        triples = []
        seen = set()
        for cell in cells:
            r, c = cell[0], cell[1]
            e = Q.table[r][c]
            if len(cell) == 3 and cell[2] != e:
                raise ValueError(f"cell ({r},{c}) carries entry {cell[2]}, table says {e}")
            if (r, c) in seen:
                raise ValueError(f"duplicate cell ({r},{c})")
            seen.add((r, c))
            triples.append((r, c, e))
        return cls(tuple(sorted(triples)))

    @classmethod
    def from_row_columns(cls, Q: LoopTable, per_row) -> "CellSelection":
        cells = [(r, c, Q.table[r][c]) for r, cols in enumerate(per_row) for c in cols]
        return cls(tuple(sorted(cells)))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)


@dataclass(frozen=True)
class RegularityProfile:
    """Per-symbol counts of appearances as row, column, and entry."""

    row_counts: tuple[int, ...]
    column_counts: tuple[int, ...]
    entry_counts: tuple[int, ...]

    @classmethod
    def of(cls, Q: LoopTable, C: CellSelection) -> "RegularityProfile":
        rows = [0] * Q.n
        cols = [0] * Q.n
        ents = [0] * Q.n
        for r, c, e in C:
            rows[r] += 1
            cols[c] += 1
            ents[e] += 1
        return cls(tuple(rows), tuple(cols), tuple(ents))


def is_regular(Q: LoopTable, C: CellSelection) -> bool:
    """Column-entry regularity: each symbol is a column as often as an entry."""
    profile = RegularityProfile.of(Q, C)
    return profile.column_counts == profile.entry_counts


def matches_kind(Q: LoopTable, C: CellSelection, kind: str, k: int = 1) -> bool:
    """Definitional validation of a selection, independent of any search."""
    profile = RegularityProfile.of(Q, C)
    if kind == "transversal":
        return (profile.row_counts == (1,) * Q.n
                and profile.column_counts == (1,) * Q.n
                and profile.entry_counts == (1,) * Q.n)
    if kind == "k_plex":
        uniform = (k,) * Q.n
        return (profile.row_counts, profile.column_counts, profile.entry_counts) == (
            uniform, uniform, uniform)
    if kind == "row_k_plex":
        return profile.row_counts == (k,) * Q.n
    if kind == "regular_row_k_plex":
        return profile.row_counts == (k,) * Q.n and is_regular(Q, C)
    raise ValueError(f"unknown selection kind {kind!r}")


def _kernel_args(kind: str, k: int):
    if kind == "transversal":
        return _kernels.count_selections, "plex", 1
    if kind == "k_plex":
        return _kernels.count_selections, "plex", k
    if kind == "regular_row_k_plex":
        return _kernels.count_selections, "regular", k
    raise ValueError(f"unknown selection kind {kind!r}")


def _check_kind_k(kind: str, k: int) -> int:
    if kind not in KINDS:
        raise ValueError(f"unknown selection kind {kind!r}")
    if kind == "transversal":
        if k not in (None, 1):
            raise ValueError("a transversal is exactly a 1-plex; k must be 1")
        return 1
    if k is None or k < 1:
        raise ValueError(f"kind {kind!r} needs k >= 1")
    return k


def find_selection(Q: LoopTable, kind: str, k: int = None,
                   max_states: int = _kernels._pure.DEFAULT_STATE_BUDGET):
    """First selection of the kind in lexicographic cell order, or None."""
    k = _check_kind_k(kind, k)
    if kind == "row_k_plex":
        if k > Q.n:
            return None
        per_row = [tuple(range(k))] * Q.n
        sel = CellSelection.from_row_columns(Q, per_row)
    else:
        _, kernel_kind, kk = _kernel_args(kind, k)
        per_row = _kernels.find_selection(Q.table, Q.n, kk, kernel_kind, max_states)
        if per_row is None:
            return None
        sel = CellSelection.from_row_columns(Q, per_row)
    assert matches_kind(Q, sel, kind, k), "search produced an invalid selection"
    return sel


def count_selections(Q: LoopTable, kind: str, k: int = None,
                     max_states: int = _kernels._pure.DEFAULT_STATE_BUDGET) -> int:
    """Exact number of distinct selections of the kind."""
    k = _check_kind_k(kind, k)
    if kind == "row_k_plex":
        return comb(Q.n, k) ** Q.n
    _, kernel_kind, kk = _kernel_args(kind, k)
    return _kernels.count_selections(Q.table, Q.n, kk, kernel_kind, max_states)


# -- cycle decomposition of regular selections ------------------------------


@dataclass(frozen=True)
class RegularCycle:
    """One closed column-entry chain extracted from a regular selection.

    ``cells`` is kept in walk order: each cell's column equals the next
    cell's entry, wrapping around. The nested left product of the rows in
    walk order, x_1*(x_2*(...*(x_s))), fixes the first cell's entry
    coset, which is what places it in the associator subloop.
    """

    cells: tuple[tuple[int, int, int], ...]

    @property
    def selection(self) -> CellSelection:
        return CellSelection(tuple(sorted(self.cells)))

    def nested_row_product(self, Q: LoopTable) -> int:
        rows = [r for r, _, _ in self.cells]
        acc = rows[-1]
        for x in reversed(rows[:-1]):
            acc = Q.mul(x, acc)
        return acc


def cycle_decompose_regular(Q: LoopTable, C: CellSelection) -> list[RegularCycle]:
    """Partition a regular selection into closed column-entry cycles.

    Walk: repeatedly step to the lowest-index unused cell whose entry
    equals the current cell's column; when the needed cell is already on
    the walk, the segment from it onward closes into a cycle and is
    extracted. Regularity guarantees a step is always available, and each
    extracted cycle is itself regular, as is the remainder.
    """
    if not is_regular(Q, C):
        raise NotRegular("cycle decomposition needs a column-entry regular selection")
    cells = list(C.cells)
    unused = set(range(len(cells)))
    by_entry: dict[int, list[int]] = {}
    for i, (_, _, e) in enumerate(cells):
        by_entry.setdefault(e, []).append(i)

    def next_for(col: int, on_walk: dict) -> int:
        live = [i for i in by_entry.get(col, ()) if i in unused]
        assert live, "regular selection ran out of matching entries"
        for i in live:
            if i in on_walk:
                return i
        return live[0]

    cycles = []
    while unused:
        walk = [min(unused)]
        on_walk = {walk[0]: 0}
        while True:
            nxt = next_for(cells[walk[-1]][1], on_walk)
            if nxt in on_walk:
                start = on_walk[nxt]
                cycle = walk[start:]
                for i in cycle:
                    unused.discard(i)
                cycles.append(RegularCycle(tuple(cells[i] for i in cycle)))
                break
            on_walk[nxt] = len(walk)
            walk.append(nxt)
    for cyc in cycles:
        assert is_regular(Q, cyc.selection), "extracted cycle lost regularity"
    return cycles


# -- constructions in groups -------------------------------------------------


def _left_to_right(G: LoopTable, seq) -> int:
    acc = seq[0]
    for x in seq[1:]:
        acc = G.mul(acc, x)
    return acc


def _check_no_unit_subsequence(G: LoopTable, seq) -> None:
    k = len(seq)
    for i in range(k):
        acc = None
        for j in range(i, k):
            acc = seq[j] if acc is None else G.mul(acc, seq[j])
            if acc == 0 and (j - i + 1) < k:
                raise ContiguousUnitSubsequence(
                    f"elements {i}..{j} multiply to the identity", i, j + 1)


def regular_set_from_unit_product(G: LoopTable, seq) -> CellSelection:
    """Regular set with rows seq, built from a unit product in a group.

    Given g_1 ... g_k = 1 with no proper contiguous subsequence equal to
    1, the cells (g_i, h_i, h_{i-1}) with h_i the tail product
    g_{i+1} ... g_k form a regular set whose columns are all distinct.
    """
    if not G.is_group():
        raise NotAGroup("the tail-product construction needs associativity")
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    if _left_to_right(G, seq) != 0:
        raise ProductNotIdentity("sequence does not multiply to the identity")
    _check_no_unit_subsequence(G, seq)
    k = len(seq)
    tails = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        tails[i] = G.mul(seq[i], tails[i + 1])
    cells = [(seq[i], tails[i + 1], tails[i]) for i in range(k)]
    assert len({c for _, c, _ in cells}) == k, "tail columns must be distinct"
    sel = CellSelection.from_cells(G, cells)
    assert is_regular(G, sel)
    return sel


def transversal_from_full_product(G: LoopTable, ordering) -> CellSelection:
    """Regular row transversal of a group from a unit full product.

    Repeatedly extracts the shortest (leftmost on ties) contiguous block
    multiplying to the identity, splices the remainder, and applies the
    tail-product construction to each block; the union of the blocks'
    regular sets picks one cell in every row.
    """
    if not G.is_group():
        raise NotAGroup("the block construction needs associativity")
    ordering = list(ordering)
    if sorted(ordering) != list(range(G.n)):
        raise ValueError("ordering must use each element exactly once")
    if _left_to_right(G, ordering) != 0:
        raise ProductNotIdentity("ordering does not multiply to the identity")
    blocks = []
    work = ordering
    while work:
        m = len(work)
        found = None
        for length in range(1, m + 1):
            for start in range(0, m - length + 1):
                if _left_to_right(G, work[start:start + length]) == 0:
                    found = (start, length)
                    break
            if found:
                break
        assert found is not None, "remaining block lost the unit-product invariant"
        start, length = found
        blocks.append(work[start:start + length])
        work = work[:start] + work[start + length:]
    cells = []
    for block in blocks:
        cells.extend(regular_set_from_unit_product(G, block).cells)
    sel = CellSelection.from_cells(G, cells)
    assert matches_kind(G, sel, "regular_row_k_plex", 1), \
        "block construction must yield a regular row transversal"
    return sel


def translate_partition(G: LoopTable, T: CellSelection) -> list[CellSelection]:
    """Right-translate a regular row transversal into a table partition.

    T_g = {(x, y*g, z*g)} stays a regular row transversal for every g,
    and the n translates are pairwise disjoint and cover the table.
    """
    if not G.is_group():
        raise NotAGroup("translation partition needs associativity")
    if not matches_kind(G, T, "regular_row_k_plex", 1):
        raise NotRegularRowTransversal("partition needs a regular row transversal")
    parts = []
    covered = set()
    for g in range(G.n):
        cells = [(x, G.mul(y, g), G.mul(z, g)) for x, y, z in T]
        part = CellSelection.from_cells(G, cells)
        assert matches_kind(G, part, "regular_row_k_plex", 1)
        for cell in part:
            assert (cell[0], cell[1]) not in covered, "translates must be disjoint"
            covered.add((cell[0], cell[1]))
        parts.append(part)
    assert len(covered) == G.n * G.n, "translates must cover the whole table"
    return parts
