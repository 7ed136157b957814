"""Table I/O, builtin examples, exhaustive enumeration, and sweeps.

Table files are whitespace-separated 1-based symbols, one row per line,
with optional '#' comment lines and an optional leading order line.
Internally everything is 0-based with the identity at index 0;
enumeration emits exactly the normalized tables (reduced Latin squares),
which is the same thing as enumerating loops.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Optional

from .conditions import hp_report, verify_theorems
from .core import LoopTable
from .errors import BudgetExceeded, LoopplexError, ParseError, UnknownName
from .plexes import count_selections
from .products import full_product_mask

FIG1_ROWS = (
    (1, 2, 3, 4, 5, 6),
    (2, 1, 4, 3, 6, 5),
    (3, 5, 1, 6, 2, 4),
    (4, 6, 2, 5, 1, 3),
    (5, 3, 6, 2, 4, 1),
    (6, 4, 5, 1, 3, 2),
)

FIG2_ROWS = (
    (1, 2, 3, 4, 5),
    (2, 1, 4, 5, 3),
    (3, 5, 1, 2, 4),
    (4, 3, 5, 1, 2),
    (5, 4, 2, 3, 1),
)


# -- parsing and serialization ------------------------------------------------


def parse_table(text: str) -> LoopTable:
    """Parse table text into a normalized loop.

    Grammar: '#' comment lines anywhere, then an optional single-integer
    order line, then n lines of n integers in 1..n. Errors carry the
    offending 1-based line and column.
    """
    grid: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        grid.append((lineno, line.split()))
    if not grid:
        raise ParseError("no table data found", line=1, column=1)
    if len(grid[0][1]) == 1 and len(grid) > 1:
        grid = grid[1:]  # leading order line
    n = len(grid)
    rows = []
    for lineno, tokens in grid:
        if len(tokens) != n:
            raise ParseError(
                f"expected {n} entries, got {len(tokens)}", line=lineno, column=1)
        row = []
        for col, tok in enumerate(tokens, start=1):
            try:
                value = int(tok)
            except ValueError:
                raise ParseError(f"not an integer: {tok!r}", line=lineno, column=col)
            if not 1 <= value <= n:
                raise ParseError(
                    f"symbol {value} out of range 1..{n}", line=lineno, column=col)
            row.append(value)
        rows.append((lineno, row))
    for lineno, row in rows:
        seen: dict[int, int] = {}
        for col, value in enumerate(row, start=1):
            if value in seen:
                raise ParseError(
                    f"symbol {value} repeats in this row", line=lineno, column=col)
            seen[value] = col
    for col in range(n):
        seen = {}
        for lineno, row in rows:
            value = row[col]
            if value in seen:
                raise ParseError(
                    f"symbol {value} repeats in column {col + 1}",
                    line=lineno, column=col + 1)
            seen[value] = lineno
    return LoopTable.from_rows([row for _, row in rows])


def serialize_table(Q: LoopTable) -> str:
    """Render the normalized table with 1-based symbols; inverse of parse."""
    return "\n".join(" ".join(str(v + 1) for v in row) for row in Q.table) + "\n"


# -- builtin catalog ----------------------------------------------------------


def _cyclic(n: int) -> LoopTable:
    return LoopTable([[(i + j) % n for j in range(n)] for i in range(n)],
                     _validate=False)


def _abelian(dims) -> LoopTable:
    n = 1
    for d in dims:
        if d < 1:
            raise UnknownName("abelian factors must be positive")
        n *= d
    def decode(x):
        out = []
        for d in dims:
            out.append(x % d)
            x //= d
        return out
    def encode(vec):
        x = 0
        for d, v in zip(reversed(dims), reversed(vec)):
            x = x * d + v
        return x
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        vi = decode(i)
        for j in range(n):
            vj = decode(j)
            table[i][j] = encode([(a + b) % d for a, b, d in zip(vi, vj, dims)])
    return LoopTable(table, _validate=False)


def _dihedral(m: int) -> LoopTable:
    """Dihedral group of order 2m: rotations r^i and reflections r^i s."""
    if m < 1:
        raise UnknownName("dihedral needs a positive rotation order")
    n = 2 * m

    def idx(rot, flip):
        return rot + m * flip

    table = [[0] * n for _ in range(n)]
    for i in range(m):
        for f in (0, 1):
            for j in range(m):
                for g in (0, 1):
                    rot = (i + (m - j if f else j)) % m
                    table[idx(i, f)][idx(j, g)] = idx(rot, f ^ g)
    return LoopTable(table, _validate=False)


def _quaternion8() -> LoopTable:
    # elements: 1, i, j, k, -1, -i, -j, -k
    basis_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        sa, ba = (1 if a < 4 else -1), a % 4
        for b in range(8):
            sb, bb = (1 if b < 4 else -1), b % 4
            sign, basis = basis_mul[(ba, bb)]
            sign *= sa * sb
            table[a][b] = basis if sign > 0 else basis + 4
    return LoopTable(table, _validate=False)


_NAME_RE = re.compile(r"^([a-z0-9_]+)(?:\((\d+(?:,\d+)*)\))?$")


def builtin(name: str) -> LoopTable:
    """A catalog table by name.

    Plain names: fig1, fig2, klein4, sym3, quaternion8. Parametrized:
    cyclic(n), dihedral(m) (order 2m), elementary_abelian(2,k), and
    abelian(d1,...,dk) for direct products of cyclic groups.
    """
    match = _NAME_RE.match(name.strip().lower())
    if not match:
        raise UnknownName(f"cannot parse builtin name {name!r}")
    base, argstr = match.groups()
    args = [int(a) for a in argstr.split(",")] if argstr else []
    if base == "fig1" and not args:
        return LoopTable.from_rows(FIG1_ROWS)
    if base == "fig2" and not args:
        return LoopTable.from_rows(FIG2_ROWS)
    if base == "cyclic" and len(args) == 1 and args[0] >= 1:
        return _cyclic(args[0])
    if base == "klein4" and not args:
        return _abelian([2, 2])
    if base == "sym3" and not args:
        return _dihedral(3)
    if base == "dihedral" and len(args) == 1:
        return _dihedral(args[0])
    if base == "quaternion8" and not args:
        return _quaternion8()
    if base == "elementary_abelian" and len(args) == 2 and args[0] == 2:
        return _abelian([2] * args[1])
    if base == "abelian" and args:
        return _abelian(args)
    raise UnknownName(f"unknown builtin {name!r}")


GROUP_CATALOG_LE_8 = (
    "cyclic(1)", "cyclic(2)", "cyclic(3)", "cyclic(4)", "klein4",
    "cyclic(5)", "cyclic(6)", "sym3", "cyclic(7)", "cyclic(8)",
    "abelian(2,4)", "elementary_abelian(2,3)", "dihedral(4)", "quaternion8",
)


# -- enumeration ---------------------------------------------------------------


def enumerate_loops(n: int, up_to_iso: bool = False,
                    max_order: int = 6) -> Iterator[LoopTable]:
    """All loops of order n as normalized tables, in lexicographic order.

    Row 0 and column 0 are fixed by normalization, so this enumerates
    reduced Latin squares, one per loop. With ``up_to_iso`` the stream is
    deduplicated by canonical form, keeping the first representative of
    each isomorphism class.
    """
    if n > max_order:
        raise BudgetExceeded(f"loop enumeration capped at order {max_order}")
    if n < 1:
        raise ValueError("order must be positive")
    seen: set[bytes] = set()
    for table in _enumerate_reduced(n):
        Q = LoopTable(table, _validate=False)
        if up_to_iso:
            form = canonical_form(Q)
            if form in seen:
                continue
            seen.add(form)
        yield Q


def _enumerate_reduced(n: int):
    if n == 1:
        yield ((0,),)
        return
    table = [[0] * n for _ in range(n)]
    table[0] = list(range(n))
    for i in range(1, n):
        table[i][0] = i
    col_used = [0] * n
    for j in range(n):
        col_used[j] = 1 << table[0][j]
    for i in range(1, n):
        col_used[0] |= 1 << i

    def fill(i: int, j: int, row_used: int):
        if j == n:
            if i == n - 1:
                yield tuple(tuple(r) for r in table)
            else:
                yield from fill(i + 1, 1, 1 << (i + 1))
            return
        for v in range(n):
            bit = 1 << v
            if row_used & bit or col_used[j] & bit:
                continue
            table[i][j] = v
            col_used[j] |= bit
            yield from fill(i, j + 1, row_used | bit)
            col_used[j] &= ~bit

    yield from fill(1, 1, 1 << 1)


def canonical_form(Q: LoopTable, max_order: int = 8) -> bytes:
    """Lexicographically minimal flattened table over identity-fixing relabelings.

    Equal canonical forms are exactly isomorphism (every loop isomorphism
    fixes the identity). Brute force over (n-1)! relabelings with early
    row-by-row abandonment against the best candidate so far.
    """
    n = Q.n
    if n > max_order:
        raise BudgetExceeded(f"canonical form capped at order {max_order}")
    if n == 1:
        return bytes([0])
    t = Q.table
    best: Optional[list[int]] = None
    for tail in permutations(range(1, n)):
        pi = (0,) + tail
        inv = [0] * n
        for i, v in enumerate(pi):
            inv[v] = i
        cand: list[int] = []
        worse = False
        for i in range(n):
            src = t[inv[i]]
            row = [pi[src[inv[j]]] for j in range(n)]
            cand.extend(row)
            if best is not None:
                upto = len(cand)
                prefix = best[upto - n:upto]
                if row > prefix:
                    worse = True
                    break
                if row < prefix:
                    best = None  # strictly better; stop comparing
        if worse:
            continue
        if best is None or cand < best:
            best = cand
    return bytes(best)


def canonical_id(Q: LoopTable) -> str:
    """Short stable identifier: order plus a digest of the canonical form."""
    digest = hashlib.sha256(canonical_form(Q)).hexdigest()[:12]
    return f"{Q.n}-{digest}"


# -- sweeps --------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    """One analyzed loop, serializable to a stable JSON line."""

    id: str
    n: int
    group: bool
    aq: int
    dq: int
    p1: tuple[int, ...]
    cond: tuple[bool, bool, bool]
    counts: tuple[Optional[int], Optional[int]]
    suite: str

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "n": self.n,
            "group": self.group,
            "aq": self.aq,
            "dq": self.dq,
            "p1": [x + 1 for x in self.p1],
            "cond": {"A": self.cond[0], "B": self.cond[1], "C": self.cond[2]},
            "counts": {"transversal": self.counts[0], "rrt": self.counts[1]},
            "suite": self.suite,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def analyze_loop(Q: LoopTable, checks: str = "hp",
                 count_order_cap: int = 8, suite_word_len: int = 4) -> SweepRecord:
    """Build the sweep record for one loop; never raises on valid tables."""
    report = hp_report(Q, with_oracle=(checks == "all"))
    counts: tuple[Optional[int], Optional[int]]
    if Q.n <= count_order_cap:
        counts = (count_selections(Q, "transversal"),
                  count_selections(Q, "regular_row_k_plex", 1))
    else:
        counts = (None, None)
    if checks == "all":
        failed = [r.claim for r in verify_theorems(Q, word_len=suite_word_len)
                  if not r.ok]
        suite = "pass" if not failed else "fail:" + failed[0]
    else:
        suite = "pass"  # hp implications were asserted by hp_report
    p1 = tuple(x for x in range(Q.n) if full_product_mask(Q, 1) >> x & 1)
    return SweepRecord(
        id=canonical_id(Q),
        n=Q.n,
        group=Q.is_group(),
        aq=report.associator_size,
        dq=report.derived_size,
        p1=p1,
        cond=(report.a, report.b, report.c),
        counts=counts,
        suite=suite,
    )


def _sweep_worker(args) -> SweepRecord:
    table, checks, count_cap, word_len = args
    Q = LoopTable(table, _validate=False)
    try:
        return analyze_loop(Q, checks=checks, count_order_cap=count_cap,
                            suite_word_len=word_len)
    except LoopplexError as exc:
        return SweepRecord(
            id=canonical_id(Q), n=Q.n, group=Q.is_group(), aq=0, dq=0, p1=(),
            cond=(False, False, False), counts=(None, None),
            suite=f"fail:error:{type(exc).__name__}",
        )


def run_sweep(orders, checks: str = "hp", up_to_iso: bool = False,
              workers: int = 1, count_order_cap: int = 8,
              suite_word_len: int = 4, max_order: int = 6) -> list[SweepRecord]:
    """Analyze every loop of the given orders; records sorted by canonical id.

    Per-loop failures are recorded in the ``suite`` field rather than
    aborting the sweep. Worker counts only change wall time, never the
    record list.
    """
    jobs = []
    for n in orders:
        for Q in enumerate_loops(n, up_to_iso=up_to_iso, max_order=max_order):
            jobs.append((Q.table, checks, count_order_cap, suite_word_len))
    if workers > 1 and len(jobs) > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            records = pool.map(_sweep_worker, jobs, chunksize=64)
    else:
        records = [_sweep_worker(job) for job in jobs]
    records.sort(key=lambda r: (r.n, r.id))
    return records
