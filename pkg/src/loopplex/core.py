"""Finite loops as normalized Cayley tables.

A loop of order n is stored as an n x n table of element indices in
0..n-1 with element 0 the identity: ``table[i][j]`` is the product i*j,
row 0 and column 0 are the identity row/column, and every row and column
is a permutation of 0..n-1. Construction from raw Latin squares relabels
symbols so this normalization always holds.

Everything here is immutable after construction and safe to share across
threads or processes; all operations are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, Optional, Sequence

from .errors import NotASubloop, NotLatin, NotNormal, RaggedInput

Side = Literal["left", "right"]


@dataclass(frozen=True)
class Perm:
    """A permutation of 0..n-1 given by its image tuple."""

    image: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    def __post_init__(self) -> None:
        n = len(self.image)
        if sorted(self.image) != list(range(n)):
            raise ValueError("image is not a bijection on 0..n-1")

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __len__(self) -> int:
        return len(self.image)

    def __mul__(self, other: "Perm") -> "Perm":
        """Composition: (p * q)(x) = p(q(x)), so q acts first."""
        return Perm(tuple(self.image[other.image[x]] for x in range(len(self.image))))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.image)
        for i, v in enumerate(self.image):
            inv[v] = i
        return Perm(tuple(inv))

    @property
    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.image))

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted cycle lengths; a conjugation invariant."""
        n = len(self.image)
        seen = [False] * n
        lengths = []
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.image[x]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths))

    def order(self) -> int:
        from math import lcm

        return lcm(*self.cycle_type())


@dataclass(frozen=True)
class ElementSet:
    """A subset of the elements 0..n-1 of a fixed loop, as a bitmask."""

    n: int
    mask: int

    @classmethod
    def from_elements(cls, n: int, elements) -> "ElementSet":
        mask = 0
        for x in elements:
            if not 0 <= x < n:
                raise ValueError(f"element {x} out of range for order {n}")
            mask |= 1 << x
        return cls(n, mask)

    @classmethod
    def empty(cls, n: int) -> "ElementSet":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "ElementSet":
        return cls(n, (1 << n) - 1)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.n and self.mask >> x & 1 == 1

    def __iter__(self) -> Iterator[int]:
        for x in range(self.n):
            if self.mask >> x & 1:
                yield x

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def _check_same(self, other: "ElementSet") -> None:
        if self.n != other.n:
            raise ValueError("element sets live in different loops")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._check_same(other)
        return ElementSet(self.n, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._check_same(other)
        return ElementSet(self.n, self.mask & other.mask)

    def __le__(self, other: "ElementSet") -> bool:
        self._check_same(other)
        return self.mask & ~other.mask == 0


@dataclass(frozen=True)
class Letter:
    """One translation in a word: L_x or R_x, possibly inverted."""

    side: Side
    element: int
    exponent: int = 1

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ValueError(f"bad side {self.side!r}")
        if self.exponent not in (1, -1):
            raise ValueError("exponent must be +1 or -1")


# A word in the multiplication group, kept symbolic: the group itself is
# never materialized. Letters act rightmost-first, matching the usual
# composition order of L_{a_1} L_{a_2} ... L_{a_k}.
TranslationWord = tuple[Letter, ...]


class LoopTable:
    """A finite loop given by its normalized multiplication table."""

    __slots__ = ("n", "table", "symbols", "_ld", "_rd", "_rt", "_cache")

    def __init__(self, table, symbols=None, _validate: bool = True):
        rows = tuple(tuple(row) for row in table)
        n = len(rows)
        if _validate:
            _validate_normalized(rows)
        self.n = n
        self.table = rows
        self.symbols = tuple(symbols) if symbols is not None else tuple(range(1, n + 1))
        self._ld: Optional[tuple[tuple[int, ...], ...]] = None
        self._rd: Optional[tuple[tuple[int, ...], ...]] = None
        self._rt: Optional[tuple[tuple[int, ...], ...]] = None
        self._cache: dict = {}

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "LoopTable":
        """Normalize a raw Latin square into a loop table.

        Symbols may be anything hashable. Rows are reordered so the first
        column repeats the first row, then symbols are relabeled by their
        position in the first row; the resulting element 0 is a two-sided
        identity. The original symbols are recorded in ``symbols`` (index
        i held symbol ``symbols[i]``).
        """
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0:
            raise RaggedInput("empty table")
        for r in rows:
            if len(r) != n:
                raise RaggedInput(f"expected {n} columns, got {len(r)}")
        header = rows[0]
        index_of = {}
        for j, s in enumerate(header):
            if s in index_of:
                raise NotLatin(f"symbol {s!r} repeats in row 0")
            index_of[s] = j
        universe = frozenset(index_of)
        for i, r in enumerate(rows):
            if frozenset(r) != universe or len(set(r)) != n:
                raise NotLatin(f"row {i} is not a permutation of the symbols")
        for j in range(n):
            col = [rows[i][j] for i in range(n)]
            if len(set(col)) != n:
                raise NotLatin(f"column {j} repeats a symbol")
        row_pos = {rows[i][0]: i for i in range(n)}
        table = tuple(
            tuple(index_of[rows[row_pos[header[i]]][j]] for j in range(n))
            for i in range(n)
        )
        return cls(table, symbols=header, _validate=False)

    # -- basic operations ------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def left_division_table(self) -> tuple[tuple[int, ...], ...]:
        """ld[x][z] is the unique y with x*y = z."""
        if self._ld is None:
            n = self.n
            ld = [[0] * n for _ in range(n)]
            for x in range(n):
                row = self.table[x]
                lx = ld[x]
                for y in range(n):
                    lx[row[y]] = y
            self._ld = tuple(tuple(r) for r in ld)
        return self._ld

    def right_division_table(self) -> tuple[tuple[int, ...], ...]:
        """rd[x][z] is the unique y with y*x = z."""
        if self._rd is None:
            n = self.n
            rd = [[0] * n for _ in range(n)]
            for y in range(n):
                row = self.table[y]
                for x in range(n):
                    rd[x][row[x]] = y
            self._rd = tuple(tuple(r) for r in rd)
        return self._rd

    def divide(self, side: Side, x: int, z: int) -> int:
        """Solve for y: left gives x*y = z, right gives y*x = z."""
        if side == "left":
            return self.left_division_table()[x][z]
        if side == "right":
            return self.right_division_table()[x][z]
        raise ValueError(f"bad side {side!r}")

    def right_translation_table(self) -> tuple[tuple[int, ...], ...]:
        """rt[x][y] = y*x, the columns of the table."""
        if self._rt is None:
            self._rt = tuple(
                tuple(self.table[y][x] for y in range(self.n)) for x in range(self.n))
        return self._rt

    def translation(self, side: Side, x: int) -> Perm:
        if side == "left":
            return Perm(self.table[x])
        if side == "right":
            return Perm(self.right_translation_table()[x])
        raise ValueError(f"bad side {side!r}")

    def is_group(self) -> bool:
        if "is_group" not in self._cache:
            self._cache["is_group"] = self._check_associative()
        return self._cache["is_group"]

    def _check_associative(self) -> bool:
        n, t = self.n, self.table
        for x in range(n):
            tx = t[x]
            for y in range(n):
                txy = t[tx[y]]
                ty = t[y]
                for z in range(n):
                    if txy[z] != tx[ty[z]]:
                        return False
        return True

    def is_abelian_group(self) -> bool:
        n, t = self.n, self.table
        for x in range(n):
            for y in range(x):
                if t[x][y] != t[y][x]:
                    return False
        return self.is_group()

    def relabel(self, perm: Perm) -> "LoopTable":
        """Apply an identity-fixing relabeling, giving an isomorphic loop."""
        if perm(0) != 0:
            raise ValueError("relabeling must fix the identity")
        inv = perm.inverse()
        n = self.n
        table = tuple(
            tuple(perm(self.table[inv(i)][inv(j)]) for j in range(n))
            for i in range(n)
        )
        return LoopTable(table, _validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, LoopTable) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"LoopTable(order={self.n})"


def _validate_normalized(rows: tuple[tuple[int, ...], ...]) -> None:
    n = len(rows)
    full = frozenset(range(n))
    for i, r in enumerate(rows):
        if len(r) != n:
            raise RaggedInput(f"expected {n} columns, got {len(r)}")
        if frozenset(r) != full:
            raise NotLatin(f"row {i} is not a permutation of 0..{n - 1}")
    for j in range(n):
        if frozenset(rows[i][j] for i in range(n)) != full:
            raise NotLatin(f"column {j} is not a permutation of 0..{n - 1}")
    if rows[0] != tuple(range(n)):
        raise NotLatin("row 0 is not the identity row")
    if any(rows[i][0] != i for i in range(n)):
        raise NotLatin("column 0 is not the identity column")


# -- inner mappings ------------------------------------------------------


def inner_generators(Q: LoopTable) -> list[Perm]:
    """The standard generators of the inner mapping group.

    Returns the deduplicated permutations of the three families
    ``L(x,y) = L_{yx}^{-1} L_y L_x``, ``R(x,y) = R_{xy}^{-1} R_y R_x`` and
    ``T(x) = R_x^{-1} L_x``. Every one of them fixes 0, so invariance of a
    set under this list is the normality test.
    """
    if "inner_generators" in Q._cache:
        return Q._cache["inner_generators"]
    n, t = Q.n, Q.table
    ld = Q.left_division_table()
    rd = Q.right_division_table()
    images = set()
    for x in range(n):
        tx = t[x]
        for y in range(n):
            ty = t[y]
            yx = ty[x]
            images.add(tuple(ld[yx][ty[tx[z]]] for z in range(n)))
            xy = tx[y]
            images.add(tuple(rd[xy][t[t[z][x]][y]] for z in range(n)))
        images.add(tuple(rd[x][tx[z]] for z in range(n)))
    gens = [Perm(img) for img in sorted(images)]
    Q._cache["inner_generators"] = gens
    return gens


# -- subloops and normality ----------------------------------------------


def _close_subloop_mask(Q: LoopTable, mask: int) -> int:
    n, t = Q.n, Q.table
    ld = Q.left_division_table()
    rd = Q.right_division_table()
    mask |= 1
    while True:
        grown = mask
        elems = [x for x in range(n) if mask >> x & 1]
        for a in elems:
            for b in elems:
                grown |= 1 << t[a][b]
                grown |= 1 << ld[a][b]
                grown |= 1 << rd[a][b]
        if grown == mask:
            return mask
        mask = grown


def subloop_closure(Q: LoopTable, S: ElementSet) -> ElementSet:
    """Smallest subloop containing S."""
    return ElementSet(Q.n, _close_subloop_mask(Q, S.mask))


def is_subloop(Q: LoopTable, S: ElementSet) -> bool:
    """True iff S contains the identity and is closed under * and both divisions."""
    if not S:
        return False
    return _close_subloop_mask(Q, S.mask) == S.mask and 0 in S


def is_normal(Q: LoopTable, S: ElementSet) -> bool:
    """True iff the subloop S is mapped onto itself by every inner generator."""
    if not is_subloop(Q, S):
        raise NotASubloop("normality is only defined for subloops")
    key = ("is_normal", S.mask)
    if key not in Q._cache:
        Q._cache[key] = _is_invariant_mask(Q, S.mask)
    return Q._cache[key]

def _is_invariant_mask(Q: LoopTable, mask: int) -> bool:
    for g in inner_generators(Q):
        image = 0
        for x in range(Q.n):
            if mask >> x & 1:
                image |= 1 << g.image[x]
        if image != mask:
            return False
    return True


def _normal_closure_mask(Q: LoopTable, mask: int) -> int:
    gens = inner_generators(Q)
    mask = _close_subloop_mask(Q, mask | 1)
    while True:
        grown = mask
        for g in gens:
            for x in range(Q.n):
                if mask >> x & 1:
                    grown |= 1 << g.image[x]
        if grown == mask:
            return mask
        mask = _close_subloop_mask(Q, grown)


def normal_closure(Q: LoopTable, S: ElementSet) -> ElementSet:
    """Smallest normal subloop containing S.

    Alternates subloop closure with saturation under the inner generators
    until a fixpoint; the result always passes :func:`is_normal`.
    """
    return ElementSet(Q.n, _normal_closure_mask(Q, S.mask))


# -- cosets and quotients ------------------------------------------------


@dataclass(frozen=True)
class CosetPartition:
    """Partition of a loop into cosets of a normal subloop."""

    subloop: ElementSet
    index_of: tuple[int, ...]
    representatives: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.representatives)

    def coset_members(self, i: int) -> tuple[int, ...]:
        return tuple(x for x, c in enumerate(self.index_of) if c == i)

    def coset_mask(self, i: int) -> int:
        m = 0
        for x, c in enumerate(self.index_of):
            if c == i:
                m |= 1 << x
        return m


def _cosets_of_mask(Q: LoopTable, nmask: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    key = ("cosets", nmask)
    if key in Q._cache:
        return Q._cache[key]
    n, t = Q.n, Q.table
    members = [s for s in range(n) if nmask >> s & 1]
    index_of = [-1] * n
    reps = []
    for x in range(n):
        if index_of[x] < 0:
            ci = len(reps)
            reps.append(x)
            for s in members:
                index_of[t[x][s]] = ci
    result = (tuple(index_of), tuple(reps))
    Q._cache[key] = result
    return result


def quotient(Q: LoopTable, N: ElementSet) -> tuple[LoopTable, CosetPartition]:
    """The quotient loop Q/N on coset indices, with the partition used.

    Requires N normal. Well-definedness of the coset product is verified
    outright: the product coset may not depend on the representatives.
    """
    if not is_normal(Q, N):
        raise NotNormal("quotient requires a normal subloop")
    index_of, reps = _cosets_of_mask(Q, N.mask)
    size = len(N)
    counts = [0] * len(reps)
    for c in index_of:
        counts[c] += 1
    assert all(c == size for c in counts), "cosets do not partition evenly"
    m = len(reps)
    qtable = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            qtable[i][j] = index_of[Q.table[reps[i]][reps[j]]]
    # product coset must be representative independent
    for x in range(Q.n):
        for y in range(Q.n):
            if index_of[Q.table[x][y]] != qtable[index_of[x]][index_of[y]]:
                raise NotNormal("coset product depends on representatives")
    part = CosetPartition(N, tuple(index_of), tuple(reps))
    return LoopTable(qtable, _validate=False), part


# -- translation words ---------------------------------------------------


def _letter_image(Q: LoopTable, letter: Letter) -> tuple[int, ...]:
    """The image tuple of one translation letter.

    The inverse of a left translation by x is the left-division row of x,
    likewise on the right, so no permutation inversion is ever built.
    """
    if not 0 <= letter.element < Q.n:
        raise ValueError(f"letter element {letter.element} out of range")
    if letter.side == "left":
        if letter.exponent == 1:
            return Q.table[letter.element]
        return Q.left_division_table()[letter.element]
    if letter.exponent == 1:
        return Q.right_translation_table()[letter.element]
    return Q.right_division_table()[letter.element]


def evaluate_word(Q: LoopTable, word: TranslationWord) -> Perm:
    """The permutation of Q given by a word of translations.

    The rightmost letter acts first. The empty word is the identity.
    """
    image = list(range(Q.n))
    for letter in word:
        img = _letter_image(Q, letter)
        image = [image[img[x]] for x in range(Q.n)]
    return Perm(tuple(image))


def induced_map(Q: LoopTable, word: TranslationWord, N: ElementSet) -> Perm:
    """The permutation induced on cosets of N by a translation word.

    For normal N the induced map is always well defined; this is asserted
    by checking every representative, not assumed.
    """
    if not is_normal(Q, N):
        raise NotNormal("induced maps require a normal subloop")
    perm = evaluate_word(Q, word)
    index_of, reps = _cosets_of_mask(Q, N.mask)
    m = len(reps)
    image = [-1] * m
    for x in range(Q.n):
        ci = index_of[x]
        target = index_of[perm(x)]
        if image[ci] < 0:
            image[ci] = target
        else:
            assert image[ci] == target, "induced map not well defined on a normal subloop"
    return Perm(tuple(image))


# -- associator and derived subloops --------------------------------------


def _associator_seed_mask(Q: LoopTable, with_commutators: bool) -> int:
    n, t = Q.n, Q.table
    ld = Q.left_division_table()
    seeds = 1
    for x in range(n):
        tx = t[x]
        for y in range(n):
            ty = t[y]
            txy = t[tx[y]]
            if with_commutators:
                seeds |= 1 << ld[ty[x]][tx[y]]
            for z in range(n):
                seeds |= 1 << ld[tx[ty[z]]][txy[z]]
    return seeds


def _smallest_normal_with_quotient(Q: LoopTable, with_commutators: bool) -> int:
    """Fixpoint core shared by the associator and derived subloops.

    Seeds with all associator elements (x*(y*z)) \\ ((x*y)*z), plus the
    commutator elements (y*x) \\ (x*y) when requested, takes the normal
    closure, and re-seeds with the quotient's own associators (and
    commutators) lifted back until the quotient passes the target check.
    The chain of subloops grows strictly, so at most n rounds run.
    """
    check = LoopTable.is_abelian_group if with_commutators else LoopTable.is_group
    mask = _normal_closure_mask(Q, _associator_seed_mask(Q, with_commutators))
    while True:
        Qbar, part = quotient(Q, ElementSet(Q.n, mask))
        if check(Qbar):
            return mask
        lifted = _associator_seed_mask(Qbar, with_commutators)
        grown = mask
        for x in range(Q.n):
            if lifted >> part.index_of[x] & 1:
                grown |= 1 << x
        mask = _normal_closure_mask(Q, grown)


def associator_subloop(Q: LoopTable) -> ElementSet:
    """A(Q): the smallest normal subloop whose quotient is a group."""
    if "associator" not in Q._cache:
        Q._cache["associator"] = _smallest_normal_with_quotient(Q, with_commutators=False)
    return ElementSet(Q.n, Q._cache["associator"])


def derived_subloop(Q: LoopTable) -> ElementSet:
    """Q': the smallest normal subloop whose quotient is an Abelian group."""
    if "derived" not in Q._cache:
        Q._cache["derived"] = _smallest_normal_with_quotient(Q, with_commutators=True)
    return ElementSet(Q.n, Q._cache["derived"])


# -- isomorphism -----------------------------------------------------------


def _element_signature(Q: LoopTable) -> list[tuple]:
    """Per-element invariants used to prune the isomorphism search."""
    sig = []
    for x in range(Q.n):
        left = Q.translation("left", x)
        right = Q.translation("right", x)
        sig.append((left.cycle_type(), right.cycle_type(), Q.table[x][x] == 0, Q.table[x][x] == x))
    return sig


def is_isomorphic(Q1: LoopTable, Q2: LoopTable) -> Optional[Perm]:
    """An identity-fixing isomorphism Q1 -> Q2, or None.

    Backtracks over images of successive elements; candidate images must
    match translation cycle-type invariants and every product already
    determined by the partial map. Candidates are tried in ascending
    index order, so the returned isomorphism is deterministic.
    """
    if Q1.n != Q2.n:
        return None
    n = Q1.n
    sig1, sig2 = _element_signature(Q1), _element_signature(Q2)
    if sorted(sig1) != sorted(sig2):
        return None
    image = [-1] * n
    used = [False] * n
    image[0] = 0
    used[0] = True

    def consistent(x: int) -> bool:
        for y in range(n):
            if image[y] < 0:
                continue
            xy = Q1.table[x][y]
            if image[xy] >= 0 and Q2.table[image[x]][image[y]] != image[xy]:
                return False
            yx = Q1.table[y][x]
            if image[yx] >= 0 and Q2.table[image[y]][image[x]] != image[yx]:
                return False
        return True

    def extend(x: int) -> bool:
        if x == n:
            return True
        for cand in range(n):
            if used[cand] or sig2[cand] != sig1[x]:
                continue
            image[x] = cand
            used[cand] = True
            if consistent(x) and extend(x + 1):
                return True
            used[cand] = False
            image[x] = -1
        return False

    if extend(1):
        return Perm(tuple(image))
    return None
