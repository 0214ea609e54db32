"""Exact rational linear algebra with canonical subspaces.

Everything combinatorial in this package reduces to row operations over Q.
A subspace of R^n is stored in a canonical form: the reduced row echelon
basis, with each row rescaled to a primitive integer vector (gcd of entries
1, leading entry positive).  Two Subspace values are equal iff their stored
rows are equal, which makes deduplication a set lookup.

Internally the elimination is fraction-free over Python integers: rows are
cleared of denominators up front and kept primitive after every update.
This is observationally identical to naive elimination over Fraction (the
test suite checks that on random inputs) but several times faster, which
matters because the subspace search performs hundreds of thousands of row
reductions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

RationalScalar = Fraction

_FULL_CACHE: dict = {}

Vector = Sequence  # rational entries: int, Fraction, or "p/q" strings


def parse_rational(text) -> Fraction:
    """Parse "p" or "p/q" (q > 0 after reduction). Accepts ints unchanged."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable rectangular matrix over Q."""

    entries: tuple
    cols: int

    @property
    def rows(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Vector], cols: int | None = None) -> "RationalMatrix":
        """Build from an iterable of rows; entries may be ints, Fractions,
        or rational strings.  `cols` is required when rows is empty."""
        parsed = tuple(tuple(parse_rational(x) for x in row) for row in rows)
        if parsed:
            width = len(parsed[0])
            if any(len(r) != width for r in parsed):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError(f"expected {cols} columns, got {width}")
            cols = width
        elif cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return cls(parsed, cols)

    def row(self, i: int) -> tuple:
        return self.entries[i]


def _int_rows(rows: Iterable[Vector]) -> list:
    """Clear denominators row by row (row spans are scale-invariant)."""
    out = []
    for row in rows:
        fr = [parse_rational(x) for x in row]
        l = 1
        for x in fr:
            d = x.denominator
            l = l * d // gcd(l, d)
        out.append([int(x * l) for x in fr])
    return out


def _canonical_rows(rows: list, n: int) -> tuple:
    """Canonical basis rows (RREF + primitive scaling) of an integer row
    span, fraction-free.  The workhorse of the whole package."""
    ech: list = []  # (pivot column, primitive row with positive lead), sorted
    m = 0
    for row in rows:
        row = list(row)
        for pc, prow in ech:
            a = row[pc]
            if a:
                b = prow[pc]
                row = [x * b - y * a for x, y in zip(row, prow)]
        pc = -1
        for i, x in enumerate(row):
            if x:
                pc = i
                break
        if pc < 0:
            continue
        g = gcd(*row)
        if row[pc] < 0:
            g = -g
        lo = 0
        while lo < m and ech[lo][0] < pc:
            lo += 1
        ech.insert(lo, (pc, [x // g for x in row]))
        m += 1
    # back-elimination: clear each pivot column above its row
    for i in range(m - 1, 0, -1):
        pc, prow = ech[i]
        b = prow[pc]
        for k in range(i):
            kpc, krow = ech[k]
            a = krow[pc]
            if a:
                krow = [x * b - y * a for x, y in zip(krow, prow)]
                g = gcd(*krow)
                ech[k] = (kpc, [x // g for x in krow])
    return tuple(tuple(r) for _, r in ech)


def sum_rows(ech_pairs, rows, ambient_dim: int):
    """Canonical rows of an echelon basis joined with extra integer rows,
    or None when the extra rows add nothing.

    `ech_pairs` are the (pivot, row) pairs a Subspace caches for its
    canonical basis, so only the incoming rows need elimination, and the
    closing back-elimination touches just the pivot columns they added.
    """
    n = ambient_dim
    ech = list(ech_pairs)
    m = len(ech)
    new_pos: list = []
    for row in rows:
        if m == n:
            break
        for pc, prow in ech:
            a = row[pc]
            if a:
                b = prow[pc]
                row = [x * b - y * a for x, y in zip(row, prow)]
        pc = -1
        for i, x in enumerate(row):
            if x:
                pc = i
                break
        if pc < 0:
            continue
        g = gcd(*row)
        if row[pc] < 0:
            g = -g
        if g != 1:
            row = [x // g for x in row]
        lo = 0
        while lo < m and ech[lo][0] < pc:
            lo += 1
        if new_pos:
            new_pos = [q + 1 if q >= lo else q for q in new_pos]
        new_pos.append(lo)
        ech.insert(lo, (pc, row))
        m += 1
    if not new_pos:
        return None
    if m == n:
        return Subspace.full(n).rows
    for p in sorted(new_pos, reverse=True):
        pc, prow = ech[p]
        b = prow[pc]
        for k in range(p):
            kpc, krow = ech[k]
            a = krow[pc]
            if a:
                krow = [x * b - y * a for x, y in zip(krow, prow)]
                g = gcd(*krow)
                if g != 1:
                    krow = [x // g for x in krow]
                ech[k] = (kpc, krow)
    return tuple(tuple(r) for _, r in ech)


def rref(matrix: RationalMatrix) -> RationalMatrix:
    """Reduced row echelon form, zero rows removed (exact, unique)."""
    canon = _canonical_rows(_int_rows(matrix.entries), matrix.cols)
    out = []
    for row in canon:
        lead = next(x for x in row if x)
        out.append(tuple(Fraction(x, lead) for x in row))
    return RationalMatrix(tuple(out), matrix.cols)


@dataclass(frozen=True)
class Subspace:
    """A rational linear subspace of R^n in canonical basis form.

    `rows` holds the canonical basis as integer tuples (see module
    docstring); it is empty for the zero subspace.  Instances are created
    through canonicalize/span/zero/full so the invariant always holds.
    """

    ambient_dim: int
    rows: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> RationalMatrix:
        return RationalMatrix(
            tuple(tuple(Fraction(x) for x in row) for row in self.rows),
            self.ambient_dim,
        )

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        sub = _FULL_CACHE.get(ambient_dim)
        if sub is None:
            rows = tuple(
                tuple(1 if j == i else 0 for j in range(ambient_dim))
                for i in range(ambient_dim)
            )
            sub = cls(ambient_dim, rows)
            _FULL_CACHE[ambient_dim] = sub
        return sub

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.ambient_dim, self.rows))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def pivots(self) -> tuple:
        """Column index of each basis row's leading entry (cached)."""
        p = self.__dict__.get("_pivots")
        if p is None:
            p = tuple(
                next(i for i, x in enumerate(r) if x) for r in self.rows
            )
            object.__setattr__(self, "_pivots", p)
        return p

    @property
    def ech_pairs(self) -> tuple:
        """(pivot, row) pairs ready to seed an elimination (cached)."""
        p = self.__dict__.get("_ech")
        if p is None:
            p = tuple(zip(self.pivots, self.rows))
            object.__setattr__(self, "_ech", p)
        return p

    @property
    def orth(self) -> "Subspace":
        """Orthogonal complement (cached, with the back link to self).

        Complements turn meets into joins: A ∩ B = (A⊥ + B⊥)⊥.  The
        subspace search leans on that to compute each intersection in
        whichever of the two representations has fewer basis rows.
        """
        o = self.__dict__.get("_orth")
        if o is None:
            o = Subspace(
                self.ambient_dim,
                complement_rows(self.rows, self.ambient_dim, self.pivots),
            )
            object.__setattr__(o, "_orth", self)
            object.__setattr__(self, "_orth", o)
        return o

    @classmethod
    def span(cls, ambient_dim: int, generators: Iterable[Vector]) -> "Subspace":
        return canonicalize(ambient_dim, generators)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.ambient_dim

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def sum(self, other: "Subspace") -> "Subspace":
        return self.sum_intersect(other)[0]

    def intersect(self, other: "Subspace") -> "Subspace":
        return self.sum_intersect(other)[1]

    def sum_intersect(self, other: "Subspace") -> tuple:
        """(self + other, self ∩ other) in one pass.

        Degenerate and nested cases are answered without elimination; the
        general case does one elimination for the sum and, only when the
        intersection is proper, one Zassenhaus elimination for it.
        """
        self._check_ambient(other)
        n = self.ambient_dim
        if not self.rows or other.dim == n:
            return other, self
        if not other.rows or self.dim == n:
            return self, other
        if self.rows == other.rows:
            return self, self
        total = self.sum_with_rows(other.rows)
        ds = total.dim
        di = self.dim + other.dim - ds
        if di == 0:
            return total, Subspace(n, ())
        if di == self.dim:
            return total, self
        if di == other.dim:
            return total, other
        return total, Subspace(n, intersect_rows(self.rows, other.rows, n,
                                                 di))

    def sum_with_rows(self, rows: Iterable) -> "Subspace":
        """Span of this subspace plus extra integer rows (fast path: this
        basis is already reduced, only the new rows get eliminated)."""
        out = sum_rows(self.ech_pairs, rows, self.ambient_dim)
        if out is None:
            return self
        if len(out) == self.ambient_dim:
            return Subspace.full(self.ambient_dim)
        return Subspace(self.ambient_dim, out)

    def sum_dim(self, rows: Iterable) -> int:
        """dim(self + span(rows)) without building the canonical basis.
        Forward elimination only; the hot path of the dimension search."""
        ech = list(self.ech_pairs)
        n = self.ambient_dim
        for row in rows:
            if len(ech) == n:
                break
            row = list(row)
            for pc, prow in ech:
                a = row[pc]
                if a:
                    b = prow[pc]
                    row = [x * b - y * a for x, y in zip(row, prow)]
            pc = -1
            for i, x in enumerate(row):
                if x:
                    pc = i
                    break
            if pc < 0:
                continue
            lo = 0
            while lo < len(ech) and ech[lo][0] < pc:
                lo += 1
            ech.insert(lo, (pc, row))
        return len(ech)

    def contains(self, vector: Vector) -> bool:
        """Membership test: true iff the vector lies in the subspace."""
        row = _int_rows([vector])[0]
        if len(row) != self.ambient_dim:
            raise ValueError(
                f"vector length {len(row)} != ambient {self.ambient_dim}"
            )
        for prow in self.rows:
            pc = next(i for i, x in enumerate(prow) if x)
            a = row[pc]
            if a:
                b = prow[pc]
                row = [x * b - y * a for x, y in zip(row, prow)]
        return not any(row)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        if other.dim > self.dim:
            return False
        return all(self.contains(r) for r in other.rows)

    def sort_key(self) -> tuple:
        return (len(self.rows), self.rows)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.is_zero():
            return f"Subspace({self.ambient_dim}, zero)"
        return f"Subspace({self.ambient_dim}, {list(map(list, self.rows))})"


def canonicalize(ambient_dim: int, generators) -> Subspace:
    """Canonical Subspace spanned by the given rows.

    `generators` may be a RationalMatrix or any iterable of rational rows;
    an empty generator set gives the zero subspace.
    """
    if ambient_dim < 0:
        raise ValueError("ambient_dim < 0")
    if isinstance(generators, RationalMatrix):
        if generators.cols != ambient_dim and generators.rows > 0:
            raise ValueError(
                f"generators have {generators.cols} columns, ambient is {ambient_dim}"
            )
        rows = generators.entries
    else:
        rows = list(generators)
    int_rows = _int_rows(rows)
    for r in int_rows:
        if len(r) != ambient_dim:
            raise ValueError(
                f"generator length {len(r)} != ambient {ambient_dim}"
            )
    return Subspace(ambient_dim, _canonical_rows(int_rows, ambient_dim))


def intersect_rows(rows_a, rows_b, ambient_dim: int,
                   expected_dim: int | None = None,
                   pivots_a=None) -> tuple:
    """Canonical basis rows of span(rows_a) ∩ span(rows_b).

    Zassenhaus trick, done incrementally: the echelon starts from the rows
    [a|a], each row [b|0] is eliminated against it on the left half with
    the right half carried along, and a b-row whose left half dies leaves
    an intersection vector in its right half.  The rows collected that way
    are independent (the stacked matrix has full rank) and there are
    exactly dim A + dim B − dim(A+B) of them, so one small canonical pass
    over them finishes the job, far cheaper than reducing the doubled
    matrix outright.

    A caller that already knows dim(A+B) can pass the intersection
    dimension as `expected_dim` to stop as soon as that many rows are in
    hand, and the pivot columns of rows_a as `pivots_a` to skip the scan.
    """
    n = ambient_dim
    if pivots_a is None:
        pivots_a = [next(i for i, x in enumerate(r) if x) for r in rows_a]
    ech = [(p, r, r) for p, r in zip(pivots_a, rows_a)]
    m = len(ech)
    out = []
    zero_right = (0,) * n
    for row in rows_b:
        left, right = row, zero_right
        for pc, pl, pr in ech:
            x = left[pc]
            if x:
                b = pl[pc]
                left = [u * b - v * x for u, v in zip(left, pl)]
                right = ([-v * x for v in pr] if right is zero_right
                         else [u * b - v * x for u, v in zip(right, pr)])
        piv = -1
        for i, x in enumerate(left):
            if x:
                piv = i
                break
        if piv < 0:
            if expected_dim == 1:
                # a line needs no reduction, just primitive scaling
                g = gcd(*right)
                if next(x for x in right if x) < 0:
                    g = -g
                return (tuple(x // g for x in right),)
            out.append(right)
            if len(out) == expected_dim:
                break
            continue
        g = gcd(*left, *right)
        if left[piv] < 0:
            g = -g
        if g != 1:
            left = [x // g for x in left]
            right = [x // g for x in right]
        lo = 0
        while lo < m and ech[lo][0] < piv:
            lo += 1
        ech.insert(lo, (piv, left, right))
        m += 1
    return _canonical_rows(out, n)


def complement_rows(rows, ambient_dim: int, pivots=None) -> tuple:
    """Canonical basis rows of the orthogonal complement of span(rows).

    The rows must already be canonical.  Their pivot columns are then
    cleared everywhere else, so each free column yields one integer kernel
    vector by back-substitution: put the lcm of the pivot entries in the
    free slot and solve each pivot coordinate independently.
    """
    n = ambient_dim
    k = len(rows)
    if k == 0:
        return Subspace.full(n).rows
    if k == n:
        return ()
    if pivots is None:
        pivots = [next(i for i, x in enumerate(r) if x) for r in rows]
    leads = [r[p] for r, p in zip(rows, pivots)]
    big = lcm(*leads)
    taken = set(pivots)
    out = []
    for f in range(n):
        if f in taken:
            continue
        v = [0] * n
        v[f] = big
        for r, p, l in zip(rows, pivots, leads):
            x = r[f]
            if x:
                v[p] = -x * (big // l)
        out.append(v)
    return _canonical_rows(out, n)


def direct_sum(a: Subspace, b: Subspace) -> Subspace:
    """Block-diagonal sum inside R^(n_a + n_b).

    Padding canonical rows with zeros keeps pivots ordered, rows primitive
    and pivot columns clear, so the result is built directly.
    """
    na, nb = a.ambient_dim, b.ambient_dim
    rows = tuple(r + (0,) * nb for r in a.rows)
    rows += tuple((0,) * na + r for r in b.rows)
    return Subspace(na + nb, rows)
