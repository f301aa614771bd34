"""Exact integer lattices: Hermite and Smith normal forms, quotient groups.

Rows are kept sparse (``{column: value}`` dicts) internally since the
spanning matrices produced by the series engine are very sparse.  The
public functions accept dense row sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush
from math import gcd
from typing import Iterable, Mapping, Sequence

SparseRow = dict  # dict[int, int], no zero values


class ContainmentViolation(ValueError):
    """Raised when a quotient U/V is requested but V is not a sublattice of U."""


class DimensionMismatch(ValueError):
    pass


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def to_sparse(row: Sequence[int]) -> SparseRow:
    return {j: int(x) for j, x in enumerate(row) if x}


def to_dense(row: Mapping[int, int], m: int) -> list[int]:
    out = [0] * m
    for j, x in row.items():
        out[j] = x
    return out


def _axpy(v: SparseRow, q: int, row: Mapping[int, int]) -> None:
    # v += q * row, in place
    for j, x in row.items():
        y = v.get(j, 0) + q * x
        if y:
            v[j] = y
        else:
            v.pop(j, None)


def _combine(a: int, u: Mapping[int, int], b: int, v: Mapping[int, int]) -> SparseRow:
    out = {j: a * x for j, x in u.items()} if a else {}
    if b:
        _axpy(out, b, v)
    return out


class LatticeBuilder:
    """A Hermite-reduced row basis over Z that grows one vector at a time.

    Rows are keyed by pivot column; pivots are positive and every entry in
    another row's pivot column lies in ``[0, pivot)`` after each insertion.
    Keeping the basis reduced throughout stops coefficient blow-up.
    """

    __slots__ = ("m", "rows")

    def __init__(self, m: int):
        self.m = m
        self.rows: dict[int, SparseRow] = {}

    def copy(self) -> LatticeBuilder:
        other = LatticeBuilder(self.m)
        other.rows = {c: dict(r) for c, r in self.rows.items()}
        return other

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _tail_reduce(self, row: SparseRow, after: int) -> None:
        rows = self.rows
        todo = [j for j in row if j > after and j in rows]
        heapify(todo)
        last = after
        while todo:
            j = heappop(todo)
            if j <= last:
                continue
            last = j
            x = row.get(j)
            if x is None:
                continue
            piv = rows[j]
            p = piv[j]
            if 0 <= x < p:
                continue
            _axpy(row, -(x // p), piv)
            for i in piv:
                if i > j and i in rows:
                    heappush(todo, i)

    def _place(self, c: int, row: SparseRow) -> None:
        self._tail_reduce(row, c)
        rows = self.rows
        rows[c] = row
        p = row[c]
        for c2, other in rows.items():
            if c2 < c:
                x = other.get(c)
                if x is not None and not 0 <= x < p:
                    self._tail_reduce(other, c2)

    def add(self, vec: Mapping[int, int]) -> bool:
        """Insert ``vec``; return True iff the lattice grew."""
        v = {j: x for j, x in vec.items() if x}
        rows = self.rows
        changed = False
        while v:
            c = min(v)
            a = v[c]
            row = rows.get(c)
            if row is None:
                if a < 0:
                    v = {j: -x for j, x in v.items()}
                self._place(c, v)
                return True
            p = row[c]
            if a % p == 0:
                _axpy(v, -(a // p), row)
                continue
            g, s, t = xgcd(p, a)
            rest = _combine(p // g, v, -(a // g), row)
            self._place(c, _combine(s, row, t, v))
            v = rest
            changed = True
        return changed

    def add_all(self, vecs: Iterable[Mapping[int, int]]) -> None:
        for v in vecs:
            self.add(v)

    def coords(self, vec: Mapping[int, int]) -> dict[int, int] | None:
        """Coordinates of ``vec`` keyed by pivot column, or None if outside."""
        v = {j: x for j, x in vec.items() if x}
        out = {}
        rows = self.rows
        while v:
            c = min(v)
            row = rows.get(c)
            if row is None:
                return None
            q, r = divmod(v[c], row[c])
            if r:
                return None
            out[c] = q
            _axpy(v, -q, row)
        return out

    def __contains__(self, vec: Mapping[int, int]) -> bool:
        return self.coords(vec) is not None

    def lattice(self) -> IntLattice:
        basis = tuple(
            tuple(sorted(self.rows[c].items())) for c in sorted(self.rows))
        return IntLattice(self.m, basis)


@dataclass(frozen=True)
class IntLattice:
    """A subgroup of Z^m given by a basis in row Hermite normal form.

    Basis rows are stored sparsely as sorted ``(column, value)`` tuples;
    :meth:`rows` returns the dense matrix.
    """

    ambient_dim: int
    basis: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [row[0][0] for row in self.basis]

    def rows(self) -> list[list[int]]:
        return [to_dense(dict(r), self.ambient_dim) for r in self.basis]

    def sparse_rows(self) -> list[SparseRow]:
        return [dict(r) for r in self.basis]

    def builder(self) -> LatticeBuilder:
        b = LatticeBuilder(self.ambient_dim)
        for r in self.basis:
            b.rows[r[0][0]] = dict(r)
        return b

    def __contains__(self, v: Sequence[int]) -> bool:
        return coords_in_lattice(self, v) is not None

    def is_hnf(self) -> bool:
        last = -1
        for i, row in enumerate(self.basis):
            c, p = row[0]
            if c <= last or p <= 0 or any(x == 0 for _, x in row):
                return False
            last = c
            for other in self.basis[:i]:
                x = dict(other).get(c, 0)
                if not 0 <= x < p:
                    return False
        return True


def _sparse_rows(rows: Iterable, m: int | None) -> tuple[list[SparseRow], int]:
    out = []
    width = m
    for r in rows:
        if isinstance(r, Mapping):
            out.append({j: x for j, x in r.items() if x})
            continue
        r = list(r)
        if width is None:
            width = len(r)
        elif len(r) != width:
            raise DimensionMismatch(f"row of length {len(r)} in a matrix with {width} columns")
        out.append(to_sparse(r))
    if width is None:
        raise ValueError("column count required for an empty matrix")
    return out, width


def hermite_normal_form(rows: Iterable, m: int | None = None) -> IntLattice:
    """Row Hermite normal form of the integer matrix ``rows``.

    >>> hermite_normal_form([[2, 4], [6, 8]]).rows()
    [[2, 0], [0, 4]]
    """
    sparse, width = _sparse_rows(rows, m)
    b = LatticeBuilder(width)
    b.add_all(sparse)
    return b.lattice()


def coords_in_lattice(lat: IntLattice, v: Sequence[int]) -> list[int] | None:
    if len(v) != lat.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in Z^{lat.ambient_dim}")
    c = lat.builder().coords(to_sparse(v))
    if c is None:
        return None
    return [c.get(p, 0) for p in lat.pivots]


def lattice_sum(a: IntLattice, b: IntLattice) -> IntLattice:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"Z^{a.ambient_dim} vs Z^{b.ambient_dim}")
    out = a.builder()
    out.add_all(dict(r) for r in b.basis)
    return out.lattice()


def _transpose(rows: Sequence[Mapping[int, int]]) -> list[SparseRow]:
    cols: dict[int, SparseRow] = {}
    for i, r in enumerate(rows):
        for j, x in r.items():
            cols.setdefault(j, {})[i] = x
    return [cols[j] for j in sorted(cols)]


def _echelon(rows: Iterable[Mapping[int, int]]) -> list[SparseRow]:
    b = LatticeBuilder(0)
    b.add_all(rows)
    return [b.rows[c] for c in sorted(b.rows)]


def _normalize_diagonal(diag: list[int]) -> list[int]:
    # gcd/lcm exchanges turn a diagonal into a divisibility chain
    rest = sorted(d for d in diag if d != 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                a, b = rest[i], rest[j]
                if b % a:
                    g = gcd(a, b)
                    rest[i], rest[j] = g, a // g * b
                    changed = True
        rest.sort()
    ones = len(diag) - len(rest) + rest.count(1)
    return [1] * ones + [d for d in rest if d != 1]


def smith_sparse(rows: Iterable[Mapping[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix."""
    cur = _echelon(rows)
    while True:
        # Diagonal iff every row holds a single entry (columns then distinct).
        if all(len(r) == 1 for r in cur):
            break
        cur = _echelon(_transpose(cur))
    return _normalize_diagonal([abs(next(iter(r.values()))) for r in cur])


def smith_invariant_factors(rows: Iterable, m: int | None = None) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    >>> smith_invariant_factors([[2, 4], [6, 8]])
    [2, 4]
    """
    rows = list(rows)
    if not rows:
        return []
    sparse, _ = _sparse_rows(rows, m)
    return smith_sparse(sparse)


@dataclass(frozen=True)
class AbGroup:
    """A finitely generated abelian group Z^rank + Z/d_1 + ... + Z/d_t."""

    rank: int = 0
    invariant_factors: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors)
        if self.rank < 0:
            raise ValueError("negative rank")
        if any(d < 2 for d in facs):
            raise ValueError(f"invariant factors must be >= 2, got {facs}")
        if any(b % a for a, b in zip(facs, facs[1:])):
            raise ValueError(f"invariant factors {facs} do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", facs)

    @classmethod
    def from_orders(cls, rank: int, orders: Iterable[int]) -> AbGroup:
        """Build from arbitrary cyclic orders (1s dropped, 0s added to rank)."""
        orders = [abs(int(o)) for o in orders]
        rank += sum(1 for o in orders if o == 0)
        return cls(rank, tuple(d for d in _normalize_diagonal([o for o in orders if o]) if d > 1))

    @classmethod
    def cyclic(cls, order: int) -> AbGroup:
        return cls.from_orders(0, [order])

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.invariant_factors

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def direct_sum(self, other: AbGroup) -> AbGroup:
        return AbGroup.from_orders(self.rank + other.rank,
                                   self.invariant_factors + other.invariant_factors)

    __add__ = direct_sum

    def primary_decomposition(self) -> dict[int, int]:
        """Map prime power -> multiplicity of Z/(prime power) in the torsion part."""
        out: dict[int, int] = {}
        for d in self.invariant_factors:
            for p, e in _factorize(d).items():
                q = p ** e
                out[q] = out.get(q, 0) + 1
        return dict(sorted(out.items()))

    def count_cyclic(self, order: int) -> int:
        return self.primary_decomposition().get(order, 0)

    def torsion_text(self) -> str:
        """Prime-power display, e.g. ``(Z/3)^2 + Z/4``; ``0`` when torsion-free."""
        parts = []
        for q, mult in self.primary_decomposition().items():
            parts.append(f"Z/{q}" if mult == 1 else f"(Z/{q})^{mult}")
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        if self.invariant_factors:
            parts.append(self.torsion_text())
        return " + ".join(parts) if parts else "0"


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def quotient_of_builders(upper: LatticeBuilder, lower: LatticeBuilder) -> AbGroup:
    """Structure of ``upper / lower``; both in echelon form, lower inside upper."""
    coord_rows = []
    pivots = sorted(upper.rows)
    position = {c: i for i, c in enumerate(pivots)}
    for c in sorted(lower.rows):
        coords = upper.coords(lower.rows[c])
        if coords is None:
            raise ContainmentViolation(f"lattice row with pivot {c} lies outside the upper lattice")
        coord_rows.append({position[p]: x for p, x in coords.items() if x})
    factors = smith_sparse(coord_rows) if coord_rows else []
    return AbGroup(upper.rank - len(factors), tuple(d for d in factors if d > 1))


def lattice_quotient(upper: IntLattice, lower: IntLattice) -> AbGroup:
    """The abelian group ``upper / lower``.

    >>> lattice_quotient(hermite_normal_form([[1, 0], [0, 1]]),
    ...                  hermite_normal_form([[2, 0], [0, 3]]))
    AbGroup(rank=0, invariant_factors=(6,))
    """
    if upper.ambient_dim != lower.ambient_dim:
        raise DimensionMismatch(f"Z^{upper.ambient_dim} vs Z^{lower.ambient_dim}")
    return quotient_of_builders(upper.builder(), lower.builder())
