"""Lower central series quotients of ``Z<x_1..x_n>/(f)`` cell by cell.

Every lattice lives inside one graded cell of the free algebra, with
coordinates indexed by the cell's words in lexicographic order.  With
``S`` either ``L`` (lower central series) or ``M`` (the ideals ``A·L_k``)
and ``I = (f)``,

    B_k = (L_k + I) / (L_{k+1} + I),    N_k = (M_k + I) / (M_{k+1} + I).

Internally cells are classes of multidegrees modulo the differences of
the multidegrees occurring in ``f``: this is the finest grading for which
``(f)`` is homogeneous.  A multihomogeneous ``f`` gives plain multidegree
cells; ``x^m + y^m`` splits each total degree by ``deg_x mod m``.  A
total-degree answer is the direct sum over the classes of that degree.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .intlat import (AbGroup, IntLattice, LatticeBuilder, hermite_normal_form,
                     quotient_of_builders)
from .ncalg import (GradingError, NcPoly, Presentation, enumerate_words,
                    enumerate_words_total, multidegree)

SERIES = ("B", "N")


@dataclass(frozen=True)
class TotalDegree:
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise GradingError(f"negative total degree {self.d}")


def as_cell(cell) -> tuple[int, ...] | TotalDegree:
    if isinstance(cell, TotalDegree):
        return cell
    if isinstance(cell, int):
        return TotalDegree(cell)
    if isinstance(cell, dict) and set(cell) == {"d"}:
        return TotalDegree(int(cell["d"]))
    return tuple(int(e) for e in cell)


def cell_total(cell) -> int:
    cell = as_cell(cell)
    return cell.d if isinstance(cell, TotalDegree) else sum(cell)


@dataclass(frozen=True)
class SeriesQuery:
    presentation: Presentation
    series: str
    k: int
    cell: tuple | TotalDegree

    def __post_init__(self):
        object.__setattr__(self, "cell", as_cell(self.cell))
        if self.series not in SERIES:
            raise ValueError(f"series must be B or N, got {self.series!r}")
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        _check_cell(self.presentation, self.cell)


@dataclass(frozen=True)
class GroupReport:
    query: SeriesQuery
    group: AbGroup
    cell_dim: int
    ms: int = field(default=0, compare=False)
    spanning: dict = field(default_factory=dict, compare=False)

    @property
    def rank(self) -> int:
        return self.group.rank


def _check_cell(pres: Presentation, cell) -> None:
    if isinstance(cell, TotalDegree):
        return
    if len(cell) != pres.n:
        raise GradingError(f"cell {cell} has {len(cell)} entries, expected {pres.n}")
    if any(e < 0 for e in cell):
        raise GradingError(f"cell {cell} has a negative entry")
    if not pres.multihomogeneous:
        raise GradingError(
            f"relation {pres.relation_text} is not multihomogeneous; "
            "multidegree cells are not defined")


@lru_cache(maxsize=None)
def _compositions(total: int, n: int) -> tuple[tuple[int, ...], ...]:
    if n == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        out.extend((first,) + rest for rest in _compositions(total - first, n - 1))
    return tuple(out)


def _bounded(total: int, bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # vectors 0 <= v <= bounds with sum(v) == total
    if len(bounds) == 1:
        if total <= bounds[0]:
            yield (total,)
        return
    rest_cap = sum(bounds[1:])
    for first in range(min(total, bounds[0]), max(0, total - rest_cap) - 1, -1):
        for rest in _bounded(total - first, bounds[1:]):
            yield (first,) + rest


class SeriesEngine:
    """Memoized lattice computations for one presentation.

    Lattices for ``L_k + I`` and ``M_k + I`` are built incrementally on top of
    the ideal lattice ``I``.  For each one the engine also keeps the spanning
    vectors that actually enlarged the lattice ("generators"): the lattice is
    ``I`` plus their span, which keeps the next level's spanning set small.
    """

    def __init__(self, n: int, relation: NcPoly | None = None):
        self.n = n
        self.relation = relation
        self._f_terms = None
        self._f_base = None
        diffs = []
        if relation is not None:
            degs = sorted(relation.multidegrees(n))
            self._f_base = degs[0]
            diffs = [tuple(a - b for a, b in zip(d, degs[0])) for d in degs[1:]]
            self._f_terms = list(relation.items())
        grading = hermite_normal_form(diffs, n) if diffs else IntLattice(n)
        self._grading_rows = grading.sparse_rows()
        self.multigraded = not self._grading_rows
        self._fibers: dict = {}
        self._words: dict = {}
        self._index: dict = {}
        self._ideal: dict = {}
        self._lower: dict = {}
        self._assoc: dict = {}

    # -- cells -----------------------------------------------------------

    def key(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of ``vec`` modulo the grading lattice."""
        if self.multigraded:
            return tuple(vec)
        v = list(vec)
        for row in self._grading_rows:
            c = min(row)
            q = v[c] // row[c]
            if q:
                for j, x in row.items():
                    v[j] -= q * x
        return tuple(v)

    def fiber(self, key: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        """Non-negative multidegrees in the class ``key``."""
        out = self._fibers.get(key)
        if out is None:
            if self.multigraded:
                out = (key,) if all(e >= 0 for e in key) else ()
            else:
                total = sum(key)
                out = () if total < 0 else tuple(
                    d for d in sorted(_compositions(total, self.n)) if self.key(d) == key)
            self._fibers[key] = out
        return out

    def words(self, key: tuple[int, ...]) -> tuple:
        out = self._words.get(key)
        if out is None:
            out = tuple(sorted(w for d in self.fiber(key) for w in enumerate_words(d)))
            self._words[key] = out
            self._index[key] = {w: i for i, w in enumerate(out)}
        return out

    def index(self, key: tuple[int, ...]) -> dict:
        if key not in self._index:
            self.words(key)
        return self._index[key]

    def sub(self, key: tuple[int, ...], delta: Sequence[int]) -> tuple[int, ...] | None:
        """Class of ``key - delta``, or None when it has no words."""
        rest = self.key(tuple(a - b for a, b in zip(key, delta)))
        return rest if self.fiber(rest) else None

    def classes_of_total(self, d: int) -> list[tuple[int, ...]]:
        return sorted({self.key(c) for c in _compositions(d, self.n)})

    def _splits(self, key, a: int):
        # (left multidegree of total a, class of the remainder)
        if self.multigraded:
            candidates = _bounded(a, key)
        else:
            candidates = _compositions(a, self.n)
        for d in candidates:
            rest = self.sub(key, d)
            if rest is not None:
                yield d, rest

    # -- lattices ----------------------------------------------------------

    def ideal(self, key) -> LatticeBuilder:
        """The lattice of ``(f)`` in the cell: spanned by ``w1·f·w2``."""
        out = self._ideal.get(key)
        if out is not None:
            return out
        words = self.words(key)
        out = LatticeBuilder(len(words))
        f = self.relation
        if f is not None and words:
            idx = self.index(key)
            inner = self.sub(key, self._f_base)
            if inner is not None:
                t = sum(inner)
                for a in range(t + 1):
                    for d1, right in self._splits(inner, a):
                        rwords = self.words(right)
                        for w1 in enumerate_words(d1):
                            for w2 in rwords:
                                row: dict[int, int] = {}
                                for u, c in self._f_terms:
                                    j = idx[w1 + u + w2]
                                    row[j] = row.get(j, 0) + c
                                out.add(row)
        self._ideal[key] = out
        return out

    def lower(self, k: int, key) -> tuple[LatticeBuilder, list[dict]]:
        """``L_k + I`` in the cell, with its non-ideal generators."""
        hit = self._lower.get((k, key))
        if hit is not None:
            return hit
        lat = self.ideal(key).copy()
        gens: list[dict] = []
        total = sum(key)
        words = self.words(key)
        if k == 1:
            for i in range(len(words)):
                v = {i: 1}
                if lat.add(v):
                    gens.append(v)
        elif total >= k:
            idx = self.index(key)
            for a in range(1, total - k + 2):
                for d1, rest in self._splits(key, a):
                    _, rgens = self.lower(k - 1, rest)
                    if not rgens:
                        continue
                    rwords = self.words(rest)
                    lwords = enumerate_words(d1)
                    for g in rgens:
                        for w in lwords:
                            row: dict[int, int] = {}
                            for j, c in g.items():
                                v = rwords[j]
                                p = idx[w + v]
                                q = idx[v + w]
                                row[p] = row.get(p, 0) + c
                                row[q] = row.get(q, 0) - c
                            if any(row.values()) and lat.add(row):
                                gens.append(row)
        self._lower[(k, key)] = (lat, gens)
        return lat, gens

    def assoc(self, k: int, key) -> tuple[LatticeBuilder, list[dict]]:
        """``M_k + I = A·L_k + I`` in the cell, with its non-ideal generators."""
        hit = self._assoc.get((k, key))
        if hit is not None:
            return hit
        base, lgens = self.lower(k, key)
        lat = base.copy()
        gens = list(lgens)
        if sum(key) > k:
            idx = self.index(key)
            for i in range(self.n):
                unit = tuple(1 if j == i else 0 for j in range(self.n))
                rest = self.sub(key, unit)
                if rest is None:
                    continue
                _, rgens = self.assoc(k, rest)
                rwords = self.words(rest)
                for g in rgens:
                    row = {idx[(i,) + rwords[j]]: c for j, c in g.items()}
                    if lat.add(row):
                        gens.append(row)
        self._assoc[(k, key)] = (lat, gens)
        return lat, gens

    def series_lattice(self, series: str, k: int, key):
        return self.lower(k, key) if series == "B" else self.assoc(k, key)

    def group(self, series: str, k: int, key) -> AbGroup:
        upper, _ = self.series_lattice(series, k, key)
        lower, _ = self.series_lattice(series, k + 1, key)
        return quotient_of_builders(upper, lower)

    def keys_for(self, cell) -> list[tuple[int, ...]]:
        cell = as_cell(cell)
        if isinstance(cell, TotalDegree):
            return self.classes_of_total(cell.d)
        key = self.key(cell)
        if not self.multigraded and key != cell:
            raise GradingError("multidegree cells need a multihomogeneous relation")
        return [key]


@lru_cache(maxsize=32)
def _engine(n: int, relation: NcPoly | None) -> SeriesEngine:
    return SeriesEngine(n, relation)


def engine_for(pres: Presentation) -> SeriesEngine:
    return _engine(pres.n, pres.relation)


def clear_caches() -> None:
    _engine.cache_clear()


def _cell_words(n: int, cell) -> tuple:
    if isinstance(cell, TotalDegree):
        return enumerate_words_total(n, cell.d)
    return enumerate_words(cell)


def _assemble(eng: SeriesEngine, cell, pick) -> IntLattice:
    # stitch per-class lattices into the cell's global word order
    words = _cell_words(eng.n, cell)
    pos = {w: i for i, w in enumerate(words)}
    out = LatticeBuilder(len(words))
    for key in eng.keys_for(cell):
        kw = eng.words(key)
        for row in pick(key).rows.values():
            out.add({pos[kw[j]]: c for j, c in row.items()})
    return out.lattice()


def span_L(k: int, cell, pres: Presentation) -> IntLattice:
    """``L_k`` of the free algebra on ``pres.n`` generators inside ``cell``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    free = Presentation(pres.n)
    cell = as_cell(cell)
    _check_cell(free, cell)
    eng = engine_for(free)
    return _assemble(eng, cell, lambda key: eng.lower(k, key)[0])


def span_M(k: int, cell, pres: Presentation) -> IntLattice:
    """``M_k = A·L_k`` of the free algebra inside ``cell``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    free = Presentation(pres.n)
    cell = as_cell(cell)
    _check_cell(free, cell)
    eng = engine_for(free)
    return _assemble(eng, cell, lambda key: eng.assoc(k, key)[0])


def span_ideal(f: NcPoly, cell, n: int) -> IntLattice:
    """The two-sided ideal ``(f)`` inside ``cell`` of ``Z<x_1..x_n>``."""
    pres = Presentation(n, f, "total")
    cell = as_cell(cell)
    if not isinstance(cell, TotalDegree):
        if len(cell) != n or any(e < 0 for e in cell):
            raise GradingError(f"invalid cell {cell}")
        if not f.is_multihomogeneous(n):
            raise GradingError("multidegree cells need a multihomogeneous relation")
    eng = engine_for(pres)
    return _assemble(eng, cell, eng.ideal)


def quotient_structure(query: SeriesQuery) -> GroupReport:
    """Compute ``B_k`` or ``N_k`` of the presentation in one cell."""
    start = time.perf_counter()
    eng = engine_for(query.presentation)
    group = AbGroup()
    dim = 0
    spanning = {"upper": 0, "lower": 0, "ideal_rank": 0}
    for key in eng.keys_for(query.cell):
        group = group + eng.group(query.series, query.k, key)
        dim += len(eng.words(key))
        spanning["upper"] += len(eng.series_lattice(query.series, query.k, key)[1])
        spanning["lower"] += len(eng.series_lattice(query.series, query.k + 1, key)[1])
        spanning["ideal_rank"] += eng.ideal(key).rank
    ms = int(round((time.perf_counter() - start) * 1000))
    return GroupReport(query, group, dim, ms, spanning)


def compute(pres: Presentation, series: str, k: int, cell) -> AbGroup:
    return quotient_structure(SeriesQuery(pres, series, k, cell)).group


def sweep_cells(pres: Presentation, max_total_degree: int, min_total_degree: int = 0,
                grading: str | None = None) -> list:
    mode = grading or pres.grading_mode
    if mode == "multi" and not pres.multihomogeneous:
        raise GradingError(f"relation {pres.relation_text} is not multihomogeneous")
    cells = []
    for d in range(max(0, min_total_degree), max_total_degree + 1):
        if mode == "multi":
            cells.extend(_compositions(d, pres.n))
        else:
            cells.append(TotalDegree(d))
    return cells


def sweep(pres: Presentation, series: str, k: int, max_total_degree: int,
          min_total_degree: int = 0, grading: str | None = None) -> list[GroupReport]:
    """Reports for every cell of total degree in ``[min, max]``, in cell order."""
    if max_total_degree < k:
        raise ValueError(f"max_total_degree must be at least k={k}")
    return [quotient_structure(SeriesQuery(pres, series, k, c))
            for c in sweep_cells(pres, max_total_degree, min_total_degree, grading)]


def _poly_cell(eng: SeriesEngine, p: NcPoly):
    keys = {eng.key(multidegree(w, eng.n)) for w in p.words()}
    if len(keys) != 1:
        raise GradingError(f"{p.render(eng.n)} is not homogeneous for this grading")
    key = keys.pop()
    idx = eng.index(key)
    return key, {idx[w]: c for w, c in p.items()}


_WHICH = ("L", "M", "ideal", "L+ideal", "M+ideal")


def lattice_membership(p: NcPoly, which: str, k: int, pres: Presentation,
                       rational: bool = False) -> bool:
    """Whether ``p`` lies in ``L_k``, ``M_k``, ``(f)`` or a sum with ``(f)``.

    ``L`` and ``M`` refer to the free algebra; the ``+ideal`` forms add the
    presentation's relation ideal.  With ``rational=True`` the test is
    membership in the rational span (some nonzero multiple of ``p`` lies in
    the lattice).
    """
    if which not in _WHICH:
        raise ValueError(f"which must be one of {_WHICH}")
    if p.is_zero():
        return True
    if which in ("L", "M"):
        eng = engine_for(Presentation(pres.n))
    else:
        if pres.relation is None and which == "ideal":
            return False
        eng = engine_for(pres)
    key, vec = _poly_cell(eng, p)
    if which == "ideal":
        lat = eng.ideal(key)
    elif which[0] == "L":
        lat = eng.lower(k, key)[0]
    else:
        lat = eng.assoc(k, key)[0]
    if rational:
        trial = lat.copy()
        trial.add(vec)
        return trial.rank == lat.rank
    return vec in lat


def bracket_inclusion(n: int, j: int, k: int, cell) -> bool:
    """Check ``[M_j, L_k] ⊆ L_{j+k}`` in one multidegree cell of the free algebra.

    Spans ``[m, l]`` over generators ``m`` of ``M_j`` and ``l`` of ``L_k`` in
    every pair of complementary subcells.
    """
    eng = engine_for(Presentation(n))
    cell = tuple(cell)
    target, _ = eng.lower(j + k, cell)
    idx = eng.index(cell)
    total = sum(cell)
    for a in range(1, total):
        for d1, rest in eng._splits(cell, a):
            _, mgens = eng.assoc(j, d1)
            _, lgens = eng.lower(k, rest)
            mw, lw = eng.words(d1), eng.words(rest)
            for g in mgens:
                for h in lgens:
                    row: dict[int, int] = {}
                    for a1, c1 in g.items():
                        for b1, c2 in h.items():
                            u, v = mw[a1], lw[b1]
                            p, q = idx[u + v], idx[v + u]
                            row[p] = row.get(p, 0) + c1 * c2
                            row[q] = row.get(q, 0) - c1 * c2
                    row = {i: c for i, c in row.items() if c}
                    if row and row not in target:
                        return False
    return True
