"""Closed-form predictions for lower central series quotients.

These are computed without touching the lattice engine so that they can
serve as independent cross-checks of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

import sympy

from . import fixtures
from .intlat import AbGroup
from .ncalg import NcPoly, abelianize


class HypothesisError(ValueError):
    """The inputs fall outside the range where a formula is stated."""


@dataclass(frozen=True)
class QPolyParams:
    q: int
    k: int
    i: int
    j: int

    def __post_init__(self):
        if self.q in (1, -1):
            raise HypothesisError("q = 1 and q = -1 are excluded from the generic formulas")
        if self.k < 1 or self.i < 0 or self.j < 0:
            raise ValueError(f"invalid indices k={self.k}, i={self.i}, j={self.j}")


@dataclass(frozen=True)
class JHSummand:
    """``multiplicity`` copies of F_j starting in total degree ``d0``."""

    j: int
    d0: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.j < 1 or self.d0 < 1 or self.multiplicity < 1:
            raise ValueError(f"invalid summand {self}")


@dataclass(frozen=True)
class Conjectural:
    """A predicted value that rests on an unproved conjecture."""

    value: int
    source: str
    conjecture: bool = True

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} (CONJECTURE)"


@lru_cache(maxsize=None)
def _s_diag(q: int, i: int, j: int) -> int:
    # generator of L_{i+j}[i, j] in the q-polynomial algebra, up to sign
    if i + j == 1:
        return 1
    if i == 0 or j == 0:
        return 0
    return gcd(_s_diag(q, i - 1, j) * (q ** j - 1), _s_diag(q, i, j - 1) * (q ** i - 1))


def qpoly_S_recursive(q: int, k: int, i: int, j: int) -> int:
    """``|S^k_{i,j}|`` for ``k = i + j`` via the gcd recursion from degree one."""
    if q in (1, -1):
        raise HypothesisError("the recursion needs q != 1, -1")
    if k != i + j or i < 1 or j < 1:
        raise ValueError(f"need i, j >= 1 and k = i + j, got k={k}, i={i}, j={j}")
    return _s_diag(q, i, j)


def qpoly_S_closed(q: int, k: int, i: int, j: int) -> int:
    """``|(q-1)^(k-2) (q^gcd(i,j) - 1)|`` for ``2 <= k <= i + j``."""
    return abs((q - 1) ** (k - 2) * (q ** gcd(i, j) - 1))


def qpoly_group(params: QPolyParams, series: str) -> AbGroup:
    """Groups of ``Z<x,y>/(yx - qxy)`` in bidegree (i, j)."""
    q, k, i, j = params.q, params.k, params.i, params.j
    if k < 2:
        raise ValueError("formulas hold for k >= 2")
    if i == 0 or j == 0:
        return AbGroup()
    d = i + j
    if series == "B":
        if k < d:
            return AbGroup.cyclic(q - 1)
        if k == d:
            return AbGroup(1)
        return AbGroup()
    if series == "N":
        if k < d - 1:
            return AbGroup.cyclic(q - 1)
        if k == d - 1:
            return AbGroup.cyclic(q ** gcd(i, j) - 1)
        if k == d:
            return AbGroup(1)
        return AbGroup()
    raise ValueError(f"series must be B or N, got {series!r}")


def skew_group(k: int, i: int, j: int, series: str) -> AbGroup:
    """Groups of ``Z<x,y>/(yx + xy)`` in bidegree (i, j)."""
    if k < 2:
        raise ValueError("formulas hold for k >= 2")
    if i == 0 or j == 0:
        return AbGroup()
    d = i + j
    even = i % 2 == 0 and j % 2 == 0
    if series == "B":
        if even:
            return AbGroup()
        if d > k:
            return AbGroup.cyclic(2)
        return AbGroup(1) if d == k else AbGroup()
    if series == "N":
        shift = 1 if even else 0
        if d > k + shift:
            return AbGroup.cyclic(2)
        return AbGroup(1) if d == k + shift else AbGroup()
    raise ValueError(f"series must be B or N, got {series!r}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % r for r in range(2, int(p ** 0.5) + 1))


def multiplicative_order(q: int, p: int) -> int:
    if gcd(q, p) != 1:
        raise ValueError(f"{q} is not a unit mod {p}")
    r, e = q % p, 1
    while r != 1 % p:
        r = r * q % p
        e += 1
    return e


def cor22_prime_witness(q: int, p: int) -> tuple[int, int, int]:
    """A cell ``(k, i, j)`` whose N_k group has order divisible by ``p``."""
    if q in (1, -1):
        raise HypothesisError("q = 1 and q = -1 are excluded")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if q % p == 0:
        raise ValueError(f"{p} divides q = {q}")
    if (q - 1) % p == 0:
        return 2, 2, 2
    o = multiplicative_order(q, p)
    return 2 * o - 1, o, o


def _binary_form(f: NcPoly) -> dict[tuple[int, int], int]:
    if f.max_generator() > 1:
        raise ValueError("the rank formula applies to two generators")
    return abelianize(f, 2)


def distinct_linear_factors(f: NcPoly) -> int:
    """Number of distinct linear factors of the commutative image of ``f``.

    Computed exactly: dehomogenize at ``y = 1``, take the degree of the
    squarefree part, and add one if ``y`` divides the form.
    """
    form = _binary_form(f)
    if not form:
        raise HypothesisError(f"{f} has zero abelianization")
    t = sympy.Symbol("t")
    poly = sympy.Poly(sum(c * t ** a for (a, _), c in form.items()), t, domain="ZZ")
    m = f.total_degree()
    s = sympy.Poly(sympy.sqf_part(poly.as_expr()), t).degree() if poly.degree() > 0 else 0
    if poly.degree() < m:
        s += 1
    return s


def n2_rank(f: NcPoly, d: int) -> int:
    """Rank of N_2 in total degree ``d`` for ``Z<x,y>/(f)``."""
    if d < 0:
        raise ValueError("negative degree")
    s = distinct_linear_factors(f)
    m = f.total_degree()
    if d == 0:
        return 0
    if d <= m - 1:
        return d - 1
    if d <= m + s - 1:
        return 2 * m - d - 1
    return m - s


def n2_rank_sum_of_powers(m: int, d: int) -> int:
    """Rank of N_2 in degree ``d`` for ``Z<x,y>/(x^m + y^m)``."""
    if d < m:
        return max(d - 1, 0)
    if d <= 2 * m - 2:
        return 2 * m - d - 1
    return 0


def n3_rank_conjecture(m: int, d: int) -> Conjectural:
    """Conjectured rank of N_3 in degree ``d`` for ``Z<x,y>/(x^m + y^m)``."""
    if m < 2 or d < 0:
        raise ValueError("need m >= 2 and d >= 0")
    if 3 <= d <= m + 1:
        v = 3 * d - 7
    elif m + 2 <= d <= 2 * m:
        v = 6 * m - 3 * d + 1
    else:
        v = 0
    return Conjectural(v, "N_3 rank conjecture for x^m + y^m")


def jh_rank(series, d: int) -> int:
    """Graded rank predicted by a list of summands F_j[d0].

    Each summand contributes one dimension in every degree ``>= d0 + j``.
    """
    return sum(s.multiplicity for s in series if s.d0 + s.j <= d)


def torsion3_count(n: int) -> int:
    """Copies of Z/3 in N_3 of the free algebra on n generators, degree (1,...,1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(comb(n, t) for t in range(5, n + 1, 2))


@lru_cache(maxsize=None)
def jh_series_table() -> dict[tuple[str, int, int], tuple[JHSummand, ...]]:
    """Jordan-Hölder lists keyed by ``(series, k, m)`` for ``Z<x,y>/(x^m)``."""
    out: dict = {}
    for row in fixtures.load("jh-series"):
        key = (row["series"], int(row["k"]), int(row["m"]))
        out.setdefault(key, []).append(
            JHSummand(int(row["j"]), int(row["d0"]), int(row["multiplicity"])))
    return {k: tuple(v) for k, v in out.items()}


def jh_series(series: str, k: int, m: int) -> tuple[JHSummand, ...]:
    try:
        return jh_series_table()[(series, k, m)]
    except KeyError:
        raise KeyError(f"no Jordan-Hölder list for {series}_{k} with m={m}") from None
