"""Reproduction suites: engine results against fixtures and closed forms.

Each suite is a generator of :class:`Check` rows so that a runner can
stop between entries when a time budget runs out.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Callable, Iterator

from . import fixtures
from .fixtures import cite
from .intlat import AbGroup, coords_in_lattice, hermite_normal_form, smith_invariant_factors
from .ncalg import NcPoly, Presentation, commutator
from .oracle import (QPolyParams, jh_rank, jh_series_table, n2_rank, n3_rank_conjecture,
                     qpoly_group, qpoly_S_closed, qpoly_S_recursive, skew_group,
                     torsion3_count)
from .series import TotalDegree, _compositions, bracket_inclusion, compute, lattice_membership


@dataclass(frozen=True)
class Check:
    suite: str
    label: str
    expected: str
    got: str
    ok: bool
    citation: str = ""
    gating: bool = True


N2_RANK_RELATIONS = (
    "x^2", "x^3", "x^4+y^4", "x^3+y^3", "x^5+y^5", "x^2*y",
    "x^3+x^2*y", "(x+y)^2*(x-y)", "x*y*x+y^3", "x^2*y^2",
)


def _group_check(suite, label, got: AbGroup, expected: AbGroup, citation="") -> Check:
    return Check(suite, label, str(expected), str(got), got == expected, citation)


def _rank_check(suite, label, got: int, expected: int, citation="", gating=True) -> Check:
    return Check(suite, label, str(expected), str(got), got == expected, citation, gating)


def qpoly_relation(q: int) -> Presentation:
    x, y = NcPoly.gen(0), NcPoly.gen(1)
    return Presentation(2, y * x - q * (x * y))


def suite_qpoly(qs=(2, 3, 5), max_total=6, ks=range(2, 7)) -> Iterator[Check]:
    for q in qs:
        pres = qpoly_relation(q)
        for series in "BN":
            for k in ks:
                for i in range(max_total + 1):
                    for j in range(max_total + 1 - i):
                        yield _group_check(
                            "qpoly", f"q={q} {series}_{k}[{i},{j}]",
                            compute(pres, series, k, (i, j)),
                            qpoly_group(QPolyParams(q, k, i, j), series), cite("qpoly-groups"))
    for row in fixtures.load("qpoly"):
        q = int(row["q"])
        if q not in qs:
            continue
        expected = AbGroup.from_orders(int(row["rank"]), [int(d) for d in row["invariant_factors"].split()])
        k, i, j = int(row["k"]), int(row["i"]), int(row["j"])
        yield _group_check("qpoly", f"fixture q={q} {row['series']}_{k}[{i},{j}]",
                           compute(qpoly_relation(q), row["series"], k, (i, j)), expected,
                           row["citation"])


def suite_skew(max_total=6, ks=range(2, 7)) -> Iterator[Check]:
    pres = qpoly_relation(-1)
    for series in "BN":
        for k in ks:
            for i in range(max_total + 1):
                for j in range(max_total + 1 - i):
                    yield _group_check("skew", f"{series}_{k}[{i},{j}]",
                                       compute(pres, series, k, (i, j)),
                                       skew_group(k, i, j, series), cite("skew-groups"))


def suite_table1() -> Iterator[Check]:
    for row in fixtures.load("table1"):
        pres = Presentation.parse(2, row["relation"])
        d = int(row["d"])
        got = compute(pres, row["series"], int(row["k"]), TotalDegree(d)).rank
        yield _rank_check("table1", f"m={row['m']} d={d}", got, int(row["rank"]), row["citation"])


def suite_table2() -> Iterator[Check]:
    for row in fixtures.load("table2"):
        pres = Presentation.parse(2, row["relation"])
        k, d = int(row["k"]), int(row["d"])
        got = compute(pres, row["series"], k, TotalDegree(d)).rank
        yield _rank_check("table2", f"B_{k} d={d}", got, int(row["rank"]), row["citation"])


def suite_jh(max_degree=9) -> Iterator[Check]:
    for (series, k, m), summands in sorted(jh_series_table().items()):
        pres = Presentation.parse(2, f"x^{m}")
        for d in range(max_degree + 1):
            got = compute(pres, series, k, TotalDegree(d)).rank
            yield _rank_check("jh", f"{series}_{k}(x^{m}) d={d}", got, jh_rank(summands, d),
                              cite("jh-series"))


def suite_n2_rank(relations=N2_RANK_RELATIONS) -> Iterator[Check]:
    for text in relations:
        pres = Presentation.parse(2, text)
        f = pres.relation
        m = f.total_degree()
        for d in range(m + 5):
            got = compute(pres, "N", 2, TotalDegree(d)).rank
            yield _rank_check("n2-rank", f"f={text} d={d}", got, n2_rank(f, d), cite("n2-rank"))


def _ones(n: int, extra: dict | None = None) -> tuple[int, ...]:
    cell = [1] * n
    for i, v in (extra or {}).items():
        cell[i] = v
    return tuple(cell)


def suite_appendix_small() -> Iterator[Check]:
    for n in (4, 5, 6):
        g = compute(Presentation(n), "N", 3, _ones(n))
        yield _rank_check("appendix-small", f"N_3(A_{n}) (1^{n}) copies of Z/3",
                          _z3_count(g), torsion3_count(n), cite("torsion3-count"))
        yield Check("appendix-small", f"N_3(A_{n}) (1^{n}) only 3-torsion",
                    "3-torsion only", g.torsion_text(), _only_three(g), cite("three-torsion"))
    free4 = Presentation(4)
    for d in range(7):
        for cell in _compositions(d, 4):
            if list(cell) != sorted(cell, reverse=True):
                continue
            g = compute(free4, "N", 3, cell)
            yield Check("appendix-small", f"N_3(A_4) {cell} torsion-free", "0", g.torsion_text(),
                        not g.invariant_factors, cite("free4-torsion-free"))
    g = compute(Presentation(5), "N", 3, (1, 1, 1, 1, 2))
    yield Check("appendix-small", "N_3(A_5) (1,1,1,1,2)", "Z/3", g.torsion_text(),
                g.invariant_factors == (3,), cite("appendix-a5"))


def _z3_count(g: AbGroup) -> int:
    return g.count_cyclic(3)


def _only_three(g: AbGroup) -> bool:
    return all(q == 3 for q in g.primary_decomposition())


def appendix_entries(names=("appendix-n3", "appendix-n5n6n7")) -> list[dict]:
    rows = []
    for name in names:
        rows.extend(fixtures.load(name))
    rows.sort(key=lambda r: (_cell_size(fixtures.parse_cell(r["cell"])), int(r["n"]), int(r["k"]),
                             r["cell"]))
    return rows


def _cell_size(cell) -> int:
    from .ncalg import multinomial
    return multinomial(cell)


def suite_appendix_large(max_cell_dim: int | None = None) -> Iterator[Check]:
    """Every tabulated free-algebra torsion entry, smallest cells first."""
    for row in appendix_entries():
        cell = fixtures.parse_cell(row["cell"])
        if max_cell_dim is not None and _cell_size(cell) > max_cell_dim:
            continue
        n, k = int(row["n"]), int(row["k"])
        g = compute(Presentation(n), "N", k, cell)
        want = int(row["z3_count"])
        ok = _z3_count(g) == want and _only_three(g)
        yield Check("appendix-large", f"N_{k}(A_{n}) {cell}", f"(Z/3)^{want}", g.torsion_text(), ok,
                    row["citation"])


def m3_membership_checks(m: int) -> list[tuple[str, NcPoly, bool]]:
    """Elements claimed to vanish in A/M_3(A) for f = x^m + y^m.

    The flag says whether membership is checked over Z (True) or only
    rationally (False): over Z only ``m·x^(m-1)u`` lies in the lattice.
    """
    x, y = NcPoly.gen(0), NcPoly.gen(1)
    u = commutator(x, y)
    return [
        ("u^2", u * u, True),
        ("[u,x]", commutator(u, x), True),
        ("[u,y]", commutator(u, y), True),
        (f"x^{m - 1}u", x ** (m - 1) * u, False),
        (f"y^{m - 1}u", y ** (m - 1) * u, False),
        (f"{m}x^{m - 1}u", m * (x ** (m - 1) * u), True),
        (f"{m}y^{m - 1}u", m * (y ** (m - 1) * u), True),
    ]


def suite_lemmas() -> Iterator[Check]:
    for m in (2, 3):
        pres = Presentation.parse(2, f"x^{m}+y^{m}")
        for name, p, integral in m3_membership_checks(m):
            ok = lattice_membership(p, "M+ideal", 3, pres, rational=not integral)
            over = "Z" if integral else "Q"
            yield Check("lemmas", f"m={m} {name} in M_3+(f) over {over}", "True", str(ok), ok,
                        cite("m3-membership"))
    for d in range(7):
        for cell in _compositions(d, 2):
            ok = bracket_inclusion(2, 3, 1, cell)
            yield Check("lemmas", f"[M_3,L_1] in L_4 at {cell}", "True", str(ok), ok, cite("bracket-inclusion"))


def stabilization_bound(m: int, k: int) -> int:
    return m if k == 2 else 2 * k + m - 5


def suite_stabilization(ms=(2, 3), ks=(2, 3, 4)) -> Iterator[Check]:
    for m in ms:
        pres = Presentation.parse(2, f"x^{m}")
        for k in ks:
            lo = stabilization_bound(m, k)
            ranks = [compute(pres, "B", k, TotalDegree(d)).rank for d in range(lo, lo + 4)]
            yield Check("stabilization", f"x^{m} B_{k} d={lo}..{lo + 3}", f"constant {ranks[0]}",
                        " ".join(map(str, ranks)), len(set(ranks)) == 1, cite("stabilization"))


def suite_vanishing(ms=(2, 3)) -> Iterator[Check]:
    for m in ms:
        pres = Presentation.parse(2, f"x^{m}+y^{m}")
        top = 2 * m + 4
        n2 = {d: compute(pres, "N", 2, TotalDegree(d)).rank for d in range(top + 1)}
        b3 = {d: compute(pres, "B", 3, TotalDegree(d)).rank for d in range(top + 1)}
        for d in range(2 * m - 1, top + 1):
            yield _rank_check("vanishing", f"x^{m}+y^{m} rank N_2[{d}]", n2[d], 0, cite("vanishing"))
        support = [d for d, r in b3.items() if r]
        yield Check("vanishing", f"x^{m}+y^{m} B_3 support ends below {2 * m}",
                    f"max < {2 * m}", str(max(support, default=None)),
                    bool(support) and max(support) < 2 * m, cite("vanishing"))
        for d in range(1, top + 1):
            ok = b3[d] <= 2 * n2[d - 1]
            yield Check("vanishing", f"x^{m}+y^{m} rank B_3[{d}] <= 2 rank N_2[{d - 1}]",
                        f"<= {2 * n2[d - 1]}", str(b3[d]), ok, cite("vanishing-bound"))


def suite_n3_conjecture(ms=(3, 4)) -> Iterator[Check]:
    for m in ms:
        pres = Presentation.parse(2, f"x^{m}+y^{m}")
        for d in range(2 * m + 2):
            pred = n3_rank_conjecture(m, d)
            got = compute(pres, "N", 3, TotalDegree(d)).rank
            yield _rank_check("n3-conjecture", f"x^{m}+y^{m} rank N_3[{d}]", got, pred.value,
                              cite("n3-conjecture") + " (CONJECTURE, report only)", gating=False)


def determinantal_divisors(rows: list[list[int]]) -> list[int]:
    """gcd of all k x k minors, k = 1..rank, by brute force."""
    from sympy import Matrix
    r, c = len(rows), len(rows[0]) if rows else 0
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for ri in combinations(range(r), k):
            for ci in combinations(range(c), k):
                g = gcd(g, int(Matrix([[rows[a][b] for b in ci] for a in ri]).det()))
        if g == 0:
            break
        out.append(g)
    return out


def random_matrices(count=200, seed=20130701, max_rows=4, max_cols=5, bound=9):
    rng = random.Random(seed)
    for _ in range(count):
        r, c = rng.randint(1, max_rows), rng.randint(1, max_cols)
        yield [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]


def suite_linalg(count=200) -> Iterator[Check]:
    for idx, rows in enumerate(random_matrices(count)):
        dd = determinantal_divisors(rows)
        expected = [b // a for a, b in zip([1] + dd, dd)]
        got = smith_invariant_factors(rows)
        yield Check("linalg", f"matrix {idx} smith", str(expected), str(got), got == expected,
                    cite("smith-minors"))
        lat = hermite_normal_form(rows)
        span = all(coords_in_lattice(lat, r) is not None for r in rows)
        idem = hermite_normal_form(lat.rows(), len(rows[0])) == lat
        yield Check("linalg", f"matrix {idx} hnf", "span+idempotent", f"{span}/{idem}/{lat.is_hnf()}",
                    span and idem and lat.is_hnf(), cite("hnf-invariants"))


def suite_oracle() -> Iterator[Check]:
    for q in (2, 3, 5, -2):
        for k in range(2, 11):
            for i in range(1, k):
                j = k - i
                rec, closed = qpoly_S_recursive(q, k, i, j), qpoly_S_closed(q, k, i, j)
                yield _rank_check("oracle", f"S^{k}_{{{i},{j}}} q={q}", rec, closed, cite("qpoly-recursion"))
    for row in fixtures.load("table2"):
        k, d = int(row["k"]), int(row["d"])
        key = ("B", k, 3)
        if key not in jh_series_table():
            # no tabulated list for this k; report without gating
            yield Check("oracle", f"jh B_{k}(x^3) d={d}", row["rank"], "no list", False,
                        cite("jh-series"), gating=False)
            continue
        yield _rank_check("oracle", f"jh B_{k}(x^3) d={d}", jh_rank(jh_series_table()[key], d),
                          int(row["rank"]), cite("jh-series"))


SUITES: dict[str, Callable[[], Iterator[Check]]] = {
    "qpoly": suite_qpoly,
    "skew": suite_skew,
    "table1": suite_table1,
    "table2": suite_table2,
    "jh": suite_jh,
    "n2-rank": suite_n2_rank,
    "appendix-small": suite_appendix_small,
    "appendix-large": suite_appendix_large,
    "lemmas": suite_lemmas,
    "stabilization": suite_stabilization,
    "vanishing": suite_vanishing,
    "n3-conjecture": suite_n3_conjecture,
    "linalg": suite_linalg,
    "oracle": suite_oracle,
}

# seconds; None means unbounded
BUDGETS = {"appendix-small": 600.0}

ALL = [s for s in SUITES if s != "appendix-large"]


class BudgetExceeded(RuntimeError):
    pass


def run_suite(name: str, budget: float | None = None,
              on_check: Callable[[Check], None] | None = None) -> list[Check]:
    """Run one suite; raises BudgetExceeded (with partial results attached)."""
    if budget is None:
        budget = BUDGETS.get(name)
    start = time.monotonic()
    out = []
    for check in SUITES[name]():
        out.append(check)
        if on_check:
            on_check(check)
        if budget is not None and time.monotonic() - start > budget:
            err = BudgetExceeded(f"suite {name} exceeded its {budget:.0f}s budget")
            err.checks = out
            raise err
    return out


def summarize(checks: list[Check]) -> tuple[int, int, int]:
    """(matched, gating mismatches, report-only mismatches)."""
    ok = sum(c.ok for c in checks)
    bad = sum(not c.ok and c.gating for c in checks)
    return ok, bad, len(checks) - ok - bad


def format_report(name: str, checks: list[Check], only_mismatches: bool = False) -> str:
    """A plain diff table; deterministic for identical inputs."""
    lines = [f"suite {name}"]
    rows = [c for c in checks if not (only_mismatches and c.ok)]
    if rows:
        w = max(len(c.label) for c in rows)
        we = max(len("expected"), *(len(c.expected) for c in rows))
        wg = max(len("got"), *(len(c.got) for c in rows))
        lines.append(f"  {'status':<6}  {'entry':<{w}}  {'expected':<{we}}  {'got':<{wg}}  source")
        for c in rows:
            status = "ok" if c.ok else ("DIFF" if c.gating else "diff*")
            lines.append(f"  {status:<6}  {c.label:<{w}}  {c.expected:<{we}}  {c.got:<{wg}}  {c.citation}")
    ok, bad, soft = summarize(checks)
    tail = f"  {ok}/{len(checks)} entries match"
    if soft:
        tail += f"; {soft} report-only differences (not gating)"
    lines.append(tail)
    return "\n".join(lines)
