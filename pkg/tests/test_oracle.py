from math import comb

import pytest

from lcsq.intlat import AbGroup
from lcsq.ncalg import parse_poly
from lcsq.oracle import (Conjectural, HypothesisError, JHSummand, QPolyParams,
                         cor22_prime_witness, distinct_linear_factors, jh_rank, jh_series,
                         multiplicative_order, n2_rank, n2_rank_sum_of_powers,
                         n3_rank_conjecture, qpoly_group, qpoly_S_closed, qpoly_S_recursive,
                         skew_group, torsion3_count)


def test_s_examples():
    assert qpoly_S_recursive(2, 2, 1, 1) == 1
    assert qpoly_S_recursive(3, 4, 2, 2) == 32
    assert qpoly_S_recursive(2, 5, 2, 3) == 1


@pytest.mark.parametrize("q", [2, 3, 5, -2])
def test_s_recursion_equals_closed_form(q):
    for k in range(2, 11):
        for i in range(1, k):
            assert qpoly_S_recursive(q, k, i, k - i) == qpoly_S_closed(q, k, i, k - i)


def test_s_rejects_unit_q():
    with pytest.raises(HypothesisError):
        qpoly_S_recursive(1, 2, 1, 1)
    with pytest.raises(HypothesisError):
        QPolyParams(-1, 2, 1, 1)


def test_qpoly_examples():
    assert qpoly_group(QPolyParams(3, 2, 1, 2), "B") == AbGroup.cyclic(2)
    assert qpoly_group(QPolyParams(3, 3, 2, 2), "N") == AbGroup.cyclic(8)
    assert qpoly_group(QPolyParams(5, 3, 3, 0), "B") == AbGroup()
    # Z/|q-1| with q = 2 is trivial
    assert qpoly_group(QPolyParams(2, 2, 2, 2), "N").is_trivial


def test_skew_examples():
    assert skew_group(2, 1, 2, "B") == AbGroup.cyclic(2)
    assert skew_group(3, 2, 2, "N") == AbGroup(1)
    assert skew_group(2, 2, 2, "B") == AbGroup()


def test_prime_witness():
    k, i, j = cor22_prime_witness(2, 7)
    assert (i, j) == (3, 3)
    assert qpoly_group(QPolyParams(2, k, i, j), "N").torsion_order % 7 == 0
    assert cor22_prime_witness(3, 2) == (2, 2, 2)
    with pytest.raises(ValueError):
        cor22_prime_witness(2, 2)


@pytest.mark.parametrize("q", [2, 3, 5, -2, 4, 7])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_prime_witness_order_divisible(q, p):
    if q % p == 0:
        return
    k, i, j = cor22_prime_witness(q, p)
    assert qpoly_group(QPolyParams(q, k, i, j), "N").torsion_order % p == 0


def test_multiplicative_order():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 7) == 6


@pytest.mark.parametrize("text,s", [
    ("x^3", 1), ("x^5", 1), ("x^2*y", 2), ("x^3+y^3", 3), ("x^4+y^4", 4),
    ("(x+y)^2*(x-y)", 2), ("x^3+x^2*y", 2), ("x^2*y^2", 2),
])
def test_distinct_linear_factors(text, s):
    assert distinct_linear_factors(parse_poly(text, 2)) == s


def test_zero_abelianization_refused():
    with pytest.raises(HypothesisError):
        n2_rank(parse_poly("x*y - y*x", 2), 3)


def test_n2_rank_examples():
    assert n2_rank(parse_poly("x^3+y^3", 2), 4) == 1
    assert n2_rank(parse_poly("x^3", 2), 10) == 2
    assert n2_rank(parse_poly("x^2*y", 2), 0) == 0


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_n2_rank_specialises_to_sum_of_powers(m):
    f = parse_poly(f"x^{m}+y^{m}", 2)
    assert all(n2_rank(f, d) == n2_rank_sum_of_powers(m, d) for d in range(3 * m))


def test_n3_conjecture_examples():
    for m, d, v in [(4, 4, 5), (4, 7, 4), (3, 2, 0)]:
        c = n3_rank_conjecture(m, d)
        assert isinstance(c, Conjectural) and c.conjecture and c.value == v
    assert str(n3_rank_conjecture(4, 4)) == "5 (CONJECTURE)"


def test_jh_rank_examples():
    assert jh_rank(jh_series("B", 4, 3), 5) == 7
    assert all(jh_rank((), d) == 0 for d in range(10))
    assert jh_rank(jh_series("B", 2, 4), 4) == 3
    with pytest.raises(KeyError):
        jh_series("B", 9, 3)


def test_jh_lists_as_transcribed():
    assert jh_series("B", 4, 3) == (
        JHSummand(1, 3), JHSummand(2, 2), JHSummand(2, 3, 2), JHSummand(3, 1),
        JHSummand(3, 2, 2), JHSummand(3, 3))
    for m in range(2, 6):
        assert jh_series("N", 2, m) == tuple(JHSummand(1, d) for d in range(1, m))


def test_torsion3_count():
    assert [torsion3_count(n) for n in (5, 6, 7)] == [1, 6, 22]
    assert all(torsion3_count(n) == 0 for n in range(1, 5))
    assert torsion3_count(9) == comb(9, 5) + comb(9, 7) + comb(9, 9)
