import copy
from math import ceil, comb

import pytest

from ipenc.bounds import (Certificate, builtin_bound, check, diagonal_bound, find_triangular,
                          lift_bound, min_rank_oracle, min_rank_search, mpoly_counting_bound,
                          thr1_certificate, triangular_bound)
from ipenc.errors import (CapExceeded, NotDiagonalPattern, NotTriangularPattern,
                          UnverifiedReduction, Unsupported)
from ipenc.modmath import factorize
from ipenc.predicates import Predicate, ZeroPattern, builtin_reduction, identity_reduction, zero_pattern


def test_oracle_examples():
    assert min_rank_oracle(zero_pattern(Predicate("EQ", 4)), 2) == 4
    assert min_rank_oracle(zero_pattern(Predicate("GT", 3)), 2) == 3
    assert min_rank_oracle(ZeroPattern.from_table([[1, 1], [1, 1]]), 3) == 0
    assert min_rank_oracle(ZeroPattern.from_table([[0]]), 5) == 1


def test_oracle_eq_mod2_odd_and_even():
    # J - I is the only representing matrix over Z_2
    assert min_rank_oracle(zero_pattern(Predicate("EQ", 3)), 2) == 2
    assert min_rank_oracle(zero_pattern(Predicate("EQ", 5)), 2) == 4


def test_oracle_returns_matching_matrix():
    z = zero_pattern(Predicate("EQ", 3))
    r, F = min_rank_search(z, 3)
    assert r == 2 and z.matches(F)


def test_oracle_cap():
    z = zero_pattern(Predicate("EQ", 5))
    with pytest.raises(CapExceeded):
        min_rank_oracle(z, 5, cap=3)
    with pytest.raises(CapExceeded):
        min_rank_oracle(z, 7, max_assignments=100)


def test_find_triangular_on_gt():
    w = find_triangular(zero_pattern(Predicate("GT", 5)))
    assert w.diag_len == 5


@pytest.mark.parametrize("n, q, want", [(4, 7, 4), (6, 6, 3), (6, 30, 2), (5, 2, 5)])
def test_gt_triangular_bound(n, q, want):
    c = triangular_bound(None, factorize(q), range(n), range(n), predicate=Predicate("GT", n))
    assert c.bound == want and check(c)


def test_triangular_bound_rejects_bad_order():
    with pytest.raises(NotTriangularPattern):
        triangular_bound(None, factorize(5), [0, 1], [1, 0], predicate=Predicate("GT", 2))


@pytest.mark.parametrize("m, q, want", [(2, 5, 4), (3, 7, 8), (3, 6, 4)])
def test_thr1_complement_ordering(m, q, want):
    c = thr1_certificate(m, factorize(q))
    assert c.bound == want == ceil(2**m / factorize(q).k) and check(c)


@pytest.mark.parametrize("n, q, want", [(5, 7, 5), (6, 30, 2)])
def test_neq_diagonal(n, q, want):
    c = diagonal_bound(None, factorize(q), predicate=Predicate("NEQ", n))
    assert c.bound == want and check(c)


def test_diagonal_one_cell_and_rejects():
    assert diagonal_bound(ZeroPattern.from_table([[0]]), factorize(3)).bound == 1
    with pytest.raises(NotDiagonalPattern):
        diagonal_bound(None, factorize(3), predicate=Predicate("GT", 3))


def test_lift_bound_and_identity():
    base = triangular_bound(None, factorize(7), range(3), range(3), predicate=Predicate("GT", 3))
    same = lift_bound(identity_reduction(Predicate("GT", 3)), base)
    assert same.bound == base.bound and check(same)
    with pytest.raises(UnverifiedReduction):
        lift_bound(builtin_reduction("INDEX=>NEQ", n=3), base)


@pytest.mark.parametrize("n, t, q", [(6, 3, 7), (5, 1, 7), (7, 2, 30), (4, 4, 5), (5, 4, 7)])
def test_ethr_bound_is_max_of_chains(n, t, q):
    k = factorize(q).k
    want = ceil(n - t + 2) if t > n - 2 else max(n - t + 2, t + 2)
    c = builtin_bound(Predicate("ETHR", n, t=t), factorize(q))
    assert c.bound == ceil(want / k) and check(c)


@pytest.mark.parametrize("n, d, want", [(2, 1, 3), (3, 0, 1), (3, 3, 8)])
def test_mpoly_counting(n, d, want):
    c = mpoly_counting_bound(n, d, 3)
    assert c.bound == want and check(c)


@pytest.mark.parametrize("n, t, q", [(4, 2, 5), (5, 3, 7), (4, 4, 6), (3, 1, 5)])
def test_thr_builtin(n, t, q):
    c = builtin_bound(Predicate("THR", n, t=t), factorize(q))
    assert c.bound == ceil(2 ** (n - t + 1) / factorize(q).k) and check(c)


@pytest.mark.parametrize("n, q", [(1, 6), (2, 6), (2, 30), (2, 3)])
def test_oreq_builtin(n, q):
    c = builtin_bound(Predicate("OR_EQ", n, q=q), factorize(q))
    assert c.bound == ceil(2**n / factorize(q).k) and check(c)


def test_mpoly_composite_uses_lifted_neq():
    c = builtin_bound(Predicate("MPOLY", 3, d=2, q=6), factorize(6))
    assert c.method == "ReductionLift" and c.bound == ceil(comb(3, 2) / 2) and check(c)


def test_eq_builtin():
    c = builtin_bound(Predicate("EQ", 4), factorize(2))
    assert c.method == "ExactMinRank" and c.bound == 4 and check(c)
    c = builtin_bound(Predicate("EQ", 4), factorize(6))
    assert c.bound == 1 and check(c)
    for q in (2, 6):
        c = builtin_bound(Predicate("EQ", 1), factorize(q))
        assert c.bound == 0 and check(c)


def test_table_unsupported():
    with pytest.raises(Unsupported):
        builtin_bound(Predicate("TABLE", table=[[0]]), factorize(2))


ALL = [Predicate("GT", 5), Predicate("NEQ", 4), Predicate("INDEX", 4), Predicate("DISJ", 3),
       Predicate("ETHR", 5, t=2), Predicate("THR", 4, t=3), Predicate("OR_EQ", 2, q=5),
       Predicate("EQ", 3)]


@pytest.mark.parametrize("P", ALL, ids=lambda P: P.label())
@pytest.mark.parametrize("q", [5, 30])
def test_certificates_survive_json_and_tampering(P, q):
    c = builtin_bound(P, factorize(q))
    back = Certificate.from_json(c.to_json())
    assert check(back)
    bumped = copy.deepcopy(c.to_json())
    bumped["bound"] += 1
    assert not check(Certificate.from_json(bumped))


def test_tampered_triangular_order():
    c = builtin_bound(Predicate("GT", 4), factorize(5))
    data = copy.deepcopy(c.to_json())
    data["witness"]["col_order"] = [3, 2, 1, 0]
    assert not check(Certificate.from_json(data))


def test_check_with_wrong_modulus():
    c = builtin_bound(Predicate("GT", 4), factorize(5))
    assert not check(c, m=factorize(7))
