from fractions import Fraction

import numpy as np
import pytest

from ipenc.errors import BadEps, BadParams, ExactUnavailable, NotPrime, QTooSmallForError
from ipenc.predicates import Predicate
from ipenc.randomized import (bucket_hash_support, complement_support, custom_encoding,
                              entry_errors, enumerate_error, estimate_error, materialize,
                              pair_error, prob_rank_upper, rand_encode_eq, rand_encode_gt,
                              rand_encode_neq)
from ipenc.zqlinalg import ZqMatrix


def test_length_contracts():
    assert rand_encode_neq(2, 5, Fraction(1, 2)).max_length == 2
    assert rand_encode_neq(100, 5, 0.125).max_length == 8
    assert rand_encode_eq(100, 2, Fraction(1, 4)).max_length == 5
    pe = rand_encode_gt(256, 11, Fraction(1, 4))
    assert (pe.bits, pe.buckets, pe.max_length) == (8, 32, 257)
    assert rand_encode_gt(16, 11, 0.25).max_length == 65


def test_parameter_errors():
    with pytest.raises(BadEps):
        rand_encode_neq(4, 5, 0)
    with pytest.raises(BadEps):
        rand_encode_eq(4, 5, Fraction(3, 2))
    with pytest.raises(QTooSmallForError):
        rand_encode_gt(256, 7, 0.25)
    with pytest.raises(BadParams):
        rand_encode_neq(4, 1, 0.5)


def test_sampled_vectors_and_determinism():
    pe = rand_encode_eq(20, 7, Fraction(1, 8))
    a, b = pe.sample(3), pe.sample(3)
    for x in range(1, 21):
        assert a.encode_x(x) == b.encode_x(x) and a.encode_y(x) == b.encode_y(x)
        assert len(a.encode_x(x)) == pe.max_length
        assert a.inner(x, x) == 0
    neq = rand_encode_neq(20, 7, Fraction(1, 8)).sample(5)
    assert all(neq.inner(x, x) == 1 for x in range(1, 21))


def test_gt_sample_on_diagonal_is_minus_one():
    pe = rand_encode_gt(16, 11, 0.25)
    e = pe.sample(0)
    assert all(e.inner(x, x) == 10 for x in range(1, 17))


def test_gt_no_collision_witness():
    # distinct buckets for every prefix: no spurious witness, so the answer is exact
    pe = rand_encode_gt(8, 5, buckets=8)
    tables = [np.arange(s) for s in pe.table_shapes()]
    e = pe.encoding_from_tables(tables)
    for x in range(1, 9):
        for y in range(1, 9):
            assert (e.inner(x, y) == 0) == (x > y)


def test_closed_forms():
    pe = rand_encode_neq(10, 5, Fraction(1, 8))
    assert pair_error(pe, 1, 2) == Fraction(1, 8) and pair_error(pe, 3, 3) == 0
    pe = rand_encode_gt(4, 5, buckets=2)
    assert max(pair_error(pe, x, y) for x in range(1, 5) for y in range(1, 5)) <= Fraction(2, 2)


@pytest.mark.parametrize("n, c", [(4, 2), (8, 2), (4, 3)])
def test_enumeration_matches_closed_form(n, c):
    pe = rand_encode_gt(n, 11, buckets=c)
    full = enumerate_error(pe)
    for (x, y), err in full.items():
        assert err == pair_error(pe, x, y)
        assert err <= Fraction(pe.bits, c)


def test_enumeration_neq_eq():
    for make in (rand_encode_neq, rand_encode_eq):
        pe = make(3, 5, Fraction(1, 2))
        assert all(v == pair_error(pe, x, y) for (x, y), v in enumerate_error(pe).items())


def test_exact_report_neq():
    pe = rand_encode_neq(50, 7, Fraction(1, 8))
    rep = estimate_error(pe.predicate, pe, mode="exact")
    assert rep.worst_pair_error == Fraction(1, 8)
    assert rep.avg_error == Fraction(50 * 49, 50 * 50) / 8


def test_monte_carlo_matches_collision_rate():
    pe = rand_encode_neq(6, 7, Fraction(1, 4))
    rep = estimate_error(pe.predicate, pe, mode="monte_carlo", trials=40_000, seed=1)
    assert abs(rep.worst_pair_error - 0.25) <= 2 * rep.radius + 0.01
    assert rep.within(pe.target_eps)


def test_monte_carlo_is_seeded():
    pe = rand_encode_gt(8, 5, 0.5)
    a = estimate_error(pe.predicate, pe, mode="monte_carlo", trials=2000, seed=9)
    b = estimate_error(pe.predicate, pe, mode="monte_carlo", trials=2000, seed=9)
    assert a.to_json() == b.to_json()


def test_batch_agrees_with_single_samples_structurally():
    pe = rand_encode_eq(5, 7, Fraction(1, 3))
    VX, VY = pe.sample_batch(np.random.default_rng(0), 10, [1, 2], [1, 2])
    ips = np.einsum("tal,tbl->tab", VX, VY) % 7
    assert (ips[:, 0, 0] == 0).all() and (ips[:, 1, 1] == 0).all()


def test_custom_encoding_monte_carlo_only():
    base = rand_encode_neq(4, 5, Fraction(1, 2))
    pe = custom_encoding(Predicate("NEQ", 4), 5, 2, Fraction(1, 2), base.sample)
    with pytest.raises(ExactUnavailable):
        estimate_error(pe.predicate, pe, mode="exact")
    rep = estimate_error(pe.predicate, pe, mode="monte_carlo", trials=500, seed=2)
    assert rep.trials == 500


def test_probabilistic_rank():
    assert prob_rank_upper([(ZqMatrix.identity(4, 5), Fraction(1))]) == 4
    sup = bucket_hash_support(4, 2, 5)
    assert prob_rank_upper(sup) <= 2
    assert prob_rank_upper(complement_support(sup)) <= 3
    with pytest.raises(NotPrime):
        prob_rank_upper([(ZqMatrix.identity(2, 6), 1)])


def test_materialized_support_has_expected_error():
    sup = complement_support(bucket_hash_support(3, 2, 5))
    P = Predicate("EQ", 3)
    target = ZqMatrix(3, 3, 5, [int(i != j) for i in range(3) for j in range(3)])
    assert entry_errors(sup, target) == Fraction(1, 2)
    for e, _ in materialize(sup, P):
        assert all(e.inner(x, x) == 0 for x in range(1, 4))
