import pytest

from ipenc.errors import NotSquareFree, Overflow
from ipenc.modmath import MAX_INT, Modulus, crt_residues, dirichlet_prime, factorize, is_prime


@pytest.mark.parametrize("q, factors", [(6, (2, 3)), (305, (5, 61)), (7, (7,)), (30, (2, 3, 5)),
                                        (1379, (7, 197))])
def test_factorize(q, factors):
    m = factorize(q)
    assert m.factors == factors
    assert m.k == len(factors)
    assert m.is_prime == (len(factors) == 1)


def test_not_square_free_reports_prime():
    with pytest.raises(NotSquareFree) as err:
        factorize(12)
    assert (err.value.q, err.value.p) == (12, 2)


def test_factorize_rejects_out_of_range():
    with pytest.raises(Overflow):
        factorize(MAX_INT + 1)
    with pytest.raises(ValueError):
        factorize(1)


@pytest.mark.parametrize("p, want", [(61, True), (1, False), (305, False), (2, True), (0, False),
                                     (561, False), (2**61 - 1, True), (3215031751, False)])
def test_is_prime(p, want):
    assert is_prime(p) is want


def test_is_prime_matches_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))
    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if slow(n)]


@pytest.mark.parametrize("m, lb, want", [(5, 50, 61), (2, 2, 3), (6, 0, 7)])
def test_dirichlet_prime(m, lb, want):
    assert dirichlet_prime(m, lb) == want


def test_dirichlet_prime_rejects_trivial_modulus():
    with pytest.raises(ValueError):
        dirichlet_prime(1, 10)


def test_crt_residues():
    assert crt_residues(0, factorize(6)) == [0, 0]
    assert crt_residues(3, factorize(6)) == [1, 0]
    assert crt_residues(0, factorize(305)) == [0, 0]
    with pytest.raises(ValueError):
        crt_residues(6, factorize(6))


def test_modulus_validation():
    assert Modulus.from_primes([3, 2]).q == 6
    with pytest.raises(ValueError):
        Modulus.from_primes([4])
    with pytest.raises(ValueError):
        Modulus(10, (2, 3))
