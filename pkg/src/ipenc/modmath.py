"""Exact integer helpers: factorization, primality, prime search, CRT residues."""

from dataclasses import dataclass
from math import prod

from .errors import NotSquareFree, Overflow

#: Largest integer accepted as a modulus or produced by a prime search.
MAX_INT = 2**63 - 1

# Deterministic Miller-Rabin witnesses; correct for every n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclass(frozen=True)
class Modulus:
    """A square-free modulus ``q`` together with its prime factors."""

    q: int
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if prod(self.factors) != self.q:
            raise ValueError(f"factors {self.factors} do not multiply to {self.q}")
        if list(self.factors) != sorted(set(self.factors)):
            raise ValueError("factors must be distinct and increasing")

    @property
    def k(self):
        return len(self.factors)

    @property
    def is_prime(self):
        return self.k == 1

    @classmethod
    def from_primes(cls, primes):
        primes = sorted(primes)
        for p in primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        q = prod(primes)
        _check_range(q)
        return cls(q, tuple(primes))

    def to_dict(self):
        return {"q": self.q, "factors": list(self.factors)}


def _check_range(v):
    if v > MAX_INT:
        raise Overflow(f"{v} exceeds the supported range 2^63-1")


def is_prime(p):
    """Deterministic primality test for ``0 <= p <= 2^63 - 1`` (and beyond)."""
    if p < 2:
        return False
    for small in _MR_WITNESSES:
        if p % small == 0:
            return p == small
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, p)
        if x == 1 or x == p - 1:
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def factorize(q):
    """Trial-division factorization of a square-free ``q >= 2``.

    Raises :class:`NotSquareFree` if some prime squared divides ``q``.
    """
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    _check_range(q)
    if is_prime(q):
        return Modulus(q, (q,))
    factors = []
    rest = q
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            rest //= p
            if rest % p == 0:
                raise NotSquareFree(q, p)
            factors.append(p)
            if is_prime(rest):
                break
        p += 1 if p == 2 else 2
    if rest > 1:
        factors.append(rest)
    return Modulus(q, tuple(factors))


def dirichlet_prime(m, lower_bound):
    """Smallest prime ``p > lower_bound`` with ``p % m == 1``."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if lower_bound < 0:
        raise ValueError("lower_bound must be >= 0")
    # first candidate of the form a*m + 1 strictly above lower_bound
    p = (lower_bound // m) * m + 1
    if p <= lower_bound:
        p += m
    while True:
        _check_range(p)
        if is_prime(p):
            return p
        p += m


def crt_residues(v, m):
    """Residues of ``v`` modulo each prime factor of ``m``."""
    if not 0 <= v < m.q:
        raise ValueError(f"{v} not in [0, {m.q})")
    return [v % p for p in m.factors]
