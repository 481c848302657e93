"""Deterministic inner product encodings and their exhaustive verifier.

An encoding of ``P`` modulo ``q`` maps ``x -> vx`` and ``y -> vy`` in
``Z_q^length`` so that ``P(x, y)`` holds exactly when ``<vx, vy> = 0 mod q``.
"""

from dataclasses import dataclass, field
from math import ceil, prod

from .errors import (BadK, BadParams, KExceedsN, Overflow, PatternMismatch,
                     QTooSmall, TooLarge)
from .modmath import MAX_INT, Modulus, dirichlet_prime, factorize, is_prime
from .predicates import (MultilinearPoly, Predicate, apply_reduction, binom_le,
                         builtin_reduction, cell_cap, monomials, zero_pattern)
from .zqlinalg import factor_rank, residue_matrix


@dataclass(eq=False)
class Encoding:
    q: int
    length: int
    encode_x: object = field(repr=False)
    encode_y: object = field(repr=False)
    provenance: str = ""
    factors: tuple = ()
    predicate: Predicate = None

    def __post_init__(self):
        if not self.factors:
            try:
                self.factors = factorize(self.q).factors
            except Exception:
                self.factors = ()
        self.factors = tuple(self.factors)

    def inner(self, x, y):
        vx, vy = self.encode_x(x), self.encode_y(y)
        return sum(a * b for a, b in zip(vx, vy)) % self.q

    def gram_matrix(self, predicate=None, cap=None):
        """The matrix ``F[x, y] = <vx, vy> mod q`` over the canonical domain orders."""
        from .zqlinalg import ZqMatrix

        P = predicate or self.predicate
        X, Y = P.x_domain, P.y_domain
        if X.size * Y.size > cell_cap(cap):
            raise TooLarge(f"{X.size * Y.size} cells exceed the cap")
        vxs = [self.encode_x(x) for x in X]
        vys = [self.encode_y(y) for y in Y]
        return ZqMatrix(len(vxs), len(vys), self.q,
                        [sum(a * b for a, b in zip(vx, vy)) % self.q for vx in vxs for vy in vys])

    def to_json(self, predicate=None, cap=None):
        P = predicate or self.predicate
        if P is None:
            raise BadParams("serializing an encoding needs its predicate")
        X, Y = P.x_domain, P.y_domain
        if X.size + Y.size > cell_cap(cap):
            raise TooLarge("domains too large to tabulate")
        return {
            "q": self.q,
            "factors": list(self.factors),
            "length": self.length,
            "predicate": P.to_json(),
            "provenance": self.provenance,
            "x": {str(i): list(self.encode_x(x)) for i, x in enumerate(X)},
            "y": {str(i): list(self.encode_y(y)) for i, y in enumerate(Y)},
        }

    @classmethod
    def from_json(cls, data, predicate=None):
        P = predicate or Predicate.from_json(data["predicate"])
        X, Y = P.x_domain, P.y_domain
        q = int(data["q"])
        tx = {int(k): tuple(int(v) % q for v in vec) for k, vec in data["x"].items()}
        ty = {int(k): tuple(int(v) % q for v in vec) for k, vec in data["y"].items()}
        return cls(q=q, length=int(data["length"]),
                   encode_x=lambda x: tx[X.index(x)], encode_y=lambda y: ty[Y.index(y)],
                   provenance=data.get("provenance", "file"),
                   factors=tuple(data.get("factors", ())), predicate=P)


@dataclass(frozen=True)
class Mismatch:
    x: int  # canonical index in the x domain
    y: int
    inner_product: int
    expected: bool  # the predicate value


@dataclass
class VerificationReport:
    checked_pairs: int
    mismatches: list

    @property
    def ok(self):
        return not self.mismatches

    def to_json(self):
        return {"checked_pairs": self.checked_pairs, "ok": self.ok,
                "mismatches": [[m.x, m.y, m.inner_product, int(m.expected)]
                               for m in self.mismatches]}


def verify(P, e, cap=None):
    """Check every pair: ``P(x, y)`` iff ``<vx, vy> = 0 mod q``."""
    X, Y = P.x_domain, P.y_domain
    if X.size * Y.size > cell_cap(cap):
        raise TooLarge(f"{X.size * Y.size} pairs exceed the cap {cell_cap(cap)}")
    q = e.q
    xs, ys = list(X), list(Y)
    vys = []
    for y in ys:
        v = tuple(e.encode_y(y))
        if len(v) != e.length:
            raise BadParams(f"y-vector of length {len(v)}, expected {e.length}")
        vys.append(v)
    bad = []
    for i, x in enumerate(xs):
        vx = tuple(e.encode_x(x))
        if len(vx) != e.length:
            raise BadParams(f"x-vector of length {len(vx)}, expected {e.length}")
        for j, (y, vy) in enumerate(zip(ys, vys)):
            ip = sum(a * b for a, b in zip(vx, vy)) % q
            want = P(x, y)
            if (ip == 0) != want:
                bad.append(Mismatch(i, j, ip, want))
    return VerificationReport(len(xs) * len(ys), bad)


def _make(q, length, fx, fy, provenance, predicate, factors=()):
    def ex(x):
        return tuple(v % q for v in fx(x))

    def ey(y):
        return tuple(v % q for v in fy(y))

    return Encoding(q=q, length=length, encode_x=ex, encode_y=ey,
                    provenance=provenance, factors=factors, predicate=predicate)


def _unit(n, i):
    return tuple(int(j == i) for j in range(1, n + 1))


# -- equality ---------------------------------------------------------------

def encode_eq_mod2(n):
    """``vx = e_x``, ``vy = 1^n - e_y`` over Z_2."""
    return _make(2, n, lambda x: _unit(n, x),
                 lambda y: tuple(1 - b for b in _unit(n, y)),
                 "eq_mod2", Predicate("EQ", n), (2,))


def encode_eq_large_q(n, q):
    """``vx = (1, x)``, ``vy = (y, -1)``; needs ``q >= n``."""
    if q < max(n, 2):
        raise QTooSmall(f"need q >= n, got q={q}, n={n}")
    return _make(q, 2, lambda x: (1, x), lambda y: (y, -1), "eq_large_q", Predicate("EQ", n))


# -- index, inequality, disjointness -----------------------------------------

def _as_modulus(m):
    return m if isinstance(m, Modulus) else factorize(int(m))


def encode_index(n, m, variant="default"):
    """Length ``ceil(n/k)`` encoding of INDEX_n for a product of k distinct primes.

    The data string is split into ``ceil(n/k)`` blocks of ``k`` bits
    (padding bits are 1 and never indexed). Block ``i`` is sent to
    ``prod_j p_j^(1 - X[i,j])``; the index ``y`` in block ``i``, slot ``j``
    becomes ``q / p_j`` at coordinate ``i``.

    ``variant="printed"`` uses the exponent ``X[i,j]`` instead; that map
    vanishes exactly when the indexed bit is 1, i.e. it encodes the
    complement of INDEX. It is kept for comparison only.
    """
    m = _as_modulus(m)
    k, q = m.k, m.q
    if k > n:
        raise KExceedsN(f"k={k} prime factors but n={n}")
    if variant not in ("default", "printed"):
        raise BadParams(f"unknown variant {variant!r}")
    blocks = ceil(n / k)
    ps = m.factors
    flip = variant == "default"

    def ex(x):
        bits = list(x) + [1] * (blocks * k - n)
        return tuple(prod(p ** ((1 - bits[i * k + j]) if flip else bits[i * k + j])
                          for j, p in enumerate(ps)) for i in range(blocks))

    def ey(y):
        i, j = divmod(y - 1, k)
        v = [0] * blocks
        v[i] = q // ps[j]
        return tuple(v)

    name = "index" if flip else "index_printed"
    return _make(q, blocks, ex, ey, name, Predicate("INDEX", n), ps)


def encode_neq(n, m):
    """NEQ_n through INDEX_n (``NEQ(i, j) = INDEX(e_i, j)``)."""
    return apply_reduction(builtin_reduction("INDEX=>NEQ", n=n), encode_index(n, m))


def disj_primes(n, k):
    """Primes for the disjointness tower: ``p_1`` is the least prime above ``n``;
    each later ``p_j`` is the least prime above ``ceil(n/k) * (p_1...p_{j-1})^2``
    congruent to 1 modulo ``p_1...p_{j-1}``."""
    if not 1 <= k <= n:
        raise KExceedsN(f"need 1 <= k <= n, got k={k}, n={n}")
    blocks = ceil(n / k)
    primes = [dirichlet_prime(2, n) if n >= 2 else 2]
    for step in range(2, k + 1):
        P = prod(primes)
        try:
            p = dirichlet_prime(P, blocks * P * P)
        except Overflow:
            raise Overflow(f"prime p_{step} exceeds 2^63-1 (n={n}, k={k})") from None
        if P * p > MAX_INT:
            raise Overflow(f"q = {P * p} after p_{step} exceeds 2^63-1 (n={n}, k={k})")
        primes.append(p)
    return primes


def encode_disj(n, k):
    """Length ``ceil(n/k)`` DISJ_n encoding; returns ``(Modulus, Encoding)``."""
    primes = disj_primes(n, k)
    m = Modulus.from_primes(primes)
    q = m.q
    blocks = ceil(n / k)

    def vec(S):
        bits = [int(i in S) for i in range(1, blocks * k + 1)]
        return tuple(prod(p ** (1 - bits[i * k + j]) for j, p in enumerate(primes))
                     for i in range(blocks))

    return m, _make(q, blocks, vec, vec, "disj", Predicate("DISJ", n), m.factors)


# -- greater than ------------------------------------------------------------

def encode_gt_prime(n, q):
    """``vx = e_x``, ``vy = e_1 + ... + e_y``; the product is ``[x <= y]``."""
    return _make(q, n, lambda x: _unit(n, x),
                 lambda y: tuple(int(i <= y) for i in range(1, n + 1)),
                 "gt_prime", Predicate("GT", n))


def encode_gt_kprimes(n, m):
    """Length-1 GT_n encoding for a product of exactly ``n`` primes."""
    m = _as_modulus(m)
    if m.k != n:
        raise BadK(f"need exactly n={n} prime factors, modulus has {m.k}")
    ps = m.factors
    return _make(m.q, 1, lambda x: (prod(ps[:x - 1]),), lambda y: (prod(ps[y:]),),
                 "gt_kprimes", Predicate("GT", n), ps)


def encode_gt(n, m):
    """GT_n at any square-free modulus, length ``ceil(n/k)``."""
    m = _as_modulus(m)
    if m.k == 1:
        return encode_gt_prime(n, m.q)
    if m.k == n:
        return encode_gt_kprimes(n, m)
    return apply_reduction(builtin_reduction("INDEX=>GT", n=n), encode_index(n, m))


# -- exact threshold ---------------------------------------------------------

def encode_ethr(n, t, q, force_general=False):
    """ETHR_n^t: length 2 for ``t = n``, 3 for ``t = n-1`` (``q >= n+2``), else n+1."""
    if not 1 <= t <= n:
        raise BadParams(f"need 1 <= t <= n, got t={t}")
    P = Predicate("ETHR", n, t=t)
    full = frozenset(range(1, n + 1))
    if not force_general and t == n:
        return _make(q, 2, lambda S: (1, int(S == full)), lambda T: (1, -int(T == full)),
                     "ethr_full", P)
    if not force_general and t == n - 1 and n >= 3 and q >= n + 2:
        def ex(S):
            if S == full:
                return (1, 0, 0)
            if len(S) == n - 1:
                return (0, next(iter(full - S)), 1)
            return (1, -1, 1)

        def ey(T):
            if T == full:
                return (1, 0, 0)
            if len(T) == n - 1:
                return (0, 1, -next(iter(full - T)))
            return (1, 1, 1)

        return _make(q, 3, ex, ey, "ethr_near_full", P)
    # |S & T| - t ranges over [-t, n - t]; no nonzero value may vanish
    if q <= max(t, n - t):
        raise QTooSmall(f"general form needs q > max(t, n-t) (q >= n suffices for t < n); got q={q}")
    return _make(q, n + 1, lambda S: (*(int(i in S) for i in full), 1),
                 lambda T: (*(int(i in T) for i in full), -t), "ethr_general", P)


# -- polynomials -------------------------------------------------------------

def encode_mpoly(n, d, q, cap=None):
    """``vx_S = prod_{i in S} x_i`` and ``vy_S = a_S`` over monomials of degree <= d."""
    length = binom_le(n, d)
    if length > cell_cap(cap):
        raise TooLarge(f"{length} monomials exceed the cap")
    mons = monomials(n, d)
    return _make(q, length, lambda x: tuple(prod(x[i - 1] for i in S) for S in mons),
                 lambda p: tuple(p.coefficient(S) for S in mons),
                 "mpoly", Predicate("MPOLY", n, d=d, q=q))


def encode_thr(n, t, q):
    """THR_n^t through the degree ``n-t+1`` polynomial ``prod_{j=t..n}(|S & T| - j)``.

    Needs every prime factor of ``q`` above ``n`` so that a product of the
    nonzero integers ``s - j`` (``|s - j| <= n``) never vanishes.
    """
    if not 1 <= t <= n:
        raise BadParams(f"need 1 <= t <= n, got t={t}")
    m = _as_modulus(q)
    if m.factors[0] <= n:
        raise QTooSmall(f"every prime factor of q must exceed n={n}; q={q}")
    base = encode_mpoly(n, n - t + 1, q)
    e = apply_reduction(builtin_reduction("MPOLY=>THR", n=n, t=t, q=q), base)
    e.provenance = "thr"
    return e


def encode_oreq(n, q):
    """OR_EQ_n^q through ``prod_i (x_i - y_i)``, length ``2^n``."""
    base = encode_mpoly(n, n, q)
    e = apply_reduction(builtin_reduction("MPOLY=>OR_EQ", n=n, q=q), base)
    e.provenance = "oreq"
    return e


# -- generic -----------------------------------------------------------------

def encode_from_matrix(P, F, p):
    """Encoding of length ``rank(F)`` from the factorization ``F = U V`` over Z_p."""
    if not is_prime(p):
        from .errors import NotPrime
        raise NotPrime(f"{p} is not prime")
    Fp = F if F.q == p else residue_matrix(F, p)
    z = zero_pattern(P)
    if not z.matches(Fp):
        raise PatternMismatch(f"matrix does not represent {P.label()} modulo {p}")
    fr = factor_rank(Fp, p)
    X, Y = P.x_domain, P.y_domain
    U, V = fr.U, fr.V
    return _make(p, fr.r, lambda x: U.row(X.index(x)), lambda y: V.column(Y.index(y)),
                 "from_matrix", P, (p,))


def encode_truth_table(P, m):
    """Any predicate through INDEX of the smaller domain size."""
    m = _as_modulus(m)
    r = builtin_reduction("INDEX=>ANY", predicate=P)
    e = apply_reduction(r, encode_index(r.target.n, m) if r.target.n >= m.k
                        else _index_small(r.target.n, m))
    e.provenance = "truth_table"
    return e


def _index_small(n, m):
    # fewer indices than primes: use the first n primes' product only
    sub = Modulus.from_primes(m.factors[:n])
    base = encode_index(n, sub)
    scale = m.q // sub.q
    return _make(m.q, base.length, base.encode_x,
                 lambda y: tuple(v * scale for v in base.encode_y(y)),
                 "index", base.predicate, m.factors)


def build_encoding(P, m=None, k=None):
    """Shortest available construction for ``P`` modulo ``m``.

    DISJ with ``k`` given picks its own modulus. Falls back to the truth
    table construction when no dedicated one applies.
    """
    pid, n = P.id, P.n
    if pid == "DISJ" and m is None:
        return encode_disj(n, k or 1)[1]
    if m is None:
        raise BadParams("a modulus is required")
    m = _as_modulus(m)
    q = m.q
    if pid == "EQ":
        if q == 2:
            return encode_eq_mod2(n)
        if q >= n:
            return encode_eq_large_q(n, q)
    elif pid == "GT":
        if m.k <= n:
            return encode_gt(n, m)
    elif pid == "INDEX":
        if m.k <= n:
            return encode_index(n, m)
    elif pid == "NEQ":
        if m.k <= n:
            return encode_neq(n, m)
    elif pid == "DISJ":
        if m.k == 1 and q > n:
            return _make(q, n, lambda S: tuple(q ** (1 - int(i in S)) for i in range(1, n + 1)),
                         lambda T: tuple(q ** (1 - int(i in T)) for i in range(1, n + 1)),
                         "disj", P, (q,))
    elif pid == "ETHR":
        try:
            return encode_ethr(n, P.t, q)
        except QTooSmall:
            pass
    elif pid == "MPOLY":
        if P.q == q:
            return encode_mpoly(n, P.d, q)
    elif pid == "THR":
        if m.factors[0] > n:
            return encode_thr(n, P.t, q)
    elif pid == "OR_EQ":
        if P.q == q:
            e = encode_oreq(n, q)
            if m.k == 1 or verify(P, e).ok:
                return e
    return encode_truth_table(P, m)
