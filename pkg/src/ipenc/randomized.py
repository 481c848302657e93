"""Probabilistic inner product encodings built from random bucket hashes.

A probabilistic encoding is a seeded distribution over ordinary
:class:`~ipenc.encoders.Encoding` objects. The hash functions are genuinely
uniform random tables (drawn from ``numpy.random.default_rng``), so per-pair
error probabilities have closed forms that :func:`estimate_error` reports
exactly, and that :func:`enumerate_error` re-derives by walking every table.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, sqrt

import numpy as np

from .encoders import Encoding
from .errors import BadEps, BadParams, ExactUnavailable, NotPrime, QTooSmallForError, TooLarge
from .modmath import is_prime
from .predicates import Predicate, bin_vec
from .zqlinalg import ZqMatrix, factor_rank, rank_mod_p

ONE_SIDED = "one_sided_on_equal"
TWO_SIDED = "two_sided"


def _as_fraction(eps):
    f = Fraction(eps).limit_denominator(10**12) if isinstance(eps, float) else Fraction(eps)
    if not 0 < f < 1:
        raise BadEps(f"eps must lie in (0, 1), got {eps}")
    return f


@dataclass(eq=False)
class ProbabilisticEncoding:
    """Distribution over encodings of ``predicate`` modulo ``q``.

    ``kind`` is ``"neq"``, ``"eq"``, ``"gt"`` for the hash constructions or
    ``"custom"`` when only a ``seed -> Encoding`` function is known.
    """

    predicate: Predicate
    q: int
    max_length: int
    target_eps: Fraction
    error_side: str
    kind: str
    buckets: int = 0
    bits: int = 0
    custom_sampler: object = field(default=None, repr=False)

    # hash tables: list of integer arrays, one per hash function
    def table_shapes(self):
        if self.kind in ("neq", "eq"):
            return [self.predicate.n]
        if self.kind == "gt":
            return [2**i for i in range(self.bits)]
        raise ExactUnavailable(f"no hash tables for kind {self.kind!r}")

    def sampler(self, seed):
        return self.sample(seed)

    def sample(self, seed):
        """The encoding drawn with ``seed``; identical seeds give identical encodings."""
        if self.kind == "custom":
            return self.custom_sampler(seed)
        rng = np.random.default_rng(seed)
        tables = [rng.integers(0, self.buckets, size=s) for s in self.table_shapes()]
        return self.encoding_from_tables(tables)

    def encoding_from_tables(self, tables):
        """The encoding determined by explicit hash tables."""
        c, q, n = self.buckets, self.q, self.predicate.n
        if self.kind == "neq":
            h = tables[0]
            vx = lambda x: _unit(c, int(h[x - 1]))  # noqa: E731
            return Encoding(q, c, vx, vx, "rand_neq", predicate=self.predicate)
        if self.kind == "eq":
            h = tables[0]
            return Encoding(q, c + 1,
                            lambda x: (1, *_unit(c, int(h[x - 1]))),
                            lambda y: (1, *(-v % q for v in _unit(c, int(h[y - 1])))),
                            "rand_eq", predicate=self.predicate)
        m = self.bits

        def ex(x):
            b = bin_vec(x, m)
            v = [1] + [0] * (m * c)
            for i in range(m):
                if b[i]:
                    v[1 + i * c + int(tables[i][_prefix(b, i)])] = 1
            return tuple(v)

        def ey(y):
            b = bin_vec(y, m)
            v = [q - 1] + [0] * (m * c)
            for i in range(m):
                if not b[i]:
                    v[1 + i * c + int(tables[i][_prefix(b, i)])] = 1
            return tuple(v)

        return Encoding(q, 1 + m * c, ex, ey, "rand_gt", predicate=self.predicate)

    def sample_batch(self, rng, trials, xs, ys):
        """Vectors for ``trials`` independent draws, restricted to points ``xs``/``ys``.

        Returns integer arrays of shape ``(trials, len(xs), L)`` and
        ``(trials, len(ys), L)``. Hash values at distinct points are
        independent and uniform, so restricting the tables is exact.
        """
        c, q = self.buckets, self.q
        xs, ys = list(xs), list(ys)
        L = self.max_length
        if self.kind in ("neq", "eq"):
            pts = sorted(set(xs) | set(ys))
            pos = {p: i for i, p in enumerate(pts)}
            h = rng.integers(0, c, size=(trials, len(pts)))
            hx = h[:, [pos[x] for x in xs]]
            hy = h[:, [pos[y] for y in ys]]
            off = 0 if self.kind == "neq" else 1
            VX = np.zeros((trials, len(xs), L), dtype=np.int64)
            VY = np.zeros((trials, len(ys), L), dtype=np.int64)
            t_idx = np.arange(trials)[:, None]
            VX[t_idx, np.arange(len(xs))[None, :], off + hx] = 1
            VY[t_idx, np.arange(len(ys))[None, :], off + hy] = 1 if self.kind == "neq" else q - 1
            if off:
                VX[:, :, 0] = 1
                VY[:, :, 0] = 1
            return VX, VY
        if self.kind == "gt":
            m = self.bits
            tables = [rng.integers(0, c, size=(trials, s)) for s in self.table_shapes()]
            VX = np.zeros((trials, len(xs), L), dtype=np.int64)
            VY = np.zeros((trials, len(ys), L), dtype=np.int64)
            VX[:, :, 0] = 1
            VY[:, :, 0] = q - 1
            for arr, pts, want in ((VX, xs, 1), (VY, ys, 0)):
                for col, p in enumerate(pts):
                    b = bin_vec(p, m)
                    for i in range(m):
                        if b[i] == want:
                            slot = tables[i][:, _prefix(b, i)]
                            arr[np.arange(trials), col, 1 + i * c + slot] = 1
            return VX, VY
        raise ExactUnavailable("batch sampling needs a hash construction")


def _unit(c, i):
    v = [0] * c
    v[i] = 1
    return tuple(v)


def _prefix(bits, i):
    """Integer value of the first ``i`` bits (the prefix before position ``i``)."""
    v = 0
    for b in bits[:i]:
        v = 2 * v + b
    return v


def rand_encode_neq(n, q, eps):
    """NEQ_n: ``vx = e_h(x)``, ``vy = e_h(y)`` with ``h`` uniform into ``ceil(1/eps)`` buckets."""
    if q < 2:
        raise BadParams("q must be >= 2")
    eps = _as_fraction(eps)
    c = ceil(1 / eps)
    return ProbabilisticEncoding(Predicate("NEQ", n), q, c, eps, ONE_SIDED, "neq", buckets=c)


def rand_encode_eq(n, q, eps):
    """EQ_n: ``vx = (1, e_h(x))``, ``vy = (1, -e_h(y))``; inner product ``1 - [h(x) = h(y)]``."""
    if q < 2:
        raise BadParams("q must be >= 2")
    eps = _as_fraction(eps)
    c = ceil(1 / eps)
    return ProbabilisticEncoding(Predicate("EQ", n), q, c + 1, eps, ONE_SIDED, "eq", buckets=c)


def rand_encode_gt(n, q, eps=None, buckets=None):
    """GT_n from prefix hashes on the ``m = ceil(log2 n)`` bit expansions.

    ``x > y`` iff at the first differing bit ``x`` has 1 and ``y`` has 0.
    Block ``i`` of ``vx`` is ``x_i * e_{h_i(prefix)}`` and of ``vy`` is
    ``(1 - y_i) * e_{h_i(prefix)}``; a leading ``(1, -1)`` coordinate
    subtracts the single genuine witness. Spurious collisions after the
    first differing bit are the only source of error, at most ``m / c``
    per pair. ``buckets`` overrides ``c = ceil(m / eps)``.
    """
    if n < 2:
        raise BadParams("n must be >= 2")
    m = (n - 1).bit_length()
    if q <= m:
        raise QTooSmallForError(f"need q > m = {m} so spurious counts cannot wrap; q={q}")
    if buckets is None:
        if eps is None:
            raise BadEps("give eps or buckets")
        eps = _as_fraction(eps)
        c = ceil(m / eps)
    else:
        c = int(buckets)
        if c < 1:
            raise BadParams("buckets must be >= 1")
        eps = Fraction(m, c) if eps is None else _as_fraction(eps)
    return ProbabilisticEncoding(Predicate("GT", n), q, 1 + m * c, eps, TWO_SIDED, "gt",
                                 buckets=c, bits=m)


def custom_encoding(predicate, q, max_length, eps, sampler):
    """Wrap an arbitrary ``seed -> Encoding`` sampler (Monte Carlo only)."""
    return ProbabilisticEncoding(predicate, q, max_length, _as_fraction(eps), TWO_SIDED,
                                 "custom", custom_sampler=sampler)


# -- error evaluation ----------------------------------------------------------

@dataclass
class ErrorReport:
    mode: str
    worst_pair_error: object  # Fraction (exact) or float (monte_carlo)
    avg_error: object
    trials: int = 0
    radius: float = 0.0
    worst_pair: tuple = ()
    pairs: int = 0

    def within(self, eps):
        return float(self.worst_pair_error) <= float(eps) + self.radius

    def to_json(self):
        def num(v):
            return float(v)

        out = {"mode": self.mode, "worst_pair_error": num(self.worst_pair_error),
               "avg_error": num(self.avg_error), "trials": self.trials,
               "worst_pair": list(self.worst_pair), "pairs": self.pairs}
        if self.mode == "exact":
            out["worst_pair_error_exact"] = str(self.worst_pair_error)
            out["avg_error_exact"] = str(self.avg_error)
        else:
            out["radius"] = self.radius
        return out


def pair_error(pe, x, y):
    """Exact probability that the sampled encoding answers ``(x, y)`` wrongly."""
    c = Fraction(1, pe.buckets)
    if pe.kind in ("neq", "eq"):
        return Fraction(0) if x == y else c
    if pe.kind != "gt":
        raise ExactUnavailable(f"no closed form for {pe.kind!r}")
    m = pe.bits
    bx, by = bin_vec(x, m), bin_vec(y, m)
    if bx == by:
        return Fraction(0)
    j = next(i for i in range(m) if bx[i] != by[i])
    # positions after the first difference where a spurious witness can fire
    K = sum(1 for i in range(j + 1, m) if bx[i] == 1 and by[i] == 0)
    if x > y:
        return 1 - (1 - c) ** K
    return K * c * (1 - c) ** (K - 1) if K else Fraction(0)


def _grid(P, points):
    n = P.n
    if points is not None:
        return list(points)
    if n <= 64:
        return list(range(1, n + 1))
    step = (n - 1) / 31
    return sorted({1 + round(i * step) for i in range(32)})


def estimate_error(P, pe, mode="exact", trials=10_000, seed=0, points=None, chunk=None):
    """Worst per-pair and average error of ``pe`` against ``P``.

    ``exact`` uses the closed forms over every pair of the domain.
    ``monte_carlo`` draws ``trials`` encodings from ``seed`` and counts
    wrong answers on the pairs of ``points`` (all of ``[n]`` when n <= 64,
    else 32 evenly spaced points); ``radius`` is ``3 * sqrt(eps(1-eps)/trials)``.
    """
    if P != pe.predicate:
        raise BadParams(f"encoding is for {pe.predicate.label()}, not {P.label()}")
    if mode == "exact":
        if pe.kind == "custom":
            raise ExactUnavailable("exact error needs a hash construction")
        n = P.n
        if pe.kind in ("neq", "eq"):
            # every off-diagonal pair errs with probability exactly 1/c
            if n == 1:
                return ErrorReport("exact", Fraction(0), Fraction(0), 0, 0.0, (1, 1), 1)
            c = Fraction(1, pe.buckets)
            return ErrorReport("exact", c, c * (n * n - n) / (n * n), 0, 0.0, (1, 2), n * n)
        worst, where, total = Fraction(0), (), Fraction(0)
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                e = pair_error(pe, x, y)
                total += e
                if e > worst or not where:
                    worst, where = e, (x, y)
        return ErrorReport("exact", worst, total / (n * n), 0, 0.0, where, n * n)
    if mode != "monte_carlo":
        raise BadParams(f"unknown mode {mode!r}")
    pts = _grid(P, points)
    truth = np.array([[P(x, y) for y in pts] for x in pts], dtype=bool)
    errors = np.zeros(truth.shape, dtype=np.int64)
    if pe.kind == "custom":
        children = np.random.SeedSequence(seed).spawn(trials)
        for child in children:
            e = pe.sample(int(child.generate_state(1)[0]))
            for a, x in enumerate(pts):
                vx = e.encode_x(x)
                for b, y in enumerate(pts):
                    ip = sum(u * v for u, v in zip(vx, e.encode_y(y))) % pe.q
                    errors[a, b] += (ip == 0) != truth[a, b]
    else:
        rng = np.random.default_rng(seed)
        size = chunk or max(1, min(trials, 2_000_000 // max(1, len(pts) * pe.max_length)))
        done = 0
        while done < trials:
            t = min(size, trials - done)
            VX, VY = pe.sample_batch(rng, t, pts, pts)
            ip = np.einsum("txl,tyl->txy", VX, VY) % pe.q
            errors += ((ip == 0) != truth[None, :, :]).sum(axis=0)
            done += t
    freq = errors / trials
    a, b = np.unravel_index(int(np.argmax(freq)), freq.shape)
    eps = float(pe.target_eps)
    radius = 3 * sqrt(eps * (1 - eps) / trials)
    return ErrorReport("monte_carlo", float(freq[a, b]), float(freq.mean()), trials, radius,
                       (pts[a], pts[b]), freq.size)


def enumerate_error(pe, cap=2**16):
    """Exact per-pair errors by walking every possible hash table (tiny cases).

    Independent of :func:`pair_error`: each table is turned into an actual
    encoding and its inner products are evaluated. Returns a dict
    ``{(x, y): Fraction}``.
    """
    shapes = pe.table_shapes()
    cells = sum(shapes)
    total = pe.buckets ** cells
    if total > cap:
        raise TooLarge(f"{total} hash tables exceed the cap {cap}")
    n = pe.predicate.n
    P = pe.predicate
    wrong = {(x, y): 0 for x in range(1, n + 1) for y in range(1, n + 1)}
    for flat in product(range(pe.buckets), repeat=cells):
        tables, off = [], 0
        for s in shapes:
            tables.append(flat[off:off + s])
            off += s
        e = pe.encoding_from_tables(tables)
        for (x, y) in wrong:
            if (e.inner(x, y) == 0) != P(x, y):
                wrong[(x, y)] += 1
    return {k: Fraction(v, total) for k, v in wrong.items()}


# -- probabilistic rank --------------------------------------------------------

def prob_rank_upper(support):
    """Largest rank over the support of a finite matrix distribution.

    ``support`` is a list of ``(ZqMatrix, weight)`` over a prime modulus. Each
    matrix factors as ``U V`` of that rank, so this bounds the length of the
    induced probabilistic encoding.
    """
    best = 0
    for M, _ in support:
        if not is_prime(M.q):
            raise NotPrime(f"{M.q} is not prime")
        best = max(best, rank_mod_p(M, M.q))
    return best


def materialize(support, predicate):
    """Encodings induced by each support matrix via its rank factorization."""
    X, Y = predicate.x_domain, predicate.y_domain
    out = []
    for M, w in support:
        fr = factor_rank(M, M.q)
        U, V = fr.U, fr.V
        e = Encoding(M.q, fr.r, (lambda U: lambda x: tuple(U.row(X.index(x))))(U),
                     (lambda V: lambda y: tuple(V.column(Y.index(y))))(V),
                     "support", (M.q,), predicate)
        out.append((e, w))
    return out


def bucket_hash_support(n, c, q):
    """All matrices ``M[x, y] = [h(x) = h(y)]`` for ``h: [n] -> [c]``, uniformly weighted."""
    if c**n > 2**16:
        raise TooLarge(f"{c ** n} hash functions")
    w = Fraction(1, c**n)
    out = []
    for h in product(range(c), repeat=n):
        out.append((ZqMatrix(n, n, q, [int(h[x] == h[y]) for x in range(n) for y in range(n)]), w))
    return out


def complement_support(support):
    """``J - M`` for each ``M`` in the support."""
    return [(ZqMatrix.ones(M.rows, M.cols, M.q) - M, w) for M, w in support]


def entry_errors(support, A):
    """Worst entrywise ``Pr[M[i, j] != A[i, j]]`` over the support distribution."""
    worst = Fraction(0)
    for i in range(A.rows):
        for j in range(A.cols):
            p = sum((w for M, w in support if M[i, j] != A[i, j]), Fraction(0))
            worst = max(worst, p)
    return worst
