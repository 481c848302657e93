"""Two-argument predicates over enumerable domains, and reductions between them.

Domain elements use plain Python values:

* ``range``     -- ints ``1..n``
* ``subsets``   -- ``frozenset`` of ints in ``1..n``
* ``bitstrings``-- tuples of 0/1 of length ``n`` (``x[0]`` is bit 1)
* ``vectors``   -- tuples over ``Z_q`` of length ``n``
* ``polys``     -- :class:`MultilinearPoly`

Each domain has a canonical order, and :meth:`Domain.index` / :meth:`Domain.element`
convert between elements and positions in it. Subsets are ordered by size and
then lexicographically, so the complement ordering of a threshold matrix is a
reversal.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, prod
import os

from .errors import BadParams, DomainMismatch, ModulusMismatch, TooLarge

DEFAULT_CELL_CAP = 2**20

PREDICATE_IDS = ("EQ", "GT", "NEQ", "INDEX", "DISJ", "ETHR", "THR", "MPOLY", "OR_EQ", "TABLE")


def cell_cap(cap=None):
    """Enumeration cap; ``IPE_CAP_CELLS`` overrides the default."""
    if cap is not None:
        return cap
    env = os.environ.get("IPE_CAP_CELLS")
    return int(env) if env else DEFAULT_CELL_CAP


def binom_le(n, d):
    """Number of subsets of ``[n]`` of size at most ``d``."""
    return sum(comb(n, i) for i in range(0, min(n, d) + 1))


@lru_cache(maxsize=None)
def monomials(n, d):
    """Subsets of ``[n]`` of size <= d as sorted tuples, ordered by (size, lex)."""
    return tuple(s for k in range(min(n, d) + 1) for s in combinations(range(1, n + 1), k))


def chi(S, n):
    """Characteristic vector of ``S`` as a 0/1 tuple."""
    return tuple(int(i in S) for i in range(1, n + 1))


def chi_inv(x):
    return frozenset(i + 1 for i, b in enumerate(x) if b)


def bin_vec(x, n):
    """``bin(x)``: the n-bit binary expansion of ``x - 1``, most significant first."""
    v = x - 1
    return tuple((v >> (n - 1 - i)) & 1 for i in range(n))


@dataclass(frozen=True)
class MultilinearPoly:
    """Multilinear polynomial over ``Z_q``; ``coeffs`` maps sorted index tuples to a_S."""

    n: int
    q: int
    coeffs: tuple = ()

    def __post_init__(self):
        items = dict(self.coeffs) if not isinstance(self.coeffs, dict) else self.coeffs
        norm = {}
        for S, a in dict(items).items():
            S = tuple(sorted(S))
            if len(set(S)) != len(S) or any(not 1 <= i <= self.n for i in S):
                raise ValueError(f"bad monomial {S}")
            a = (norm.get(S, 0) + a) % self.q
            if a:
                norm[S] = a
            else:
                norm.pop(S, None)
        object.__setattr__(self, "coeffs", tuple(sorted(norm.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    @property
    def degree(self):
        return max((len(S) for S, _ in self.coeffs), default=0)

    def coefficient(self, S):
        return dict(self.coeffs).get(tuple(sorted(S)), 0)

    def __call__(self, x):
        if len(x) != self.n:
            raise DomainMismatch(f"expected {self.n} variables")
        return sum(a * prod(x[i - 1] for i in S) for S, a in self.coeffs) % self.q

    def __add__(self, other):
        c = dict(self.coeffs)
        for S, a in other.coeffs:
            c[S] = c.get(S, 0) + a
        return MultilinearPoly(self.n, self.q, c)

    def boolean_product(self, other):
        """Product with ``x_i^2`` replaced by ``x_i``; agrees with the true product on 0/1 points."""
        c = {}
        for S, a in self.coeffs:
            for T, b in other.coeffs:
                U = tuple(sorted(set(S) | set(T)))
                c[U] = c.get(U, 0) + a * b
        return MultilinearPoly(self.n, self.q, c)

    @classmethod
    def constant(cls, n, q, c):
        return cls(n, q, {(): c})

    @classmethod
    def linear(cls, n, q, terms, c=0):
        """``c + sum(a * x_i for i, a in terms.items())``."""
        d = {(i,): a for i, a in terms.items()}
        d[()] = c
        return cls(n, q, d)

    @classmethod
    def monomial(cls, n, q, S):
        return cls(n, q, {tuple(S): 1})

    def to_json(self):
        return {"n": self.n, "q": self.q, "coeffs": [[list(S), a] for S, a in self.coeffs]}


def _combination_rank(S, n):
    """Lexicographic rank of the sorted k-subset ``S`` of ``[n]``."""
    k = len(S)
    rank = 0
    prev = 0
    for pos, s in enumerate(S):
        for v in range(prev + 1, s):
            rank += comb(n - v, k - pos - 1)
        prev = s
    return rank


def _combination_unrank(r, n, k):
    out = []
    v = 1
    for pos in range(k):
        while True:
            c = comb(n - v, k - pos - 1)
            if r < c:
                break
            r -= c
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class Domain:
    kind: str
    n: int
    q: int = 0
    d: int = 0

    KINDS = ("range", "subsets", "bitstrings", "vectors", "polys")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise BadParams(f"unknown domain kind {self.kind!r}")
        if self.n < 1 and self.kind == "range":
            raise BadParams("range domain needs n >= 1")

    @property
    def size(self):
        if self.kind == "range":
            return self.n
        if self.kind in ("subsets", "bitstrings"):
            return 2**self.n
        if self.kind == "vectors":
            return self.q**self.n
        return self.q ** binom_le(self.n, self.d)

    def __len__(self):
        return self.size

    def __iter__(self):
        return (self.element(i) for i in range(self.size))

    def contains(self, e):
        k, n = self.kind, self.n
        try:
            if k == "range":
                return isinstance(e, int) and 1 <= e <= n
            if k == "subsets":
                return isinstance(e, frozenset) and all(isinstance(i, int) and 1 <= i <= n for i in e)
            if k == "bitstrings":
                return isinstance(e, tuple) and len(e) == n and all(b in (0, 1) for b in e)
            if k == "vectors":
                return isinstance(e, tuple) and len(e) == n and all(0 <= v < self.q for v in e)
            return (isinstance(e, MultilinearPoly) and e.n == n and e.q == self.q
                    and e.degree <= self.d)
        except TypeError:
            return False

    def index(self, e):
        if not self.contains(e):
            raise DomainMismatch(f"{e!r} is not in {self}")
        k, n = self.kind, self.n
        if k == "range":
            return e - 1
        if k == "subsets":
            s = len(e)
            return sum(comb(n, i) for i in range(s)) + _combination_rank(tuple(sorted(e)), n)
        if k == "bitstrings":
            return int("".join(map(str, e)), 2) if n else 0
        if k == "vectors":
            return _digits_to_int(e, self.q)
        return _digits_to_int([e.coefficient(S) for S in monomials(n, self.d)], self.q)

    def element(self, i):
        if not 0 <= i < self.size:
            raise DomainMismatch(f"index {i} outside [0, {self.size})")
        k, n = self.kind, self.n
        if k == "range":
            return i + 1
        if k == "subsets":
            s = 0
            while i >= comb(n, s):
                i -= comb(n, s)
                s += 1
            return frozenset(_combination_unrank(i, n, s))
        if k == "bitstrings":
            return tuple((i >> (n - 1 - j)) & 1 for j in range(n))
        if k == "vectors":
            return _int_to_digits(i, self.q, n)
        mons = monomials(n, self.d)
        digits = _int_to_digits(i, self.q, len(mons))
        return MultilinearPoly(n, self.q, {S: a for S, a in zip(mons, digits) if a})

    def encode_element(self, e):
        """JSON-friendly form of an element."""
        if self.kind == "subsets":
            return sorted(e)
        if self.kind in ("bitstrings", "vectors"):
            return list(e)
        if self.kind == "polys":
            return e.to_json()["coeffs"]
        return e

    def decode_element(self, v):
        if self.kind == "subsets":
            return frozenset(v)
        if self.kind in ("bitstrings", "vectors"):
            return tuple(v)
        if self.kind == "polys":
            return MultilinearPoly(self.n, self.q, {tuple(S): a for S, a in v})
        return v


def _digits_to_int(digits, base):
    v = 0
    for a in digits:
        v = v * base + a
    return v


def _int_to_digits(v, base, length):
    out = [0] * length
    for j in range(length - 1, -1, -1):
        v, out[j] = divmod(v, base)
    return tuple(out)


@dataclass(frozen=True)
class Predicate:
    """One of the predicate families, with its parameters.

    For ``TABLE`` the truth table is stored as a tuple of 0/1 row tuples and
    both domains are ranges (``x in 1..rows``, ``y in 1..cols``).
    """

    id: str
    n: int = 0
    t: int = 0
    d: int = 0
    q: int = 0
    table: tuple = field(default=(), repr=False)

    def __post_init__(self):
        pid = self.id.upper().replace("-", "_")
        object.__setattr__(self, "id", pid)
        if pid not in PREDICATE_IDS:
            raise BadParams(f"unknown predicate {self.id!r}")
        if pid == "TABLE":
            tab = tuple(tuple(int(bool(b)) for b in r) for r in self.table)
            if not tab or not tab[0] or any(len(r) != len(tab[0]) for r in tab):
                raise BadParams("TABLE needs a non-empty rectangular bit matrix")
            object.__setattr__(self, "table", tab)
            return
        if self.n < 1:
            raise BadParams(f"{pid} needs n >= 1")
        if pid in ("ETHR", "THR") and not 1 <= self.t <= self.n:
            raise BadParams(f"{pid} needs 1 <= t <= n, got t={self.t}")
        if pid in ("MPOLY", "OR_EQ") and self.q < 2:
            raise BadParams(f"{pid} needs q >= 2")
        if pid == "MPOLY" and not 0 <= self.d <= self.n:
            raise BadParams("MPOLY needs 0 <= d <= n")

    @property
    def x_domain(self):
        pid, n = self.id, self.n
        if pid in ("EQ", "GT", "NEQ"):
            return Domain("range", n)
        if pid == "INDEX":
            return Domain("bitstrings", n)
        if pid in ("DISJ", "ETHR", "THR"):
            return Domain("subsets", n)
        if pid in ("MPOLY", "OR_EQ"):
            return Domain("vectors", n, self.q)
        return Domain("range", len(self.table))

    @property
    def y_domain(self):
        pid, n = self.id, self.n
        if pid in ("EQ", "GT", "NEQ", "INDEX"):
            return Domain("range", n)
        if pid in ("DISJ", "ETHR", "THR"):
            return Domain("subsets", n)
        if pid == "MPOLY":
            return Domain("polys", n, self.q, self.d)
        if pid == "OR_EQ":
            return Domain("vectors", n, self.q)
        return Domain("range", len(self.table[0]))

    def __call__(self, x, y):
        return eval_predicate(self, x, y)

    def label(self):
        if self.id == "TABLE":
            return f"TABLE[{len(self.table)}x{len(self.table[0])}]"
        extra = {"ETHR": f"^{self.t}", "THR": f"^{self.t}",
                 "MPOLY": f"^{{{self.d},{self.q}}}", "OR_EQ": f"^{self.q}"}.get(self.id, "")
        return f"{self.id}_{self.n}{extra}"

    def to_json(self):
        if self.id == "TABLE":
            return {"id": "TABLE", "rows": len(self.table), "cols": len(self.table[0]),
                    "bits": [list(r) for r in self.table]}
        out = {"id": self.id, "n": self.n}
        if self.id in ("ETHR", "THR"):
            out["t"] = self.t
        if self.id == "MPOLY":
            out["d"] = self.d
        if self.id in ("MPOLY", "OR_EQ"):
            out["q"] = self.q
        return out

    @classmethod
    def from_json(cls, data):
        pid = str(data["id"]).upper().replace("-", "_")
        if pid == "TABLE":
            bits = data["bits"]
            if bits and not isinstance(bits[0], list):
                rows = int(data["rows"])
                cols = len(bits) // rows
                bits = [bits[i * cols:(i + 1) * cols] for i in range(rows)]
            return cls("TABLE", table=bits)
        return cls(pid, n=int(data["n"]), t=int(data.get("t", 0)),
                   d=int(data.get("d", 0)), q=int(data.get("q", 0)))


def eval_predicate(P, x, y):
    """Truth value of ``P(x, y)``."""
    if not P.x_domain.contains(x) or not P.y_domain.contains(y):
        raise DomainMismatch(f"({x!r}, {y!r}) outside the domains of {P.label()}")
    pid = P.id
    if pid == "EQ":
        return x == y
    if pid == "GT":
        return x > y
    if pid == "NEQ":
        return x != y
    if pid == "INDEX":
        return x[y - 1] == 0
    if pid == "DISJ":
        return not (x & y)
    if pid == "ETHR":
        return len(x & y) == P.t
    if pid == "THR":
        return len(x & y) >= P.t
    if pid == "MPOLY":
        return y(x) == 0
    if pid == "OR_EQ":
        return any(a == b for a, b in zip(x, y))
    return bool(P.table[x - 1][y - 1])


@dataclass(frozen=True)
class ZeroPattern:
    """Cells forced to vanish (``P = 1``) in every matrix representing ``P``."""

    rows: int
    cols: int
    forced_zero: tuple

    def __post_init__(self):
        fz = tuple(tuple(bool(b) for b in r) for r in self.forced_zero)
        if len(fz) != self.rows or any(len(r) != self.cols for r in fz):
            raise ValueError("pattern shape mismatch")
        object.__setattr__(self, "forced_zero", fz)

    def is_zero(self, i, j):
        return self.forced_zero[i][j]

    def nonzero_cells(self):
        return [(i, j) for i in range(self.rows) for j in range(self.cols)
                if not self.forced_zero[i][j]]

    def matches(self, F, modulus=None):
        """True iff ``F`` vanishes exactly on the forced-zero cells (mod ``modulus``)."""
        m = modulus or F.q
        if (F.rows, F.cols) != (self.rows, self.cols):
            return False
        return all((F[i, j] % m == 0) == self.forced_zero[i][j]
                   for i in range(self.rows) for j in range(self.cols))

    def transpose(self):
        return ZeroPattern(self.cols, self.rows,
                           [[self.forced_zero[i][j] for i in range(self.rows)]
                            for j in range(self.cols)])

    def with_nonzero(self, cells):
        fz = [list(r) for r in self.forced_zero]
        for i, j in cells:
            fz[i][j] = False
        return ZeroPattern(self.rows, self.cols, fz)

    @classmethod
    def from_table(cls, bits):
        bits = [list(r) for r in bits]
        return cls(len(bits), len(bits[0]) if bits else 0, bits)


def zero_pattern(P, cap=None):
    """The forced zero/nonzero layout of any matrix representing ``P``."""
    X, Y = P.x_domain, P.y_domain
    cells = X.size * Y.size
    if cells > cell_cap(cap):
        raise TooLarge(f"{P.label()} has {cells} cells, cap is {cell_cap(cap)}")
    xs, ys = list(X), list(Y)
    return ZeroPattern(len(xs), len(ys), [[eval_predicate(P, x, y) for y in ys] for x in xs])


@dataclass(frozen=True)
class Reduction:
    """Maps turning an instance of ``source`` into one of ``target``.

    ``target(f(x), g(y)) == source(x, y)``; when ``swapped`` the roles of the
    target's arguments are exchanged: ``target(g(y), f(x)) == source(x, y)``.
    An encoding of ``target`` therefore yields one of ``source``, and a lower
    bound for ``source`` carries over to ``target``.
    """

    name: str
    source: Predicate
    target: Predicate
    f: object = field(compare=False, repr=False)
    g: object = field(compare=False, repr=False)
    swapped: bool = False
    params: tuple = ()

    def holds(self, x, y):
        if self.swapped:
            return eval_predicate(self.target, self.g(y), self.f(x)) == eval_predicate(self.source, x, y)
        return eval_predicate(self.target, self.f(x), self.g(y)) == eval_predicate(self.source, x, y)

    def check(self, cap=None):
        """Exhaustively confirm the reduction identity on every input pair."""
        X, Y = self.source.x_domain, self.source.y_domain
        if X.size * Y.size > cell_cap(cap):
            raise TooLarge(f"{X.size * Y.size} pairs exceed the cap")
        ys = list(Y)
        fx = [(x, self.f(x)) for x in X]
        gy = [(y, self.g(y)) for y in ys]
        S, T = self.source, self.target
        for x, a in fx:
            for y, b in gy:
                got = eval_predicate(T, b, a) if self.swapped else eval_predicate(T, a, b)
                if got != eval_predicate(S, x, y):
                    return False
        return True

    def describe(self):
        return {"name": self.name, "params": dict(self.params)}


def identity_reduction(P):
    return Reduction("ID", P, P, lambda x: x, lambda y: y, params=(("predicate", P.to_json()),))


def thr_polynomial(T, n, t, q):
    """``prod_{j=t..n} (sum_{i in T} x_i - j)`` as a multilinear polynomial on 0/1 inputs."""
    p = MultilinearPoly.constant(n, q, 1)
    for j in range(t, n + 1):
        p = p.boolean_product(MultilinearPoly.linear(n, q, {i: 1 for i in T}, -j))
    return p


def or_eq_polynomial(y, q):
    """``prod_i (x_i - y_i)`` expanded over the monomials."""
    n = len(y)
    p = MultilinearPoly.constant(n, q, 1)
    for i, yi in enumerate(y, start=1):
        p = p.boolean_product(MultilinearPoly.linear(n, q, {i: 1}, -yi))
    return p


def _norm_name(name):
    return name.upper().replace("⇒", "=>").replace(" ", "").replace("-", "_")


def builtin_reduction(name, **params):
    """Construct one of the named reductions ``TARGET=>SOURCE``.

    ========================  =========================  ==============
    name                      parameters                 source (P1)
    ========================  =========================  ==============
    ``DISJ=>INDEX``           n                          INDEX_n
    ``INDEX=>NEQ``            n                          NEQ_n
    ``INDEX=>GT``             n                          GT_n
    ``INDEX=>ANY``            predicate                  that predicate
    ``ETHR=>ETHR1``           n, t                       ETHR_{n-t+1}^1
    ``ETHR1=>GT``             m                          GT_{m+1}
    ``ETHR=>ETHR_T2``         n, t                       ETHR_{t+2}^t
    ``ETHR=>NEQ``             m                          NEQ_m
    ``MPOLY=>THR``            n, t, q                    THR_n^t
    ``MPOLY=>OR_EQ``          n, q                       OR_EQ_n^q
    ``MPOLY=>NEQ``            n, d, q                    NEQ_{C(n,d)}
    ``OR_EQ=>NEQ``            n, q                       NEQ_{2^n}
    ``THR=>THR1``             n, t                       THR_{n-t+1}^1
    ========================  =========================  ==============
    """
    key = _norm_name(name)
    key = {"TABLE=>ANY": "INDEX=>ANY", "INDEX=>TABLE": "INDEX=>ANY"}.get(key, key)
    try:
        build = _BUILDERS[key]
    except KeyError:
        raise BadParams(f"unknown reduction {name!r}") from None
    try:
        return build(**params)
    except TypeError as exc:
        raise BadParams(f"{key}: {exc}") from None


def _need(cond, msg):
    if not cond:
        raise BadParams(msg)


def _r_disj_index(n):
    return Reduction("DISJ=>INDEX", Predicate("INDEX", n), Predicate("DISJ", n),
                     chi_inv, lambda i: frozenset({i}), params=(("n", n),))


def _r_index_neq(n):
    return Reduction("INDEX=>NEQ", Predicate("NEQ", n), Predicate("INDEX", n),
                     lambda i: chi({i}, n), lambda j: j, params=(("n", n),))


def _r_index_gt(n):
    return Reduction("INDEX=>GT", Predicate("GT", n), Predicate("INDEX", n),
                     lambda x: x, lambda y: chi(range(1, y + 1), n),
                     swapped=True, params=(("n", n),))


def _r_index_any(predicate):
    P = predicate if isinstance(predicate, Predicate) else Predicate.from_json(predicate)
    X, Y = P.x_domain, P.y_domain
    ys, xs = list(Y), list(X)
    if Y.size <= X.size:
        # data string is the complemented row of the truth table
        return Reduction("INDEX=>ANY", P, Predicate("INDEX", Y.size),
                         lambda x: tuple(1 - int(eval_predicate(P, x, y)) for y in ys),
                         lambda y: Y.index(y) + 1, params=(("predicate", P.to_json()),))
    return Reduction("INDEX=>ANY", P, Predicate("INDEX", X.size),
                     lambda x: X.index(x) + 1,
                     lambda y: tuple(1 - int(eval_predicate(P, x, y)) for x in xs),
                     swapped=True, params=(("predicate", P.to_json()),))


def _r_ethr_ethr1(n, t):
    _need(1 <= t <= n, "need 1 <= t <= n")
    pad = frozenset(range(n - t + 2, n + 1))
    lift = lambda S: S | pad  # noqa: E731
    return Reduction("ETHR=>ETHR1", Predicate("ETHR", n - t + 1, t=1), Predicate("ETHR", n, t=t),
                     lift, lift, params=(("n", n), ("t", t)))


def _r_ethr1_gt(m):
    _need(m >= 1, "need m >= 1")
    f = lambda x: frozenset() if x == 1 else frozenset(range(1, x))  # noqa: E731
    g = lambda y: frozenset() if y == m + 1 else frozenset({y})  # noqa: E731
    return Reduction("ETHR1=>GT", Predicate("GT", m + 1), Predicate("ETHR", m, t=1),
                     f, g, params=(("m", m),))


def _r_ethr_ethr_t2(n, t):
    _need(1 <= t and t + 2 <= n, "need 1 <= t <= n - 2")
    same = lambda S: S  # noqa: E731
    return Reduction("ETHR=>ETHR_T2", Predicate("ETHR", t + 2, t=t), Predicate("ETHR", n, t=t),
                     same, same, params=(("n", n), ("t", t)))


def _r_ethr_neq(m):
    _need(m >= 3, "need m >= 3 so that t = m - 2 >= 1")
    full = frozenset(range(1, m + 1))
    f = lambda x: full - {x}  # noqa: E731
    return Reduction("ETHR=>NEQ", Predicate("NEQ", m), Predicate("ETHR", m, t=m - 2),
                     f, f, params=(("m", m),))


def _r_mpoly_thr(n, t, q):
    _need(1 <= t <= n, "need 1 <= t <= n")
    # the threshold polynomial must not vanish below t
    _need(all(prod(s - j for j in range(t, n + 1)) % q for s in range(t)),
          f"prod(s - j) vanishes mod {q} for some s < t; need prime factors of q above n")
    return Reduction("MPOLY=>THR", Predicate("THR", n, t=t),
                     Predicate("MPOLY", n, d=n - t + 1, q=q),
                     lambda S: chi(S, n), lambda T: thr_polynomial(T, n, t, q),
                     params=(("n", n), ("t", t), ("q", q)))


def _r_mpoly_oreq(n, q):
    return Reduction("MPOLY=>OR_EQ", Predicate("OR_EQ", n, q=q), Predicate("MPOLY", n, d=n, q=q),
                     lambda x: x, lambda y: or_eq_polynomial(y, q),
                     params=(("n", n), ("q", q)))


def _r_mpoly_neq(n, d, q):
    _need(0 <= d <= n, "need 0 <= d <= n")
    subsets = list(combinations(range(1, n + 1), d))
    return Reduction("MPOLY=>NEQ", Predicate("NEQ", len(subsets)), Predicate("MPOLY", n, d=d, q=q),
                     lambda x: chi(subsets[x - 1], n),
                     lambda y: MultilinearPoly.monomial(n, q, subsets[y - 1]),
                     params=(("n", n), ("d", d), ("q", q)))


def _r_oreq_neq(n, q):
    flip = lambda y: tuple(1 - b for b in bin_vec(y, n))  # noqa: E731
    return Reduction("OR_EQ=>NEQ", Predicate("NEQ", 2**n), Predicate("OR_EQ", n, q=q),
                     lambda x: bin_vec(x, n), flip, params=(("n", n), ("q", q)))


def _r_thr_thr1(n, t):
    _need(1 <= t <= n, "need 1 <= t <= n")
    pad = frozenset(range(n - t + 2, n + 1))
    lift = lambda S: S | pad  # noqa: E731
    return Reduction("THR=>THR1", Predicate("THR", n - t + 1, t=1), Predicate("THR", n, t=t),
                     lift, lift, params=(("n", n), ("t", t)))


_BUILDERS = {
    "DISJ=>INDEX": _r_disj_index,
    "INDEX=>NEQ": _r_index_neq,
    "INDEX=>GT": _r_index_gt,
    "INDEX=>ANY": _r_index_any,
    "ETHR=>ETHR1": _r_ethr_ethr1,
    "ETHR1=>GT": _r_ethr1_gt,
    "ETHR=>ETHR_T2": _r_ethr_ethr_t2,
    "ETHR=>NEQ": _r_ethr_neq,
    "MPOLY=>THR": _r_mpoly_thr,
    "MPOLY=>OR_EQ": _r_mpoly_oreq,
    "MPOLY=>NEQ": _r_mpoly_neq,
    "OR_EQ=>NEQ": _r_oreq_neq,
    "THR=>THR1": _r_thr_thr1,
}

BUILTIN_REDUCTIONS = tuple(_BUILDERS)


def reduction_from_json(data):
    if data["name"] == "ID":
        return identity_reduction(Predicate.from_json(data["params"]["predicate"]))
    return builtin_reduction(data["name"], **data["params"])


def apply_reduction(r, e):
    """Turn an encoding of ``r.target`` into an encoding of ``r.source``."""
    from .encoders import Encoding

    if r.target.q and r.target.q != e.q:
        raise ModulusMismatch(f"{r.target.label()} lives over Z_{r.target.q}, encoding over Z_{e.q}")
    if r.swapped:
        ex, ey = (lambda x: e.encode_y(r.f(x))), (lambda y: e.encode_x(r.g(y)))
    else:
        ex, ey = (lambda x: e.encode_x(r.f(x))), (lambda y: e.encode_y(r.g(y)))
    return Encoding(q=e.q, length=e.length, encode_x=ex, encode_y=ey,
                    provenance=f"{e.provenance}|{r.name}", factors=e.factors,
                    predicate=r.source)
