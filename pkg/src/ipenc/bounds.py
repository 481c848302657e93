"""Lower-bound certificates for the shortest inner product encoding length.

Every certificate records the argument that produced it and a witness that
:func:`check` can replay on its own:

* ``ExactMinRank``        -- exhaustive minimum rank over all representing matrices
* ``TriangularPigeonhole``-- a triangular sub-pattern with nonzero diagonal; bound ceil(n/k)
* ``DiagonalNonzero``     -- the special case of a diagonal sub-pattern
* ``ReductionLift``       -- a verified reduction applied to a base certificate
* ``CountingMPOLY``       -- monomial count for polynomial evaluation at prime q
"""

from dataclasses import dataclass, field
from itertools import product
from math import ceil, comb

from .errors import (BadPermutation, CapExceeded, NotDiagonalPattern, NotPrime,
                     NotTriangularPattern, TooLarge, UnverifiedReduction, Unsupported)
from .modmath import Modulus, factorize, is_prime
from .predicates import (MultilinearPoly, Predicate, ZeroPattern, binom_le,
                         builtin_reduction, cell_cap, chi, monomials,
                         reduction_from_json, zero_pattern)
from .zqlinalg import TriangularWitness, ZqMatrix, rank_mod_p, rank_rows

__all__ = [
    "Certificate", "ZeroPattern", "builtin_bound", "check", "diagonal_bound",
    "find_triangular", "lift_bound", "min_rank_oracle", "min_rank_search",
    "mpoly_counting_bound", "triangular_bound",
]

METHODS = ("ExactMinRank", "TriangularPigeonhole", "DiagonalNonzero",
           "ReductionLift", "CountingMPOLY")

DEFAULT_MAX_ASSIGNMENTS = 2**24


@dataclass(frozen=True)
class Certificate:
    predicate: object  # Predicate, or None for a bare pattern
    modulus: Modulus
    bound: int
    method: str
    witness: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        return {
            "predicate": self.predicate.to_json() if self.predicate is not None else None,
            "q": self.modulus.q,
            "factors": list(self.modulus.factors),
            "bound": self.bound,
            "method": self.method,
            "witness": self.witness,
        }

    @classmethod
    def from_json(cls, data):
        P = Predicate.from_json(data["predicate"]) if data.get("predicate") else None
        return cls(P, factorize(int(data["q"])), int(data["bound"]), data["method"],
                   dict(data.get("witness", {})))


class _PatternView:
    """Cell access on a :class:`ZeroPattern` or lazily on a predicate."""

    def __init__(self, source):
        if isinstance(source, ZeroPattern):
            self.rows, self.cols = source.rows, source.cols
            self._zero = source.is_zero
        else:
            X, Y = source.x_domain, source.y_domain
            self.rows, self.cols = X.size, Y.size
            self._zero = lambda i, j: source(X.element(i), Y.element(j))

    def is_zero(self, i, j):
        return self._zero(i, j)


def _view(z, predicate=None):
    return _PatternView(z if z is not None else predicate)


def _is_triangular(view, ro, co):
    for i in range(len(ro)):
        if view.is_zero(ro[i], co[i]):
            return False
        for j in range(i):
            if not view.is_zero(ro[i], co[j]):
                return False
    return True


def find_triangular(z):
    """Greedy triangular sub-pattern; its length is a valid rank lower bound."""
    rows, cols = [], []
    cand = set(range(z.rows))
    free_cols = set(range(z.cols))
    while cand:
        best = None
        for r in sorted(cand):
            for c in sorted(free_cols):
                if z.is_zero(r, c):
                    continue
                keep = sum(1 for r2 in cand if r2 != r and z.is_zero(r2, c))
                if best is None or keep > best[0]:
                    best = (keep, r, c)
        if best is None:
            break
        _, r, c = best
        rows.append(r)
        cols.append(c)
        cand.discard(r)
        free_cols.discard(c)
        cand = {r2 for r2 in cand if z.is_zero(r2, c)}
    return TriangularWitness(rows, cols, len(rows))


def _forest_cells(z, cells):
    """Cells on a spanning forest of the row/column graph of nonzero cells.

    Scaling rows and columns by units preserves rank, so these cells can be
    fixed to 1 without losing any rank value.
    """
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    fixed = set()
    for i, j in cells:
        a, b = find(("r", i)), find(("c", j))
        if a != b:
            parent[a] = b
            fixed.add((i, j))
    return fixed


def min_rank_search(z, p, cap=None, max_assignments=DEFAULT_MAX_ASSIGNMENTS):
    """Exact ``min rank(F)`` over Z_p for ``F`` matching ``z``; returns ``(rank, F)``.

    Free cells range over ``1..p-1`` in odometer order. The search stops as
    soon as the greedy triangular lower bound is reached. ``cap`` bounds the
    number of free (non-normalized) cells.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    cells = z.nonzero_cells()
    if not cells:
        return 0, ZqMatrix(z.rows, z.cols, p, [0] * (z.rows * z.cols))
    fixed = _forest_cells(z, cells)
    free = [c for c in cells if c not in fixed]
    if cap is not None and len(free) > cap:
        raise CapExceeded((p - 1) ** len(free), (p - 1) ** cap)
    total = (p - 1) ** len(free)
    if total > max_assignments:
        raise CapExceeded(total, max_assignments)
    lower = find_triangular(z).diag_len
    base = [[0] * z.cols for _ in range(z.rows)]
    for i, j in fixed:
        base[i][j] = 1
    best, best_rows = None, None
    for values in product(range(1, p), repeat=len(free)):
        for (i, j), v in zip(free, values):
            base[i][j] = v
        r = rank_rows(base, p)
        if best is None or r < best:
            best, best_rows = r, [row[:] for row in base]
            if best <= lower:
                break
    return best, ZqMatrix.from_rows(best_rows, p)


def min_rank_oracle(z, p, cap=None, max_assignments=DEFAULT_MAX_ASSIGNMENTS):
    """Exact minimum rank over Z_p of matrices with zero pattern ``z``."""
    return min_rank_search(z, p, cap, max_assignments)[0]


def _modulus(m):
    return m if isinstance(m, Modulus) else factorize(int(m))


def triangular_bound(z, m, row_order, col_order, predicate=None):
    """Bound ``ceil(n/k)`` from a triangular sub-pattern with nonzero diagonal."""
    m = _modulus(m)
    view = _view(z, predicate)
    w = TriangularWitness(row_order, col_order, len(row_order))
    w.validate(view.rows, view.cols)
    if not _is_triangular(view, w.row_order, w.col_order):
        raise NotTriangularPattern("pattern is not triangular under the given orders")
    n = w.diag_len
    return Certificate(predicate, m, ceil(n / m.k), "TriangularPigeonhole",
                       {"row_order": list(w.row_order), "col_order": list(w.col_order),
                        "n": n, "k": m.k})


def diagonal_bound(z, m, predicate=None):
    """Bound ``ceil(n/k)`` when each row and column has exactly one nonzero cell."""
    m = _modulus(m)
    if z is None:
        z = zero_pattern(predicate)
    if z.rows != z.cols:
        raise NotDiagonalPattern("pattern is not square")
    pairs = []
    for i in range(z.rows):
        nz = [j for j in range(z.cols) if not z.is_zero(i, j)]
        if len(nz) != 1:
            raise NotDiagonalPattern(f"row {i} has {len(nz)} nonzero cells")
        pairs.append((i, nz[0]))
    if len({j for _, j in pairs}) != z.cols:
        raise NotDiagonalPattern("nonzero cells share a column")
    n = z.rows
    return Certificate(predicate, m, ceil(n / m.k), "DiagonalNonzero",
                       {"rows": [i for i, _ in pairs], "cols": [j for _, j in pairs],
                        "n": n, "k": m.k})


def lift_bound(r, c, cap=None):
    """Carry a bound for ``r.source`` over to ``r.target``."""
    if c.predicate is not None and c.predicate != r.source:
        raise UnverifiedReduction(
            f"certificate is for {c.predicate.label()}, reduction starts at {r.source.label()}")
    try:
        ok = r.check(cap)
    except TooLarge as exc:
        raise UnverifiedReduction(f"cannot verify {r.name}: {exc}") from None
    if not ok:
        raise UnverifiedReduction(f"{r.name} fails its defining identity")
    return Certificate(r.target, c.modulus, c.bound, "ReductionLift",
                       {"reduction": r.describe(), "base": c.to_json()})


def mpoly_monomial_orders(n, d):
    """Rows ``chi(A)`` and columns ``X_A`` over monomials A, largest first.

    ``X_B(chi(A))`` is nonzero iff ``B`` is a subset of ``A``, so this order
    is triangular with nonzero diagonal.
    """
    return list(reversed(monomials(n, d)))


def mpoly_counting_bound(n, d, q):
    """Bound ``C(n, <= d)`` for MPOLY_n^{d,q} at prime ``q``."""
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    count = binom_le(n, d)
    return Certificate(Predicate("MPOLY", n, d=d, q=q), Modulus(q, (q,)), count,
                       "CountingMPOLY", {"n": n, "d": d, "q": q, "monomials": count})


def _mpoly_triangular_ok(n, d, q):
    P = Predicate("MPOLY", n, d=d, q=q)
    sets = mpoly_monomial_orders(n, d)
    xs = [tuple(chi(A, n)) for A in sets]
    ys = [MultilinearPoly.monomial(n, q, A) for A in sets]
    for i in range(len(sets)):
        if P(xs[i], ys[i]):
            return False
        for j in range(i):
            if not P(xs[i], ys[j]):
                return False
    return True


# -- builtin arguments -------------------------------------------------------

def gt_certificate(n, m):
    return triangular_bound(None, m, range(n), range(n), predicate=Predicate("GT", n))


def neq_certificate(n, m, cap=None):
    P = Predicate("NEQ", n)
    if n * n <= cell_cap(cap):
        return diagonal_bound(zero_pattern(P, cap), m, predicate=P)
    return triangular_bound(None, m, range(n), range(n), predicate=P)


def thr1_certificate(size, m):
    """THR_size^1: rows by increasing set size, each column the row's complement."""
    P = Predicate("THR", size, t=1)
    X = P.x_domain
    full = frozenset(range(1, size + 1))
    rows = list(range(X.size))
    cols = [X.index(full - X.element(i)) for i in rows]
    return triangular_bound(None, m, rows, cols, predicate=P)


def _lift_chain(cert, chain, cap=None):
    for r in chain:
        cert = lift_bound(r, cert, cap)
    return cert


def _eq_bound(n, m, cap):
    if m.is_prime:
        P = Predicate("EQ", n)
        try:
            z = zero_pattern(P, cap)
            rank, F = min_rank_search(z, m.q)
            return Certificate(P, m, rank, "ExactMinRank",
                               {"p": m.q, "matrix": F.to_json()})
        except (CapExceeded, TooLarge):
            pass
    if n >= 2:
        # rows (1, 2) against columns (2, 1)
        return triangular_bound(None, m, [0, 1], [1, 0], predicate=Predicate("EQ", n))
    return triangular_bound(None, m, [], [], predicate=Predicate("EQ", n))


def builtin_bound(P, m, cap=None):
    """Strongest built-in lower bound for ``P`` modulo ``m``."""
    m = _modulus(m)
    pid, n = P.id, P.n
    if pid == "TABLE":
        raise Unsupported("TABLE predicates have no built-in argument; use min_rank_oracle")
    if pid == "EQ":
        return _eq_bound(n, m, cap)
    if pid == "GT":
        return gt_certificate(n, m)
    if pid == "NEQ":
        return neq_certificate(n, m, cap)
    if pid == "INDEX":
        return _lift_chain(neq_certificate(n, m, cap),
                           [builtin_reduction("INDEX=>NEQ", n=n)], cap)
    if pid == "DISJ":
        return _lift_chain(neq_certificate(n, m, cap),
                           [builtin_reduction("INDEX=>NEQ", n=n),
                            builtin_reduction("DISJ=>INDEX", n=n)], cap)
    if pid == "OR_EQ":
        return _lift_chain(neq_certificate(2**n, m, cap),
                           [builtin_reduction("OR_EQ=>NEQ", n=n, q=P.q)], cap)
    if pid == "ETHR":
        t = P.t
        size = n - t + 1
        # ETHR_n^t => ETHR_{n-t+1}^1 => GT_{n-t+2}
        chain = [builtin_reduction("ETHR1=>GT", m=size)]
        if t > 1:
            chain.append(builtin_reduction("ETHR=>ETHR1", n=n, t=t))
        best = _lift_chain(gt_certificate(size + 1, m), chain, cap)
        if t <= n - 2:
            # ETHR_n^t => ETHR_{t+2}^t => NEQ_{t+2}
            chain = [builtin_reduction("ETHR=>NEQ", m=t + 2)]
            if n > t + 2:
                chain.append(builtin_reduction("ETHR=>ETHR_T2", n=n, t=t))
            other = _lift_chain(neq_certificate(t + 2, m, cap), chain, cap)
            if other.bound > best.bound:
                best = other
        return best
    if pid == "THR":
        t = P.t
        base = thr1_certificate(n - t + 1, m)
        if t == 1:
            return base
        return _lift_chain(base, [builtin_reduction("THR=>THR1", n=n, t=t)], cap)
    if pid == "MPOLY":
        if m.is_prime and m.q == P.q:
            return mpoly_counting_bound(n, P.d, P.q)
        return _lift_chain(neq_certificate(comb(n, P.d), m, cap),
                           [builtin_reduction("MPOLY=>NEQ", n=n, d=P.d, q=P.q)], cap)
    raise Unsupported(f"no built-in bound for {pid}")


# -- replay --------------------------------------------------------------------

def check(c, z=None, m=None, cap=None):
    """Independently re-derive ``c.bound`` from its witness. Never raises."""
    try:
        return _check(c, z, m, cap)
    except Exception:
        return False


def _check(c, z, m, cap):
    mod = _modulus(m) if m is not None else c.modulus
    if mod.q != c.modulus.q:
        return False
    w = c.witness
    if c.method == "TriangularPigeonhole":
        view = _view(z, c.predicate)
        ro, co = list(w["row_order"]), list(w["col_order"])
        try:
            TriangularWitness(ro, co, len(ro)).validate(view.rows, view.cols)
        except BadPermutation:
            return False
        return _is_triangular(view, ro, co) and c.bound == ceil(len(ro) / mod.k)
    if c.method == "DiagonalNonzero":
        view = _view(z, c.predicate)
        rows, cols = list(w["rows"]), list(w["cols"])
        try:
            TriangularWitness(rows, cols, len(rows)).validate(view.rows, view.cols)
        except BadPermutation:
            return False
        for a, i in enumerate(rows):
            for b, j in enumerate(cols):
                if view.is_zero(i, j) != (a != b):
                    return False
        return c.bound == ceil(len(rows) / mod.k)
    if c.method == "ExactMinRank":
        p = int(w["p"])
        if not mod.is_prime or p != mod.q:
            return False
        if z is None:
            z = zero_pattern(c.predicate, cap)
        F = ZqMatrix.from_json(w["matrix"])
        if not z.matches(F) or rank_mod_p(F, p) != c.bound:
            return False
        return min_rank_oracle(z, p) == c.bound
    if c.method == "CountingMPOLY":
        n, d, q = int(w["n"]), int(w["d"]), int(w["q"])
        if c.predicate is not None and c.predicate != Predicate("MPOLY", n, d=d, q=q):
            return False
        return (mod.is_prime and mod.q == q and c.bound == binom_le(n, d)
                and _mpoly_triangular_ok(n, d, q))
    if c.method == "ReductionLift":
        base = Certificate.from_json(w["base"])
        r = reduction_from_json(w["reduction"])
        if base.bound != c.bound or r.target != c.predicate or r.source != base.predicate:
            return False
        if not r.check(cap):
            return False
        return _check(base, None, mod, cap)
    return False
