"""Dense matrices over Z_q with exact rank and rank factorization over Z_p.

Rank is only defined for a prime modulus. Composite moduli are handled by
projecting onto each prime factor (:func:`residue_matrix`) and by the
diagonal pigeonhole step (:func:`pigeonhole_factor`).
"""

from dataclasses import dataclass
from math import ceil

from .errors import BadPermutation, NotAFactor, NotPrime, NotTriangular
from .modmath import is_prime


@dataclass(frozen=True)
class ZqMatrix:
    rows: int
    cols: int
    q: int
    entries: tuple  # row-major, each in [0, q)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.rows < 0 or self.cols < 0:
            raise ValueError("dimensions must be non-negative")
        if self.q < 2:
            raise ValueError("modulus must be >= 2")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for v in self.entries:
            if not 0 <= v < self.q:
                raise ValueError(f"entry {v} not reduced modulo {self.q}")

    @classmethod
    def from_rows(cls, rows, q):
        """Build from nested lists, reducing every entry modulo ``q``."""
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, q, [v % q for r in rows for v in r])

    @classmethod
    def identity(cls, n, q):
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], q)

    @classmethod
    def ones(cls, rows, cols, q):
        return cls(rows, cols, q, [1 % q] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j):
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def transpose(self):
        return ZqMatrix(self.cols, self.rows, self.q,
                        [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def permute(self, row_order, col_order):
        return ZqMatrix.from_rows(
            [[self[i, j] for j in col_order] for i in row_order], self.q
        )

    def __matmul__(self, other):
        if self.cols != other.rows or self.q != other.q:
            raise ValueError("incompatible matrices")
        q = self.q
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(r[k] * other[k, j] for k in range(self.cols)) % q
                       for j in range(other.cols))
        return ZqMatrix(self.rows, other.cols, q, out)

    def __sub__(self, other):
        if (self.rows, self.cols, self.q) != (other.rows, other.cols, other.q):
            raise ValueError("incompatible matrices")
        return ZqMatrix(self.rows, self.cols, self.q,
                        [(a - b) % self.q for a, b in zip(self.entries, other.entries)])

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols, "q": self.q,
                "entries": list(self.entries)}

    @classmethod
    def from_json(cls, data):
        q = int(data["q"])
        return cls(int(data["rows"]), int(data["cols"]), q,
                   [int(v) % q for v in data["entries"]])


@dataclass(frozen=True)
class RankFactorization:
    U: ZqMatrix
    V: ZqMatrix
    r: int
    p: int


@dataclass(frozen=True)
class TriangularWitness:
    """Row and column index sequences under which a matrix is triangular.

    Position ``i`` on the diagonal is cell ``(row_order[i], col_order[i])``;
    every cell ``(row_order[i], col_order[j])`` with ``i > j`` must vanish.
    """

    row_order: tuple
    col_order: tuple
    diag_len: int

    def __post_init__(self):
        object.__setattr__(self, "row_order", tuple(self.row_order))
        object.__setattr__(self, "col_order", tuple(self.col_order))

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), tuple(range(n)), n)

    def validate(self, rows, cols):
        for name, order, bound in (("row", self.row_order, rows),
                                   ("col", self.col_order, cols)):
            if len(order) != self.diag_len:
                raise BadPermutation(f"{name} order has length {len(order)}, "
                                     f"expected {self.diag_len}")
            if len(set(order)) != len(order):
                raise BadPermutation(f"{name} order repeats an index")
            if any(not 0 <= i < bound for i in order):
                raise BadPermutation(f"{name} order has an index outside [0, {bound})")


def _require_prime(p):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


def _rref(rows, p):
    """Reduced row echelon form over Z_p; returns (rows, pivot columns).

    Pivot search walks columns left to right and takes the lowest-index
    remaining row with a nonzero entry.
    """
    a = [[v % p for v in r] for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    top = 0
    for c in range(ncols):
        if top == nrows:
            break
        piv = next((i for i in range(top, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[top], a[piv] = a[piv], a[top]
        inv = pow(a[top][c], -1, p)
        a[top] = [v * inv % p for v in a[top]]
        for i in range(nrows):
            if i != top and a[i][c]:
                f = a[i][c]
                ai, at = a[i], a[top]
                a[i] = [(x - f * y) % p for x, y in zip(ai, at)]
        pivots.append(c)
        top += 1
    return a, pivots


def rank_rows(rows, p):
    """Rank over Z_p of a list of integer rows (no primality check)."""
    a = [[v % p for v in r] for r in rows]
    ncols = len(a[0]) if a else 0
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        pr = [v * inv % p for v in a[rank]]
        a[rank] = pr
        for i in range(rank + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], pr)]
        rank += 1
        if rank == len(a):
            break
    return rank


def rank_mod_p(F, p):
    """Exact rank of ``F`` over the field Z_p."""
    _require_prime(p)
    return rank_rows(F.to_rows(), p)


def factor_rank(F, p):
    """Canonical factorization ``F = U V`` over Z_p with inner dimension rank(F).

    ``U`` holds the pivot columns of ``F`` and ``V`` the nonzero rows of the
    reduced row echelon form.
    """
    _require_prime(p)
    rows = [[v % p for v in r] for r in F.to_rows()]
    reduced, pivots = _rref(rows, p)
    r = len(pivots)
    U = ZqMatrix(F.rows, r, p, [rows[i][c] for i in range(F.rows) for c in pivots])
    V = ZqMatrix(r, F.cols, p, [v for row in reduced[:r] for v in row])
    return RankFactorization(U, V, r, p)


def residue_matrix(F, p):
    """Entrywise reduction of ``F`` modulo a prime factor ``p`` of its modulus."""
    if p < 2 or F.q % p:
        raise NotAFactor(f"{p} does not divide {F.q}")
    return ZqMatrix(F.rows, F.cols, p, [v % p for v in F.entries])


def check_triangular(F, w):
    """True iff ``F`` is zero below and nonzero on the diagonal under ``w``."""
    w.validate(F.rows, F.cols)
    ro, co = w.row_order, w.col_order
    for i in range(w.diag_len):
        if F[ro[i], co[i]] % F.q == 0:
            return False
        for j in range(i):
            if F[ro[i], co[j]] % F.q:
                return False
    return True


def pigeonhole_factor(F, w, m):
    """Pick the prime factor of ``m`` keeping the most diagonal entries nonzero.

    Returns ``(p, positions)`` where ``positions`` are diagonal positions
    (indices into the witness orders) whose entry is nonzero mod ``p``.
    At least ``ceil(n / k)`` positions always survive.
    """
    if F.q != m.q:
        raise ValueError(f"matrix modulus {F.q} differs from {m.q}")
    if not check_triangular(F, w):
        raise NotTriangular("matrix is not triangular under the witness")
    diag = [F[w.row_order[i], w.col_order[i]] for i in range(w.diag_len)]
    best_p, best = None, []
    for p in m.factors:
        keep = [i for i, v in enumerate(diag) if v % p]
        if len(keep) > len(best) or best_p is None:
            best_p, best = p, keep
    assert len(best) >= ceil(w.diag_len / m.k)
    return best_p, best
