"""Acceptance criteria, one test each.

Every test prints a single ``CRITERION n: PASS|FAIL - detail`` line; the
lines are repeated in the terminal summary. Run directly with
``python3 tests/test_acceptance.py`` to get only those lines.
"""

import contextlib
import io
import random
import time
from fractions import Fraction
from math import ceil

import numpy as np
import pytest

from ipenc.bounds import builtin_bound, check, min_rank_oracle, triangular_bound
from ipenc.cli import main as cli_main
from ipenc.encoders import (build_encoding, encode_disj, encode_eq_large_q, encode_eq_mod2,
                            encode_ethr, encode_from_matrix, encode_index, encode_mpoly,
                            encode_oreq, encode_thr, verify)
from ipenc.modmath import Modulus, factorize
from ipenc.predicates import Predicate, apply_reduction, binom_le, builtin_reduction, zero_pattern
from ipenc.randomized import (enumerate_error, estimate_error, pair_error, rand_encode_eq,
                              rand_encode_gt, rand_encode_neq)
from ipenc.zqlinalg import TriangularWitness, ZqMatrix, pigeonhole_factor, rank_mod_p

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = {}

FIRST_PRIMES = [2, 3, 5, 7]


def _grid():
    """(label, predicate, modulus, encoding, tight) for the exhaustive grid."""
    rows = []
    f = factorize
    for n in range(1, 9):
        rows.append(("EQ q=2", Predicate("EQ", n), f(2), encode_eq_mod2(n), False))
        rows.append(("EQ q=11", Predicate("EQ", n), f(11), encode_eq_large_q(n, 11), False))
        rows.append(("GT q=11", Predicate("GT", n), f(11), build_encoding(Predicate("GT", n), f(11)), True))
    for n in range(1, 5):
        m = Modulus.from_primes(FIRST_PRIMES[:n])
        rows.append((f"GT k=n q={m.q}", Predicate("GT", n), m, build_encoding(Predicate("GT", n), m), True))
    idx6 = encode_index(6, f(30))
    gt6 = apply_reduction(builtin_reduction("INDEX=>GT", n=6), idx6)
    rows.append(("GT via INDEX q=30", Predicate("GT", 6), f(30), gt6, True))
    rows.append(("INDEX q=30", Predicate("INDEX", 6), f(30), idx6, True))
    for n in range(1, 9):
        m = f(30) if n >= 3 else f(11)
        e = apply_reduction(builtin_reduction("INDEX=>NEQ", n=n), encode_index(n, m))
        rows.append((f"NEQ via INDEX q={m.q}", Predicate("NEQ", n), m, e, True))
    for k in (1, 2):
        m, e = encode_disj(4, k)
        rows.append((f"DISJ k={k} q={m.q}", Predicate("DISJ", 4), m, e, True))
    for n in range(1, 6):
        for t in range(1, n + 1):
            for force in (False, True):
                rows.append((f"ETHR force={force}", Predicate("ETHR", n, t=t), f(7),
                             encode_ethr(n, t, 7, force_general=force), False))
    for d in range(0, 3):
        rows.append(("MPOLY q=3", Predicate("MPOLY", 2, d=d, q=3), f(3), encode_mpoly(2, d, 3), False))
    for t in range(1, 5):
        rows.append(("THR q=5", Predicate("THR", 4, t=t), f(5), encode_thr(4, t, 5), False))
    for n in (1, 2):
        for q in (3, 5):
            rows.append((f"OR_EQ q={q}", Predicate("OR_EQ", n, q=q), f(q), encode_oreq(n, q), True))
    return rows


def criterion_1():
    rows = _grid()
    pairs, bad = 0, []
    for label, P, m, e, _ in rows:
        rep = verify(P, e)
        pairs += rep.checked_pairs
        if not rep.ok:
            bad.append(f"{label} {P.label()}")
    lengths = {(r[0], r[1].label()): r[3].length for r in rows}
    expect = {("INDEX q=30", "INDEX_6"): 2, ("DISJ k=1 q=5", "DISJ_4"): 4,
              ("DISJ k=2 q=305", "DISJ_4"): 2}
    expect.update({("THR q=5", f"THR_4^{t}"): binom_le(4, 4 - t + 1) for t in range(1, 5)})
    wrong = [k for k, v in expect.items() if lengths[k] != v]
    assert not bad, f"mismatches in {bad}"
    assert not wrong, f"length contract broken for {wrong}"
    return f"{len(rows)} encodings, {pairs} pairs, 0 mismatches"


def criterion_2():
    cases = [("GT", n, p) for n in range(1, 5) for p in (2, 3, 5)]
    cases += [("NEQ", n, p) for n in range(1, 5) for p in (2, 3)]
    cases += [("INDEX", n, 2) for n in range(1, 4)]
    slowest = 0.0
    for pid, n, p in cases:
        t0 = time.perf_counter()
        r = min_rank_oracle(zero_pattern(Predicate(pid, n)), p)
        slowest = max(slowest, time.perf_counter() - t0)
        assert r == n, f"{pid}_{n} over Z_{p}: oracle {r}, expected {n}"
    assert slowest < 60
    return f"{len(cases)} instances equal n, slowest {slowest:.2f}s"


def _random_representing(P, p, rnd):
    z = zero_pattern(P)
    return ZqMatrix(z.rows, z.cols, p, [0 if z.is_zero(i, j) else rnd.randrange(1, p)
                                        for i in range(z.rows) for j in range(z.cols)])


def criterion_3():
    J = ZqMatrix.from_rows([[int(i != j) for j in range(3)] for i in range(3)], 2)
    e = encode_from_matrix(Predicate("EQ", 3), J, 2)
    assert e.length == 2 and verify(Predicate("EQ", 3), e).ok
    rnd = random.Random(3)
    count = 0
    for pid in ("GT", "NEQ"):
        P = Predicate(pid, 4)
        for p in (2, 3, 5):
            for _ in range(200):
                F = _random_representing(P, p, rnd)
                e = encode_from_matrix(P, F, p)
                assert e.length == rank_mod_p(F, p), "length differs from rank"
                assert verify(P, e).ok, f"{pid}_4 over Z_{p} failed"
                count += 1
    return f"EQ_3 from J-I has length 2; {count} random GT_4/NEQ_4 matrices give length = rank"


def criterion_4():
    P = Predicate("GT", 6)
    z = zero_pattern(P)
    rnd = random.Random(4)
    out = []
    for q in (6, 30):
        m = factorize(q)
        c = triangular_bound(z, m, range(6), range(6), predicate=P)
        need = ceil(6 / m.k)
        assert c.bound == need and check(c)
        w = TriangularWitness.identity(6)
        worst = 6
        for _ in range(100):
            F = ZqMatrix(6, 6, q, [0 if z.is_zero(i, j) else rnd.randrange(1, q)
                                   for i in range(6) for j in range(6)])
            _, pos = pigeonhole_factor(F, w, m)
            worst = min(worst, len(pos))
        assert worst >= need
        out.append(f"q={q}: bound {c.bound}, fewest survivors {worst}")
    return "; ".join(out)


def criterion_5():
    rows = _grid()
    violations, not_tight = [], []
    for label, P, m, e, tight in rows:
        c = builtin_bound(P, m)
        if not check(c) or c.bound > e.length:
            violations.append(f"{label} {P.label()} ({c.bound} > {e.length})")
        if tight and c.bound != e.length:
            not_tight.append(f"{label} {P.label()} ({c.bound} vs {e.length})")
    assert not violations, f"soundness violations: {violations}"
    assert not not_tight, f"expected equality: {not_tight}"
    return f"{len(rows)} (encoding, certificate) pairs sound, {sum(r[4] for r in rows)} tight"


def criterion_6():
    eq = rand_encode_eq(1024, 7, Fraction(1, 8))
    rep = estimate_error(eq.predicate, eq, mode="exact")
    assert eq.max_length == 9 and rep.worst_pair_error == Fraction(1, 8)
    neq = rand_encode_neq(1024, 7, Fraction(1, 8))
    rep_n = estimate_error(neq.predicate, neq, mode="exact")
    assert neq.max_length == 8 and rep_n.worst_pair_error == Fraction(1, 8)
    for seed in range(1000):
        for pe, want_zero in ((eq, True), (neq, False)):
            e = pe.sample(seed)
            assert all((e.inner(x, x) == 0) == want_zero for x in range(1, 1025)), seed
    gt = rand_encode_gt(16, 11, Fraction(1, 4))
    assert gt.max_length == 65
    mc = estimate_error(gt.predicate, gt, mode="monte_carlo", trials=100_000, seed=6)
    assert mc.within(Fraction(1, 4)), f"{mc.worst_pair_error} > 0.25 + {mc.radius}"
    small = rand_encode_gt(4, 11, buckets=2)
    full = enumerate_error(small)
    assert small.bits == 2
    assert all(v == pair_error(small, x, y) and v <= Fraction(2, 2) for (x, y), v in full.items())
    return (f"EQ/NEQ length 9/8 worst 1/8, diagonal exact over 1000 seeds; GT length 65 "
            f"MC worst {mc.worst_pair_error:.4f} (radius {mc.radius:.4f}); "
            f"m=2,c=2 enumeration max {max(full.values())}")


def criterion_7():
    rng = np.random.default_rng(7)
    checked = 0
    for q in (6, 30, 105):
        m = factorize(q)
        for _ in range(1000):
            L = int(rng.integers(1, 9))
            # bias towards zero divisors so partial vanishing is common
            base = rng.choice(list(m.factors) + [1], size=(2, L))
            vx, vy = (base * rng.integers(0, q, size=(2, L))) % q
            ip = int(vx @ vy)
            assert (ip % q == 0) == all(ip % p == 0 for p in m.factors)
            checked += 1
    return f"{checked} vector pairs over q in (6, 30, 105), 0 violations"


def _table_rows(text):
    rows = []
    for line in text.splitlines()[2:]:
        cells = [c.strip() for c in line.strip().strip("|").split("|")]
        rows.append(dict(zip(["pred", "setting", "q", "upper", "lower", "fu", "fl", "status", "notes"],
                             cells)))
    return rows


def criterion_8(tmp_path):
    out = tmp_path / "table.md"
    with contextlib.redirect_stdout(io.StringIO()):
        code = cli_main(["table", "--max-n", "6", "--out", str(out)])
    rows = _table_rows(out.read_text())
    assert code == 0, "a construction or certificate in the table failed its own check"
    eq2 = next(r for r in rows if r["pred"] == "EQ_6" and r["q"] == "2")
    assert eq2["status"] == "sharper" and "exceeds" in eq2["notes"], "EQ q=2 row not annotated"
    ok = {"tight", "match", "within", "sharper", "cited"}
    bad = [f"{r['pred']} q={r['q']} upper {r['upper']} vs {r['fu']} ({r['status']})"
           for r in rows if r["status"] not in ok]
    assert not bad, "cells off the formulas: " + "; ".join(bad)
    return f"{len(rows)} rows consistent, EQ_6 at q=2 annotated sharper"


CRITERIA = [
    (1, "exhaustive correctness", criterion_1),
    (2, "exact DI via oracle", criterion_2),
    (3, "matrix to encoding", criterion_3),
    (4, "triangular pigeonhole pipeline", criterion_4),
    (5, "soundness sweep", criterion_5),
    (6, "randomized suite", criterion_6),
    (7, "CRT property", criterion_7),
    (8, "summary table", criterion_8),
]


def _record(num, name, passed, detail):
    line = f"CRITERION {num} ({name}): {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[num] = line
    print(line)


@pytest.mark.parametrize("num, name, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, tmp_path):
    try:
        detail = fn(tmp_path) if num == 8 else fn()
    except AssertionError as exc:
        _record(num, name, False, str(exc).splitlines()[0] if str(exc) else "assertion failed")
        raise
    _record(num, name, True, detail)


if __name__ == "__main__":
    import pathlib
    import tempfile

    for num, name, fn in CRITERIA:
        try:
            with tempfile.TemporaryDirectory() as d:
                detail = fn(pathlib.Path(d)) if num == 8 else fn()
            _record(num, name, True, detail)
        except AssertionError as exc:
            _record(num, name, False, str(exc).splitlines()[0] if str(exc) else "assertion failed")
