"""Desk-scale reproduction of the summary table of upper and lower bounds.

For each predicate family and each modulus setting (a prime, and a product
of two primes) the best verified construction supplies the upper value and
the built-in certificate supplies the lower value. Both are compared with
the closed-form bounds instantiated at the tested size.
"""

from dataclasses import dataclass, field
from math import ceil, comb

from .bounds import builtin_bound, check
from .encoders import build_encoding, encode_disj, encode_eq_mod2, encode_oreq, verify
from .modmath import Modulus, factorize, is_prime
from .predicates import Predicate, binom_le


@dataclass
class TableRow:
    predicate: Predicate
    setting: str  # "prime" or "composite"
    modulus: Modulus
    upper: int
    lower: int
    formula_upper: str
    formula_lower: str
    formula_upper_value: object = None  # int, or None when only asymptotic/cited
    formula_lower_value: object = None
    status: str = ""
    notes: list = field(default_factory=list)
    verified: bool = True
    certified: bool = True

    def to_json(self):
        return {"predicate": self.predicate.label(), "setting": self.setting,
                "q": self.modulus.q, "k": self.modulus.k, "upper": self.upper,
                "lower": self.lower, "formula_upper": self.formula_upper,
                "formula_lower": self.formula_lower, "status": self.status,
                "verified": self.verified, "certified": self.certified,
                "notes": list(self.notes)}


def _next_prime(lo):
    p = max(2, lo)
    while not is_prime(p):
        p += 1
    return p


def _two_primes_from(lo):
    p1 = _next_prime(lo)
    p2 = _next_prime(p1 + 1)
    return Modulus.from_primes([p1, p2])


def _status(row):
    pu, pl = row.formula_upper_value, row.formula_lower_value
    if row.lower > row.upper:
        return "UNSOUND"
    if pu is None or pl is None:
        return "cited"
    if row.upper == pu and row.lower == pl:
        return "tight" if pu == pl else "match"
    if row.lower > pl and row.upper <= pu:
        return "sharper"
    if row.upper <= pu and row.lower >= pl:
        return "within"
    return "deviates"


def _row(P, setting, m, e, form_u, form_l, pu, pl, notes=()):
    cert = builtin_bound(P, m)
    row = TableRow(P, setting, m, e.length, cert.bound, form_u, form_l, pu, pl,
                   notes=list(notes))
    row.verified = verify(P, e).ok
    row.certified = check(cert)
    row.status = _status(row)
    return row


def table_rows(max_n):
    """Rows of the reproduction at size ``n = max_n`` (smaller where domains explode)."""
    N = max_n
    if N < 2:
        raise ValueError("max_n must be >= 2")
    prime = Modulus.from_primes([_next_prime(N + 2)])
    comp = _two_primes_from(N + 2)
    k = comp.k
    rows = []

    # equality at q = 2, and at a composite q >= n
    P = Predicate("EQ", N)
    r = _row(P, "prime", factorize(2), encode_eq_mod2(N), "n (q=2)", "n-1 (q=2)", N, N - 1)
    if r.lower > N - 1:
        r.notes.append(f"exact minimum rank {r.lower} exceeds the n-1 bound (J-I is invertible mod 2 for even n)")
    rows.append(r)
    rows.append(_row(P, "composite", comp, build_encoding(P, comp),
                     "2^O~((log n)^(1/k))", "Omega(log n)", None, None,
                     ["cited bounds; length-2 (1,x)/(y,-1) construction since q >= n"]))

    for pid in ("GT", "INDEX", "NEQ"):
        P = Predicate(pid, N)
        rows.append(_row(P, "prime", prime, build_encoding(P, prime), "n", "n", N, N))
        rows.append(_row(P, "composite", comp, build_encoding(P, comp),
                         "n/k", "n/k", ceil(N / k), ceil(N / k)))

    P = Predicate("DISJ", N)
    m1, e1 = encode_disj(N, 1)
    rows.append(_row(P, "prime", m1, e1, "n", "n", N, N, [f"q = {m1.q} (least prime > n)"]))
    m2, e2 = encode_disj(N, 2)
    rows.append(_row(P, "composite", m2, e2, "n/k", "n/k", ceil(N / 2), ceil(N / 2),
                     [f"q = {m2.q} = {' * '.join(map(str, m2.factors))} from the prime tower"]))

    t = max(1, N // 2)
    P = Predicate("ETHR", N, t=t)
    for setting, m in (("prime", prime), ("composite", comp)):
        kk = m.k
        r = _row(P, setting, m, build_encoding(P, m), "n+1",
                 "n/2" if kk == 1 else "n/2k", N + 1, ceil(N / (2 * kk)))
        if N >= 3 and t <= N - 2:
            r.notes.append(f"lower = max(n-t+2, t+2)/k = {ceil(max(N - t + 2, t + 2) / kk)}")
        rows.append(r)

    nm = min(N, 3)
    P = Predicate("MPOLY", nm, d=2, q=3)
    rows.append(_row(P, "prime", factorize(3), build_encoding(P, factorize(3)),
                     "C(n,<=d) ~ n^d", "C(n,<=d) ~ n^d", binom_le(nm, 2), binom_le(nm, 2),
                     ["exact monomial count instantiates the O(n^d) entries"]))
    P = Predicate("MPOLY", 2, d=1, q=6)
    rows.append(_row(P, "composite", factorize(6), build_encoding(P, factorize(6)),
                     "C(n,<=d) ~ n^d", "C(n,d)/k ~ n^d/k", binom_le(2, 1), ceil(comb(2, 1) / 2),
                     ["exact monomial counts instantiate the O(n^d) entries"]))

    t = N - 1
    P = Predicate("THR", N, t=t)
    deg = N - t + 1
    for setting, m in (("prime", prime), ("composite", comp)):
        e = build_encoding(P, m)
        r = _row(P, setting, m, e, "n^(n-t+1)", "2^(n-t+1)" + ("" if m.k == 1 else "/k"),
                 N**deg, ceil(2**deg / m.k),
                 [f"construction length C(n,<=n-t+1) = {binom_le(N, deg)}"])
        rows.append(r)

    no = min(N, 2)
    P = Predicate("OR_EQ", no, q=3)
    rows.append(_row(P, "prime", factorize(3), encode_oreq(no, 3), "2^n", "2^n", 2**no, 2**no))
    if no > 1:
        # a single coordinate is fine: x - y vanishes mod 6 only when x = y
        P = Predicate("OR_EQ", 1, q=6)
        rows.append(_row(P, "composite", factorize(6), encode_oreq(1, 6), "2^n", "2^n/k", 2, 1))
    P = Predicate("OR_EQ", no, q=6)
    e = build_encoding(P, factorize(6))
    notes = []
    if e.provenance == "truth_table":
        notes.append("prod(x_i - y_i) is not an encoding at composite q, e.g. x=(0,0), y=(2,3) gives 6 = 0; "
                     "truth-table construction used")
    rows.append(_row(P, "composite", factorize(6), e, "2^n", "2^n/k", 2**no, ceil(2**no / 2), notes))
    return rows


def render_markdown(rows):
    head = ("| predicate | setting | q | upper (ours) | lower (ours) | formula upper | "
            "formula lower | status | notes |")
    lines = [head, "|" + "---|" * 9]
    for r in rows:
        pu = r.formula_upper + (f" = {r.formula_upper_value}" if r.formula_upper_value is not None else "")
        pl = r.formula_lower + (f" = {r.formula_lower_value}" if r.formula_lower_value is not None else "")
        flags = []
        if not r.verified:
            flags.append("construction FAILED verification")
        if not r.certified:
            flags.append("certificate FAILED replay")
        lines.append(f"| {r.predicate.label()} | {r.setting} | {r.modulus.q} | {r.upper} | "
                     f"{r.lower} | {pu} | {pl} | {r.status} | {'; '.join(flags + r.notes)} |")
    return "\n".join(lines) + "\n"
