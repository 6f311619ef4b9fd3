"""Narrow places of fundamental polygons: the bounding functions, exhaustive
enumeration of the five Gram-matrix types with their invariants, and the
main-lattice filter on type II0."""
from dataclasses import dataclass
from fractions import Fraction
from math import cos, floor, gcd, sqrt

from .intarith import (content, divisors, factorize,
                       greatest_prime, isqrt_exact, is_squarefree, kronecker,
                       odd_radical, smith_invariants, valuation)

TYPES = ("I1", "I0", "II1", "II0", "III")

# (8 + 4*sqrt(5))^2 rounded down past its sixth decimal
III_SIDE_BOUND = 287.108350


def g_root(alpha, u, v):
    """Smaller root x of (u - x)(v - x) = a*u*v with a = cos^2(alpha/2)."""
    a = cos(alpha / 2) ** 2
    return (u + v - sqrt(max(0.0, a * (u + v) ** 2 + (1 - a) * (u - v) ** 2))) / 2


def f_p2(a1, a2, a3, t):
    s = sqrt(a1 + (1 - a1) * t * t) + sqrt(a2 + (1 - a2) * t * t) + sqrt(a3 + a3 * t + t * t / 4)
    return (s * s - t * t / 4) / (1 + t)


def f_p3(a1, a2, a3, a4, s, t):
    r = (sqrt(a1 + (1 - a1) * s * s) + sqrt(a2 + (1 - a2) * s * s)
         + sqrt(a3 + a3 * (s - t) + a3 * (s - t) ** 2 / 4 + (1 - a3) * (s + t) ** 2 / 4)
         + sqrt(a4 + (1 - a4) * t * t))
    return (r * r - (s - t) ** 2 / 4) / ((1 + s) * (1 + t))


@dataclass(frozen=True)
class NarrowPlaceRecord:
    type_tag: str
    alpha: tuple
    cartan: tuple
    lambda_: tuple
    B: tuple
    a: int
    a1: int
    a2: int

    def to_json(self):
        return {"type_tag": self.type_tag, "alpha": [list(r) for r in self.alpha],
                "cartan": [[_num(x) for x in r] for r in self.cartan],
                "lambda": [_num(x) for x in self.lambda_],
                "B": [list(r) for r in self.B], "a": self.a, "a1": self.a1, "a2": self.a2}


def _num(x):
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return int(x)


@dataclass
class EnumStats:
    n: int = 0
    a_max: int = 1
    a1_max: int = 1
    a2_max: int = 1

    def add(self, rec):
        self.n += 1
        self.a_max = max(self.a_max, rec.a)
        self.a1_max = max(self.a1_max, rec.a1)
        self.a2_max = max(self.a2_max, rec.a2)

    def merge(self, other):
        self.n += other.n
        self.a_max = max(self.a_max, other.a_max)
        self.a1_max = max(self.a1_max, other.a1_max)
        self.a2_max = max(self.a2_max, other.a2_max)

    def as_tuple(self):
        return (self.n, self.a_max, self.a1_max, self.a2_max)

    def to_json(self):
        return {"n": self.n, "a": self.a_max, "a1": self.a1_max, "a2": self.a2_max}


def _symmetric(k, entries, diagonal=4):
    m = [[0] * k for _ in range(k)]
    for i in range(k):
        m[i][i] = diagonal
    for (i, j), x in entries.items():
        m[i][j] = m[j][i] = x
    return tuple(tuple(r) for r in m)


def _cartan(k, entries):
    m = [[0] * k for _ in range(k)]
    for i in range(k):
        m[i][i] = -2
    for (i, j), x in entries.items():
        m[i][j] = x
    return tuple(tuple(r) for r in m)


def _primitive_gram(A, lam):
    """A * diag(lam) divided by its content, as an integer matrix."""
    prod = [[x * y for x, y in zip(row, lam)] for row in A]
    flat = [x for row in prod for x in row]
    if all(isinstance(x, int) for x in flat):
        c = content(prod)
        return tuple(tuple(x // c for x in row) for row in prod)
    flat = [Fraction(x) for x in flat]
    num = 0
    den = 1
    for x in flat:
        num = gcd(num, x.numerator)
        den = den * x.denominator // gcd(den, x.denominator)
    c = Fraction(num, den)
    return tuple(tuple(int(Fraction(x) / c) for x in row) for row in prod)


def _record(tag, alpha, A, lam, index):
    B = _primitive_gram(A, lam)
    a = smith_invariants(B)[index]
    return NarrowPlaceRecord(tag, alpha, A, tuple(lam), B, a, odd_radical(a), greatest_prime(a))


def _float_bound(x):
    # Loop bound evaluated in floating point with the reference programs' guard.
    return floor(x + 1e-6)


# Outer-loop domains; each generator below takes a subset of its domain.

def outer_domain(tag):
    return {
        "I1": [(a12, a23) for a12 in range(1, 5) for a23 in range(a12, 5)],
        "I0": list(range(1, 5)),
        "II1": list(range(1, 5)),
        "II0": list(range(1, 288)),
        "III": list(range(0, 901)),
    }[tag]


def _gen_I1(outer):
    for a12s, a23s in outer:
        top = _float_bound(((sqrt(2 + sqrt(a12s)) + sqrt(2 + sqrt(a23s))) ** 2 - 2) ** 2)
        for a13s in range(a23s, top + 1):
            r = isqrt_exact(a12s * a23s * a13s)
            if r is None or -8 + 2 * r + 2 * (a12s + a13s + a23s) <= 0:
                continue
            alpha = _symmetric(3, {(0, 1): a12s, (1, 2): a23s, (0, 2): a13s})
            for a12 in divisors(a12s):
                for a23 in divisors(a23s):
                    for a13 in divisors(a13s):
                        a21, a32, a31 = a12s // a12, a23s // a23, a13s // a13
                        if a12 * a23 * a31 != a21 * a13 * a32:
                            continue
                        A = _cartan(3, {(0, 1): a12, (1, 0): a21, (1, 2): a23, (2, 1): a32,
                                        (0, 2): a13, (2, 0): a31})
                        yield _record("I1", alpha, A, (a13 * a32, a23 * a31, a31 * a32), 0)


def _gen_I0(outer):
    for a23s in outer:
        top = _float_bound(((sqrt(2) + sqrt(2 + sqrt(a23s))) ** 2 - 2) ** 2)
        for a13s in range(a23s, top + 1):
            # Hyperbolicity (positive determinant) stands in for a lower bound on alpha13.
            if -8 + 2 * (a13s + a23s) <= 0:
                continue
            alpha = _symmetric(3, {(1, 2): a23s, (0, 2): a13s})
            for a23 in divisors(a23s):
                for a13 in divisors(a13s):
                    a32, a31 = a23s // a23, a13s // a13
                    A = _cartan(3, {(1, 2): a23, (2, 1): a32, (0, 2): a13, (2, 0): a31})
                    yield _record("I0", alpha, A, (a13 * a32, a23 * a31, a31 * a32), 0)


def _gen_II1(outer):
    for a34s in outer:
        top = _float_bound((4 * max((sqrt(2) + sqrt(sqrt(a34s) / 4 + 0.5)) ** 2,
                                    ((2 + sqrt(sqrt(a34s) / 2 + 1.25)) ** 2 - 0.25) / 2) - 2) ** 2)
        a24_floor = ((sqrt(2) + sqrt(2 + sqrt(a34s))) ** 2 - 2) ** 2 - 1e-7
        for a14s in range(0, top + 1):
            for a13s in range(5, 37):
                u = a13s * a34s * a14s
                ru = isqrt_exact(u)
                if ru is None:
                    continue
                num = 4 * (a14s + a34s + ru)
                if num % (a13s - 4):
                    continue
                a24s = 4 + num // (a13s - 4)
                if a24s <= a24_floor:
                    continue
                alpha = _symmetric(4, {(0, 2): a13s, (2, 3): a34s, (1, 3): a24s, (0, 3): a14s})
                for a34 in divisors(a34s):
                    for a13 in divisors(a13s):
                        for a24 in divisors(a24s):
                            if ru % (a13 * a34):
                                continue
                            a41 = ru // (a13 * a34)
                            if a41 == 0:
                                a14 = 0
                            elif a14s % a41:
                                continue
                            else:
                                a14 = a14s // a41
                            a43, a42, a31 = a34s // a34, a24s // a24, a13s // a13
                            A = _cartan(4, {(2, 3): a34, (3, 2): a43, (1, 3): a24, (3, 1): a42,
                                            (0, 2): a13, (2, 0): a31, (3, 0): a41, (0, 3): a14})
                            lam = (a13 * a34 * a42, a31 * a43 * a24, a31 * a34 * a42, a31 * a43 * a42)
                            yield _record("II1", alpha, A, lam, 1)


def _ii0_cartans(a14s, a13_cap=36):
    """(alpha, A, lam) for type II0 in canonical order, for one alpha14."""
    for aa in divisors(4 * a14s):
        if aa * aa > 4 * a14s:
            continue
        a13s, a24s = 4 + aa, 4 * a14s // aa + 4
        if a13_cap is not None and a13s > a13_cap:
            continue
        alpha = _symmetric(4, {(0, 2): a13s, (1, 3): a24s, (0, 3): a14s})
        for a13 in divisors(a13s):
            for a24 in divisors(a24s):
                for a14 in divisors(a14s):
                    a31, a41, a42 = a13s // a13, a14s // a14, a24s // a24
                    A = _cartan(4, {(0, 2): a13, (2, 0): a31, (0, 3): a14, (3, 0): a41,
                                    (1, 3): a24, (3, 1): a42})
                    lam = (a13 * a14 * a42, a13 * a41 * a24, a31 * a14 * a42, a13 * a42 * a41)
                    yield alpha, A, lam


def _gen_II0(outer):
    for a14s in outer:
        for alpha, A, lam in _ii0_cartans(a14s):
            yield _record("II0", alpha, A, lam, 1)


def _gen_III(outer, rational_links=True):
    for al15 in outer:
        for al13 in range(5, 37):
            for al35 in range(al13, 37):
                rq = isqrt_exact(al13 * al35 * al15)
                if rq is None:
                    continue
                d = 4 * (al13 + al35 + al15 - 4 + rq)
                if d % (al35 - 4) or d % (al13 - 4):
                    continue
                al14, al25 = d // (al35 - 4), d // (al13 - 4)
                if al14 <= III_SIDE_BOUND or al25 <= III_SIDE_BOUND:
                    continue
                num = 4 * (al13 * al35 + 4 * al15 + 4 * rq)
                den = (al35 - 4) * (al13 - 4)
                if num % den:
                    continue
                al24 = num // den
                rq1 = isqrt_exact(al13 * al35 * al25 * al24 * al14)
                if rq1 is None:
                    continue
                alpha = _symmetric(5, {(0, 4): al15, (0, 2): al13, (0, 3): al14, (1, 3): al24,
                                       (1, 4): al25, (2, 4): al35})
                for a13 in divisors(al13):
                    for a35 in divisors(al35):
                        a51 = Fraction(rq, a13 * a35)
                        # a51 = 0 (alpha15 = 0) yields no record, as in the reference program
                        if a51 == 0 or (not rational_links and a51.denominator != 1):
                            continue
                        a15 = al15 / a51
                        if a15.denominator != 1:
                            continue
                        for a14 in divisors(al14):
                            for a24 in divisors(al24):
                                a52 = Fraction(rq1 * a14, a13 * a35 * a24 * al14)
                                if not rational_links and a52.denominator != 1:
                                    continue
                                a25 = al25 / a52
                                if a25.denominator != 1:
                                    continue
                                a25 = int(a25)
                                a31, a41, a42, a53 = al13 // a13, al14 // a14, al24 // a24, al35 // a35
                                A = _cartan(5, {(0, 2): a13, (2, 0): a31, (0, 3): a14, (3, 0): a41,
                                                (0, 4): int(a15), (4, 0): _int_if(a51),
                                                (1, 3): a24, (3, 1): a42, (1, 4): a25,
                                                (4, 1): _int_if(a52), (2, 4): a35, (4, 2): a53})
                                lam = tuple(_int_if(x) for x in (
                                    a14 * a13 * a42 * a25, a41 * a13 * a24 * a25,
                                    a14 * a31 * a42 * a25, a41 * a13 * a42 * a25,
                                    a41 * a13 * a24 * a52))
                                yield _record("III", alpha, A, lam, 2)


def _int_if(x):
    return int(x) if isinstance(x, Fraction) and x.denominator == 1 else x


_GENERATORS = {"I1": _gen_I1, "I0": _gen_I0, "II1": _gen_II1, "II0": _gen_II0, "III": _gen_III}


def iter_records(type_tag, outer=None):
    """Record stream of one type in canonical loop order (optionally one shard of it)."""
    if type_tag not in _GENERATORS:
        raise ValueError(f"unknown narrow-place type {type_tag!r}")
    return _GENERATORS[type_tag](outer_domain(type_tag) if outer is None else outer)


def _stats_shard(type_tag, outer):
    stats = EnumStats()
    for rec in iter_records(type_tag, outer):
        stats.add(rec)
    return stats


def shards(type_tag, parts):
    dom = outer_domain(type_tag)
    step = max(1, -(-len(dom) // parts))
    return [dom[i:i + step] for i in range(0, len(dom), step)]


def enumerate_narrow(type_tag, workers=1, keep_records=False):
    """(stats, records) for one type; records is None unless keep_records."""
    if keep_records:
        records = list(iter_records(type_tag))
        stats = EnumStats()
        for rec in records:
            stats.add(rec)
        return stats, records
    from .parallel import map_shards
    parts = shards(type_tag, workers * 4) if workers > 1 else [outer_domain(type_tag)]
    stats = EnumStats()
    for s in map_shards(_stats_shard, [(type_tag, p) for p in parts], workers):
        stats.merge(s)
    return stats, None


def bound_audit(tol=1e-4):
    """Loop bounds evaluated in floating point that lie within tol of an integer."""
    near = []
    checks = [("I1", (a12, a23), ((sqrt(2 + sqrt(a12)) + sqrt(2 + sqrt(a23))) ** 2 - 2) ** 2)
              for a12, a23 in outer_domain("I1")]
    checks += [("I0", a23, ((sqrt(2) + sqrt(2 + sqrt(a23))) ** 2 - 2) ** 2) for a23 in range(1, 5)]
    for a34 in range(1, 5):
        checks.append(("II1", a34, (4 * max((sqrt(2) + sqrt(sqrt(a34) / 4 + 0.5)) ** 2,
                                            ((2 + sqrt(sqrt(a34) / 2 + 1.25)) ** 2 - 0.25) / 2) - 2) ** 2))
        checks.append(("II1-alpha24", a34, ((sqrt(2) + sqrt(2 + sqrt(a34))) ** 2 - 2) ** 2))
    checks.append(("II0/III", None, (8 + 4 * sqrt(5)) ** 2))
    for tag, key, x in checks:
        if abs(x - round(x)) < tol:
            near.append((tag, key, x))
    return near


# Main-lattice filter on type II0

@dataclass(frozen=True)
class MainTriplet:
    d: int
    eta: int
    h: int


def _odd_exponent_primes(n):
    return [p for p, e in factorize(n) if e % 2]


def _main_invariants(b):
    """(d, eta) of the lattice with Gram b (one of Gamma = B or 2B)."""
    db = smith_invariants(b)
    detb = db[1] * db[2] * db[3]
    d = 1
    for p in _odd_exponent_primes(detb):
        d *= p
    if d <= 2:
        return d, 0
    d1 = d // 2 if d % 2 == 0 else d
    b11, b22 = b[0][0], b[1][1]
    eta = 0
    for k, (p, _) in enumerate(factorize(d1)):
        if b11 % p == 0:
            x = b11 // p
        elif b22 % p == 0:
            x = b22 // p
        else:
            x = d * b11 * b22 // p
        if kronecker(x, p) != 1:
            eta |= 1 << k
    return d, eta


def main_candidates(B, double_rule="literal"):
    """Grams Gamma (B, 2B, both or neither) that pass the main-lattice conditions.

    double_rule "literal" never tries Gamma = 2B: the reference program's
    guard ``k==1&&gam1=1`` assigns, so its doubled branch is dead code, and
    this reading is the one that yields the published 132 triplets.
    "prose" tries 2B whenever every diagonal entry is odd (136 triplets).
    """
    diag = [B[i][i] for i in range(4)]
    if not all(is_squarefree(-x) for x in diag):
        return []
    if any(gcd(diag[i], diag[i + 1]) > 2 for i in range(3)):
        return []
    db = smith_invariants(B)
    detb = db[1] * db[2] * db[3]
    if detb == 1:
        return []
    P = 1
    for x in diag:
        P *= -x
    v2_odd = valuation(detb, 2) % 2 == 1
    if 1 < gcd(P, 16) < 16 and v2_odd:
        return []
    for p, e in factorize(detb):
        if p != 2 and P % p == 0 and e % 2 == 0:
            return []
    out = []
    if not (P % 2 and v2_odd):
        out.append(B)
    if P % 2 and double_rule == "prose":
        out.append(tuple(tuple(2 * x for x in row) for row in B))
    return out


def _main_shard(outer, double_rule):
    from .lattice3 import exists_main_lattice, hnr
    found = set()
    for a14s in outer:
        for alpha, A, lam in _ii0_cartans(a14s, a13_cap=None):
            B = _primitive_gram(A, lam)
            for gamma in main_candidates(B, double_rule):
                d, eta = _main_invariants(gamma)
                # only reachable through Gamma = 2B
                if not exists_main_lattice(d, eta):
                    continue
                h = hnr(d, eta)
                if h <= 1:
                    found.add((d, eta, h))
    return found


def enumerate_II0_main(workers=1, double_rule="literal"):
    """Distinct (d, eta, h) with h <= 1 from II0 Grams passing the main-lattice filter."""
    from .parallel import map_shards
    parts = shards("II0", workers * 4) if workers > 1 else [outer_domain("II0")]
    found = set()
    for s in map_shards(_main_shard, [(p, double_rule) for p in parts], workers):
        found |= s
    return [MainTriplet(*t) for t in sorted(found)]
