import itertools
import random
from fractions import Fraction
from math import cos, isclose, pi, sqrt

import pytest
from sympy import Matrix

from hyperlat import narrow
from hyperlat.intarith import exponent_of_discriminant, greatest_prime, odd_radical, smith_invariants
from hyperlat.narrow import f_p2, f_p3, g_root
from oracles import annihilator_exponent


def test_g_root_examples():
    assert g_root(0.0, 2.0, 5.0) == pytest.approx(0.0, abs=1e-12)
    assert g_root(pi, 2.0, 3.0) == pytest.approx(2.0, abs=1e-12)
    for alpha in (0.3, 1.0, 2.0):
        assert g_root(alpha, 1.7, 1.7) == pytest.approx(1.7 * (1 - cos(alpha / 2)), abs=1e-12)


def test_g_root_solves_quadratic():
    for alpha, u, v in [(0.5, 1.0, 3.0), (1.2, 0.4, 2.5), (2.9, 5.0, 0.1)]:
        a = cos(alpha / 2) ** 2
        x = g_root(alpha, u, v)
        assert (u - x) * (v - x) == pytest.approx(a * u * v, abs=1e-9)
        assert x <= min(u, v) + 1e-12


def test_f_examples():
    a = (0.3, 0.6, 0.9)
    assert f_p2(*a, 0) == pytest.approx((sqrt(a[0]) + sqrt(a[1]) + sqrt(a[2])) ** 2, abs=1e-12)
    assert f_p2(1, 1, 1, 1) == pytest.approx(6.0, abs=1e-12)
    assert f_p3(0.4, 0.5, 0.7, 0.9, 1, 1) == pytest.approx(4.0, abs=1e-12)


GRID_A12 = (0.28, 0.5, 0.75, 1.0)
GRID_A3 = (0.16, 0.5, 1.0)


def f_p2_grid_gap():
    """Largest excess of f_p2 over its endpoint values on the declared grid."""
    worst = 0.0
    ts = [i / 100 for i in range(101)]
    for a1, a2, a3 in itertools.product(GRID_A12, GRID_A12, GRID_A3):
        ends = max(f_p2(a1, a2, a3, 0), f_p2(a1, a2, a3, 1))
        worst = max(worst, max(f_p2(a1, a2, a3, t) for t in ts) - ends)
    return worst


def f_p3_grid_gap():
    worst = 0.0
    grid = [i / 25 for i in range(26)]
    levels = (0.38, 0.6, 1.0)
    for a in itertools.product(levels, repeat=4):
        corners = max(f_p3(*a, s, t) for s, t in ((0, 0), (1, 0), (1, 1)))
        top = max(f_p3(*a, s, t) for s in grid for t in grid if t <= s)
        worst = max(worst, top - corners)
    return worst


def test_f_p2_maximum_at_endpoints():
    assert f_p2_grid_gap() <= 1e-9


def test_f_p3_maximum_at_corners():
    assert f_p3_grid_gap() <= 1e-9


def test_bound_audit_flags_only_exact_integers():
    flagged = narrow.bound_audit()
    assert [(tag, key) for tag, key, _ in flagged] == [("I1", (1, 1)), ("I1", (4, 4)), ("II1", 4)]
    assert all(isclose(x, round(x), abs_tol=1e-9) for _, _, x in flagged)


@pytest.mark.parametrize("tag,expected", [("I1", (272, 3528, 543, 181)), ("I0", (2998, 69192, 10209, 89)),
                                          ("II1", (9818, 47432, 10965, 487))])
def test_small_type_stats(tag, expected):
    assert narrow.enumerate_narrow(tag)[0].as_tuple() == expected


def test_unknown_type():
    with pytest.raises(ValueError):
        list(narrow.iter_records("IV"))


def _cycles(k):
    for r in range(3, k + 1):
        for nodes in itertools.combinations(range(k), r):
            first = nodes[0]
            for rest in itertools.permutations(nodes[1:]):
                if rest[0] < rest[-1]:
                    yield (first,) + rest


def check_record(rec):
    k = len(rec.B)
    A, lam, B = rec.cartan, rec.lambda_, rec.B
    assert all(B[i][j] == B[j][i] for i in range(k) for j in range(k))
    assert all(B[i][i] < 0 for i in range(k))
    assert narrow.content(B) == 1
    AL = [[Fraction(A[i][j]) * lam[j] for j in range(k)] for i in range(k)]
    assert all(AL[i][j] == AL[j][i] for i in range(k) for j in range(k))
    ratio = next(AL[i][j] / B[i][j] for i in range(k) for j in range(k) if B[i][j])
    assert all(AL[i][j] == ratio * B[i][j] for i in range(k) for j in range(k))
    for i in range(k):
        assert A[i][i] == -2 and rec.alpha[i][i] == 4
        for j in range(k):
            if i != j:
                assert A[i][j] >= 0 and (A[i][j] == 0) == (A[j][i] == 0)
                assert A[i][j] * A[j][i] == rec.alpha[i][j]
    for cyc in _cycles(k):
        fwd = bwd = Fraction(1)
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            fwd *= A[x][y]
            bwd *= A[y][x]
        assert fwd == bwd
    inv = smith_invariants(B)
    assert inv.count(0) == k - 3
    assert rec.a == exponent_of_discriminant(B)
    assert rec.a1 == odd_radical(rec.a) and rec.a2 == greatest_prime(rec.a)


def sampled_records(tag, count, seed=7):
    rng = random.Random(seed)
    dom = list(narrow.outer_domain(tag))
    rng.shuffle(dom)
    recs = []
    for outer in dom[:60]:
        recs.extend(narrow.iter_records(tag, [outer]))
        if len(recs) >= count:
            break
    return rng.sample(recs, min(count, len(recs)))


@pytest.mark.parametrize("tag", narrow.TYPES)
def test_record_invariants(tag):
    recs = sampled_records(tag, 300)
    assert recs
    for rec in recs:
        check_record(rec)


def discriminant_exponent_agreement(tag, count=60, seed=11):
    """a via Smith invariants against the brute-force annihilator on nonsingular 3x3 minors."""
    rng = random.Random(seed)
    checked = 0
    for rec in sampled_records(tag, count, seed):
        k = len(rec.B)
        if k == 3:
            assert rec.a == annihilator_exponent(rec.B)
            checked += 1
            continue
        picks = list(itertools.product(itertools.combinations(range(k), 3), repeat=2))
        rng.shuffle(picks)
        picks.sort(key=lambda p: p[0] != p[1])  # principal minors first
        for rows, cols in picks:
            M = [[rec.B[i][j] for j in cols] for i in rows]
            if Matrix(M).det() != 0:
                assert exponent_of_discriminant(M) == annihilator_exponent(M)
                checked += 1
                break
    return checked


@pytest.mark.parametrize("tag", narrow.TYPES)
def test_discriminant_exponent_oracle(tag):
    assert discriminant_exponent_agreement(tag) > 0


def test_stream_is_deterministic():
    first = list(narrow.iter_records("II1"))
    assert first == list(narrow.iter_records("II1"))


def test_sharded_stream_matches_whole():
    whole = list(narrow.iter_records("I0"))
    parts = narrow.shards("I0", 3)
    assert [r for p in parts for r in narrow.iter_records("I0", p)] == whole


def test_parallel_stats_match():
    assert narrow.enumerate_narrow("II1", workers=2)[0].as_tuple() == (9818, 47432, 10965, 487)


def test_record_json():
    rec = next(iter(narrow.iter_records("I1")))
    js = rec.to_json()
    assert set(js) == {"type_tag", "alpha", "cartan", "lambda", "B", "a", "a1", "a2"}
    assert js["type_tag"] == "I1"


def test_main_candidates_rules():
    B = ((-3, 1, 0, 0), (1, -5, 1, 0), (0, 1, -7, 1), (0, 0, 1, -11))
    assert narrow.main_candidates(B, "literal") in ([], [B])
    prose = narrow.main_candidates(B, "prose")
    assert all(g in prose for g in narrow.main_candidates(B, "literal"))


def test_ii0_main_prose_rule_is_superset():
    literal = {(t.d, t.eta, t.h) for t in narrow.enumerate_II0_main()}
    prose = {(t.d, t.eta, t.h) for t in narrow.enumerate_II0_main(double_rule="prose")}
    assert len(literal) == 132
    assert prose - literal == {(33, 0, 1), (57, 0, 1), (66, 1, 1), (102, 0, 1)}
