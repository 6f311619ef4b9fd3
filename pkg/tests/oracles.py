"""Brute-force reference computations used only by the tests.

Nothing here calls into hyperlat; the point is an independent route to the
same numbers.
"""
from collections import defaultdict
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint
from sympy.functions.combinatorial.numbers import kronecker_symbol


def reduced_forms_table(limit):
    """Map D -> list of primitive reduced forms (a, b, c) for -limit <= D < 0.

    Reduced: -a < b <= a <= c, and b >= 0 when a == c.
    """
    table = defaultdict(list)
    for a in range(1, isqrt(limit // 3) + 1):
        for b in range(-a + 1, a + 1):
            c = a
            while True:
                D = b * b - 4 * a * c
                if D < -limit:
                    break
                if not (c == a and b < 0) and gcd(gcd(a, b), c) == 1:
                    table[D].append((a, b, c))
                c += 1
    return table


def is_fundamental(D):
    if D >= 0:
        return False
    if D % 4 == 1:
        m = -D
    elif D % 16 in (4, 8, 12):
        m = -D // 4
    else:
        return False
    return all(e == 1 for e in factorint(m).values())


def form_genus(D, form):
    """Genus bitmask of a form: bit k is set when the k-th odd prime character is -1.

    The character at p is evaluated on a represented value m prime to p,
    twisted by the cofactor of p in the determinant (and by 2 for even
    lattices, D = 1 mod 4).
    """
    a, b, c = form
    if D % 4 == 1:
        det, twist = -D, 2
    else:
        det, twist = -D // 4, 1
    primes = sorted(p for p in factorint(-D) if p != 2)
    mu = 0
    for k, p in enumerate(primes):
        m = next(x for x in (a, c, a + b + c, a - b + c) if x % p)
        if kronecker_symbol(twist * (det // p) * m, p) == -1:
            mu |= 1 << k
    return mu


def is_ambiguous(form):
    a, b, c = form
    return b == 0 or a == b or a == c


def genus_census(D, forms):
    """Per genus: (#diagonal reduced forms, #other ambiguous, #non-ambiguous)."""
    census = defaultdict(lambda: [0, 0, 0])
    for f in forms:
        mu = form_genus(D, f)
        if f[1] == 0:
            census[mu][0] += 1
        elif is_ambiguous(f):
            census[mu][1] += 1
        else:
            census[mu][2] += 1
    return dict(census)


def annihilator_exponent(M):
    """Exponent of the torsion of Z^n / M Z^n for a nonsingular integer M.

    Smallest e > 0 with e * M^{-1} integral.
    """
    from sympy import Matrix
    inv = Matrix(M).inv()
    e = 1
    for x in inv:
        e = e * Fraction(x.q, gcd(e, x.q)).numerator
    return e


def legendre_by_squares(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1
