"""Exact integer arithmetic shared by the other modules."""
from functools import lru_cache, reduce
from math import gcd, isqrt

from . import kernels

kronecker = kernels.kronecker

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


@lru_cache(maxsize=1 << 16)
def factorize(n):
    """Prime factorization as a tuple of (prime, exponent), ascending."""
    if n <= 0:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) & 7
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def primes_of(n):
    return [p for p, _ in factorize(n)]


def odd_primes_of(n):
    return [p for p, _ in factorize(n) if p != 2]


def is_squarefree(n):
    return all(e == 1 for _, e in factorize(n))


def divisors(n):
    """All positive divisors of n in ascending order."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def valuation(n, p):
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_square(n):
    return isqrt_exact(n) is not None


def isqrt_exact(n):
    """Integer square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def content(M):
    """gcd of all entries of a matrix given as a sequence of rows."""
    return reduce(gcd, (x for row in M for x in row), 0)


def smith_invariants(M):
    """Invariant factors of a square integer matrix.

    Ordered largest first, each entry divisible by the next; zero
    invariants (singular M) come first.
    """
    rows = [list(r) for r in M]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("smith_invariants needs a square matrix")
    return kernels.smith_invariants(rows)


def exponent_of_discriminant(B):
    """Largest non-zero Smith invariant: the exponent of the discriminant group."""
    inv = [x for x in smith_invariants(B) if x]
    if not inv:
        raise ValueError("exponent_of_discriminant of the zero matrix")
    return inv[0]


def odd_radical(a):
    r = 1
    for p, _ in factorize(a):
        if p != 2:
            r *= p
    return r


def greatest_prime(a):
    # Includes 2, as the enumeration programs do.
    f = factorize(a)
    return f[-1][0] if f else 0
