"""Reference implementations of the hot kernels.

Same signatures as the compiled ``_kernels`` extension; used when the
extension is not built or when HYPERLAT_PURE=1.
"""
from math import gcd, isqrt

import numpy as np


def kronecker(a, n):
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v & 1 and a % 8 in (3, 5):
            result = -result
    # n odd and positive from here: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _odd_primes(m):
    primes = []
    p = 3
    while p * p <= m:
        if m % p == 0:
            primes.append(p)
            m //= p
        p += 2
    if m > 1:
        primes.append(m)
    return primes


def _two_part_table(D):
    """Values of the 2-adic factor of the character of D on residues mod 8."""
    n = -D
    e = (n & -n).bit_length() - 1
    m = n >> e
    if e == 0:
        return [1] * 8
    sign = -1 if (sum(1 for p in _odd_primes(m) if p % 4 == 3) + 1) % 2 else 1
    d2 = sign * (1 << e)
    if d2 == -4:
        vals = {1: 1, 3: -1, 5: 1, 7: -1}
    elif d2 == 8:
        vals = {1: 1, 3: -1, 5: -1, 7: 1}
    elif d2 == -8:
        vals = {1: 1, 3: 1, 5: -1, 7: -1}
    else:
        raise ValueError(f"{D} is not a fundamental discriminant")
    return [vals.get(r, 0) for r in range(8)]


def character_values(D):
    """Array of kronecker(D, r) for 0 <= r < |D|, D a negative fundamental discriminant.

    Built multiplicatively from Legendre tables of the odd primes of D.
    """
    n = -D
    r = np.arange(n, dtype=np.int64)
    chi = np.asarray(_two_part_table(D), dtype=np.int64)[r % 8]
    m = n >> ((n & -n).bit_length() - 1)
    for p in _odd_primes(m):
        leg = np.full(p, -1, dtype=np.int64)
        leg[0] = 0
        x = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
        leg[(x * x) % p] = 1
        chi *= leg[r % p]
    return chi


def dirichlet_class_number(D):
    n = -D
    w = 6 if n == 3 else 4 if n == 4 else 2
    chi = character_values(D)
    s = int(np.dot(chi, np.arange(n, dtype=np.int64)))
    h, rem = divmod(-w * s, 2 * n)
    if rem or h <= 0:
        raise ArithmeticError(f"character sum for {D} is not a class number")
    return h


def reduced_form_count(D):
    n = -D
    count = 0
    for a in range(1, isqrt(n // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                count += 1
    return count


def smith_invariants(rows):
    """Invariant factors of a square integer matrix, largest first, zeros first."""
    A = [list(r) for r in rows]
    size = len(A)
    diag = []
    for t in range(size):
        while True:
            best = None
            for i in range(t, size):
                for j in range(t, size):
                    x = A[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            piv = A[t][t]
            clean = True
            for i in range(t + 1, size):
                q = A[i][t] // piv
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    clean = False
            for j in range(t + 1, size):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, size)
                        if any(A[i][j] % piv for j in range(t + 1, size))), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        if best is None:
            break
        diag.append(abs(A[t][t]))
    zeros = size - len(diag)
    return [0] * zeros + diag[::-1]
