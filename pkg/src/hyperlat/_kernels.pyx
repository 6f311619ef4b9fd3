# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Kronecker symbol, class-number sums, reduced-form
counts and small Smith normal forms.  Mirrors ``_pykernels``."""
from libc.stdlib cimport malloc, free
from libc.string cimport memset

from . import _pykernels

cdef extern from *:
    """
    static inline int hl_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int hl_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    static inline int hl_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    """
    int hl_mul(long long a, long long b, long long *r) nogil
    int hl_sub(long long a, long long b, long long *r) nogil
    int hl_add(long long a, long long b, long long *r) nogil

cdef enum:
    MAXDIM = 8


cdef int c_jacobi(long long a, long long n) nogil:
    # n odd, positive
    cdef int result = 1
    cdef long long t
    a %= n
    if a < 0:
        a += n
    while a:
        while (a & 1) == 0:
            a >>= 1
            if (n & 7) == 3 or (n & 7) == 5:
                result = -result
        t = a
        a = n
        n = t
        if (a & 3) == 3 and (n & 3) == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a, n):
    if not (-(1 << 62) < a < (1 << 62) and -(1 << 62) < n < (1 << 62)):
        return _pykernels.kronecker(a, n)
    cdef long long ca = a, cn = n
    cdef int result = 1, v = 0
    cdef long long m8
    if cn == 0:
        return 1 if (ca == 1 or ca == -1) else 0
    if cn < 0:
        cn = -cn
        if ca < 0:
            result = -1
    while (cn & 1) == 0:
        cn >>= 1
        v += 1
    if v:
        if (ca & 1) == 0:
            return 0
        m8 = ca % 8
        if m8 < 0:
            m8 += 8
        if (v & 1) and (m8 == 3 or m8 == 5):
            result = -result
    return result * c_jacobi(ca, cn)


cdef long long c_gcd(long long a, long long b) nogil:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int odd_primes(long long m, long long *out) nogil:
    cdef int k = 0
    cdef long long p = 3
    while p * p <= m:
        if m % p == 0:
            out[k] = p
            k += 1
            while m % p == 0:
                m //= p
        p += 2
    if m > 1:
        out[k] = m
        k += 1
    return k


def dirichlet_class_number(long long D):
    cdef long long n = -D
    cdef long long m = n, r, s = 0, p, start, j, x
    cdef int e = 0, k, i, w
    cdef long long primes[32]
    cdef signed char chi2[8]
    cdef signed char *chi
    cdef signed char *leg
    if n <= 0:
        raise ValueError("discriminant must be negative")
    while (m & 1) == 0:
        m >>= 1
        e += 1
    k = odd_primes(m, primes)
    for i in range(8):
        chi2[i] = 1
    if e:
        tbl = _pykernels._two_part_table(D)
        for i in range(8):
            chi2[i] = tbl[i]
    chi = <signed char *>malloc(n)
    if chi == NULL:
        raise MemoryError()
    try:
        for r in range(n):
            chi[r] = chi2[r & 7]
        for i in range(k):
            p = primes[i]
            leg = <signed char *>malloc(p)
            if leg == NULL:
                raise MemoryError()
            memset(leg, 0xff, p)
            leg[0] = 0
            for x in range(1, (p - 1) // 2 + 1):
                leg[(x * x) % p] = 1
            start = 0
            while start < n:
                for j in range(p):
                    chi[start + j] *= leg[j]
                start += p
            free(leg)
        for r in range(1, n):
            s += chi[r] * r
    finally:
        free(chi)
    w = 6 if n == 3 else (4 if n == 4 else 2)
    h, rem = divmod(-w * s, 2 * n)
    if rem or h <= 0:
        raise ArithmeticError(f"character sum for {D} is not a class number")
    return h


def reduced_form_count(long long D):
    cdef long long n = -D, a, b, num, c, count = 0
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            if (b - D) & 1:
                continue
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if c_gcd(c_gcd(a, b), c) == 1:
                count += 1
        a += 1
    return count


cdef int c_smith(long long *A, int size, long long *diag) nogil:
    """Returns the number of non-zero invariants, or -1 on overflow."""
    cdef int t, i, j, bi, bj, clean, bad, nd = 0
    cdef long long best, x, piv, q, tmp, prod
    for t in range(size):
        while True:
            best = 0
            for i in range(t, size):
                for j in range(t, size):
                    x = A[i * size + j]
                    if x < 0:
                        x = -x
                    if x and (best == 0 or x < best):
                        best = x
                        bi = i
                        bj = j
            if best == 0:
                break
            if bi != t:
                for j in range(size):
                    tmp = A[t * size + j]
                    A[t * size + j] = A[bi * size + j]
                    A[bi * size + j] = tmp
            if bj != t:
                for i in range(size):
                    tmp = A[i * size + t]
                    A[i * size + t] = A[i * size + bj]
                    A[i * size + bj] = tmp
            piv = A[t * size + t]
            clean = 1
            for i in range(t + 1, size):
                q = A[i * size + t] / piv
                if A[i * size + t] % piv and (A[i * size + t] < 0) != (piv < 0):
                    q -= 1
                if q:
                    for j in range(t, size):
                        if hl_mul(q, A[t * size + j], &prod):
                            return -1
                        if hl_sub(A[i * size + j], prod, &A[i * size + j]):
                            return -1
                if A[i * size + t]:
                    clean = 0
            for j in range(t + 1, size):
                q = A[t * size + j] / piv
                if A[t * size + j] % piv and (A[t * size + j] < 0) != (piv < 0):
                    q -= 1
                if q:
                    for i in range(t, size):
                        if hl_mul(q, A[i * size + t], &prod):
                            return -1
                        if hl_sub(A[i * size + j], prod, &A[i * size + j]):
                            return -1
                if A[t * size + j]:
                    clean = 0
            if not clean:
                continue
            bad = -1
            for i in range(t + 1, size):
                for j in range(t + 1, size):
                    if A[i * size + j] % piv:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            for j in range(t, size):
                if hl_add(A[t * size + j], A[bad * size + j], &A[t * size + j]):
                    return -1
        if best == 0:
            break
        piv = A[t * size + t]
        diag[nd] = piv if piv > 0 else -piv
        nd += 1
    return nd


def smith_invariants(rows):
    cdef int size = len(rows), i, j, nd
    cdef long long A[MAXDIM * MAXDIM]
    cdef long long diag[MAXDIM]
    if size > MAXDIM:
        return _pykernels.smith_invariants(rows)
    for i in range(size):
        row = rows[i]
        for j in range(size):
            x = row[j]
            if not -(1 << 62) < x < (1 << 62):
                return _pykernels.smith_invariants(rows)
            A[i * size + j] = x
    nd = c_smith(A, size, diag)
    if nd < 0:
        return _pykernels.smith_invariants(rows)
    return [0] * (size - nd) + [diag[i] for i in range(nd - 1, -1, -1)]
