"""Main hyperbolic rank-3 lattices with square-free determinant d and odd-prime
invariant eta: existence and the number of classes of non-reflective central
symmetries."""
from dataclasses import dataclass

from . import binquad
from .binquad import GenusLabel, genus_counts
from .intarith import divisors, factorize, is_squarefree, kronecker


@dataclass(frozen=True)
class LatticeInvariants:
    d: int
    eta: int


def _bit(x, k):
    return (x >> k) & 1


def _odd_primes(d):
    return [p for p, _ in factorize(d) if p != 2]


def _sign_sum(primes, eta, modulus):
    return sum(1 - p + 4 * _bit(eta, k) for k, p in enumerate(primes)) % modulus


def exists_main_lattice(d, eta):
    if d < 1 or not is_squarefree(d):
        raise ValueError(f"d={d} must be a positive square-free integer")
    primes = _odd_primes(d)
    if eta < 0 or eta >= 1 << len(primes):
        raise ValueError(f"eta={eta} out of range for d={d}")
    if d % 2:
        return True
    return _sign_sum(primes, eta, 8) in (0, 6)


def _beta5(primes, eta, n):
    # kro(n/p, p) = (-1)^eta_p for odd p dividing both d and n
    return all(kronecker(n // p, p) == (-1) ** _bit(eta, k)
               for k, p in enumerate(primes) if n % p == 0)


def _restricted_sum(primes, eta, m):
    return sum(1 - p + 4 * _bit(eta, k) for k, p in enumerate(primes) if m % p == 0) % 8


def _beta6(primes, eta, m):
    return _restricted_sum(primes, eta, m) == 6


def _beta8(primes, eta, m):
    return (_restricted_sum(primes, eta, m) + (m * m - 1) // 2) % 8 != 2


def _beta11(primes, eta, n1):
    u = (-_sign_sum(primes, eta, 4) - 1) % 4
    return u == n1 % 4


def _twist(primes, eta, with_omega):
    e = eta
    for k, p in enumerate(primes):
        flip = (p - 1) // 2 + ((p * p - 1) // 8 if with_omega else 0)
        e ^= (flip & 1) << k
    return e


def _restrict(primes, mask, t):
    # Keep the bits of the odd primes dividing t, re-packed in order.
    out, j = 0, 0
    for k, p in enumerate(primes):
        if t % p == 0:
            out |= _bit(mask, k) << j
            j += 1
    return out


def _counts(D, mu):
    # Non-fundamental D contributes nothing, as in the reference program.
    if not binquad.is_fundamental(D):
        return binquad.GenusClassCounts(0, 0, 0)
    return genus_counts(GenusLabel(D, mu))


def hnr(d, eta):
    """Number of classes of non-reflective central symmetries of the lattice (d, eta)."""
    if not exists_main_lattice(d, eta):
        raise ValueError(f"no main hyperbolic lattice with invariants ({d}, {eta})")
    primes = _odd_primes(d)
    eps = _twist(primes, eta, False)
    h = 0
    if d % 2:
        for n in divisors(d):
            m = d // n
            if _beta5(primes, eta, n) and _beta6(primes, eta, m):
                h += _counts(-m, _restrict(primes, eps, m)).hnr
        for n in divisors(d):
            m = d // n
            if _beta5(primes, eta, n) and _beta8(primes, eta, m):
                h += _counts(-4 * m, _restrict(primes, eps, m)).hnr
        for n1 in divisors(d):
            n = 2 * n1
            if _beta5(primes, eta, n):
                h += _counts(-16 * d // n, _restrict(primes, eps, d // n1)).hnr
    else:
        epsomeg = _twist(primes, eta, True)
        half = d // 2
        for n1 in divisors(half):
            n = 2 * n1
            if _beta5(primes, eta, n) and _beta11(primes, eta, n1):
                h += _counts(-d // n, _restrict(primes, eps, d // n)).hnr
        for n1 in divisors(half):
            n = 2 * n1
            if _beta5(primes, eta, n) and n1 % 4 == -half % 4:
                h += _counts(-4 * d // n, _restrict(primes, epsomeg, d // n)).hnr
        for n1 in divisors(half):
            n = 2 * n1
            if _beta5(primes, eta, n) and n1 % 4 == half % 4 and n < d:
                c = _counts(-4 * d // n, _restrict(primes, epsomeg, d // n))
                h += 2 * c.hnr + c.hrII
    return h


def candidate_etas(d):
    """eta values for which a main lattice with determinant d exists."""
    k = len(_odd_primes(d))
    return [eta for eta in range(1 << k) if exists_main_lattice(d, eta)]


def low_hnr_for(d, hmax, exact=False):
    """Entries (d, eta, h) with h <= hmax (h == hmax if exact) for a single d."""
    if not is_squarefree(d):
        return []
    if d <= 2:
        return [(d, 0, 0)] if (0 == hmax if exact else 0 <= hmax) else []
    out = []
    for eta in candidate_etas(d):
        h = hnr(d, eta)
        if (h == hmax) if exact else (h <= hmax):
            out.append((d, eta, h))
    return out


def enumerate_low_hnr(N, hmax, exact=False, workers=1):
    """All (d, eta, h) with square-free d <= N and hnr <= hmax, ordered by (d, eta)."""
    if workers > 1:
        from .parallel import map_shards
        chunks = map_shards(_low_hnr_range, [(lo, hi, hmax, exact) for lo, hi in
                                              _ranges(N, workers * 4)], workers)
        return [row for chunk in chunks for row in chunk]
    return _low_hnr_range(1, N, hmax, exact)


def _low_hnr_range(lo, hi, hmax, exact):
    return [row for d in range(lo, hi + 1) for row in low_hnr_for(d, hmax, exact)]


def _ranges(N, parts):
    step = max(1, -(-N // parts))
    return [(lo, min(N, lo + step - 1)) for lo in range(1, N + 1, step)]
