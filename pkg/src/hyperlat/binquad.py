"""Class numbers and per-genus ambiguous/non-ambiguous class counts of
negative discriminants of binary lattices with square-free determinant."""
import os
import threading
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .intarith import divisors, factorize, is_squarefree, kronecker

CACHE_ENV = "HYPERLAT_CACHE"


@dataclass(frozen=True)
class GenusLabel:
    D: int
    mu: int


@dataclass(frozen=True)
class GenusClassCounts:
    hrI: int
    hrII: int
    hnr: int  # Fraction for unrealizable genera in compatible mode

    def as_tuple(self):
        return (self.hrI, self.hrII, self.hnr)


def is_fundamental(D):
    """D < 0 with D = 1 mod 4 and |D| square-free, or D = 4, 8, 12 mod 16 with |D|/4 square-free."""
    if D >= 0:
        return False
    if D % 4 == 1:
        return is_squarefree(-D)
    if D % 16 in (4, 8, 12):
        return is_squarefree(-D // 4)
    return False


def _require_fundamental(D):
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")


class ClassNumberCache:
    """Memo of h(D) backed by an optional text file of "D h" lines.

    Writes are idempotent, so concurrent last-writer-wins insertion is safe.
    """

    def __init__(self):
        self.values = {}
        self.path = None
        self._saved = set()
        self._lock = threading.Lock()

    def load(self, path):
        # entries saved to another file are still pending for this one
        if path != self.path:
            self._saved = set()
        self.path = path
        if path and os.path.exists(path):
            with open(path, encoding="ascii") as fh:
                for line in fh:
                    parts = line.split()
                    if len(parts) == 2:
                        D, h = int(parts[0]), int(parts[1])
                        self.values[D] = h
                        self._saved.add(D)

    def pending(self):
        return {D: h for D, h in self.values.items() if D not in self._saved}

    def update(self, entries):
        self.values.update(entries)

    def save(self):
        if not self.path:
            return 0
        with self._lock:
            new = sorted(self.pending().items(), reverse=True)
            if not new:
                return 0
            parent = os.path.dirname(self.path)
            if parent:
                os.makedirs(parent, exist_ok=True)
            with open(self.path, "a", encoding="ascii") as fh:
                for D, h in new:
                    fh.write(f"{D} {h}\n")
            self._saved.update(D for D, _ in new)
            return len(new)


CACHE = ClassNumberCache()


def class_number(D):
    """h(D) via Dirichlet's character sum; D = 4 mod 16 goes through h(4D') with D' = D/4."""
    h = CACHE.values.get(D)
    if h is not None:
        return h
    _require_fundamental(D)
    if D % 16 == 4:
        h = class_number_4D(D // 4)
    else:
        h = kernels.dirichlet_class_number(D)
    CACHE.values[D] = h
    return h


def class_number_forms(D):
    """Number of reduced positive forms of discriminant D (independent oracle)."""
    _require_fundamental(D)
    return kernels.reduced_form_count(D)


def class_number_4D(D):
    """h(4D) for fundamental D = 1 mod 4."""
    if D % 4 != 1:
        raise ValueError(f"class_number_4D needs D = 1 mod 4, got {D}")
    _require_fundamental(D)
    if D == -3:
        return 1
    h = class_number(D)
    return h if D % 8 == 1 else 3 * h


def tau(D):
    """log2 of the number of genera of discriminant D."""
    _require_fundamental(D)
    t = len(factorize(-D))
    return t - 2 if D % 16 == 4 else t - 1


def _bit(mu, k):
    return (mu >> k) & 1


def _splitting_in_genus(dd, dd1, primes, mu, twist):
    # Genus of the ambiguous form attached to the splitting dd = dd1 * (dd/dd1).
    for k, p in enumerate(primes):
        x = dd1 if dd1 % p == 0 else dd // dd1
        if kronecker(twist * (x // p), p) != (-1) ** _bit(mu, k):
            return False
    return True


def _count_splittings(dd, primes, mu, twist, halves=True, base=None):
    base = dd if base is None else base
    return sum(1 for dd1 in divisors(base)
               if not (halves and dd1 > dd // dd1)
               and _splitting_in_genus(dd, dd1, primes, mu, twist))


def _odd_primes_of_D(D):
    return [p for p, _ in factorize(-D) if p != 2]


def principal_genus(D):
    """Bitmask mu of the genus containing the principal form."""
    _require_fundamental(D)
    if D % 4 == 1:
        dd, twist = -D, 2
    else:
        dd, twist = -D // 4, 1
    mu = 0
    for k, p in enumerate(_odd_primes_of_D(D)):
        if kronecker(twist * (dd // p), p) == -1:
            mu |= 1 << k
    return mu


def is_realizable(D, mu):
    """True iff (D, mu) is the genus of some binary lattice.

    For D = 1 mod 4 and D = 4 mod 16 the genus characters of odd primes
    multiply to a fixed value, so exactly half of the masks occur; for the
    other residues the 2-adic character is free and every mask occurs.
    """
    _require_fundamental(D)
    if mu < 0 or mu >= 1 << len(_odd_primes_of_D(D)):
        return False
    if D % 4 == 1 or D % 16 == 4:
        return bin(mu ^ principal_genus(D)).count("1") % 2 == 0
    return True


def genus_counts(g, strict=False):
    """(hrI, hrII, hnr) for the genus g.

    The default reproduces the reference program exactly, including masks
    that label no genus: those give (0, 0, h/2^(tau+1)), possibly a
    half-integer returned as a Fraction.  strict=True rejects them.
    """
    D, mu = g.D, g.mu
    _require_fundamental(D)
    primes = _odd_primes_of_D(D)
    if mu < 0 or mu >= 1 << len(primes):
        raise ValueError(f"mu={mu} out of range for D={D}")
    if strict and not is_realizable(D, mu):
        raise ValueError(f"({D}, {mu}) is not a realizable genus")
    if D % 4 == 1:
        dd = -D
        hrI, hrII = 0, _count_splittings(dd, primes, mu, 2)
        t = len(primes) - 1
    elif D % 16 == 4:
        dd = -D // 4
        hrI, hrII = _count_splittings(dd, primes, mu, 1), 0
        t = len(primes) - 1
    elif D % 16 == 8:
        dd = -D // 4
        if dd == 2:
            return GenusClassCounts(1, 0, 0)
        hrI = _count_splittings(dd, primes, mu, 1, halves=False, base=dd // 2)
        hrII = 0
        t = len(primes)
    else:
        dd = -D // 4
        if dd == 1:
            return GenusClassCounts(1, 1, 0)
        hrI = _count_splittings(dd, primes, mu, 1)
        hrII = _count_splittings(dd, primes, mu, 2)
        t = len(primes)
    rest = (Fraction(class_number(D), 2**t) - hrI - hrII) / 2
    return GenusClassCounts(hrI, hrII, int(rest) if rest.denominator == 1 else rest)
