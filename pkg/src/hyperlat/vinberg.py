"""Vinberg's algorithm for rank-3 hyperbolic lattices U + <-2k> and
<n1> + <-n2> + <-n3> glued by eps/2: fundamental-polygon roots by height,
side chains, periods and a reflectivity verdict."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm

from sympy import Matrix, Rational, eye

from .intarith import divisors, isqrt_exact


# Lattice forms

@dataclass(frozen=True)
class UPlus:
    """U + <-2k>, Gram ((0,1,0),(1,0,0),(0,0,-2k))."""
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("UPlus needs k >= 1")

    @property
    def gram(self):
        return ((0, 1, 0), (1, 0, 0), (0, 0, -2 * self.k))

    @property
    def eps(self):
        return (0, 0, 0)

    def future_vector(self):
        return (2, 2, 0)  # doubled (1,1,0), norm 2, same cone as (1,0,0)

    def describe(self):
        return f"u:{self.k}"


@dataclass(frozen=True)
class Diag:
    """<n1> + <-n2> + <-n3> with the glue vector eps/2 adjoined."""
    n1: int
    n2: int
    n3: int
    eps: tuple = (0, 0, 0)

    def __post_init__(self):
        if min(self.n1, self.n2, self.n3) < 1:
            raise ValueError("Diag needs positive n1, n2, n3")
        eps = tuple(self.eps)
        if any(e not in (0, 1) for e in eps) or sum(eps) == 1:
            raise ValueError("glue must be zero or have at least two non-zero entries")
        for e, n in zip(eps, (self.n1, self.n2, self.n3)):
            if e and n % 2:
                raise ValueError("a glued coordinate needs an even diagonal entry")
        if (self.n1 * eps[0] - self.n2 * eps[1] - self.n3 * eps[2]) % 4:
            raise ValueError("glue vector must have integral norm")
        object.__setattr__(self, "eps", eps)

    @property
    def gram(self):
        return ((self.n1, 0, 0), (0, -self.n2, 0), (0, 0, -self.n3))

    def future_vector(self):
        return (2, 0, 0)

    def describe(self):
        base = f"diag:{self.n1},{self.n2},{self.n3}"
        return base + (":" + ",".join(map(str, self.eps)) if any(self.eps) else "")


def _ip(G, x, y):
    return sum(x[i] * G[i][j] * y[j] for i in range(3) for j in range(3) if G[i][j])


@dataclass(frozen=True, order=True)
class RootVec:
    """Lattice vector stored with doubled coordinates; the vector itself is num/2."""
    num: tuple

    @property
    def coords(self):
        return tuple(Fraction(x, 2) for x in self.num)

    def render(self):
        return [x // 2 if x % 2 == 0 else f"{x}/2" for x in self.num]

    def __repr__(self):
        return "(" + ",".join(str(x) for x in self.render()) + ")"


def rv(*coords):
    """RootVec from semantic coordinates (ints or Fractions)."""
    return RootVec(tuple(int(2 * Fraction(c)) for c in coords))


def norm(L, v):
    """Norm of a RootVec in L (an integer for lattice vectors)."""
    x = _ip(L.gram, v.num, v.num)
    return x // 4 if x % 4 == 0 else Fraction(x, 4)


def inner(L, u, v):
    x = _ip(L.gram, u.num, v.num)
    return x // 4 if x % 4 == 0 else Fraction(x, 4)


def height(L, v):
    """Height in the units of the enumeration bound: 2(v,c)^2/(-v^2) with
    c = (1,0,0) for U + <-2k>, and n1 (2 v_1)^2/(-v^2) for Diag."""
    n = -norm(L, v)
    if isinstance(L, UPlus):
        return Fraction(v.num[1] ** 2, 2 * n)
    return Fraction(L.n1 * v.num[0] ** 2, n)


def in_lattice(L, num):
    """Membership of a doubled-coordinate vector in the lattice."""
    if any(x % 2 for x in num):
        return all((x - e) % 2 == 0 for x, e in zip(num, L.eps)) and any(L.eps)
    return True


def gram_matrix(L, vs):
    return tuple(tuple(inner(L, a, b) for b in vs) for a in vs)


# Root enumeration

def seed_roots(L):
    if isinstance(L, UPlus):
        return [rv(0, 0, 1), rv(L.k, 0, -1), rv(-1, 1, 0)]
    n2, n3, eps = L.n2, L.n3, L.eps
    half = Fraction(1, 2)
    if n2 == n3:
        if eps in ((0, 0, 0), (1, 1, 1)):
            return [rv(0, 1, 0), rv(0, -1, 1)]
        if eps == (0, 1, 1):
            return [rv(0, 1, 0), rv(0, -half, half)]
    elif n2 == 3 * n3 and eps == (0, 1, 1):
        return [rv(0, 1, 0), rv(0, -half, half)]
    elif 3 * n2 == n3 and eps == (0, 1, 1):
        return [rv(0, 0, 1), rv(0, half, -half)]
    return [rv(0, 1, 0), rv(0, 0, 1)]


def _candidates_uplus(n, H):
    out = []
    for e in divisors(n):
        d = -2 * e
        k = 1
        while e * k * k <= H:
            y2, h1 = e * k, e * k * k
            k += 1
            if h1 < 2:
                continue  # the height-1 root is the third seed
            lo = isqrt((2 * y2 * y2 - d) // (2 * n))
            for z in range(lo, y2 + 1):
                num = 2 * n * z * z + d
                if num % (2 * y2):
                    continue
                y1 = num // (2 * y2)
                if (2 * y1) % d or gcd(gcd(y1, y2), z) != 1:
                    continue
                out.append((h1, y2, z, (2 * y1, 2 * y2, -2 * z)))
    out.sort()
    return out


def _candidates_diag(L, H):
    n1, n2, n3, eps = L.n1, L.n2, L.n3, L.eps
    glued = any(eps)
    out = []
    for d in divisors(2 * lcm(n1, n2, n3)):
        step = d // gcd(d, n1)
        zstep = d // gcd(d, n2)
        y1t = step
        while n1 * y1t * y1t <= H * d:
            h1 = n1 * y1t * y1t // d
            w = n1 * y1t * y1t + 4 * d
            for z in range(0, isqrt(w // n2) + 1, zstep):
                rest = w - n2 * z * z
                if rest % n3:
                    continue
                r = isqrt_exact(rest // n3)
                if r is None:
                    continue
                num = (y1t, -z, -r)
                if (n3 * num[2]) % d:
                    continue
                if (n1 * num[0] * eps[0] - n2 * num[1] * eps[1] - n3 * num[2] * eps[2]) % (2 * d):
                    continue
                odd = tuple(x % 2 for x in num)
                integral = odd == (0, 0, 0)
                if not integral and odd != eps:
                    continue
                if integral:
                    half = tuple(x // 2 for x in num)
                    if gcd(gcd(*half[:2]), half[2]) > 1 or all(
                            (x - 2 * e) % 4 == 0 for x, e in zip(num, eps)):
                        continue
                elif glued and gcd(gcd(*num[:2]), num[2]) > 1:
                    continue
                out.append((h1, y1t, z, num))
            y1t += step
    out.sort()
    return out


def enumerate_roots(L, height_bound):
    """Polygon roots of height <= height_bound in acceptance order."""
    G = L.gram
    roots = seed_roots(L)
    if isinstance(L, UPlus):
        cands = _candidates_uplus(L.k, height_bound)
    else:
        cands = _candidates_diag(L, height_bound)
    accepted = [r.num for r in roots]
    for _, _, _, num in cands:
        if all(_ip(G, v, num) >= 0 for v in accepted):
            accepted.append(num)
            roots.append(RootVec(num))
    return roots


# Chains

@dataclass
class Chain:
    roots: list
    gram: tuple


@dataclass
class Chains:
    e: Chain
    f: Chain = None
    orphans: list = field(default_factory=list)


def adjacent(L, u, v):
    """Sides meet or are parallel: (u,v)^2 <= u^2 v^2."""
    G = L.gram
    return _ip(G, u.num, v.num) ** 2 <= _ip(G, u.num, u.num) * _ip(G, v.num, v.num)


def _grow_last_match(L, v, chain):
    s = len(v)
    while len(chain) < s:
        nxt = None
        for x in v:
            if x != chain[-2] and x != chain[-1] and adjacent(L, x, chain[-1]):
                nxt = x  # the last match in list order wins
        if nxt is None:
            break
        chain.append(nxt)
    return chain


def _grow_greedy(L, start, pool):
    chain = [start]
    for _ in range(len(pool)):
        for i, x in enumerate(pool):
            if x is not None and adjacent(L, x, chain[-1]):
                chain.append(x)
                pool[i] = None
    return chain


def build_chains(L, roots):
    """Chain e through the two seeds (grown both ways) and chain f from the rest."""
    if len(roots) < 2:
        raise ValueError("need at least two roots")
    s = len(roots)
    e1 = _grow_last_match(L, roots, [roots[1], roots[0]])
    e2 = _grow_last_match(L, roots, [roots[0], roots[1]])
    if len(e1) == s and len(e2) == s:
        e = e1
    else:
        e = e2[::-1] + e1[2:]
    chains = Chains(Chain(e, gram_matrix(L, e)))
    in_e = set(e)
    pool = [x if x not in in_e else None for x in roots]
    if all(x is None for x in pool):
        return chains
    first = next(i for i, x in enumerate(pool) if x is not None)
    start = pool[first]
    pool[first] = None
    f1 = _grow_greedy(L, start, pool)
    f2 = _grow_greedy(L, start, pool)
    f = f2[::-1] + f1[1:]
    chains.f = Chain(f, gram_matrix(L, f))
    chains.orphans = [x for x in pool if x is not None]
    return chains


# Isometries

def _mat(rows):
    return Matrix([[Rational(x) for x in r] for r in rows])


def _complement(L, u, v):
    """Primitive lattice vector orthogonal to u and v, in doubled coordinates."""
    G = _mat(L.gram)
    a = G * Matrix(u.num)
    b = G * Matrix(v.num)
    w = a.cross(b)
    ints = [int(x) for x in w]
    c = gcd(gcd(ints[0], ints[1]), ints[2])
    if c == 0:
        return None
    w = [x // c for x in ints]
    # doubled coordinates of the integral vector w are 2w; halve when w/2 lies in the lattice
    if in_lattice(L, tuple(w)):
        return RootVec(tuple(w))
    return RootVec(tuple(2 * x for x in w))


def is_isometry(L, C):
    """C (semantic coordinates) preserves the form, the lattice and the future cone."""
    C = _mat(C) if not isinstance(C, Matrix) else C
    G = _mat(L.gram)
    if C.T * G * C != G:
        return False
    gens = [(2, 0, 0), (0, 2, 0), (0, 0, 2)]
    if any(L.eps):
        gens.append(tuple(L.eps))
    for g in gens:
        img = C * Matrix(g)
        if any(x.q != 1 for x in img):
            return False
        if not in_lattice(L, tuple(int(x) for x in img)):
            return False
    x0 = Matrix(L.future_vector())
    return (x0.T * G * (C * x0))[0] > 0


def find_pair_automorphism(L, src, dst):
    """Isometry C of L with C(src[0]) = dst[0], C(src[1]) = dst[1], or None."""
    if gram_matrix(L, src) != gram_matrix(L, dst):
        raise ValueError("source and target pairs have different Gram matrices")
    ws, wd = _complement(L, *src), _complement(L, *dst)
    if ws is None or wd is None or norm(L, ws) != norm(L, wd) or norm(L, ws) == 0:
        return None
    S = Matrix.hstack(*[Matrix(x.num) for x in (src[0], src[1], ws)])
    for sign in (1, -1):
        T = Matrix.hstack(Matrix(dst[0].num), Matrix(dst[1].num), sign * Matrix(wd.num))
        C = T * S.inv()
        if is_isometry(L, C):
            return C
    return None


def apply(C, v):
    img = C * Matrix(v.num)
    return RootVec(tuple(int(x) for x in img))


def integral_eigenvectors(C, G):
    """(eigenvalue, primitive integral vector, norm) for the +1 and -1 eigenspaces of C."""
    C = _mat(C) if not isinstance(C, Matrix) else C
    G = _mat(G) if not isinstance(G, Matrix) else G
    out = []
    for lam in (1, -1):
        for b in (C - lam * eye(3)).nullspace():
            den = lcm(*[x.q for x in b])
            ints = [int(x * den) for x in b]
            c = gcd(gcd(ints[0], ints[1]), ints[2])
            ints = [x // c for x in ints]
            if next(x for x in ints if x) < 0:
                ints = [-x for x in ints]
            vec = Matrix(ints)
            out.append((lam, tuple(ints), int((vec.T * G * vec)[0])))
    return out


def has_infinite_order(C, power=12):
    return C ** power != eye(3)


# Verdicts

@dataclass
class Elliptic:
    p_m: list
    gram: tuple
    tag: str = "Elliptic"


@dataclass
class Hyperbolic:
    weyl: tuple
    period: Matrix
    tag: str = "Hyperbolic"


@dataclass
class NotReflective:
    witness: object
    tag: str = "NotReflective"


@dataclass
class Inconclusive:
    height_reached: int
    tag: str = "Inconclusive"


def _pair_gram(L, a, b):
    return gram_matrix(L, (a, b))


def chain_period(L, chain):
    """First q > 1 with a period C mapping (c1, c2) to (c_q, c_{q+1})."""
    r = chain.roots
    for q in range(1, len(r) - 1):
        if _pair_gram(L, r[q], r[q + 1]) == _pair_gram(L, r[0], r[1]):
            C = find_pair_automorphism(L, (r[0], r[1]), (r[q], r[q + 1]))
            if C is not None:
                return C, q
    return None, None


def orthogonal_pairs(L, roots):
    """Orthogonal root pairs (more negative norm first), ordered by the later root's index.

    Each entry is ((norm_a, norm_b, half), (a, b)) where half says whether
    (w + b)/2 lies in the lattice for w the primitive vector orthogonal to both.
    """
    pairs = []
    for j, v in enumerate(roots):
        for u in roots[:j]:
            if inner(L, u, v) != 0:
                continue
            a, b = (u, v) if norm(L, u) <= norm(L, v) else (v, u)
            w = _complement(L, a, b)
            half = tuple(x + y for x, y in zip(w.num, b.num))
            flag = all(x % 2 == 0 for x in half) and in_lattice(L, tuple(x // 2 for x in half))
            pairs.append(((norm(L, a), norm(L, b), flag), (a, b)))
    return pairs


def pair_period(L, roots):
    """Infinite-order isometry between two orthogonal root pairs with equal norms.

    Norm classes are tried in order of their first orthogonal pair; inside a
    class only pairs passing the half-sum test are used, latest pairs first.
    """
    groups = {}
    for key, pair in orthogonal_pairs(L, roots):
        members = groups.setdefault(key[:2], [])
        if key[2]:
            members.append(pair)
    for members in groups.values():
        for j in range(len(members) - 1, 0, -1):
            for i in range(j - 1, -1, -1):
                C = find_pair_automorphism(L, members[i], members[j])
                if C is not None and has_infinite_order(C):
                    return C, (members[i], members[j])
    return None, None


def _negative_definite(G):
    n = G.shape[0]
    return all((-1) ** k * G[:k, :k].det() > 0 for k in range(1, n + 1))


def _maps_chain(L, C, chain):
    r = chain.roots
    images = [apply(C, r[0]), apply(C, r[1])]
    return any(r[q] == images[0] and r[q + 1] == images[1] for q in range(len(r) - 1))


def classify_reflectivity(L, height_bound, hnr=None, roots=None):
    roots = enumerate_roots(L, height_bound) if roots is None else roots
    chains = build_chains(L, roots)
    e, f = chains.e, chains.f
    if f is None and adjacent(L, e.roots[0], e.roots[-1]):
        return Elliptic(e.roots, e.gram)
    C, _ = chain_period(L, e)
    if C is None:
        C, _ = pair_period(L, roots)
    if C is None:
        return Inconclusive(height_bound)
    infinite = has_infinite_order(C)
    if hnr == 1 and infinite:
        return NotReflective(C)
    G = _mat(L.gram)
    eig = integral_eigenvectors(C, L.gram)
    spaces_negative = eig and all(
        _negative_definite(Matrix.hstack(*[Matrix(v) for lam2, v, _ in eig if lam2 == lam]).T * G
                           * Matrix.hstack(*[Matrix(v) for lam2, v, _ in eig if lam2 == lam]))
        for lam in {lam for lam, _, _ in eig})
    if spaces_negative and f is not None and _maps_chain(L, C, f):
        for _, w, _ in eig:
            wv = RootVec(tuple(2 * x for x in w))
            if inner(L, e.roots[0], wv) < 0:
                wv = RootVec(tuple(-x for x in wv.num))
            if all(inner(L, x, wv) > 0 for x in e.roots) and all(inner(L, x, wv) < 0 for x in f.roots):
                return Hyperbolic(tuple(x // 2 for x in wv.num), C)
    if f is not None:
        B, _ = chain_period(L, f)
        if B is not None and B ** 2 * C ** 2 != C ** 2 * B ** 2:
            return NotReflective((B, C))
    return Inconclusive(height_bound)
