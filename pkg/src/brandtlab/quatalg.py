"""Definite quaternion algebras over Q, special orders and their ideal classes.

Elements of B = (a, b / Q) are 4-tuples of Fractions in the basis 1, i, j, k
with i^2 = a, j^2 = b, k = ij = -ji. Orders and ideals are ``Lattice``
objects in these coordinates.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt, prod

from .arith import (
    GramMatrix, Lattice, canonical_lattice, factorize, frac_gcd,
    has_vector_of_norm, is_prime, kronecker, legendre, ramified_primes,
    representation_counts,
)
from .errors import (
    ConstructionFailed, EvenExponentInN1, InvalidLevel, MassMismatch, MNotSquarefree,
    N2NotSquareOfSquarefree, NotCoprime, UnsupportedDyadic, WrongParity,
)

ONE = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))

# ---------------------------------------------------------------------------
# level types


@dataclass(frozen=True, order=True)
class LevelType:
    N1: int
    N2: int
    M: int

    @property
    def N(self):
        return self.N1 * self.N2 * self.M

    @property
    def D_B(self):
        return prod(p for p, _ in factorize(self.N1 * self.N2))

    @property
    def N1prime(self):
        return prod(p**e for p, e in factorize(self.N1) if e > 1)

    def primes(self):
        return [p for p, _ in factorize(self.N)]

    def part(self, p):
        """Which component p divides: 'N1', 'N2' or 'M'."""
        if self.N1 % p == 0:
            return "N1"
        if self.N2 % p == 0:
            return "N2"
        if self.M % p == 0:
            return "M"
        return None

    def ord_N1(self, p):
        return dict(factorize(self.N1)).get(p, 0)

    @property
    def odd_N2_primes(self):
        return [p for p, _ in factorize(self.N2) if p != 2]

    @property
    def omega_prime(self):
        return len(self.odd_N2_primes)

    def astuple(self):
        return (self.N1, self.N2, self.M)

    def __str__(self):
        return f"({self.N1},{self.N2},{self.M})"


def validate_level(N1, N2, M):
    N1, N2, M = int(N1), int(N2), int(M)
    if min(N1, N2, M) < 1:
        raise InvalidLevel("level components must be positive integers")
    from math import gcd

    if gcd(N1, N2) != 1 or gcd(N1, M) != 1 or gcd(N2, M) != 1:
        raise NotCoprime(f"({N1},{N2},{M}) is not pairwise coprime")
    for p, e in factorize(N1):
        if e % 2 == 0:
            raise EvenExponentInN1(f"{p}^{e} divides N1 to an even power")
    for p, e in factorize(N2):
        if e != 2:
            raise N2NotSquareOfSquarefree(f"N2 = {N2} is not the square of a squarefree integer")
    for p, e in factorize(M):
        if e != 1:
            raise MNotSquarefree(f"M = {M} is not squarefree")
    if len(factorize(N1 * N2)) % 2 == 0:
        raise WrongParity(f"an even number of primes divides N1*N2 = {N1 * N2}")
    return LevelType(N1, N2, M)


def mass(lt):
    m = Fraction(lt.N, 12)
    for p, _ in factorize(lt.N1 * lt.N2):
        m *= 1 - Fraction(1, p)
    for p, _ in factorize(lt.N2 * lt.M):
        m *= 1 + Fraction(1, p)
    return m


# ---------------------------------------------------------------------------
# the algebra


@dataclass(frozen=True)
class QAlgebra:
    a: int
    b: int
    D_B: int

    def mul(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def nrd(self, x):
        a, b = self.a, self.b
        return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]

    @staticmethod
    def trd(x):
        return 2 * x[0]

    @staticmethod
    def conj(x):
        return (x[0], -x[1], -x[2], -x[3])

    def inv(self, x):
        n = self.nrd(x)
        return tuple(Fraction(c) / n for c in self.conj(x))

    def bilinear(self, x, y):
        """trd(x conj(y)) / 2, so bilinear(x, x) = nrd(x)."""
        a, b = self.a, self.b
        return x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + a * b * x[3] * y[3]

    def gram(self, L):
        rows = L.rows if isinstance(L, Lattice) else L
        return GramMatrix([[self.bilinear(r, s) for s in rows] for r in rows], check=False)

    def __str__(self):
        return f"({self.a},{self.b} / Q)"


def algebra_from_discriminant(D_B):
    target = sorted(p for p, _ in factorize(D_B))
    if len(target) % 2 == 0:
        raise WrongParity(f"{D_B} has an even number of prime factors")
    for A in range(1, 10 * D_B + 50):
        for Bv in range(A, 40 * D_B * A + 50):
            if ramified_primes(-A, -Bv) == target:
                return QAlgebra(-A, -Bv, D_B)
    raise ConstructionFailed(f"no algebra found for D_B = {D_B}")


@lru_cache(maxsize=None)
def _algebra_cached(D_B):
    return algebra_from_discriminant(D_B)


def algebra_from_level(lt):
    return _algebra_cached(lt.D_B)


# ---------------------------------------------------------------------------
# orders


@dataclass(frozen=True, eq=False)
class QOrder:
    algebra: QAlgebra
    basis: Lattice
    level: LevelType = None
    gram: GramMatrix = None

    def __post_init__(self):
        if self.gram is None:
            object.__setattr__(self, "gram", self.algebra.gram(self.basis))

    def __eq__(self, other):
        return isinstance(other, QOrder) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def reduced_discriminant(self):
        return reduced_discriminant(self.algebra, self.basis)

    def index_in(self, other):
        return self.basis.covolume() / other.basis.covolume()


def reduced_discriminant(B, L):
    d16 = 16 * B.gram(L).det()
    r = isqrt(d16.numerator // d16.denominator) if d16.denominator == 1 else None
    if r is None or r * r * d16.denominator != d16.numerator:
        raise ConstructionFailed("discriminant is not a square")
    return r


def lattice_product(B, L1, L2):
    rows1 = L1.rows if isinstance(L1, Lattice) else L1
    rows2 = L2.rows if isinstance(L2, Lattice) else L2
    return canonical_lattice([B.mul(x, y) for x in rows1 for y in rows2])


def is_order(B, L):
    if ONE not in L:
        return False
    return all(B.mul(x, y) in L for x in L.rows for y in L.rows)


def _integral_lattice(B, L):
    G = B.gram(L).entries
    return all(G[i][i].denominator == 1 for i in range(4)) and all(
        (2 * G[i][j]).denominator == 1 for i in range(4) for j in range(4)
    ) and all((2 * r[0]).denominator == 1 for r in L.rows)


def _ring_closure(B, L, min_disc):
    while True:
        if not _integral_lattice(B, L):
            return None
        gens = list(L.rows) + [B.mul(x, y) for x in L.rows for y in L.rows]
        L2 = canonical_lattice(gens)
        if L2 == L:
            return L
        L = L2
        try:
            if reduced_discriminant(B, L) < min_disc:
                return None
        except ConstructionFailed:
            return None


def maximal_order(B):
    """A maximal order, by enlarging Z<1,i,j,k> one prime at a time."""
    L = canonical_lattice([[int(i == j) for j in range(4)] for i in range(4)])
    while True:
        disc = reduced_discriminant(B, L)
        if disc == B.D_B:
            break
        if disc % B.D_B:
            raise ConstructionFailed("order discriminant not divisible by D_B")
        p = factorize(disc // B.D_B)[0][0]
        L = _enlarge_at(B, L, p)
    return QOrder(B, L)


def _enlarge_at(B, L, p):
    rows = L.rows
    for c in product(range(p), repeat=4):
        if not any(c):
            continue
        x = tuple(sum(Fraction(ci, p) * r[k] for ci, r in zip(c, rows)) for k in range(4))
        if (2 * x[0]).denominator != 1 or B.nrd(x).denominator != 1:
            continue
        M = _ring_closure(B, canonical_lattice(list(rows) + [x]), B.D_B)
        if M is not None and M != L:
            return M
    raise ConstructionFailed(f"order is maximal at {p} but discriminant says otherwise")


def _combo(rows, c):
    return tuple(sum(ci * r[k] for ci, r in zip(c, rows)) for k in range(4))


def _unramified_generator(B, O, p):
    """u in O whose reduction generates the residue field F_{p^2} of O at p."""
    rng = range(-2, 3)
    for c in sorted(product(rng, repeat=4), key=lambda v: (sum(map(abs, v)), v)):
        u = _combo(O.basis.rows, c)
        t, n = 2 * u[0], B.nrd(u)
        if t.denominator != 1 or n.denominator != 1:
            continue
        t, n = int(t), int(n)
        if p == 2:
            if t % 2 and n % 2:
                return u
        else:
            disc = t * t - 4 * n
            if disc % p and kronecker(disc, p) == -1:
                return u
    raise ConstructionFailed(f"no unramified quadratic generator at {p}")


def _nullspace_mod_p(M, p):
    """Basis of the kernel of an integer matrix modulo a prime p."""
    n = len(M[0])
    A = [[x % p for x in r] for r in M]
    piv = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(A)) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [(x - t * y) % p for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    basis = []
    for f in (c for c in range(n) if c not in piv):
        v = [0] * n
        v[f] = 1
        for row, pc in zip(A, piv):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def two_sided_prime(B, O, p):
    """The two-sided ideal {x in O : p | nrd(x)} at a ramified prime p (O maximal at p)."""
    rows = O.basis.rows
    T = [[int(2 * B.bilinear(r, s)) for s in rows] for r in rows]
    ker = _nullspace_mod_p(T, p)
    gens = [tuple(p * x for x in r) for r in rows] + [_combo(rows, c) for c in ker]
    P = canonical_lattice(gens)
    if P.covolume() / O.basis.covolume() != p * p:
        raise ConstructionFailed(f"radical at {p} has the wrong index")
    return P


def some_ideal_of_norm_p(B, O, p):
    """A right O-ideal xO + pO of norm p (O Eichler-maximal at p, p unramified)."""
    rows = O.basis.rows
    for c in product(range(p), repeat=4):
        if not any(c):
            continue
        x = _combo(rows, c)
        if B.nrd(x) % p:
            continue
        I = canonical_lattice([tuple(p * t for t in r) for r in rows] + [B.mul(x, r) for r in rows])
        if I.covolume() / O.basis.covolume() == p * p:
            return I
    raise ConstructionFailed(f"no ideal of norm {p}")


def special_order(B, lt):
    """A special order of level type lt inside B (disc(B) must equal D_B)."""
    if B.D_B != lt.D_B:
        raise ConstructionFailed("algebra discriminant does not match the level type")
    if lt.N2 % 2 == 0:
        raise UnsupportedDyadic("even N2 requires dyadic ramified orders")
    O = maximal_order(B)
    for p, e in factorize(lt.N1):
        if e > 1:
            s = (e - 1) // 2
            u = _unramified_generator(B, O, p)
            ps = p**s
            gens = [ONE, u] + [tuple(ps * x for x in r) for r in O.basis.rows]
            O = QOrder(B, canonical_lattice(gens))
    for p, _ in factorize(lt.N2):
        P = two_sided_prime(B, O, p)
        O = QOrder(B, canonical_lattice([ONE] + list(P.rows)))
    for p, _ in factorize(lt.M):
        I = some_ideal_of_norm_p(B, O, p)
        O = QOrder(B, canonical_lattice([ONE] + list(I.rows)))
    if not is_order(B, O.basis):
        raise ConstructionFailed("special order construction is not closed")
    if O.reduced_discriminant() != lt.N:
        raise ConstructionFailed("special order has the wrong discriminant")
    return QOrder(B, O.basis, lt, O.gram)


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True, eq=False)
class RightIdeal:
    lattice: Lattice
    norm: Fraction

    def __eq__(self, other):
        return isinstance(other, RightIdeal) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)


def ideal_norm(B, L):
    G = B.gram(L).entries
    vals = [G[i][i] for i in range(4)] + [2 * G[i][j] for i in range(4) for j in range(i + 1, 4)]
    return frac_gcd(vals)


def ideal_product(B, I, J):
    I = I.lattice if isinstance(I, RightIdeal) else I
    J = J.lattice if isinstance(J, RightIdeal) else J
    return lattice_product(B, I, J)


def conj_lattice(L):
    return canonical_lattice([QAlgebra.conj(r) for r in L.rows])


def ideal_inverse(B, I):
    if isinstance(I, RightIdeal):
        L, n = I.lattice, I.norm
    else:
        L, n = I, ideal_norm(B, I)
    return conj_lattice(L).scaled(1 / Fraction(n))


def left_order(B, I):
    L = I.lattice if isinstance(I, RightIdeal) else I
    return lattice_product(B, L, ideal_inverse(B, I))


def right_order(B, I):
    L = I.lattice if isinstance(I, RightIdeal) else I
    return lattice_product(B, ideal_inverse(B, I), L)


def normalized_gram(B, L, n=None):
    if n is None:
        n = ideal_norm(B, L)
    return B.gram(L).scaled(1 / Fraction(n))


def is_equivalent(B, I, J):
    """I ~ J as right ideals of a common order: I J^{-1} is principal."""
    L = ideal_product(B, I, ideal_inverse(B, J))
    return has_vector_of_norm(normalized_gram(B, L), 1)


def class_invariant(B, I, bound=3):
    counts = representation_counts(normalized_gram(B, I.lattice, I.norm), bound)
    return tuple(counts.get(Fraction(t), 0) for t in range(1, bound + 1))


def unit_weight(B, O_lattice):
    """w = #O^x / 2 = r(1) / 2 for the norm form of an order."""
    counts = representation_counts(B.gram(O_lattice), 1)
    return counts.get(Fraction(1), 0) // 2


def p_neighbors(B, O, J, p):
    """All right O-ideals J' in J with [J : J'] = p^2 (same right order)."""
    rows = J.lattice.rows
    pJ = [tuple(p * x for x in r) for r in rows]
    found = []
    seen = set()
    for c in _projective_points(p, 4):
        x = _combo(rows, c)
        q = B.nrd(x) / J.norm
        if q.denominator != 1 or q.numerator % p:
            continue
        if any(x in L for L in found):
            continue
        L = canonical_lattice(pJ + [B.mul(x, r) for r in O.basis.rows])
        if L.covolume() / J.lattice.covolume() != p * p or L in seen:
            continue
        seen.add(L)
        found.append(L)
    return [RightIdeal(L, J.norm * p) for L in found]


def _projective_points(p, n):
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


# ---------------------------------------------------------------------------
# class sets


@dataclass(eq=False)
class ClassSetData:
    algebra: QAlgebra
    order: QOrder
    ideals: list
    left_orders: list
    weights: list
    level: LevelType
    bfs_primes: tuple
    coprime_to: int = 1
    _theta: dict = field(default_factory=dict, repr=False)
    _brandt: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return len(self.ideals)

    @property
    def norms(self):
        return [I.norm for I in self.ideals]

    def mass(self):
        return sum(Fraction(1, w) for w in self.weights)

    def classify(self, J):
        """Index of the class of a right ideal J (of the base order)."""
        inv = class_invariant(self.algebra, J)
        for i, I in enumerate(self.ideals):
            if self._invariants[i] == inv and is_equivalent(self.algebra, J, I):
                return i
        return None

    @property
    def _invariants(self):
        if "_inv" not in self.__dict__:
            self.__dict__["_inv"] = [class_invariant(self.algebra, I) for I in self.ideals]
        return self.__dict__["_inv"]


def choose_bfs_primes(lt, coprime_to=1):
    """Small primes p not dividing N*coprime_to whose Legendre symbols at the
    odd primes of N2 generate (Z/2)^omega'."""
    qs = lt.odd_N2_primes
    chosen = []
    span = {tuple([0] * len(qs))}
    p = 1
    while True:
        p += 1
        if not is_prime(p) or lt.N % p == 0 or coprime_to % p == 0:
            continue
        vec = tuple(0 if legendre(p, q) == 1 else 1 for q in qs)
        if not chosen:
            chosen.append(p)
            span |= {tuple((a + b) % 2 for a, b in zip(s, vec)) for s in span}
        elif vec not in span:
            chosen.append(p)
            span |= {tuple((a + b) % 2 for a, b in zip(s, vec)) for s in span}
        if len(span) == 2 ** len(qs):
            return tuple(chosen)


def right_ideal_classes(O, coprime_to=1):
    """Representatives of the right ideal classes of O by p-neighbor search."""
    B, lt = O.algebra, O.level
    target = mass(lt)
    primes = choose_bfs_primes(lt, coprime_to)
    start = RightIdeal(O.basis, Fraction(1))
    ideals = [start]
    lefts = [O.basis]
    weights = [unit_weight(B, O.basis)]
    invs = [class_invariant(B, start)]
    total = Fraction(1, weights[0])
    queue = deque([start])
    while total < target and queue:
        J = queue.popleft()
        for p in primes:
            for Jn in p_neighbors(B, O, J, p):
                inv = class_invariant(B, Jn)
                if any(iv == inv and is_equivalent(B, Jn, I) for iv, I in zip(invs, ideals)):
                    continue
                Ol = left_order(B, Jn)
                w = unit_weight(B, Ol)
                ideals.append(Jn)
                lefts.append(Ol)
                weights.append(w)
                invs.append(inv)
                total += Fraction(1, w)
                queue.append(Jn)
                if total >= target:
                    break
            if total >= target:
                break
    if total != target:
        raise MassMismatch(f"class search reached mass {total}, expected {target}")
    cs = ClassSetData(
        B, O, ideals, [QOrder(B, L) for L in lefts], weights, lt, primes, coprime_to,
    )
    cs.__dict__["_inv"] = invs
    return cs


_CLASS_SETS = {}


def class_set(N1, N2, M, coprime_to=1):
    """Cached class set of the special order of level type (N1, N2, M)."""
    key = (N1, N2, M, coprime_to)
    if key not in _CLASS_SETS:
        lt = validate_level(N1, N2, M)
        B = algebra_from_level(lt)
        _CLASS_SETS[key] = right_ideal_classes(special_order(B, lt), coprime_to)
    return _CLASS_SETS[key]


def register_class_set(cs):
    """Make a class set (e.g. one read from disk) the cached value for its level."""
    lt = cs.level
    _CLASS_SETS[(lt.N1, lt.N2, lt.M, cs.coprime_to)] = cs


# ---------------------------------------------------------------------------
# Brandt matrices


@dataclass(frozen=True)
class BrandtMatrix:
    m: int
    entries: tuple

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def n(self):
        return len(self.entries)

    def rows(self):
        return [list(r) for r in self.entries]


def _theta_table(cs, bound):
    """theta[(i, j)] = value -> count for the normalized form on I_i I_j^{-1}."""
    have = cs._theta.get("bound", 0)
    if have >= bound:
        return cs._theta
    B = cs.algebra
    for i, Ii in enumerate(cs.ideals):
        for j, Ij in enumerate(cs.ideals):
            L = ideal_product(B, Ii, ideal_inverse(B, Ij))
            alpha = Ii.norm / Ij.norm
            cs._theta[(i, j)] = representation_counts(normalized_gram(B, L, alpha), bound)
    cs._theta["bound"] = bound
    return cs._theta


def brandt(cs, m):
    m = int(m)
    if m < 1:
        raise ValueError("m must be positive")
    if m in cs._brandt:
        return cs._brandt[m]
    bound = max(m, cs._theta.get("bound", 0), 13)
    th = _theta_table(cs, bound)
    n = cs.n
    ent = tuple(
        tuple(Fraction(th[(i, j)].get(Fraction(m), 0), 2 * cs.weights[j]) for j in range(n))
        for i in range(n)
    )
    A = BrandtMatrix(m, ent)
    cs._brandt[m] = A
    return A
