"""Exact integer and rational foundations.

Factorization and quadratic symbols, Hermite normal forms of rational
lattices in Q^4, and exact enumeration of lattice vectors of a given norm for
positive definite forms (Fincke-Pohst with rational Cholesky data).
"""

from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, lcm, sqrt

from sympy import factorint, isprime
from sympy.functions.combinatorial.numbers import kronecker_symbol

from .errors import EmptyInput, ZeroLattice

# ---------------------------------------------------------------------------
# integers


@lru_cache(maxsize=4096)
def factorize(n):
    """Prime factorization of ``n >= 1`` as a tuple of (p, e), p increasing."""
    n = int(n)
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    return tuple(sorted(factorint(n).items()))


def prime_divisors(n):
    return [p for p, _ in factorize(abs(n))] if n else []


def is_prime(n):
    return n > 1 and bool(isprime(n))


def is_squarefree(n):
    return all(e == 1 for _, e in factorize(abs(n)))


def primes_in(lo, hi):
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def valuation(n, p):
    """p-adic valuation of a nonzero integer or Fraction."""
    n = Fraction(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = n.numerator, n.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


@lru_cache(maxsize=65536)
def kronecker(a, n):
    """Kronecker symbol (a|n)."""
    if a == 0 and n == 0:
        raise ValueError("kronecker(0, 0) is undefined")
    return int(kronecker_symbol(int(a), int(n)))


def legendre(a, p):
    """(a|p) for an odd prime p; rationals are allowed if p is a p-adic unit."""
    a = Fraction(a)
    return kronecker(a.numerator * a.denominator, p)


def hilbert_symbol(a, b, p):
    """Hilbert symbol (a, b)_p for nonzero integers; ``p = -1`` means R."""
    if p == -1:
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p != 2:
        eps = ((p - 1) // 2) % 2
        s = (-1) ** (alpha * beta * eps)
        if beta % 2:
            s *= kronecker(u, p)
        if alpha % 2:
            s *= kronecker(v, p)
        return s

    def e(x):
        return ((x - 1) // 2) % 2

    def w(x):
        return ((x * x - 1) // 8) % 2

    expo = e(u) * e(v) + alpha * w(v) + beta * w(u)
    return -1 if expo % 2 else 1


def _split_p(a, p):
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k, a


def ramified_primes(a, b):
    """Finite primes where (a, b / Q) ramifies."""
    return [p for p in prime_divisors(2 * a * b) if hilbert_symbol(a, b, p) == -1]


def frac_gcd(values):
    """Positive generator of the fractional ideal spanned by rationals."""
    num, den = 0, 1
    for x in values:
        x = Fraction(x)
        if x:
            num = gcd(num, x.numerator)
            den = lcm(den, x.denominator)
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# lattices


def hnf_rows(rows):
    """Row-style Hermite normal form of an integer matrix; zero rows dropped."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m, ncols = len(A), len(A[0])
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            pr = A[r]
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // pr[c]
                    A[i] = [x - q * y for x, y in zip(A[i], pr)]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        pr = A[r]
        for i in range(r):
            q = A[i][c] // pr[c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], pr)]
        r += 1
    return [tuple(x) for x in A[:r]]


class Lattice:
    """A Z-lattice in Q^4 stored in canonical Hermite form.

    ``rows`` is a tuple of rational row vectors; two generating sets of the
    same lattice give equal (and equally hashed) objects.
    """

    __slots__ = ("rows", "_pivots", "_hash")

    def __init__(self, rows):
        self.rows = rows
        self._pivots = tuple(next(c for c, x in enumerate(r) if x) for r in rows)
        self._hash = hash(rows)

    @property
    def rank(self):
        return len(self.rows)

    @property
    def denominator(self):
        return lcm(*(x.denominator for r in self.rows for x in r))

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Lattice([{body}])"

    def coordinates(self, v):
        """Rational coordinates of v in the basis, or None if v is outside the span."""
        v = [Fraction(x) for x in v]
        coeffs = []
        for r, c in zip(self.rows, self._pivots):
            t = v[c] / r[c]
            coeffs.append(t)
            if t:
                v = [x - t * y for x, y in zip(v, r)]
        if any(v):
            return None
        return coeffs

    def __contains__(self, v):
        co = self.coordinates(v)
        return co is not None and all(t.denominator == 1 for t in co)

    def contains_lattice(self, other):
        return all(r in self for r in other.rows)

    def covolume(self):
        """|det| of the basis (full rank only)."""
        assert self.rank == 4
        d = Fraction(1)
        for r, c in zip(self.rows, self._pivots):
            d *= r[c]
        return abs(d)

    def scaled(self, s):
        s = Fraction(s)
        return canonical_lattice([[s * x for x in r] for r in self.rows])

    def __add__(self, other):
        return canonical_lattice(list(self.rows) + list(other.rows))


def canonical_lattice(generators):
    """Canonical Hermite basis of the lattice spanned by rational vectors."""
    gens = [[Fraction(x) for x in g] for g in generators]
    if not gens:
        raise EmptyInput("no generators")
    d = lcm(*(x.denominator for g in gens for x in g))
    H = hnf_rows([[int(x * d) for x in g] for g in gens])
    if not H:
        raise ZeroLattice("generators span the zero lattice")
    return Lattice(tuple(tuple(Fraction(x, d) for x in r) for r in H))


# ---------------------------------------------------------------------------
# positive definite forms


class GramMatrix:
    """Symmetric positive definite rational matrix; q(v) = v^T G v."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries, check=True):
        E = tuple(tuple(Fraction(x) for x in row) for row in entries)
        self.entries = E
        self.dim = len(E)
        if check:
            if any(len(r) != self.dim for r in E):
                raise ValueError("Gram matrix must be square")
            if any(E[i][j] != E[j][i] for i in range(self.dim) for j in range(i)):
                raise ValueError("Gram matrix must be symmetric")
            if any(m <= 0 for m in _leading_minors(E)):
                raise ValueError("Gram matrix must be positive definite")

    def __call__(self, v):
        E = self.entries
        return sum(E[i][j] * v[i] * v[j] for i in range(self.dim) for j in range(self.dim))

    def scaled(self, s):
        s = Fraction(s)
        return GramMatrix([[s * x for x in r] for r in self.entries], check=False)

    def det(self):
        return det(self.entries)

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"GramMatrix({[[str(x) for x in r] for r in self.entries]})"


def det(M):
    """Exact determinant (fraction-based Gaussian elimination)."""
    A = [[Fraction(x) for x in r] for r in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                t = A[i][c] / A[c][c]
                A[i] = [x - t * y for x, y in zip(A[i], A[c])]
    return d


def _leading_minors(E):
    return [det([r[:k] for r in E[:k]]) for k in range(1, len(E) + 1)]


def _gso(G):
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bb = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j] - sum(mu[j][l] * mu[i][l] * bb[l] for l in range(j))
            mu[i][j] = s / bb[j]
        bb[i] = G[i][i] - sum(mu[i][l] ** 2 * bb[l] for l in range(i))
    return mu, bb


def lll_gram(G, delta=Fraction(3, 4)):
    """LLL-reduce a small Gram matrix.

    Returns (G2, U) with G2 = U^T G U; column k of U holds the coordinates of
    the k-th reduced basis vector. Used only to precondition enumeration.
    """
    n = len(G)
    G = [list(r) for r in G]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def sub(k, j, q):  # b_k -= q b_j
        for i in range(n):
            G[k][i] -= q * G[j][i]
        for i in range(n):
            G[i][k] -= q * G[i][j]
        for i in range(n):
            U[i][k] -= q * U[i][j]

    def swap(k):
        G[k], G[k - 1] = G[k - 1], G[k]
        for r in G:
            r[k], r[k - 1] = r[k - 1], r[k]
        for r in U:
            r[k], r[k - 1] = r[k - 1], r[k]

    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            mu, _ = _gso(G)
            q = round(mu[k][j])
            if q:
                sub(k, j, q)
        mu, bb = _gso(G)
        if bb[k] >= (delta - mu[k][k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return G, U


def _cholesky_data(G):
    """Upper data q with q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(G)
    Q = [[Fraction(x) for x in r] for r in G]
    for i in range(n):
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    return Q


def _int_window(c, r2):
    """Integers x with (x - c)^2 <= r2, as a (lo, hi) pair (possibly empty)."""
    s = sqrt(float(r2)) if r2 > 0 else 0.0
    cf = float(c)
    hi = floor(cf + s) + 1
    while (hi - c) ** 2 > r2 and hi > c:
        hi -= 1
    while (hi + 1 - c) ** 2 <= r2:
        hi += 1
    lo = floor(cf - s) - 1
    while (lo - c) ** 2 > r2 and lo < c:
        lo += 1
    while (lo - 1 - c) ** 2 <= r2:
        lo -= 1
    if (hi - c) ** 2 > r2 or lo > hi:
        return 1, 0
    return lo, hi


def _short_vectors_raw(E, bound):
    """All (value, coords) with value <= bound, coords in the given basis."""
    n = len(E)
    Q = _cholesky_data(E)
    out = []
    x = [0] * n

    def rec(i, remaining, acc):
        c = -sum(Q[i][j] * x[j] for j in range(i + 1, n))
        lo, hi = _int_window(c, remaining / Q[i][i])
        for t in range(lo, hi + 1):
            x[i] = t
            part = Q[i][i] * (t - c) ** 2
            if i == 0:
                out.append((acc + part, tuple(x)))
            else:
                rec(i - 1, remaining - part, acc + part)
        x[i] = 0

    rec(n - 1, Fraction(bound), Fraction(0))
    return out


def short_vectors(g, bound):
    """Sorted list of (value, v) for all integer v with q(v) <= bound."""
    if not isinstance(g, GramMatrix):
        g = GramMatrix(g)
    bound = Fraction(bound)
    if bound < 0:
        return []
    G2, U = lll_gram(g.entries)
    n = g.dim
    res = []
    for val, w in _short_vectors_raw(G2, bound):
        v = tuple(sum(U[i][k] * w[k] for k in range(n)) for i in range(n))
        res.append((val, v))
    res.sort(key=lambda t: t[1])
    return res


def enumerate_by_norm(g, target):
    """Integer vectors v with v^T g v == target, in lexicographic order."""
    target = Fraction(target)
    if target < 0:
        raise ValueError("target must be nonnegative")
    return [v for val, v in short_vectors(g, target) if val == target]


def representation_counts(g, bound):
    """Map value -> number of vectors of that norm, for norms <= bound."""
    counts = {}
    if not isinstance(g, GramMatrix):
        g = GramMatrix(g)
    G2, _ = lll_gram(g.entries)
    for val, _v in _short_vectors_raw(G2, Fraction(bound)):
        counts[val] = counts.get(val, 0) + 1
    return counts


def minimal_positive_norm(g):
    """Least value of q(v) over nonzero integer vectors v."""
    if not isinstance(g, GramMatrix):
        g = GramMatrix(g)
    G2, _ = lll_gram(g.entries)
    bound = min(G2[i][i] for i in range(g.dim))
    vals = [val for val, v in _short_vectors_raw(G2, bound) if any(v)]
    return min(vals)


def has_vector_of_norm(g, target):
    """True iff some integer vector has q(v) == target (early exit)."""
    if not isinstance(g, GramMatrix):
        g = GramMatrix(g)
    G2, _ = lll_gram(g.entries)
    target = Fraction(target)
    return any(val == target for val, _ in _short_vectors_raw(G2, target))


# ---------------------------------------------------------------------------
# rational linear algebra


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(r, c)) for c in Bt] for r in A]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(r, v)) for r in A]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rref(M):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in M]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    piv = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [x - t * y for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == m:
            break
    return A[:r], piv


def nullspace(M, ncols=None):
    """Basis of {x : M x = 0} over Q."""
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    n = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(A, b):
    """One solution x of A x = b over Q, or None."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector, first nonzero > 0."""
    v = [Fraction(x) for x in v]
    d = lcm(*(x.denominator for x in v))
    w = [int(x * d) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        return w
    w = [x // g for x in w]
    first = next(x for x in w if x)
    return [-x for x in w] if first < 0 else w


def box_count(g, bound, radius):
    """Brute-force count of integer vectors in a box with q(v) <= bound (test oracle)."""
    from itertools import product

    if not isinstance(g, GramMatrix):
        g = GramMatrix(g)
    r = range(-radius, radius + 1)
    return sum(1 for v in product(r, repeat=g.dim) if g(v) <= bound)


__all__ = [
    "factorize", "prime_divisors", "is_prime", "is_squarefree", "primes_in",
    "valuation", "kronecker", "legendre", "hilbert_symbol", "ramified_primes",
    "frac_gcd", "hnf_rows", "Lattice", "canonical_lattice", "GramMatrix",
    "det", "lll_gram", "short_vectors", "enumerate_by_norm",
    "representation_counts", "minimal_positive_norm", "has_vector_of_norm",
    "mat_mul", "mat_vec", "identity", "rref", "nullspace", "solve",
    "primitive_integer_vector", "box_count",
]
