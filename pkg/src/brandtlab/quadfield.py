"""Imaginary quadratic fields via reduced binary quadratic forms."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm

from .arith import factorize, is_squarefree, kronecker
from .cyclotomic import Cyclo
from .errors import InertPrime, NotNegative, NotSquarefree


@dataclass(frozen=True)
class ImagQuadField:
    d: int
    D_K: int
    u_K: int

    @property
    def h_K(self):
        return len(class_group(self)[0])

    def omega(self):
        """(trace, norm) of the standard generator of the ring of integers."""
        if self.D_K % 4 == 0:
            return 0, -self.D_K // 4
        return 1, (1 - self.D_K) // 4

    def __str__(self):
        return f"Q(sqrt({self.d}))"


def make_field(d):
    d = int(d)
    if d >= 0:
        raise NotNegative(f"d = {d} is not negative")
    if not is_squarefree(d):
        raise NotSquarefree(f"d = {d} is not squarefree")
    D = d if d % 4 == 1 else 4 * d
    u = 3 if D == -3 else 2 if D == -4 else 1
    return ImagQuadField(d, D, u)


def field_from_discriminant(D):
    d = D if D % 4 else D // 4
    K = make_field(d)
    if K.D_K != D:
        raise ValueError(f"{D} is not a fundamental discriminant")
    return K


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True, order=True)
class KIdealClass:
    """A reduced primitive positive definite form (a, b, c)."""

    a: int
    b: int
    c: int

    @property
    def form(self):
        return (self.a, self.b, self.c)

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def reduce_form(a, b, c):
    D = b * b - 4 * a * c
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            b += 2 * a * k
            c = (b * b - D) // (4 * a)
        if c < a:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return KIdealClass(a, b, c)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f, g):
    """Gaussian composition of two forms of the same discriminant, reduced."""
    a1, b1, c1 = f.form
    a2, b2, c2 = g.form
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, v = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    D = f.disc
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(a3, b3, c3)


def inverse(f):
    return reduce_form(f.a, -f.b, f.c)


def principal_form(D):
    if D % 4 == 0:
        return KIdealClass(1, 0, -D // 4)
    return KIdealClass(1, 1, (1 - D) // 4)


def reduced_forms(D):
    out = []
    amax = isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(KIdealClass(a, b, c))
    return out


# ---------------------------------------------------------------------------
# the class group and its characters


@dataclass(frozen=True)
class ClassChar:
    """A character of Cl(K): chi(t) = exp(2 pi i * exponent(t)).

    ``gens``/``gen_exponents`` record the images of the polycyclic generators
    used to build the table, ``table`` the exponent (mod 1) on every class.
    """

    gens: tuple
    gen_exponents: tuple
    table: tuple  # ((KIdealClass, Fraction), ...)

    @property
    def order(self):
        return lcm(*(e.denominator for _, e in self.table))

    def exponent(self, t):
        return dict(self.table)[t]

    def is_trivial(self):
        return all(e == 0 for _, e in self.table)

    def __call__(self, t):
        e = self.exponent(t)
        return Cyclo.root(e.numerator, e.denominator)

    def inverse_value(self, t):
        e = self.exponent(t)
        return Cyclo.root(-e.numerator, e.denominator)

    def label(self):
        if self.is_trivial():
            return "1"
        return "chi[" + ",".join(str(e) for e in self.gen_exponents) + "]"


@lru_cache(maxsize=None)
def _group_data(D):
    forms = reduced_forms(D)
    e = principal_form(D)
    # polycyclic presentation
    H = {e: ()}
    gens = []
    for g in forms:
        if g in H:
            continue
        k, x = 1, g
        while x not in H:
            x = compose(x, g)
            k += 1
        rel = H[x]
        newH = {}
        powg = e
        for s in range(k):
            for hx, ex in H.items():
                newH[compose(hx, powg)] = ex + (0,) * (len(gens) - len(ex)) + (s,)
            powg = compose(powg, g)
        H = {t: ex for t, ex in newH.items()}
        gens.append((g, k, rel))
    m = len(gens)
    H = {t: ex + (0,) * (m - len(ex)) for t, ex in H.items()}
    # characters from the presentation
    chars = [()]
    for g, k, rel in gens:
        nxt = []
        for ch in chars:
            base = sum((Fraction(r) * ch[j] for j, r in enumerate(rel)), Fraction(0))
            for t in range(k):
                nxt.append(ch + (((base + t) / k) % 1,))
        chars = nxt
    out = []
    for ch in chars:
        table = tuple(
            (t, sum((Fraction(s) * ch[j] for j, s in enumerate(H[t])), Fraction(0)) % 1)
            for t in forms
        )
        out.append(ClassChar(tuple(g for g, _, _ in gens), ch, table))
    out.sort(key=lambda c: (c.order, [e for _, e in c.table]))
    return tuple(forms), _structure(forms, D), tuple(out)


def _order(f, D):
    e = principal_form(D)
    k, x = 1, f
    while x != e:
        x = compose(x, f)
        k += 1
    return k


def _structure(forms, D):
    """Invariant factors, from counts of elements killed by prime powers."""
    h = len(forms)
    if h == 1:
        return []
    orders = [_order(f, D) for f in forms]
    parts = {}
    for q, a in factorize(h):
        counts = [sum(1 for o in orders if (q**j) % o == 0) for j in range(a + 1)]
        # counts[j] = q^(sum_i min(j, a_i)); recover the partition a_i
        logs = [_log(c, q) for c in counts]
        ranks = [logs[j] - logs[j - 1] for j in range(1, len(logs))]  # #{i: a_i >= j}
        exps = []
        for j in range(len(ranks)):
            nxt = ranks[j + 1] if j + 1 < len(ranks) else 0
            exps += [j + 1] * (ranks[j] - nxt)
        parts[q] = sorted(exps, reverse=True)
    width = max(len(v) for v in parts.values())
    inv = []
    for i in range(width):
        n = 1
        for q, ex in parts.items():
            if i < len(ex):
                n *= q ** ex[i]
        inv.append(n)
    return sorted(inv)


def _log(c, q):
    k = 0
    while c > 1:
        c //= q
        k += 1
    return k


def class_group(K):
    """(reduced forms, invariant factors) for Cl(K)."""
    forms, struct, _ = _group_data(K.D_K)
    return list(forms), struct


def characters(K):
    return list(_group_data(K.D_K)[2])


def splitting(K, p):
    D = K.D_K
    if D % p == 0:
        return "ramified"
    return "split" if kronecker(D, p) == 1 else "inert"


def prime_class(K, p):
    """Class of a fixed prime above p: the form (p, b, *) with b >= 0 minimal."""
    if splitting(K, p) == "inert":
        raise InertPrime(f"{p} is inert in {K}")
    D = K.D_K
    for b in range(0, 2 * p + 1):
        if (b - D) % 2 == 0 and (b * b - D) % (4 * p) == 0:
            return reduce_form(p, b, (b * b - D) // (4 * p))
    raise AssertionError("no prime form found")


def ideal_norm_coprime_form(K, t, modulus):
    """A form (a, b, c) properly equivalent to t with gcd(a, modulus) = 1.

    Found by applying (x, y) -> (x + k y, y) substitutions after swapping, which
    keeps the proper class; small k suffice in practice.
    """
    a, b, c = t.form
    if gcd(a, modulus) == 1:
        return a, b, c
    for x in range(0, 60):
        for y in range(1, 60):
            if gcd(x, y) != 1:
                continue
            n = a * x * x + b * x * y + c * y * y
            if gcd(n, modulus) != 1:
                continue
            # complete (x, y) to a matrix [[x, r], [y, s]] of det 1
            g, s0, r0 = _xgcd(x, y)
            r, s = -r0, s0
            assert x * s - r * y == 1
            A = n
            B = 2 * a * x * r + b * (x * s + r * y) + 2 * c * y * s
            C = a * r * r + b * r * s + c * s * s
            assert B * B - 4 * A * C == t.disc
            assert reduce_form(A, B, C) == t
            return A, B, C
    raise AssertionError("no coprime representative found")
