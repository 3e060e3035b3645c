"""Embeddings of imaginary quadratic orders into special orders, and the
ideal class map Cl(K) -> Cl(O)."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import canonical_lattice, enumerate_by_norm, factorize
from .errors import ClassificationFailed, NotAdmissible, PrimeNotDividingLevel
from .quadfield import class_group, ideal_norm_coprime_form, splitting
from .quatalg import (
    ClassSetData, QAlgebra, QOrder, RightIdeal, class_invariant, ideal_inverse,
    ideal_product,
)


def admissible(K, lt):
    """(ok, reason) for o_K embedding in some special order of type lt."""
    for p, e in factorize(lt.N1):
        s = splitting(K, p)
        if s == "split":
            return False, f"{K} splits at {p} | N1"
        if e > 1 and s == "ramified":
            return False, f"{K} ramifies at {p} with {p}^3 | N1"
    for p, _ in factorize(lt.N2):
        if splitting(K, p) != "ramified":
            return False, f"{K} is not ramified at {p} | N2"
    for p, _ in factorize(lt.M):
        if splitting(K, p) == "inert":
            return False, f"{K} is inert at {p} | M"
    return True, "admissible"


def require_admissible(K, lt):
    ok, why = admissible(K, lt)
    if not ok:
        raise NotAdmissible(why)


def split_at_M(K, lt):
    return all(splitting(K, p) == "split" for p, _ in factorize(lt.M))


def local_embedding_count(K, p, lt):
    part = lt.part(p)
    if part is None:
        raise PrimeNotDividingLevel(f"{p} does not divide N = {lt.N}")
    s = splitting(K, p)
    if part == "N1":
        if s == "inert":
            return 2
        if s == "ramified":
            return 1 if lt.ord_N1(p) == 1 else 0
        return 0
    if part == "N2":
        return p + 1 if s == "ramified" else 0
    return {"inert": 0, "ramified": 1, "split": 2}[s]


# ---------------------------------------------------------------------------
# global embeddings


def _elements(L, coords):
    rows = L.rows
    return [tuple(sum(c * r[k] for c, r in zip(v, rows)) for k in range(4)) for v in coords]


def units(B, order):
    L = order.basis if isinstance(order, QOrder) else order
    return _elements(L, enumerate_by_norm(B.gram(L), 1))


def generator_candidates(B, order, K):
    """Elements of the order with the trace and norm of omega_K."""
    L = order.basis if isinstance(order, QOrder) else order
    t, n = K.omega()
    return [x for x in _elements(L, enumerate_by_norm(B.gram(L), n)) if 2 * x[0] == t]


def embedding_count(B, order, K):
    """#Emb(o_K, order) modulo conjugation by the unit group."""
    xs = generator_candidates(B, order, K)
    us = units(B, order)
    seen = set()
    orbits = 0
    for x in xs:
        if x in seen:
            continue
        orbits += 1
        for u in us:
            seen.add(B.mul(B.mul(u, x), QAlgebra.conj(u)))
    return orbits


def check_global_embedding_identity(K, cs):
    """(holds, lhs, rhs) for the sum of global embedding numbers over Cl(O)."""
    require_admissible(K, cs.level)
    B = cs.algebra
    lhs = sum(embedding_count(B, O, K) for O in cs.left_orders)
    rhs = K.h_K
    for p in cs.level.primes():
        rhs *= local_embedding_count(K, p, cs.level)
    return lhs == rhs, lhs, rhs


def rebase(cs, i):
    """The same class set viewed from O_l(I_i): J_j = I_j I_i^{-1}."""
    if i == 0:
        return cs
    B = cs.algebra
    Ii = cs.ideals[i]
    inv = ideal_inverse(B, Ii)
    ideals = []
    for Ij in cs.ideals:
        L = ideal_product(B, Ij, inv)
        ideals.append(RightIdeal(L, Ij.norm / Ii.norm))
    base = QOrder(B, cs.left_orders[i].basis, cs.level)
    new = ClassSetData(
        B, base, ideals, list(cs.left_orders), list(cs.weights), cs.level,
        cs.bfs_primes, cs.coprime_to, cs._theta, cs._brandt,
    )
    new.__dict__["_inv"] = [class_invariant(B, J) for J in ideals]
    new.__dict__["base_index"] = i
    return new


@dataclass
class Embedding:
    field: object
    generator: tuple
    class_set: ClassSetData
    base_index: int = 0

    @property
    def sqrt_disc(self):
        """Image of sqrt(D_K): s = 2x - trace, with s^2 = D_K."""
        t, _ = self.field.omega()
        return tuple(2 * c - (t if k == 0 else 0) for k, c in enumerate(self.generator))


def find_embedding(K, cs):
    """An element generating o_K inside the base order, re-basing if needed."""
    require_admissible(K, cs.level)
    B = cs.algebra
    for i, O in enumerate(cs.left_orders):
        xs = generator_candidates(B, O, K)
        if xs:
            return Embedding(K, xs[0], rebase(cs, i), i)
    raise NotAdmissible(f"o_K for {K} embeds in no left order (embedding numbers vanish)")


@dataclass
class ClassMapData:
    field: object
    generator_image: tuple
    fibers: list
    images: dict
    class_set: ClassSetData = field(repr=False, default=None)
    base_index: int = 0

    def image(self, t):
        return self.images[t]

    def divisor(self, chi=None):
        """c_{K,chi} = sum_t chi(t) x(t), as a list of cyclotomic values."""
        from .cyclotomic import Cyclo

        out = [Cyclo.rational(0) for _ in self.fibers]
        for t, i in self.images.items():
            out[i] = out[i] + (chi(t) if chi is not None else 1)
        return out


def ideal_lattice(emb, a, b):
    """iota(Z a + Z (-b + sqrt D)/2) * O for the current base order."""
    s = emb.sqrt_disc
    gen2 = tuple(Fraction(-b * (k == 0) + s[k], 2) for k in range(4))
    gen1 = (Fraction(a), Fraction(0), Fraction(0), Fraction(0))
    B = emb.class_set.algebra
    rows = emb.class_set.order.basis.rows
    return canonical_lattice([B.mul(g, r) for g in (gen1, gen2) for r in rows])


def class_map(emb):
    cs, K = emb.class_set, emb.field
    forms, _ = class_group(K)
    modulus = cs.level.N * abs(K.D_K)
    fibers = [0] * cs.n
    images = {}
    for t in forms:
        a, b, _c = ideal_norm_coprime_form(K, t, modulus)
        J = RightIdeal(ideal_lattice(emb, a, b), Fraction(a))
        i = cs.classify(J)
        if i is None:
            raise ClassificationFailed(f"class of {t} not among the representatives")
        images[t] = i
        fibers[i] += 1
    return ClassMapData(K, emb.generator, fibers, images, cs, emb.base_index)


def class_map_for(K, cs):
    return class_map(find_embedding(K, cs))


# ---------------------------------------------------------------------------
# balanced orders and stability


def balanced_criterion(lt):
    N1p = [p for p, _ in factorize(lt.N1)]
    Mp = [p for p, _ in factorize(lt.M)]
    one = (
        any(p % 4 == 1 for p in N1p) or any(p % 4 == 3 for p in Mp)
        or lt.N2 not in (1, 4) or lt.N1 % 8 == 0
    )
    two = (
        any(p % 3 == 1 for p in N1p) or any(p % 3 == 2 for p in Mp)
        or lt.N2 not in (1, 9) or lt.N1 % 27 == 0
    )
    return one and two


@dataclass(frozen=True)
class StabilityReport:
    status: str
    balanced: bool
    sum_wh: int
    lemma_condition: bool


def stability_status(cmd, cs=None):
    cs = cs or cmd.class_set
    K = cmd.field
    h, w = cmd.fibers, cs.weights
    semi = all(x <= 1 for x in h)
    stable = semi and all(wi == K.u_K for hi, wi in zip(h, w) if hi == 1)
    status = "stable" if stable else "semistable" if semi else "unstable"
    D_B = cs.level.D_B
    cond = D_B > abs(K.D_K) and gcd(D_B, K.D_K) == 1
    return StabilityReport(
        status, all(x == 1 for x in w), sum(a * b for a, b in zip(w, h)), cond,
    )
