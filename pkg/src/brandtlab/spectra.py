"""Functions on Cl(O): Eisenstein and cuspidal subspaces, Hecke eigensystems,
periods over Cl(K) and local types of eigensystems."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import mpmath
from sympy import Matrix, Poly, Rational, eye, factor_list, symbols, zeros

from .arith import factorize, is_prime, legendre
from .cyclotomic import Cyclo
from .errors import AmbiguousType, PrecisionLoss
from .quatalg import brandt, class_set, validate_level

_x = symbols("x")
NUMERIC_DPS = 64
GROUP_TOL = mpmath.mpf("1e-9")
CHECK_TOL = mpmath.mpf("1e-8")


# ---------------------------------------------------------------------------
# the weighted space


def inner(cs, phi, psi):
    """(phi, psi) = sum phi_i conj(psi_i) / w_i."""
    tot = 0
    for a, b, w in zip(phi, psi, cs.weights):
        if isinstance(b, Cyclo):
            b = b.conj()
        elif isinstance(b, mpmath.mpc):
            b = b.conjugate()
        if isinstance(a, (mpmath.mpf, mpmath.mpc)) or isinstance(b, (mpmath.mpf, mpmath.mpc)):
            tot = tot + a * b / w
        else:
            tot = tot + a * b * Fraction(1, w)
    return tot


def norm2(cs, phi):
    return inner(cs, phi, phi)


def apply(A, phi):
    """(A phi)_i = sum_j a_ij phi_j."""
    n = len(phi)
    return [sum((A[i, j] * phi[j] for j in range(n) if A[i, j]), Fraction(0)) for i in range(n)]


def height_pairing(c, d, cs):
    """<c, d> = sum w_i c_i conj(d_i)."""
    tot = Cyclo.rational(0)
    for ci, di, w in zip(c, d, cs.weights):
        ci = ci if isinstance(ci, Cyclo) else Cyclo.rational(ci)
        di = di if isinstance(di, Cyclo) else Cyclo.rational(di)
        tot = tot + ci * di.conj() * w
    return tot


def _norm_symbol(q, p):
    q = Fraction(q)
    return legendre(q.numerator * q.denominator, p)


def eisenstein_basis(cs):
    """phi_S(x_i) = prod_{p in S} (nrd I_i | p) over subsets S of odd p | N2."""
    ps = cs.level.odd_N2_primes
    out = []
    for k in range(len(ps) + 1):
        for S in combinations(ps, k):
            v = []
            for I in cs.ideals:
                s = 1
                for p in S:
                    s *= _norm_symbol(I.norm, p)
                v.append(Fraction(s))
            out.append(v)
    return out


def _to_matrix(vectors):
    return Matrix([[Rational(x.numerator, x.denominator) for x in v] for v in vectors]).T


def _from_column(col):
    return [Fraction(int(c.p), int(c.q)) for c in col]


def orthogonalize(cs, vectors):
    """Weighted Gram-Schmidt, exact."""
    out = []
    for v in vectors:
        v = list(v)
        for u in out:
            c = inner(cs, v, u) / norm2(cs, u)
            v = [a - c * b for a, b in zip(v, u)]
        if any(v):
            out.append(_primitive(v))
    return out


def _primitive(v):
    from math import gcd, lcm

    d = lcm(*(x.denominator for x in v))
    ints = [int(x * d) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    first = next(a for a in ints if a)
    s = 1 if first > 0 else -1
    return [Fraction(s * a, g) for a in ints]


def cuspidal_basis(cs):
    """Rational basis of the weighted orthogonal complement of Eis."""
    eis = eisenstein_basis(cs)
    rows = [[e / w for e, w in zip(v, cs.weights)] for v in eis]
    M = _to_matrix(rows).T
    return [_primitive(_from_column(c)) for c in M.nullspace()]


# ---------------------------------------------------------------------------
# eigensystems


def default_hecke_primes(lt, count=8, hecke_max=None):
    out = []
    q = 1
    while len(out) < count:
        q += 1
        if hecke_max is not None and q > hecke_max and out:
            break
        if is_prime(q) and lt.N % q:
            out.append(q)
    return out


def brandt_sympy(cs, m):
    A = brandt(cs, m)
    return Matrix([[Rational(x.numerator, x.denominator) for x in r] for r in A.entries])


def _restrict(A, V):
    """R with A V = V R (columns of V span an A-stable subspace)."""
    AV = A * V
    G = V.T * V
    R = G.inv() * (V.T * AV)
    if V * R != AV:
        raise ArithmeticError("subspace is not stable")
    return R


def _poly_at(coeffs, R):
    k = R.shape[0]
    out = zeros(k, k)
    for c in coeffs:
        out = out * R + c * eye(k)
    return out


def _split(V, A):
    """Split span(V) along the rational factors of the char poly of A|V."""
    R = _restrict(A, V)
    cp = Poly(R.charpoly(_x).as_expr(), _x)
    _, facs = factor_list(cp)
    if len(facs) == 1:
        g = Poly(facs[0][0], _x).monic()
        return [(V, tuple(Fraction(str(c)) for c in g.all_coeffs()))]
    parts = []
    for g, _e in facs:
        g = Poly(g, _x).monic()
        coeffs = [Rational(c) for c in g.all_coeffs()]
        ker = _poly_at(coeffs, R).nullspace()
        W = V * Matrix.hstack(*ker)
        parts.append((W, tuple(Fraction(str(c)) for c in coeffs)))
    return parts


@dataclass
class Eigensystem:
    """A Q-rational piece of M(O): a Galois orbit of Hecke eigensystems.

    ``basis`` is an exact weighted-orthogonal basis of the whole piece; for
    degree 1 it is an orthogonal eigenbasis. ``polys`` maps m to the minimal
    polynomial of T_m on the piece (monic, highest degree first).
    """

    basis: list
    polys: dict
    degree: int
    multiplicity: int
    is_eisenstein: bool = False
    local_types: dict = field(default_factory=dict)
    exponents: dict = field(default_factory=dict)
    exact_level: int = None
    label: str = ""
    _cs: object = field(default=None, repr=False)
    _numeric: list = field(default=None, repr=False)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def is_rational(self):
        return self.degree == 1

    def eigenvalue(self, m):
        """Exact eigenvalue of T_m (rational pieces only)."""
        if not self.is_rational:
            raise ValueError("eigensystem is not rational; use polynomial(m)")
        if m in self.polys:
            return -self.polys[m][1]
        A = brandt(self._cs, m)
        phi = self.basis[0]
        Aphi = [sum(A.entries[i][j] * phi[j] for j in range(len(phi))) for i in range(len(phi))]
        i = next(k for k, x in enumerate(phi) if x)
        lam = Aphi[i] / phi[i]
        for v in self.basis:
            Av = [sum(A.entries[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
            if Av != [lam * x for x in v]:
                raise AmbiguousType(f"T_{m} is not scalar on the eigenspace")
        self.polys[m] = (Fraction(1), -lam)
        return lam

    def polynomial(self, m):
        """Minimal polynomial of T_m on the piece."""
        if m not in self.polys:
            A = brandt_sympy(self._cs, m)
            V = _to_matrix(self.basis)
            parts = _split(V, A)
            if len(parts) != 1:
                raise AmbiguousType(f"T_{m} splits the eigensystem further")
            self.polys[m] = parts[0][1]
        return self.polys[m]

    def signature(self, qs, twist=None):
        out = []
        for q in qs:
            c = self.polynomial(q)
            if twist is not None:
                e = twist(q)
                d = len(c) - 1
                c = tuple(a * e ** k for k, a in enumerate(c))  # g(e x) e^d, e = +-1
            out.append(c)
        return tuple(out)

    def eigenvalue_summary(self):
        if self.is_rational:
            return {m: self.eigenvalue(m) for m in sorted(self.polys)}
        return {m: self.polys[m] for m in sorted(self.polys)}

    def numeric_conjugates(self):
        """[(eigenvalues {m: mpf}, [vectors])] for each conjugate system."""
        if self._numeric is None:
            self._numeric = _numeric_split(self)
        return self._numeric


def _numeric_split(es):
    cs = es._cs
    mpmath.mp.dps = NUMERIC_DPS
    basis = es.basis
    k = len(basis)
    nrm = [norm2(cs, v) for v in basis]
    scale = [mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator) for x in nrm]
    ms = sorted(es.polys)
    V = _to_matrix(basis)
    comb = None
    mats = {}
    for t, m in enumerate(ms):
        R = _restrict(brandt_sympy(cs, m), V)
        S = mpmath.matrix(k, k)
        for i in range(k):
            for j in range(k):
                S[i, j] = scale[i] * mpmath.mpf(R[i, j].p) / R[i, j].q / scale[j]
        mats[m] = S
        c = (t + 2) ** 2
        comb = S * c if comb is None else comb + S * c
    sym = (comb + comb.T) / 2
    E, Q = mpmath.eigsy(sym)
    opnorm = max(abs(E[i]) for i in range(k)) or 1
    order = sorted(range(k), key=lambda i: E[i])
    groups, cur = [], [order[0]]
    for a, b in zip(order, order[1:]):
        if abs(E[b] - E[a]) <= GROUP_TOL * opnorm:
            cur.append(b)
        else:
            groups.append(cur)
            cur = [b]
    groups.append(cur)
    if len(groups) != es.degree or any(len(g) != es.multiplicity for g in groups):
        raise PrecisionLoss("numeric eigenvalues could not be grouped into conjugate systems")
    out = []
    for g in groups:
        vecs = []
        lams = {}
        for col in g:
            y = [Q[i, col] / scale[i] for i in range(k)]
            phi = [sum(y[j] * basis[j][r] for j in range(k)) for r in range(len(basis[0]))]
            phi = [mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x for x in phi]
            vecs.append(phi)
        for m, S in mats.items():
            u = mpmath.matrix([Q[i, g[0]] for i in range(k)])
            lam = (u.T * S * u)[0, 0]
            for col in g:
                w = mpmath.matrix([Q[i, col] for i in range(k)])
                if mpmath.norm(S * w - lam * w) > CHECK_TOL * max(1, abs(lam)):
                    raise PrecisionLoss(f"T_{m} residual above tolerance")
            lams[m] = lam
        out.append((lams, vecs))
    return out


def _eigen_from_vector(cs, v, ms):
    polys = {}
    for m in ms:
        A = brandt(cs, m)
        Av = [sum(A.entries[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
        i = next(k for k, x in enumerate(v) if x)
        lam = Av[i] / v[i]
        if Av != [lam * x for x in v]:
            raise ArithmeticError("Eisenstein vector is not an eigenvector")
        polys[m] = (Fraction(1), -lam)
    return polys


def eigensystems(cs, hecke_indices=None):
    """Eisenstein systems followed by cuspidal Q-pieces."""
    lt = cs.level
    if hecke_indices is None:
        hecke_indices = default_hecke_primes(lt)
    ms = sorted(set(hecke_indices))
    for m in ms:
        from math import gcd

        if gcd(m, lt.N1prime * lt.N2) != 1:
            raise ValueError(f"Hecke index {m} is not coprime to N1'N2")
    out = []
    for k, v in enumerate(eisenstein_basis(cs)):
        es = Eigensystem([v], _eigen_from_vector(cs, v, ms), 1, 1, True, label=f"eis{k}", _cs=cs)
        out.append(es)
    cusp = cuspidal_basis(cs)
    if not cusp:
        return out
    pieces = [(_to_matrix(cusp), {})]
    split_ms = [m for m in ms if lt.M % m]  # T_p for p | M would split old spaces
    for m in split_ms:
        A = brandt_sympy(cs, m)
        nxt = []
        for V, pol in pieces:
            for W, g in _split(V, A):
                nxt.append((W, {**pol, m: g}))
        pieces = nxt
    # a generic combination separates systems with equal minimal polynomials
    comb = zeros(cs.n, cs.n)
    for t, m in enumerate(split_ms):
        comb += (t + 2) ** 2 * brandt_sympy(cs, m)
    final = []
    for V, pol in pieces:
        for W, g in _split(V, comb):
            final.append((W, pol, len(g) - 1))
    for V, pol, deg in final:
        vecs = [_from_column(V[:, j]) for j in range(V.shape[1])]
        basis = orthogonalize(cs, vecs)
        if len(basis) % deg:
            raise AmbiguousType("piece dimension is not a multiple of its degree")
        es = Eigensystem(basis, dict(pol), deg, len(basis) // deg, False, _cs=cs)
        out.append(es)
    cusp_out = [e for e in out if not e.is_eisenstein]
    cusp_out.sort(key=lambda e: (e.degree, e.multiplicity, _sortkey(e)))
    for k, e in enumerate(cusp_out):
        e.label = f"f{k + 1}"
    return [e for e in out if e.is_eisenstein] + cusp_out


def _sortkey(e):
    return tuple(tuple(e.polys[m]) for m in sorted(e.polys))


def cuspidal_systems(systems):
    return [e for e in systems if not e.is_eisenstein]


def orthogonal_eigenbasis(systems):
    """All rational eigenvectors; pieces of degree > 1 contribute their Q-basis."""
    return [v for e in systems for v in e.basis]


# ---------------------------------------------------------------------------
# periods


def period(phi, cmd, chi=None):
    """P_{K,chi}(phi) = sum_t phi(x(t)) chi^{-1}(t)."""
    if all(isinstance(a, (int, Fraction)) for a in phi):
        tot = Cyclo.rational(0)
        for t, i in cmd.images.items():
            if phi[i]:
                z = chi.inverse_value(t) if chi is not None else 1
                tot = tot + z * phi[i]
        return tot
    tot = mpmath.mpc(0)
    for t, i in cmd.images.items():
        z = complex(chi.inverse_value(t)) if chi is not None else 1
        tot += phi[i] * z
    return tot


def period_ratio(phi, cmd, chi=None):
    """|P_{K,chi}(phi)|^2 / (phi, phi)."""
    cs = cmd.class_set
    P = period(phi, cmd, chi)
    if isinstance(P, Cyclo):
        return P.abs2().to_fraction() / norm2(cs, phi)
    return abs(P) ** 2 / norm2(cs, phi)


def period_average(vectors, cmd, chi=None, T=None):
    """sum_phi P(T phi) conj P(phi) / (phi, phi) over an orthogonal family."""
    cs = cmd.class_set
    tot = Fraction(0)
    for phi in vectors:
        P = period(phi, cmd, chi)
        if T is None:
            num = P.abs2().to_fraction()
        else:
            num = (period(apply(T, phi), cmd, chi) * P.conj()).to_fraction()
        tot += num / norm2(cs, phi)
    return tot


def system_period_sum(es, cmd, chi=None):
    """sum over the eigenspace of |P|^2/(phi,phi); for a piece of degree d > 1
    this is the sum over all d conjugate systems."""
    return period_average(es.basis, cmd, chi)


def conjugate_period_sums(es, cmd, chi=None):
    """Numeric per-conjugate period sums for an irrational piece."""
    out = []
    for lams, vecs in es.numeric_conjugates():
        out.append((lams, sum(period_ratio(v, cmd, chi) for v in vecs)))
    return out


def column_orthogonality_check(cs, m, vectors=None, tol=None):
    """sum_phi (T phi)_i conj(phi_j) / (phi, phi) == w_j a_ij for all i, j."""
    A = brandt(cs, m)
    S = brandt_sympy(cs, m)
    if vectors is None:
        vectors = orthogonalize(cs, eisenstein_basis(cs) + cuspidal_basis(cs))
    n = cs.n
    for i in range(n):
        for j in range(n):
            tot = Fraction(0)
            for phi in vectors:
                Tphi_i = sum(A.entries[i][k] * phi[k] for k in range(n))
                tot += Tphi_i * phi[j] / norm2(cs, phi)
            if tot != cs.weights[j] * A.entries[i][j]:
                return False
    return True


def parseval_check(phi, cmd, chars):
    """sum_chi |P_chi(phi)|^2 == h_K sum_i h_i |phi(x_i)|^2."""
    lhs = Fraction(0)
    for chi in chars:
        lhs += period(phi, cmd, chi).abs2().to_fraction()
    rhs = len(chars) * sum(h * a * a for h, a in zip(cmd.fibers, phi))
    return lhs == rhs, lhs, rhs


# ---------------------------------------------------------------------------
# local types


@lru_cache(maxsize=None)
def _systems_at(N1, N2, M, qs):
    cs = class_set(N1, N2, M)
    return cs, eigensystems(cs, list(qs))


def level_systems(lt, qs=None):
    """(class set, eigensystems) at lt, split by the primes qs."""
    if qs is None:
        qs = default_hecke_primes(lt)
    return _systems_at(lt.N1, lt.N2, lt.M, tuple(sorted(qs)))


def _occurrences(es, others, qs, twist=None):
    sig = es.signature(qs, twist)
    return [o for o in others if not o.is_eisenstein and o.signature(qs) == sig]


def sublevel(lt, p, kind, r=None):
    if kind == "N2":
        return validate_level(lt.N1 * p, lt.N2 // (p * p), lt.M)
    if kind == "M":
        return validate_level(lt.N1, lt.N2, lt.M // p)
    e = lt.ord_N1(p)
    return validate_level(lt.N1 // p ** (e - r), lt.N2, lt.M)


def classify_local_types(systems, lt, qs=None):
    """Fill local_types, exponents and exact_level on the cuspidal systems."""
    if qs is None:
        qs = default_hecke_primes(lt)
    qs = tuple(sorted(qs))
    cusp = cuspidal_systems(systems)
    for es in cusp:
        es.local_types, es.exponents = {}, {}
    for p, e in factorize(lt.N1):
        for es in cusp:
            r_found = e
            for r in range(1, e, 2):
                _, sub = level_systems(sublevel(lt, p, "N1", r), qs)
                hits = _occurrences(es, sub, qs)
                if len(hits) > 1:
                    raise AmbiguousType(f"{es.label} matches several systems at exponent {r}")
                if hits:
                    r_found = r
                    break
            es.exponents[p] = r_found
            es.local_types[p] = "one-dim-at-DB" if r_found == 1 else "supercuspidal"
    for p, _ in factorize(lt.N2):
        _, sub = level_systems(sublevel(lt, p, "N2"), qs)
        for es in cusp:
            hits = _occurrences(es, sub, qs)
            twist_hits = _occurrences(es, sub, qs, twist=lambda q, p=p: legendre(q, p))
            if len(hits) > 1 or len(twist_hits) > 1 or (hits and twist_hits):
                raise AmbiguousType(f"{es.label} at {p}: ambiguous sublevel match")
            if hits:
                es.local_types[p], es.exponents[p] = "unram-steinberg", 1
            elif twist_hits:
                es.local_types[p], es.exponents[p] = "ram-steinberg", 2
            else:
                es.local_types[p], es.exponents[p] = "supercuspidal", 2
    for p, _ in factorize(lt.M):
        _, sub = level_systems(sublevel(lt, p, "M"), qs)
        for es in cusp:
            hits = _occurrences(es, sub, qs)
            if len(hits) > 1:
                raise AmbiguousType(f"{es.label} at {p}: ambiguous sublevel match")
            if hits:
                es.local_types[p], es.exponents[p] = "eichler-old", 0
                es.__dict__.setdefault("old_partner", {})[p] = hits[0]
            else:
                es.local_types[p], es.exponents[p] = "eichler-new", 1
    for es in cusp:
        Nf = 1
        for p, x in es.exponents.items():
            Nf *= p ** x
        es.exact_level = Nf
        if lt.N1prime == 1:
            expect = 1
            for p, t in es.local_types.items():
                if t in ("supercuspidal", "eichler-old"):
                    expect *= 2
            if es.multiplicity != expect:
                raise AmbiguousType(
                    f"{es.label}: multiplicity {es.multiplicity} but local types predict {expect}"
                )
    return cusp


def old_eigenvalue(es, p):
    """a_p of the newform behind an M-old system, from the sublevel."""
    partner = es.__dict__["old_partner"][p]
    if partner.is_rational:
        return partner.eigenvalue(p)
    return partner.polynomial(p)


@dataclass
class SpectralData:
    class_set: object
    systems: list
    hecke: tuple

    @property
    def cuspidal(self):
        return cuspidal_systems(self.systems)

    @property
    def eisenstein(self):
        return [e for e in self.systems if e.is_eisenstein]


@lru_cache(maxsize=None)
def spectral_data(N1, N2, M, hecke=None, classify=True):
    lt = validate_level(N1, N2, M)
    qs = tuple(sorted(hecke)) if hecke else tuple(default_hecke_primes(lt))
    cs, systems = level_systems(lt, qs)
    if classify:
        classify_local_types(systems, lt, qs)
    return SpectralData(cs, systems, qs)
