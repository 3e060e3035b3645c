"""Acceptance run: the four worked examples, the property suite, the degenerate
level 13 probe and the nonvanishing certificates.

    pytest tests/test_acceptance.py -v
    python tests/test_acceptance.py

One PASS/FAIL line per criterion is printed at the end of the session.
"""

import time
from fractions import Fraction
from math import gcd

import pytest

from brandtlab import formulas as F
from brandtlab.arith import factorize, primes_in
from brandtlab.embeddings import admissible, check_global_embedding_identity, class_map_for
from brandtlab.errors import NotAdmissible
from brandtlab.quadfield import characters, class_group, make_field
from brandtlab.quatalg import brandt, class_set, mass, validate_level
from brandtlab.spectra import column_orthogonality_check, parseval_check, spectral_data
from oracles import eichler_ideal_count, sigma1

K = make_field
L = validate_level


class Timer:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.secs = time.perf_counter() - self.t


def test_criterion_1_level_11():
    with Timer() as t:
        cs = class_set(11, 1, 1)
        lt = L(11, 1, 1)
        K4, K11 = K(-1), K(-11)
        f = spectral_data(11, 1, 1).cuspidal[0]
        triv = characters(K4)[0]
        ratio = F.period_total(lt, K4, triv)
        a = F.predicted_lvalue(f, K4, triv)
        b = F.predicted_lvalue(f, K11, characters(K11)[0])
    assert cs.n == 2 and cs.weights == [2, 3]
    assert list(class_map_for(K4, cs).fibers) == [1, 0]
    assert ratio == Fraction(4, 5)
    assert (a.coeff, a.disc) == (Fraction(4, 5), 1) and str(a) == "4π²/5"
    r = F.predicted_ratio(b, a)
    assert (r.coeff, r.disc) == (Fraction(4, 11), 11) and str(r) == "4/√11"
    assert t.secs < 5


def test_criterion_2_level_22():
    with Timer() as t:
        lt = L(11, 1, 2)
        cs = class_set(11, 1, 2)
        k = K(-15)
        triv, chi = characters(k)
        f = spectral_data(11, 1, 2).cuspidal[0]
        fib = list(class_map_for(k, cs).fibers)
        sums = F.period_total(lt, k, triv), F.period_total(lt, k, chi)
        lams = F.lambda_factor(f, k, triv, 2, lt), F.lambda_factor(f, k, chi, 2, lt)
        a, b = F.predicted_lvalue(f, k, triv), F.predicted_lvalue(f, k, chi)
    assert cs.n == 3 and cs.weights == [2, 1, 1]
    assert fib == [0, 1, 1]
    assert sums == (Fraction(2, 5), Fraction(2))
    assert lams == (4, Fraction(4, 5))
    assert (a.coeff, a.disc, str(a)) == (Fraction(8, 75), 15, "8π²/(5√15)")
    assert (b.coeff, b.disc, str(b)) == (Fraction(8, 3), 15, "8√15π²/3")
    assert t.secs < 10


def test_criterion_3_level_27():
    lt = L(27, 1, 1)
    cs = class_set(27, 1, 1)
    k = K(-1)
    f = spectral_data(27, 1, 1).cuspidal[0]
    assert cs.n == 2 and cs.weights == [2, 1] and mass(lt) == Fraction(3, 2)
    assert list(class_map_for(k, cs).fibers) == [1, 0]
    assert F.period_total(lt, k, characters(k)[0]) == Fraction(4, 3)
    assert str(F.predicted_lvalue(f, k, characters(k)[0])) == "4π²/3"
    rep = F.verify_theorem_prime(3, 1, k, allow_excluded=True)
    assert rep.rhs == k.u_K * (1 - Fraction(1, 9)) * k.h_K**2 == Fraction(16, 9)
    assert rep.lhs == Fraction(4, 3) != rep.rhs


def test_criterion_4_level_75():
    with Timer() as t:
        lt = L(1, 25, 3)
        cs = class_set(1, 25, 3)
        sd = spectral_data(1, 25, 3)
        lams = sorted(F.lambda_factor(e, K(-5), None, 5, lt) for e in sd.cuspidal)
        rep = F.verify_double_average(lt, K(-15))
    assert cs.n == 8 and set(cs.weights) == {1} and mass(lt) == 8
    assert len(sd.eisenstein) == 2
    assert all(e.is_rational for e in sd.cuspidal)  # so the exact path applies
    assert sorted(e.multiplicity for e in sd.cuspidal) == [1, 1, 2, 2]
    assert lams == [Fraction(24, 25), 1, Fraction(6, 5), Fraction(6, 5)]
    old = [e for e in sd.cuspidal if e.exact_level != 75]
    assert len(old) == 1 and F.lambda_factor(old[0], K(-5), None, 5, lt) == 1
    assert rep.lhs == rep.rhs == 3
    assert t.secs < 60


# ---------------------------------------------------------------------------
# property suite

SUITE = {
    (11, 1, 1): [-1, -11, -3],
    (11, 1, 2): [-15],
    (27, 1, 1): [-1],
    (1, 25, 3): [-15, -5],
    (13, 1, 1): [-7, -2],
    (17, 1, 1): [-3],
}


def _ms(lt):
    return [m for m in range(1, 14) if gcd(m, lt.N1prime * lt.N2) == 1]


def _degree(lt, m):
    """Number of integral right ideals of norm m, from local counts."""
    out = 1
    for p, e in factorize(m):
        part = lt.part(p) if lt.N % p == 0 else None
        if part is None:
            out *= sigma1(p**e)
        elif part == "M":
            out *= eichler_ideal_count(p, e)
        # p exactly dividing N1: the ramified maximal order has one ideal of each norm
    return out


@pytest.mark.parametrize("level", list(SUITE))
def test_criterion_5_brandt(level):
    lt = L(*level)
    cs = class_set(*level)
    n, w = cs.n, cs.weights
    ms = _ms(lt)
    A = {m: brandt(cs, m).entries for m in ms}
    assert A[1] == tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    for m in ms:
        for i in range(n):
            for j in range(n):
                assert w[j] * A[m][i][j] == w[i] * A[m][j][i]
        assert all(sum(row) == _degree(lt, m) for row in A[m]), m
    for a in ms:
        for b in ms:
            AB = [[sum(A[a][i][k] * A[b][k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            BA = [[sum(A[b][i][k] * A[a][k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            assert AB == BA


@pytest.mark.parametrize("level", list(SUITE))
def test_criterion_5_mass_weights_orthogonality(level):
    lt = L(*level)
    cs = class_set(*level)
    assert sum(Fraction(1, w) for w in cs.weights) == mass(lt)
    assert all(w <= 6 for w in cs.weights)
    for m in _ms(lt):
        assert column_orthogonality_check(cs, m)


@pytest.mark.parametrize("level", list(SUITE))
def test_criterion_5_parseval_and_embeddings(level):
    lt = L(*level)
    cs = class_set(*level)
    for d in SUITE[level]:
        k = K(d)
        assert admissible(k, lt)[0]
        ok, lhs, rhs = check_global_embedding_identity(k, cs)
        assert ok and lhs == rhs
        cmd = F._cmd(lt, k)
        for phi in F._orth_basis(*level, "full"):
            good, a, b = parseval_check(phi, cmd, characters(k))
            assert good and a == b


# ---------------------------------------------------------------------------
# level 13


CLASS_NUMBER_ONE = [-1, -2, -3, -7, -11, -19, -43, -67, -163]


def test_criterion_6_trivial_unit_fields():
    lt = L(13, 1, 1)
    assert spectral_data(13, 1, 1).cuspidal == []
    used = []
    for d in CLASS_NUMBER_ONE:
        k = K(d)
        if k.u_K != 1 or not admissible(k, lt)[0]:
            continue
        used.append(d)
        assert k.h_K == 1 and len(class_group(k)[0]) == 1
        rep = F.verify_double_average(lt, k)
        assert rep.rhs == 0 and rep.lhs == 0
    assert used == [-2, -7, -11, -19, -67, -163]


def test_criterion_6_K4_prime_formula():
    # Claim under test: with K(-4) the prime-level RHS h^2 (u - 12/12) = 1 and the
    # computed LHS agrees. Q(i) splits at 13 (13 = 1 mod 4), so it does not
    # embed in the level 13 order, and the cuspidal space there is zero.
    # The average over an empty basis is 0, which does not equal 1.
    k = K(-1)
    rhs = k.h_K**2 * (k.u_K - Fraction(12, 13 - 1))
    assert rhs == 1
    vecs = F._orth_basis(13, 1, 1, "cusp")
    assert vecs == []
    lhs = Fraction(0)  # the average runs over this (empty) basis
    assert not admissible(k, L(13, 1, 1))[0]
    assert lhs == rhs, f"computed LHS {lhs} != RHS {rhs}: Q(i) splits at 13"


# ---------------------------------------------------------------------------
# nonvanishing certificates


def test_criterion_7_certificates():
    with Timer() as t:
        k = K(-1)
        inert, split = [], []
        for p in primes_in(11, 100):
            try:
                row = F.lower_bounds_and_certificates(k, p)
            except NotAdmissible:
                split.append(p)
                continue
            inert.append(p)
            bound = F.bound_squarefree(k, p)
            assert row["bound"] == bound == 2 - Fraction(12, p - 1)
            assert row["exact_average"] >= bound
            assert row["exact_average"] == row["formula_value"]
            if p > 7:
                assert row["exact_average"] > 0
                assert F.cor12_certificate(k, p)
    assert inert == [11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83]
    assert all(p % 4 == 1 for p in split)
    assert F.xi(13) < 4
    assert F.xi(31) < 3
    assert t.secs < 300


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
