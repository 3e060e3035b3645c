from fractions import Fraction

import pytest

from brandtlab.arith import is_squarefree, kronecker
from brandtlab.cyclotomic import Cyclo
from brandtlab.errors import InertPrime, NotNegative, NotSquarefree
from brandtlab.quadfield import (
    KIdealClass, characters, class_group, compose, field_from_discriminant, ideal_norm_coprime_form,
    inverse, make_field, prime_class, principal_form, reduce_form, reduced_forms, splitting,
)
from oracles import ideal_product_form, reduce_brute, reduced_forms_brute


def fundamental(limit):
    out = []
    for d in range(-1, -limit, -1):
        if is_squarefree(d):
            D = d if d % 4 == 1 else 4 * d
            if -D <= limit:
                out.append(D)
    return sorted(set(out), reverse=True)


@pytest.mark.parametrize("d, D, u", [(-1, -4, 2), (-3, -3, 3), (-15, -15, 1), (-5, -20, 1), (-2, -8, 1)])
def test_make_field(d, D, u):
    K = make_field(d)
    assert (K.D_K, K.u_K) == (D, u)


def test_make_field_errors():
    with pytest.raises(NotSquarefree):
        make_field(-4)
    with pytest.raises(NotNegative):
        make_field(5)


def test_field_from_discriminant():
    assert field_from_discriminant(-4) == make_field(-1)
    assert field_from_discriminant(-20) == make_field(-5)
    assert field_from_discriminant(-15) == make_field(-15)


@pytest.mark.parametrize("d, h", [(-1, 1), (-3, 1), (-5, 2), (-15, 2), (-23, 3), (-14, 4), (-47, 5), (-71, 7)])
def test_class_numbers(d, h):
    assert make_field(d).h_K == h


def test_reduced_forms_against_brute():
    for D in fundamental(400):
        ours = sorted((f.a, f.b, f.c) for f in reduced_forms(D))
        assert ours == sorted(reduced_forms_brute(D)), D


def test_reduce_against_brute():
    for a, b, c in [(3, 7, 5), (10, 11, 4), (6, -13, 8), (2, 1, 3), (5, 5, 2)]:
        r = reduce_form(a, b, c)
        assert (r.a, r.b, r.c) == reduce_brute(a, b, c)


def test_composition_against_ideal_multiplication():
    for D in fundamental(200):
        forms = reduced_forms(D)
        for f in forms:
            for g in forms:
                h = compose(f, g)
                assert (h.a, h.b, h.c) == ideal_product_form((f.a, f.b, f.c), (g.a, g.b, g.c), D), (D, f, g)


def test_group_laws():
    D = -71
    forms = reduced_forms(D)
    e = principal_form(D)
    for f in forms:
        assert compose(f, e) == f
        assert compose(f, inverse(f)) == e
    assert len(forms) == 7


def test_group_structure():
    assert class_group(make_field(-15))[1] == [2]
    assert class_group(make_field(-23))[1] == [3]
    assert sorted(class_group(make_field(-14 * 1))[1]) == [4]


@pytest.mark.parametrize("d", [-1, -15, -23, -14, -21, -47])
def test_character_orthogonality(d):
    K = make_field(d)
    forms, _ = class_group(K)
    chis = characters(K)
    assert len(chis) == K.h_K
    assert sum(1 for c in chis if c.is_trivial()) == 1
    for a in chis:
        for b in chis:
            s = Cyclo.rational(0)
            for t in forms:
                s = s + a(t) * b.inverse_value(t)
            assert s == Cyclo.rational(len(forms) if a == b else 0)
    # and over the characters for fixed classes
    for t in forms:
        s = Cyclo.rational(0)
        for c in chis:
            s = s + c(t)
        assert s == Cyclo.rational(len(forms) if t == principal_form(K.D_K) else 0)


def test_characters_k23():
    chis = characters(make_field(-23))
    assert sorted(c.order for c in chis) == [1, 3, 3]


@pytest.mark.parametrize("d, p, s", [
    (-1, 11, "inert"), (-1, 13, "split"), (-1, 2, "ramified"), (-15, 2, "split"), (-15, 3, "ramified"),
    (-7, 11, "split"), (-3, 11, "inert"), (-15, 11, "inert"),
])
def test_splitting(d, p, s):
    assert splitting(make_field(d), p) == s


def test_splitting_matches_kronecker():
    for d in [-1, -2, -3, -5, -7, -15, -23]:
        K = make_field(d)
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29]:
            k = kronecker(K.D_K, p)
            assert splitting(K, p) == {1: "split", -1: "inert", 0: "ramified"}[k]


def test_prime_class():
    K = make_field(-15)
    P2 = prime_class(K, 2)
    assert P2 == KIdealClass(2, 1, 2)
    assert compose(P2, P2) == principal_form(-15)
    triv, chi = characters(K)
    assert chi(P2) == Cyclo.rational(-1)
    assert prime_class(K, 5) == KIdealClass(2, 1, 2)
    assert prime_class(make_field(-1), 2) == principal_form(-4)
    with pytest.raises(InertPrime):
        prime_class(make_field(-1), 3)


def test_ideal_norm_coprime_form():
    K = make_field(-15)
    t = reduced_forms(-15)[1]
    a, b, c = ideal_norm_coprime_form(K, t, 2)
    assert a % 2 and b * b - 4 * a * c == -15
    assert reduce_form(a, b, c) == t
