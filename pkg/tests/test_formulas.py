from fractions import Fraction
from math import pi, sqrt

import pytest

from brandtlab import formulas as F
from brandtlab.errors import HomVanishes, HypothesisViolated, NotAdmissible, NotInStableRange, UnsupportedShape
from brandtlab.formulas import QuadraticSurd, Surd, SymbolicLValue
from brandtlab.quadfield import characters, make_field
from brandtlab.quatalg import class_set, mass, validate_level
from brandtlab.spectra import spectral_data, system_period_sum

L = validate_level
K = make_field


# ---------------------------------------------------------------------------
# exact surds


def test_surd_normal_form_and_printing():
    assert Surd.make(Fraction(1), 12) == Surd.make(Fraction(2), 3)
    assert str(Surd.make(Fraction(4), 11) / Surd.make(Fraction(1), 1)) == "4√11"
    assert str(Surd.make(Fraction(1), 1) / Surd.make(Fraction(1, 4), 11)) == "4/√11"
    v = SymbolicLValue(Fraction(8, 75), 15)
    assert str(v) == "8π²/(5√15)"
    assert abs(float(v.surd) * pi**2 - 8 * pi**2 / (5 * sqrt(15))) < 1e-12
    assert v.to_json() == {"coeff": "8/75", "disc": 15, "unit": "pi^2*sqrt"}
    assert str(SymbolicLValue(Fraction(8, 3), 15)) == "8√15π²/3"
    assert str(SymbolicLValue(Fraction(4, 5), 1)) == "4π²/5"


def test_quadratic_surd_comparison():
    x = QuadraticSurd(Fraction(1), Fraction(1), 2)  # 1 + sqrt 2
    assert x > Fraction(2) and x < Fraction(5, 2)
    assert not (x < Fraction(12, 5))
    lo, hi = x.interval()
    assert lo <= 1 + sqrt(2) <= hi


# ---------------------------------------------------------------------------
# constants


@pytest.mark.parametrize("level, d, C", [
    ((11, 1, 1), -1, "4"), ((11, 1, 1), -11, "√11"), ((11, 1, 2), -15, "√15/2"),
    ((1, 25, 3), -15, "5√15/3"), ((1, 25, 3), -5, "5√5/3"), ((27, 1, 1), -1, "4"),
])
def test_C_constant(level, d, C):
    assert str(F.C_constant(K(d), L(*level))) == C


@pytest.mark.parametrize("level", [(11, 1, 1), (11, 1, 2), (27, 1, 1), (1, 25, 3), (13, 1, 1), (17, 1, 1),
                                   (3, 1, 5), (1, 9, 7), (2, 1, 1), (3, 1, 1), (7, 1, 13), (125, 1, 1),
                                   (5, 1, 21), (1, 49, 1), (2, 1, 15)])
def test_c_times_mass_is_one(level):
    lt = L(*level)
    assert F.c_constant(lt) * mass(lt) == 1


def test_eisenstein_factors():
    assert F.eis_group_order(L(11, 1, 1)) == 1
    assert F.eis_group_order(L(1, 25, 3)) == 2
    assert [F.delta_plus(L(1, 25, 3), m) for m in (1, 2, 3, 4)] == [1, 0, 0, 1]
    assert [F.delta_plus(L(11, 1, 1), m) for m in (1, 2, 3)] == [1, 1, 1]


@pytest.mark.parametrize("level, m, deg", [
    ((11, 1, 1), 2, 3), ((11, 1, 1), 4, 7), ((11, 1, 1), 11, 1), ((11, 1, 2), 2, 5), ((11, 1, 2), 4, 13),
    ((1, 25, 3), 3, 7), ((1, 25, 3), 6, 21), ((11, 1, 2), 6, 20), ((27, 1, 1), 2, 3),
])
def test_degree_of_T(level, m, deg):
    assert F.deg_T(class_set(*level), m) == deg


# ---------------------------------------------------------------------------
# local factors and predictions


def test_lambda_factors():
    lt = L(11, 1, 2)
    k = K(-15)
    f = spectral_data(11, 1, 2).cuspidal[0]
    t, chi = characters(k)
    assert F.lambda_factor(f, k, t, 2, lt) == 4
    assert F.lambda_factor(f, k, chi, 2, lt) == Fraction(4, 5)
    lt = L(1, 25, 3)
    lams = sorted(F.lambda_factor(e, K(-5), None, 5, lt) for e in spectral_data(1, 25, 3).cuspidal)
    assert lams == [Fraction(24, 25), 1, Fraction(6, 5), Fraction(6, 5)]


def test_lambda_needs_split_M():
    f = spectral_data(11, 1, 2).cuspidal[0]
    with pytest.raises(HypothesisViolated):
        F.lambda_factor(f, K(-1), characters(K(-1))[0], 2, L(11, 1, 2))


@pytest.mark.parametrize("level, d, i, want", [
    ((11, 1, 1), -1, 0, "4π²/5"), ((11, 1, 1), -11, 0, "16π²/(5√11)"), ((11, 1, 2), -15, 0, "8π²/(5√15)"),
    ((11, 1, 2), -15, 1, "8√15π²/3"), ((27, 1, 1), -1, 0, "4π²/3"),
])
def test_predicted_lvalues(level, d, i, want):
    f = spectral_data(*level).cuspidal[0]
    k = K(d)
    assert str(F.predicted_lvalue(f, k, characters(k)[i])) == want


def test_predicted_ratio_11():
    f = spectral_data(11, 1, 1).cuspidal[0]
    a = F.predicted_lvalue(f, K(-1), characters(K(-1))[0])
    b = F.predicted_lvalue(f, K(-11), characters(K(-11))[0])
    assert str(F.predicted_ratio(b, a)) == "4/√11"


def test_prediction_refuses_irrational_and_ramified_M():
    sd = spectral_data(1, 9, 7)
    irr = [e for e in sd.cuspidal if not e.is_rational][0]
    with pytest.raises(ValueError):
        F.predicted_lvalue(irr, K(-3), characters(K(-3))[0])
    f = spectral_data(1, 25, 3).cuspidal[0]
    with pytest.raises(HypothesisViolated):
        F.predicted_lvalue(f, K(-15), characters(K(-15))[0])


@pytest.mark.parametrize("level, d", [((11, 1, 2), -15), ((1, 25, 3), -5), ((1, 25, 3), -15), ((1, 9, 7), -3),
                                      ((11, 1, 1), -11), ((11, 1, 1), -1)])
def test_hom_obstruction_kills_the_period(level, d):
    lt, k = L(*level), K(d)
    cmd = F._cmd(lt, k)
    fired = 0
    for es in spectral_data(*level).cuspidal:
        for chi in characters(k):
            if F.hom_obstructions(es, k, chi, cmd, lt):
                fired += 1
                assert system_period_sum(es, cmd, chi) == 0
                if F.split_at_M(k, lt) and es.is_rational:
                    with pytest.raises(HomVanishes):
                        F.predicted_lvalue(es, k, chi)
    if level == (1, 25, 3) and d == -15:
        assert fired == 2


def test_assembled_total_75():
    assert F.assembled_lvalue_total(L(1, 25, 3), K(-5)) == 3


# ---------------------------------------------------------------------------
# identities


@pytest.mark.parametrize("level, d, part, lhs, rhs", [
    ((11, 1, 1), -1, "cusp", Fraction(4, 5), Fraction(4, 5)),
    ((11, 1, 1), -1, "full", Fraction(2), Fraction(2)),
    ((1, 25, 3), -15, "cusp", Fraction(3), Fraction(3)),
    ((13, 1, 1), -7, "cusp", 0, 0),
    ((11, 1, 2), -15, "cusp", Fraction(12, 5), Fraction(12, 5)),
])
def test_double_average_m1(level, d, part, lhs, rhs):
    r = F.verify_double_average(L(*level), K(d), 1, part)
    assert (r.lhs, r.rhs, r.exact_match) == (lhs, rhs, True)


@pytest.mark.parametrize("level, d", [((11, 1, 1), -1), ((11, 1, 2), -15), ((1, 25, 3), -15), ((1, 25, 3), -5),
                                      ((27, 1, 1), -1), ((17, 1, 1), -3), ((11, 1, 1), -23), ((1, 9, 7), -3)])
def test_double_average_all_m(level, d):
    lt = L(*level)
    for m in range(1, 14):
        if m % 5 == 0 and lt.N2 % 5 == 0 or m % 3 == 0 and (lt.N1prime * lt.N2) % 3 == 0:
            continue
        for part in ("cusp", "full"):
            r = F.verify_double_average(lt, K(d), m, part)
            assert r.exact_match, (m, part, r.lhs, r.rhs)


def test_double_average_needs_coprime_m():
    with pytest.raises(HypothesisViolated):
        F.verify_double_average(L(1, 25, 3), K(-15), 5)
    with pytest.raises(NotAdmissible):
        F.verify_double_average(L(11, 1, 1), K(-7))


@pytest.mark.parametrize("p, r, d, val", [(11, 0, -1, Fraction(4, 5)), (13, 0, -7, 0), (19, 0, -1, Fraction(4, 3)),
                                          (23, 0, -1, Fraction(16, 11)), (11, 0, -3, Fraction(9, 5)),
                                          (5, 1, -3, Fraction(72, 25))])
def test_theorem_prime(p, r, d, val):
    rep = F.verify_theorem_prime(p, r, K(d))
    assert rep.exact_match and rep.lhs == val


def test_theorem_prime_exclusions():
    with pytest.raises(HypothesisViolated):
        F.verify_theorem_prime(3, 1, K(-1))
    rep = F.verify_theorem_prime(3, 1, K(-1), allow_excluded=True)
    assert (rep.lhs, rep.rhs, rep.exact_match) == (Fraction(4, 3), Fraction(16, 9), False)
    assert F.prime_hypotheses(13, 0, K(-1)) == ["K not split at 13"]


@pytest.mark.parametrize("level, d, val", [
    ((11, 1, 1), -3, Fraction(9, 5)), ((11, 1, 3), -3, Fraction(27, 10)), ((19, 1, 1), -1, Fraction(4, 3)),
    ((3, 1, 5), -1, Fraction(1)), ((27, 1, 2), -1, Fraction(16, 9)), ((27, 1, 5), -1, Fraction(16, 9)),
    ((7, 1, 1), -1, Fraction(0)), ((23, 1, 1), -1, Fraction(16, 11)), ((1, 9, 7), -3, Fraction(33, 16)),
    ((125, 1, 1), -3, Fraction(72, 25)), ((17, 1, 1), -3, Fraction(9, 4)), ((29, 1, 1), -3, Fraction(18, 7)),
])
def test_thm2(level, d, val):
    rep = F.verify_thm2(L(*level), K(d))
    assert rep.exact_match and rep.lhs == rep.rhs == val


def test_thm2_delta_reading_at_75():
    with pytest.raises(HypothesisViolated):
        F.verify_thm2(L(1, 25, 3), K(-15))
    rep = F.verify_thm2(L(1, 25, 3), K(-15), allow_unverified=True)
    assert rep.lhs == rep.rhs == Fraction(17, 6)
    assert F.thm2_rhs(L(1, 25, 3), K(-15), 0) == Fraction(10, 3)


def test_thm2_example_level_22_has_no_hypothesis():
    assert F.thm2_hypotheses(L(11, 1, 2), K(-15)) == []
    with pytest.raises(HypothesisViolated):
        F.verify_thm2(L(11, 1, 2), K(-15))


STABLE = [
    ((11, 1, 1), -1, Fraction(4, 5)), ((11, 1, 1), -3, Fraction(9, 5)), ((13, 1, 1), -7, 0),
    ((17, 1, 1), -7, Fraction(1, 4)), ((23, 1, 1), -3, Fraction(27, 11)), ((29, 1, 1), -15, Fraction(2, 7)),
    ((31, 1, 1), -5, Fraction(2, 5)), ((37, 1, 1), -23, 0), ((41, 1, 1), -6, Fraction(4, 5)),
    ((43, 1, 1), -23, Fraction(3, 7)), ((37, 1, 1), -13, Fraction(2, 3)),
]


@pytest.mark.parametrize("level, d, val", STABLE)
def test_stable_single(level, d, val):
    k = K(d)
    for chi in characters(k):
        rep = F.verify_stable_single(L(*level), k, chi)
        assert rep.exact_match
        # chi-independent apart from the Eisenstein correction at chi = 1
        assert rep.lhs == (val if chi.is_trivial() else k.h_K * k.u_K)


@pytest.mark.parametrize("level, d", [((27, 1, 1), -1), ((11, 1, 1), -23), ((11, 1, 1), -11), ((41, 1, 1), -13)])
def test_outside_stable_range(level, d):
    with pytest.raises(NotInStableRange):
        F.verify_stable_single(L(*level), K(d))


def test_stable_single_sweep():
    # every admissible case in the stable range matches
    ran = 0
    for p in (11, 13, 17, 19, 23, 29, 31):
        for d in (-1, -2, -3, -5, -6, -7, -10, -11, -13, -15, -23):
            try:
                rep = F.verify_stable_single(L(p, 1, 1), K(d))
            except (NotAdmissible, NotInStableRange):
                continue
            ran += 1
            assert rep.exact_match, (p, d)
    assert ran >= 20


@pytest.mark.parametrize("level, d", [((11, 1, 1), -1), ((11, 1, 1), -23), ((11, 1, 2), -15), ((1, 25, 3), -15),
                                      ((11, 1, 1), -11), ((1, 9, 7), -3)])
def test_semistable_bounds(level, d):
    rep = F.semistable_bounds_check(L(*level), K(d))
    assert rep.exact_match
    lo, obs, hi = rep.lhs
    assert lo <= obs <= hi


def test_unstable_bound_is_strict():
    rep = F.semistable_bounds_check(L(11, 1, 1), K(-23))
    assert rep.rhs == "not semistable"
    assert rep.lhs == (Fraction(-19, 5), Fraction(1, 5), Fraction(51, 5))


# ---------------------------------------------------------------------------
# bounds


def test_xi_thresholds():
    assert F.xi(13) < 4 and F.xi(11) > 4
    assert F.xi(31) < 3 and F.xi(29) > 3
    for p in (5, 11, 13, 29, 31, 101):
        x = 2 * ((1 + p**-0.5) / (1 - 1 / p)) ** 2
        lo, hi = F.xi(p).interval()
        assert lo <= x <= hi


def test_squarefree_bound_and_average():
    for p in (11, 19, 23, 31):
        lt, k = L(p, 1, 1), K(-1)
        formula, observed = F.exact_average_squarefree(lt, k)
        assert formula == observed >= F.bound_squarefree(k, p)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_p_squared_bound_below_newform_average(p):
    k = K(-p)
    row = F.lower_bounds_and_certificates(k, 1, p * p, 1)
    avg, _ = F.newform_average(L(1, p * p, 1), k, characters(k)[0])
    assert row["shape"] == "N0*p^2"
    assert row["bound"] <= avg


def test_cor12_certificate():
    k = K(-1)
    assert [p for p in (5, 7, 11, 13) if F.cor12_certificate(k, p)] == [11, 13]
    assert not F.cor12_certificate(k, 3, 1)
    assert F.cor12_certificate(k, 5, 1)


def test_lower_bounds_dispatch():
    row = F.lower_bounds_and_certificates(K(-1), 11)
    assert row["shape"] == "squarefree" and row["exact_average"] == Fraction(4, 5) and row["certificate"]
    row = F.lower_bounds_and_certificates(K(-1), 11, 1, 5)
    assert row["shape"] == "N1*p (p | M)" and row["xi"].b > 0
    with pytest.raises(UnsupportedShape):
        F.lower_bounds_and_certificates(K(-3), 1, 9, 7)
    with pytest.raises(NotAdmissible):
        F.lower_bounds_and_certificates(K(-1), 13)
