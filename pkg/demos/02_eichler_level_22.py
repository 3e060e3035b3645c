"""
An Eichler order at 2 with a class group of order two
=====================================================

Level (11, 1, 2) has three classes. The field Q(sqrt -15) has class number
2, so there are two characters to average against, and 2 divides M, which
brings in a local factor from the Hecke eigenvalue at 2.
"""

from brandtlab import class_set, make_field, spectral_data
from brandtlab.embeddings import class_map_for
from brandtlab.formulas import lambda_factor, period_total, predicted_lvalue, verify_double_average
from brandtlab.quadfield import characters
from brandtlab.quatalg import validate_level

lt = validate_level(11, 1, 2)
cs = class_set(11, 1, 2)
K = make_field(-15)
print("classes:", cs.n, "weights:", cs.weights)
print("fibers:", class_map_for(K, cs).fibers)

f = spectral_data(11, 1, 2).cuspidal[0]
print("the only cusp system is old from level", f.exact_level, "with multiplicity", f.multiplicity)

for chi in characters(K):
    print(f"chi = {chi.label():8s} sum = {period_total(lt, K, chi)!s:4s}"
          f" Lambda_2 = {lambda_factor(f, K, chi, 2, lt)!s:4s}"
          f" L/(f,f) = {predicted_lvalue(f, K, chi)}")

# the double average over both characters, for a few Hecke twists
for m in (1, 2, 3, 5):
    r = verify_double_average(lt, K, m)
    print(f"m = {m}: {r.lhs} = {r.rhs}", "ok" if r.exact_match else "MISMATCH")
