"""
Level 75: a balanced order and four local types at 5
====================================================

Here N2 = 25, so the order at 5 comes from a ramified quadratic extension.
All eight unit weights are 1. The four cuspidal systems separate by what
they look like at 5, and each type gets its own local factor.
"""

from brandtlab import make_field, spectral_data
from brandtlab.formulas import (
    C_constant, Surd, assembled_lvalue_total, lambda_factor, verify_double_average,
)
from brandtlab.quatalg import mass, validate_level

lt = validate_level(1, 25, 3)
sd = spectral_data(1, 25, 3)
print("classes:", sd.class_set.n, "mass:", mass(lt), "weights:", set(sd.class_set.weights))
print("Eisenstein dimension:", len(sd.eisenstein))

K5 = make_field(-5)
for e in sd.cuspidal:
    print(f"{e.label}: exact level {e.exact_level:3d}  x{e.multiplicity}  at 5: {e.local_types[5]:16s}"
          f" Lambda_5 = {lambda_factor(e, K5, None, 5, lt)}")

# Q(sqrt -15) ramifies at 3 | M, so only the double average is available there
r = verify_double_average(lt, make_field(-15))
print("double average for Q(sqrt -15):", r.lhs, "=", r.rhs)

# for Q(sqrt -5) the predictions exist and add up to the same kind of total
print("C/4 =", C_constant(K5, lt) / Surd(4), " times pi^2")
print("sum of predicted values (scaled):", assembled_lvalue_total(lt, K5, sd))
