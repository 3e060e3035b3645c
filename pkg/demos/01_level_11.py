"""
Level 11: two ideal classes, one newform
========================================

The maximal order in the quaternion algebra ramified at 11 and infinity has
two right ideal classes. Functions on them split into the constant function
and a single cusp form, which matches the elliptic curve of conductor 11.
"""

from brandtlab import class_set, make_field, spectral_data
from brandtlab.embeddings import class_map_for
from brandtlab.formulas import period_total, predicted_lvalue, predicted_ratio
from brandtlab.quadfield import characters
from brandtlab.quatalg import brandt, validate_level

lt = validate_level(11, 1, 1)
cs = class_set(11, 1, 1)
print("classes:", cs.n, "unit weights:", cs.weights, "mass:", cs.mass())

# Brandt matrices; rows sum to p + 1 away from the level
for p in (2, 3, 5):
    print(f"A_{p} =", [list(map(int, r)) for r in brandt(cs, p).entries])

sd = spectral_data(11, 1, 1)
f = sd.cuspidal[0]
print("cusp form:", f.basis[0], " a_p:", {p: int(f.eigenvalue(p)) for p in (2, 3, 5, 7, 13)})

# CM points from Q(i) land in the first class only
K4 = make_field(-1)
print("fibers for Q(i):", class_map_for(K4, cs).fibers)
print("period ratio:", period_total(lt, K4))

a = predicted_lvalue(f, K4, characters(K4)[0])
K11 = make_field(-11)
b = predicted_lvalue(f, K11, characters(K11)[0])
print("L(f,K)/(f,f) for Q(i):", a)
print("and for Q(sqrt -11):", b)
print("ratio:", predicted_ratio(b, a))
