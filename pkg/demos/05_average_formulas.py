"""
The newform average across level shapes
=======================================

The average over newforms is built from averages at each level of a small
tower (drop p^2 from N1, or trade p^2 in N2 for p in N1) and compared with
the closed form. Also shown: a case where the classes are not stable, so the
single-character average is not pinned down and only bounds remain.
"""

from brandtlab import make_field
from brandtlab.errors import NotInStableRange
from brandtlab.formulas import semistable_bounds_check, verify_stable_single, verify_thm2
from brandtlab.quatalg import validate_level

for level, d in [((11, 1, 3), -3), ((27, 1, 2), -1), ((1, 9, 7), -3), ((125, 1, 1), -3), ((23, 1, 1), -1)]:
    r = verify_thm2(validate_level(*level), make_field(d))
    print(level, d, ":", r.lhs, "=", r.rhs, "  via", r.inputs["hypotheses"])

lt, K = validate_level(11, 1, 1), make_field(-23)
try:
    verify_stable_single(lt, K)
except NotInStableRange as e:
    print("not stable:", e)
lo, obs, hi = semistable_bounds_check(lt, K).lhs
print(f"bounds: {lo} <= {obs} <= {hi}")
