"""
Nonvanishing from an exact average
==================================

For Q(i) and a prime level p inert in Q(i), the trivial-character average is
an exact rational number. Once it is positive, some newform of level p has a
nonzero twisted central value. The lower bound 2 - 12/(p - 1) is attained.
"""

from fractions import Fraction

from brandtlab import make_field
from brandtlab.arith import primes_in
from brandtlab.errors import NotAdmissible
from brandtlab.formulas import bound_squarefree, lower_bounds_and_certificates, xi

K = make_field(-1)
print(" p   average   bound")
for p in primes_in(11, 100):
    try:
        row = lower_bounds_and_certificates(K, p)
    except NotAdmissible:
        continue  # Q(i) splits at p, no optimal embedding
    print(f"{p:3d}  {row['exact_average']!s:8s}  {bound_squarefree(K, p)}")

# the M-prime shape needs Xi(p) = 2((1 + p^-1/2)/(1 - 1/p))^2, compared exactly
for p, c in ((11, 4), (13, 4), (29, 3), (31, 3)):
    print(f"Xi({p}) < {c}:", xi(p) < Fraction(c), f"  ({float(xi(p)):.4f})")
