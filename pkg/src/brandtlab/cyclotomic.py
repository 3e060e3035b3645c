"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Character values of class groups are roots of unity; periods are
Z-combinations of them, and every identity we check is an equality in some
Q(zeta_n). Elements are stored reduced modulo the n-th cyclotomic polynomial
so equality is structural.
"""

import cmath
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, cyclotomic_poly, symbols

_x = symbols("x")


@lru_cache(maxsize=None)
def _phi(n):
    """Coefficients of Phi_n, lowest degree first."""
    p = Poly(cyclotomic_poly(n, _x), _x)
    return tuple(int(c) for c in reversed(p.all_coeffs()))


def _reduce(coeffs, n):
    phi = _phi(n)
    d = len(phi) - 1
    c = [Fraction(0)] * n
    for k, a in enumerate(coeffs):
        c[k % n] += a
    # phi is monic
    for k in range(len(c) - 1, d - 1, -1):
        a = c[k]
        if a:
            for j in range(d + 1):
                c[k - d + j] -= a * phi[j]
    return tuple(c[:d])


class Cyclo:
    """Element of Q(zeta_n), n fixed per element; mixed n are lifted to lcm."""

    __slots__ = ("n", "c")

    def __init__(self, n, coeffs=None, reduced=False):
        self.n = n
        if coeffs is None:
            coeffs = ()
        self.c = tuple(coeffs) if reduced else _reduce([Fraction(a) for a in coeffs], n)

    @classmethod
    def rational(cls, q, n=1):
        return cls(n, [Fraction(q)])

    @classmethod
    def root(cls, k, n):
        """zeta_n^k."""
        co = [0] * n
        co[k % n] = 1
        return cls(n, co)

    def lift(self, m):
        """Same element viewed in Q(zeta_m), n | m."""
        if m == self.n:
            return self
        assert m % self.n == 0
        s = m // self.n
        co = [Fraction(0)] * m
        for k, a in enumerate(self.c):
            co[k * s] += a
        return Cyclo(m, co)

    def _common(self, other):
        if not isinstance(other, Cyclo):
            other = Cyclo.rational(other, self.n)
        if other.n == self.n:
            return self, other
        from math import lcm

        m = lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._common(other)
        L = max(len(a.c), len(b.c))
        co = [(a.c[k] if k < len(a.c) else 0) + (b.c[k] if k < len(b.c) else 0) for k in range(L)]
        return Cyclo(a.n, co)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.n, [-a for a in self.c], reduced=True)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclo) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclo):
            q = Fraction(other)
            return Cyclo(self.n, [q * a for a in self.c], reduced=True)
        a, b = self._common(other)
        co = [Fraction(0)] * (len(a.c) + len(b.c))
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    co[i + j] += x * y
        return Cyclo(a.n, co)

    __rmul__ = __mul__

    def conj(self):
        co = [Fraction(0)] * self.n
        for k, a in enumerate(self.c):
            co[(-k) % self.n] += a
        return Cyclo(self.n, co)

    def abs2(self):
        return self * self.conj()

    def is_rational(self):
        return all(a == 0 for a in self.c[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0] if self.c else Fraction(0)

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.n)
        return complex(sum(float(a) * z**k for k, a in enumerate(self.c)))

    def __eq__(self, other):
        if not isinstance(other, Cyclo):
            try:
                other = Cyclo.rational(other, self.n)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        return (a - b).is_zero()

    def is_zero(self):
        return all(a == 0 for a in self.c)

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((self.n, self.c))

    def __repr__(self):
        if self.is_rational():
            return str(self.to_fraction())
        terms = [f"{a}*z{self.n}^{k}" for k, a in enumerate(self.c) if a]
        return " + ".join(terms)
