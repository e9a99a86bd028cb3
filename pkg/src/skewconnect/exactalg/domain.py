"""Coefficient domains: exact rationals and prime fields.

Coefficients are plain ``Fraction`` values in characteristic zero and
plain ints in ``0..p-1`` over F_p; the ``Domain`` object supplies the
arithmetic so polynomial code stays generic.
"""

from fractions import Fraction

from ..errors import DivisionByNoninvertible, InvalidTower


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Domain:
    """Field of coefficients: Q when ``p`` is None, else F_p."""

    __slots__ = ("p", "zero", "one")

    def __init__(self, p=None):
        if p is not None and not is_prime(p):
            raise InvalidTower(f"modulus {p} is not prime")
        self.p = p
        if p is None:
            self.zero = Fraction(0)
            self.one = Fraction(1)
        else:
            self.zero = 0
            self.one = 1

    def __eq__(self, other):
        return isinstance(other, Domain) and self.p == other.p

    def __hash__(self):
        return hash(("Domain", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def from_int(self, n):
        return Fraction(n) if self.p is None else n % self.p

    def from_fraction(self, fr):
        fr = Fraction(fr)
        if self.p is None:
            return fr
        den = fr.denominator % self.p
        if den == 0:
            raise DivisionByNoninvertible(f"denominator {fr.denominator} vanishes mod {self.p}")
        return fr.numerator * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByNoninvertible("division by zero coefficient")
        return Fraction(1) / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == 0

    def is_one(self, a):
        return a == self.one

    def coeff_str(self, a):
        return str(a)
