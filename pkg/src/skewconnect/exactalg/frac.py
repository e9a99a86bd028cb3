"""Rational functions as numerator/denominator pairs of sparse polynomials.

Equality is decided by cross-multiplication, so fractions need not be in
lowest terms.  Normalization is cheap and canonicalizing: strip a common
monomial factor, reduce by gcd whenever numerator and denominator are
(effectively) univariate in the same variable, and scale the denominator
monic.  Zero denominators are rejected at construction time.
"""

from fractions import Fraction

from ..errors import DivisionByNoninvertible
from .poly import Poly, poly_from_uni, uni_exact_div, uni_gcd


class Frac:
    __slots__ = ("ring", "num", "den")

    def __init__(self, num, den=None, *, _normalized=False):
        ring = num.ring
        if den is None:
            den = ring.one
        if den.is_zero():
            raise DivisionByNoninvertible("zero denominator")
        self.ring = ring
        if _normalized:
            self.num, self.den = num, den
            return
        self.num, self.den = _normalize(num, den)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def from_poly(p):
        return Frac(p)

    @staticmethod
    def const(ring, c):
        return Frac(ring.const(Fraction(c)))

    @staticmethod
    def var(ring, name):
        return Frac(ring.var(name))

    # -- predicates ---------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        dom = self.ring.domain
        return dom.div(self.num.constant_value(), self.den.constant_value())

    def as_fraction(self):
        """Exact Fraction value; only valid over Q for constant fractions."""
        if self.ring.domain.p is not None:
            raise ValueError("not a characteristic-zero constant")
        return Fraction(self.num.constant_value()) / Fraction(self.den.constant_value())

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Frac):
            return other
        if isinstance(other, Poly):
            return Frac(other)
        if isinstance(other, (int, Fraction)):
            return Frac(self.ring.const(Fraction(other)))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Frac(-self.num, self.den, _normalized=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Frac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByNoninvertible("division by zero")
        return Frac(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num**n, self.den**n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    # -- calculus ------------------------------------------------------------
    def derivative(self, var_index):
        n, d = self.num, self.den
        return Frac(n.derivative(var_index) * d - n * d.derivative(var_index), d * d)

    def subst_poly(self, var_index, image):
        """Substitute a polynomial image for one variable."""
        num = self.num.subst_poly(var_index, image)
        den = self.den.subst_poly(var_index, image)
        if den.is_zero():
            raise DivisionByNoninvertible("substitution sends denominator to zero")
        return Frac(num, den)

    def subst_frac(self, var_index, image):
        """Substitute a Frac image for one variable."""
        return _poly_at_frac(self.num, var_index, image) / _poly_at_frac(self.den, var_index, image)

    def eval_consts(self, assignment):
        """Substitute Fraction values for several variables at once."""
        out = self
        for var_index, value in assignment.items():
            out = out.subst_poly(var_index, self.ring.const(Fraction(value)))
        return out

    # -- printing --------------------------------------------------------------
    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"Frac({self})"


def _poly_at_frac(p, var_index, image):
    ring = p.ring
    groups = {}
    for e, c in p.terms.items():
        k = e[var_index]
        rest = e[:var_index] + (0,) + e[var_index + 1 :]
        groups.setdefault(k, {})[rest] = c
    out = Frac(ring.zero)
    power = Frac(ring.one)
    last = 0
    for k in sorted(groups):
        for _ in range(k - last):
            power = power * image
        last = k
        out = out + power * Frac(ring.from_terms(groups[k]))
    return out


def _normalize(num, den):
    ring = num.ring
    dom = ring.domain
    if num.is_zero():
        return ring.zero, ring.one
    # strip a common monomial factor
    mins = None
    for e in list(num.terms) + list(den.terms):
        mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
    if mins and any(mins):
        num = Poly(ring, {tuple(a - b for a, b in zip(e, mins)): c for e, c in num.terms.items()})
        den = Poly(ring, {tuple(a - b for a, b in zip(e, mins)): c for e, c in den.terms.items()})
    # gcd-reduce when both sides live in one shared variable
    sv = num.support_vars() | den.support_vars()
    if len(sv) == 1:
        (v,) = sv
        a = num.univariate_coeffs(v)
        b = den.univariate_coeffs(v)
        g = uni_gcd(a, b, dom)
        if len(g) > 1:
            num = poly_from_uni(ring, v, uni_exact_div(a, g, dom))
            den = poly_from_uni(ring, v, uni_exact_div(b, g, dom))
    elif not den.is_constant():
        q = _exact_poly_div(num, den)
        if q is not None:
            num, den = q, ring.one
    # canonical scale: monic denominator
    lead = den.leading()[1]
    if not dom.is_one(lead):
        inv = dom.inv(lead)
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _exact_poly_div(num, den):
    """Quotient num/den when the division is exact, else None."""
    ring = num.ring
    dom = ring.domain
    den_lead = den.leading()
    de, dc = den_lead
    quotient = {}
    rem = dict(num.terms)
    guard = len(num.terms) * (den.total_degree() + 2) + 16
    while rem:
        guard -= 1
        if guard < 0:
            return None
        e = max(rem, key=lambda t: (sum(t), t))
        c = rem[e]
        qe = tuple(a - b for a, b in zip(e, de))
        if any(k < 0 for k in qe):
            return None
        qc = dom.div(c, dc)
        quotient[qe] = qc
        for te, tc in den.terms.items():
            ke = tuple(a + b for a, b in zip(qe, te))
            s = dom.sub(rem.get(ke, dom.zero), dom.mul(qc, tc))
            if dom.is_zero(s):
                rem.pop(ke, None)
            else:
                rem[ke] = s
    return Poly(ring, quotient)
