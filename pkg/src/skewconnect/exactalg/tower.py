"""Configured coefficient domains ("scalar towers").

A tower fixes the exact arithmetic every other module works over:

* ``RATIONAL``      -- rational functions of the geometric variables over Q
* ``PRIME_FIELD p`` -- the same over F_p
* ``EXACT_Q``       -- rational functions over Q with one extra inert
                       indeterminate ``q``
* ``H_TRUNC N``     -- truncated deformation series in ``h`` modulo h^N whose
                       coefficients are rational functions of the geometric
                       variables (h outermost, so h=0 is a coefficient
                       projection)

Elements are ``Frac`` values except in H_TRUNC mode where they are
``HSeries``.  All values are immutable after construction.
"""

from enum import Enum
from fractions import Fraction

from ..errors import InvalidTower
from .domain import Domain
from .frac import Frac
from .hseries import HSeries
from .poly import PolyRing


class TowerMode(str, Enum):
    RATIONAL = "rational"
    PRIME_FIELD = "prime_field"
    EXACT_Q = "exact_q"
    H_TRUNC = "h_trunc"


class ScalarTower:
    __slots__ = ("mode", "p", "trunc", "variables", "ring")

    def __init__(self, mode, variables, *, p=None, trunc=None):
        self.mode = TowerMode(mode)
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise InvalidTower("duplicate variable names")
        self.p = None
        self.trunc = None
        if self.mode is TowerMode.PRIME_FIELD:
            if p is None:
                raise InvalidTower("prime_field mode needs a modulus")
            self.p = p
            domain = Domain(p)  # primality checked here
            names = self.variables
        elif self.mode is TowerMode.H_TRUNC:
            if trunc is None or trunc < 1:
                raise InvalidTower("h_trunc mode needs a truncation order >= 1")
            self.trunc = trunc
            domain = Domain()
            names = self.variables
        elif self.mode is TowerMode.EXACT_Q:
            domain = Domain()
            if "q" in self.variables:
                raise InvalidTower("'q' is reserved in exact_q mode")
            names = self.variables + ("q",)
        else:
            domain = Domain()
            names = self.variables
        self.ring = PolyRing(domain, names)

    # -- convenience constructors ------------------------------------------
    @staticmethod
    def rational(variables=("z",)):
        return ScalarTower(TowerMode.RATIONAL, variables)

    @staticmethod
    def prime_field(p, variables=("z",)):
        return ScalarTower(TowerMode.PRIME_FIELD, variables, p=p)

    @staticmethod
    def exact_q(variables=("z",)):
        return ScalarTower(TowerMode.EXACT_Q, variables)

    @staticmethod
    def h_trunc(trunc, variables=("z",)):
        return ScalarTower(TowerMode.H_TRUNC, variables, trunc=trunc)

    def __eq__(self, other):
        return (
            isinstance(other, ScalarTower)
            and self.mode == other.mode
            and self.variables == other.variables
            and self.p == other.p
            and self.trunc == other.trunc
        )

    def __hash__(self):
        return hash((self.mode, self.variables, self.p, self.trunc))

    def __repr__(self):
        extra = ""
        if self.p is not None:
            extra = f", p={self.p}"
        if self.trunc is not None:
            extra = f", N={self.trunc}"
        return f"ScalarTower({self.mode.value}{extra}; {', '.join(self.variables)})"

    # -- element constructors -------------------------------------------------
    def _wrap(self, frac):
        if self.mode is TowerMode.H_TRUNC:
            return HSeries.from_frac(self.ring, self.trunc, frac)
        return frac

    def zero(self):
        return self._wrap(Frac(self.ring.zero))

    def one(self):
        return self._wrap(Frac(self.ring.one))

    def from_int(self, n):
        return self._wrap(Frac(self.ring.const(Fraction(n))))

    def from_fraction(self, fr):
        return self._wrap(Frac(self.ring.const(Fraction(fr))))

    def var(self, name):
        if name not in self.variables:
            raise InvalidTower(f"unknown variable {name!r}")
        return self._wrap(Frac(self.ring.var(name)))

    def var_index(self, name):
        return self.ring.index(name)

    def q(self):
        """The deformation unit: the symbol q, or 1+h in truncated mode."""
        if self.mode is TowerMode.EXACT_Q:
            return Frac(self.ring.var("q"))
        if self.mode is TowerMode.H_TRUNC:
            return HSeries(self.ring, self.trunc, [Frac(self.ring.one), Frac(self.ring.one)])
        raise InvalidTower("no deformation unit in this mode")

    def h(self):
        if self.mode is not TowerMode.H_TRUNC:
            raise InvalidTower("no h outside h_trunc mode")
        return HSeries.h(self.ring, self.trunc)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return self.from_fraction(Fraction(x))
        if isinstance(x, HSeries):
            if self.mode is not TowerMode.H_TRUNC:
                raise InvalidTower("h-series element in a non-truncated tower")
            return x
        if isinstance(x, Frac):
            return self._wrap(x) if self.mode is TowerMode.H_TRUNC else x
        raise InvalidTower(f"cannot coerce {type(x).__name__} into {self!r}")

    # -- predicates and maps ------------------------------------------------------
    def is_zero(self, x):
        return x.is_zero()

    def eq(self, a, b):
        return a == b

    def is_unit(self, x):
        if isinstance(x, HSeries):
            return x.is_invertible()
        return not x.is_zero()

    def inv(self, x):
        if isinstance(x, HSeries):
            return x.inverse()
        return x.inverse()

    def h0(self, x):
        """Projection h -> 0 (identity outside h_trunc mode)."""
        if isinstance(x, HSeries):
            return x.h0
        return x

    def rational_shadow(self):
        """The h=0 target tower: same variables over plain rationals."""
        if self.mode is not TowerMode.H_TRUNC:
            raise InvalidTower("rational shadow only defined for h_trunc towers")
        return ScalarTower.rational(self.variables)

    # -- q-power machinery ------------------------------------------------------------
    def q_power(self, alpha):
        """q^alpha: exact power for integers, binomial series of 1+h otherwise."""
        alpha = Fraction(alpha)
        if self.mode is TowerMode.EXACT_Q:
            if alpha.denominator != 1:
                raise InvalidTower("non-integer q-exponent needs a truncated tower")
            return self.q() ** int(alpha)
        if self.mode is TowerMode.H_TRUNC:
            if alpha.denominator == 1:
                return self.q() ** int(alpha)
            return self.h_series_power(alpha)
        raise InvalidTower("no q in this mode")

    def h_series_power(self, alpha, order=None):
        """(1+h)^alpha as a truncated generalized binomial series."""
        if self.mode is not TowerMode.H_TRUNC:
            raise InvalidTower("h_series_power needs h_trunc mode")
        n = self.trunc if order is None else order
        coeffs = []
        for k in range(n):
            coeffs.append(Frac(self.ring.const(binomial(alpha, k))))
        return HSeries(self.ring, self.trunc, coeffs)

    # -- canonical printing ---------------------------------------------------------------
    def canonical_str(self, x):
        return str(x)


def binomial(alpha, k):
    """Generalized binomial coefficient alpha(alpha-1)...(alpha-k+1)/k!."""
    alpha = Fraction(alpha)
    out = Fraction(1)
    for j in range(k):
        out *= alpha - j
    for j in range(2, k + 1):
        out /= j
    return out


def h_series_power(tower, alpha, order=None):
    """Module-level alias for the truncated binomial series (1+h)^alpha."""
    return tower.h_series_power(alpha, order)


def partial_derivative(tower, f, var):
    """Exact partial derivative of a tower element in one geometric variable."""
    if var not in tower.variables:
        raise InvalidTower(f"unknown variable {var!r}")
    return f.derivative(tower.var_index(var))


def evaluate(tower, f, assignment):
    """Evaluate at rational points given as {variable_name: Fraction}."""
    idx = {tower.var_index(k): Fraction(v) for k, v in assignment.items()}
    if isinstance(f, HSeries):
        coeffs = []
        for c in f.coeffs:
            coeffs.append(c.eval_consts(idx))
        return HSeries(f.ring, f.order, coeffs)
    return f.eval_consts(idx)
