"""Base rings with twisted directions and skew (Ore) operators.

A ``SigmaBase`` equips each geometric variable with an endomorphism
sigma_i (identity, shift z -> z + step, dilation z -> ratio * z, or a
general univariate image) and the induced sigma-derivation

    delta_i(f) = (sigma_i(f) - f) / (sigma_i(z_i) - z_i)

(the partial derivative in the identity case).  The twisted Leibniz rule
delta(ab) = delta(a) b + sigma(a) delta(b) holds for every direction.

Skew polynomials in one direction follow the commutation X*a =
sigma(a)*X (+ delta(a) in the sigma-delta flavor), so X acts on scalars
as sigma resp. as delta.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import (
    DivisionByNoninvertible,
    NotMonic,
    SigmaBaseError,
    SubstitutionSingular,
)
from .exactalg import Frac, HSeries, Matrix, ScalarTower, TowerMode


class DirectionKind(str, Enum):
    IDENTITY = "identity"
    SHIFT = "shift"
    DILATION = "dilation"
    ENDOMORPHISM = "endomorphism"


@dataclass(frozen=True)
class Direction:
    variable: str
    kind: DirectionKind
    parameter: object = None  # step, ratio, or variable image


class SigmaBase:
    """A scalar tower plus one twisted direction per geometric variable."""

    def __init__(self, tower: ScalarTower, directions):
        self.tower = tower
        self.directions = tuple(directions)
        seen = set()
        for d in self.directions:
            if d.variable in seen:
                raise SigmaBaseError(f"duplicate direction for variable {d.variable!r}")
            seen.add(d.variable)
            if d.variable not in tower.variables:
                raise SigmaBaseError(f"direction variable {d.variable!r} not in the tower")
            self._check_direction(d)

    def _check_direction(self, d):
        t = self.tower
        if d.kind is DirectionKind.IDENTITY:
            return
        if d.kind is DirectionKind.SHIFT:
            step = t.coerce(d.parameter)
            if step.is_zero():
                raise SigmaBaseError("shift step must be nonzero")
            if not t.is_unit(step) and not self._confluent_scalar(step):
                raise SigmaBaseError("shift step must be invertible (or h-divisible with unit cofactor)")
            return
        if d.kind is DirectionKind.DILATION:
            ratio = t.coerce(d.parameter)
            qm1 = ratio - t.one()
            if qm1.is_zero():
                raise SigmaBaseError("dilation ratio 1 is the identity direction")
            if not t.is_unit(qm1) and not self._confluent_scalar(qm1):
                raise SigmaBaseError("dilation needs ratio-1 invertible (or h-divisible with unit cofactor)")
            return
        if d.kind is DirectionKind.ENDOMORPHISM:
            if t.mode is TowerMode.H_TRUNC:
                raise SigmaBaseError("general endomorphisms are not supported over truncated towers")
            image = d.parameter
            if not isinstance(image, Frac):
                raise SigmaBaseError("endomorphism direction needs a Frac image of its variable")
            diff = image - t.var(d.variable)
            if diff.is_zero():
                raise SigmaBaseError("endomorphism image equals the variable; use identity")
            return
        raise SigmaBaseError(f"unknown direction kind {d.kind}")

    def _confluent_scalar(self, x):
        """True when x = h * (unit) in a truncated tower."""
        if not isinstance(x, HSeries):
            return False
        return x.h0.is_zero() and not x.shift_down().h0.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, SigmaBase)
            and self.tower == other.tower
            and len(self.directions) == len(other.directions)
            and all(
                a.variable == b.variable and a.kind == b.kind and _param_eq(self.tower, a, b)
                for a, b in zip(self.directions, other.directions)
            )
        )

    def __repr__(self):
        ds = ", ".join(f"{d.variable}:{d.kind.value}" for d in self.directions)
        return f"SigmaBase({self.tower!r}; {ds})"

    # -- direction lookup -----------------------------------------------------
    def direction_index(self, key):
        if isinstance(key, int):
            return key
        for i, d in enumerate(self.directions):
            if d.variable == key:
                return i
        raise SigmaBaseError(f"no direction named {key!r}")

    def direction(self, key):
        return self.directions[self.direction_index(key)]

    def var_index(self, i):
        return self.tower.var_index(self.directions[i].variable)

    # -- sigma ------------------------------------------------------------------
    def sigma(self, i, x):
        i = self.direction_index(i)
        if isinstance(x, Matrix):
            return x.map_entries(lambda e: self.sigma(i, e))
        d = self.directions[i]
        if d.kind is DirectionKind.IDENTITY:
            return x
        t = self.tower
        v = self.var_index(i)
        try:
            if t.mode is TowerMode.H_TRUNC:
                alpha, beta = self._affine_parts(d)
                return x.subst_affine(v, alpha, beta)
            if d.kind is DirectionKind.SHIFT:
                step = t.coerce(d.parameter)
                return x.subst_frac(v, Frac(t.ring.var(d.variable)) + step)
            if d.kind is DirectionKind.DILATION:
                ratio = t.coerce(d.parameter)
                return x.subst_frac(v, Frac(t.ring.var(d.variable)) * ratio)
            return x.subst_frac(v, d.parameter)
        except DivisionByNoninvertible as e:
            raise SubstitutionSingular(str(e)) from e

    def sigma_power(self, i, x, n):
        for _ in range(n):
            x = self.sigma(i, x)
        return x

    def _affine_parts(self, d):
        t = self.tower
        if d.kind is DirectionKind.SHIFT:
            return t.one(), t.coerce(d.parameter)
        return t.coerce(d.parameter), t.zero()

    # -- the twist divisor sigma(z) - z ------------------------------------------
    def sigma_shift_of_var(self, i):
        """sigma_i(z_i) - z_i as a tower element."""
        i = self.direction_index(i)
        d = self.directions[i]
        t = self.tower
        if d.kind is DirectionKind.IDENTITY:
            return t.zero()
        if d.kind is DirectionKind.SHIFT:
            return t.coerce(d.parameter)
        if d.kind is DirectionKind.DILATION:
            return (t.coerce(d.parameter) - t.one()) * t.var(d.variable)
        return d.parameter - t.var(d.variable)

    # -- delta ---------------------------------------------------------------------
    def delta(self, i, x):
        i = self.direction_index(i)
        if isinstance(x, Matrix):
            return x.map_entries(lambda e: self.delta(i, e))
        d = self.directions[i]
        t = self.tower
        v = self.var_index(i)
        if d.kind is DirectionKind.IDENTITY:
            return x.derivative(v)
        divisor = self.sigma_shift_of_var(i)
        if t.is_unit(divisor):
            return (self.sigma(i, x) - x) / divisor
        if t.mode is TowerMode.H_TRUNC:
            # confluent direction: divide the first difference by h exactly
            alpha, beta = self._affine_parts(d)
            try:
                diff = x.first_difference_div_h(v, alpha, beta)
                return diff / divisor.shift_down()
            except DivisionByNoninvertible as e:
                raise SubstitutionSingular(str(e)) from e
        raise SubstitutionSingular(f"twist divisor of direction {d.variable!r} is not invertible")

    def delta_power(self, i, x, n):
        for _ in range(n):
            x = self.delta(i, x)
        return x

    # -- grid points ------------------------------------------------------------------
    def orbit_point(self, i, a, n):
        """The n-th point of the sigma_i orbit of the scalar a.

        This moves the point itself (a, a+step, ... resp. a, ratio*a, ...);
        applying sigma to the constant function a would fix it.
        """
        i = self.direction_index(i)
        d = self.directions[i]
        t = self.tower
        a = t.coerce(a)
        if d.kind is DirectionKind.IDENTITY or n == 0:
            return a
        if d.kind is DirectionKind.SHIFT:
            return a + t.coerce(d.parameter) * t.from_int(n)
        if d.kind is DirectionKind.DILATION:
            return a * t.coerce(d.parameter) ** n
        v = self.var_index(i)
        out = a
        for _ in range(n):
            out = d.parameter.subst_frac(v, out)
        return out


def _param_eq(tower, a, b):
    if a.parameter is None and b.parameter is None:
        return True
    if a.parameter is None or b.parameter is None:
        return False
    return tower.coerce(a.parameter) == tower.coerce(b.parameter)


def apply_sigma(base, i, f):
    """Substitute sigma_i into a tower element."""
    return base.sigma(i, f)


def apply_delta(base, i, f):
    """Apply the sigma-derivation of direction i to a tower element."""
    return base.delta(i, f)


# ---------------------------------------------------------------------------
# Skew (Ore) operators
# ---------------------------------------------------------------------------


class XAction(str, Enum):
    SIGMA_ONLY = "sigma"
    SIGMA_DELTA = "sigma_delta"


class OreOperator:
    """Skew polynomial sum c_k X^k in one direction of a SigmaBase."""

    __slots__ = ("base", "direction", "flavor", "coeffs")

    def __init__(self, base, direction, flavor, coeffs):
        self.base = base
        self.direction = base.direction_index(direction)
        self.flavor = XAction(flavor)
        cs = [base.tower.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors ----------------------------------------------------------
    @staticmethod
    def zero(base, direction, flavor):
        return OreOperator(base, direction, flavor, [])

    @staticmethod
    def one(base, direction, flavor):
        return OreOperator(base, direction, flavor, [base.tower.one()])

    @staticmethod
    def x(base, direction, flavor):
        t = base.tower
        return OreOperator(base, direction, flavor, [t.zero(), t.one()])

    @staticmethod
    def scalar(base, direction, flavor, c):
        return OreOperator(base, direction, flavor, [base.tower.coerce(c)])

    # -- structure ----------------------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise SigmaBaseError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def coefficient(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.base.tower.zero()

    def _check_compatible(self, other):
        if self.base != other.base or self.direction != other.direction or self.flavor != other.flavor:
            raise SigmaBaseError("operators live in different skew rings")

    # -- arithmetic ------------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        self._check_compatible(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OreOperator(
            self.base,
            self.direction,
            self.flavor,
            [self.coefficient(k) + other.coefficient(k) for k in range(n)],
        )

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __neg__(self):
        return OreOperator(self.base, self.direction, self.flavor, [-c for c in self.coeffs])

    def _coerce(self, other):
        if isinstance(other, OreOperator):
            return other
        return OreOperator.scalar(self.base, self.direction, self.flavor, other)

    def scale_left(self, c):
        c = self.base.tower.coerce(c)
        return OreOperator(self.base, self.direction, self.flavor, [c * a for a in self.coeffs])

    def _x_times(self):
        """Left-multiply by X using the commutation rule."""
        base, i = self.base, self.direction
        shifted = [base.tower.zero()] + [base.sigma(i, c) for c in self.coeffs]
        if self.flavor is XAction.SIGMA_DELTA:
            for k, c in enumerate(self.coeffs):
                shifted[k] = shifted[k] + base.delta(i, c)
        return OreOperator(base, i, self.flavor, shifted)

    def __mul__(self, other):
        other = self._coerce(other)
        self._check_compatible(other)
        acc = OreOperator.zero(self.base, self.direction, self.flavor)
        xk = other
        for k, c in enumerate(self.coeffs):
            if k > 0:
                xk = xk._x_times()
            if not c.is_zero():
                acc = acc + xk.scale_left(c)
        return acc

    def __pow__(self, n):
        if n < 0:
            raise SigmaBaseError("negative operator power")
        out = OreOperator.one(self.base, self.direction, self.flavor)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, OreOperator):
            return NotImplemented
        return (
            self.base == other.base
            and self.direction == other.direction
            and self.flavor == other.flavor
            and len(self.coeffs) == len(other.coeffs)
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    # -- action ---------------------------------------------------------------------
    def apply(self, f):
        """Sum of c_k op^k(f) with op = sigma or delta according to flavor."""
        base, i = self.base, self.direction
        acc = base.tower.zero() if not isinstance(f, Matrix) else Matrix.zeros(base.tower, f.rows, f.cols)
        cur = f
        for k, c in enumerate(self.coeffs):
            if k > 0:
                cur = base.sigma(i, cur) if self.flavor is XAction.SIGMA_ONLY else base.delta(i, cur)
            if c.is_zero():
                continue
            term = cur * c if isinstance(cur, Matrix) else c * cur
            acc = acc + term
        return acc

    def monic(self):
        if self.is_zero():
            raise NotMonic("zero operator cannot be made monic")
        lead = self.coeffs[-1]
        if not self.base.tower.is_unit(lead):
            raise NotMonic("leading coefficient is not invertible")
        inv = self.base.tower.inv(lead)
        return OreOperator(self.base, self.direction, self.flavor, [inv * c for c in self.coeffs])

    def __str__(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for k in range(self.degree, -1, -1):
            c = self.coefficient(k)
            if c.is_zero():
                continue
            cs = self.base.tower.canonical_str(c)
            if any(op in cs[1:] for op in "+-") or "*" in cs or " " in cs or "/" in cs:
                if not (cs.startswith("(") and cs.endswith(")")):
                    cs = f"({cs})"
            if k == 0:
                pieces.append(cs)
            else:
                xp = "X" if k == 1 else f"X^{k}"
                pieces.append(xp if c.is_one() else f"{cs}*{xp}")
        return " + ".join(pieces)

    def __repr__(self):
        return f"OreOperator({self})"


def ore_mul(left, right):
    """Noncommutative product of skew operators (same direction, same flavor)."""
    return left * right


def ore_apply(op, f):
    """Apply a skew operator to a tower element (or matrix of them)."""
    return op.apply(f)
