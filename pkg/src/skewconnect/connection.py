"""Linear systems as connections on free modules.

A rank-mu ``LinearSystem`` carries, per direction of its base, either a
difference action ``sigma_i(Y) = A_i Y`` (A_i invertible; the semilinear
endomorphism acting on module elements is represented by A_i^{-1}, which
is what :func:`volte` returns) or a differential action ``d_i(Y) = G_i Y``.
Solution columns are always on the right; every construction elsewhere is
stated in this A/G normal form.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import (
    DivisionByNoninvertible,
    InvalidSystem,
    NoninvertibleA0,
    NotMonic,
    OrderMismatch,
    SingularA,
    SingularDivisor,
    SingularP,
)
from .exactalg import HSeries, Matrix, TowerMode
from .sigma import DirectionKind, OreOperator, SigmaBase, XAction


class ActionType(str, Enum):
    DIFFERENCE = "difference"
    DIFFERENTIAL = "differential"


@dataclass
class Action:
    type: ActionType
    matrix: Matrix  # A for difference, G for differential
    quotient: Matrix = None  # exact (A - I)/(sigma(z)-z) when known at build time


class LinearSystem:
    """Per-direction matrix data for a rank-mu connection."""

    def __init__(self, base: SigmaBase, rank: int, actions):
        self.base = base
        self.rank = rank
        self.actions = {}
        self._volte = {}
        for key, action in actions.items():
            i = base.direction_index(key)
            d = base.directions[i]
            if action.matrix.rows != rank or action.matrix.cols != rank:
                raise InvalidSystem(f"action matrix for {d.variable!r} is not {rank}x{rank}")
            if action.type is ActionType.DIFFERENCE:
                if d.kind is DirectionKind.IDENTITY:
                    raise InvalidSystem(f"difference action on identity direction {d.variable!r}")
                try:
                    self._volte[i] = action.matrix.inverse(error=SingularA)
                except SingularA:
                    raise SingularA(f"system matrix in direction {d.variable!r} is not invertible")
            else:
                if d.kind is not DirectionKind.IDENTITY:
                    raise InvalidSystem(f"differential action on twisted direction {d.variable!r}")
            self.actions[i] = action
        self.companion_of = None

    # -- convenience constructors ------------------------------------------
    @staticmethod
    def difference(base, direction, A, *, quotient=None):
        i = base.direction_index(direction)
        return LinearSystem(base, A.rows, {i: Action(ActionType.DIFFERENCE, A, quotient)})

    @staticmethod
    def differential(base, direction, G):
        i = base.direction_index(direction)
        return LinearSystem(base, G.rows, {i: Action(ActionType.DIFFERENTIAL, G)})

    def directions(self):
        return sorted(self.actions)

    def action(self, key):
        return self.actions[self.base.direction_index(key)]

    def is_difference(self, key):
        return self.action(key).type is ActionType.DIFFERENCE

    def system_matrix(self, key):
        return self.action(key).matrix

    # -- the semilinear endomorphism --------------------------------------------
    def volte(self, key):
        """The inverse system matrix: the semilinear action on module elements."""
        i = self.base.direction_index(key)
        if self.actions[i].type is not ActionType.DIFFERENCE:
            raise InvalidSystem("volte is only defined for difference directions")
        return self._volte[i]

    # -- derived derivation matrix -------------------------------------------------
    def quotient_matrix(self, key):
        """G_i with d_i(Y) = G_i Y; for difference actions (A - I)/(sigma(z)-z)."""
        i = self.base.direction_index(key)
        action = self.actions[i]
        if action.type is ActionType.DIFFERENTIAL:
            return action.matrix
        if action.quotient is not None:
            return action.quotient
        base = self.base
        t = base.tower
        divisor = base.sigma_shift_of_var(i)
        diff = action.matrix - Matrix.identity(t, self.rank)
        if t.is_unit(divisor):
            inv = t.inv(divisor)
            return diff.map_entries(lambda e: e * inv)
        if t.mode is TowerMode.H_TRUNC and isinstance(divisor, HSeries):
            g = divisor.shift_down()
            if not g.is_zero() and t.is_unit(g):
                try:
                    shifted = diff.map_entries(lambda e: e.shift_down())
                except DivisionByNoninvertible as e:
                    raise SingularDivisor(
                        f"system matrix is not congruent to the identity mod h in direction {key!r}"
                    ) from e
                ginv = t.inv(g)
                return shifted.map_entries(lambda e: e * ginv)
        raise SingularDivisor(f"twist divisor of direction {key!r} is not invertible")

    # -- horizontality ----------------------------------------------------------------
    def residual(self, Y: Matrix, key):
        """sigma_i(Y) - A_i Y, or d_i(Y) - G_i Y, as exact matrices."""
        if Y.rows != self.rank:
            raise OrderMismatch(f"solution candidate has {Y.rows} rows, system has rank {self.rank}")
        i = self.base.direction_index(key)
        action = self.actions[i]
        if action.type is ActionType.DIFFERENCE:
            return self.base.sigma(i, Y) - action.matrix * Y
        return self.base.delta(i, Y) - action.matrix * Y

    # -- base change --------------------------------------------------------------------
    def gauge(self, P: Matrix):
        """Base change Y -> P Y: A -> sigma(P) A P^-1, G -> P G P^-1 + d(P) P^-1."""
        try:
            Pinv = P.inverse(error=SingularP)
        except SingularP:
            raise SingularP("gauge matrix is not invertible")
        out = {}
        for i, action in self.actions.items():
            if action.type is ActionType.DIFFERENCE:
                out[i] = Action(ActionType.DIFFERENCE, self.base.sigma(i, P) * action.matrix * Pinv)
            else:
                out[i] = Action(
                    ActionType.DIFFERENTIAL,
                    P * action.matrix * Pinv + self.base.delta(i, P) * Pinv,
                )
        return LinearSystem(self.base, self.rank, out)

    def __eq__(self, other):
        if not isinstance(other, LinearSystem):
            return NotImplemented
        if self.base != other.base or self.rank != other.rank:
            return False
        if set(self.actions) != set(other.actions):
            return False
        for i, a in self.actions.items():
            b = other.actions[i]
            if a.type != b.type or a.matrix != b.matrix:
                return False
        return True

    def __repr__(self):
        parts = []
        for i in self.directions():
            a = self.actions[i]
            parts.append(f"{self.base.directions[i].variable}:{a.type.value}")
        return f"LinearSystem(rank={self.rank}; {', '.join(parts)})"


def volte(system, key):
    return system.volte(key)


def residual(system, Y, key):
    return system.residual(Y, key)


def gauge_transform(system, P):
    return system.gauge(P)


def companion_system(op: OreOperator):
    """Companion system of a monic sigma-only skew polynomial.

    A scalar f solves op(f) = 0 exactly when the column
    (f, sigma f, ..., sigma^(mu-1) f) is horizontal for the returned
    rank-mu system.
    """
    if op.flavor is not XAction.SIGMA_ONLY:
        raise NotMonic("companion form needs a sigma-only operator")
    if not op.is_monic():
        raise NotMonic("companion form needs a monic operator")
    mu = op.degree
    if mu < 1:
        raise NotMonic("companion form needs degree >= 1")
    t = op.base.tower
    a0 = op.coefficient(0)
    if not t.is_unit(a0):
        raise NoninvertibleA0("constant coefficient must be invertible")
    rows = []
    for r in range(mu - 1):
        rows.append([t.one() if c == r + 1 else t.zero() for c in range(mu)])
    rows.append([-op.coefficient(k) for k in range(mu)])
    A = Matrix(t, rows)
    system = LinearSystem.difference(op.base, op.direction, A)
    system.companion_of = tuple(op.coefficient(k) for k in range(mu))
    return system


def derivation_companion(op: OreOperator):
    """First-order system on (f, delta f, ..., delta^(r-1) f) for a
    sigma-delta operator; differential for the identity direction,
    otherwise the difference system A = I + (sigma(z)-z) G."""
    if op.flavor is not XAction.SIGMA_DELTA:
        raise NotMonic("derivation companion needs a sigma-delta operator")
    r = op.degree
    if r < 1:
        raise NotMonic("derivation companion needs degree >= 1")
    base = op.base
    t = base.tower
    lead = op.coefficient(r)
    if not t.is_unit(lead):
        raise NoninvertibleA0("leading coefficient must be invertible")
    inv = t.inv(lead)
    rows = []
    for k in range(r - 1):
        rows.append([t.one() if c == k + 1 else t.zero() for c in range(r)])
    rows.append([-(op.coefficient(k) * inv) for k in range(r)])
    G = Matrix(t, rows)
    i = op.direction
    if base.directions[i].kind is DirectionKind.IDENTITY:
        return LinearSystem.differential(base, i, G)
    divisor = base.sigma_shift_of_var(i)
    A = Matrix.identity(t, r) + G.scale(divisor)
    return LinearSystem.difference(base, i, A, quotient=G)
