"""Integrability diagnostics for mixed systems, and p-curvature mod p.

The pairwise defect is reported unnormalized: it vanishes exactly when
the two direction actions are compatible (the matrix criterion
sigma_i(A_j) A_i = sigma_j(A_i) A_j for two difference directions), and
that vanishing equivalence is the contract.  Mixed pairs put the
differential direction in the derivative slot.
"""

from .connection import ActionType, LinearSystem
from .errors import NotDifferential, SameDirection, WrongCharacteristic
from .exactalg import Matrix, TowerMode
from .sigma import DirectionKind


def integrability_defect(s: LinearSystem, i, j) -> Matrix:
    """Unnormalized curvature component of a pair of directions.

    difference/difference:   sigma_i(A_j) A_i - sigma_j(A_i) A_j
    differential/differential: d_i(G_j) - d_j(G_i) + [G_j, G_i]
    mixed (i differential, j difference): d_i(A_j) + A_j G_i - sigma_j(G_i) A_j
    """
    base = s.base
    i = base.direction_index(i)
    j = base.direction_index(j)
    if i == j:
        raise SameDirection("defect needs two distinct directions")
    ai, aj = s.actions[i], s.actions[j]
    if ai.type is ActionType.DIFFERENCE and aj.type is ActionType.DIFFERENCE:
        Ai, Aj = ai.matrix, aj.matrix
        return base.sigma(i, Aj) * Ai - base.sigma(j, Ai) * Aj
    if ai.type is ActionType.DIFFERENTIAL and aj.type is ActionType.DIFFERENTIAL:
        Gi, Gj = ai.matrix, aj.matrix
        return base.delta(i, Gj) - base.delta(j, Gi) + (Gj * Gi - Gi * Gj)
    # mixed: normalize so the differential direction differentiates
    if ai.type is ActionType.DIFFERENTIAL:
        d, Gd = i, ai.matrix
        e, Ae = j, aj.matrix
    else:
        d, Gd = j, aj.matrix
        e, Ae = i, ai.matrix
    return base.delta(d, Ae) + Ae * Gd - base.sigma(e, Gd) * Ae


def is_integrable(s: LinearSystem) -> bool:
    """True when every pairwise defect vanishes (single directions trivially)."""
    keys = s.directions()
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            if not integrability_defect(s, keys[a], keys[b]).is_zero():
                return False
    return True


def p_curvature(s: LinearSystem, key) -> Matrix:
    """Matrix of the p-th iterate of v -> d(v) - G v over a prime field.

    Over F_p(z) with d = d/dz one has d^p = 0, so this iterate is the
    whole obstruction; it is checked to commute with multiplication by
    the direction variable (linearity over the function field) before
    being returned.
    """
    base = s.base
    t = base.tower
    if t.mode is not TowerMode.PRIME_FIELD:
        raise WrongCharacteristic("p-curvature needs a prime-field tower")
    i = base.direction_index(key)
    if base.directions[i].kind is not DirectionKind.IDENTITY:
        raise NotDifferential(f"direction {key!r} is not differential")
    if s.actions[i].type is not ActionType.DIFFERENTIAL:
        raise NotDifferential(f"direction {key!r} carries no differential action")
    G = s.actions[i].matrix
    p = t.p

    def nabla(v):
        return base.delta(i, v) - G * v

    def iterate(v, n):
        for _ in range(n):
            v = nabla(v)
        return v

    columns = []
    ident = Matrix.identity(t, s.rank)
    for c in range(s.rank):
        columns.append(iterate(ident.column(c), p))
    psi = Matrix(t, [[columns[c].data[r][0] for c in range(s.rank)] for r in range(s.rank)])
    # linearity certificate: psi(z v) = z psi(v) on basis columns
    z = t.var(base.directions[i].variable)
    for c in range(s.rank):
        lhs = iterate(ident.column(c).scale(z), p)
        rhs = psi.column(c).scale(z)
        assert lhs == rhs, "p-curvature failed the linearity certificate"
    return psi
