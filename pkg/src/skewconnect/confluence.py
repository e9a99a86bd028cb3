"""The q -> 1 engine.

Over the truncated tower the deformation unit is q = 1 + h; q-numbers,
q-factorials and q-Pochhammer symbols are exact elements, q^alpha for
rational alpha is the truncated binomial series, and a q-difference
system whose matrix is congruent to the identity mod h specializes at
h = 0 to a differential system via G = (A - I)/(sigma(z) - z).

The basic hypergeometric family of order r with parameters
alpha_1..alpha_r, beta_1..beta_r (beta_r = 1) is built both as a scalar
skew operator in X = sigma (used for residual verification and for the
Casorati rate) and as the first-order system on (y, delta_q y, ...,
delta_q^(r-1) y), whose matrix is I + (q-1) z G and which therefore
specializes to the companion of the ordinary hypergeometric equation.
"""

from dataclasses import dataclass
from fractions import Fraction

from .connection import Action, ActionType, LinearSystem, companion_system, derivation_companion
from .constructions import casorati_rate
from .errors import (
    ConfluenceObstructed,
    DegenerateParameters,
    InvalidTower,
    ParameterModeMismatch,
)
from .exactalg import Frac, HSeries, ScalarTower, TowerMode
from .sigma import Direction, DirectionKind, OreOperator, SigmaBase, XAction


def q_number(tower, n):
    """(n)_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise DegenerateParameters("q-number of a negative integer")
    q = tower.q()
    out = tower.zero()
    for _ in range(n):
        out = out * q + tower.one()
    return out


def q_factorial(tower, n):
    """[n]!_q = product of (j)_q for j = 1..n."""
    out = tower.one()
    for j in range(1, n + 1):
        out = out * q_number(tower, j)
    return out


def q_power(tower, alpha):
    """q^alpha (exact for integer alpha, binomial series of 1+h otherwise)."""
    try:
        return tower.q_power(alpha)
    except InvalidTower as e:
        raise ParameterModeMismatch(str(e)) from e


def q_pochhammer(tower, alpha, n):
    """(q^alpha; q)_n = product_{k<n} (1 - q^(alpha+k))."""
    q = tower.q()
    qa = q_power(tower, alpha)
    out = tower.one()
    cur = qa
    for _ in range(n):
        out = out * (tower.one() - cur)
        cur = cur * q
    return out


def _div_q_minus_one(tower, x):
    """x / (q - 1), exact in both modes (coefficient shift when q = 1 + h)."""
    qm1 = tower.q() - tower.one()
    if tower.is_unit(qm1):
        return x / qm1
    # truncated mode with q = 1 + h: qm1 = h * unit
    g = qm1.shift_down()
    return x.shift_down() / g


@dataclass(frozen=True)
class HypergeometricSpec:
    """Order-r basic hypergeometric parameters; beta_r = 1 is forced."""

    alphas: tuple
    betas: tuple
    mode: str = "exact_q"
    trunc: int = None

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(Fraction(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(Fraction(b) for b in self.betas))
        r = len(self.alphas)
        if r < 2 or len(self.betas) != r:
            raise DegenerateParameters("need r >= 2 upper and r lower parameters")
        if self.betas[-1] != 1:
            raise ParameterModeMismatch("the last lower parameter must be 1")
        mode = TowerMode(self.mode)
        if mode not in (TowerMode.EXACT_Q, TowerMode.H_TRUNC):
            raise ParameterModeMismatch("mode must be exact_q or h_trunc")
        if mode is TowerMode.EXACT_Q:
            if any(a.denominator != 1 for a in self.alphas + self.betas):
                raise ParameterModeMismatch("exact_q mode needs integer parameters")
        elif self.trunc is None or self.trunc < 1:
            raise ParameterModeMismatch("h_trunc mode needs a truncation order")

    @property
    def order(self):
        return len(self.alphas)

    def tower(self):
        if TowerMode(self.mode) is TowerMode.EXACT_Q:
            return ScalarTower.exact_q(("z",))
        return ScalarTower.h_trunc(self.trunc, ("z",))


class QHypergeometric:
    """Built family: scalar operators plus the two companion systems."""

    def __init__(self, spec, tower, base, sigma_op, delta_op, sigma_companion, system):
        self.spec = spec
        self.tower = tower
        self.base = base
        self.sigma_op = sigma_op
        self.delta_op = delta_op
        self.sigma_companion = sigma_companion
        self.system = system


def build_q_hypergeometric(spec: HypergeometricSpec) -> QHypergeometric:
    """Build the order-r q-hypergeometric operator and its companions."""
    tower = spec.tower()
    q = tower.q()
    base = SigmaBase(tower, [Direction("z", DirectionKind.DILATION, q)])
    z = tower.var("z")
    b_units = [q_power(tower, b - 1) for b in spec.betas]
    a_units = [q_power(tower, a) for a in spec.alphas]

    # sigma form: prod_j (b_j X - 1) - z prod_i (a_i X - 1), X acting as sigma
    def sigma_product(units):
        acc = OreOperator.one(base, 0, XAction.SIGMA_ONLY)
        for u in units:
            acc = acc * OreOperator(base, 0, XAction.SIGMA_ONLY, [-tower.one(), u])
        return acc

    sigma_op = sigma_product(b_units) - sigma_product(a_units).scale_left(z)

    # delta form: prod_j (b_j z X + (b_j-1)/(q-1)) - z prod_i (...), X acting as delta_q
    def delta_product(units):
        acc = OreOperator.one(base, 0, XAction.SIGMA_DELTA)
        for u in units:
            const = _div_q_minus_one(tower, u - tower.one())
            acc = acc * OreOperator(base, 0, XAction.SIGMA_DELTA, [const, u * z])
        return acc

    delta_op = delta_product(b_units) - delta_product(a_units).scale_left(z)
    _assert_monomial_action(base, tower, b_units[0], spec.betas[0])

    sigma_companion = companion_system(sigma_op.monic())
    system = derivation_companion(delta_op)
    return QHypergeometric(spec, tower, base, sigma_op, delta_op, sigma_companion, system)


def _assert_monomial_action(base, tower, b_unit, beta):
    """The delta-form factor is diagonal on monomials: multiplied through by
    q-1 the action on z^n is exactly (b q^n - 1) z^n."""
    z = tower.var("z")
    const = _div_q_minus_one(tower, b_unit - tower.one())
    factor = OreOperator(base, 0, XAction.SIGMA_DELTA, [const, b_unit * z])
    q = tower.q()
    qm1 = q - tower.one()
    for n in range(3):
        mono = z**n
        expected = (b_unit * q**n - tower.one()) * mono
        assert qm1 * factor.apply(mono) == expected, f"factor action on z^{n} disagrees"


def heine_coefficients(spec: HypergeometricSpec, count, tower=None):
    """c_0..c_(count-1) of the basic hypergeometric series, by exact recursion.

    c_(n+1)/c_n = prod_i (q^(alpha_i+n) - 1) / prod_j (q^(beta_j+n) - 1);
    in the truncated mode each factor is divided by h first, which is
    exact and keeps the ratio a unit.
    """
    tower = tower or spec.tower()
    for b in spec.betas:
        if b.denominator == 1 and b <= 0 and count >= 2 - b:
            raise DegenerateParameters(f"lower parameter {b} kills a denominator factor")
    q = tower.q()
    a_units = [q_power(tower, a) for a in spec.alphas]
    b_units = [q_power(tower, b) for b in spec.betas]
    confluent = tower.mode is TowerMode.H_TRUNC

    def factor(u, n):
        x = u * q**n - tower.one()
        if confluent:
            return x.shift_down()
        return x

    coeffs = [tower.one()]
    for n in range(count - 1):
        num = tower.one()
        for u in a_units:
            num = num * factor(u, n)
        den = tower.one()
        for u in b_units:
            den = den * factor(u, n)
        if not tower.is_unit(den):
            raise DegenerateParameters(f"vanishing denominator at series index {n + 1}")
        coeffs.append(coeffs[-1] * num / den)
    return coeffs


class HeineSeries:
    """Truncated basic hypergeometric series with its residual verdict."""

    def __init__(self, spec, tower, coefficients):
        self.spec = spec
        self.tower = tower
        self.coefficients = coefficients

    @property
    def order(self):
        return len(self.coefficients) - 1

    def polynomial(self):
        z = self.tower.var("z")
        acc = self.tower.zero()
        for n, c in enumerate(self.coefficients):
            acc = acc + c * z**n
        return acc

    def residual_z_coefficients(self, operator, upto):
        res = operator.apply(self.polynomial())
        return z_coefficients(self.tower, res, upto)


def heine_series(spec: HypergeometricSpec, order, *, qhg=None) -> HeineSeries:
    """Series through z-order ``order``; coefficients exactly as the
    q-Pochhammer ratio demands.  Feeding it back to the sigma-form
    operator leaves residual z-coefficients 0 through ``order``."""
    qhg = qhg or build_q_hypergeometric(spec)
    coeffs = heine_coefficients(spec, order + 1, qhg.tower)
    return HeineSeries(spec, qhg.tower, coeffs)


def z_coefficients(tower, x, upto):
    """Coefficients of z^0..z^upto of a polynomial tower element."""
    v = tower.var_index("z")

    def frac_coeffs(fr):
        if fr.den.degree_in(v) != 0:
            raise InvalidTower("element is not polynomial in z")
        out = [Frac(fr.ring.zero)] * (upto + 1)
        for e, c in fr.num.terms.items():
            k = e[v]
            rest = e[:v] + (0,) + e[v + 1 :]
            if k <= upto:
                mono = Frac(fr.ring.from_terms({rest: c}), fr.den)
                out[k] = out[k] + mono
        return out

    if isinstance(x, HSeries):
        tables = [frac_coeffs(c) for c in x.coeffs]
        return [
            HSeries(x.ring, x.order, [tables[m][k] for m in range(x.order)])
            for k in range(upto + 1)
        ]
    return frac_coeffs(x)


def confluence_specialize(system: LinearSystem) -> LinearSystem:
    """h = 0 limit of a truncated-tower system as a differential system.

    Every difference direction must deform the identity (its matrix
    congruent to I mod h and its twist h-divisible); the result carries
    the derivation matrices G_i|_(h=0) on identity directions.
    """
    t = system.base.tower
    if t.mode is not TowerMode.H_TRUNC:
        raise ConfluenceObstructed("confluence needs a truncated tower")
    shadow = t.rational_shadow()
    shadow_base = SigmaBase(
        shadow, [Direction(d.variable, DirectionKind.IDENTITY) for d in system.base.directions]
    )
    out = {}
    for i, action in system.actions.items():
        if action.type is ActionType.DIFFERENTIAL:
            out[i] = Action(ActionType.DIFFERENTIAL, action.matrix.h0(shadow))
            continue
        d = system.base.directions[i]
        shift = system.base.sigma_shift_of_var(i)
        if not (isinstance(shift, HSeries) and shift.h0.is_zero()):
            raise ConfluenceObstructed(
                f"direction {d.variable!r} does not deform the identity"
            )
        A = action.matrix
        for r in range(A.rows):
            for c in range(A.cols):
                want_one = r == c
                val = t.h0(A.data[r][c])
                ok = val.is_one() if want_one else val.is_zero()
                if not ok:
                    raise ConfluenceObstructed(
                        f"entry ({r},{c}) of the matrix in direction {d.variable!r} "
                        f"is not congruent to {'1' if want_one else '0'} mod h",
                        detail={"direction": d.variable, "row": r, "col": c},
                    )
        G = system.quotient_matrix(i)
        out[i] = Action(ActionType.DIFFERENTIAL, G.h0(shadow))
    return LinearSystem(shadow_base, system.rank, out)


def hypergeometric_ode_companion(spec: HypergeometricSpec) -> LinearSystem:
    """Companion of the ordinary hypergeometric equation
    prod_j (z d/dz + beta_j - 1) y = z prod_i (z d/dz + alpha_i) y,
    built independently over the plain rational tower."""
    tower = ScalarTower.rational(("z",))
    base = SigmaBase(tower, [Direction("z", DirectionKind.IDENTITY)])
    z = tower.var("z")

    def product(consts):
        acc = OreOperator.one(base, 0, XAction.SIGMA_DELTA)
        for c in consts:
            acc = OreOperator(base, 0, XAction.SIGMA_DELTA, [tower.from_fraction(c), z]) * acc
        return acc

    op = product([b - 1 for b in spec.betas]) - product(list(spec.alphas)).scale_left(z)
    return derivation_companion(op)


@dataclass
class TrivialityReport:
    rate: object
    rate_at_zero: object
    rate_at_infinity: object
    trivial: bool
    exponent_zero: Fraction
    exponent_infinity: Fraction


def closed_form_casorati_rate(spec: HypergeometricSpec, tower=None):
    """(numerator, denominator) of the first-order Casorati rate:
    q^(sum(1-beta)) (1 - z) / (1 - q^(sum(1+alpha-beta)) z)."""
    tower = tower or spec.tower()
    z = tower.var("z")
    e0 = sum((1 - b for b in spec.betas), Fraction(0))
    einf = sum((1 + a - b for a, b in zip(spec.alphas, spec.betas)), Fraction(0))
    num = q_power(tower, e0) * (tower.one() - z)
    den = tower.one() - q_power(tower, einf) * z
    return num, den


def casorati_trivial_predicate(spec: HypergeometricSpec) -> TrivialityReport:
    """Rank-one Casorati data and the exact triviality predicate:
    trivial iff r is even and sum(1-beta_j) = sum(alpha_j) = 0."""
    qhg = build_q_hypergeometric(spec)
    tower = qhg.tower
    rate = casorati_rate(qhg.sigma_companion)
    num, den = closed_form_casorati_rate(spec, tower)
    assert rate * den == num, "companion determinant disagrees with the closed-form rate"
    r0 = _eval_at_zero(tower, num) / _eval_at_zero(tower, den)
    rinf = _z_lead(tower, num, 1) / _z_lead(tower, den, 1)
    e0 = sum((1 - b for b in spec.betas), Fraction(0))
    sum_alpha = sum(spec.alphas, Fraction(0))
    trivial = spec.order % 2 == 0 and e0 == 0 and sum_alpha == 0
    if trivial:
        assert rate == tower.one(), "trivial predicate with non-unit rate"
    assert r0 == q_power(tower, e0), "rate at 0 disagrees with its exponent"
    assert rinf == q_power(tower, -sum_alpha), "rate at infinity disagrees with its exponent"
    return TrivialityReport(
        rate=rate,
        rate_at_zero=r0,
        rate_at_infinity=rinf,
        trivial=trivial,
        exponent_zero=e0,
        exponent_infinity=-sum_alpha,
    )


def _eval_at_zero(tower, x):
    v = tower.var_index("z")
    if isinstance(x, HSeries):
        return x.subst_affine(v, tower.zero(), tower.zero())
    return x.subst_frac(v, Frac(x.ring.zero))


def _z_lead(tower, x, degree):
    return z_coefficients(tower, x, degree)[degree]
