from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewconnect import (
    Direction,
    DirectionKind,
    OreOperator,
    ScalarTower,
    SigmaBase,
    XAction,
    apply_delta,
    apply_sigma,
    ore_apply,
    ore_mul,
)
from skewconnect.errors import SigmaBaseError

from conftest import dilation_base_exact_q, frac_strategy, identity_base, shift_base


# -- apply_sigma -----------------------------------------------------------


def test_sigma_dilation_monomial():
    t, b = dilation_base_exact_q()
    z, q = t.var("z"), t.q()
    assert apply_sigma(b, 0, z**3) == q**3 * z**3


def test_sigma_shift_expands():
    t, b = shift_base(step=Fraction(1))
    z = t.var("z")
    hbar = t.one()
    assert apply_sigma(b, 0, z**2) == z**2 + 2 * hbar * z + hbar**2


def test_sigma_htrunc_dilation_taylor():
    t = ScalarTower.h_trunc(2, ("z",))
    b = SigmaBase(t, [Direction("z", DirectionKind.DILATION, t.q())])
    z = t.var("z")
    got = apply_sigma(b, 0, z.inverse())
    assert got == z.inverse() - z.inverse() * t.h()


# -- apply_delta --------------------------------------------------------------


def test_delta_dilation_q_integer_rate():
    t, b = dilation_base_exact_q()
    z, q = t.var("z"), t.q()
    assert apply_delta(b, 0, z**2) == (t.one() + q) * z


def test_delta_of_constants_vanishes():
    t, b = dilation_base_exact_q()
    assert apply_delta(b, 0, t.from_fraction(Fraction(7, 3))).is_zero()


def test_delta_shift_example():
    t, b = shift_base(step=1)
    z = t.var("z")
    assert apply_delta(b, 0, z**2) == 2 * z + t.one()


@pytest.mark.parametrize(
    "make",
    [identity_base, shift_base, dilation_base_exact_q],
    ids=["identity", "shift", "dilation"],
)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_twisted_leibniz_law(make, data):
    t, b = make()
    els = frac_strategy(t, var_names=("z",))
    a = data.draw(els)
    c = data.draw(els)
    lhs = apply_delta(b, 0, a * c)
    rhs = apply_delta(b, 0, a) * c + apply_sigma(b, 0, a) * apply_delta(b, 0, c)
    assert lhs == rhs


@settings(max_examples=8, deadline=None)
@given(data=st.data())
def test_twisted_leibniz_htrunc_confluent(data):
    from conftest import hseries_strategy

    t = ScalarTower.h_trunc(3, ("z",))
    b = SigmaBase(t, [Direction("z", DirectionKind.DILATION, t.q())])
    els = hseries_strategy(t)
    a = data.draw(els)
    c = data.draw(els)
    lhs = apply_delta(b, 0, a * c)
    rhs = apply_delta(b, 0, a) * c + apply_sigma(b, 0, a) * apply_delta(b, 0, c)
    assert lhs == rhs


@pytest.mark.parametrize(
    "make",
    [shift_base, dilation_base_exact_q],
    ids=["shift", "dilation"],
)
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_sigma_is_a_ring_map_fixing_constants(make, data):
    t, b = make()
    els = frac_strategy(t, var_names=("z",))
    a = data.draw(els)
    c = data.draw(els)
    assert apply_sigma(b, 0, a + c) == apply_sigma(b, 0, a) + apply_sigma(b, 0, c)
    assert apply_sigma(b, 0, a * c) == apply_sigma(b, 0, a) * apply_sigma(b, 0, c)
    k = t.from_fraction(data.draw(st.fractions(max_denominator=5, min_value=-3, max_value=3)))
    assert apply_sigma(b, 0, k) == k


def test_direction_validation():
    t = ScalarTower.rational(("z",))
    with pytest.raises(SigmaBaseError):
        SigmaBase(t, [Direction("z", DirectionKind.SHIFT, 0)])
    with pytest.raises(SigmaBaseError):
        SigmaBase(t, [Direction("z", DirectionKind.DILATION, 1)])
    with pytest.raises(SigmaBaseError):
        SigmaBase(t, [Direction("w", DirectionKind.IDENTITY)])


def test_general_endomorphism_direction():
    t = ScalarTower.rational(("z",))
    z = t.var("z")
    b = SigmaBase(t, [Direction("z", DirectionKind.ENDOMORPHISM, z**2)])
    assert apply_sigma(b, 0, z + t.one()) == z**2 + t.one()
    # delta = (f(z^2) - f(z)) / (z^2 - z)
    assert apply_delta(b, 0, z) == t.one()


# -- skew operators --------------------------------------------------------------


def test_ore_x_times_z_shift_sigma_delta():
    t, b = shift_base(step=1)
    z = t.var("z")
    X = OreOperator.x(b, 0, XAction.SIGMA_DELTA)
    got = X * OreOperator.scalar(b, 0, XAction.SIGMA_DELTA, z)
    want = OreOperator(b, 0, XAction.SIGMA_DELTA, [t.one(), z + t.one()])
    assert got == want


def test_ore_x_times_z_dilation_sigma_only():
    t, b = dilation_base_exact_q()
    z, q = t.var("z"), t.q()
    X = OreOperator.x(b, 0, XAction.SIGMA_ONLY)
    got = X * OreOperator.scalar(b, 0, XAction.SIGMA_ONLY, z)
    want = OreOperator(b, 0, XAction.SIGMA_ONLY, [t.zero(), q * z])
    assert got == want


def test_ore_unit_law():
    t, b = shift_base(step=1)
    z = t.var("z")
    L = OreOperator(b, 0, XAction.SIGMA_DELTA, [z, t.one(), z**2])
    one = OreOperator.one(b, 0, XAction.SIGMA_DELTA)
    assert one * L == L
    assert L * one == L


def _poly_coeff(data, t):
    z = t.var("z")
    c0 = data.draw(st.integers(-3, 3))
    c1 = data.draw(st.integers(-2, 2))
    return t.from_int(c0) + t.from_int(c1) * z


def _random_ore(data, b, t, flavor, max_deg=2):
    deg = data.draw(st.integers(0, max_deg))
    coeffs = [_poly_coeff(data, t) for _ in range(deg + 1)]
    return OreOperator(b, 0, flavor, coeffs)


@pytest.mark.parametrize("flavor", [XAction.SIGMA_ONLY, XAction.SIGMA_DELTA])
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_ore_mul_associative(flavor, data):
    t, b = shift_base(step=1)
    L = _random_ore(data, b, t, flavor)
    M = _random_ore(data, b, t, flavor)
    N = _random_ore(data, b, t, flavor)
    assert (L * M) * N == L * (M * N)


@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_ore_degree_additivity(data):
    t, b = dilation_base_exact_q()
    L = _random_ore(data, b, t, XAction.SIGMA_ONLY)
    M = _random_ore(data, b, t, XAction.SIGMA_ONLY)
    if not L.is_zero() and not M.is_zero():
        assert (L * M).degree == L.degree + M.degree


@pytest.mark.parametrize("flavor", [XAction.SIGMA_ONLY, XAction.SIGMA_DELTA])
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_ore_apply_is_a_ring_action(flavor, data):
    t, b = shift_base(step=1)
    L = _random_ore(data, b, t, flavor, max_deg=1)
    M = _random_ore(data, b, t, flavor, max_deg=1)
    f = _poly_coeff(data, t) * t.var("z") + _poly_coeff(data, t)
    assert ore_apply(L + M, f) == ore_apply(L, f) + ore_apply(M, f)
    assert ore_apply(ore_mul(L, M), f) == ore_apply(L, ore_apply(M, f))


def test_ore_apply_examples():
    t, b = dilation_base_exact_q()
    z, q = t.var("z"), t.q()
    XmI = OreOperator(b, 0, XAction.SIGMA_ONLY, [-t.one(), t.one()])
    assert ore_apply(XmI, z) == (q - t.one()) * z

    tr, bs = shift_base(step=1)
    zz = tr.var("z")
    X2 = OreOperator(bs, 0, XAction.SIGMA_ONLY, [tr.zero(), tr.zero(), tr.one()])
    assert ore_apply(X2, zz) == zz + tr.from_int(2)
    XmZ = OreOperator(bs, 0, XAction.SIGMA_ONLY, [-zz, tr.one()])
    assert ore_apply(XmZ, zz**2) == (zz + tr.one()) ** 2 - zz**3


def test_substitution_singular_under_collapsing_endomorphism():
    from skewconnect.errors import SubstitutionSingular

    t = ScalarTower.rational(("z",))
    z = t.var("z")
    b = SigmaBase(t, [Direction("z", DirectionKind.ENDOMORPHISM, t.from_int(2))])
    f = (z - t.from_int(2)).inverse()
    with pytest.raises(SubstitutionSingular):
        apply_sigma(b, 0, f)


def test_confluent_shift_direction():
    t = ScalarTower.h_trunc(3, ("z",))
    b = SigmaBase(t, [Direction("z", DirectionKind.SHIFT, t.h())])
    z = t.var("z")
    assert apply_sigma(b, 0, z**2) == z**2 + 2 * z * t.h() + t.h() ** 2
    assert apply_delta(b, 0, z**2) == 2 * z + t.h()
    assert apply_delta(b, 0, z.inverse()) == -(z.inverse() ** 2) + z.inverse() ** 3 * t.h() - z.inverse() ** 4 * t.h() ** 2
