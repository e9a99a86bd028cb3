import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from skewconnect import (
    Direction,
    DirectionKind,
    Matrix,
    ScalarTower,
    SigmaBase,
)

small_rationals = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=6
)


def frac_strategy(tower, var_names=None, max_degree=2):
    """Random rational functions: small polynomials over a nonzero denominator."""
    names = list(var_names or tower.variables)
    coeffs = small_rationals if tower.p is None else st.integers(-4, 4).map(Fraction)

    def build(num_terms, den_terms):
        num = _poly_of(tower, names, num_terms)
        den = _poly_of(tower, names, den_terms)
        if den.is_zero():
            den = tower.one()
        if num.is_zero():
            return tower.zero()
        return num / den

    term = st.tuples(coeffs, st.tuples(*[st.integers(0, max_degree) for _ in names]))
    terms = st.lists(term, min_size=0, max_size=3)
    return st.builds(build, terms, terms)


def _poly_of(tower, names, terms):
    acc = tower.zero()
    for coeff, exps in terms:
        mono = tower.from_fraction(coeff)
        for name, e in zip(names, exps):
            mono = mono * tower.var(name) ** e
        acc = acc + mono
    return acc


def hseries_strategy(tower):
    base = frac_strategy(tower)
    return st.lists(base, min_size=1, max_size=tower.trunc).map(
        lambda cs: _hs_from(tower, cs)
    )


def _hs_from(tower, coeffs):
    h = tower.h()
    acc = tower.zero()
    for k, c in enumerate(coeffs):
        acc = acc + c * h**k
    return acc


@pytest.fixture
def rng():
    return random.Random(20260809)


def rand_element(rng, tower, var_names=None, max_degree=1, coeff_range=3):
    names = list(var_names or tower.variables)
    acc = tower.zero()
    for _ in range(rng.randint(1, 3)):
        mono = tower.from_int(rng.randint(-coeff_range, coeff_range))
        for name in names:
            mono = mono * tower.var(name) ** rng.randint(0, max_degree)
        acc = acc + mono
    return acc


def rand_invertible_matrix(rng, tower, n, var_names=None, max_degree=1):
    """Unit-lower times upper-with-unit-diagonal: invertible by construction."""
    lo = [
        [
            tower.one()
            if i == j
            else (rand_element(rng, tower, var_names, max_degree) if i > j else tower.zero())
            for j in range(n)
        ]
        for i in range(n)
    ]
    diag_choices = [c for c in (1, -1, 2, 3) if tower.is_unit(tower.from_int(c))]
    up = [
        [
            tower.from_int(rng.choice(diag_choices))
            if i == j
            else (rand_element(rng, tower, var_names, max_degree) if i < j else tower.zero())
            for j in range(n)
        ]
        for i in range(n)
    ]
    return Matrix(tower, lo) * Matrix(tower, up)


def shift_base(step=1, variables=("z",)):
    t = ScalarTower.rational(variables)
    dirs = [Direction(v, DirectionKind.SHIFT, step) for v in variables]
    return t, SigmaBase(t, dirs)


def dilation_base_exact_q(variables=("z",)):
    t = ScalarTower.exact_q(variables)
    dirs = [Direction(v, DirectionKind.DILATION, t.q()) for v in variables]
    return t, SigmaBase(t, dirs)


def identity_base(variables=("z",)):
    t = ScalarTower.rational(variables)
    dirs = [Direction(v, DirectionKind.IDENTITY) for v in variables]
    return t, SigmaBase(t, dirs)
