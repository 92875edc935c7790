import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relalter._floats import within_ulps
from relalter.alterations import (
    Frame,
    MeasuredQuantity,
    QuantityKind,
    alter,
    alter_energy_gap,
    alter_frequency,
    alter_mass,
    alter_separation_constant,
    fractional_shift,
)
from relalter.exceptions import FrameMismatchError, InvalidInputError, NegativeQuantityError
from relalter.metric import (
    CODATA_2018,
    AlterationFactor,
    GravitationalSource,
    KinematicFrame,
    compose,
    schwarzschild_lambda,
    special_lambda,
)

gammas = st.floats(min_value=1e-3, max_value=1.0)
values = st.floats(min_value=1e-30, max_value=1e30)
signed = st.one_of(values, values.map(lambda v: -v))


def factor(g):
    return AlterationFactor.from_gamma(g)


def test_energy_gap():
    assert alter_energy_gap(5.0, factor(1.0)).value == 5.0
    assert alter_energy_gap(2.0, factor(0.8)).value == pytest.approx(1.6, rel=1e-15)
    assert alter_energy_gap(0.0, factor(0.3)).value == 0.0


def test_result_is_tagged_m():
    q = alter_energy_gap(2.0, factor(0.8))
    assert q.frame is Frame.M and q.kind is QuantityKind.ENERGY


def test_frequency():
    assert alter_frequency(1e15, factor(0.8)).value == pytest.approx(8e14, rel=1e-15)
    assert alter_frequency(1e15, factor(1.0)).value == 1e15
    with pytest.raises(NegativeQuantityError):
        alter_frequency(-1.0, factor(0.8))


def test_mass():
    assert alter_mass(1.0, factor(0.8)).value == pytest.approx(1.25, rel=1e-15)
    assert alter_mass(3.0, factor(1.0)).value == 3.0
    with pytest.raises(NegativeQuantityError):
        alter_mass(-2.0, factor(0.8))


def test_separation_constant():
    got = alter_separation_constant(-9.8696, factor(0.8)).value
    assert got == pytest.approx(-7.89568, rel=1e-15)
    assert alter_separation_constant(-9.8696, factor(1.0)).value == -9.8696


def test_direction_is_checked():
    m_value = MeasuredQuantity(1.0, QuantityKind.FREQUENCY, Frame.M)
    with pytest.raises(FrameMismatchError):
        alter_frequency(m_value, factor(0.8))
    with pytest.raises(InvalidInputError):
        alter_frequency(MeasuredQuantity(1.0, QuantityKind.MASS), factor(0.8))
    with pytest.raises(InvalidInputError):
        alter_frequency("1e15", factor(0.8))


def test_dispatch():
    q = MeasuredQuantity(1.0, "mass_kg")
    assert alter(q, factor(0.5)).value == 2.0


class TestFractionalShift:
    def test_rest(self):
        assert fractional_shift(factor(1.0)) == 0.0

    def test_transverse_doppler(self):
        f = special_lambda(KinematicFrame(0.005 * CODATA_2018.c))
        # exact 1 - sqrt(1 - 2.5e-5) = 1.2500078125976577e-05
        assert abs(fractional_shift(f) - 1.2500e-5) <= 1e-9
        assert fractional_shift(f) == pytest.approx(1.2500078125976577e-05, rel=1e-12)

    def test_earth_surface(self):
        f = schwarzschild_lambda(GravitationalSource(5.9722e24, 6.3710e6))
        assert fractional_shift(f) == pytest.approx(6.96e-10, rel=5e-3)
        assert fractional_shift(f) == pytest.approx(6.9613113129284855e-10, rel=1e-12)


@given(signed, gammas)
def test_gamma_one_is_bitwise_identity(x, _):
    one = factor(1.0)
    assert alter_separation_constant(x, one).value == x
    assert alter_energy_gap(x, one).value == x
    assert alter_frequency(abs(x), one).value == abs(x)
    assert alter_mass(abs(x), one).value == abs(x)


@given(values, gammas)
def test_frequency_chain_via_planck(dE, g):
    h = CODATA_2018.h_planck
    f = factor(g)
    assert within_ulps(alter_frequency(dE / h, f).value, alter_energy_gap(dE, f).value / h, 2)


@given(values, values, gammas)
def test_mass_energy_product(M, E, g):
    f = factor(g)
    assert within_ulps(alter_mass(M, f).value * alter_energy_gap(E, f).value, M * E, 4)


@given(values, gammas, gammas)
def test_successive_frequency_alterations_compose(x, g1, g2):
    f1, f2 = factor(g1), factor(g2)
    twice = alter_frequency(alter_frequency(x, f1).value, f2).value
    assert within_ulps(twice, alter_frequency(x, compose(f1, f2)).value, 2)


@given(values, st.floats(min_value=1e-3, max_value=1 - 1e-9))
def test_monotone(x, g):
    f = factor(g)
    assert alter_frequency(x, f).value < x
    assert alter_energy_gap(x, f).value < x
    assert abs(alter_separation_constant(-x, f).value) < x
    assert alter_mass(x, f).value > x


@given(signed, gammas)
def test_sign_of_separation_constant_preserved(x, g):
    assert math.copysign(1, alter_separation_constant(x, factor(g)).value) == math.copysign(1, x)
