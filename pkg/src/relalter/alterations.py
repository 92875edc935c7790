"""Alteration rules for measured quantities.

Energy gaps, frequencies and separation constants (decay rates, energy
eigenvalues) are multiplied by gamma on the way from the s-frame to the
m-frame; mass is divided by gamma.  Values travel as :class:`MeasuredQuantity`
so the direction of each rule is checked rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from numbers import Real

from .exceptions import FrameMismatchError, InvalidInputError, NegativeQuantityError
from .metric import AlterationFactor

__all__ = [
    "Frame",
    "QuantityKind",
    "MeasuredQuantity",
    "alter_energy_gap",
    "alter_frequency",
    "alter_mass",
    "alter_separation_constant",
    "alter",
    "fractional_shift",
]


class Frame(str, Enum):
    S = "s"
    M = "m"


class QuantityKind(str, Enum):
    FREQUENCY = "frequency_Hz"
    ENERGY = "energy_J"
    MASS = "mass_kg"
    SEPARATION_CONSTANT = "separation_constant_per_s"


_NONNEGATIVE = (QuantityKind.FREQUENCY, QuantityKind.MASS)


@dataclass(frozen=True)
class MeasuredQuantity:
    value: float
    kind: QuantityKind
    frame: Frame = Frame.S

    def __post_init__(self):
        object.__setattr__(self, "kind", QuantityKind(self.kind))
        object.__setattr__(self, "frame", Frame(self.frame))
        if not math.isfinite(self.value):
            raise InvalidInputError(f"{self.kind.value} value must be finite, got {self.value!r}")
        if self.kind in _NONNEGATIVE and self.value < 0:
            raise NegativeQuantityError(f"negative {self.kind.value}: {self.value!r}")

    def __float__(self) -> float:
        return float(self.value)


def _as_s_quantity(x, kind: QuantityKind) -> MeasuredQuantity:
    if isinstance(x, MeasuredQuantity):
        if x.kind is not kind:
            raise InvalidInputError(f"expected a {kind.value} quantity, got {x.kind.value}")
        if x.frame is not Frame.S:
            raise FrameMismatchError(f"rule maps s -> m but the {kind.value} value is tagged {x.frame.value!r}")
        return x
    if not isinstance(x, Real) or isinstance(x, bool):
        raise InvalidInputError(f"expected a number or MeasuredQuantity, got {type(x).__name__}")
    return MeasuredQuantity(float(x), kind, Frame.S)


def alter_energy_gap(dE_s, f: AlterationFactor) -> MeasuredQuantity:
    """``gamma * dE_s``: an s-frame energy gap as seen from the m-frame."""
    q = _as_s_quantity(dE_s, QuantityKind.ENERGY)
    return MeasuredQuantity(f.gamma * q.value, QuantityKind.ENERGY, Frame.M)


def alter_frequency(nu_s, f: AlterationFactor) -> MeasuredQuantity:
    """``gamma * nu_s``; the same rule covers gravitational and transverse Doppler redshift."""
    q = _as_s_quantity(nu_s, QuantityKind.FREQUENCY)
    return MeasuredQuantity(f.gamma * q.value, QuantityKind.FREQUENCY, Frame.M)


def alter_mass(m_s, f: AlterationFactor) -> MeasuredQuantity:
    """``m_s / gamma`` -- the one rule that divides."""
    q = _as_s_quantity(m_s, QuantityKind.MASS)
    return MeasuredQuantity(q.value / f.gamma, QuantityKind.MASS, Frame.M)


def alter_separation_constant(lam_s, f: AlterationFactor) -> MeasuredQuantity:
    q = _as_s_quantity(lam_s, QuantityKind.SEPARATION_CONSTANT)
    return MeasuredQuantity(f.gamma * q.value, QuantityKind.SEPARATION_CONSTANT, Frame.M)


_RULES = {
    QuantityKind.FREQUENCY: alter_frequency,
    QuantityKind.ENERGY: alter_energy_gap,
    QuantityKind.MASS: alter_mass,
    QuantityKind.SEPARATION_CONSTANT: alter_separation_constant,
}

RULE_TEXT = {
    QuantityKind.FREQUENCY: "nu_m = gamma * nu_s",
    QuantityKind.ENERGY: "dE_m = gamma * dE_s",
    QuantityKind.MASS: "M_m = M_s / gamma",
    QuantityKind.SEPARATION_CONSTANT: "lambda_m = gamma * lambda_s",
}


def alter(q: MeasuredQuantity, f: AlterationFactor) -> MeasuredQuantity:
    """Dispatch on ``q.kind``."""
    return _RULES[q.kind](q, f)


def fractional_shift(f: AlterationFactor) -> float:
    """``1 - gamma``, the fractional redshift of any gamma-scaled frequency."""
    return f.shift
