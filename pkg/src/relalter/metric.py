"""Line-element factors and the s/m time relation.

The Schwarzschild factor ``lambda = 1 - 2GM/(c^2 R)`` and the special-theory
factor ``lambda = 1 - v^2/c^2`` both reduce, once the spatial differentials
are set to zero, to ``dt_s = gamma * dt_m`` with ``gamma = sqrt(lambda)``.
Subscript ``s`` marks measurements taken where gravity (or motion) acts on
the apparatus, ``m`` measurements taken where it vanishes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from os import PathLike
from typing import Any, Mapping

from ._floats import within_ulps
from .exceptions import HorizonError, InvalidInputError, SuperluminalError

__all__ = [
    "Constants",
    "CODATA_2018",
    "GravitationalSource",
    "KinematicFrame",
    "FactorKind",
    "AlterationFactor",
    "schwarzschild_radius",
    "schwarzschild_lambda",
    "special_lambda",
    "compose",
    "time_s_from_m",
    "time_m_from_s",
]


@dataclass(frozen=True)
class Constants:
    """Physical constants in SI units (CODATA 2018 by default)."""

    G: float = 6.67430e-11
    c: float = 299792458.0
    h_planck: float = 6.62607015e-34

    def __post_init__(self):
        for name in ("G", "c", "h_planck"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidInputError(f"constant {name} must be a finite positive number, got {value!r}")
            object.__setattr__(self, name, float(value))

    @classmethod
    def unit(cls) -> "Constants":
        """G = c = h = 1, for unit-free tests."""
        return cls(G=1.0, c=1.0, h_planck=1.0)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "Constants":
        """Build from ``{"G": .., "c": .., "h_planck": ..}``; missing keys keep defaults.

        A full run config (``{"constants": {...}, ...}``) is accepted too.
        """
        if "constants" in data and isinstance(data["constants"], Mapping):
            data = data["constants"]
        unknown = set(data) - {"G", "c", "h_planck"}
        if unknown:
            raise InvalidInputError(f"unknown constant keys: {sorted(unknown)}")
        return cls(**{k: data[k] for k in ("G", "c", "h_planck") if k in data})

    @classmethod
    def from_json(cls, path: str | PathLike) -> "Constants":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, Mapping):
            raise InvalidInputError(f"{path}: expected a JSON object")
        return cls.from_mapping(data)

    def to_dict(self) -> dict[str, float]:
        return {"G": self.G, "c": self.c, "h_planck": self.h_planck}


CODATA_2018 = Constants()


@dataclass(frozen=True)
class GravitationalSource:
    mass: float
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass >= 0):
            raise InvalidInputError(f"mass must be >= 0, got {self.mass!r}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidInputError(f"radius must be > 0, got {self.radius!r}")


@dataclass(frozen=True)
class KinematicFrame:
    velocity: float

    def __post_init__(self):
        if not math.isfinite(self.velocity):
            raise InvalidInputError(f"velocity must be finite, got {self.velocity!r}")


class FactorKind(str, Enum):
    GRAVITATIONAL = "gravitational"
    KINEMATIC = "kinematic"
    COMPOSED = "composed"


@dataclass(frozen=True)
class AlterationFactor:
    """``lam`` and ``gamma = sqrt(lam)``, stored together.

    ``deficit`` is ``1 - lam`` carried at the precision it was computed at
    the source (``2GM/(c^2 R)`` or ``v^2/c^2``), so that weak-field shifts
    ``1 - gamma`` do not drown in the cancellation of ``1 - sqrt(1 - eps)``.
    Use the ``from_*`` constructors rather than building this directly.
    """

    lam: float
    gamma: float
    kind: FactorKind
    deficit: float = field(default=math.nan, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", FactorKind(self.kind))
        if math.isnan(self.deficit):
            object.__setattr__(self, "deficit", 1.0 - self.lam)
        if not (0.0 < self.lam <= 1.0):
            raise InvalidInputError(f"lambda must lie in (0, 1], got {self.lam!r}")
        if not (0.0 < self.gamma <= 1.0):
            raise InvalidInputError(f"gamma must lie in (0, 1], got {self.gamma!r}")
        if not within_ulps(self.gamma * self.gamma, self.lam, 2):
            raise InvalidInputError(f"gamma^2 != lambda: {self.gamma!r}^2 vs {self.lam!r}")
        if not (0.0 <= self.deficit <= 1.0) or abs((1.0 - self.lam) - self.deficit) > 4 * 2.0**-53:
            raise InvalidInputError(f"deficit {self.deficit!r} inconsistent with lambda {self.lam!r}")

    @classmethod
    def from_deficit(cls, deficit: float, kind: FactorKind | str) -> "AlterationFactor":
        lam = 1.0 - deficit
        return cls(lam=lam, gamma=math.sqrt(lam), kind=kind, deficit=deficit)

    @classmethod
    def from_lambda(cls, lam: float, kind: FactorKind | str = FactorKind.COMPOSED) -> "AlterationFactor":
        if not (0.0 < lam <= 1.0):
            raise InvalidInputError(f"lambda must lie in (0, 1], got {lam!r}")
        return cls.from_deficit(1.0 - lam, kind)

    @classmethod
    def from_gamma(cls, gamma: float, kind: FactorKind | str = FactorKind.COMPOSED) -> "AlterationFactor":
        if not (0.0 < gamma <= 1.0):
            raise InvalidInputError(f"gamma must lie in (0, 1], got {gamma!r}")
        return cls(lam=gamma * gamma, gamma=gamma, kind=kind, deficit=(1.0 - gamma) * (1.0 + gamma))

    @property
    def shift(self) -> float:
        """``1 - gamma``, evaluated without cancellation."""
        return self.deficit / (1.0 + self.gamma)

    def to_dict(self) -> dict[str, Any]:
        return {"lambda": self.lam, "gamma": self.gamma, "kind": self.kind.value}


def schwarzschild_radius(mass: float, k: Constants = CODATA_2018) -> float:
    return 2.0 * k.G * mass / k.c**2


def schwarzschild_lambda(src: GravitationalSource, k: Constants = CODATA_2018) -> AlterationFactor:
    """Gravitational factor at radius ``src.radius`` outside ``src.mass``.

    Raises :class:`HorizonError` at or inside the Schwarzschild radius;
    lambda is never clamped to zero because every downstream rule divides
    or scales by ``gamma > 0``.
    """
    r_s = schwarzschild_radius(src.mass, k)
    if src.radius <= r_s:
        raise HorizonError(
            f"radius {src.radius!r} m is not outside the Schwarzschild radius {r_s!r} m"
        )
    deficit = r_s / src.radius
    if deficit >= 1.0:
        raise HorizonError(f"lambda underflows to 0 at radius {src.radius!r} m")
    return AlterationFactor.from_deficit(deficit, FactorKind.GRAVITATIONAL)


def special_lambda(frame: KinematicFrame, k: Constants = CODATA_2018) -> AlterationFactor:
    """Kinematic factor ``1 - v^2/c^2`` for a constant relative velocity."""
    if abs(frame.velocity) >= k.c:
        raise SuperluminalError(f"|v| = {abs(frame.velocity)!r} m/s >= c = {k.c!r} m/s")
    beta = frame.velocity / k.c
    deficit = beta * beta
    if deficit >= 1.0:
        raise SuperluminalError(f"v/c rounds to 1 for v = {frame.velocity!r} m/s")
    return AlterationFactor.from_deficit(deficit, FactorKind.KINEMATIC)


def compose(a: AlterationFactor, b: AlterationFactor) -> AlterationFactor:
    """Product of two factors, each measured against the common m-frame."""
    gamma = a.gamma * b.gamma
    shift = a.shift + b.shift - a.shift * b.shift
    return AlterationFactor(
        lam=gamma * gamma,
        gamma=gamma,
        kind=FactorKind.COMPOSED,
        deficit=shift * (2.0 - shift),
    )


def time_s_from_m(dt_m, f: AlterationFactor):
    return f.gamma * dt_m


def time_m_from_s(dt_s, f: AlterationFactor):
    return dt_s / f.gamma
