"""Product-separated free-particle Hamilton-Jacobi family.

The characteristic function is split as a *product* ``S'(r, t) = h(r) f(t)``
(not the conventional sum) in ``(dS'/dr)^2 = -2 M dS'/dt``.  Dividing through
by ``h f^2`` separates it into

    (h')^2 / h = -2 M f' / f^2 = M * lam1

whose general solution with ``h(0) = 0`` is ``h = A r^2`` and
``f = 1 / ((lam1 / 2) t + C)`` with ``lam1 = 4 A / M``.

Moving to m-frame time ``t_s = gamma * t_m`` multiplies ``lam1`` by gamma.
Holding the separated form ``(h')^2/h = 4A`` fixed across frames then forces
``M_m = M_s / gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._floats import rel_err, within_ulps
from .alterations import Frame
from .exceptions import InvalidInputError, NegativeQuantityError, PoleCrossingError, VerificationError
from .metric import AlterationFactor

__all__ = [
    "HJFamily",
    "MassInvarianceReport",
    "hj_closed_family",
    "hj_residual",
    "verify_mass_invariance",
    "hj_mass_alteration",
    "DEFAULT_HJ_RESIDUAL_TOL",
    "DEFAULT_MASS_INVARIANCE_TOL",
]

DEFAULT_HJ_RESIDUAL_TOL = 1e-9
DEFAULT_MASS_INVARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class HJFamily:
    """``S'(r, t) = A r^2 / ((lam1 / 2) t + C)``.

    Build consistent families with :func:`hj_closed_family`.  The dataclass
    itself does not insist on ``lam1 = 4A/M`` so that deliberately broken
    families can be fed to :func:`hj_residual`; see :attr:`is_consistent`.
    """

    amplitude: float
    C: float
    mass: float
    sep_constant: float
    frame: Frame = Frame.S

    def __post_init__(self):
        object.__setattr__(self, "frame", Frame(self.frame))

    @property
    def is_consistent(self) -> bool:
        return within_ulps(self.sep_constant * self.mass, 4.0 * self.amplitude, 2)

    @property
    def pole(self) -> float:
        """Time at which ``f`` blows up, ``-2C / lam1`` (inf when ``lam1 = 0``)."""
        if self.sep_constant == 0:
            return math.inf
        return -2.0 * self.C / self.sep_constant

    def spatial(self, r):
        return self.amplitude * np.square(r)

    def temporal(self, t):
        return 1.0 / (0.5 * self.sep_constant * np.asarray(t, dtype=float) + self.C)

    def __call__(self, r, t):
        return self.spatial(r) * self.temporal(t)

    def dS_dr(self, r, t):
        return 2.0 * self.amplitude * np.asarray(r, dtype=float) * self.temporal(t)

    def dS_dt(self, r, t):
        f = self.temporal(t)
        return -0.5 * self.sep_constant * self.spatial(r) * f * f


def hj_closed_family(A: float, C: float, mass: float, frame: Frame | str = Frame.S) -> HJFamily:
    """Consistent family with ``lam1 = 4A / mass``."""
    for name, value in (("A", A), ("C", C), ("mass", mass)):
        if not math.isfinite(value):
            raise InvalidInputError(f"{name} must be finite, got {value!r}")
    if A == 0:
        raise InvalidInputError("amplitude A must be nonzero (A = 0 gives S' = 0)")
    if C <= 0:
        raise InvalidInputError(f"integration constant C must be > 0, got {C!r}")
    if mass <= 0:
        raise InvalidInputError(f"mass must be > 0, got {mass!r}")
    return HJFamily(float(A), float(C), float(mass), 4.0 * A / mass, frame)


def _check_window(fam: HJFamily, t: np.ndarray) -> None:
    denom = 0.5 * fam.sep_constant * t + fam.C
    if np.any(denom <= 0):
        raise PoleCrossingError(
            f"time samples reach or cross the pole t = {fam.pole!r} (window [{t.min()!r}, {t.max()!r}])"
        )


def hj_residual(fam: HJFamily, r_samples, t_samples) -> float:
    """Max relative defect of ``(dS'/dr)^2 + 2M dS'/dt = 0`` over the sample grid.

    Each point's defect is divided by the larger of the two terms, so the
    measure is independent of the overall scale of ``S'``.  Points where both
    terms vanish (``r = 0``) contribute 0.
    """
    r = np.atleast_1d(np.asarray(r_samples, dtype=float))
    t = np.atleast_1d(np.asarray(t_samples, dtype=float))
    if r.size == 0 or t.size == 0:
        return 0.0
    _check_window(fam, t)
    R, T = np.meshgrid(r, t, indexing="ij")
    grad_sq = fam.dS_dr(R, T) ** 2
    time_term = 2.0 * fam.mass * fam.dS_dt(R, T)
    scale = np.maximum(np.abs(grad_sq), np.abs(time_term))
    defect = np.abs(grad_sq + time_term)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(scale > 0, defect / scale, 0.0)
    return float(np.max(ratio))


@dataclass(frozen=True)
class MassInvarianceReport:
    gamma: float
    mass_s: float
    mass_m: float
    lambda1_s: float
    lambda1_m: float
    lambda1_m_fd: float
    form_s: float
    form_m: float
    rel_err: float
    fd_rel_err: float
    passed: bool

    def to_record(self) -> dict:
        return {
            "check": "mass_invariance",
            "gamma": self.gamma,
            "mass_s": self.mass_s,
            "mass_m": self.mass_m,
            "lambda1_s": self.lambda1_s,
            "lambda1_m": self.lambda1_m,
            "form_s": self.form_s,
            "form_m": self.form_m,
            "rel_err": self.rel_err,
            "fd_rel_err": self.fd_rel_err,
            "pass": self.passed,
        }


def verify_mass_invariance(
    mass_s: float,
    f: AlterationFactor,
    A: float = 1.0,
    C: float = 1.0,
    tol: float = DEFAULT_MASS_INVARIANCE_TOL,
    fd_tol: float = 1e-6,
) -> MassInvarianceReport:
    """Compare the s- and m-frame separated forms for an s-frame family.

    ``lam1_m`` comes from ``F(t_m) = f(gamma t_m)`` as ``-2 F'/F^2``, once by
    the chain rule and once by central differences.  The s-frame form
    rewritten in m-time, ``M_s lam1_m / gamma``, must equal ``M_m lam1_m``.
    """
    if not (math.isfinite(mass_s) and mass_s > 0):
        raise NegativeQuantityError(f"mass must be > 0, got {mass_s!r}")
    fam_s = hj_closed_family(A, C, mass_s)
    gamma = f.gamma
    lam1_s = fam_s.sep_constant

    lam1_m = gamma * lam1_s
    mass_m = mass_s / gamma

    def F(t_m):
        return float(fam_s.temporal(gamma * t_m))

    t_scale = abs(C / lam1_m)
    step = 1e-4 * t_scale
    fd = []
    for t in (0.0, 0.25 * t_scale, 0.5 * t_scale):
        Ft = F(t)
        fd.append(-2.0 * (F(t + step) - F(t - step)) / (2.0 * step) / (Ft * Ft))
    fd_err = max(rel_err(x, lam1_m) for x in fd)

    form_s = mass_s * lam1_m / gamma
    form_m = mass_m * lam1_m
    err = rel_err(form_s, form_m)
    return MassInvarianceReport(
        gamma=gamma,
        mass_s=mass_s,
        mass_m=mass_m,
        lambda1_s=lam1_s,
        lambda1_m=lam1_m,
        lambda1_m_fd=float(np.mean(fd)),
        form_s=form_s,
        form_m=form_m,
        rel_err=err,
        fd_rel_err=fd_err,
        passed=err <= tol and fd_err <= fd_tol,
    )


def hj_mass_alteration(mass_s: float, f: AlterationFactor, A: float = 1.0, C: float = 1.0) -> float:
    """``M_m = M_s / gamma``, after checking the separated forms agree.

    Raises :class:`VerificationError` if they do not.
    """
    report = verify_mass_invariance(mass_s, f, A=A, C=C)
    if not report.passed:
        raise VerificationError(
            f"separated forms disagree: M_s lam1_m / gamma = {report.form_s!r}, "
            f"M_m lam1_m = {report.form_m!r} (rel err {report.rel_err:.3g})"
        )
    return report.mass_m
