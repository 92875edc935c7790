"""Separating operators on 1-D grids and the frame-scaling check.

A separating operator ``D`` admits product solutions ``T(x, t) = h(x) f(t)``
of ``D(T) = k dT/dt``: ``h`` is an eigenvector of the discretized ``D`` with
eigenvalue ``lam`` (the separation constant) and ``f(t) = exp(lam t / k)``.

Two operator families are built on a uniform Dirichlet grid with the
three-point stencil -- the Laplacian (heat equation) and the Laplacian minus
a potential (Schrodinger form) -- and any real symmetric matrix can be
supplied directly.

:func:`verify_frame_scaling` re-expresses an s-frame temporal factor in
m-frame time ``t_s = gamma * t_m`` and extracts the m-frame separation
constant from it, analytically and by central differences, checking
``lam_m = gamma * lam_s``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from os import PathLike
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from ._floats import rel_err
from .alterations import Frame
from .exceptions import (
    ConvergenceError,
    FrameMismatchError,
    InvalidGridError,
    InvalidInputError,
    MissingPotentialError,
    ZeroModeError,
)
from .metric import AlterationFactor

__all__ = [
    "Grid1D",
    "OperatorKind",
    "SeparatingOperator",
    "SeparatedSolution",
    "FrameScalingReport",
    "discretize",
    "load_matrix_csv",
    "eigenvalues",
    "eigenmodes",
    "separation_constant",
    "temporal_factor",
    "to_m_frame",
    "verify_frame_scaling",
    "residual_operator_equation",
    "DEFAULT_EIGEN_RESIDUAL_TOL",
    "DEFAULT_FRAME_SCALING_TOL",
    "DEFAULT_FD_TOL",
]

DEFAULT_EIGEN_RESIDUAL_TOL = 1e-10
DEFAULT_FRAME_SCALING_TOL = 1e-12
DEFAULT_FD_TOL = 1e-6

# Quadratic forms are accumulated in extended precision where the platform
# provides it (x86 80-bit); elsewhere this degrades to float64.
_ACC = np.longdouble


@dataclass(frozen=True)
class Grid1D:
    """Interior nodes of ``[0, length]``, ``spacing = length / (points + 1)``."""

    length: float
    points: int

    def __post_init__(self):
        if not (isinstance(self.length, (int, float)) and math.isfinite(self.length) and self.length > 0):
            raise InvalidGridError(f"grid length must be > 0, got {self.length!r}")
        if isinstance(self.points, bool) or not isinstance(self.points, (int, np.integer)) or self.points < 3:
            raise InvalidGridError(f"grid needs at least 3 interior points, got {self.points!r}")
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "points", int(self.points))

    @property
    def spacing(self) -> float:
        return self.length / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.points + 1)

    def halved(self) -> "Grid1D":
        """Same interval, half the spacing."""
        return Grid1D(self.length, 2 * self.points + 1)


class OperatorKind(str, Enum):
    LAPLACIAN = "laplacian"
    SCHRODINGER = "schrodinger_with_potential"
    CUSTOM = "custom_matrix"


@dataclass(frozen=True, eq=False)
class SeparatingOperator:
    """Discretized real symmetric operator plus the constant ``k`` of ``D(T) = k dT/dt``.

    Stencil operators keep the Laplacian weight ``1/h^2`` and the potential
    separately from the assembled tridiagonal so the quadratic form can be
    evaluated without cancellation.  ``grid`` is ``None`` for custom matrices.
    """

    kind: OperatorKind
    k_const: float
    grid: Grid1D | None = None
    potential: np.ndarray | None = None
    diagonal: np.ndarray | None = None
    off_diagonal: np.ndarray | None = None
    dense: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        if self.dense is not None:
            return self.dense.shape[0]
        return self.diagonal.shape[0]

    @property
    def is_tridiagonal(self) -> bool:
        return self.dense is None

    @property
    def matrix(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense.copy()
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix-vector product ``D x``."""
        x = np.asarray(x, dtype=float)
        if self.dense is not None:
            return self.dense @ x
        y = self.diagonal * x
        y[:-1] += self.off_diagonal * x[1:]
        y[1:] += self.off_diagonal * x[:-1]
        return y

    def quadratic_form(self, x: np.ndarray) -> float:
        """``<x, D x>`` rounded once from an extended-precision accumulation."""
        return float(self._quadratic_form(np.asarray(x, dtype=float).astype(_ACC)))

    def _quadratic_form(self, x):
        if self.dense is not None:
            return x @ (self.dense.astype(_ACC) @ x)
        # Dirichlet form: -(1/h^2) (x_0^2 + x_{n-1}^2 + sum (x_{i+1} - x_i)^2) - sum p x^2.
        inv_h2 = _ACC(self.off_diagonal[0])
        q = -inv_h2 * (x[0] * x[0] + x[-1] * x[-1] + np.sum(np.diff(x) ** 2))
        if self.potential is not None:
            q -= np.sum(self.potential.astype(_ACC) * x * x)
        return q

    def rayleigh_quotient(self, x: np.ndarray) -> float:
        xa = np.asarray(x, dtype=float).astype(_ACC)
        denom = np.sum(xa * xa)
        if denom == 0:
            raise ZeroModeError("Rayleigh quotient of the zero vector")
        return float(self._quadratic_form(xa) / denom)

    def norm(self) -> float:
        """Max-row-sum norm, a cheap bound on the spectral radius."""
        if self.dense is not None:
            return float(np.max(np.sum(np.abs(self.dense), axis=1)))
        row = np.abs(self.diagonal).copy()
        row[:-1] += np.abs(self.off_diagonal)
        row[1:] += np.abs(self.off_diagonal)
        return float(row.max())


def _potential_on_nodes(potential, grid: Grid1D) -> np.ndarray:
    if callable(potential):
        values = np.asarray(potential(grid.nodes), dtype=float)
        if values.ndim == 0:
            values = np.full(grid.points, float(values))
    elif np.ndim(potential) == 0:
        values = np.full(grid.points, float(potential))
    else:
        values = np.asarray(potential, dtype=float)
    if values.shape != (grid.points,):
        raise MissingPotentialError(
            f"potential must give one value per node ({grid.points}), got shape {values.shape}"
        )
    if not np.all(np.isfinite(values)):
        raise MissingPotentialError("potential has non-finite values on the grid")
    return values


def discretize(
    kind: OperatorKind | str,
    grid: Grid1D | None = None,
    potential: float | Sequence[float] | Callable[[np.ndarray], np.ndarray] | None = None,
    k_const: float = 1.0,
    *,
    matrix: np.ndarray | None = None,
) -> SeparatingOperator:
    """Build a separating operator.

    ``laplacian`` and ``schrodinger_with_potential`` use the second-order
    central difference with Dirichlet ends, diagonal ``-2/h^2 - p(x_i)`` and
    off-diagonal ``1/h^2``.  ``potential`` may be a scalar, one value per
    node, or a callable of the node coordinates.  ``custom_matrix`` takes a
    real symmetric ``matrix`` and ignores the grid.
    """
    kind = OperatorKind(kind)
    if not (math.isfinite(k_const) and k_const != 0):
        raise InvalidInputError(f"k_const must be finite and nonzero, got {k_const!r}")
    k_const = float(k_const)

    if kind is OperatorKind.CUSTOM:
        if matrix is None:
            raise InvalidInputError("custom_matrix operator needs a matrix")
        a = np.array(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InvalidInputError(f"custom matrix must be square and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("custom matrix has non-finite entries")
        if not np.array_equal(a, a.T):
            raise InvalidInputError("custom matrix must be exactly symmetric")
        a.flags.writeable = False
        return SeparatingOperator(kind=kind, k_const=k_const, grid=grid, dense=a)

    if not isinstance(grid, Grid1D):
        raise InvalidGridError(f"{kind.value} operator needs a Grid1D, got {grid!r}")
    n = grid.points
    inv_h2 = 1.0 / grid.spacing**2
    diag = np.full(n, -2.0 * inv_h2)
    pot = None
    if kind is OperatorKind.SCHRODINGER:
        if potential is None:
            raise MissingPotentialError("schrodinger_with_potential operator needs a potential")
        pot = _potential_on_nodes(potential, grid)
        diag = diag - pot
        pot.flags.writeable = False
    off = np.full(n - 1, inv_h2)
    diag.flags.writeable = False
    off.flags.writeable = False
    return SeparatingOperator(
        kind=kind, k_const=k_const, grid=grid, potential=pot, diagonal=diag, off_diagonal=off
    )


def load_matrix_csv(path: str | PathLike) -> np.ndarray:
    """Dense matrix from CSV, one row per line, no header."""
    rows = []
    with open(path, newline="") as fh:
        for line in csv.reader(fh):
            if not line or all(not cell.strip() for cell in line):
                continue
            try:
                rows.append([float(cell) for cell in line])
            except ValueError as exc:
                raise InvalidInputError(f"{path}: non-numeric entry in row {len(rows) + 1}") from exc
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInputError(f"{path}: expected a non-empty rectangular table")
    return np.array(rows, dtype=float)


@dataclass(frozen=True, eq=False)
class SeparatedSolution:
    """One product solution ``h(x) f(t)``.

    ``sep_constant`` is the raw eigenvalue of ``D``; the temporal rate is
    ``sep_constant / k_const``.  ``index`` is the 0-based position in the
    descending spectrum.
    """

    sep_constant: float
    k_const: float
    mode: np.ndarray = field(repr=False)
    frame: Frame = Frame.S
    index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "frame", Frame(self.frame))
        mode = np.array(self.mode, dtype=float)
        if mode.ndim != 1 or not np.any(mode):
            raise ZeroModeError("separated solution needs a non-zero 1-D mode")
        mode.flags.writeable = False
        object.__setattr__(self, "mode", mode)

    @property
    def rate(self) -> float:
        return self.sep_constant / self.k_const

    def temporal(self, t):
        return temporal_factor(self.sep_constant, self.k_const, t)


def _fix_sign(vectors: np.ndarray) -> np.ndarray:
    # Deterministic sign: the first component that is not round-off noise is positive.
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-12 * np.max(np.abs(col)))
        if big.size and col[big[0]] < 0:
            vectors[:, j] = -col
    return vectors


def _solve(op: SeparatingOperator, count: int, want_vectors: bool):
    n = op.size
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or not 1 <= count <= n:
        raise InvalidInputError(f"mode count must be in [1, {n}], got {count!r}")
    lo, hi = n - count, n - 1
    try:
        if op.is_tridiagonal:
            res = linalg.eigh_tridiagonal(
                op.diagonal, op.off_diagonal, eigvals_only=not want_vectors,
                select="i", select_range=(lo, hi),
            )
        else:
            res = linalg.eigh(op.dense, eigvals_only=not want_vectors, subset_by_index=(lo, hi))
    except (linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(
            f"symmetric eigen solve failed: {exc}", {"size": n, "count": count, "solver_error": str(exc)}
        ) from exc
    if want_vectors:
        w, v = res
        return w[::-1].copy(), _fix_sign(v[:, ::-1].copy())
    return res[::-1].copy(), None


def eigenvalues(op: SeparatingOperator, count: int) -> np.ndarray:
    """The ``count`` largest eigenvalues, descending, without modes."""
    w, _ = _solve(op, count, want_vectors=False)
    return w


def eigenmodes(
    op: SeparatingOperator,
    count: int,
    residual_tol: float = DEFAULT_EIGEN_RESIDUAL_TOL,
) -> list[SeparatedSolution]:
    """The ``count`` leading separated solutions, eigenvalue descending.

    Each mode is unit-norm with its first significant component positive.
    Its ``sep_constant`` is the Rayleigh quotient of the returned vector,
    which is closer to the exact discrete eigenvalue than the solver's
    estimate.  Every pair must satisfy ``||D h - lam h|| <= residual_tol * |lam|``
    or :class:`ConvergenceError` is raised with the residuals attached.

    In float64 that residual cannot drop below roughly ``eps * ||D||``, which
    for the Laplacian grows like ``1/h^2``; with the default tolerance the
    leading Laplacian mode on [0, 1] stops qualifying past ~1400 points.
    """
    w, v = _solve(op, count, want_vectors=True)
    scale = op.norm()
    solutions, residuals, bounds = [], [], []
    for j in range(count):
        h = v[:, j] / np.linalg.norm(v[:, j])
        lam = op.rayleigh_quotient(h)
        resid = float(np.linalg.norm(op.apply(h) - lam * h))
        bound = residual_tol * (abs(lam) if lam != 0 else scale)
        residuals.append(resid)
        bounds.append(bound)
        solutions.append(SeparatedSolution(lam, op.k_const, h, Frame.S, j))
    bad = [j for j in range(count) if not residuals[j] <= bounds[j]]
    if bad:
        raise ConvergenceError(
            f"eigenpairs {bad} exceed the residual bound (tol={residual_tol:g})",
            {
                "size": op.size,
                "count": count,
                "residual_tol": residual_tol,
                "eigenvalues": [s.sep_constant for s in solutions],
                "solver_eigenvalues": w.tolist(),
                "residuals": residuals,
                "bounds": bounds,
                "operator_norm": scale,
            },
        )
    return solutions


def separation_constant(op: SeparatingOperator, sol: SeparatedSolution | np.ndarray) -> float:
    """``D(h)/h`` realised as the Rayleigh quotient ``<h, D h> / <h, h>``."""
    mode = sol.mode if isinstance(sol, SeparatedSolution) else np.asarray(sol, dtype=float)
    if mode.shape != (op.size,):
        raise InvalidInputError(f"mode has shape {mode.shape}, operator acts on {op.size} nodes")
    return op.rayleigh_quotient(mode)


def temporal_factor(sep_constant, k_const, t):
    """``f(t) = exp(lam t / k)``, normalised to ``f(0) = 1``."""
    if k_const == 0:
        raise InvalidInputError("k_const must be nonzero")
    return np.exp((sep_constant / k_const) * t)


def to_m_frame(sol_s: SeparatedSolution, f: AlterationFactor) -> SeparatedSolution:
    """The same spatial mode with separation constant ``gamma * lam_s``.

    Spatial values are shared between frames node by node; only time is
    rescaled.
    """
    if sol_s.frame is not Frame.S:
        raise FrameMismatchError(f"expected an s-frame solution, got frame {sol_s.frame.value!r}")
    return SeparatedSolution(f.gamma * sol_s.sep_constant, sol_s.k_const, sol_s.mode, Frame.M, sol_s.index)


@dataclass(frozen=True)
class FrameScalingReport:
    mode_index: int
    lambda_s: float
    gamma: float
    lambda_m: float
    abs_err: float
    rel_err: float
    lambda_m_fd: float
    fd_rel_err: float
    passed: bool

    def to_record(self) -> dict:
        return {
            "mode_index": self.mode_index,
            "lambda_s": self.lambda_s,
            "gamma": self.gamma,
            "lambda_m": self.lambda_m,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "pass": self.passed,
        }


def _fd_log_derivative(F: Callable[[float], float], t: float, step: float) -> float:
    return (F(t + step) - F(t - step)) / (2.0 * step) / F(t)


def verify_frame_scaling(
    sol_s: SeparatedSolution,
    f: AlterationFactor,
    tol: float = DEFAULT_FRAME_SCALING_TOL,
    fd_tol: float = DEFAULT_FD_TOL,
) -> FrameScalingReport:
    """Check ``gamma * lam_s = lam_m`` through the time reparametrisation.

    The m-frame temporal factor is ``F(t_m) = f(gamma * t_m)``.  ``lam_m`` is
    read off as ``k F'/F`` from the exponent, then again from central
    differences of ``F`` at three m-frame times spread over one e-folding.
    """
    if sol_s.frame is not Frame.S:
        raise FrameMismatchError(f"expected an s-frame solution, got frame {sol_s.frame.value!r}")
    k = sol_s.k_const
    lam_s = sol_s.sep_constant
    gamma = f.gamma

    def F(t_m):
        return float(temporal_factor(lam_s, k, gamma * t_m))

    # F(t_m) = exp(rate_m t_m) with rate_m = d(t_s)/d(t_m) * rate_s = gamma * lam_s / k.
    rate_m = gamma * (lam_s / k)
    lam_m = k * rate_m
    expected = gamma * lam_s
    abs_err = abs(lam_m - expected)
    err = abs_err / abs(lam_s) if lam_s != 0 else abs_err

    t_scale = 1.0 / abs(rate_m) if rate_m != 0 else 1.0
    step = 1e-4 * t_scale
    fd = [k * _fd_log_derivative(F, t, step) for t in (0.0, 0.5 * t_scale, t_scale)]
    if lam_m != 0:
        fd_err = max(rel_err(x, lam_m) for x in fd)
    else:
        fd_err = max(abs(x) for x in fd)
    lam_m_fd = float(np.mean(fd))

    passed = err <= tol and fd_err <= fd_tol
    return FrameScalingReport(
        mode_index=sol_s.index,
        lambda_s=lam_s,
        gamma=gamma,
        lambda_m=lam_m,
        abs_err=abs_err,
        rel_err=err,
        lambda_m_fd=lam_m_fd,
        fd_rel_err=fd_err,
        passed=passed,
    )


def residual_operator_equation(
    op: SeparatingOperator, sol: SeparatedSolution, times: Sequence[float]
) -> float:
    """Max relative defect of ``D(h f) = k h df/dt`` over ``times``.

    ``df/dt`` is taken analytically.  An empty ``times`` gives 0.
    """
    h = sol.mode
    Dh = op.apply(h)
    norm_h = np.linalg.norm(h)
    worst = 0.0
    for t in times:
        ft = float(temporal_factor(sol.sep_constant, sol.k_const, t))
        dft = (sol.sep_constant / sol.k_const) * ft
        denom = norm_h * abs(ft)
        if denom == 0 or not math.isfinite(denom):
            # f under/overflowed; it factors out of both sides.
            defect = np.linalg.norm(Dh - sol.k_const * (sol.sep_constant / sol.k_const) * h) / norm_h
        else:
            defect = np.linalg.norm(Dh * ft - sol.k_const * h * dft) / denom
        worst = max(worst, float(defect))
    return worst
