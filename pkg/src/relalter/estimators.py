"""scikit-learn style wrappers.

:class:`SeparatedModes` fits the leading separated solutions of an operator
and projects grid fields onto them (an eigenfunction expansion), so it can
sit inside a :class:`sklearn.pipeline.Pipeline`.  :class:`FrameAlteration`
applies an alteration rule column-wise to an array of s-frame measurements.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .alterations import QuantityKind
from .exceptions import InvalidInputError, NegativeQuantityError
from .metric import (
    CODATA_2018,
    AlterationFactor,
    GravitationalSource,
    KinematicFrame,
    schwarzschild_lambda,
    special_lambda,
)
from .sepvar import (
    DEFAULT_EIGEN_RESIDUAL_TOL,
    Grid1D,
    discretize,
    eigenmodes,
    to_m_frame,
    verify_frame_scaling,
)

__all__ = ["SeparatedModes", "FrameAlteration"]


class SeparatedModes(TransformerMixin, BaseEstimator):
    """Leading eigenmodes of a Dirichlet separating operator.

    Parameters
    ----------
    kind : {"laplacian", "schrodinger_with_potential", "custom_matrix"}
    n_points : int
        Interior grid nodes. Ignored for ``custom_matrix``.
    length : float
        Interval length.
    n_modes : int
        Number of modes kept.
    potential : scalar, array or callable, optional
        Potential for the Schrodinger kind.
    matrix : array, optional
        Symmetric matrix for the custom kind.
    k_const : float
        Constant ``k`` of ``D(T) = k dT/dt``.
    residual_tol : float
        Eigenpair residual bound, relative to ``|lambda|``.

    Attributes
    ----------
    operator_ : SeparatingOperator
    solutions_ : list of SeparatedSolution
    eigenvalues_ : ndarray of shape (n_modes,)
    components_ : ndarray of shape (n_modes, n_points)
        Unit-norm modes, one per row.
    """

    def __init__(
        self,
        kind="laplacian",
        n_points=100,
        length=1.0,
        n_modes=5,
        potential=None,
        matrix=None,
        k_const=1.0,
        residual_tol=DEFAULT_EIGEN_RESIDUAL_TOL,
    ):
        self.kind = kind
        self.n_points = n_points
        self.length = length
        self.n_modes = n_modes
        self.potential = potential
        self.matrix = matrix
        self.k_const = k_const
        self.residual_tol = residual_tol

    def fit(self, X=None, y=None):
        """Solve the eigenproblem. ``X`` and ``y`` are ignored."""
        if self.kind == "custom_matrix":
            op = discretize(self.kind, None, k_const=self.k_const, matrix=self.matrix)
        else:
            grid = Grid1D(self.length, self.n_points)
            op = discretize(self.kind, grid, self.potential, self.k_const)
        self.operator_ = op
        self.solutions_ = eigenmodes(op, self.n_modes, residual_tol=self.residual_tol)
        self.eigenvalues_ = np.array([s.sep_constant for s in self.solutions_])
        self.components_ = np.vstack([s.mode for s in self.solutions_])
        self.n_features_in_ = op.size
        return self

    def transform(self, X):
        """Coefficients of each row of ``X`` (fields on the grid) along the modes."""
        check_is_fitted(self)
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, operator acts on {self.n_features_in_} nodes")
        return X @ self.components_.T

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = check_array(X)
        return X @ self.components_

    def verify(self, factor: AlterationFactor, **tolerances):
        """Frame-scaling reports for every fitted mode under ``factor``."""
        check_is_fitted(self)
        return [verify_frame_scaling(s, factor, **tolerances) for s in self.solutions_]

    def m_frame_eigenvalues(self, factor: AlterationFactor) -> np.ndarray:
        check_is_fitted(self)
        return np.array([to_m_frame(s, factor).sep_constant for s in self.solutions_])


class FrameAlteration(TransformerMixin, BaseEstimator):
    """Map s-frame measurements to the m-frame.

    The factor comes from exactly one of ``gamma``, ``velocity`` (m/s), or
    ``source_mass`` with ``source_radius``.  Every column of ``X`` is a
    quantity of type ``quantity``; mass is divided by gamma, everything else
    multiplied.

    Attributes
    ----------
    factor_ : AlterationFactor
    """

    def __init__(
        self,
        quantity="frequency_Hz",
        gamma=None,
        velocity=None,
        source_mass=None,
        source_radius=None,
        constants=None,
    ):
        self.quantity = quantity
        self.gamma = gamma
        self.velocity = velocity
        self.source_mass = source_mass
        self.source_radius = source_radius
        self.constants = constants

    def _factor(self) -> AlterationFactor:
        k = self.constants if self.constants is not None else CODATA_2018
        given = [
            self.gamma is not None,
            self.velocity is not None,
            self.source_mass is not None or self.source_radius is not None,
        ]
        if sum(given) != 1:
            raise InvalidInputError("give exactly one of gamma, velocity, or source_mass + source_radius")
        if self.gamma is not None:
            return AlterationFactor.from_gamma(float(self.gamma))
        if self.velocity is not None:
            return special_lambda(KinematicFrame(float(self.velocity)), k)
        if self.source_mass is None or self.source_radius is None:
            raise InvalidInputError("source_mass and source_radius go together")
        return schwarzschild_lambda(GravitationalSource(float(self.source_mass), float(self.source_radius)), k)

    def fit(self, X=None, y=None):
        self.quantity_ = QuantityKind(self.quantity)
        self.factor_ = self._factor()
        if X is not None:
            self.n_features_in_ = check_array(X).shape[1]
        return self

    def _check(self, X):
        check_is_fitted(self)
        X = check_array(X)
        if self.quantity_ in (QuantityKind.FREQUENCY, QuantityKind.MASS) and np.any(X < 0):
            raise NegativeQuantityError(f"negative {self.quantity_.value} values")
        return X

    def transform(self, X):
        X = self._check(X)
        if self.quantity_ is QuantityKind.MASS:
            return X / self.factor_.gamma
        return self.factor_.gamma * X

    def inverse_transform(self, X):
        X = self._check(X)
        if self.quantity_ is QuantityKind.MASS:
            return self.factor_.gamma * X
        return X / self.factor_.gamma
