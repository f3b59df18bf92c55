"""Closed-form linear output head.

Given layer outputs Z (rows are features, columns are samples) and targets T,
the least-squares read-out V minimizes 0.5 * ||V Z - T||_F^2. It satisfies the
normal equations V (Z Z') = T Z', so the residual is orthogonal to the
features: (V Z - T) Z' = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularMatrix
from .linalg import as_matrix, gram, matmul, pseudoinverse, solve_spd_right


@dataclass(frozen=True)
class OutputHead:
    """Linear map from layer outputs to target estimates."""

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", as_matrix(self.weights))

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    def predict(self, features) -> np.ndarray:
        return matmul(self.weights, features)


def solve_head(features, targets) -> OutputHead:
    """Solve the normal equations for the optimal linear read-out.

    Uses a Cholesky solve against the feature Gram matrix; if that reports a
    rank deficiency, falls back to the pseudoinverse, which returns the
    minimum-norm solution among the least-squares minimizers.
    """
    z = as_matrix(features)
    t = as_matrix(targets)
    if z.shape[1] != t.shape[1]:
        raise DimensionMismatch(
            f"features have {z.shape[1]} samples but targets have {t.shape[1]}"
        )
    if z.shape[1] == 0:
        raise DimensionMismatch("cannot fit a head to zero samples")
    rhs = matmul(t, z.T)
    try:
        weights = solve_spd_right(rhs, gram(z))
    except SingularMatrix:
        weights = matmul(t, pseudoinverse(z))
    return OutputHead(weights)


def residual(head: OutputHead, features, targets) -> np.ndarray:
    """Prediction error V Z - T."""
    t = as_matrix(targets)
    r = head.predict(features) - t
    return r


def quadratic_cost(head: OutputHead, features, targets) -> float:
    """0.5 * sum of squared residual entries."""
    r = residual(head, features, targets)
    return 0.5 * float(np.sum(r * r))


def mean_sq_error(head: OutputHead, features, targets) -> float:
    """Sum of squared residuals divided by the sample count."""
    r = residual(head, features, targets)
    n_samples = r.shape[1]
    if n_samples == 0:
        raise DimensionMismatch("mean squared error needs at least one sample")
    return float(np.sum(r * r)) / n_samples
