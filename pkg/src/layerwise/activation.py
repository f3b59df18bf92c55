"""Bounded elementwise nonlinearities and data-driven parameter fitting.

Two unit shapes are supported. ``rect_amp`` is a clamped-linear unit: slope
``slope`` on the band |u| <= limit, flat at +/- slope*limit outside it.
``sigmoid`` is a symmetric saturating curve with the same small-signal slope
and output bound ``limit``. Both are applied to mean-centered values, which
stands in for per-unit bias terms.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput
from .linalg import as_matrix

RECT_AMP = "rect_amp"
SIGMOID = "sigmoid"
KINDS = (RECT_AMP, SIGMOID)

# Fraction of entries allowed to saturate when fitting the limit.
SATURATION_FRACTION = 0.3


@dataclass(frozen=True)
class ActivationParams:
    """Frozen per-layer activation settings.

    slope: small-signal gain near the center.
    limit: half-width of the linear band (rect_amp) or output bound (sigmoid).
    center: offset subtracted from every value before the nonlinearity.
    """

    kind: str
    slope: float
    limit: float
    center: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if not (np.isfinite(self.slope) and self.slope > 0):
            raise ValueError("slope must be positive and finite")
        if not (np.isfinite(self.limit) and self.limit > 0):
            raise ValueError("limit must be positive and finite")
        if not np.isfinite(self.center):
            raise ValueError("center must be finite")


def center_mean(values) -> float:
    """Arithmetic mean over all entries."""
    y = as_matrix(values)
    if y.size == 0:
        raise DegenerateInput("cannot center an empty matrix")
    return float(y.mean())


def _saturation_threshold(abs_dev: np.ndarray) -> float:
    # Smallest sample value q with count(|dev| > q) <= 0.3 * total; the
    # comparison is done in integers (10*count <= 3*total) to keep the 0.3
    # cutoff exact.
    flat = np.sort(abs_dev, axis=None)
    total = flat.size
    allowed = (3 * total) // 10
    return float(flat[total - allowed - 1])


def fit_params(values, kind: str = RECT_AMP, slope_norm: str = "sum") -> ActivationParams:
    """Fit (slope, limit, center) to a matrix of pre-activation values.

    The center is the grand mean. The slope is the inverse root of the total
    squared deviation from the center (``slope_norm="sum"``), or of the mean
    squared deviation (``slope_norm="rms"``). The limit is the tightest
    threshold that leaves at most 30% of the centered magnitudes outside the
    linear band, i.e. their 70th percentile.
    """
    y = as_matrix(values)
    if y.size < 2:
        raise DegenerateInput("need at least two values to fit activation parameters")
    center = float(y.mean())
    dev = y - center
    total_sq = float(np.sum(dev * dev))
    if total_sq == 0.0:
        raise DegenerateInput("all values are identical; slope is undefined")
    if slope_norm == "sum":
        slope = total_sq**-0.5
    elif slope_norm == "rms":
        slope = (total_sq / y.size) ** -0.5
    else:
        raise ValueError(f"unknown slope_norm {slope_norm!r}")
    limit = _saturation_threshold(np.abs(dev))
    if limit <= 0.0:
        raise DegenerateInput("saturation threshold is zero; too many values sit at the center")
    return ActivationParams(kind, slope, limit, center)


def apply(params: ActivationParams, values) -> np.ndarray:
    """Apply the activation elementwise to centered values."""
    u = as_matrix(values) - params.center
    if params.kind == RECT_AMP:
        return params.slope * np.clip(u, -params.limit, params.limit)
    # tanh form of the symmetric sigmoid: bounded by `limit`, slope `slope` at 0
    return params.limit * np.tanh(params.slope * u / params.limit)


def derivative_mask(params: ActivationParams, values) -> np.ndarray:
    """Elementwise derivative of `apply` at the given values.

    For rect_amp the derivative at the exact band edge is taken as 0 (the
    saturated side).
    """
    u = as_matrix(values) - params.center
    if params.kind == RECT_AMP:
        return np.where(np.abs(u) < params.limit, params.slope, 0.0)
    t = np.tanh(params.slope * u / params.limit)
    return params.slope * (1.0 - t * t)
