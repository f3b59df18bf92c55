"""Single-layer training loop.

One nonlinear layer is trained in isolation. Each cycle recomputes the
activation parameters from the current pre-activations, solves the optimal
linear read-out in closed form, then takes one gradient step on the layer
weights with the read-out held fixed. The returned layer is the best snapshot
by test cost, not the last iterate.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import activation
from .activation import KINDS, RECT_AMP, ActivationParams
from .errors import DimensionMismatch, ZeroGradient
from .head import OutputHead, quadratic_cost, solve_head
from .linalg import as_matrix, matmul

# Below this the gradient is treated as exactly zero (converged).
GRADIENT_FLOOR = 1e-300


@dataclass(frozen=True)
class LayerState:
    """Weights plus frozen activation parameters for one layer."""

    weights: np.ndarray
    params: ActivationParams

    def __post_init__(self):
        w = as_matrix(self.weights)
        if w.shape[0] < 1 or w.shape[1] < 1:
            raise ValueError("layer weights must be at least 1x1")
        object.__setattr__(self, "weights", w)

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class TrainConfig:
    max_cycles: int = 200
    patience: int = 20
    step_scale: float = 0.15
    init_range: float = 1.0
    seed: int = 0
    activation: str = RECT_AMP
    slope_norm: str = "sum"

    def __post_init__(self):
        if self.max_cycles < 1:
            raise ValueError("max_cycles must be at least 1")
        if not 1 <= self.patience <= self.max_cycles:
            raise ValueError("patience must be in [1, max_cycles]")
        if not self.step_scale > 0:
            raise ValueError("step_scale must be positive")
        if self.init_range < 0:
            raise ValueError("init_range must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.activation not in KINDS:
            raise ValueError(f"unknown activation kind {self.activation!r}")
        if self.slope_norm not in ("sum", "rms"):
            raise ValueError(f"unknown slope_norm {self.slope_norm!r}")


@dataclass(frozen=True)
class CycleReport:
    """Costs and step size for one training cycle.

    delta == 0.0 marks a converged cycle (zero gradient, weights unchanged).
    """

    cycle: int
    train_cost: float
    test_cost: float
    delta: float
    is_best: bool


@dataclass(frozen=True)
class LayerSnapshot:
    """Layer state and its read-out as they stood after one cycle's fit."""

    layer: LayerState
    head: OutputHead


@dataclass(frozen=True)
class TrainedLayer:
    layer: LayerState
    head: OutputHead
    history: tuple = field(default_factory=tuple)
    best_test_cost: float = float("inf")


def init_weights(p: int, n: int, seed: int, init_range: float = 1.0) -> np.ndarray:
    """p x n matrix of i.i.d. uniform values on [-init_range, +init_range].

    Drawn from numpy's PCG64 stream so the same seed always reproduces the
    same matrix.
    """
    if p < 1 or n < 1:
        raise ValueError("weight matrix must be at least 1x1")
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(-init_range, init_range, size=(p, n))


def layer_error(head: OutputHead, z, t, d) -> np.ndarray:
    """Back-projected residual gated by the activation derivative.

    E = D * (V' (V Z - T)). With the read-out linear and V held fixed, this is
    the exact cost gradient with respect to the layer's pre-activations.
    """
    z = as_matrix(z)
    d = as_matrix(d)
    if d.shape != z.shape:
        raise DimensionMismatch(f"derivative mask {d.shape} does not match outputs {z.shape}")
    back = matmul(head.weights.T, head.predict(z) - as_matrix(t))
    return d * back


def _step_from_gradient(grad: np.ndarray, step_scale: float) -> float:
    norm = float(np.sqrt(np.sum(grad * grad)))
    if norm < GRADIENT_FLOOR:
        raise ZeroGradient("weight gradient vanished; layer has converged")
    return step_scale / norm


def step_size(e, x, step_scale: float) -> float:
    """step_scale / ||E X'||_F, so the applied update has norm step_scale."""
    return _step_from_gradient(matmul(as_matrix(e), as_matrix(x).T), step_scale)


def train_cycle(w, x_tr, t_tr, x_te, t_te, cfg: TrainConfig):
    """One fit-solve-step cycle; returns (w_next, CycleReport, LayerSnapshot).

    The report's cycle index and is_best flag are placeholders for the caller
    to stamp. A zero gradient is reported as delta == 0.0 with w returned
    unchanged rather than raised, so the caller can record the converged
    cycle before stopping.
    """
    w = as_matrix(w)
    y = matmul(w, x_tr)
    params = activation.fit_params(y, cfg.activation, cfg.slope_norm)
    z = activation.apply(params, y)
    head = solve_head(z, t_tr)
    train_cost = quadratic_cost(head, z, t_tr)
    z_te = activation.apply(params, matmul(w, x_te))
    test_cost = quadratic_cost(head, z_te, t_te)
    snapshot = LayerSnapshot(LayerState(w, params), head)

    e = layer_error(head, z, t_tr, activation.derivative_mask(params, y))
    grad = matmul(e, as_matrix(x_tr).T)
    try:
        delta = _step_from_gradient(grad, cfg.step_scale)
    except ZeroGradient:
        report = CycleReport(0, train_cost, test_cost, 0.0, False)
        return w, report, snapshot
    report = CycleReport(0, train_cost, test_cost, delta, False)
    return w - delta * grad, report, snapshot


def train_layer(x_tr, t_tr, x_te, t_te, p: int, cfg: TrainConfig) -> TrainedLayer:
    """Train a width-p layer and return its best-by-test-cost snapshot.

    Tracks the running best test cost, keeps the snapshot that achieved it,
    and stops after `patience` cycles without strict improvement, at
    max_cycles, or when the gradient vanishes.
    """
    x_tr = as_matrix(x_tr)
    if p < 1:
        raise ValueError("layer width must be at least 1")
    if x_tr.shape[1] < 1 or as_matrix(x_te).shape[1] < 1:
        raise DimensionMismatch("need at least one train and one test sample")
    w = init_weights(p, x_tr.shape[0], cfg.seed, cfg.init_range)
    best: LayerSnapshot | None = None
    best_cost = float("inf")
    history = []
    stale = 0
    for cycle in range(cfg.max_cycles):
        w_next, report, snapshot = train_cycle(w, x_tr, t_tr, x_te, t_te, cfg)
        improved = report.test_cost < best_cost
        if improved:
            best = snapshot
            best_cost = report.test_cost
            stale = 0
        else:
            stale += 1
        history.append(dataclasses.replace(report, cycle=cycle, is_best=improved))
        if report.delta == 0.0 or stale >= cfg.patience:
            break
        w = w_next
    return TrainedLayer(best.layer, best.head, tuple(history), best_cost)


def layer_forward(layer: LayerState, x) -> np.ndarray:
    """Run inputs through the frozen layer (no parameter refit)."""
    return activation.apply(layer.params, matmul(layer.weights, x))
