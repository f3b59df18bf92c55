"""Data-driven width selection and greedy network growth.

Test error as a function of adjustable-weight count k is modeled as

    sigma2(k) = alpha * k**-lam + beta * k / N

(approximation term falling in k, estimation term growing with k over the
training sample count N). A handful of small probe layers pins down alpha
and lam by log-log regression, one moderate probe pins down beta, and the
model's minimizer picks the width of the next layer. Layers are added
greedily while they keep improving the test cost.
"""

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import activation
from .data import Split
from .errors import InsufficientProbes, NegativeBeta, NonPositiveSigma
from .head import mean_sq_error, solve_head
from .linalg import matmul
from .network import Network
from .trainer import TrainConfig, init_weights, layer_forward, train_layer

TRAINED = "trained"
UNTRAINED = "untrained"
PROBE_MODES = (TRAINED, UNTRAINED)


@dataclass(frozen=True)
class ProbeResult:
    """One measured (width, weight count, test error) point."""

    p: int
    k: int
    sigma2: float
    mode: str


@dataclass(frozen=True)
class ScalingModel:
    alpha: float
    lam: float
    beta: float
    n_samples: int

    def __post_init__(self):
        for name in ("alpha", "lam", "beta"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")

    def sigma2(self, k) -> float:
        """Modeled test error at weight count k."""
        return self.alpha * float(k) ** -self.lam + self.beta * float(k) / self.n_samples


@dataclass(frozen=True)
class GrowthConfig:
    probe_widths: tuple = (1, 2, 3, 4)
    beta_probe_width: int = 8
    max_layers: int = 8
    train: TrainConfig = field(default_factory=TrainConfig)
    probe_mode: str = TRAINED
    probe_max_cycles: int = 50
    improve_margin: float = 1e-6

    def __post_init__(self):
        widths = tuple(int(p) for p in self.probe_widths)
        if len(widths) < 2 or any(b <= a for a, b in zip(widths, widths[1:])) or widths[0] < 1:
            raise ValueError("probe_widths must be at least two strictly increasing positive counts")
        if self.beta_probe_width <= widths[-1]:
            raise ValueError("beta_probe_width must exceed every probe width")
        if self.max_layers < 1:
            raise ValueError("max_layers must be at least 1")
        if self.probe_mode not in PROBE_MODES:
            raise ValueError(f"unknown probe_mode {self.probe_mode!r}")
        if self.probe_max_cycles < 1:
            raise ValueError("probe_max_cycles must be at least 1")
        if self.improve_margin < 0:
            raise ValueError("improve_margin must be nonnegative")
        object.__setattr__(self, "probe_widths", widths)


@dataclass(frozen=True)
class ModelEstimate:
    """Probe measurements plus the fitted model and the width it implies.

    model is None when fitting failed (too few usable probes, nonpositive
    error, or a beta estimate at or below zero); the width then falls back
    to beta_probe_width.
    """

    probes: tuple
    beta_probe: ProbeResult
    model: object
    k_real: float
    k_o: int
    width: int


@dataclass(frozen=True)
class LayerReport:
    """Outcome of one growth step (accepted or rejected candidate)."""

    index: int
    width: int
    beta: float
    test_cost: float
    accepted: bool
    history: tuple


@dataclass(frozen=True)
class GrowthResult:
    network: Network
    estimate: ModelEstimate
    layer_reports: tuple


def _probe_train_config(gcfg: GrowthConfig, p: int) -> TrainConfig:
    # Probe sessions are independent, so each gets its own seed (seed xor
    # width) and a shortened cycle budget.
    cycles = min(gcfg.train.max_cycles, gcfg.probe_max_cycles)
    return dataclasses.replace(
        gcfg.train,
        seed=gcfg.train.seed ^ p,
        max_cycles=cycles,
        patience=min(gcfg.train.patience, cycles),
    )


def run_probe(x_tr, t_tr, x_te, t_te, p: int, mode: str, gcfg: GrowthConfig) -> ProbeResult:
    """Measure test error of one width-p two-layer configuration.

    Trained mode runs the normal layer loop (shortened) and counts every
    adjustable weight, k = (n + m) p. Untrained mode keeps the random layer
    weights fixed and only solves the head, so k = m p.
    """
    if p < 1:
        raise ValueError("probe width must be at least 1")
    if mode not in PROBE_MODES:
        raise ValueError(f"unknown probe_mode {mode!r}")
    n = x_tr.shape[0]
    m = t_tr.shape[0]
    cfg = _probe_train_config(gcfg, p)
    if mode == TRAINED:
        trained = train_layer(x_tr, t_tr, x_te, t_te, p, cfg)
        z_te = layer_forward(trained.layer, x_te)
        sigma2 = mean_sq_error(trained.head, z_te, t_te)
        return ProbeResult(p, (n + m) * p, sigma2, mode)
    w = init_weights(p, n, cfg.seed, cfg.init_range)
    params = activation.fit_params(matmul(w, x_tr), cfg.activation, cfg.slope_norm)
    z_tr = activation.apply(params, matmul(w, x_tr))
    head = solve_head(z_tr, t_tr)
    z_te = activation.apply(params, matmul(w, x_te))
    return ProbeResult(p, m * p, mean_sq_error(head, z_te, t_te), mode)


def _probe_batch(x_tr, t_tr, x_te, t_te, widths, gcfg: GrowthConfig, jobs: int):
    # Results always merge in width order, so the jobs count never changes
    # the output.
    if jobs <= 1 or len(widths) <= 1:
        return [run_probe(x_tr, t_tr, x_te, t_te, p, gcfg.probe_mode, gcfg) for p in widths]
    with ThreadPoolExecutor(max_workers=min(jobs, len(widths))) as pool:
        futures = [pool.submit(run_probe, x_tr, t_tr, x_te, t_te, p, gcfg.probe_mode, gcfg)
                   for p in widths]
        return [f.result() for f in futures]


def fit_alpha_lambda(probes) -> tuple:
    """Least-squares fit of ln sigma2 = ln alpha - lam * ln k over probes."""
    if len(probes) < 2:
        raise InsufficientProbes(f"need at least 2 probes, got {len(probes)}")
    for pr in probes:
        if not pr.sigma2 > 0:
            raise NonPositiveSigma(f"probe at p={pr.p} measured sigma2={pr.sigma2!r}")
    ks = np.array([pr.k for pr in probes], dtype=float)
    if np.unique(ks).size < 2:
        raise InsufficientProbes("probes share a single weight count; regression is degenerate")
    x = np.log(ks)
    y = np.log(np.array([pr.sigma2 for pr in probes]))
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    alpha = float(np.exp(y.mean() - slope * x.mean()))
    return alpha, -slope


def fit_beta(probe: ProbeResult, alpha: float, lam: float, n_samples: int) -> float:
    """Solve the error model for beta at one larger probe point."""
    if probe.k < 1 or n_samples < 1:
        raise ValueError("weight and sample counts must be positive")
    beta = (probe.sigma2 - alpha * probe.k ** -lam) * n_samples / probe.k
    if beta <= 0:
        raise NegativeBeta(
            f"measured sigma2 {probe.sigma2!r} at k={probe.k} sits at or below the "
            f"approximation term; beta={beta!r}"
        )
    return beta


def optimal_k(alpha: float, lam: float, beta: float, n_samples: int):
    """Weight count minimizing the error model.

    Returns the real stationary point (alpha*lam*N/beta)**(1/(lam+1)) and
    the better of its two integer neighbors (at least 1).
    """
    for name, v in (("alpha", alpha), ("lam", lam), ("beta", beta), ("n_samples", n_samples)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v!r}")
    k_real = (alpha * lam * n_samples / beta) ** (1.0 / (lam + 1.0))
    lo = max(1, math.floor(k_real))
    hi = max(1, math.ceil(k_real))

    def modeled(k):
        return alpha * float(k) ** -lam + beta * float(k) / n_samples

    k_o = lo if modeled(lo) <= modeled(hi) else hi
    return k_real, k_o


def width_from_k(k_o: int, n: int, m: int, mode: str) -> int:
    """Convert a weight budget to a layer width, rounding half up.

    A trained layer plus its head spends (n + m) weights per unit; an
    untrained probe only spends the head's m per unit.
    """
    if k_o < 1:
        raise ValueError("weight count must be at least 1")
    if mode not in PROBE_MODES:
        raise ValueError(f"unknown probe_mode {mode!r}")
    divisor = (n + m) if mode == TRAINED else m
    return max(1, math.floor(k_o / divisor + 0.5))


def estimate_model(split: Split, gcfg: GrowthConfig, jobs: int = 1) -> ModelEstimate:
    """Probe the raw inputs, fit the error model, and pick a first width."""
    x_tr, t_tr = split.train.inputs, split.train.targets
    x_te, t_te = split.test.inputs, split.test.targets
    probes = _probe_batch(x_tr, t_tr, x_te, t_te, gcfg.probe_widths, gcfg, jobs)
    beta_probe = run_probe(x_tr, t_tr, x_te, t_te, gcfg.beta_probe_width, gcfg.probe_mode, gcfg)
    fallback = ModelEstimate(tuple(probes), beta_probe, None, math.nan, 0, gcfg.beta_probe_width)
    try:
        alpha, lam = fit_alpha_lambda(probes)
    except (InsufficientProbes, NonPositiveSigma):
        return fallback
    if not (np.isfinite(alpha) and np.isfinite(lam) and alpha > 0 and lam > 0):
        return fallback
    try:
        beta = fit_beta(beta_probe, alpha, lam, split.train.n_samples)
    except NegativeBeta:
        return fallback
    model = ScalingModel(alpha, lam, beta, split.train.n_samples)
    k_real, k_o = optimal_k(alpha, lam, beta, model.n_samples)
    width = width_from_k(k_o, split.train.n_inputs, split.train.n_targets, gcfg.probe_mode)
    return ModelEstimate(tuple(probes), beta_probe, model, k_real, k_o, width)


def _next_width(x_tr, t_tr, x_te, t_te, estimate: ModelEstimate, gcfg: GrowthConfig):
    # One fresh probe at the moderate width re-measures beta on the current
    # features; alpha and lam carry over from the first fit.
    probe = run_probe(x_tr, t_tr, x_te, t_te, gcfg.beta_probe_width, gcfg.probe_mode, gcfg)
    if estimate.model is None:
        return gcfg.beta_probe_width, math.nan
    model = estimate.model
    try:
        beta = fit_beta(probe, model.alpha, model.lam, model.n_samples)
    except NegativeBeta:
        return gcfg.beta_probe_width, math.nan
    _, k_o = optimal_k(model.alpha, model.lam, beta, model.n_samples)
    return width_from_k(k_o, x_tr.shape[0], t_tr.shape[0], gcfg.probe_mode), beta


def grow_network(split: Split, gcfg: GrowthConfig, jobs: int = 1) -> GrowthResult:
    """Grow a network one trained layer at a time.

    The first layer is always kept. Each later candidate trains on the
    frozen stack's outputs and is accepted only if its best test cost beats
    the incumbent by the relative improvement margin; the first rejection
    (or the max_layers cap) stops growth. Layer training seeds are the base
    seed plus the layer index.
    """
    estimate = estimate_model(split, gcfg, jobs)
    x_tr, t_tr = split.train.inputs, split.train.targets
    x_te, t_te = split.test.inputs, split.test.targets
    beta0 = estimate.model.beta if estimate.model is not None else math.nan

    reports = []
    layers = []
    head = None
    best_cost = math.inf
    width = estimate.width
    beta = beta0
    while len(layers) < gcfg.max_layers:
        index = len(layers)
        cfg = dataclasses.replace(gcfg.train, seed=gcfg.train.seed + index)
        candidate = train_layer(x_tr, t_tr, x_te, t_te, width, cfg)
        accepted = index == 0 or candidate.best_test_cost < best_cost * (1.0 - gcfg.improve_margin)
        reports.append(LayerReport(index, width, beta, candidate.best_test_cost, accepted, candidate.history))
        if not accepted:
            break
        layers.append(candidate.layer)
        head = candidate.head
        best_cost = candidate.best_test_cost
        if len(layers) >= gcfg.max_layers:
            break
        x_tr = layer_forward(candidate.layer, x_tr)
        x_te = layer_forward(candidate.layer, x_te)
        width, beta = _next_width(x_tr, t_tr, x_te, t_te, estimate, gcfg)

    accepted_reports = [r for r in reports if r.accepted]
    meta = {
        "seed": gcfg.train.seed,
        "test_fraction_samples": [split.train.n_samples, split.test.n_samples],
        "activation": gcfg.train.activation,
        "step_scale": gcfg.train.step_scale,
        "max_cycles": gcfg.train.max_cycles,
        "patience": gcfg.train.patience,
        "probe_mode": gcfg.probe_mode,
        "probe_widths": list(gcfg.probe_widths),
        "beta_probe_width": gcfg.beta_probe_width,
        "max_layers": gcfg.max_layers,
        "improve_margin": gcfg.improve_margin,
        "layer_widths": [r.width for r in accepted_reports],
        "layer_test_costs": [r.test_cost for r in accepted_reports],
        "format_version": 1,
    }
    if estimate.model is not None:
        meta["alpha"] = estimate.model.alpha
        meta["lam"] = estimate.model.lam
        meta["beta_first_layer"] = estimate.model.beta
    net = Network(tuple(layers), head, meta)
    return GrowthResult(net, estimate, tuple(reports))
