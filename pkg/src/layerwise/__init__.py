"""Layer-by-layer trained feed-forward networks with self-chosen widths.

Each nonlinear layer is trained in isolation against the closed-form
optimal linear read-out of its own outputs, then frozen. A three-constant
model of test error versus weight count, fitted from a few cheap probes,
picks every layer's width, and growth stops when an added layer no longer
improves the test cost.
"""

from .activation import KINDS, RECT_AMP, SIGMOID, ActivationParams, apply, derivative_mask, fit_params
from .configure import (
    PROBE_MODES,
    TRAINED,
    UNTRAINED,
    GrowthConfig,
    GrowthResult,
    LayerReport,
    ModelEstimate,
    ProbeResult,
    ScalingModel,
    estimate_model,
    fit_alpha_lambda,
    fit_beta,
    grow_network,
    optimal_k,
    run_probe,
    width_from_k,
)
from .data import (
    LINEAR,
    NONLINEAR,
    Dataset,
    Split,
    load_csv,
    make_synthetic,
    save_csv,
    split_dataset,
)
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    FormatError,
    InsufficientProbes,
    LayerwiseError,
    NegativeBeta,
    NonPositiveSigma,
    ParseError,
    ShapeError,
    SingularMatrix,
    TooFewSamples,
    ZeroGradient,
)
from .head import OutputHead, mean_sq_error, quadratic_cost, residual, solve_head
from .network import FORMAT_VERSION, Network, evaluate, forward, load, save, summary
from .trainer import (
    CycleReport,
    LayerSnapshot,
    LayerState,
    TrainConfig,
    TrainedLayer,
    init_weights,
    layer_error,
    layer_forward,
    step_size,
    train_cycle,
    train_layer,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationParams", "apply", "derivative_mask", "fit_params",
    "KINDS", "RECT_AMP", "SIGMOID",
    "OutputHead", "solve_head", "residual", "quadratic_cost", "mean_sq_error",
    "LayerState", "TrainConfig", "CycleReport", "LayerSnapshot", "TrainedLayer",
    "init_weights", "layer_error", "step_size", "train_cycle", "train_layer", "layer_forward",
    "ProbeResult", "ScalingModel", "GrowthConfig", "ModelEstimate", "LayerReport", "GrowthResult",
    "PROBE_MODES", "TRAINED", "UNTRAINED",
    "run_probe", "fit_alpha_lambda", "fit_beta", "optimal_k", "width_from_k",
    "estimate_model", "grow_network",
    "Network", "FORMAT_VERSION", "forward", "evaluate", "save", "load", "summary",
    "Dataset", "Split", "LINEAR", "NONLINEAR",
    "load_csv", "save_csv", "split_dataset", "make_synthetic",
    "LayerwiseError", "DimensionMismatch", "SingularMatrix", "DegenerateInput",
    "ZeroGradient", "InsufficientProbes", "NonPositiveSigma", "NegativeBeta",
    "TooFewSamples", "ParseError", "ShapeError", "FormatError",
    "__version__",
]
