"""Assembled model: a stack of frozen layers under one linear head.

Persistence uses a versioned JSON document whose numbers survive a
write/read round trip bit for bit (Python reprs shortest-round-trip
floats, and json parses them back exactly).
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .activation import KINDS, ActivationParams
from .errors import DimensionMismatch, FormatError
from .head import OutputHead, mean_sq_error, quadratic_cost
from .linalg import as_matrix
from .trainer import LayerState, layer_forward

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Network:
    layers: tuple
    head: OutputHead
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ValueError("a network needs at least one nonlinear layer")
        for i in range(len(layers) - 1):
            if layers[i + 1].in_dim != layers[i].out_dim:
                raise ValueError(
                    f"layer {i} emits {layers[i].out_dim} values but layer {i + 1} expects {layers[i + 1].in_dim}"
                )
        if self.head.in_dim != layers[-1].out_dim:
            raise ValueError(
                f"head expects {self.head.in_dim} features but the last layer emits {layers[-1].out_dim}"
            )
        object.__setattr__(self, "layers", layers)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.head.out_dim


def forward(net: Network, x) -> np.ndarray:
    """Chain every frozen layer, then apply the head."""
    z = as_matrix(x)
    if z.shape[0] != net.in_dim:
        raise DimensionMismatch(f"network expects {net.in_dim} input rows, got {z.shape[0]}")
    for layer in net.layers:
        z = layer_forward(layer, z)
    return net.head.predict(z)


def evaluate(net: Network, x, t):
    """(quadratic cost, mean squared error) of predictions against targets."""
    z = as_matrix(x)
    if z.shape[0] != net.in_dim:
        raise DimensionMismatch(f"network expects {net.in_dim} input rows, got {z.shape[0]}")
    for layer in net.layers:
        z = layer_forward(layer, z)
    return quadratic_cost(net.head, z, t), mean_sq_error(net.head, z, t)


def _matrix_record(w: np.ndarray) -> dict:
    return {
        "rows": int(w.shape[0]),
        "cols": int(w.shape[1]),
        "weights": [float(v) for v in w.ravel()],
    }


def save(net: Network, path) -> None:
    """Write the versioned JSON model document atomically (temp + rename)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "layers": [
            {
                **_matrix_record(layer.weights),
                "activation": layer.params.kind,
                "a": layer.params.slope,
                "b": layer.params.limit,
                "mu": layer.params.center,
            }
            for layer in net.layers
        ],
        "head": _matrix_record(net.head.weights),
        "meta": net.meta,
    }
    path = os.fspath(path)
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w") as fh:
            json.dump(doc, fh, allow_nan=False, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise FormatError(message)


def _read_matrix(record, what: str) -> np.ndarray:
    _require(isinstance(record, dict), f"{what}: expected a record")
    for key in ("rows", "cols", "weights"):
        _require(key in record, f"{what}: missing field {key!r}")
    rows, cols = record["rows"], record["cols"]
    _require(isinstance(rows, int) and isinstance(cols, int) and rows >= 1 and cols >= 1,
             f"{what}: rows/cols must be positive integers")
    weights = record["weights"]
    _require(isinstance(weights, list) and len(weights) == rows * cols,
             f"{what}: expected {rows * cols} weights, found {len(weights) if isinstance(weights, list) else 'none'}")
    try:
        return as_matrix(np.array([float(v) for v in weights], dtype=float).reshape(rows, cols))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: bad weight values ({exc})") from None


def load(path) -> Network:
    """Parse and validate a saved model document."""
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not a valid model file: {exc}") from None
    _require(isinstance(doc, dict), "top level must be a record")
    version = doc.get("format_version")
    _require(version == FORMAT_VERSION, f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    raw_layers = doc.get("layers")
    _require(isinstance(raw_layers, list) and raw_layers, "model must list at least one layer")
    layers = []
    for i, rec in enumerate(raw_layers):
        what = f"layer {i}"
        w = _read_matrix(rec, what)
        _require(rec.get("activation") in KINDS, f"{what}: unknown activation {rec.get('activation')!r}")
        try:
            params = ActivationParams(rec["activation"], float(rec["a"]), float(rec["b"]), float(rec["mu"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{what}: bad activation parameters ({exc})") from None
        layers.append(LayerState(w, params))
    _require("head" in doc, "model is missing its head")
    head = OutputHead(_read_matrix(doc["head"], "head"))
    meta = doc.get("meta", {})
    _require(isinstance(meta, dict), "meta must be a record")
    try:
        return Network(tuple(layers), head, meta)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def summary(net: Network) -> str:
    """Human-readable architecture listing with per-layer fit parameters."""
    costs = net.meta.get("layer_test_costs")
    if not (isinstance(costs, list) and len(costs) == len(net.layers)):
        costs = None
    lines = [f"network: {len(net.layers)} layer(s) + linear head, {net.in_dim} inputs -> {net.out_dim} outputs"]
    for i, layer in enumerate(net.layers):
        p = layer.params
        line = (f"  layer {i}: {layer.in_dim} -> {layer.out_dim}  {p.kind}"
                f"  slope={p.slope:.6g} limit={p.limit:.6g} center={p.center:.6g}")
        if costs is not None:
            line += f"  best test cost {costs[i]!r}"
        lines.append(line)
    lines.append(f"  head: {net.head.in_dim} -> {net.head.out_dim}")
    return "\n".join(lines)
