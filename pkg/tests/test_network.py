import json

import numpy as np
import numpy.testing as npt
import pytest

from layerwise.activation import RECT_AMP, SIGMOID, ActivationParams
from layerwise.errors import DimensionMismatch, FormatError
from layerwise.head import OutputHead
from layerwise.network import Network, evaluate, forward, load, save, summary
from layerwise.trainer import LayerState, layer_forward


def build_net(seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    l0 = LayerState(rng.uniform(-1, 1, (4, 3)), ActivationParams(RECT_AMP, 0.3, 1.5, 0.05))
    l1 = LayerState(rng.uniform(-1, 1, (2, 4)), ActivationParams(SIGMOID, 0.8, 0.9, -0.1))
    head = OutputHead(rng.uniform(-1, 1, (1, 2)))
    meta = {"seed": seed, "layer_test_costs": [1.25, 0.75], "layer_widths": [4, 2]}
    return Network((l0, l1), head, meta)


def test_network_validates_chain():
    net = build_net()
    with pytest.raises(ValueError):
        Network((), net.head)
    with pytest.raises(ValueError):
        Network((net.layers[0], net.layers[0]), net.head)  # 4 -> expects 3
    with pytest.raises(ValueError):
        Network((net.layers[0],), net.head)  # head expects 2, layer emits 4


def test_forward_matches_manual_composition():
    net = build_net(1)
    rng = np.random.Generator(np.random.PCG64(2))
    x = rng.normal(size=(3, 25))
    z = layer_forward(net.layers[1], layer_forward(net.layers[0], x))
    npt.assert_array_equal(forward(net, x), net.head.weights @ z)


def test_forward_zero_samples():
    net = build_net(3)
    assert forward(net, np.zeros((3, 0))).shape == (1, 0)


def test_forward_shape_check():
    with pytest.raises(DimensionMismatch):
        forward(build_net(), np.zeros((5, 4)))


def test_evaluate_self_targets_and_identity():
    net = build_net(4)
    rng = np.random.Generator(np.random.PCG64(5))
    x = rng.normal(size=(3, 13))
    t = forward(net, x)
    assert evaluate(net, x, t) == (0.0, 0.0)
    t2 = t + rng.normal(size=t.shape)
    cost, mse = evaluate(net, x, t2)
    npt.assert_allclose(mse, 2.0 * cost / 13, rtol=1e-12)
    r = forward(net, x) - t2
    npt.assert_allclose(cost, 0.5 * float(np.sum(r * r)), rtol=1e-12)


def test_save_load_roundtrip_bit_exact(tmp_path):
    net = build_net(6)
    path = tmp_path / "net.json"
    save(net, path)
    loaded = load(path)
    rng = np.random.Generator(np.random.PCG64(7))
    for _ in range(100):
        x = rng.uniform(-3, 3, size=(3, rng.integers(1, 9)))
        npt.assert_array_equal(forward(loaded, x), forward(net, x))
    assert loaded.meta == net.meta
    assert [l.params for l in loaded.layers] == [l.params for l in net.layers]
    # no stray temp files left behind
    assert [p.name for p in tmp_path.iterdir()] == ["net.json"]


def test_save_is_deterministic(tmp_path):
    net = build_net(8)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save(net, a)
    save(net, b)
    assert a.read_bytes() == b.read_bytes()


def test_load_rejects_truncated_file(tmp_path):
    net = build_net(9)
    path = tmp_path / "net.json"
    save(net, path)
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(FormatError):
        load(path)


def test_load_rejects_unknown_version(tmp_path):
    net = build_net(10)
    path = tmp_path / "net.json"
    save(net, path)
    doc = json.loads(path.read_text())
    doc["format_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(FormatError, match="99"):
        load(path)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("head"),
        lambda d: d.pop("layers"),
        lambda d: d["layers"].clear(),
        lambda d: d["layers"][0].pop("weights"),
        lambda d: d["layers"][0]["weights"].pop(),
        lambda d: d["layers"][0].update(activation="relu"),
        lambda d: d["layers"][0].update(a=-1.0),
        lambda d: d["layers"][0]["weights"].__setitem__(0, "spam"),
        lambda d: d["head"].update(rows=0),
        lambda d: d["head"].update(cols=7),  # breaks the chain to the last layer
        lambda d: d.update(meta=[1, 2]),
    ],
)
def test_load_rejects_malformed_documents(tmp_path, mutate):
    net = build_net(11)
    path = tmp_path / "net.json"
    save(net, path)
    doc = json.loads(path.read_text())
    mutate(doc)
    path.write_text(json.dumps(doc))
    with pytest.raises(FormatError):
        load(path)


def test_load_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        load(tmp_path / "absent.json")


def test_save_never_leaves_partial_file(tmp_path):
    net = build_net(12)
    bad_meta = dict(net.meta, oops=float("inf"))  # not serializable with allow_nan=False
    broken = Network(net.layers, net.head, bad_meta)
    path = tmp_path / "net.json"
    with pytest.raises(ValueError):
        save(broken, path)
    assert list(tmp_path.iterdir()) == []


def test_summary_lists_layers_and_costs():
    net = build_net(13)
    text = summary(net)
    lines = text.splitlines()
    assert len([l for l in lines if l.strip().startswith("layer ")]) == 2
    assert "3 -> 4" in text and "4 -> 2" in text and "head: 2 -> 1" in text
    assert repr(1.25) in text and repr(0.75) in text
    assert RECT_AMP in text and SIGMOID in text
