"""Growing a whole network with no architecture choices from the user.

Everything in the other demos composes here: probe, fit the error model,
pick a width, train a layer against its virtual head, freeze it, feed its
outputs forward, re-measure beta, and repeat until an extra layer stops
paying for itself on the test split. The result round-trips through a
JSON model file bit for bit.
"""

import os
import tempfile

import numpy as np

from layerwise import (
    GrowthConfig,
    TrainConfig,
    evaluate,
    forward,
    grow_network,
    load,
    make_synthetic,
    mean_sq_error,
    save,
    solve_head,
    split_dataset,
    summary,
)


def main():
    ds = make_synthetic(4, 2000, seed=19, kind="nonlinear")
    split = split_dataset(ds, 0.25, seed=42)

    result = grow_network(split, GrowthConfig(train=TrainConfig(seed=42)))
    net = result.network

    print("growth log:")
    for rep in result.layer_reports:
        verdict = "accepted" if rep.accepted else "rejected (stop)"
        print(f"  layer {rep.index}: width {rep.width:2d}, "
              f"{len(rep.history):3d} cycles, test cost {rep.test_cost:.4f}  -> {verdict}")

    print()
    print(summary(net))

    _, net_mse = evaluate(net, split.test.inputs, split.test.targets)
    head = solve_head(split.train.inputs, split.train.targets)
    base_mse = mean_sq_error(head, split.test.inputs, split.test.targets)
    print(f"\nheld-out mse: network {net_mse:.5f} vs plain linear fit {base_mse:.5f} "
          f"({net_mse / base_mse:.1%} of baseline)")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "net.json")
        save(net, path)
        reloaded = load(path)
        x = split.test.inputs[:, :50]
        same = np.array_equal(forward(net, x), forward(reloaded, x))
        print(f"saved {os.path.getsize(path)} bytes; reload reproduces outputs exactly: {same}")


if __name__ == "__main__":
    main()
