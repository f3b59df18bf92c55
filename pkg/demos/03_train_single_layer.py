"""Training one layer in isolation.

A layer never sees the rest of the network while it trains. Each cycle:
refit the activation parameters from the current pre-activations, solve
the optimal head on top of the layer's outputs, record train and test
cost, then take one fixed-norm gradient step on the layer weights with
the head held fixed. The layer you keep is the best test-cost snapshot,
not the last iterate.
"""

from layerwise import TrainConfig, make_synthetic, split_dataset, train_layer


def main():
    ds = make_synthetic(4, 1200, seed=5, kind="nonlinear")
    split = split_dataset(ds, 0.25, seed=0)

    cfg = TrainConfig(max_cycles=120, patience=25, seed=0)
    out = train_layer(
        split.train.inputs, split.train.targets,
        split.test.inputs, split.test.targets,
        p=10, cfg=cfg,
    )

    print("cycle  train_cost  test_cost   delta      best?")
    for c in out.history[:10]:
        print(f"{c.cycle:5d}  {c.train_cost:10.4f}  {c.test_cost:9.4f}  {c.delta:.3e}  {'*' if c.is_best else ''}")
    print("  ...")
    for c in out.history[-3:]:
        print(f"{c.cycle:5d}  {c.train_cost:10.4f}  {c.test_cost:9.4f}  {c.delta:.3e}  {'*' if c.is_best else ''}")

    ran = len(out.history)
    best_at = max(c.cycle for c in out.history if c.is_best)
    print(f"\nran {ran} cycles (budget {cfg.max_cycles}, patience {cfg.patience})")
    print(f"best test cost {out.best_test_cost:.4f} reached at cycle {best_at}")
    print(f"kept weights are the cycle-{best_at} snapshot, shape {out.layer.weights.shape}")
    print(f"frozen activation: slope={out.layer.params.slope:.5f} "
          f"limit={out.layer.params.limit:.5f} center={out.layer.params.center:.5f}")
    print("\nraw per-cycle test cost wobbles; the best-so-far curve never goes up.")


if __name__ == "__main__":
    main()
