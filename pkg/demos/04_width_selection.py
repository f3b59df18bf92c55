"""Choosing a layer width from data instead of guessing it.

Test error as a function of the number of adjustable weights k is modeled
with three constants:

    sigma2(k) = alpha * k**-lam  +  beta * k / N

The first term is what the architecture cannot express yet (falls as k
grows); the second is estimation noise from fitting k weights on N
samples (grows with k). Four tiny probe layers fix alpha and lam by
log-log regression, one moderate probe fixes beta, and the minimizer of
the model hands us the width.
"""

import numpy as np

from layerwise import (
    GrowthConfig,
    TrainConfig,
    estimate_model,
    make_synthetic,
    optimal_k,
    split_dataset,
)


def main():
    ds = make_synthetic(4, 1600, seed=3, kind="nonlinear")
    split = split_dataset(ds, 0.25, seed=0)
    gcfg = GrowthConfig(train=TrainConfig(seed=0))

    est = estimate_model(split, gcfg)
    print("probe measurements (trained mode, k = (n+m) p):")
    print("    p     k    sigma2")
    for pr in (*est.probes, est.beta_probe):
        print(f"  {pr.p:3d}  {pr.k:4d}    {pr.sigma2:.5f}")

    m = est.model
    print(f"\nfitted model: sigma2(k) = {m.alpha:.4f} * k^-{m.lam:.4f} + {m.beta:.4f} * k/{m.n_samples}")
    print(f"stationary point k_real = {est.k_real:.2f}, integer optimum k_o = {est.k_o}")
    print(f"width for a trained layer: p = round(k_o / (n+m)) = {est.width}")

    ks = np.array([4, 8, 16, 32, 64, 128, 256])
    print("\nmodeled error across widths (watch the bowl shape):")
    for k in ks:
        bar = "#" * int(60 * m.sigma2(int(k)) / m.sigma2(4))
        print(f"  k={k:4d}  {m.sigma2(int(k)):.5f}  {bar}")

    # the two terms trade off; the optimum balances them
    k_real, _ = optimal_k(m.alpha, m.lam, m.beta, m.n_samples)
    approx = m.alpha * k_real**-m.lam
    estim = m.beta * k_real / m.n_samples
    print(f"\nat the optimum: approximation term {approx:.5f}, estimation term {estim:.5f}")
    print(f"the calculus says lam * approximation = estimation there: "
          f"{m.lam * approx:.5f} = {estim:.5f}")


if __name__ == "__main__":
    main()
