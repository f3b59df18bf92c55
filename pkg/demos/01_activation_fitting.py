"""How activation parameters are read off the data.

A layer's nonlinearity has three numbers: a center (mu), a small-signal
slope (a), and a saturation limit (b). None of them are trained by
gradient descent; all three are computed directly from the current
pre-activation matrix each cycle. This script fits them on a synthetic
pre-activation cloud and shows what each one does.
"""

import numpy as np

from layerwise import RECT_AMP, SIGMOID, apply, fit_params


def main():
    rng = np.random.Generator(np.random.PCG64(0))
    # pretend these came out of W @ X for some layer: skewed, off-center
    y = rng.normal(loc=0.8, scale=2.5, size=(6, 400))

    params = fit_params(y, RECT_AMP)
    print("fitted on a 6x400 pre-activation matrix:")
    print(f"  center (mean of all entries)      = {params.center:.6f}")
    print(f"  slope  (inverse root of total SS) = {params.slope:.6f}")
    print(f"  limit  (70th pct of |y - center|) = {params.limit:.6f}")

    dev = np.abs(y - params.center)
    frac = np.count_nonzero(dev > params.limit) / dev.size
    print(f"\nfraction of entries outside the linear band: {frac:.3f}")
    print("(the limit is the tightest threshold keeping this at or under 0.30)")

    z = apply(params, y)
    print(f"\nafter the clamped-linear unit:")
    print(f"  output bound (slope*limit) = {params.slope * params.limit:.6f}")
    print(f"  observed max |z|           = {np.abs(z).max():.6f}")
    saturated = np.count_nonzero(np.abs(z) == params.slope * params.limit) / z.size
    print(f"  entries pinned at the rail = {saturated:.3f}")

    # same data, smooth unit: same slope near the center, same kind of bound
    sig = fit_params(y, SIGMOID)
    zs = apply(sig, y)
    print(f"\nsigmoid variant: bound {sig.limit:.4f}, observed max |z| {np.abs(zs).max():.4f}")
    u = np.array([[1e-6]]) + sig.center
    print(f"  slope at the center: {apply(sig, u)[0, 0] / 1e-6:.6f} (should match {sig.slope:.6f})")


if __name__ == "__main__":
    main()
