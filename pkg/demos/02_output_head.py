"""The closed-form output head.

The last layer of every network here is linear, and for a linear layer the
best weights do not need to be learned: they are the least-squares solution
of V Z = T. This script solves a head, verifies the textbook optimality
conditions, and shows the rank-deficient fallback.
"""

import numpy as np

from layerwise import OutputHead, mean_sq_error, quadratic_cost, residual, solve_head


def main():
    rng = np.random.Generator(np.random.PCG64(1))
    z = rng.normal(size=(6, 300))          # 6 features, 300 samples
    truth = rng.normal(size=(2, 6))
    t = truth @ z + 0.05 * rng.normal(size=(2, 300))  # noisy linear targets

    head = solve_head(z, t)
    print("recovered weights vs the generator (noise 0.05):")
    print(np.round(head.weights - truth, 4))

    r = residual(head, z, t)
    print(f"\nresidual-feature correlation max |R Z'| = {np.abs(r @ z.T).max():.3e}")
    print("(zero up to rounding: the residual is orthogonal to every feature)")

    base = quadratic_cost(head, z, t)
    worse = min(
        quadratic_cost(OutputHead(head.weights + 0.01 * rng.normal(size=head.weights.shape)), z, t)
        for _ in range(200)
    )
    print(f"\ncost at the solution {base:.4f}; best of 200 perturbed heads {worse:.4f}")

    # duplicate features: the Gram matrix is singular, the solver falls back
    # to the pseudoinverse and still lands on a least-squares solution
    z_dup = np.vstack([z[:3], z[:3]])
    head_dup = solve_head(z_dup, t)
    r_dup = residual(head_dup, z_dup, t)
    print(f"\nrank-deficient features: max |R Z'| = {np.abs(r_dup @ z_dup.T).max():.3e}")
    print(f"test-style error either way: {mean_sq_error(head_dup, z_dup, t):.4f} "
          f"vs {mean_sq_error(solve_head(z[:3], t), z[:3], t):.4f} with the unique half")


if __name__ == "__main__":
    main()
