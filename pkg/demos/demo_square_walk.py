"""Drive a square system through the pairwise walk and watch sigma_min.

Every step orthogonalizes one random row against another, which can only
push the smallest singular value up.  While sigma_min is small its median
trajectory follows the compound-growth curve; once it approaches 1 the
saturating curve takes over.  The run also checks that the reference
solution is carried along untouched.
"""

import numpy as np

from kacwalk import (
    WalkConfig,
    gaussian_system,
    predict_linear,
    predict_logistic,
    run_walk,
)

N = 60
STEPS = 12000
SNAP_EVERY = 600
SEED = 7


def main():
    system = gaussian_system(N, N, seed=SEED)
    final, log, snaps = run_walk(
        system, WalkConfig(seed=SEED, steps=STEPS, snapshot_every=SNAP_EVERY)
    )

    ks = np.array([s.k for s in snaps])
    sig_min = np.array([s.sigmas[-1] for s in snaps])
    sigma0 = sig_min[0]
    lin = predict_linear(N, sigma0, ks)
    log_pred = predict_logistic(N, sigma0, ks)

    print(f"square walk: {N}x{N}, {STEPS} steps, seed {SEED}")
    print(f"sigma_min({0}) = {sigma0:.5f}")
    print(f"{'k':>7} {'sigma_min':>10} {'compound':>10} {'saturating':>10}")
    for k, s, a, b in zip(ks, sig_min, lin, log_pred):
        print(f"{k:>7d} {s:>10.5f} {min(a, 99.0):>10.5f} {b:>10.5f}")

    res = np.abs(final.A @ system.x_ref - final.b).max()
    frob = float((final.A ** 2).sum())
    print(f"\nresidual at reference solution: {res:.3e}")
    print(f"frobenius^2 deviation from {N}: {abs(frob - N):.3e}")
    print(f"degenerate skips: {int(log.skipped.sum())} of {len(log)}")


if __name__ == "__main__":
    main()
