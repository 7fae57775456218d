"""Tour of the four long-run regimes on hand-built 3-agent models.

For each model the script prints the reproduction quadruple, the regime
call, and then checks the call against an actual simulation from a
mid-level infection start.
"""
import argparse

import numpy as np

from netsiri import make_model, extreme_numbers, classify_regime, simulate


def triangle(beta_scale, ratios):
    """Directed 3-cycle plus one chord; ratios set beta_hat per row."""
    a = np.array([
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
    ])
    beta = beta_scale * a
    beta_hat = np.array(ratios)[:, None] * beta
    return make_model(a, beta, beta_hat, np.ones(3))


MODELS = [
    ("infection-free", triangle(0.55, [0.8, 0.9, 0.7])),
    ("endemic", triangle(1.35, [1.1, 0.9, 1.2])),
    ("epidemic", triangle(1.25, [0.25, 0.3, 0.2])),
    ("bistable", triangle(0.6, [3.5, 3.5, 0.3])),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t-end", type=float, default=2000.0)
    parser.parse_args()

    print("%-15s %-38s %-14s %s" % ("label", "(r0, r1, rmin, rmax)",
                                    "regime", "simulated outcome"))
    for label, model in MODELS:
        rs = extreme_numbers(model)
        regime = classify_regime(rs)
        p_i0 = np.full(3, 0.25)
        _, outcome = simulate(model, 1.0 - p_i0, p_i0, t_end=2000.0,
                              dt=0.05)
        quad = "(%.3f, %.3f, %.3f, %.3f)" % (rs.r0, rs.r1, rs.rmin, rs.rmax)
        print("%-15s %-38s %-14s %s" % (label, quad, regime.value,
                                        outcome.kind.value))

    print()
    print("bistable case, sweep of initial infection levels:")
    model = MODELS[3][1]
    for c in (0.01, 0.1, 0.3, 0.6, 0.9):
        p_i0 = np.full(3, c)
        _, outcome = simulate(model, 1.0 - p_i0, p_i0, t_end=3000.0, dt=0.05)
        print("  p_i(0) = %.2f -> %s" % (c, outcome.kind.value))


if __name__ == "__main__":
    main()
