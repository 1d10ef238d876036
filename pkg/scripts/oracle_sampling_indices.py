#!/usr/bin/env python3
"""Independent oracle for the uniform-sampling consistency check.

Derives the target values that the sampling acceptance test compares
against, without importing the package. Two routes that must agree:

analytic
    For U[0, 1] with mean m = 1/2, the mean absolute difference of two
    independent copies is E|X - X'| = 1/3, so the Gini value is
    (1/3) / (2m) = 1/3. The mean absolute deviation is E|X - m| = 1/4,
    so the Hoover value is (1/4) / (2m) = 1/4.

monte carlo
    10^6 independent pairs, plain averages. Agreement with the analytic
    values to ~1e-3 (pair noise at this budget) confirms both formulas
    before they are frozen into the test suite.

Run: python scripts/oracle_sampling_indices.py
"""

import numpy as np

PAIRS = 1_000_000
SEED = 20260817


def main() -> None:
    rng = np.random.default_rng(SEED)
    x = rng.random(PAIRS)
    y = rng.random(PAIRS)

    mean = 0.5
    mc_gmd = np.abs(x - y).mean()
    mc_mad = np.abs(x - mean).mean()

    gini_mc = mc_gmd / (2.0 * mean)
    hoover_mc = mc_mad / (2.0 * mean)

    print(f"pairs                = {PAIRS}")
    print(f"E|X - X'|  analytic  = {1.0 / 3.0:.10f}")
    print(f"E|X - X'|  MC        = {mc_gmd:.10f}   (diff {abs(mc_gmd - 1/3):.2e})")
    print(f"E|X - m|   analytic  = {0.25:.10f}")
    print(f"E|X - m|   MC        = {mc_mad:.10f}   (diff {abs(mc_mad - 0.25):.2e})")
    print(f"Gini       analytic  = {1.0 / 3.0:.10f}   MC = {gini_mc:.10f}")
    print(f"Hoover     analytic  = {0.25:.10f}   MC = {hoover_mc:.10f}")

    assert abs(mc_gmd - 1.0 / 3.0) < 2e-3
    assert abs(mc_mad - 0.25) < 2e-3
    print("oracle ok: frozen test targets are G = 1/3, H = 1/4")


if __name__ == "__main__":
    main()
