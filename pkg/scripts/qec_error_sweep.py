#!/usr/bin/env python3
"""Sweep the per-pulse Pauli error probability and report logical error rates.

Usage: python scripts/qec_error_sweep.py [--cycles N] [--seed S]
"""
import argparse
import math

import numpy as np

from qdotsim.qec import LogicalQubit, decode5, encode5, qec_cycle
from qdotsim.qstate import QuantumState, state_fidelity


def run_point(p: float, cycles: int, seed: int, pulses: int = 500) -> float:
    rng = np.random.default_rng([seed, int(p * 1e9)])
    amp = np.array([1.0, np.exp(1j * np.pi / 4)], dtype=complex) / math.sqrt(2)
    base = np.zeros(32, dtype=complex)
    base[0], base[16] = amp[0], amp[1]
    reference = QuantumState(base.copy(), 5)
    failures = 0
    for _ in range(cycles):
        lq = LogicalQubit(0, (1, 2, 3, 4))
        state = encode5(QuantumState(base.copy(), 5), lq)
        n_err = int(rng.binomial(pulses, p))
        injected = [
            (("X", "Y", "Z")[int(rng.integers(3))], int(rng.integers(5)))
            for _ in range(n_err)
        ] or None
        state, _ = qec_cycle(state, lq, injected, rng)
        state = decode5(state, lq)
        if state_fidelity(state, reference) < 1 - 1e-6:
            failures += 1
    return failures / cycles


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--cycles", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    print(f"{'p_per_pulse':>12}  {'expected_errs':>13}  {'logical_rate':>12}")
    for p in (0.0, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3, 3e-3):
        rate = run_point(p, args.cycles, args.seed)
        print(f"{p:>12.1e}  {500 * p:>13.3f}  {rate:>12.3f}")


if __name__ == "__main__":
    main()
