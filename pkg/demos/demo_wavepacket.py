"""Branching wave packets on a 1-D grid: how spatial separation turns the
approximate support conditions into near-exact typicality statements.

Run with:  python3 demos/demo_wavepacket.py
"""
import math

from qtypicality import (
    free_evolve,
    gaussian_packet,
    packet_support,
    separation_sweep,
    superposition,
    support_condition_check,
)
from qtypicality.wavepacket import position_mean, position_var, spread_sigma


def main():
    print("=== Free Gaussian sanity: drift and spreading " + "=" * 16)
    packet = gaussian_packet(center=0.0, width_sigma=1.0, momentum=2.0)
    for t in (0.0, 1.5, 3.0):
        state = free_evolve(packet, t)
        print(f"  t={t:3.1f}: <x> = {position_mean(state):7.4f}"
              f" (expect {2.0 * t:4.1f}),"
              f"  sigma = {math.sqrt(position_var(state)):.4f}"
              f" (analytic {spread_sigma(1.0, t):.4f})")

    print("\n=== A branch follows its own support " + "=" * 25)
    left = gaussian_packet(-5.0, 1.0, -2.0)
    right = gaussian_packet(5.0, 1.0, 2.0)
    both = superposition(left, right)
    later = free_evolve(both, 0.5)
    report = support_condition_check(
        both, packet_support(left),
        later, packet_support(free_evolve(left, 0.5)),
    )
    lo, hi = packet_support(left)
    print(f"  left-branch support at t1: [{lo:.2f}, {hi:.2f}]")
    print(f"  M between matched supports = {report.m_big:.3e}"
          f"  -> {report.verdict.value}")

    print("\n=== Separation sweep: typicality onset " + "=" * 23)
    print("  separation (sigma)    M between branch supports")
    for s, m in separation_sweep():
        marker = "  <- below 0.01" if m < 0.01 else ""
        print(f"  {s:10.1f}          {m:.6e}{marker}")
    print("  Once the branches sit >= 8 sigma apart, the overlap terms are")
    print("  negligible and each branch can be treated as its own world-line.")


if __name__ == "__main__":
    main()
