#!/usr/bin/env python3
"""How the YES/NO gap behaves as instances grow or densify.

Two sweeps over hidden-partition instances:
  * fixed density (alpha and T constant), growing n: the NO-case max-cut
    deficit shrinks like 1/m because the expected number of odd cycles stays
    constant, so value thresholds separate *worse* at larger n;
  * fixed n, growing T: denser NO graphs push both the max-cut ratio and the
    relaxation value per edge down, the direction the asymptotic argument
    needs.
"""

import argparse

from qmcstream.dihp import separation_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=120)
    args = ap.parse_args()

    print("=== fixed alpha = 1/8, T = 8; growing n ===")
    print(f"{'n':>4} {'m_mean':>8} {'NO mc/m':>10} {'1 - NO mc/m':>12}")
    for n in (16, 32, 64):
        rep = separation_experiment(
            n, n // 8, 8, args.trials, seed=args.seed, compute_maxcut=True
        )
        m_mean = sum(rep.m_values["no"]) / len(rep.m_values["no"])
        ratio = rep.no_stats.maxcut_ratio_mean
        print(f"{n:>4} {m_mean:>8.1f} {ratio:>10.5f} {1 - ratio:>12.5f}")

    print()
    print("=== fixed n = 16, alpha_n = 4; growing T (denser NO graphs) ===")
    print(f"{'T':>4} {'m_mean':>8} {'NO mc/m':>10} {'NO sdp/m':>10}")
    for t in (4, 8, 16, 32):
        rep = separation_experiment(
            16, 4, t, args.trials, seed=args.seed, compute_maxcut=True, compute_sdp=True
        )
        m_mean = sum(rep.m_values["no"]) / len(rep.m_values["no"])
        print(
            f"{t:>4} {m_mean:>8.1f} {rep.no_stats.maxcut_ratio_mean:>10.5f} "
            f"{rep.no_stats.sdp_over_m_mean:>10.5f}"
        )


if __name__ == "__main__":
    main()
