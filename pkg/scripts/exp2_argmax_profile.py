"""Best leader rate of conceptual change at each iteration of experiment 2.

Shows where the early high-c advantage gives way to moderate c.

    python scripts/exp2_argmax_profile.py --runs 400 --iterations 40
"""

import argparse

import numpy as np

from evoc.experiments import C_GRID, exp2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    table = exp2(C_GRID, runs=args.runs, seed=args.seed, iterations=args.iterations)
    print("iteration  best_c  " + "  ".join(f"c={c:g}" for c in C_GRID))
    for t in range(1, args.iterations + 1):
        row = table.at("fitness", t)
        best = table.sweep_values[int(np.argmax(row))]
        print(f"{t:9d}  {best:6g}  " + "  ".join(f"{x:5.2f}" for x in row))


if __name__ == "__main__":
    main()
