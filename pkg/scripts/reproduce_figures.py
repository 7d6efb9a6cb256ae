"""Run the three leadership experiments at full scale and write CSV + SVG per figure.

    python scripts/reproduce_figures.py --out results --seed 0
"""

import argparse
import time
from pathlib import Path

from evoc.cli_io import write_chart, write_series_csv
from evoc.experiments import exp1a, exp1b, exp2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    jobs = {
        "fig3_exp1a_followers_i0": lambda: exp1a(0.0, runs=args.runs, seed=args.seed, workers=args.workers),
        "fig4_exp1a_followers_i005": lambda: exp1a(0.05, runs=args.runs, seed=args.seed, workers=args.workers),
        "fig5_exp1b_followers_i0": lambda: exp1b(0.0, runs=args.runs, seed=args.seed, workers=args.workers),
        "fig6_exp2": lambda: exp2(runs=args.runs, seed=args.seed, workers=args.workers),
    }
    for name, job in jobs.items():
        t0 = time.perf_counter()
        table = job()
        write_series_csv(table, out / f"{name}.csv")
        write_chart(table, out / f"{name}.svg", title=name)
        metric = table.metrics[0]
        finals = ", ".join(f"{v:g}: {m:.3f}" for v, m in zip(table.sweep_values, table.final(metric)))
        print(f"{name}  ({time.perf_counter() - t0:.1f} s)  final {metric} -> {finals}")


if __name__ == "__main__":
    main()
