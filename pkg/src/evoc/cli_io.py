"""Command-line entry point, CSV emission and charts."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as _dt
import io
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from evoc import __version__
from evoc.engine import RunConfig, run
from evoc.experiments import (
    C_GRID,
    I_GRID,
    METRICS,
    SWEEP_PARAMS,
    ExperimentSpec,
    SeriesTable,
    exp2_spec,
    leader_sweep_spec,
    sweep,
)
from evoc.fitness import DEFAULT_LANDSCAPE, enumerate_landscape
from evoc.model import PART_NAMES, AgentParams
from evoc.rng import RNG_ALGORITHM, default_seed

SERIES_HEADER = ["sweep_param", "sweep_value", "iteration", "metric", "mean", "std", "runs"]
EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- CSV

def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def series_rows(table: SeriesTable) -> list[list[str]]:
    rows = []
    for v, value in enumerate(table.sweep_values):
        for t in range(table.iterations):
            for metric in sorted(table.metrics):
                rows.append([
                    table.sweep_param,
                    _fmt(value),
                    str(t + 1),
                    metric,
                    _fmt(table.mean[metric][v, t]),
                    _fmt(table.std[metric][v, t]),
                    str(table.runs),
                ])
    rows.sort(key=lambda r: (float(r[1]), int(r[2]), r[3]))
    return rows


def write_series_csv(table: SeriesTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SERIES_HEADER)
        writer.writerows(series_rows(table))


def read_series_csv(path) -> SeriesTable:
    """Parse a CSV written by :func:`write_series_csv` back into a table."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SERIES_HEADER:
            raise ValueError(f"unexpected header {reader.fieldnames!r}")
        rows = list(reader)
    if not rows:
        raise ValueError("no data rows")
    param = rows[0]["sweep_param"]
    values = sorted({float(r["sweep_value"]) for r in rows})
    iterations = max(int(r["iteration"]) for r in rows)
    metrics = [m for m in METRICS if any(r["metric"] == m for r in rows)]
    mean = {m: np.zeros((len(values), iterations)) for m in metrics}
    std = {m: np.zeros((len(values), iterations)) for m in metrics}
    index = {v: k for k, v in enumerate(values)}
    for r in rows:
        v, t, m = index[float(r["sweep_value"])], int(r["iteration"]) - 1, r["metric"]
        mean[m][v, t] = float(r["mean"])
        std[m][v, t] = float(r["std"])
    return SeriesTable(param, values, iterations, int(rows[0]["runs"]), mean, std)


def write_landscape_csv(fh, normalize: bool = False) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    header = [*PART_NAMES, "fitness"] + (["fitness_normalized"] if normalize else [])
    writer.writerow(header)
    fmax = DEFAULT_LANDSCAPE.max
    for action, f in enumerate_landscape():
        row = [str(v) for v in action] + [_fmt(f)]
        if normalize:
            row.append(_fmt(f / fmax))
        writer.writerow(row)


# ---------------------------------------------------------------- charts

def chart_polylines(table: SeriesTable, metric: Optional[str] = None) -> dict[str, tuple[list[float], list[float]]]:
    """Vertex lists of the chart for ``table``: legend label -> (iterations, values)."""
    if not table.sweep_values or table.iterations < 1 or not table.metrics:
        raise UsageError("cannot chart an empty table")
    metric = metric or table.metrics[0]
    xs = list(range(1, table.iterations + 1))
    return {
        f"{table.sweep_param} = {value:g}": (xs, [float(y) for y in table.mean[metric][v]])
        for v, value in enumerate(table.sweep_values)
    }


def write_chart(table: SeriesTable, path, metric: Optional[str] = None, title: Optional[str] = None) -> None:
    """Render one polyline per sweep value as a static SVG."""
    lines = chart_polylines(table, metric)
    metric = metric or table.metrics[0]

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "evoc", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for label, (xs, ys) in lines.items():
            ax.plot(xs, ys, label=label, linewidth=1.2)
        ax.set_xlabel("iteration")
        ax.set_ylabel("mean fitness" if metric == "fitness" else "diversity (distinct actions)")
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


# ---------------------------------------------------------------- argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability out of range [0, 1]: {text}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return value


def seed_int(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def on_off(text: str) -> bool:
    if text.lower() in ("on", "true", "1", "yes"):
        return True
    if text.lower() in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {text!r}")


def probability_list(items) -> list[float]:
    if isinstance(items, str):
        items = [items]
    out = []
    for item in items:
        for part in str(item).split(","):
            if part.strip():
                out.append(probability(part.strip()))
    if not out:
        raise argparse.ArgumentTypeError("empty list of values")
    return out


def read_config_file(path) -> dict[str, str]:
    """Flat ``key=value`` file; ``#`` starts a comment, keys may use - or _."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _add_world_flags(p, include_creativity=True):
    p.add_argument("--width", type=positive_int, default=10)
    p.add_argument("--height", type=positive_int, default=10)
    p.add_argument("--neighborhood", choices=["moore", "vonneumann"], default="moore")
    p.add_argument("--operators", type=on_off, default=True, metavar="on|off")
    p.add_argument("--learning-rate", type=probability, default=0.1)
    if include_creativity:
        p.add_argument("--i-leader", type=probability, default=0.5)
        p.add_argument("--i-followers", type=probability, default=0.5)
        p.add_argument("--c-leader", type=probability, default=1 / 6)
        p.add_argument("--c-followers", type=probability, default=1 / 6)


def _add_batch_flags(p, iterations):
    p.add_argument("--runs", type=positive_int, default=100)
    p.add_argument("--iterations", type=positive_int, default=iterations)
    p.add_argument("--seed", type=seed_int, default=None, help="master seed (default: $EVOC_SEED or 0)")
    p.add_argument("--workers", type=positive_int, default=1, help="processes for parallel runs")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--no-chart", action="store_true")
    p.add_argument("--normalize", action="store_true", help="add fitness / F_max rows (metric fitness_normalized)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evoc", description="Agent-based cultural evolution with broadcasting leaders.")
    parser.add_argument("--version", action="version", version=f"evoc {__version__}")
    parser.add_argument("--config", help="key=value file of defaults (command-line flags win)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="a single run")
    _add_world_flags(p)
    p.add_argument("--iterations", type=positive_int, default=100)
    p.add_argument("--seed", type=seed_int, default=None)
    p.add_argument("--broadcast", type=on_off, default=True, metavar="on|off")
    p.add_argument("--out", default=None, help="output directory (default: trajectory CSV on stdout)")
    p.add_argument("--normalize", action="store_true")

    for name, helptext in (("exp1a", "fitness vs leader invention rate"), ("exp1b", "diversity vs leader invention rate")):
        p = sub.add_parser(name, help=helptext)
        _add_world_flags(p, include_creativity=False)
        p.add_argument("--i-followers", type=probability, default=0.0)
        p.add_argument("--sweep", nargs="+", default=list(I_GRID))
        _add_batch_flags(p, 100 if name == "exp1a" else 500)

    p = sub.add_parser("exp2", help="fitness vs leader rate of conceptual change")
    _add_world_flags(p, include_creativity=False)
    p.add_argument("--sweep", nargs="+", default=list(C_GRID))
    _add_batch_flags(p, 100)

    p = sub.add_parser("sweep", help="generic one-parameter sweep")
    _add_world_flags(p)
    p.add_argument("--broadcast", type=on_off, default=True, metavar="on|off")
    p.add_argument("--param", required=True, choices=[k.replace("_", "-") for k in SWEEP_PARAMS])
    p.add_argument("--values", nargs="+", required=True)
    p.add_argument("--metric", choices=["fitness", "diversity"], default="fitness")
    _add_batch_flags(p, 100)

    p = sub.add_parser("optima", help="dump the full fitness landscape")
    p.add_argument("--out", default=None, help="output directory (default: stdout)")
    p.add_argument("--normalize", action="store_true")
    return parser


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            file_values = read_config_file(known.config)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}")
        args = parser.parse_args(argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        valid = {a.dest for a in sub._actions}
        unknown = sorted(set(file_values) - valid)
        if unknown:
            raise UsageError(f"unknown config key(s) for {args.command}: {', '.join(unknown)}")
        defaults = {}
        for action in sub._actions:
            if action.dest in file_values:
                raw = file_values[action.dest]
                try:
                    if isinstance(action, argparse._StoreTrueAction):
                        defaults[action.dest] = on_off(raw)
                    else:
                        defaults[action.dest] = action.type(raw) if action.type else raw
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise UsageError(f"config key {action.dest}: {exc}")
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# ---------------------------------------------------------------- commands

def _prepare_out(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out}: {exc.strerror}")
    if not os.access(out, os.W_OK):
        raise UsageError(f"output directory {out} is not writable")
    return out


def _base_config(args, iterations, broadcasting=True) -> RunConfig:
    def params(i, c):
        return AgentParams(i=i, c=c, operators_enabled=args.operators)

    return RunConfig(
        width=args.width,
        height=args.height,
        iterations=iterations,
        follower_params=params(getattr(args, "i_followers", 0.5), getattr(args, "c_followers", 1 / 6)),
        leader_params=params(getattr(args, "i_leader", 0.5), getattr(args, "c_leader", 1 / 6)),
        broadcasting=broadcasting,
        neighborhood=args.neighborhood,
        learning_rate=args.learning_rate,
    )


def _config_dict(config: RunConfig) -> dict:
    d = dataclasses.asdict(config)
    d["landscape"] = config.landscape.name
    return d


def _metadata(command, config: RunConfig, seed, extra=None) -> dict:
    meta = {
        "tool": "evoc",
        "version": __version__,
        "command": command,
        "config": _config_dict(config),
        "master_seed": seed,
        "rng": RNG_ALGORITHM,
        "landscape_max": config.landscape.max,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    meta.update(extra or {})
    return meta


def _write_experiment(name, spec: ExperimentSpec, table: SeriesTable, args) -> None:
    out = _prepare_out(args.out)
    write_series_csv(table, out / f"{name}.csv")
    if args.normalize and "fitness" in table.mean:
        fmax = spec.base.landscape.max
        norm = dataclasses.replace(
            table,
            mean={"fitness": table.mean["fitness"] / fmax},
            std={"fitness": table.std["fitness"] / fmax},
        )
        write_series_csv(norm, out / f"{name}_normalized.csv")
    if not args.no_chart:
        write_chart(table, out / f"{name}.svg", title=name)
    extra = {
        "swept_parameter": spec.swept_parameter,
        "sweep_values": list(spec.sweep_values),
        "runs_per_point": spec.runs_per_point,
    }
    with open(out / f"{name}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(_metadata(name, spec.base, spec.master_seed, extra), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _seed(args) -> int:
    return args.seed if args.seed is not None else default_seed()


def cmd_run(args) -> int:
    seed = _seed(args)
    config = dataclasses.replace(_base_config(args, args.iterations, args.broadcast), seed=seed)
    dumps = []

    def observe(world):
        for a in world.agents:
            dumps.append([world.iteration, a.id, a.role.value, *a.implemented, _fmt(a.implemented_fitness)])

    traj = run(config, observer=observe)
    fmax = config.landscape.max
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "mean_fitness", "diversity"] + (["mean_fitness_normalized"] if args.normalize else []))
    for rec in [traj.initial, *traj.records]:
        row = [rec.iteration, _fmt(rec.mean_fitness), rec.diversity]
        if args.normalize:
            row.append(_fmt(rec.mean_fitness / fmax))
        writer.writerow(row)
    if args.out is None:
        sys.stdout.write(buf.getvalue())
        return EXIT_OK
    out = _prepare_out(args.out)
    (out / "trajectory.csv").write_text(buf.getvalue(), encoding="utf-8")
    with open(out / "agents.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "agent_id", "role", *PART_NAMES, "fitness"])
        writer.writerows(dumps)
    with open(out / "run.meta.json", "w", encoding="utf-8") as fh:
        json.dump(_metadata("run", config, seed, {"leader_id": traj.leader_id}), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def cmd_leader_sweep(args) -> int:
    _prepare_out(args.out)
    base = _base_config(args, args.iterations)
    values = probability_list(args.sweep)
    spec = leader_sweep_spec(args.i_followers, values, args.runs, _seed(args), args.iterations, base)
    metric = "fitness" if args.command == "exp1a" else "diversity"
    table = sweep(spec, (metric,), workers=args.workers)
    _write_experiment(args.command, spec, table, args)
    return EXIT_OK


def cmd_exp2(args) -> int:
    _prepare_out(args.out)
    base = _base_config(args, args.iterations)
    spec = exp2_spec(probability_list(args.sweep), args.runs, _seed(args), args.iterations, base)
    table = sweep(spec, ("fitness",), workers=args.workers)
    _write_experiment("exp2", spec, table, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    _prepare_out(args.out)
    base = _base_config(args, args.iterations, args.broadcast)
    param = args.param.replace("-", "_")
    spec = ExperimentSpec(base, param, probability_list(args.values), args.runs, _seed(args))
    table = sweep(spec, (args.metric,), workers=args.workers)
    _write_experiment(f"sweep_{param}_{args.metric}", spec, table, args)
    return EXIT_OK


def cmd_optima(args) -> int:
    if args.out is None:
        write_landscape_csv(sys.stdout, args.normalize)
        return EXIT_OK
    out = _prepare_out(args.out)
    with open(out / "optima.csv", "w", encoding="utf-8", newline="") as fh:
        write_landscape_csv(fh, args.normalize)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "exp1a": cmd_leader_sweep,
    "exp1b": cmd_leader_sweep,
    "exp2": cmd_exp2,
    "sweep": cmd_sweep,
    "optima": cmd_optima,
}


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"evoc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"evoc: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(cli())
