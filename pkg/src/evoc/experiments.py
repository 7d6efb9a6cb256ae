"""Parameter sweeps over leader/follower creativity, aggregated over seeded runs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from evoc.engine import RunConfig, Trajectory, run
from evoc.metrics import is_monotone
from evoc.model import AgentParams
from evoc.rng import child_seed

# swept parameter -> (RunConfig field, AgentParams field)
SWEEP_PARAMS = {
    "i_leader": ("leader_params", "i"),
    "i_followers": ("follower_params", "i"),
    "c_leader": ("leader_params", "c"),
    "c_followers": ("follower_params", "c"),
}
METRICS = ("fitness", "diversity")

I_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
C_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def configure(base: RunConfig, param: str, value: float) -> RunConfig:
    """``base`` with one creativity parameter set to ``value``."""
    if param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}; choose from {sorted(SWEEP_PARAMS)}")
    who, attr = SWEEP_PARAMS[param]
    params = replace(getattr(base, who), **{attr: float(value)})
    return replace(base, **{who: params})


def _run_seeded(args) -> Trajectory:
    config, seed = args
    return run(replace(config, seed=seed))


def run_batch(config: RunConfig, runs: int, master_seed: int, workers: Optional[int] = None) -> list[Trajectory]:
    """``runs`` independent runs of ``config``; run k is seeded with child_seed(master_seed, k).

    With ``workers`` > 1 the runs execute in a process pool; results come back
    in run-index order either way.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    jobs = [(config, child_seed(master_seed, k)) for k in range(runs)]
    if workers is None or workers <= 1:
        return [_run_seeded(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_seeded, jobs, chunksize=max(1, runs // (4 * workers))))


@dataclass
class ExperimentSpec:
    base: RunConfig
    swept_parameter: str
    sweep_values: Sequence[float]
    runs_per_point: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if self.swept_parameter not in SWEEP_PARAMS:
            raise ValueError(f"unknown sweep parameter {self.swept_parameter!r}")
        self.sweep_values = [float(v) for v in self.sweep_values]
        if not self.sweep_values:
            raise ValueError("sweep_values must not be empty")
        if any(not 0.0 <= v <= 1.0 for v in self.sweep_values):
            raise ValueError("sweep values are probabilities in [0, 1]")
        if self.runs_per_point < 1:
            raise ValueError("runs_per_point must be >= 1")


@dataclass
class SeriesTable:
    """Mean and sample std over runs, per sweep value and iteration.

    ``mean[metric]`` and ``std[metric]`` have shape (len(sweep_values), iterations);
    column t is iteration t + 1. ``samples`` keeps the per-run series
    (sweep value, run, iteration) and ``monotone`` flags runs in which every
    agent's fitness never decreased; neither is written to CSV.
    """

    sweep_param: str
    sweep_values: list[float]
    iterations: int
    runs: int
    mean: dict[str, np.ndarray]
    std: dict[str, np.ndarray]
    samples: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    monotone: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def metrics(self) -> list[str]:
        return [m for m in METRICS if m in self.mean]

    def final(self, metric: str) -> np.ndarray:
        return self.mean[metric][:, -1]

    def at(self, metric: str, iteration: int) -> np.ndarray:
        """Mean of ``metric`` at ``iteration`` (1-based) for every sweep value."""
        if not 1 <= iteration <= self.iterations:
            raise IndexError(f"iteration {iteration} outside 1..{self.iterations}")
        return self.mean[metric][:, iteration - 1]

    def select(self, metrics: Sequence[str]) -> "SeriesTable":
        return replace(
            self,
            mean={m: self.mean[m] for m in metrics},
            std={m: self.std[m] for m in metrics},
            samples={m: self.samples[m] for m in metrics if m in self.samples},
        )


def _sample_std(x: np.ndarray) -> np.ndarray:
    if x.shape[0] < 2:
        return np.zeros(x.shape[1:])
    return x.std(axis=0, ddof=1)


def sweep(spec: ExperimentSpec, metrics: Sequence[str] = METRICS, workers: Optional[int] = None) -> SeriesTable:
    """Run ``spec`` and aggregate each requested metric over runs."""
    for m in metrics:
        if m not in METRICS:
            raise ValueError(f"unknown metric {m!r}")
    T = spec.base.iterations
    samples = {m: np.empty((len(spec.sweep_values), spec.runs_per_point, T)) for m in metrics}
    monotone = np.empty((len(spec.sweep_values), spec.runs_per_point), dtype=bool)
    for v, value in enumerate(spec.sweep_values):
        config = configure(spec.base, spec.swept_parameter, value)
        for r, traj in enumerate(run_batch(config, spec.runs_per_point, spec.master_seed, workers)):
            if "fitness" in samples:
                samples["fitness"][v, r] = traj.mean_fitness
            if "diversity" in samples:
                samples["diversity"][v, r] = traj.diversity
            monotone[v, r] = is_monotone(traj.agent_fitness) and is_monotone(
                np.concatenate([[traj.initial.mean_fitness], traj.mean_fitness])
            )
    return SeriesTable(
        sweep_param=spec.swept_parameter,
        sweep_values=list(spec.sweep_values),
        iterations=T,
        runs=spec.runs_per_point,
        mean={m: s.mean(axis=1) for m, s in samples.items()},
        std={m: _sample_std(np.moveaxis(s, 1, 0)) for m, s in samples.items()},
        samples=samples,
        monotone=monotone,
    )


def _creative(i: float = 0.0, c: float = 1 / 6, operators: bool = True) -> AgentParams:
    return AgentParams(i=i, c=c, operators_enabled=operators)


def leader_sweep_spec(
    i_followers: float = 0.0,
    sweep_values: Sequence[float] = I_GRID,
    runs: int = 100,
    seed: int = 0,
    iterations: int = 100,
    base: Optional[RunConfig] = None,
) -> ExperimentSpec:
    """Sweep of the leader's invention rate; everyone invents with c = 1/6."""
    base = base or RunConfig()
    base = replace(
        base,
        iterations=iterations,
        broadcasting=True,
        leader_params=replace(base.leader_params, c=1 / 6),
        follower_params=replace(base.follower_params, i=i_followers, c=1 / 6),
    )
    return ExperimentSpec(base, "i_leader", sweep_values, runs, seed)


def exp1a(i_followers=0.0, sweep_values=I_GRID, runs=100, seed=0, iterations=100, workers=None, base=None) -> SeriesTable:
    """Mean fitness as the leader's invention-to-imitation ratio varies."""
    spec = leader_sweep_spec(i_followers, sweep_values, runs, seed, iterations, base)
    return sweep(spec, ("fitness",), workers)


def exp1b(i_followers=0.0, sweep_values=I_GRID, runs=100, seed=0, iterations=500, workers=None, base=None) -> SeriesTable:
    """Diversity of actions as the leader's invention-to-imitation ratio varies."""
    spec = leader_sweep_spec(i_followers, sweep_values, runs, seed, iterations, base)
    return sweep(spec, ("diversity",), workers)


def exp2_spec(sweep_values=C_GRID, runs=100, seed=0, iterations=100, base: Optional[RunConfig] = None) -> ExperimentSpec:
    base = base or RunConfig()
    base = replace(
        base,
        iterations=iterations,
        broadcasting=True,
        leader_params=replace(base.leader_params, i=1.0),
        follower_params=replace(base.follower_params, i=0.0, c=0.0),
    )
    return ExperimentSpec(base, "c_leader", sweep_values, runs, seed)


def exp2(sweep_values=C_GRID, runs=100, seed=0, iterations=100, workers=None, base=None) -> SeriesTable:
    """Mean fitness as the leader's rate of conceptual change varies; followers only imitate."""
    return sweep(exp2_spec(sweep_values, runs, seed, iterations, base), ("fitness",), workers)
