"""Society-level statistics over a world snapshot."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from evoc.model import World


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    mean_fitness: float
    diversity: int


def mean_fitness(world: World) -> float:
    """Mean implemented fitness over all agents, leader included."""
    return sum(a.implemented_fitness for a in world.agents) / len(world.agents)


def diversity(world: World) -> int:
    """Number of distinct actions currently implemented."""
    return len({a.implemented for a in world.agents})


def record(world: World) -> IterationRecord:
    return IterationRecord(world.iteration, mean_fitness(world), diversity(world))


def is_monotone(series, axis: int = 0) -> bool:
    """True if ``series`` never decreases along ``axis``."""
    arr = np.asarray(series, dtype=float)
    if arr.shape[axis] < 2:
        return True
    return bool(np.all(np.diff(arr, axis=axis) >= 0))
