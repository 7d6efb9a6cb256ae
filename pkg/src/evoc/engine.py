"""The simulation loop.

Every iteration each agent either invents (with probability ``i``) or tries
to imitate one of the actions visible to it, and adopts the result only if it
is strictly fitter than what it currently implements. Updates are
synchronous: all agents observe the actions implemented at the start of the
iteration, and adoptions become visible at the next one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from evoc.fitness import DEFAULT_LANDSCAPE, Landscape
from evoc.metrics import IterationRecord, record
from evoc.model import (
    IMMOBILE,
    NEIGHBORHOODS,
    Action,
    AgentParams,
    AgentState,
    Role,
    World,
    imitation_sources,
)
from evoc.operators import OperatorState, invent, update_operators
from evoc.rng import agent_streams, world_stream

INVENTED = -1


@dataclass(frozen=True)
class RunConfig:
    width: int = 10
    height: int = 10
    iterations: int = 100
    follower_params: AgentParams = AgentParams()
    leader_params: AgentParams = AgentParams()
    broadcasting: bool = True
    seed: int = 0
    neighborhood: str = "moore"
    learning_rate: float = 0.1
    landscape: Landscape = field(default=DEFAULT_LANDSCAPE, compare=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("world dimensions must be at least 1x1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.neighborhood not in NEIGHBORHOODS:
            raise ValueError(f"unknown neighborhood {self.neighborhood!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class Trajectory:
    """Per-iteration society statistics of one run.

    ``records[k]`` describes the world after iteration ``k + 1``;
    ``initial`` is the world before the first iteration.
    ``agent_fitness`` has one row per state, initial state first.
    """

    records: list[IterationRecord]
    initial: IterationRecord
    agent_fitness: np.ndarray
    world: World
    leader_id: Optional[int] = None

    @property
    def mean_fitness(self) -> np.ndarray:
        return np.array([r.mean_fitness for r in self.records])

    @property
    def diversity(self) -> np.ndarray:
        return np.array([r.diversity for r in self.records], dtype=int)

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.records == other.records
            and self.initial == other.initial
            and self.leader_id == other.leader_id
            and np.array_equal(self.agent_fitness, other.agent_fitness)
            and [a.implemented for a in self.world.agents] == [a.implemented for a in other.world.agents]
        )


def _imitate_index(current_fitness: float, sources: Sequence[Action], rng: random.Random, table: dict) -> Optional[int]:
    # partial Fisher-Yates: visit sources in random order, stop at the first fitter one
    order = list(range(len(sources)))
    n = len(order)
    for k in range(n):
        j = k + int(rng.random() * (n - k))
        order[k], order[j] = order[j], order[k]
        if table[sources[order[k]]] > current_fitness:
            return order[k]
    return None


def try_imitate(
    agent: AgentState,
    sources: Sequence[Action],
    rng: random.Random,
    landscape: Landscape = DEFAULT_LANDSCAPE,
) -> Optional[Action]:
    """First action among ``sources`` (random visiting order) fitter than the agent's."""
    k = _imitate_index(agent.implemented_fitness, sources, rng, landscape.table)
    return None if k is None else sources[k]


def try_invent(agent: AgentState, rng: random.Random, landscape: Landscape = DEFAULT_LANDSCAPE) -> Optional[Action]:
    candidate = invent(agent.implemented, agent.params.c, agent.operator_state, rng)
    if landscape.table[candidate] > agent.implemented_fitness:
        return candidate
    return None


def learn(agent: AgentState, action: Action, landscape: Landscape) -> None:
    agent.implemented = action
    agent.implemented_fitness = landscape.table[action]
    agent.operator_state = update_operators(agent.operator_state, action)


def step(world: World, order: Optional[Sequence[int]] = None, log: Optional[list] = None) -> World:
    """Advance ``world`` by one synchronous iteration, in place.

    ``order`` overrides the agent processing order (ascending id by default).
    If ``log`` is given, one ``(iteration, agent_id, action, source)`` tuple is
    appended per adoption; ``source`` is the imitated agent or ``INVENTED``.
    """
    landscape = world.landscape
    table = landscape.table
    fmax = landscape.max
    agents = world.agents
    snapshot = [a.implemented for a in agents]
    adoptions = []
    for k in order if order is not None else range(len(agents)):
        agent = agents[k]
        if agent.implemented_fitness >= fmax:
            continue  # nothing can be strictly fitter
        rng = agent.rng
        if rng.random() < agent.params.i:
            new = try_invent(agent, rng, landscape)
            source = INVENTED
        else:
            ids = imitation_sources(world, k)
            j = _imitate_index(agent.implemented_fitness, [snapshot[s] for s in ids], rng, table)
            new, source = (None, None) if j is None else (snapshot[ids[j]], ids[j])
        if new is not None:
            adoptions.append((agent, new, source))
    world.iteration += 1
    for agent, new, source in adoptions:
        learn(agent, new, landscape)
        if log is not None:
            log.append((world.iteration, agent.id, new, source))
    return world


def make_world(config: RunConfig) -> World:
    """Initial world: everyone immobile, leader drawn from the run stream."""
    n = config.width * config.height
    wrng = world_stream(config.seed)
    streams = agent_streams(config.seed, n)
    leader = wrng.randrange(n) if config.broadcasting else None
    f0 = config.landscape.table[IMMOBILE]
    agents = []
    for k in range(n):
        is_leader = k == leader
        params = config.leader_params if is_leader else config.follower_params
        agents.append(
            AgentState(
                id=k,
                position=divmod(k, config.width),
                implemented=IMMOBILE,
                implemented_fitness=f0,
                params=params,
                operator_state=OperatorState(learning_rate=config.learning_rate, enabled=params.operators_enabled),
                rng=streams[k],
                role=Role.LEADER if is_leader else Role.FOLLOWER,
            )
        )
    return World(
        width=config.width,
        height=config.height,
        agents=agents,
        landscape=config.landscape,
        leader_id=leader,
        broadcasting=config.broadcasting,
        neighborhood=config.neighborhood,
        rng=wrng,
    )


def run(config: RunConfig, log: Optional[list] = None, observer: Optional[Callable[[World], None]] = None) -> Trajectory:
    """Execute ``config.iterations`` steps from a fresh world.

    ``observer`` is called with the world before the first step and after each one.
    """
    world = make_world(config)
    if observer is not None:
        observer(world)
    initial = record(world)
    fitness = np.empty((config.iterations + 1, world.n_agents))
    fitness[0] = [a.implemented_fitness for a in world.agents]
    records = []
    for t in range(1, config.iterations + 1):
        step(world, log=log)
        records.append(record(world))
        if observer is not None:
            observer(world)
        fitness[t] = [a.implemented_fitness for a in world.agents]
    return Trajectory(records, initial, fitness, world, world.leader_id)
