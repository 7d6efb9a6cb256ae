"""Actions, agents and the toroidal grid world."""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from evoc.operators import OperatorState

LEFT_ARM, RIGHT_ARM, LEFT_LEG, RIGHT_LEG, HEAD, HIPS = range(6)
PART_NAMES = ("left_arm", "right_arm", "left_leg", "right_leg", "head", "hips")
N_PARTS = 6
VALUES = (-1, 0, 1)

# An action is a 6-tuple of body-part positions in {-1, 0, +1}.
Action = tuple
IMMOBILE: Action = (0, 0, 0, 0, 0, 0)

MOORE_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
VON_NEUMANN_OFFSETS = ((-1, 0), (0, -1), (0, 1), (1, 0))
NEIGHBORHOODS = {"moore": MOORE_OFFSETS, "vonneumann": VON_NEUMANN_OFFSETS}


def all_actions() -> list[Action]:
    """All 729 actions in lexicographic order of part values."""
    return list(itertools.product(VALUES, repeat=N_PARTS))


def validate_action(action) -> Action:
    action = tuple(int(v) for v in action)
    if len(action) != N_PARTS or any(v not in (-1, 0, 1) for v in action):
        raise ValueError(f"not a valid action: {action!r}")
    return action


class Role(enum.Enum):
    LEADER = "leader"
    FOLLOWER = "follower"


@dataclass(frozen=True)
class AgentParams:
    """Creativity settings of one agent.

    ``i`` is the per-iteration probability of inventing rather than imitating,
    ``c`` the per-part probability of change during an invention.
    """

    i: float = 0.5
    c: float = 1 / 6
    operators_enabled: bool = True

    def __post_init__(self):
        for name in ("i", "c"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass
class AgentState:
    id: int
    position: tuple[int, int]
    implemented: Action
    implemented_fitness: float
    params: AgentParams
    operator_state: "OperatorState"
    rng: random.Random
    role: Role = Role.FOLLOWER


@dataclass
class World:
    width: int
    height: int
    agents: list[AgentState]
    landscape: object
    leader_id: Optional[int] = None
    broadcasting: bool = False
    neighborhood: str = "moore"
    iteration: int = 0
    rng: random.Random = field(default_factory=random.Random)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("world dimensions must be at least 1x1")
        if len(self.agents) != self.width * self.height:
            raise ValueError("world needs exactly one agent per cell")
        if self.neighborhood not in NEIGHBORHOODS:
            raise ValueError(f"unknown neighborhood {self.neighborhood!r}")
        self._neighbors: dict[int, list[int]] = {}
        self._sources: dict[int, list[int]] = {}

    @property
    def n_agents(self) -> int:
        return self.width * self.height

    def index(self, row: int, col: int) -> int:
        return (row % self.height) * self.width + (col % self.width)

    def position(self, agent_id: int) -> tuple[int, int]:
        return divmod(agent_id, self.width)

    def check_id(self, agent_id: int) -> None:
        if not isinstance(agent_id, int) or not 0 <= agent_id < self.n_agents:
            raise IndexError(f"invalid agent id {agent_id!r} for {self.n_agents} agents")


def neighbors(world: World, agent_id: int) -> list[int]:
    """Indices of the grid neighbours of ``agent_id`` under toroidal wrap.

    Offsets are visited in row-major order. On grids too small for the
    neighbourhood the wrapped cells collapse, so duplicates and the agent
    itself are dropped.
    """
    world.check_id(agent_id)
    cached = world._neighbors.get(agent_id)
    if cached is not None:
        return list(cached)
    row, col = world.position(agent_id)
    out: list[int] = []
    for dr, dc in NEIGHBORHOODS[world.neighborhood]:
        j = world.index(row + dr, col + dc)
        if j != agent_id and j not in out:
            out.append(j)
    world._neighbors[agent_id] = out
    return list(out)


def imitation_sources(world: World, agent_id: int) -> list[int]:
    """Agents whose implemented action ``agent_id`` may observe.

    Followers see their neighbours plus the broadcasting leader; the leader
    (and everyone, when broadcasting is off) sees only neighbours.
    """
    cached = world._sources.get(agent_id)
    if cached is not None:
        return list(cached)
    out = neighbors(world, agent_id)
    leader = world.leader_id
    if world.broadcasting and leader is not None and agent_id != leader and leader not in out:
        out.append(leader)
    world._sources[agent_id] = out
    return list(out)
