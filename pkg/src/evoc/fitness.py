"""Epistatic fitness landscape over the 729 actions.

The default landscape scores the arm pair and the leg pair jointly, so the
value of moving one limb depends on what its partner does. A moving head
and still hips add a constant bonus each. Eight actions share the maximum
of 14: both pairs moving in the same direction, head moving, hips still.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from evoc.model import (
    HEAD,
    HIPS,
    LEFT_ARM,
    LEFT_LEG,
    RIGHT_ARM,
    RIGHT_LEG,
    Action,
    all_actions,
)

LIMB_PAIRS = ((LEFT_ARM, RIGHT_ARM), (LEFT_LEG, RIGHT_LEG))
# part -> index of its symmetric partner; head and hips have none
PARTNER = {LEFT_ARM: RIGHT_ARM, RIGHT_ARM: LEFT_ARM, LEFT_LEG: RIGHT_LEG, RIGHT_LEG: LEFT_LEG}


def pair_score(x: int, y: int) -> int:
    if x == 0 and y == 0:
        return 0
    if x == 0 or y == 0:
        return 2
    return 5 if x == y else 1


def display_fitness(action: Action) -> float:
    """The default mating-display fitness, 0 to 14."""
    return float(
        pair_score(action[LEFT_ARM], action[RIGHT_ARM])
        + pair_score(action[LEFT_LEG], action[RIGHT_LEG])
        + 2 * abs(action[HEAD])
        + 2 * (1 - abs(action[HIPS]))
    )


@dataclass(frozen=True)
class Landscape:
    """A fitness function tabulated over every action.

    Any callable from action to a non-negative number can be wrapped; the
    table makes lookups in the simulation loop a dict access.
    """

    name: str
    function: Callable[[Action], float]
    table: dict = field(init=False, repr=False, compare=False)
    max: float = field(init=False, compare=False)

    def __post_init__(self):
        table = {a: float(self.function(a)) for a in all_actions()}
        if min(table.values()) < 0:
            raise ValueError("fitness must be non-negative")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "max", max(table.values()))

    def __call__(self, action: Action) -> float:
        return self.table[tuple(action)]


DEFAULT_LANDSCAPE = Landscape("display", display_fitness)
F_MAX = DEFAULT_LANDSCAPE.max


def evaluate(action: Action, landscape: Landscape = DEFAULT_LANDSCAPE) -> float:
    """Mental simulation: the fitness ``action`` would have if implemented."""
    return landscape(action)


def enumerate_landscape(landscape: Landscape = DEFAULT_LANDSCAPE) -> list[tuple[Action, float]]:
    """Every action with its fitness, best first; ties in lexicographic order."""
    return sorted(landscape.table.items(), key=lambda kv: (-kv[1], kv[0]))


def optima(landscape: Landscape = DEFAULT_LANDSCAPE) -> list[Action]:
    return [a for a, f in enumerate_landscape(landscape) if f == landscape.max]


def symmetry_fraction(action: Action) -> float:
    """Share of active limb pairs whose two limbs move the same way."""
    active = same = 0
    for left, right in LIMB_PAIRS:
        x, y = action[left], action[right]
        if x or y:
            active += 1
            if x == y:
                same += 1
    return same / active if active else 0.0


def movement_fraction(action: Action) -> float:
    return sum(1 for v in action if v) / 6
