"""Knowledge-based operators and invention.

Each agent keeps two running estimates learned from the actions it adopts:
how often successful actions move limb pairs in the same direction, and how
much of the body they move. Invention perturbs the current idea part by part
and uses the estimates to tilt the direction of each change.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from evoc.fitness import PARTNER, movement_fraction, symmetry_fraction
from evoc.model import Action

# the two values a part can change to, keyed by its current value
ALTERNATIVES = {-1: (0, 1), 0: (-1, 1), 1: (-1, 0)}


@dataclass(frozen=True)
class OperatorState:
    sym_estimate: float = 0.0
    mov_estimate: float = 0.0
    learning_rate: float = 0.1
    enabled: bool = True

    def __post_init__(self):
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must lie in (0, 1]")
        if not self.enabled and (self.sym_estimate or self.mov_estimate):
            raise ValueError("disabled operators carry zero estimates")


def update_operators(state: OperatorState, adopted: Action) -> OperatorState:
    """Fold a newly learned action into the trend estimates (EMA step)."""
    if not state.enabled:
        return state
    a = state.learning_rate
    return replace(
        state,
        sym_estimate=(1 - a) * state.sym_estimate + a * symmetry_fraction(adopted),
        mov_estimate=(1 - a) * state.mov_estimate + a * movement_fraction(adopted),
    )


def change_weights(current: Action, part: int, state: OperatorState) -> tuple[tuple[int, int], tuple[float, float]]:
    """Unnormalised weights over the two values ``part`` may change to."""
    alts = ALTERNATIVES[current[part]]
    partner = PARTNER.get(part)
    d = current[partner] if partner is not None else 0
    weights = []
    for v in alts:
        w = 1.0
        if v != 0:
            w *= 1.0 + state.mov_estimate
            if d != 0 and v == d:
                w *= 1.0 + state.sym_estimate
        weights.append(w)
    return alts, (weights[0], weights[1])


def invent(current: Action, c: float, state: OperatorState, rng: random.Random) -> Action:
    """A new idea derived from ``current``.

    Every part changes independently with probability ``c``; a changing part
    always takes one of its two other values. The result is not evaluated.
    """
    new = list(current)
    for part in range(6):
        if rng.random() < c:
            alts, (w0, w1) = change_weights(current, part, state)
            new[part] = alts[0] if rng.random() * (w0 + w1) < w0 else alts[1]
    return tuple(new)
