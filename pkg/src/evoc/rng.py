"""Seed derivation: master seed -> run seed -> per-agent streams.

Seeds are mixed with numpy's SeedSequence; each agent then draws from its
own Mersenne Twister, so an agent's randomness never depends on how many
numbers other agents consumed.
"""

from __future__ import annotations

import os
import random

import numpy as np

RNG_ALGORITHM = "MT19937 (python random.Random) per agent, seeded via numpy SeedSequence"
SEED_MASK = (1 << 64) - 1


def _to_int(ss: np.random.SeedSequence) -> int:
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def child_seed(master_seed: int, k: int) -> int:
    """Seed of run ``k`` in a batch under ``master_seed``."""
    return _to_int(np.random.SeedSequence(master_seed & SEED_MASK, spawn_key=(k,)))


def world_stream(run_seed: int) -> random.Random:
    """Stream for run-level draws such as picking the leader."""
    return random.Random(_to_int(np.random.SeedSequence(run_seed & SEED_MASK, spawn_key=(0,))))


def agent_streams(run_seed: int, n_agents: int) -> list[random.Random]:
    return [
        random.Random(_to_int(np.random.SeedSequence(run_seed & SEED_MASK, spawn_key=(1, k))))
        for k in range(n_agents)
    ]


def default_seed(fallback: int = 0) -> int:
    """Master seed from ``EVOC_SEED`` if set, else ``fallback``."""
    value = os.environ.get("EVOC_SEED")
    if value is None or value.strip() == "":
        return fallback
    return int(value, 0) & SEED_MASK
