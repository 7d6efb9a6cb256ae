"""EVOC: an agent-based model of cultural evolution with broadcasting leaders."""

from evoc.model import Action, AgentParams, AgentState, Role, World, all_actions
from evoc.fitness import DEFAULT_LANDSCAPE, Landscape, evaluate
from evoc.operators import OperatorState, invent, update_operators
from evoc.engine import RunConfig, Trajectory, run, step
from evoc.metrics import IterationRecord, diversity, mean_fitness

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AgentParams",
    "AgentState",
    "Role",
    "World",
    "all_actions",
    "DEFAULT_LANDSCAPE",
    "Landscape",
    "evaluate",
    "OperatorState",
    "invent",
    "update_operators",
    "RunConfig",
    "Trajectory",
    "run",
    "step",
    "IterationRecord",
    "diversity",
    "mean_fitness",
]
