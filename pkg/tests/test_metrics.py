from hypothesis import given, settings, strategies as st

from evoc.engine import RunConfig, make_world, run
from evoc.fitness import evaluate
from evoc.metrics import diversity, is_monotone, mean_fitness
from evoc.model import all_actions

OPT = (1, 1, -1, -1, 1, 0)


def set_actions(world, actions):
    for agent, a in zip(world.agents, actions):
        agent.implemented, agent.implemented_fitness = a, evaluate(a)
    return world


def test_immobile_world():
    world = make_world(RunConfig())
    assert mean_fitness(world) == 2.0
    assert diversity(world) == 1


def test_half_and_half():
    world = set_actions(make_world(RunConfig()), [(0,) * 6] * 50 + [OPT] * 50)
    assert mean_fitness(world) == 8.0
    assert diversity(world) == 2


def test_all_optimal():
    world = set_actions(make_world(RunConfig()), [OPT] * 100)
    assert mean_fitness(world) == 14.0
    assert diversity(world) == 1


def test_all_distinct():
    world = set_actions(make_world(RunConfig()), all_actions()[:100])
    assert diversity(world) == 100


def test_is_monotone():
    assert is_monotone([1, 1, 2])
    assert not is_monotone([1, 2, 1])
    assert is_monotone([[0, 1], [0, 2]])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 30))
def test_cache_coherence_and_bounds(seed, iterations):
    world = run(RunConfig(seed=seed, iterations=iterations, width=5, height=5)).world
    fresh = sum(evaluate(a.implemented) for a in world.agents) / len(world.agents)
    assert mean_fitness(world) == fresh
    d = diversity(world)
    assert 1 <= d <= 25
    assert (d == 1) == (len({a.implemented for a in world.agents}) == 1)
