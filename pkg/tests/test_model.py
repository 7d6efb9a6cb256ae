import pytest
from hypothesis import given, strategies as st

from evoc.engine import RunConfig, make_world
from evoc.model import AgentParams, Role, World, all_actions, imitation_sources, neighbors, validate_action


def test_all_actions_count_and_uniqueness():
    actions = all_actions()
    assert len(actions) == 729
    assert len(set(actions)) == 729
    assert all(v in (-1, 0, 1) for a in actions for v in a)


def test_validate_action_rejects_bad_values():
    with pytest.raises(ValueError):
        validate_action((0, 0, 2, 0, 0, 0))
    with pytest.raises(ValueError):
        validate_action((0, 0, 0))


def test_corner_neighbors_wrap():
    world = make_world(RunConfig(seed=0))
    got = neighbors(world, 0)
    expected = {r * 10 + c for r in (9, 0, 1) for c in (9, 0, 1)} - {0}
    assert len(got) == 8
    assert set(got) == expected


def test_neighbors_row_major_order():
    world = make_world(RunConfig(seed=0))
    # agent at (5, 5): offsets (-1,-1) .. (1,1) row-major
    assert neighbors(world, 55) == [44, 45, 46, 54, 56, 64, 65, 66]


def test_single_cell_world_has_no_neighbors():
    world = make_world(RunConfig(width=1, height=1, broadcasting=False))
    assert neighbors(world, 0) == []


def test_three_by_three_center_sees_everyone():
    world = make_world(RunConfig(width=3, height=3))
    assert sorted(neighbors(world, 4)) == [0, 1, 2, 3, 5, 6, 7, 8]


def test_von_neumann():
    world = make_world(RunConfig(neighborhood="vonneumann"))
    assert neighbors(world, 0) == [90, 9, 1, 10]


def test_invalid_agent_id():
    world = make_world(RunConfig())
    with pytest.raises(IndexError):
        neighbors(world, 100)
    with pytest.raises(IndexError):
        neighbors(world, -1)


def _leader_world(leader):
    world = make_world(RunConfig(seed=0))
    for a in world.agents:
        a.role = Role.FOLLOWER
    world.agents[leader].role = Role.LEADER
    world.leader_id = leader
    world._sources.clear()
    return world


def test_sources_follower_far_from_leader():
    world = _leader_world(55)
    src = imitation_sources(world, 0)
    assert len(src) == 9 and 55 in src


def test_sources_follower_adjacent_to_leader():
    world = _leader_world(55)
    src = imitation_sources(world, 54)
    assert len(src) == 8 and 55 in src


def test_sources_leader_sees_only_neighbors():
    world = _leader_world(55)
    assert imitation_sources(world, 55) == neighbors(world, 55)


def test_sources_without_broadcasting():
    world = make_world(RunConfig(broadcasting=False))
    assert world.leader_id is None
    assert all(imitation_sources(world, k) == neighbors(world, k) for k in range(100))


def test_world_has_one_leader():
    world = make_world(RunConfig(seed=9))
    leaders = [a.id for a in world.agents if a.role is Role.LEADER]
    assert leaders == [world.leader_id]
    assert all(world.leader_id in imitation_sources(world, k) for k in range(100) if k != world.leader_id)


def test_world_requires_one_agent_per_cell():
    world = make_world(RunConfig(width=2, height=2))
    with pytest.raises(ValueError):
        World(width=3, height=2, agents=world.agents, landscape=world.landscape)


def test_agent_params_range():
    with pytest.raises(ValueError):
        AgentParams(i=1.5)
    with pytest.raises(ValueError):
        AgentParams(c=-0.1)


@given(st.integers(1, 7), st.integers(1, 7), st.sampled_from(["moore", "vonneumann"]), st.data())
def test_neighbors_symmetric(width, height, hood, data):
    world = make_world(RunConfig(width=width, height=height, neighborhood=hood, broadcasting=False))
    a = data.draw(st.integers(0, width * height - 1))
    nb = neighbors(world, a)
    assert a not in nb
    assert len(nb) == len(set(nb))
    for b in nb:
        assert a in neighbors(world, b)
