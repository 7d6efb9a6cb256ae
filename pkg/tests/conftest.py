import random

import pytest

from evoc.engine import RunConfig, make_world


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def world10():
    return make_world(RunConfig(seed=3))


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
