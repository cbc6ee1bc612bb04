import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stopsigma import Partition, SampleSpace, load_fixture


@pytest.fixture
def fig1():
    return load_fixture("fig1")


@pytest.fixture
def fig1_space(fig1):
    return fig1[0].space


def part(space, *blocks):
    return Partition(space, [space.event(b) for b in blocks])


def abc():
    return SampleSpace(["a", "b", "c"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
