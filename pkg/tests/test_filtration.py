from fractions import Fraction

import pytest

from conftest import part
from stopsigma import (
    INF,
    Filtration,
    MixedSpaces,
    Partition,
    SampleSpace,
    StoppingProcess,
    StoppingTime,
    TimeAxis,
    TimeNotOnAxis,
    is_adapted,
    is_stopping_time,
    level_set,
    sigma_of_tau,
    stopping_process,
    validate_filtration,
)
from stopsigma.filtration import as_time


def test_as_time_exact():
    assert as_time(1) == Fraction(1)
    assert as_time("0.1") == Fraction(1, 10)
    assert as_time("1/3") == Fraction(1, 3)
    assert as_time("inf") == INF
    with pytest.raises(TypeError):
        as_time(0.5)
    with pytest.raises(TypeError):
        as_time(True)


def test_time_axis_strictly_increasing():
    with pytest.raises(ValueError):
        TimeAxis([0, 2, 1])
    with pytest.raises(ValueError):
        TimeAxis([])
    axis = TimeAxis(["1/2", 1, "3/2"])
    assert axis.position(Fraction(3, 2)) == 2
    assert all(t < INF for t in axis)


def test_filtration_structure_errors():
    space = SampleSpace.of_size(2)
    other = SampleSpace.of_size(3)
    with pytest.raises(ValueError):
        Filtration(space, [0, 1], [Partition.trivial(space)])
    with pytest.raises(MixedSpaces):
        Filtration(space, [0], [Partition.trivial(other)])


# --- validate_filtration ------------------------------------------------------------


def test_fig1_filtration_valid(fig1):
    f, _ = fig1
    assert validate_filtration(f)
    assert f.terminal == f.level(3)


def test_swapped_levels_invalid(fig1):
    f, _ = fig1
    levels = list(f.levels)
    levels[1], levels[2] = levels[2], levels[1]
    bad = Filtration(f.space, f.axis, levels, f.terminal)
    report = validate_filtration(bad)
    assert not report
    assert report.pair == (1, 2)
    # first block of old A_1 not inside a block of old A_2
    assert report.block.labels == ("ω1", "ω2")


def test_terminal_must_refine():
    space = SampleSpace.of_size(3)
    f = Filtration(space, [0], [Partition.discrete(space)], Partition.trivial(space))
    report = validate_filtration(f)
    assert not report and report.pair == (0, INF)


def test_single_time_discrete_valid():
    space = SampleSpace.of_size(4)
    d = Partition.discrete(space)
    assert validate_filtration(Filtration(space, [0], [d], d))


# --- stopping times -------------------------------------------------------------------


def test_fig1_tau_values(fig1):
    _, tau = fig1
    assert [int(v) for v in tau.values] == [1, 1, 3, 3, 2, 2, 3, 3]


def test_fig1_is_stopping_time(fig1):
    f, tau = fig1
    assert is_stopping_time(tau, f)


def test_moving_w1_to_zero_breaks_it(fig1):
    f, tau = fig1
    check = is_stopping_time(tau.replace("ω1", 0), f)
    assert not check
    assert check.time == 0
    assert check.event.labels == ("ω1",)
    assert check.block == f.space.omega


def test_smallest_violating_time_reported():
    space = SampleSpace.of_size(4)
    f = Filtration(
        space,
        [0, 1, 2],
        [Partition.trivial(space), part(space, ["w1", "w2"], ["w3", "w4"]), Partition.discrete(space)],
    )
    # {tau<=1} = {w1} cuts {w1,w2}; {tau<=2} is fine
    tau = StoppingTime(space, [1, 2, 2, 2])
    check = is_stopping_time(tau, f)
    assert check.time == 1 and check.block.labels == ("w1", "w2")


@pytest.mark.parametrize("t0", [0, 1, 2, 3])
def test_constant_tau_is_stopping_time(fig1, t0):
    f, _ = fig1
    assert is_stopping_time(StoppingTime.constant(f.space, t0), f)


def test_infinite_values_allowed(fig1):
    f, _ = fig1
    assert is_stopping_time(StoppingTime.constant(f.space, INF), f)


def test_value_off_axis_rejected(fig1):
    f, _ = fig1
    with pytest.raises(TimeNotOnAxis):
        is_stopping_time(StoppingTime.constant(f.space, Fraction(1, 2)), f)


def test_stopping_time_must_be_total():
    space = SampleSpace.of_size(2)
    with pytest.raises(ValueError):
        StoppingTime(space, {"w1": 0})
    with pytest.raises(ValueError):
        StoppingTime(space, [0])


def test_stopping_time_mixed_spaces(fig1):
    f, _ = fig1
    with pytest.raises(MixedSpaces):
        is_stopping_time(StoppingTime.constant(SampleSpace.of_size(8), 0), f)


# --- level sets and sigma(tau) -------------------------------------------------------


def test_level_sets_fig1(fig1):
    f, tau = fig1
    assert level_set(tau, 1, f).labels == ("ω1", "ω2")
    assert level_set(tau, 0, f) == f.space.empty_event
    assert level_set(tau, INF, f) == f.space.empty_event


def test_level_set_off_axis(fig1):
    f, tau = fig1
    with pytest.raises(TimeNotOnAxis):
        level_set(tau, 7, f)


def test_level_sets_partition_omega(fig1):
    f, tau = fig1
    union = f.space.empty_event
    total = 0
    for t in f.axis.with_infinity():
        e = level_set(tau, t, f)
        assert union.isdisjoint(e)
        union |= e
        total += len(e)
    assert union == f.space.omega and total == len(f.space)


def test_sigma_of_tau_fig1(fig1):
    f, tau = fig1
    expected = {
        frozenset({"ω1", "ω2"}),
        frozenset({"ω5", "ω6"}),
        frozenset({"ω3", "ω4", "ω7", "ω8"}),
    }
    assert {frozenset(b.labels) for b in sigma_of_tau(tau, f)} == expected


def test_sigma_of_constant_and_injective():
    space = SampleSpace.of_size(4)
    assert sigma_of_tau(StoppingTime.constant(space, 2)) == Partition.trivial(space)
    assert sigma_of_tau(StoppingTime(space, [0, 1, 2, INF])) == Partition.discrete(space)


# --- stopping process -------------------------------------------------------------------


def test_fig1_process_paths(fig1):
    f, tau = fig1
    x = stopping_process(tau, f)
    assert x.path("ω5") == (1, 1, 0, 0)
    assert x.path("ω3") == (1, 1, 1, 0)
    assert x.path("ω1") == (1, 0, 0, 0)


def test_fig1_process_node_labels(fig1):
    # values at every (t, A_t block) node of the tree, read top to bottom
    f, tau = fig1
    x = stopping_process(tau, f)
    labels = [[x.value(t, b.members[0]) for b in f.level(t)] for t in f.axis]
    assert labels == [[1], [0, 1, 1], [0, 0, 1, 0, 1], [0, 0, 0, 0, 0, 0, 0, 0]]


def test_process_constant_at_last_time(fig1):
    f, _ = fig1
    x = stopping_process(StoppingTime.constant(f.space, 3), f)
    assert all(x.path(i) == (1, 1, 1, 0) for i in range(8))


def test_process_monotone(fig1):
    f, tau = fig1
    assert stopping_process(tau, f).is_monotone()


def test_is_adapted(fig1):
    f, tau = fig1
    assert is_adapted(stopping_process(tau, f), f)
    space = f.space
    bad = StoppingProcess(space, f.axis, [space.empty_event, space.event(["ω1"]), space.event(["ω1"]), space.event(["ω1"])])
    check = is_adapted(bad, f)
    assert not check and check.time == 1 and check.block.labels == ("ω1", "ω2")
    assert is_adapted(StoppingProcess.constant(space, f.axis, 1), f)


def test_adapted_iff_stopping_time_on_perturbation(fig1):
    f, tau = fig1
    bad = tau.replace("ω1", 0)
    assert not is_stopping_time(bad, f)
    assert not is_adapted(stopping_process(bad, f), f)
