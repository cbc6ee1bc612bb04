import pytest

from conftest import part
from oracle import as_label_sets, from_objects, minimal_elements, stopped_family
from stopsigma import (
    INF,
    Filtration,
    GenConfig,
    InvalidFiltration,
    NotAStoppingTime,
    Partition,
    SampleSpace,
    StoppingTime,
    check_structure,
    generate_sigma,
    stopped_atoms,
    stopped_sigma_bruteforce,
    verify_prop3,
    verify_theorem1,
)
from stopsigma.generate import gen_instance

PAPER_A_TAU = [["ω1", "ω2"], ["ω3"], ["ω4"], ["ω5", "ω6"], ["ω7"], ["ω8"]]

# |F_tau| and |sigma(tau)| for the worked example, from the set oracle
FIG1_F_TAU_EVENTS = 64
FIG1_SIGMA_TAU_EVENTS = 8


def test_fig1_oracle_counts(fig1):
    f, tau = fig1
    family = stopped_family(*from_objects(f, tau))
    assert len(family) == FIG1_F_TAU_EVENTS
    assert minimal_elements(family) == {frozenset(b) for b in PAPER_A_TAU}


def test_fig1_stopped_atoms(fig1):
    f, tau = fig1
    assert stopped_atoms(tau, f).atoms.to_labels() == PAPER_A_TAU


def test_fig1_per_time(fig1):
    f, tau = fig1
    res = stopped_atoms(tau, f)
    layers = {t: [list(b.labels) for b in blocks] for t, blocks in res.per_time.items()}
    assert layers == {
        0: [],
        1: [["ω1", "ω2"]],
        2: [["ω5", "ω6"]],
        3: [["ω3"], ["ω4"], ["ω7"], ["ω8"]],
        INF: [],
    }


def test_fig1_bruteforce(fig1):
    f, tau = fig1
    brute = stopped_sigma_bruteforce(tau, f)
    assert len(brute) == FIG1_F_TAU_EVENTS
    assert as_label_sets(brute.events) == stopped_family(*from_objects(f, tau))
    assert brute == generate_sigma(stopped_atoms(tau, f).atoms)


@pytest.mark.parametrize("t0", [0, 1, 2, 3])
def test_constant_tau_gives_level(fig1, t0):
    f, _ = fig1
    tau = StoppingTime.constant(f.space, t0)
    assert stopped_atoms(tau, f).atoms == f.level(t0)
    assert stopped_sigma_bruteforce(tau, f) == generate_sigma(f.level(t0))
    assert verify_theorem1(tau, f)


def test_infinite_tau_gives_terminal():
    space = SampleSpace.of_size(4)
    f = Filtration(
        space,
        [0, 1],
        [Partition.trivial(space), part(space, ["w1", "w2"], ["w3", "w4"])],
        Partition.discrete(space),
    )
    tau = StoppingTime.constant(space, INF)
    assert stopped_atoms(tau, f).atoms == f.terminal
    assert stopped_sigma_bruteforce(tau, f) == generate_sigma(f.terminal)


def test_infinity_layer_uses_terminal():
    space = SampleSpace.of_size(4)
    f = Filtration(
        space,
        [0, 1],
        [Partition.trivial(space), part(space, ["w1", "w2"], ["w3", "w4"])],
        Partition.discrete(space),
    )
    tau = StoppingTime(space, [1, 1, INF, INF])
    res = stopped_atoms(tau, f)
    assert [b.labels for b in res.layer(INF)] == [("w3",), ("w4",)]
    assert verify_theorem1(tau, f)


def test_requires_stopping_time(fig1):
    f, tau = fig1
    bad = tau.replace("ω1", 0)
    with pytest.raises(NotAStoppingTime) as exc:
        stopped_atoms(bad, f)
    assert exc.value.time == 0
    with pytest.raises(NotAStoppingTime):
        stopped_sigma_bruteforce(bad, f)


def test_force_mode_flags_result(fig1):
    f, tau = fig1
    res = stopped_atoms(tau.replace("ω1", 0), f, force=True)
    assert res.forced
    assert not check_structure(res, tau.replace("ω1", 0), f)


def test_requires_valid_filtration(fig1):
    f, tau = fig1
    levels = list(f.levels)
    levels[1], levels[2] = levels[2], levels[1]
    bad = Filtration(f.space, f.axis, levels, f.terminal)
    with pytest.raises(InvalidFiltration):
        stopped_atoms(tau, bad)
    with pytest.raises(InvalidFiltration):
        stopped_atoms(tau, bad, force=True)


def test_verify_theorem1_fig1(fig1):
    f, tau = fig1
    report = verify_theorem1(tau, f)
    assert report.ok
    assert [c.name[:3] for c in report.checks] == ["(a)", "(b)", "(c)", "(d)"]


def test_verify_prop3_fig1_strict(fig1):
    f, tau = fig1
    report = verify_prop3(tau, f)
    assert report.ok
    assert report.info["strict"]
    assert report.info["sigma_tau_events"] == FIG1_SIGMA_TAU_EVENTS
    assert report.info["f_tau_events"] == FIG1_F_TAU_EVENTS


def test_prop3_constant_tau_strict(fig1):
    f, _ = fig1
    report = verify_prop3(StoppingTime.constant(f.space, 2), f)
    assert report.ok and report.info["strict"]
    assert report.info["sigma_tau_events"] == 2


def test_prop3_equality_possible():
    space = SampleSpace.of_size(3)
    d = Partition.discrete(space)
    f = Filtration(space, [0, 1], [d, d], d)
    report = verify_prop3(StoppingTime(space, [0, 1, INF]), f)
    assert report.ok and not report.info["strict"]


def test_structure_fig1(fig1):
    f, tau = fig1
    assert check_structure(stopped_atoms(tau, f), tau, f)


def test_intersect_mutant_is_equivalent_on_stopping_times(fig1):
    # level sets of a stopping time never cut an A_t block, so "inside" and
    # "meets" select the same blocks
    f, tau = fig1
    assert stopped_atoms(tau, f, rule="intersects").atoms == stopped_atoms(tau, f).atoms


def test_lagged_mutant_is_caught(fig1):
    f, tau = fig1
    report = verify_theorem1(tau, f, rule="lagged-level")
    assert not report.ok


@pytest.mark.parametrize("seed", range(40))
def test_random_instances_match_set_oracle(seed):
    cfg = GenConfig(seed=seed, n_outcomes=7, n_times=4)
    f, tau, _ = gen_instance(cfg, vary_sizes=True)
    family = stopped_family(*from_objects(f, tau))
    assert as_label_sets(stopped_sigma_bruteforce(tau, f).events) == family
    assert {frozenset(b.labels) for b in stopped_atoms(tau, f).atoms} == minimal_elements(family)
