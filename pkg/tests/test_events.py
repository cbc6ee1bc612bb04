import pytest

from conftest import abc, part
from oracle import minimal_elements, powerset, unions_of
from stopsigma import (
    EmptySpace,
    Event,
    MixedSpaces,
    NotAPartition,
    NotASigmaAlgebra,
    Partition,
    SampleSpace,
    SigmaAlgebra,
    TooManyAtoms,
    atoms_of,
    generate_sigma,
    is_sigma_algebra,
    join,
    meet,
    refines,
)
from stopsigma.events import MAX_ATOMS_ENV, max_atoms


def test_sample_space_rejects_empty_and_duplicates():
    with pytest.raises(EmptySpace):
        SampleSpace([])
    with pytest.raises(ValueError):
        SampleSpace(["a", "a"])
    with pytest.raises(ValueError):
        SampleSpace(["a", ""])


def test_label_index_bijection():
    space = SampleSpace(["x", "y", "z"])
    assert [space.index(space.label(i)) for i in range(3)] == [0, 1, 2]


def test_event_algebra():
    space = abc()
    a = space.event("ab")
    b = space.event(["b", "c"])
    assert (a & b).labels == ("b",)
    assert (a | b) == space.omega
    assert (~a).labels == ("c",)
    assert (a - b).labels == ("a",)
    assert space.event("b") < a
    assert not a < a
    assert len(a) == 2
    assert "a" in a and 2 not in a


def test_event_equality_by_members():
    space = abc()
    assert space.event([0, 1]) == space.event(["b", "a"])
    assert hash(space.event([0, 1])) == hash(Event(space, 0b011))


def test_event_mixed_spaces():
    with pytest.raises(MixedSpaces):
        abc().event("a") | SampleSpace(["p", "q"]).event("p")


def test_event_mask_out_of_range():
    with pytest.raises(ValueError):
        Event(abc(), 0b1000)


def test_partition_canonical_order():
    space = abc()
    p = Partition(space, [space.event("c"), space.event("ab")])
    q = Partition(space, [space.event("ba"), space.event("c")])
    assert p == q
    assert p.to_labels() == [["a", "b"], ["c"]]


@pytest.mark.parametrize(
    "blocks",
    [["ab", "bc"], ["a", "b"], ["abc", ""]],
    ids=["overlap", "gap", "empty-block"],
)
def test_partition_rejects(blocks):
    space = abc()
    with pytest.raises(NotAPartition):
        Partition(space, [space.event(b) for b in blocks])


# --- atoms_of ---------------------------------------------------------------


def test_atoms_of_trivial_sigma():
    space = SampleSpace.of_size(8)
    assert atoms_of(SigmaAlgebra(space, [space.empty_event, space.omega])) == Partition.trivial(space)


def test_atoms_of_power_set():
    space = abc()
    events = [space.event(s) for s in powerset("abc")]
    assert atoms_of(events).to_labels() == [["a"], ["b"], ["c"]]


def test_atoms_of_paper_level_one(fig1):
    # the 8 events generated by A_1 from the worked example
    f, _ = fig1
    space = f.space
    blocks = [["ω1", "ω2"], ["ω3", "ω4"], ["ω5", "ω6", "ω7", "ω8"]]
    events = [space.event(u) for u in unions_of(blocks)]
    assert len(events) == 8
    assert atoms_of(events).to_labels() == blocks


def test_atoms_of_rejects_non_sigma():
    space = abc()
    with pytest.raises(NotASigmaAlgebra):
        atoms_of([space.empty_event, space.event("a"), space.omega])


def test_atoms_of_matches_definition():
    space = SampleSpace.of_size(5)
    p = part(space, ["w1", "w4"], ["w2"], ["w3", "w5"])
    sigma = generate_sigma(p)
    family = {frozenset(e.labels) for e in sigma}
    assert {frozenset(b.labels) for b in atoms_of(sigma)} == minimal_elements(family)


# --- generate_sigma -------------------------------------------------------------


def test_generate_sigma_trivial():
    space = SampleSpace.of_size(4)
    s = generate_sigma(Partition.trivial(space))
    assert set(s.events) == {space.empty_event, space.omega}


def test_generate_sigma_counts():
    space = SampleSpace.of_size(6)
    assert len(generate_sigma(part(space, ["w1", "w2"], ["w3"], ["w4", "w5", "w6"]))) == 8


def test_generate_sigma_matches_unions_oracle():
    space = SampleSpace.of_size(6)
    blocks = [["w1", "w5"], ["w2"], ["w3", "w4"], ["w6"]]
    s = generate_sigma(part(space, *blocks))
    assert {frozenset(e.labels) for e in s} == unions_of(blocks)


def test_generate_sigma_bound(monkeypatch):
    space = SampleSpace.of_size(6)
    discrete = Partition.discrete(space)
    with pytest.raises(TooManyAtoms):
        generate_sigma(discrete, bound=5)
    monkeypatch.setenv(MAX_ATOMS_ENV, "4")
    assert max_atoms() == 4
    with pytest.raises(TooManyAtoms):
        generate_sigma(discrete)
    assert len(generate_sigma(discrete, bound=6)) == 64


def test_default_bound_is_twenty(monkeypatch):
    monkeypatch.delenv(MAX_ATOMS_ENV, raising=False)
    assert max_atoms() == 20
    space = SampleSpace.of_size(21)
    with pytest.raises(TooManyAtoms):
        generate_sigma(Partition.discrete(space))


# --- is_sigma_algebra -----------------------------------------------------------


def test_is_sigma_algebra_trivial():
    space = abc()
    assert is_sigma_algebra([space.empty_event, space.omega])


def test_is_sigma_algebra_reports_missing_complement():
    space = abc()
    check = is_sigma_algebra([space.empty_event, space.event("a"), space.omega])
    assert not check
    assert "complement" in check.reason
    assert check.witness == (space.event("a"),)


def test_is_sigma_algebra_reports_missing_union():
    space = SampleSpace.of_size(4)
    events = [space.event(e) for e in [[], ["w1"], ["w2", "w3", "w4"], ["w2"], ["w1", "w3", "w4"], ["w1", "w2", "w3", "w4"]]]
    check = is_sigma_algebra(events)
    assert not check and "union" in check.reason


def test_is_sigma_algebra_mixed_spaces():
    with pytest.raises(MixedSpaces):
        is_sigma_algebra([abc().empty_event, SampleSpace(["x"]).omega])


def test_generate_sigma_output_is_closed():
    space = SampleSpace.of_size(7)
    p = part(space, ["w1"], ["w2", "w3"], ["w4", "w5", "w6"], ["w7"])
    assert is_sigma_algebra(generate_sigma(p).events)


# --- refines / meet / join ----------------------------------------------------------


def test_refines_basic():
    space = SampleSpace.of_size(4)
    assert refines(Partition.discrete(space), Partition.trivial(space))
    assert not refines(Partition.trivial(space), Partition.discrete(space))


def test_refines_fig1_levels(fig1):
    f, _ = fig1
    assert refines(f.level(2), f.level(1))
    assert not refines(f.level(1), f.level(2))


def test_refines_mixed_spaces():
    with pytest.raises(MixedSpaces):
        refines(Partition.trivial(abc()), Partition.trivial(SampleSpace(["x"])))


def test_meet_join_identities():
    space = SampleSpace.of_size(5)
    p = part(space, ["w1", "w3"], ["w2"], ["w4", "w5"])
    top = Partition.trivial(space)
    assert meet(p, top) == p
    assert join(p, top) == top


def test_meet_by_intersection():
    space = abc()
    assert meet(part(space, "ab", "c"), part(space, "a", "bc")).to_labels() == [["a"], ["b"], ["c"]]


def test_join_chains_overlaps():
    space = SampleSpace.of_size(5)
    p = part(space, ["w1", "w2"], ["w3", "w4"], ["w5"])
    q = part(space, ["w1"], ["w2", "w3"], ["w4"], ["w5"])
    assert join(p, q).to_labels() == [["w1", "w2", "w3", "w4"], ["w5"]]


def test_join_fig1_stopped_with_sigma_tau(fig1):
    from stopsigma import sigma_of_tau, stopped_atoms

    f, tau = fig1
    a_tau = stopped_atoms(tau, f).atoms
    a_sig = sigma_of_tau(tau, f)
    assert refines(a_tau, a_sig)
    assert join(a_tau, a_sig) == a_sig
