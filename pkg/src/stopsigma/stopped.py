"""Stopping-time sigma-algebras, computed two independent ways.

:func:`stopped_atoms` builds the atoms directly: at each time ``t`` keep the
atoms of ``F_t`` that lie inside ``{tau = t}`` and collect them over
``T ∪ {inf}``.  :func:`stopped_sigma_bruteforce` instead enumerates every
event of ``F_inf`` and keeps those ``F`` with ``F ∩ {tau <= t}`` in ``F_t``
for all ``t``.  :func:`verify_theorem1` and :func:`verify_prop3` compare the
two.  Only finite spaces can be checked here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidFiltration, NotAStoppingTime, NotAPartition
from .events import (
    Event,
    Partition,
    SigmaAlgebra,
    atoms_of,
    generate_sigma,
    is_sigma_algebra,
)
from .filtration import (
    Filtration,
    StoppingTime,
    format_time,
    is_stopping_time,
    sigma_of_tau,
    validate_filtration,
)

__all__ = [
    "StoppedResult",
    "Check",
    "Report",
    "stopped_atoms",
    "stopped_sigma_bruteforce",
    "verify_theorem1",
    "verify_prop3",
    "check_structure",
]

# Block-selection rules for stopped_atoms.  Only "subset" is correct; the
# others exist so the verification harness can be shown to catch mutants.
_RULES = ("subset", "intersects", "lagged-level")


@dataclass(frozen=True)
class StoppedResult:
    """Atoms of ``F_tau`` with their decomposition by stopping instant.

    ``per_time`` maps each ``t`` in ``T ∪ {INF}`` to the tuple of ``A_t``
    blocks inside ``{tau = t}``; ``atoms`` is their union as a partition.
    """

    per_time: dict
    atoms: Partition
    source: str = "constructive"
    forced: bool = False

    def layer(self, t) -> tuple[Event, ...]:
        return self.per_time.get(t, ())

    def nonempty_times(self) -> list:
        return [t for t, blocks in self.per_time.items() if blocks]


def _prepare(tau: StoppingTime, f: Filtration) -> None:
    report = validate_filtration(f)
    if not report:
        raise InvalidFiltration(report)
    check = is_stopping_time(tau, f)
    if not check:
        raise NotAStoppingTime(check)


def stopped_atoms(tau: StoppingTime, f: Filtration, force: bool = False, rule: str = "subset") -> StoppedResult:
    """Atoms of the stopping-time sigma-algebra, built layer by layer.

    Parameters
    ----------
    tau, f
        Stopping time and filtration. Both are validated first.
    force : bool
        Skip the stopping-time check and apply the construction anyway.
        The result then need not be the atom set of any sigma-algebra.  If
        the selected blocks do not partition the space, ``atoms`` keeps the
        first disjoint ones, lumps the rest of the space into one extra
        block, and ``forced`` is set.

    Raises
    ------
    InvalidFiltration, NotAStoppingTime
    """
    if rule not in _RULES:
        raise ValueError(f"unknown rule {rule!r}")
    if force:
        report = validate_filtration(f)
        if not report:
            raise InvalidFiltration(report)
    else:
        _prepare(tau, f)

    space = f.space
    per_time: dict = {}
    chosen: list[int] = []
    prev = Partition.trivial(space)
    for t in f.axis.with_infinity():
        part = f.level(t)
        level = tau._level_mask(t)
        source = prev if rule == "lagged-level" else part
        if rule == "intersects":
            picked = [b for b in source.masks if b & level]
        else:
            picked = [b for b in source.masks if b & ~level == 0]
        per_time[t] = tuple(Event(space, b) for b in picked)
        chosen.extend(picked)
        prev = part

    try:
        atoms = Partition(space, chosen)
        forced = False
    except NotAPartition:
        if not (force or rule != "subset"):
            raise
        seen, disjoint = 0, []
        for b in chosen:
            if not b & seen:
                disjoint.append(b)
                seen |= b
        if seen != space.full:
            disjoint.append(space.full & ~seen)
        atoms = Partition._trusted(space, disjoint)
        forced = True
    return StoppedResult(per_time, atoms, "constructive", forced)


def stopped_sigma_bruteforce(tau: StoppingTime, f: Filtration, bound: int | None = None) -> SigmaAlgebra:
    """Every event ``F`` of ``F_inf`` with ``F ∩ {tau <= t}`` in ``F_t`` for all ``t``.

    Candidates are all unions of terminal blocks.  Membership in ``F_t`` is
    tested as "is a union of ``A_t`` blocks".
    """
    _prepare(tau, f)
    candidates = generate_sigma(f.terminal, bound=bound)
    tests = [(tau._le_mask(t), part) for t, part in f.items()]
    kept = [F for F in candidates.masks if all(part._measurable(F & le) for le, part in tests)]
    result = SigmaAlgebra(f.space, kept, check=False)
    closure = is_sigma_algebra(result.events)
    if not closure:
        raise AssertionError(f"brute-force stopped family is not a sigma-algebra: {closure.reason}")
    return result


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: Event | None = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = list(self.witness.labels)
        return d


@dataclass
class Report:
    """Named pass/fail checks, truthy iff all passed."""

    title: str
    checks: list[Check] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "", witness: Event | None = None) -> Check:
        c = Check(name, bool(passed), detail, witness)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "info": self.info,
        }

    def lines(self) -> list[str]:
        out = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'pass' if c.passed else 'FAIL'}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            if c.witness is not None and not c.passed:
                line += f" (witness {c.witness})"
            out.append(line)
        return out

    def __str__(self):
        return "\n".join(self.lines())


def check_structure(result: StoppedResult, tau: StoppingTime, f: Filtration) -> Report:
    """Disjointness of the layers, layer unions equal level sets, atoms partition the space."""
    space = f.space
    report = Report("structure")

    seen = 0
    overlap = 0
    for blocks in result.per_time.values():
        for b in blocks:
            overlap |= seen & b.mask
            seen |= b.mask
    report.add(
        "layers disjoint",
        overlap == 0,
        "" if not overlap else "layers share outcomes",
        Event(space, overlap) if overlap else None,
    )

    bad = None
    for t in f.axis.with_infinity():
        union = 0
        for b in result.layer(t):
            union |= b.mask
        if union != tau._level_mask(t):
            bad = t
            diff = Event(space, union ^ tau._level_mask(t))
            break
    if bad is None:
        report.add("layer union equals level set", True)
    else:
        report.add("layer union equals level set", False, f"t = {format_time(bad)}", diff)

    total = sum(m.bit_count() for m in result.atoms.masks)
    union = 0
    for m in result.atoms.masks:
        union |= m
    partition_ok = (not result.forced) and total == len(space) and union == space.full
    report.add("atoms partition omega", partition_ok)
    return report


def verify_theorem1(tau: StoppingTime, f: Filtration, bound: int | None = None, rule: str = "subset") -> Report:
    """Compare the constructive atoms against the brute-force stopped sigma-algebra.

    Checks: (a) each constructed atom is in the brute-force family;
    (b) no member of that family is a nonempty strict subset of a
    constructed atom; (c) the atoms of the brute-force family equal the
    constructed atoms; (d) the sigma-algebra they generate equals the
    brute-force family.
    """
    result = stopped_atoms(tau, f, rule=rule)
    brute = stopped_sigma_bruteforce(tau, f, bound=bound)
    space = f.space
    report = Report("stopped atoms")
    report.info["atoms"] = len(result.atoms)
    report.info["events"] = len(brute)

    missing = [a for a in result.atoms.masks if a not in brute.masks]
    report.add(
        "(a) atoms belong to F_tau",
        not missing,
        witness=Event(space, missing[0]) if missing else None,
    )

    splitter = None
    for a in result.atoms.masks:
        for F in brute.masks:
            if F and F != a and F & ~a == 0:
                splitter = F
                break
        if splitter is not None:
            break
    report.add(
        "(b) atoms are minimal in F_tau",
        splitter is None,
        witness=Event(space, splitter) if splitter is not None else None,
    )

    brute_atoms = atoms_of(brute, check=False)
    same = brute_atoms == result.atoms
    report.add(
        "(c) atoms of F_tau equal constructed atoms",
        same,
        "" if same else f"brute force {brute_atoms} vs constructed {result.atoms}",
    )

    generated = generate_sigma(result.atoms, bound=bound)
    diff = generated.masks ^ brute.masks
    report.add(
        "(d) sigma(atoms) equals F_tau",
        not diff,
        "" if not diff else f"{len(generated)} generated vs {len(brute)} brute-force events",
        Event(space, min(diff)) if diff else None,
    )
    return report


def verify_prop3(tau: StoppingTime, f: Filtration, bound: int | None = None) -> Report:
    """Check that sigma(tau) is contained in ``F_tau`` and record whether strictly."""
    brute = stopped_sigma_bruteforce(tau, f, bound=bound)
    generated = generate_sigma(sigma_of_tau(tau, f), bound=bound)
    outside = generated.masks - brute.masks
    report = Report("sigma(tau) inclusion")
    report.add(
        "sigma(tau) subset of F_tau",
        not outside,
        witness=Event(f.space, min(outside)) if outside else None,
    )
    report.info["sigma_tau_events"] = len(generated)
    report.info["f_tau_events"] = len(brute)
    report.info["strict"] = not outside and len(generated) < len(brute)
    return report
