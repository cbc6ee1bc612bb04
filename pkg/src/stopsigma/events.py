"""Finite sample spaces, events, partitions and explicit sigma-algebras.

Events are bitmasks over the outcome indices of a :class:`SampleSpace`
(bit ``i`` set means outcome ``i`` belongs to the event). Python integers
are unbounded, so the same representation covers spaces of any size.

A finite sigma-algebra is represented either explicitly, as the list of
all its events (:class:`SigmaAlgebra`), or canonically, by its atoms
(:class:`Partition`). :func:`atoms_of` and :func:`generate_sigma` convert
between the two.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    EmptySpace,
    MixedSpaces,
    NotAPartition,
    NotASigmaAlgebra,
    TooManyAtoms,
)

__all__ = [
    "SampleSpace",
    "Event",
    "Partition",
    "SigmaAlgebra",
    "ClosureCheck",
    "atoms_of",
    "generate_sigma",
    "is_sigma_algebra",
    "refines",
    "meet",
    "join",
    "max_atoms",
    "iter_bits",
    "DEFAULT_MAX_ATOMS",
    "MAX_ATOMS_ENV",
]

DEFAULT_MAX_ATOMS = 20
MAX_ATOMS_ENV = "STOPSIGMA_MAX_ATOMS"


def max_atoms(override: int | None = None) -> int:
    """Enumeration bound for explicit sigma-algebras.

    ``override`` wins, then the ``STOPSIGMA_MAX_ATOMS`` environment
    variable, then :data:`DEFAULT_MAX_ATOMS`.
    """
    if override is not None:
        return int(override)
    env = os.environ.get(MAX_ATOMS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{MAX_ATOMS_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_MAX_ATOMS


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest(mask: int) -> int:
    return mask & -mask


class SampleSpace:
    """An ordered, finite set of labelled outcomes."""

    __slots__ = ("outcomes", "_index", "full")

    def __init__(self, outcomes: Iterable[str]):
        outcomes = tuple(outcomes)
        if not outcomes:
            raise EmptySpace("a sample space needs at least one outcome")
        for label in outcomes:
            if not isinstance(label, str) or not label:
                raise ValueError(f"outcome labels must be nonempty strings, got {label!r}")
        index = {label: i for i, label in enumerate(outcomes)}
        if len(index) != len(outcomes):
            dupes = sorted({x for x in outcomes if outcomes.count(x) > 1})
            raise ValueError(f"duplicate outcome labels: {dupes}")
        self.outcomes = outcomes
        self._index = index
        self.full = (1 << len(outcomes)) - 1

    @classmethod
    def of_size(cls, n: int, prefix: str = "w") -> "SampleSpace":
        """Space with outcomes ``w1 .. wn``."""
        if n < 1:
            raise EmptySpace("a sample space needs at least one outcome")
        return cls(f"{prefix}{i}" for i in range(1, n + 1))

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SampleSpace):
            return NotImplemented
        return self.outcomes == other.outcomes

    def __hash__(self):
        return hash(self.outcomes)

    def __repr__(self):
        return f"SampleSpace({list(self.outcomes)!r})"

    def index(self, label: str) -> int:
        return self._index[label]

    def label(self, i: int) -> str:
        return self.outcomes[i]

    def __contains__(self, label) -> bool:
        return label in self._index

    def event(self, members: Iterable[Union[int, str]] = ()) -> "Event":
        """Build an event from outcome indices and/or labels."""
        mask = 0
        n = len(self.outcomes)
        for m in members:
            if isinstance(m, str):
                i = self._index[m]
            else:
                i = int(m)
                if not 0 <= i < n:
                    raise IndexError(f"outcome index {i} outside 0..{n - 1}")
            mask |= 1 << i
        return Event(self, mask)

    @property
    def empty_event(self) -> "Event":
        return Event(self, 0)

    @property
    def omega(self) -> "Event":
        return Event(self, self.full)


def _same_space(a: SampleSpace, b: SampleSpace) -> None:
    if a is not b and a != b:
        raise MixedSpaces("objects belong to different sample spaces")


@dataclass(frozen=True, slots=True)
class Event:
    """A subset of a sample space, stored as a bitmask."""

    space: SampleSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask & ~self.space.full:
            raise ValueError(f"mask {self.mask:#x} has bits outside the sample space")

    def _other(self, other: "Event") -> int:
        if not isinstance(other, Event):
            raise TypeError(f"expected Event, got {type(other).__name__}")
        _same_space(self.space, other.space)
        return other.mask

    def __and__(self, other):
        return Event(self.space, self.mask & self._other(other))

    def __or__(self, other):
        return Event(self.space, self.mask | self._other(other))

    def __sub__(self, other):
        return Event(self.space, self.mask & ~self._other(other))

    def __xor__(self, other):
        return Event(self.space, self.mask ^ self._other(other))

    def __invert__(self):
        return Event(self.space, self.space.full & ~self.mask)

    def complement(self) -> "Event":
        return ~self

    def __le__(self, other):
        return self.mask & ~self._other(other) == 0

    def __lt__(self, other):
        o = self._other(other)
        return self.mask != o and self.mask & ~o == 0

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __len__(self):
        return self.mask.bit_count()

    def __bool__(self):
        return self.mask != 0

    def __iter__(self):
        return iter_bits(self.mask)

    def __contains__(self, item):
        i = self.space.index(item) if isinstance(item, str) else item
        return bool(self.mask >> i & 1)

    def isdisjoint(self, other) -> bool:
        return self.mask & self._other(other) == 0

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.outcomes[i] for i in iter_bits(self.mask))

    def __str__(self):
        return "{" + ",".join(self.labels) + "}"

    def __repr__(self):
        return f"Event({str(self)})"


def _as_mask(space: SampleSpace, e) -> int:
    if isinstance(e, Event):
        _same_space(space, e.space)
        return e.mask
    if isinstance(e, int):
        if e < 0 or e & ~space.full:
            raise ValueError(f"mask {e:#x} has bits outside the sample space")
        return e
    return space.event(e).mask


class Partition:
    """Disjoint nonempty blocks covering the sample space.

    Blocks are kept in canonical order (by smallest member index), so two
    partitions are equal exactly when their block tuples are.  A partition
    stands for the finite sigma-algebra it generates; its blocks are that
    sigma-algebra's atoms.
    """

    __slots__ = ("space", "masks", "_owner")

    def __init__(self, space: SampleSpace, blocks: Iterable):
        masks = [_as_mask(space, b) for b in blocks]
        seen = 0
        for m in masks:
            if m == 0:
                raise NotAPartition("partition blocks must be nonempty")
            if seen & m:
                overlap = Event(space, seen & m)
                raise NotAPartition(f"blocks overlap on {overlap}")
            seen |= m
        if seen != space.full:
            missing = Event(space, space.full & ~seen)
            raise NotAPartition(f"blocks do not cover outcomes {missing}")
        masks.sort(key=_lowest)
        self.space = space
        self.masks = tuple(masks)
        self._owner = None

    @classmethod
    def _trusted(cls, space: SampleSpace, masks: Iterable[int]) -> "Partition":
        # caller guarantees a valid partition; skips validation
        p = object.__new__(cls)
        p.space = space
        p.masks = tuple(sorted(masks, key=_lowest))
        p._owner = None
        return p

    @classmethod
    def trivial(cls, space: SampleSpace) -> "Partition":
        return cls._trusted(space, [space.full])

    @classmethod
    def discrete(cls, space: SampleSpace) -> "Partition":
        return cls._trusted(space, [1 << i for i in range(len(space))])

    @property
    def blocks(self) -> tuple[Event, ...]:
        return tuple(Event(self.space, m) for m in self.masks)

    def __len__(self):
        return len(self.masks)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.masks == other.masks and self.space == other.space

    def __hash__(self):
        return hash((self.space, self.masks))

    def __str__(self):
        return "{" + ",".join(str(b) for b in self.blocks) + "}"

    def __repr__(self):
        return f"Partition({self})"

    def to_labels(self) -> list[list[str]]:
        return [list(b.labels) for b in self.blocks]

    def block_index(self, outcome: int) -> int:
        """Index (in canonical order) of the block holding ``outcome``."""
        if self._owner is None:
            owner = [0] * len(self.space)
            for k, m in enumerate(self.masks):
                for i in iter_bits(m):
                    owner[i] = k
            self._owner = owner
        return self._owner[outcome]

    def block_of(self, outcome: Union[int, str]) -> Event:
        i = self.space.index(outcome) if isinstance(outcome, str) else outcome
        return Event(self.space, self.masks[self.block_index(i)])

    def saturate(self, event) -> Event:
        """Smallest union of blocks containing ``event``."""
        mask = _as_mask(self.space, event)
        return Event(self.space, self._saturate(mask))

    def _saturate(self, mask: int) -> int:
        out = 0
        for b in self.masks:
            if b & mask:
                out |= b
        return out

    def is_measurable(self, event) -> bool:
        """True iff ``event`` is a union of blocks, i.e. lies in the generated sigma-algebra."""
        return self._measurable(_as_mask(self.space, event))

    def _measurable(self, mask: int) -> bool:
        for b in self.masks:
            hit = b & mask
            if hit and hit != b:
                return False
        return True

    def _split_block(self, mask: int) -> int:
        """First block cut by ``mask`` (0 if none)."""
        for b in self.masks:
            hit = b & mask
            if hit and hit != b:
                return b
        return 0

    def sigma(self, bound: int | None = None) -> "SigmaAlgebra":
        return generate_sigma(self, bound=bound)


class SigmaAlgebra:
    """A finite sigma-algebra given by the explicit list of its events.

    Only the oracle paths build these; everything else works with the atom
    form (:class:`Partition`).  Events are ordered canonically by bitmask.
    """

    __slots__ = ("space", "masks")

    def __init__(self, space: SampleSpace, events: Iterable, check: bool = True):
        masks = frozenset(_as_mask(space, e) for e in events)
        self.space = space
        self.masks = masks
        if check:
            result = _closure(space, masks)
            if not result:
                raise NotASigmaAlgebra(result.reason, result.witness)

    @property
    def events(self) -> tuple[Event, ...]:
        return tuple(Event(self.space, m) for m in sorted(self.masks))

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return iter(self.events)

    def __contains__(self, event):
        if isinstance(event, Event):
            if event.space != self.space:
                return False
            return event.mask in self.masks
        return event in self.masks

    def __eq__(self, other):
        if not isinstance(other, SigmaAlgebra):
            return NotImplemented
        return self.space == other.space and self.masks == other.masks

    def __hash__(self):
        return hash((self.space, self.masks))

    def __le__(self, other: "SigmaAlgebra") -> bool:
        _same_space(self.space, other.space)
        return self.masks <= other.masks

    def __lt__(self, other: "SigmaAlgebra") -> bool:
        _same_space(self.space, other.space)
        return self.masks < other.masks

    def issubset(self, other: "SigmaAlgebra") -> bool:
        return self <= other

    def atoms(self) -> Partition:
        return atoms_of(self, check=False)

    def __repr__(self):
        return f"SigmaAlgebra(<{len(self.masks)} events over {len(self.space)} outcomes>)"


@dataclass(frozen=True)
class ClosureCheck:
    """Outcome of :func:`is_sigma_algebra`; truthy iff the family is closed."""

    ok: bool
    reason: str = ""
    witness: tuple[Event, ...] = ()

    def __bool__(self):
        return self.ok


def _closure(space: SampleSpace, masks: frozenset[int]) -> ClosureCheck:
    full = space.full
    if 0 not in masks:
        return ClosureCheck(False, "empty event missing")
    if full not in masks:
        return ClosureCheck(False, "whole space missing")
    for m in sorted(masks):
        if full & ~m not in masks:
            e = Event(space, m)
            return ClosureCheck(False, f"complement of {e} missing", (e,))
    ordered = sorted(masks)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a | b not in masks:
                pair = (Event(space, a), Event(space, b))
                return ClosureCheck(False, f"union of {pair[0]} and {pair[1]} missing", pair)
    return ClosureCheck(True)


def is_sigma_algebra(events: Iterable[Event]) -> ClosureCheck:
    """Check that ``events`` contains the empty set and the whole space and is
    closed under complement and pairwise union.

    Returns a :class:`ClosureCheck`; when it is false, ``reason`` and
    ``witness`` name one violating event or pair.

    Raises
    ------
    MixedSpaces
        If the events do not all share one sample space.
    """
    events = list(events)
    if not events:
        return ClosureCheck(False, "family is empty")
    space = events[0].space
    for e in events[1:]:
        _same_space(space, e.space)
    return _closure(space, frozenset(e.mask for e in events))


def atoms_of(sigma: Union[SigmaAlgebra, Sequence[Event]], check: bool = True) -> Partition:
    """Minimal nonempty events of an explicit finite sigma-algebra.

    The atom holding outcome ``i`` is the intersection of every event that
    contains ``i``; these intersections are the minimal elements.
    """
    if isinstance(sigma, SigmaAlgebra):
        space, masks = sigma.space, sigma.masks
        if check:
            result = _closure(space, masks)
            if not result:
                raise NotASigmaAlgebra(result.reason, result.witness)
    else:
        events = list(sigma)
        if not events:
            raise NotASigmaAlgebra("family is empty")
        if check:
            result = is_sigma_algebra(events)
            if not result:
                raise NotASigmaAlgebra(result.reason, result.witness)
        space = events[0].space
        masks = frozenset(e.mask for e in events)

    n = len(space)
    atoms = []
    covered = 0
    for i in range(n):
        if covered >> i & 1:
            continue
        bit = 1 << i
        atom = space.full
        for m in masks:
            if m & bit:
                atom &= m
        atoms.append(atom)
        covered |= atom
    if check:
        return Partition(space, atoms)
    return Partition._trusted(space, atoms)


def generate_sigma(atoms: Partition, bound: int | None = None) -> SigmaAlgebra:
    """All ``2**k`` unions of the ``k`` blocks of ``atoms``.

    Raises :class:`TooManyAtoms` when ``k`` exceeds the enumeration bound
    (see :func:`max_atoms`).
    """
    limit = max_atoms(bound)
    k = len(atoms.masks)
    if k > limit:
        raise TooManyAtoms(f"{k} atoms exceed the enumeration bound of {limit} (2**{limit} events)")
    unions = [0]
    for b in atoms.masks:
        unions += [u | b for u in unions]
    return SigmaAlgebra(atoms.space, unions, check=False)


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    _same_space(p.space, q.space)
    return all(
        b & ~q.masks[q.block_index(_lowest(b).bit_length() - 1)] == 0 for b in p.masks
    )


def meet(p: Partition, q: Partition) -> Partition:
    """Coarsest common refinement: nonempty pairwise intersections."""
    _same_space(p.space, q.space)
    return Partition._trusted(p.space, [a & b for a in p.masks for b in q.masks if a & b])


def join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening: connected components of the block-overlap graph."""
    _same_space(p.space, q.space)
    merged: list[int] = list(p.masks)
    for b in q.masks:
        keep = []
        acc = b
        for m in merged:
            if m & acc:
                acc |= m
            else:
                keep.append(m)
        keep.append(acc)
        merged = keep
    return Partition._trusted(p.space, merged)
