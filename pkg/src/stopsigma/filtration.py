"""Filtrations over a finite time axis, stopping times and stopping processes.

A filtration is stored through its atoms: one :class:`Partition` per time
point (``A_t``) and a terminal partition standing for the sigma-algebra at
infinity.  Time points are exact rationals; the symbol for infinity is
:data:`INF` (``math.inf``), which compares greater than every time point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import MixedSpaces, TimeNotOnAxis
from .events import Event, Partition, SampleSpace, refines

__all__ = [
    "INF",
    "as_time",
    "format_time",
    "TimeAxis",
    "Filtration",
    "FiltrationReport",
    "StoppingTime",
    "StoppingTimeCheck",
    "StoppingProcess",
    "AdaptednessCheck",
    "validate_filtration",
    "is_stopping_time",
    "level_set",
    "sigma_of_tau",
    "stopping_process",
    "is_adapted",
]

INF = math.inf

Time = Union[Fraction, float]


def as_time(value, allow_inf: bool = True) -> Time:
    """Normalise ``value`` to an exact time point (``Fraction``) or :data:`INF`.

    Accepts ints, Fractions, Decimals and numeric strings (``"1/3"``,
    ``"0.25"``, ``"inf"``). Finite floats are rejected: ``{tau <= t}`` has
    to be decided exactly.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not time points")
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity", "∞"):
        value = INF
    if isinstance(value, float):
        if value == INF:
            if allow_inf:
                return INF
            raise ValueError("infinity is not allowed here")
        if math.isnan(value) or math.isinf(value):
            raise ValueError(f"{value!r} is not a time point")
        raise TypeError(f"float time {value!r} is not exact; pass an int, Fraction, Decimal or string")
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"time {value} is not finite")
        return Fraction(value)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a time point")


def format_time(t: Time) -> str:
    if t == INF:
        return "inf"
    if t.denominator == 1:
        return str(t.numerator)
    return f"{t.numerator}/{t.denominator}"


class TimeAxis:
    """Strictly increasing, nonempty finite sequence of rational time points."""

    __slots__ = ("times", "_pos")

    def __init__(self, times: Iterable):
        times = tuple(as_time(t, allow_inf=False) for t in times)
        if not times:
            raise ValueError("a time axis needs at least one time point")
        for a, b in zip(times, times[1:]):
            if not a < b:
                raise ValueError(f"time axis must be strictly increasing ({format_time(a)} >= {format_time(b)})")
        self.times = times
        self._pos = {t: i for i, t in enumerate(times)}

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return iter(self.times)

    def __getitem__(self, i):
        return self.times[i]

    def __contains__(self, t):
        return t in self._pos

    def __eq__(self, other):
        if not isinstance(other, TimeAxis):
            return NotImplemented
        return self.times == other.times

    def __hash__(self):
        return hash(self.times)

    def __repr__(self):
        return f"TimeAxis([{', '.join(format_time(t) for t in self.times)}])"

    def position(self, t) -> int:
        try:
            return self._pos[t]
        except (KeyError, TypeError):
            raise TimeNotOnAxis(f"time {t!r} is not on the axis") from None

    @property
    def first(self) -> Fraction:
        return self.times[0]

    @property
    def last(self) -> Fraction:
        return self.times[-1]

    def with_infinity(self) -> tuple:
        return self.times + (INF,)


class Filtration:
    """Refining chain of partitions ``A_t`` over a time axis plus a terminal partition.

    Only structural consistency (one partition per time point, all on the
    same space) is enforced at construction.  Whether the chain actually
    refines is reported by :func:`validate_filtration`.

    Parameters
    ----------
    space : SampleSpace
    times : iterable of time points
    levels : mapping time -> Partition, or a sequence aligned with ``times``
    terminal : Partition, optional
        Atoms of the sigma-algebra at infinity; defaults to the last level.
    """

    __slots__ = ("space", "axis", "levels", "terminal")

    def __init__(self, space: SampleSpace, times, levels, terminal: Partition | None = None):
        axis = times if isinstance(times, TimeAxis) else TimeAxis(times)
        if isinstance(levels, Mapping):
            by_time = {as_time(k, allow_inf=False): v for k, v in levels.items()}
            if set(by_time) != set(axis.times):
                raise ValueError("filtration levels must cover exactly the time axis")
            ordered = tuple(by_time[t] for t in axis)
        else:
            ordered = tuple(levels)
            if len(ordered) != len(axis):
                raise ValueError(f"expected {len(axis)} levels, got {len(ordered)}")
        if terminal is None:
            terminal = ordered[-1]
        for p in ordered + (terminal,):
            if not isinstance(p, Partition):
                raise TypeError(f"levels must be Partition objects, got {type(p).__name__}")
            if p.space != space:
                raise MixedSpaces("filtration level on a different sample space")
        self.space = space
        self.axis = axis
        self.levels = ordered
        self.terminal = terminal

    @property
    def times(self) -> tuple:
        return self.axis.times

    def level(self, t) -> Partition:
        """``A_t``; ``t = INF`` gives the terminal partition."""
        if t == INF:
            return self.terminal
        return self.levels[self.axis.position(t)]

    def items(self):
        return zip(self.axis.times, self.levels)

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        return (
            self.space == other.space
            and self.axis == other.axis
            and self.levels == other.levels
            and self.terminal == other.terminal
        )

    def __hash__(self):
        return hash((self.space, self.axis, self.levels, self.terminal))

    def __repr__(self):
        lv = ", ".join(f"{format_time(t)}: {p}" for t, p in self.items())
        return f"Filtration({lv}; inf: {self.terminal})"


@dataclass(frozen=True)
class FiltrationReport:
    """Result of :func:`validate_filtration`.

    On failure ``pair`` is ``(s, t)`` with ``A_t`` failing to refine ``A_s``
    (``t`` is ``INF`` for the terminal partition) and ``block`` is a block of
    ``A_t`` not contained in any block of ``A_s``.
    """

    ok: bool
    pair: tuple | None = None
    block: Event | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "filtration is valid"
        s, t = self.pair
        return f"level {format_time(t)} does not refine level {format_time(s)}: block {self.block} straddles"


def _straddler(fine: Partition, coarse: Partition) -> int:
    for b in fine.masks:
        low = b & -b
        owner = coarse.masks[coarse.block_index(low.bit_length() - 1)]
        if b & ~owner:
            return b
    return 0


def validate_filtration(f: Filtration) -> FiltrationReport:
    """Check ``A_s`` is refined by ``A_t`` for ``s < t`` and by the terminal partition."""
    chain = list(f.items()) + [(INF, f.terminal)]
    for (s, coarse), (t, fine) in zip(chain, chain[1:]):
        if not refines(fine, coarse):
            return FiltrationReport(False, (s, t), Event(f.space, _straddler(fine, coarse)))
    return FiltrationReport(True)


class StoppingTime:
    """A map from outcomes to ``T ∪ {INF}``.

    Whether it actually is a stopping time for some filtration is decided
    by :func:`is_stopping_time`; construction only checks totality.
    """

    __slots__ = ("space", "values", "_levels")

    def __init__(self, space: SampleSpace, values: Union[Sequence, Mapping]):
        if isinstance(values, Mapping):
            missing = [w for w in space.outcomes if w not in values]
            if missing:
                raise ValueError(f"stopping time undefined on {missing}")
            extra = [w for w in values if w not in space]
            if extra:
                raise ValueError(f"stopping time given for unknown outcomes {extra}")
            values = [values[w] for w in space.outcomes]
        values = tuple(as_time(v) for v in values)
        if len(values) != len(space):
            raise ValueError(f"expected {len(space)} values, got {len(values)}")
        self.space = space
        self.values = values
        levels: dict = {}
        for i, v in enumerate(values):
            levels[v] = levels.get(v, 0) | (1 << i)
        self._levels = levels

    @classmethod
    def constant(cls, space: SampleSpace, t) -> "StoppingTime":
        return cls(space, [t] * len(space))

    def __call__(self, outcome: Union[int, str]):
        i = self.space.index(outcome) if isinstance(outcome, str) else outcome
        return self.values[i]

    def __eq__(self, other):
        if not isinstance(other, StoppingTime):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self):
        return hash((self.space, self.values))

    def __repr__(self):
        body = ", ".join(f"{w}: {format_time(v)}" for w, v in zip(self.space.outcomes, self.values))
        return f"StoppingTime({{{body}}})"

    def replace(self, outcome: Union[int, str], t) -> "StoppingTime":
        i = self.space.index(outcome) if isinstance(outcome, str) else outcome
        vals = list(self.values)
        vals[i] = t
        return StoppingTime(self.space, vals)

    def _level_mask(self, t) -> int:
        return self._levels.get(t, 0)

    def _le_mask(self, t) -> int:
        out = 0
        for v, m in self._levels.items():
            if v <= t:
                out |= m
        return out

    def stopped_by(self, t) -> Event:
        """The event ``{tau <= t}``."""
        return Event(self.space, self._le_mask(t))


def _check_space(tau: StoppingTime, f: Filtration) -> None:
    if tau.space != f.space:
        raise MixedSpaces("stopping time and filtration live on different sample spaces")


def _check_on_axis(tau: StoppingTime, f: Filtration) -> None:
    for v in tau._levels:
        if v != INF and v not in f.axis:
            raise TimeNotOnAxis(f"stopping time takes value {format_time(v)}, which is not on the axis")


@dataclass(frozen=True)
class StoppingTimeCheck:
    """Result of :func:`is_stopping_time`.

    On failure ``time`` is the smallest ``t`` whose ``{tau <= t}`` is not a
    union of ``A_t`` blocks, ``event`` is that ``{tau <= t}`` and ``block``
    the ``A_t`` block it cuts.
    """

    ok: bool
    time: object = None
    event: Event | None = None
    block: Event | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid stopping time"
        return (
            f"not a stopping time: {{tau <= {format_time(self.time)}}} = {self.event} "
            f"splits block {self.block} of level {format_time(self.time)}"
        )


def is_stopping_time(tau: StoppingTime, f: Filtration) -> StoppingTimeCheck:
    """Decide whether ``{tau <= t}`` lies in ``F_t`` for every ``t`` on the axis.

    The value ``INF`` needs no check of its own: ``{tau = INF}`` is the
    complement of ``{tau <= max T}``.
    """
    _check_space(tau, f)
    _check_on_axis(tau, f)
    for t, part in f.items():
        le = tau._le_mask(t)
        cut = part._split_block(le)
        if cut:
            return StoppingTimeCheck(False, t, Event(f.space, le), Event(f.space, cut))
    return StoppingTimeCheck(True)


def level_set(tau: StoppingTime, t, axis: Union[TimeAxis, Filtration, None] = None) -> Event:
    """The event ``{tau = t}``.

    ``t`` must be a time point of ``axis`` (a :class:`TimeAxis` or the
    filtration's axis, when given) or ``INF``.
    """
    if isinstance(axis, Filtration):
        _check_space(tau, axis)
        axis = axis.axis
    if t != INF:
        try:
            t = as_time(t, allow_inf=False)
        except (TypeError, ValueError) as exc:
            raise TimeNotOnAxis(str(exc)) from None
        if axis is not None and t not in axis:
            raise TimeNotOnAxis(f"time {format_time(t)} is not on the axis")
    return Event(tau.space, tau._level_mask(t))


def sigma_of_tau(tau: StoppingTime, f: Filtration | None = None) -> Partition:
    """Atoms of the sigma-algebra generated by ``tau``: its nonempty level sets."""
    if f is not None:
        _check_space(tau, f)
    return Partition._trusted(tau.space, tau._levels.values())


class StoppingProcess:
    """A 0/1 process on a time axis, stored by its zero sets.

    ``zero_sets[k]`` is the event ``{X_t = 0}`` for the ``k``-th time point.
    """

    __slots__ = ("space", "axis", "zero_sets")

    def __init__(self, space: SampleSpace, axis: TimeAxis, zero_sets: Sequence):
        zs = []
        for z in zero_sets:
            if isinstance(z, Event):
                if z.space != space:
                    raise MixedSpaces("zero set on a different sample space")
                zs.append(z.mask)
            else:
                zs.append(space.event(z).mask)
        if len(zs) != len(axis):
            raise ValueError(f"expected {len(axis)} slices, got {len(zs)}")
        self.space = space
        self.axis = axis
        self.zero_sets = tuple(zs)

    @classmethod
    def constant(cls, space: SampleSpace, axis: TimeAxis, value: int) -> "StoppingProcess":
        z = 0 if value else space.full
        return cls(space, axis, [Event(space, z)] * len(axis))

    def value(self, t, outcome: Union[int, str]) -> int:
        i = self.space.index(outcome) if isinstance(outcome, str) else outcome
        return 0 if self.zero_sets[self.axis.position(t)] >> i & 1 else 1

    def path(self, outcome: Union[int, str]) -> tuple[int, ...]:
        return tuple(self.value(t, outcome) for t in self.axis)

    def zeros(self, t) -> Event:
        return Event(self.space, self.zero_sets[self.axis.position(t)])

    def is_monotone(self) -> bool:
        """Once a path reaches 0 it stays there."""
        return all(a & ~b == 0 for a, b in zip(self.zero_sets, self.zero_sets[1:]))

    def __eq__(self, other):
        if not isinstance(other, StoppingProcess):
            return NotImplemented
        return (self.space, self.axis, self.zero_sets) == (other.space, other.axis, other.zero_sets)

    def __hash__(self):
        return hash((self.space, self.axis, self.zero_sets))

    def table(self) -> list[list[int]]:
        """Rows per outcome, columns per time."""
        return [list(self.path(i)) for i in range(len(self.space))]


def stopping_process(tau: StoppingTime, f: Filtration) -> StoppingProcess:
    """The indicator process ``X_t = 1 if tau > t else 0``.

    It drops to 0 exactly at the stopping instant and stays there.
    """
    _check_space(tau, f)
    return StoppingProcess(f.space, f.axis, [Event(f.space, tau._le_mask(t)) for t in f.axis])


@dataclass(frozen=True)
class AdaptednessCheck:
    ok: bool
    time: object = None
    block: Event | None = None

    def __bool__(self):
        return self.ok


def is_adapted(proc: StoppingProcess, f: Filtration) -> AdaptednessCheck:
    """True iff every slice ``{X_t = 0}`` is a union of ``A_t`` blocks."""
    if proc.space != f.space:
        raise MixedSpaces("process and filtration live on different sample spaces")
    if proc.axis != f.axis:
        raise ValueError("process and filtration use different time axes")
    for (t, part), z in zip(f.items(), proc.zero_sets):
        cut = part._split_block(z)
        if cut:
            return AdaptednessCheck(False, t, Event(f.space, cut))
    return AdaptednessCheck(True)
