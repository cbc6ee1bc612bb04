"""Seeded random filtrations and stopping times for property-based checks.

All randomness comes from :class:`SplitMix64`, a 64-bit generator fully
determined by its published constants, so an instance can be rebuilt from
its :class:`GenConfig` in any language.  Each generator function draws from
its own stream (the seed mixed with a fixed per-function salt), so adding
draws in one place does not shift the others.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

from .errors import BadConfig, InvalidFiltration, NotAStoppingTime
from .events import Partition, SampleSpace, iter_bits
from .filtration import (
    INF,
    Filtration,
    StoppingTime,
    is_stopping_time,
    validate_filtration,
)

__all__ = [
    "SplitMix64",
    "GenConfig",
    "PRNG_ALGORITHM",
    "gen_filtration",
    "gen_stopping_time",
    "gen_non_stopping_time",
    "gen_instance",
    "gen_partition",
]

PRNG_ALGORITHM = "splitmix64"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_SALT_FILTRATION = 0x46494C54  # "FILT"
_SALT_TAU = 0x54415500  # "TAU"
_SALT_PERTURB = 0x50455254  # "PERT"
_SALT_SIZES = 0x53495A45  # "SIZE"
_SALT_PARTITION = 0x50415254  # "PART"


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 (Steele, Lea and Flood): state += 0x9E3779B97F4A7C15, then
    mix with multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB and
    shifts 30, 27, 31."""

    algorithm = PRNG_ALGORITHM

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    @classmethod
    def stream(cls, seed: int, salt: int) -> "SplitMix64":
        return cls(_mix((seed ^ salt) & _MASK64))

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        return _mix(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def chance(self, p: float) -> bool:
        return self.random() < p

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection, for any ``n >= 1``."""
        if n < 1:
            raise ValueError("n must be positive")
        if n > 1 << 64:
            bits = n.bit_length()
            while True:
                x = 0
                for _ in range((bits + 63) // 64):
                    x = (x << 64) | self.next_u64()
                x >>= (-bits) % 64
                if x < n:
                    return x
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


@dataclass(frozen=True)
class GenConfig:
    """Parameters for random instances.

    ``split_prob`` is the chance that a block of two or more outcomes
    splits at each time step, ``stop_prob`` the chance that a block nobody
    has stopped on yet stops at the current time, and ``infinity_prob`` the
    chance that a block still running after the last time never stops.
    """

    seed: int = 0
    n_outcomes: int = 10
    n_times: int = 5
    split_prob: float = 0.6
    stop_prob: float = 0.2
    infinity_prob: float = 0.25

    def validate(self) -> "GenConfig":
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= _MASK64:
            raise BadConfig(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        for name in ("n_outcomes", "n_times"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise BadConfig(f"{name} must be a positive integer, got {v!r}")
        for name in ("split_prob", "stop_prob", "infinity_prob"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise BadConfig(f"{name} must lie in [0, 1], got {v!r}")
        return self

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed & _MASK64)

    def to_dict(self) -> dict:
        return asdict(self)


def _split(rng: SplitMix64, block: int) -> list[int]:
    members = list(iter_bits(block))
    m = len(members)
    # uniform nonempty proper subset picks one side
    side = 1 + rng.randbelow((1 << m) - 2)
    left = 0
    for k, i in enumerate(members):
        if side >> k & 1:
            left |= 1 << i
    return [left, block & ~left]


def _refine(rng: SplitMix64, part: Partition, split_prob: float) -> Partition:
    out = []
    for b in part.masks:
        if b.bit_count() >= 2 and rng.chance(split_prob):
            out.extend(_split(rng, b))
        else:
            out.append(b)
    return Partition._trusted(part.space, out)


def gen_partition(seed: int, n: int, split_prob: float = 0.5, rounds: int = 3) -> Partition:
    """Random partition of ``n`` outcomes by repeated random bipartition."""
    rng = SplitMix64.stream(seed, _SALT_PARTITION)
    space = SampleSpace.of_size(n)
    part = Partition.trivial(space)
    for _ in range(rounds):
        part = _refine(rng, part, split_prob)
    return part


def gen_filtration(cfg: GenConfig) -> Filtration:
    """Random refining chain over times ``0 .. n_times - 1``.

    The first level is the trivial partition; each later level, and then
    the terminal partition, splits each block of the previous one in two
    with probability ``split_prob``.
    """
    cfg.validate()
    rng = SplitMix64.stream(cfg.seed, _SALT_FILTRATION)
    space = SampleSpace.of_size(cfg.n_outcomes)
    levels = [Partition.trivial(space)]
    for _ in range(cfg.n_times - 1):
        levels.append(_refine(rng, levels[-1], cfg.split_prob))
    terminal = _refine(rng, levels[-1], cfg.split_prob)
    return Filtration(space, range(cfg.n_times), levels, terminal)


def gen_stopping_time(cfg: GenConfig, f: Filtration) -> StoppingTime:
    """Random stopping time for ``f``, valid by construction.

    Times are visited in order; a block of ``A_t`` none of whose outcomes
    has stopped yet stops there (as a whole) with probability
    ``stop_prob``.  Blocks of the last level still running afterwards get
    ``INF`` with probability ``infinity_prob`` and the last time otherwise.
    """
    cfg.validate()
    report = validate_filtration(f)
    if not report:
        raise InvalidFiltration(report)
    rng = SplitMix64.stream(cfg.seed, _SALT_TAU)
    values: list = [None] * len(f.space)
    done = 0
    for t, part in f.items():
        for b in part.masks:
            if b & done == 0 and rng.chance(cfg.stop_prob):
                for i in iter_bits(b):
                    values[i] = t
                done |= b
    last = f.axis.last
    for b in f.levels[-1].masks:
        if b & done == 0:
            t = INF if rng.chance(cfg.infinity_prob) else last
            for i in iter_bits(b):
                values[i] = t
    return StoppingTime(f.space, values)


def gen_non_stopping_time(cfg: GenConfig, f: Filtration, tau: StoppingTime | None = None):
    """Perturb a valid stopping time into one that fails the check.

    One outcome ``w`` is moved to an earlier time ``s < tau(w)`` where its
    ``A_s`` block has another member; then ``{tau <= s}`` cuts that block.
    Returns ``None`` when no such move exists (e.g. every level is
    discrete).
    """
    if tau is None:
        tau = gen_stopping_time(cfg, f)
    else:
        cfg.validate()
        check = is_stopping_time(tau, f)
        if not check:
            raise NotAStoppingTime(check)
    candidates = []
    for i, v in enumerate(tau.values):
        for t, part in f.items():
            if t >= v:
                break
            if part.masks[part.block_index(i)].bit_count() >= 2:
                candidates.append((i, t))
    if not candidates:
        return None
    rng = SplitMix64.stream(cfg.seed, _SALT_PERTURB)
    i, t = candidates[rng.randbelow(len(candidates))]
    return tau.replace(i, t)


def gen_instance(cfg: GenConfig, vary_sizes: bool = False) -> tuple[Filtration, StoppingTime, GenConfig]:
    """Filtration and stopping time for ``cfg``.

    With ``vary_sizes`` the sizes in ``cfg`` act as maxima and the actual
    ones are drawn from the seed; the effective config is returned.
    """
    cfg.validate()
    if vary_sizes:
        rng = SplitMix64.stream(cfg.seed, _SALT_SIZES)
        cfg = replace(cfg, n_outcomes=1 + rng.randbelow(cfg.n_outcomes), n_times=1 + rng.randbelow(cfg.n_times))
    f = gen_filtration(cfg)
    return f, gen_stopping_time(cfg, f), cfg
