"""Stopping-time sigma-algebras on finite filtered spaces.

The atoms of ``F_tau`` are computed constructively (:func:`stopped_atoms`)
and checked against a brute-force enumeration of the defining condition
(:func:`stopped_sigma_bruteforce`).
"""

__version__ = "0.1.0"

from .errors import (
    BadConfig,
    EmptySpace,
    InstanceError,
    InvalidFiltration,
    MixedSpaces,
    NonRefining,
    NotAPartition,
    NotASigmaAlgebra,
    NotAStoppingTime,
    ParseError,
    StopSigmaError,
    TimeNotOnAxis,
    TooManyAtoms,
    UnknownKey,
    UnknownLabel,
)
from .events import (
    Event,
    Partition,
    SampleSpace,
    SigmaAlgebra,
    atoms_of,
    generate_sigma,
    is_sigma_algebra,
    join,
    meet,
    refines,
)
from .filtration import (
    INF,
    Filtration,
    StoppingProcess,
    StoppingTime,
    TimeAxis,
    is_adapted,
    is_stopping_time,
    level_set,
    sigma_of_tau,
    stopping_process,
    validate_filtration,
)
from .generate import GenConfig, SplitMix64, gen_filtration, gen_non_stopping_time, gen_stopping_time
from .instance import dump_instance, load_fixture, parse_instance, serialize_instance
from .render import render_ascii, render_dot
from .stopped import (
    StoppedResult,
    check_structure,
    stopped_atoms,
    stopped_sigma_bruteforce,
    verify_prop3,
    verify_theorem1,
)

__all__ = [
    "BadConfig",
    "EmptySpace",
    "Event",
    "Filtration",
    "GenConfig",
    "INF",
    "InstanceError",
    "InvalidFiltration",
    "MixedSpaces",
    "NonRefining",
    "NotAPartition",
    "NotASigmaAlgebra",
    "NotAStoppingTime",
    "ParseError",
    "Partition",
    "SampleSpace",
    "SigmaAlgebra",
    "SplitMix64",
    "StopSigmaError",
    "StoppedResult",
    "StoppingProcess",
    "StoppingTime",
    "TimeAxis",
    "TimeNotOnAxis",
    "TooManyAtoms",
    "UnknownKey",
    "UnknownLabel",
    "atoms_of",
    "check_structure",
    "dump_instance",
    "gen_filtration",
    "gen_non_stopping_time",
    "gen_stopping_time",
    "generate_sigma",
    "is_adapted",
    "is_sigma_algebra",
    "is_stopping_time",
    "join",
    "level_set",
    "load_fixture",
    "meet",
    "parse_instance",
    "refines",
    "render_ascii",
    "render_dot",
    "serialize_instance",
    "sigma_of_tau",
    "stopped_atoms",
    "stopped_sigma_bruteforce",
    "stopping_process",
    "validate_filtration",
    "verify_prop3",
    "verify_theorem1",
]
