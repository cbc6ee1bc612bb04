"""JSON instance files: sample space, time axis, filtration, terminal atoms, stopping time.

Example document::

    {
      "omega": ["w1", "w2", "w3"],
      "times": [0, 1],
      "filtration": {"0": [["w1", "w2", "w3"]], "1": [["w1"], ["w2", "w3"]]},
      "terminal": [["w1"], ["w2"], ["w3"]],
      "tau": {"w1": 1, "w2": "inf", "w3": "inf"}
    }

``terminal`` is optional (defaults to the last level), as is ``tau``.
``meta`` may carry free-form provenance such as the generator config.
Times are read as exact decimals; only integers and terminating decimals
are accepted.
"""

from __future__ import annotations

import json
import warnings
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .errors import (
    InstanceError,
    NonRefining,
    NotAPartition,
    ParseError,
    UnknownKey,
    UnknownLabel,
)
from .events import Partition, SampleSpace
from .filtration import INF, Filtration, StoppingTime, validate_filtration

__all__ = [
    "parse_instance",
    "parse_document",
    "serialize_instance",
    "dump_instance",
    "load_fixture",
    "fixture_path",
    "FIXTURES",
    "time_to_json",
]

KNOWN_KEYS = ("omega", "times", "filtration", "terminal", "tau", "meta")
FIXTURES = ("fig1",)


def fixture_path(name: str):
    if name not in FIXTURES:
        raise KeyError(f"no bundled fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("stopsigma").joinpath("data", f"{name}.json")


def load_fixture(name: str = "fig1"):
    """Filtration and stopping time of a bundled fixture."""
    return parse_instance(fixture_path(name).read_text(encoding="utf-8"))


def _reject_constant(name):
    raise ValueError(f"{name} is not allowed")


def _exact_time(value, where: str) -> Fraction:
    if isinstance(value, float):
        # decoded by someone else's parser; trust its shortest repr
        value = Decimal(repr(value))
    if isinstance(value, bool) or not isinstance(value, (int, Decimal)):
        raise InstanceError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, Decimal) and not value.is_finite():
        raise InstanceError(f"{where}: time must be finite")
    return Fraction(value)


def _key_time(key: str) -> Fraction:
    try:
        d = Decimal(key.strip())
    except InvalidOperation:
        raise InstanceError(f"filtration key {key!r} is not a number") from None
    if not d.is_finite():
        raise InstanceError(f"filtration key {key!r} is not finite")
    return Fraction(d)


def _load_text(source) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str) and not source.lstrip().startswith("{"):
        return Path(source).read_text(encoding="utf-8")
    if hasattr(source, "read_text"):
        return source.read_text(encoding="utf-8")
    return source


def parse_instance(source: Union[str, Path, dict], strict: bool = True):
    """Read an instance into ``(filtration, tau)``; ``tau`` may be ``None``.

    ``source`` is a path, JSON text or an already-decoded dict.  The
    filtration is validated (a non-refining chain raises
    :class:`NonRefining`); the stopping time is only checked for totality,
    its validity is left to :func:`~stopsigma.filtration.is_stopping_time`.

    With ``strict=False`` unknown top-level keys produce a warning instead
    of :class:`UnknownKey`.
    """
    f, tau, _ = parse_document(source, strict=strict)
    return f, tau


def parse_document(source, strict: bool = True):
    """Like :func:`parse_instance` but also returns the ``meta`` dict."""
    if isinstance(source, dict):
        doc = source
    else:
        text = _load_text(source)
        try:
            doc = json.loads(text, parse_float=Decimal, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")

    unknown = [k for k in doc if k not in KNOWN_KEYS]
    if unknown:
        msg = f"unknown keys: {', '.join(sorted(unknown))}"
        if strict:
            raise UnknownKey(msg)
        warnings.warn(msg, stacklevel=2)
    for key in ("omega", "times", "filtration"):
        if key not in doc:
            raise InstanceError(f"missing required key {key!r}")

    omega = doc["omega"]
    if not isinstance(omega, list) or not all(isinstance(w, str) for w in omega):
        raise InstanceError("'omega' must be a list of strings")
    try:
        space = SampleSpace(omega)
    except ValueError as exc:
        raise InstanceError(f"omega: {exc}") from None

    raw_times = doc["times"]
    if not isinstance(raw_times, list) or not raw_times:
        raise InstanceError("'times' must be a nonempty list of numbers")
    times = [_exact_time(t, "times") for t in raw_times]
    for a, b in zip(times, times[1:]):
        if not a < b:
            raise InstanceError("'times' must be strictly increasing")

    def blocks(raw, where):
        if not isinstance(raw, list):
            raise InstanceError(f"{where}: expected a list of blocks")
        masks = []
        for block in raw:
            if not isinstance(block, list):
                raise InstanceError(f"{where}: each block must be a list of labels")
            mask = 0
            for label in block:
                if not isinstance(label, str) or label not in space:
                    raise UnknownLabel(label, where)
                bit = 1 << space.index(label)
                if mask & bit:
                    raise NotAPartition(f"{where}: label {label!r} repeated in a block", where)
                mask |= bit
            masks.append(mask)
        try:
            return Partition(space, masks)
        except NotAPartition as exc:
            raise NotAPartition(f"{where}: {exc}", where) from None

    filt = doc["filtration"]
    if not isinstance(filt, dict):
        raise InstanceError("'filtration' must map times to lists of blocks")
    by_time = {}
    for key, raw in filt.items():
        t = _key_time(key)
        if t in by_time:
            raise InstanceError(f"filtration key {key!r} repeats time {t}")
        by_time[t] = (key, raw)
    if set(by_time) != set(times):
        extra = sorted(set(by_time) - set(times))
        missing = sorted(set(times) - set(by_time))
        raise InstanceError(
            "filtration keys must match 'times' exactly"
            + (f"; missing {[str(m) for m in missing]}" if missing else "")
            + (f"; unexpected {[str(e) for e in extra]}" if extra else "")
        )
    levels = [blocks(by_time[t][1], f"level {by_time[t][0]}") for t in times]
    terminal = blocks(doc["terminal"], "terminal") if doc.get("terminal") is not None else None
    f = Filtration(space, times, levels, terminal)

    report = validate_filtration(f)
    if not report:
        s, t = report.pair
        raise NonRefining(_show(s), _show(t), report.block)

    tau = None
    if doc.get("tau") is not None:
        raw_tau = doc["tau"]
        if not isinstance(raw_tau, dict):
            raise InstanceError("'tau' must map labels to times")
        for label in raw_tau:
            if label not in space:
                raise UnknownLabel(label, "tau")
        missing = [w for w in omega if w not in raw_tau]
        if missing:
            raise InstanceError(f"tau undefined on {missing}")
        values = []
        for w in omega:
            v = raw_tau[w]
            if isinstance(v, str):
                if v != "inf":
                    raise InstanceError(f"tau[{w!r}]: expected a number or \"inf\", got {v!r}")
                values.append(INF)
            else:
                t = _exact_time(v, f"tau[{w!r}]")
                if t not in f.axis:
                    raise InstanceError(f"tau[{w!r}] = {_show(t)} is not on the time axis")
                values.append(t)
        tau = StoppingTime(space, values)

    meta = doc.get("meta") or {}
    return f, tau, meta


def _show(t):
    return "inf" if t == INF else time_to_json(t)


def time_to_json(t: Fraction) -> str:
    """Exact JSON number text for a rational time.

    Raises ValueError for non-terminating decimals such as 1/3.
    """
    t = Fraction(t)
    if t.denominator == 1:
        return str(t.numerator)
    den = t.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"time {t} has no finite decimal representation")
    digits = max(twos, fives)
    scaled = t * 10**digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _json_time(t: Fraction):
    text = time_to_json(t)
    return int(text) if "." not in text else Decimal(text)


def serialize_instance(f: Filtration, tau: StoppingTime | None = None, meta: dict | None = None) -> dict[str, Any]:
    """Plain-dict form of an instance.

    Integral times become ints and the rest exact :class:`~decimal.Decimal`
    values; :func:`dump_instance` writes them as JSON numbers.
    """
    doc: dict[str, Any] = {
        "omega": list(f.space.outcomes),
        "times": [_json_time(t) for t in f.axis],
        "filtration": {time_to_json(t): p.to_labels() for t, p in f.items()},
        "terminal": f.terminal.to_labels(),
    }
    if tau is not None:
        if tau.space != f.space:
            raise ValueError("stopping time lives on a different sample space")
        doc["tau"] = {w: ("inf" if v == INF else _json_time(v)) for w, v in zip(f.space.outcomes, tau.values)}
    if meta:
        doc["meta"] = meta
    return doc


def _dumps(x) -> str:
    if isinstance(x, Decimal):
        return format(x, "f")
    return json.dumps(x, ensure_ascii=False)


def dump_instance(f: Filtration, tau: StoppingTime | None = None, meta: dict | None = None) -> str:
    """JSON text of an instance, one top-level key per line, with exact times."""
    doc = serialize_instance(f, tau, meta)
    parts = [
        f'  "omega": {_dumps(doc["omega"])}',
        f'  "times": [{", ".join(_dumps(t) for t in doc["times"])}]',
    ]
    levels = [f"    {_dumps(k)}: {_dumps(v)}" for k, v in doc["filtration"].items()]
    parts.append('  "filtration": {\n' + ",\n".join(levels) + "\n  }")
    parts.append(f'  "terminal": {_dumps(doc["terminal"])}')
    if "tau" in doc:
        items = [f"{_dumps(w)}: {_dumps(v)}" for w, v in doc["tau"].items()]
        parts.append('  "tau": {' + ", ".join(items) + "}")
    if "meta" in doc:
        parts.append(f'  "meta": {_dumps(doc["meta"])}')
    return "{\n" + ",\n".join(parts) + "\n}\n"
