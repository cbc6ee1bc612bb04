"""Command-line interface.

Exit codes: 0 success, 1 a verified property failed, 2 invalid instance or
usage, 3 stopping time missing or not a stopping time.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import StopSigmaError, TooManyAtoms
from .events import Partition
from .filtration import INF, as_time, format_time, is_stopping_time, sigma_of_tau
from .fuzz import run_fuzz
from .generate import PRNG_ALGORITHM, GenConfig, gen_instance, gen_non_stopping_time
from .instance import FIXTURES, dump_instance, fixture_path, parse_instance
from .render import render_ascii, render_dot
from .stopped import stopped_atoms, verify_prop3, verify_theorem1

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_TAU = 0, 1, 2, 3

log = logging.getLogger("stopsigma")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load(spec: str, strict: bool = True):
    try:
        if spec == "-":
            return parse_instance(sys.stdin.read(), strict=strict)
        path = Path(spec)
        if not path.exists() and spec in FIXTURES:
            return parse_instance(fixture_path(spec).read_text(encoding="utf-8"), strict=strict)
        return parse_instance(path, strict=strict)
    except OSError as exc:
        raise CliError(f"cannot read instance: {exc}", EXIT_INVALID) from None
    except StopSigmaError as exc:
        raise CliError(f"invalid instance: {exc}", EXIT_INVALID) from None


def _need_tau(f, tau, force: bool = False):
    if tau is None:
        raise CliError("instance has no stopping time ('tau')", EXIT_TAU)
    check = is_stopping_time(tau, f)
    if not check and not force:
        raise CliError(str(check), EXIT_TAU)
    return check


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    elif not args.quiet:
        print(text)


def _partition_json(p: Partition):
    return p.to_labels()


def cmd_atoms(args) -> int:
    f, tau = _load(args.instance, strict=not args.lenient)
    payload: dict = {}
    if args.time is not None:
        t = _parse_time_arg(args.time)
        try:
            part = f.level(t)
        except StopSigmaError as exc:
            raise CliError(str(exc), EXIT_INVALID) from None
        payload = {"kind": "level", "time": "inf" if t == INF else format_time(t), "atoms": _partition_json(part)}
        text = str(part)
    elif args.stopped:
        _need_tau(f, tau, force=args.force)
        result = stopped_atoms(tau, f, force=args.force)
        part = result.atoms
        payload = {
            "kind": "stopped",
            "atoms": _partition_json(part),
            "per_time": {
                ("inf" if t == INF else format_time(t)): [list(b.labels) for b in blocks]
                for t, blocks in result.per_time.items()
            },
        }
        if args.force:
            payload["forced"] = True
            payload["warning"] = "computed without the stopping-time check; not guaranteed to be a sigma-algebra"
        text = str(part)
        if args.force and not args.quiet:
            print("warning: --force skips the stopping-time check; result need not be a sigma-algebra", file=sys.stderr)
    else:
        _need_tau(f, tau)
        part = sigma_of_tau(tau, f)
        payload = {"kind": "sigma_tau", "atoms": _partition_json(part)}
        text = str(part)
    _emit(args, text, payload)
    return EXIT_OK


def _parse_time_arg(text: str):
    try:
        return as_time(text)
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad time {text!r}: {exc}", EXIT_INVALID) from None


def cmd_check(args) -> int:
    f, tau = _load(args.instance, strict=not args.lenient)
    if tau is None:
        raise CliError("instance has no stopping time ('tau')", EXIT_TAU)
    st = is_stopping_time(tau, f)
    payload: dict = {"stopping_time": {"ok": st.ok}}
    lines = [f"stopping time: {'PASS' if st else 'FAIL'}"]
    if not st:
        payload["stopping_time"].update(
            {"time": format_time(st.time), "event": list(st.event.labels), "block": list(st.block.labels)}
        )
        lines.append(f"  {st}")
        _emit(args, "\n".join(lines), payload)
        return EXIT_TAU
    try:
        thm = verify_theorem1(tau, f, bound=args.max_atoms)
        prop = verify_prop3(tau, f, bound=args.max_atoms)
    except TooManyAtoms as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    payload["stopped_atoms"] = thm.to_dict()
    payload["sigma_tau_inclusion"] = prop.to_dict()
    lines += thm.lines() + prop.lines()
    n_sig, n_ft = prop.info["sigma_tau_events"], prop.info["f_tau_events"]
    if prop.info["strict"]:
        lines.append(f"note: sigma(tau) is a strict sub-sigma-algebra of F_tau ({n_sig} vs {n_ft} events)")
    elif prop.ok:
        lines.append(f"note: sigma(tau) equals F_tau ({n_ft} events)")
    values = set(tau.values)
    if len(values) == 1:
        (t0,) = values
        result = stopped_atoms(tau, f)
        same = result.atoms == f.level(t0)
        payload["constant_tau"] = {"time": "inf" if t0 == INF else format_time(t0), "equals_level": same}
        where = "F_inf" if t0 == INF else f"F_{format_time(t0)}"
        lines.append(f"note: tau is constant, F_tau {'=' if same else '!='} {where}")
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if thm.ok and prop.ok else EXIT_FAIL


def _config_from(args) -> GenConfig:
    cfg = GenConfig(
        seed=args.seed,
        n_outcomes=args.n_outcomes,
        n_times=args.n_times,
        split_prob=args.split_prob,
        stop_prob=args.stop_prob,
        infinity_prob=args.infinity_prob,
    )
    try:
        return cfg.validate()
    except StopSigmaError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None


def cmd_fuzz(args) -> int:
    cfg = _config_from(args)
    if args.iterations < 0:
        raise CliError("--iterations must be nonnegative", EXIT_INVALID)
    if args.iterations == 0:
        print("warning: 0 iterations requested, nothing was checked", file=sys.stderr)
    summary = run_fuzz(
        cfg,
        args.iterations,
        vary_sizes=not args.fixed_sizes,
        mutant=args.inject_mutant,
        dump_dir=args.dump_dir,
        workers=args.workers,
    )
    lines = [f"fuzz: {summary.iterations} iterations, {len(summary.failures)} failures (seed {cfg.seed}, {PRNG_ALGORITHM})"]
    for fail in summary.failures[:20]:
        where = f" -> {fail.dump}" if fail.dump else ""
        lines.append(f"  iteration {fail.iteration} (seed {fail.config.seed}): {'; '.join(fail.messages)}{where}")
    if len(summary.failures) > 20:
        lines.append(f"  ... {len(summary.failures) - 20} more")
    cov = ", ".join(f"{k}={v}" for k, v in summary.coverage.items())
    lines.append(f"coverage: {cov}")
    _emit(args, "\n".join(lines), summary.to_dict())
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_render(args) -> int:
    f, tau = _load(args.instance, strict=not args.lenient)
    if tau is not None:
        _need_tau(f, tau)
    text = render_dot(f, tau) if args.format == "dot" else render_ascii(f, tau)
    if args.json:
        print(json.dumps({"format": args.format, "text": text}, ensure_ascii=False))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = _config_from(args)
    f, tau, eff = gen_instance(cfg, vary_sizes=args.vary_sizes)
    if args.invalid:
        tau = gen_non_stopping_time(eff, f, tau)
        if tau is None:
            raise CliError("no invalid perturbation exists for this instance", EXIT_FAIL)
    meta = {"generator": PRNG_ALGORITHM, "config": eff.to_dict()}
    if args.invalid:
        meta["perturbed"] = True
    text = dump_instance(f, tau, meta)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        if not args.quiet:
            print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--quiet", "-q", action="store_true", default=argparse.SUPPRESS, help="suppress normal output")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="debug logging")

    parser = argparse.ArgumentParser(
        prog="stopsigma",
        description="Stopping-time sigma-algebras on finite filtered spaces.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_arg(p):
        p.add_argument("instance", help=f"instance JSON file, '-' for stdin, or a bundled fixture ({', '.join(FIXTURES)})")
        p.add_argument("--lenient", action="store_true", help="warn instead of failing on unknown keys")

    p = sub.add_parser("atoms", parents=[common], help="print atoms of F_t, F_tau or sigma(tau)")
    instance_arg(p)
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--time", metavar="T", help="atoms of F_T ('inf' for the terminal sigma-algebra)")
    what.add_argument("--stopped", action="store_true", help="atoms of the stopping-time sigma-algebra")
    what.add_argument("--sigma-tau", action="store_true", help="atoms of sigma(tau)")
    p.add_argument("--force", action="store_true", help="with --stopped: skip the stopping-time check")
    p.set_defaults(func=cmd_atoms)

    p = sub.add_parser("check", parents=[common], help="verify the atom characterisation against brute force")
    instance_arg(p)
    p.add_argument("--max-atoms", type=int, default=None, help="enumeration bound (default: $STOPSIGMA_MAX_ATOMS or 20)")
    p.set_defaults(func=cmd_check)

    def gen_flags(p, seed_default):
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--n-outcomes", type=int, default=GenConfig.n_outcomes)
        p.add_argument("--n-times", type=int, default=GenConfig.n_times)
        p.add_argument("--split-prob", type=_probability, default=GenConfig.split_prob)
        p.add_argument("--stop-prob", type=_probability, default=GenConfig.stop_prob)
        p.add_argument("--infinity-prob", type=_probability, default=GenConfig.infinity_prob)

    p = sub.add_parser("fuzz", parents=[common], help="random instances checked against the brute-force oracle")
    gen_flags(p, 42)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--fixed-sizes", action="store_true", help="use n-outcomes/n-times exactly instead of as maxima")
    p.add_argument("--dump-dir", default="fuzz-failures", help="where failing instances are written")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--inject-mutant", choices=["intersects", "lagged-level"], default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("render", parents=[common], help="draw the filtration tree")
    instance_arg(p)
    p.add_argument("--format", choices=["ascii", "dot"], default="ascii")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("gen", parents=[common], help="write a random instance file")
    gen_flags(p, 0)
    p.add_argument("--vary-sizes", action="store_true", help="treat n-outcomes/n-times as maxima")
    p.add_argument("--invalid", action="store_true", help="perturb tau so it is not a stopping time")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("json", "quiet", "verbose"):
        if not hasattr(args, flag):
            setattr(args, flag, False)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except StopSigmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
