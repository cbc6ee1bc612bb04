"""Seeded fuzzing of the stopped sigma-algebra against its brute-force oracle."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import StopSigmaError
from .filtration import INF, is_adapted, is_stopping_time, stopping_process
from .generate import PRNG_ALGORITHM, GenConfig, SplitMix64, gen_instance, gen_non_stopping_time
from .instance import dump_instance
from .stopped import check_structure, stopped_atoms, verify_prop3, verify_theorem1

__all__ = ["FuzzFailure", "FuzzSummary", "iteration_seeds", "run_case", "run_fuzz"]

log = logging.getLogger(__name__)


@dataclass
class FuzzFailure:
    iteration: int
    config: GenConfig
    messages: list[str]
    dump: str | None = None


@dataclass
class FuzzSummary:
    iterations: int
    failures: list[FuzzFailure] = field(default_factory=list)
    coverage: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "failures": [
                {"iteration": f.iteration, "config": f.config.to_dict(), "messages": f.messages, "dump": f.dump}
                for f in self.failures
            ],
            "coverage": self.coverage,
            "prng": PRNG_ALGORITHM,
        }


def iteration_seeds(seed: int, iterations: int) -> list[int]:
    rng = SplitMix64(seed)
    return [rng.next_u64() for _ in range(iterations)]


def run_case(cfg: GenConfig, vary_sizes: bool = True, mutant: str | None = None):
    """Generate one instance and run every check on it.

    Returns ``(messages, coverage_flags, instance)`` where ``messages`` is
    empty when everything passed.
    """
    f, tau, eff = gen_instance(cfg, vary_sizes=vary_sizes)
    rule = mutant or "subset"
    messages: list[str] = []
    flags: dict[str, bool] = {}
    try:
        thm = verify_theorem1(tau, f, rule=rule)
        messages += [f"atoms {c.name}" for c in thm.failures()]

        prop = verify_prop3(tau, f)
        messages += [f"sigma(tau) {c.name}" for c in prop.failures()]
        flags["strict_prop3"] = bool(prop.info["strict"])

        result = stopped_atoms(tau, f, rule=rule)
        structure = check_structure(result, tau, f)
        messages += [f"structure {c.name}" for c in structure.failures()]
        nonempty = result.nonempty_times()
        flags["infinity_layer"] = bool(result.layer(INF))
        flags["single_time"] = len(nonempty) == 1

        if bool(is_stopping_time(tau, f)) != bool(is_adapted(stopping_process(tau, f), f)):
            messages.append("stopping process adaptedness disagrees on valid tau")
        bad = gen_non_stopping_time(eff, f, tau)
        flags["perturbed"] = bad is not None
        if bad is not None:
            st = bool(is_stopping_time(bad, f))
            ad = bool(is_adapted(stopping_process(bad, f), f))
            if st:
                messages.append("perturbed tau still passes the stopping-time check")
            if st != ad:
                messages.append("stopping process adaptedness disagrees on perturbed tau")
    except (StopSigmaError, AssertionError) as exc:
        messages.append(f"{type(exc).__name__}: {exc}")
    return messages, flags, (f, tau, eff)


def _worker(args):
    i, cfg, vary_sizes, mutant = args
    messages, flags, (f, tau, eff) = run_case(cfg, vary_sizes, mutant)
    text = dump_instance(f, tau, {"generator": PRNG_ALGORITHM, "config": eff.to_dict(), "iteration": i}) if messages else None
    return i, eff, messages, flags, text


def run_fuzz(
    cfg: GenConfig,
    iterations: int,
    vary_sizes: bool = True,
    mutant: str | None = None,
    dump_dir: str | Path | None = None,
    workers: int = 1,
) -> FuzzSummary:
    """Run ``iterations`` random cases derived from ``cfg.seed``.

    Iteration ``i`` uses the ``i``-th SplitMix64 output of ``cfg.seed`` as
    its own seed.  Failing instances are written to ``dump_dir`` as
    instance files that :func:`~stopsigma.instance.parse_instance` reads
    back.  Results are collected in iteration order whatever ``workers`` is.
    """
    cfg.validate()
    jobs = [(i, cfg.with_seed(s), vary_sizes, mutant) for i, s in enumerate(iteration_seeds(cfg.seed, iterations))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_worker(j) for j in jobs]
    results.sort(key=lambda r: r[0])

    summary = FuzzSummary(iterations)
    cov = {"infinity_layer": 0, "single_time": 0, "strict_prop3": 0, "perturbed": 0}
    for i, eff, messages, flags, text in results:
        for k, v in flags.items():
            cov[k] += bool(v)
        if not messages:
            continue
        dump = None
        if dump_dir is not None and text is not None:
            path = Path(dump_dir)
            path.mkdir(parents=True, exist_ok=True)
            target = path / f"fuzz-{cfg.seed}-{i:05d}.json"
            target.write_text(text, encoding="utf-8")
            dump = str(target)
        log.debug("iteration %d failed: %s", i, messages)
        summary.failures.append(FuzzFailure(i, eff, messages, dump))
    summary.coverage = cov
    return summary
