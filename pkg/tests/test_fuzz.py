from stopsigma import GenConfig, parse_instance
from stopsigma.fuzz import iteration_seeds, run_case, run_fuzz


def test_iteration_seeds_deterministic():
    assert iteration_seeds(42, 5) == iteration_seeds(42, 5)
    assert len(set(iteration_seeds(42, 100))) == 100


def test_run_case_clean():
    messages, flags, _ = run_case(GenConfig(seed=3))
    assert messages == []
    assert set(flags) == {"strict_prop3", "infinity_layer", "single_time", "perturbed"}


def test_run_fuzz_clean_with_coverage():
    summary = run_fuzz(GenConfig(seed=1), 200)
    assert summary.ok
    assert set(summary.coverage) == {"infinity_layer", "single_time", "strict_prop3", "perturbed"}


def test_workers_do_not_change_results(tmp_path):
    cfg = GenConfig(seed=5)
    a = run_fuzz(cfg, 40, mutant="lagged-level", dump_dir=tmp_path / "a")
    b = run_fuzz(cfg, 40, mutant="lagged-level", dump_dir=tmp_path / "b", workers=2)
    assert [f.iteration for f in a.failures] == [f.iteration for f in b.failures]
    assert a.coverage == b.coverage
    assert a.failures


def test_dumped_failure_replays(tmp_path):
    summary = run_fuzz(GenConfig(seed=5), 40, mutant="lagged-level", dump_dir=tmp_path)
    fail = summary.failures[0]
    f, tau = parse_instance(fail.dump)
    messages, _, (g, sigma, _) = run_case(fail.config, mutant="lagged-level")
    assert (f, tau) == (g, sigma)
    assert messages == fail.messages


def test_zero_iterations():
    summary = run_fuzz(GenConfig(), 0)
    assert summary.ok and summary.iterations == 0
