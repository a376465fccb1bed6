import math

import numpy as np
import pytest

import qswn.ensemble as ensemble
from qswn.ensemble import (
    SweepConfig,
    run_lambda_sweep,
    run_realization,
    run_sweep,
)


def small_anderson(**kw):
    base = dict(scenario="anderson", n=60, grid=(0.0, 0.2, 0.5), realizations=3,
                master_seed=17, w=3.0)
    base.update(kw)
    return SweepConfig(**base)


class TestConfigValidation:
    def test_grid_must_increase(self):
        with pytest.raises(ValueError):
            small_anderson(grid=(0.0, 0.5, 0.2))

    def test_realizations_positive(self):
        with pytest.raises(ValueError):
            small_anderson(realizations=0)

    def test_harper_needs_fibonacci_size(self):
        with pytest.raises(ValueError):
            SweepConfig(scenario="harper", n=100, grid=(0.0,), realizations=1,
                        master_seed=0, lam=1.0)

    def test_lambda_sweep_needs_harper(self):
        with pytest.raises(ValueError):
            small_anderson(sweep_kind="lambda")

    def test_unknown_observable(self):
        with pytest.raises(ValueError):
            small_anderson(observables=("entropy", "bogus"))

    def test_anderson_needs_width(self):
        with pytest.raises(ValueError):
            small_anderson(w=0.0)


class TestRunRealization:
    def test_bitwise_determinism(self):
        cfg = small_anderson()
        a = run_realization(cfg, 1, 2)
        b = run_realization(cfg, 1, 2)
        assert a["entropy"] == b["entropy"]
        assert a["seed"] == b["seed"] == (17, 1, 2)

    def test_periodic_p0_identical_across_realizations(self):
        cfg = SweepConfig(scenario="periodic", n=40, grid=(0.0,), realizations=4,
                          master_seed=5)
        vals = {run_realization(cfg, 0, ri)["entropy"] for ri in range(4)}
        assert len(vals) == 1

    def test_harper_l0_independent_of_realization(self):
        cfg = SweepConfig(scenario="harper", n=55, grid=(3.0,), realizations=3,
                          master_seed=5, sweep_kind="lambda", fixed_shortcuts=0)
        vals = {run_realization(cfg, 0, ri)["entropy"] for ri in range(3)}
        assert len(vals) == 1

    def test_different_tuples_differ(self):
        cfg = small_anderson()
        assert run_realization(cfg, 1, 0)["entropy"] != run_realization(cfg, 1, 1)["entropy"]

    def test_index_bounds(self):
        cfg = small_anderson()
        with pytest.raises(IndexError):
            run_realization(cfg, 3, 0)
        with pytest.raises(IndexError):
            run_realization(cfg, 0, 3)

    def test_profiles_observable(self):
        cfg = small_anderson(observables=("entropy", "profiles"), grid=(0.1,))
        obs = run_realization(cfg, 0, 0)
        assert len(obs["profiles"]) == cfg.n
        mean = np.mean([s for _, s in obs["profiles"]])
        assert mean == pytest.approx(obs["entropy"], abs=1e-12)


class TestRunSweep:
    def test_aggregation_counts(self):
        res = run_sweep(small_anderson())
        assert len(res.points) == 3
        for pt in res.points:
            assert pt.realizations == 3
            assert pt.complete
            assert len(pt.seeds) == 3

    def test_single_run_stderr_zero(self):
        res = run_sweep(small_anderson(realizations=1))
        for pt in res.points:
            assert pt.stderr_entropy == 0.0
            assert pt.single_run

    def test_worker_count_does_not_change_output(self):
        cfg = small_anderson()
        serial = run_sweep(cfg, workers=1)
        parallel = run_sweep(cfg, workers=2)
        for a, b in zip(serial.points, parallel.points):
            assert a.mean_entropy == b.mean_entropy
            assert a.stderr_entropy == b.stderr_entropy

    def test_mean_rederivable_from_seed_manifest(self):
        cfg = small_anderson(grid=(0.2,))
        res = run_sweep(cfg)
        pt = res.points[0]
        values = []
        for master, gi, ri in pt.seeds:
            assert master == cfg.master_seed
            values.append(run_realization(cfg, gi, ri)["entropy"])
        assert np.mean(values) == pt.mean_entropy

    def test_partial_failure_marks_point_incomplete(self, monkeypatch):
        cfg = small_anderson()
        original = ensemble.run_realization

        def flaky(config, gi, ri):
            if (gi, ri) == (1, 1):
                raise RuntimeError("injected failure")
            return original(config, gi, ri)

        monkeypatch.setattr(ensemble, "run_realization", flaky)
        res = run_sweep(cfg)
        assert not res.points[1].complete
        assert res.points[1].realizations == 2
        assert res.points[1].failures[0][0] == 1
        assert res.points[0].complete and res.points[2].complete

    def test_stderr_shrinks_with_realizations(self):
        base = dict(scenario="anderson", n=40, grid=(0.3,), w=3.0)
        small = [run_sweep(SweepConfig(realizations=4, master_seed=s, **base)).points[0].stderr_entropy
                 for s in range(6)]
        large = [run_sweep(SweepConfig(realizations=16, master_seed=s, **base)).points[0].stderr_entropy
                 for s in range(6)]
        ratio = np.mean(small) / np.mean(large)
        assert 1.3 <= ratio <= 3.2  # expect ~2 = sqrt(16/4)

    def test_gap_ratio_observable(self):
        res = run_sweep(small_anderson(observables=("entropy", "gap_ratio")))
        for pt in res.points:
            assert 0.0 <= pt.mean_gap_ratio <= 1.0

    def test_csv_schema(self):
        res = run_sweep(small_anderson(observables=("entropy", "gap_ratio")))
        lines = res.to_csv().splitlines()
        assert lines[0] == "grid_value,mean_entropy,stderr_entropy,mean_gap_ratio,realizations"
        assert len(lines) == 4
        assert lines[1].endswith(",3")

    def test_manifest_contents(self):
        res = run_sweep(small_anderson())
        m = res.manifest()
        assert m["master_seed"] == 17
        assert m["rng_identifier"] == ensemble.RNG_IDENTIFIER
        assert m["grid"] == [0.0, 0.2, 0.5]
        assert len(m["point_seeds"]) == 3
        assert m["point_seeds"][2][1] == [17, 2, 1]


class TestLambdaSweep:
    def test_lambda_zero_matches_periodic_ring(self):
        n = 55
        cfg = SweepConfig(scenario="harper", n=n, grid=(0.0, 1.0), realizations=1,
                          master_seed=9, sweep_kind="lambda", fixed_shortcuts=0)
        res = run_lambda_sweep(cfg)
        periodic = SweepConfig(scenario="periodic", n=n, grid=(0.0,), realizations=1,
                               master_seed=9)
        ref = run_sweep(periodic).points[0].mean_entropy
        assert res.points[0].mean_entropy == ref

    def test_fixed_shortcut_count_used(self):
        cfg = SweepConfig(scenario="harper", n=34, grid=(1.0,), realizations=2,
                          master_seed=3, sweep_kind="lambda", fixed_shortcuts=5)
        obs = run_realization(cfg, 0, 0)
        assert "entropy" in obs

    def test_kind_coerced(self):
        cfg = SweepConfig(scenario="harper", n=34, grid=(1.0, 2.0), realizations=1,
                          master_seed=3, fixed_shortcuts=0)
        res = run_lambda_sweep(cfg)
        assert res.config.sweep_kind == "lambda"
