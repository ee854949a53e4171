import numpy as np
import pytest

from rydcat import (
    MonteCarloConfig,
    ParameterError,
    Polarization,
    power_law_study,
    run_monte_carlo,
)


def small_config(**overrides):
    base = dict(n_atoms=12, n_runs=8, seed=3)
    base.update(overrides)
    return MonteCarloConfig(**base)


class TestConfig:
    def test_defaults_describe_reference_experiment(self):
        cfg = MonteCarloConfig()
        assert cfg.n_atoms == 260
        assert cfg.sigmas == (3.3, 4.5, 1.7)
        assert cfg.wavelength == 0.78
        assert cfg.n_runs == 100
        assert cfg.polarization is not None
        assert cfg.polarization.self_overlap == pytest.approx(0.0, abs=1e-15)

    def test_isotropic_swaps_in_geometric_mean(self):
        aniso = MonteCarloConfig()
        iso = MonteCarloConfig(isotropic=True)
        assert aniso.effective_sigmas == (3.3, 4.5, 1.7)
        for s in iso.effective_sigmas:
            assert s == pytest.approx(2.9335384957512604, rel=1e-14)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_atoms=1),
            dict(n_runs=1),
            dict(wavelength=0.0),
            dict(sigmas=(1.0, 2.0)),
            dict(sigmas=(1.0, -2.0, 3.0)),
            dict(seed=-1),
            dict(seed=2**64),
            dict(workers=0),
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ParameterError):
            MonteCarloConfig(**kwargs)

    def test_explicit_workers_override_environment(self, monkeypatch):
        monkeypatch.setenv("RYDCAT_WORKERS", "6")
        assert MonteCarloConfig(workers=2).resolve_workers() == 2
        assert MonteCarloConfig().resolve_workers() == 6
        monkeypatch.setenv("RYDCAT_WORKERS", "not a number")
        assert MonteCarloConfig().resolve_workers() == 1


class TestDeterminism:
    def test_identical_configs_reproduce_bitwise(self):
        a = run_monte_carlo(small_config())
        b = run_monte_carlo(small_config())
        assert np.array_equal(a.b, b.b)
        assert np.array_equal(a.c_up_dn, b.c_up_dn)
        assert np.array_equal(a.s12, b.s12)

    def test_worker_count_does_not_change_results(self):
        serial = run_monte_carlo(small_config(workers=1))
        threaded = run_monte_carlo(small_config(workers=4))
        assert np.array_equal(serial.b, threaded.b)
        assert np.array_equal(serial.s12_sq, threaded.s12_sq)

    def test_seeds_give_independent_streams(self):
        a = run_monte_carlo(small_config(seed=3))
        b = run_monte_carlo(small_config(seed=4))
        assert not np.array_equal(a.b, b.b)

    def test_runs_within_a_batch_differ(self):
        res = run_monte_carlo(small_config())
        assert len(set(res.b.tolist())) == res.config.n_runs


class TestObservables:
    def test_two_atoms_never_mismatch(self):
        res = run_monte_carlo(small_config(n_atoms=2, n_runs=4))
        assert np.max(np.abs(res.b)) < 1e-12
        assert np.max(np.abs(res.c_up_dn - 1.0)) < 1e-12

    def test_mismatch_nonnegative_overlap_bounded(self):
        res = run_monte_carlo(small_config())
        assert np.all(res.b >= 0.0)
        assert np.all(np.abs(res.c_up_dn) <= 1.0 + 1e-12)

    def test_moments_consistent_with_arrays(self):
        res = run_monte_carlo(small_config())
        assert res.b_mean == pytest.approx(float(res.b.mean()))
        assert res.rms == pytest.approx(float(np.sqrt(res.s12_sq.mean())))
        assert res.b_sem > 0.0
        assert res.rms_sem > 0.0

    def test_summary_layout(self):
        summary = run_monte_carlo(small_config()).summary()
        assert sorted(summary) == [
            "b_mean", "b_sem", "c_mean_im", "c_mean_re", "c_sem_im",
            "rms", "rms_sem", "s12_mean_im", "s12_mean_re", "s12_sem_im",
            "s12_sem_re",
        ]
        assert all(isinstance(v, float) for v in summary.values())


@pytest.fixture(scope="module")
def study():
    return power_law_study(MonteCarloConfig(seed=0), n_grid=range(3, 9),
                           runs_budget=2000.0)


class TestPowerLawStudy:
    def test_run_counts_follow_budget(self, study):
        assert study.runs.tolist() == [222, 125, 80, 56, 41, 31]

    def test_fitted_decay(self, study):
        # the underlying decay is 1/N^3 with coefficient ~1.0e-4
        assert study.c3 == pytest.approx(1.03e-4, abs=3.0 * study.c3_err)
        assert study.c3_err > 0.0
        assert study.free_slope == pytest.approx(-3.0, abs=0.5)

    def test_extrapolation_is_pure_cubic(self, study):
        assert study.extrapolate(260.0) == pytest.approx(
            study.c3 / 260.0**3, rel=1e-15
        )

    def test_grid_points_use_disjoint_streams(self):
        # same seed, different N: the draws must not be correlated copies
        a = power_law_study(MonteCarloConfig(seed=0), n_grid=[3, 4],
                            runs_budget=50.0)
        b = power_law_study(MonteCarloConfig(seed=0), n_grid=[4, 5],
                            runs_budget=50.0)
        shared_n4_a = a.b_mean[1] * a.runs[1]
        shared_n4_b = b.b_mean[0] * b.runs[0]
        assert shared_n4_a == pytest.approx(shared_n4_b, rel=1e-12)

    def test_rejects_degenerate_grids(self):
        cfg = MonteCarloConfig(seed=0)
        with pytest.raises(ParameterError):
            power_law_study(cfg, n_grid=[5])
        with pytest.raises(ParameterError):
            power_law_study(cfg, n_grid=[1, 5])
        with pytest.raises(ParameterError):
            power_law_study(cfg, n_grid=[3, 4], runs_budget=0.0)
