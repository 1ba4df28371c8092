# --- tests/validity/test_regime.py ---
from dataclasses import replace

import pytest

from src.rydberg_ramsey.core.config import Config
from src.rydberg_ramsey.core.exceptions import ParameterError, RegimeError
from src.rydberg_ramsey.ensemble.params import derive_params
from src.rydberg_ramsey.ensemble.presets import get_preset
from src.rydberg_ramsey.validity.regime import DEFAULT_RF_DISTANCE, HARD_CHECKS, regime_check


@pytest.fixture
def preset():
    return get_preset("rb87-sec5")


def test_preset_passes(preset):
    report = regime_check(preset, [1.3e-6, 2e-6])
    assert report.passed
    assert report.verdicts["tau_loss"]
    assert report.tau_loss_ok == (True, True)
    assert report.n_ry_rc3 == pytest.approx(0.038, rel=0.05)
    assert report.rc_over_rry == pytest.approx(report.n_ry_rc3 ** (1.0 / 3.0), rel=1e-12)
    report.raise_for_failures()


def test_storage_time_ratio_is_pair_density(preset):
    report = regime_check(preset)
    assert report.t_over_tmax == pytest.approx(report.n_ry_rc3, rel=1e-12)


def test_rf_margin_at_blockade_scale(preset):
    report = regime_check(preset)
    assert report.rf_distance == DEFAULT_RF_DISTANCE
    assert report.rf_margin == pytest.approx(2.26, rel=0.01)
    assert report.verdicts["rf"]
    # at r_c the exchange rate is 1/T, far below Ω_rf
    d = derive_params(preset)
    assert regime_check(preset, min_distance=d.r_c).rf_margin == pytest.approx(preset.omega_rf * preset.storage_T, rel=1e-9)


def test_rf_distance_from_params(preset):
    params = replace(preset, min_pair_distance=1e-6)
    report = regime_check(params)
    assert report.rf_distance == 1e-6
    assert not report.verdicts["rf"]
    assert report.hard_failures == ["rf"]
    with pytest.raises(RegimeError, match="rf"):
        report.raise_for_failures()


def test_storage_time_at_limit(preset):
    d = derive_params(preset)
    params = replace(preset, storage_T=d.t_max)
    report = regime_check(params)
    assert report.t_over_tmax == 1.0
    assert report.verdicts["storage_time"]
    assert report.n_ry_rc3 == pytest.approx(1.0)
    assert not report.verdicts["pair_density"]


def test_short_delays_are_soft_failures(preset):
    report = regime_check(preset, [0.5e-6, 1.3e-6])
    assert report.tau_loss_ok == (False, True)
    assert report.soft_failures == ["tau_loss"]
    assert report.passed


def test_threshold_comes_from_config(preset):
    strict = Config(regime_threshold=0.01, environment={})
    report = regime_check(preset, config=strict)
    assert report.threshold == 0.01
    assert "pair_density" in report.hard_failures


def test_dense_cloud_fails(preset):
    report = regime_check(replace(preset, density_n=preset.density_n * 100))
    assert set(report.hard_failures) >= {"pair_density", "rc_below_rry", "storage_time"}
    assert set(report.hard_failures) <= set(HARD_CHECKS)


def test_no_probe(preset):
    report = regime_check(replace(preset, omega_p0=0.0))
    assert report.n_ry_rc3 == 0.0
    assert report.rc_over_rry == 0.0
    assert report.passed


def test_dimensionless_under_rescaling(preset):
    base = regime_check(preset)
    scaled = regime_check(preset.scaled(3.0), min_distance=3.0 * DEFAULT_RF_DISTANCE)
    assert scaled.n_ry_rc3 == pytest.approx(base.n_ry_rc3, rel=1e-12)
    assert scaled.rc_over_rry == pytest.approx(base.rc_over_rry, rel=1e-12)
    assert scaled.rf_margin == pytest.approx(base.rf_margin, rel=1e-12)


def test_report_serializes(preset):
    data = regime_check(replace(preset, omega_p0=0.0), [2e-6]).to_dict()
    assert data["passed"] is True
    assert data["tau_loss_ok"] == [True]
    assert set(data["verdicts"]) == set(HARD_CHECKS) | {"tau_loss"}


def test_bad_delays(preset):
    with pytest.raises(ParameterError):
        regime_check(preset, [-1e-6])
