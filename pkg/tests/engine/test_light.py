# --- tests/engine/test_light.py ---
import math

import numpy as np
import pytest

from src.rydberg_ramsey.core.exceptions import CapacityError, ParameterError
from src.rydberg_ramsey.engine.atomic import excitation_weight, s_population_sums
from src.rydberg_ramsey.engine.light import (
    LINE_MOMENT,
    AveragingBand,
    band_for,
    g1_light,
    g2_light,
    intensity_ratio,
    intensity_ratio_continuum,
    intensity_samples,
    regularized_autocorrelation,
)
from src.rydberg_ramsey.ensemble.cloud import AtomCloud
from src.rydberg_ramsey.ensemble.geometry import Geometry
from src.rydberg_ramsey.ensemble.params import derive_params
from src.rydberg_ramsey.ensemble.presets import get_preset


@pytest.fixture(scope="module")
def line_cloud():
    rng = np.random.default_rng(31)
    return AtomCloud.from_positions(rng.uniform(0.0, 30.0, 3000))


@pytest.fixture
def preset():
    return get_preset("rb87-sec5")


def test_averaging_band_validation():
    assert AveragingBand(1.0, 0.1).half_width == 0.1
    with pytest.raises(ParameterError):
        AveragingBand(1.0, 1.0)
    with pytest.raises(ParameterError):
        AveragingBand(1.0, 0.0)


def test_default_band_width():
    band, clipped = band_for(2.0, 0.01, None)
    assert band.half_width == pytest.approx(0.1) and not clipped
    band, clipped = band_for(2.0, 0.2, None)
    assert band.half_width == pytest.approx(0.4) and not clipped
    band, clipped = band_for(0.3, 0.2, None)
    assert band.half_width == pytest.approx(0.15) and clipped


def test_monte_carlo_matches_band_averaged_continuum(line_cloud):
    tau = np.array([0.8, 1.0, 1.5, 2.0])
    mc = g2_light(line_cloud, 0.1, 1.0, 1.0, 1.0, tau, band_half_width=0.05)
    continuum = g2_light(None, 0.1, 1.0, 1.0, 1.0, tau, band_half_width=0.05)
    np.testing.assert_allclose(mc.values, continuum.values, rtol=0.02)
    assert mc.normalization == "input-intensity-normalized"
    assert mc.metadata["n_r"] == "pairs"
    assert min(mc.metadata["pair_counts"]) > 1000
    assert not mc.flags


def test_full_period_separation_is_dark():
    s = (2.0 * math.pi) ** (-1.0 / 3.0)
    series = g2_light(None, 0.1, 1.0, 1.0, 1.0, [s], band_half_width=0.002)
    assert 0.0 <= series.values[0] < 0.01


@pytest.mark.parametrize("normalization", ["input-intensity-normalized", "raw"])
def test_small_phase_tail_law(normalization):
    eps = 0.05
    s = np.linspace(10.0 ** (1.0 / 3.0), 6.0, 40)
    series = g2_light(None, eps, 1.0, 1.0, 1.0, s, normalization=normalization)
    c = series.metadata["declared_constant"]
    np.testing.assert_allclose(series.values, c * s ** -6.0 / 2.0, rtol=0.02)
    if normalization == "raw":
        assert c == pytest.approx(excitation_weight(eps) / 2.0)
    else:
        assert c == 2.0


def test_continuum_matches_pointwise_formula():
    s = np.array([0.5, 0.9, 1.3])
    series = g2_light(None, 0.1, 1.0, 1.0, 1.0, s)
    np.testing.assert_allclose(series.values, 2.0 * (1.0 - np.cos(s ** -3.0)), rtol=1e-12)


def test_rigid_translation_and_relabeling(line_cloud):
    tau = np.array([0.7, 1.2, 2.5])
    base = g2_light(line_cloud, 0.1, 1.0, 1.0, 1.0, tau, band_half_width=0.05)
    shifted = g2_light(line_cloud.translated([0.0, 0.0, 5.0]), 0.1, 1.0, 1.0, 1.0, tau, band_half_width=0.05)
    perm = np.random.default_rng(2).permutation(len(line_cloud))
    relabeled = g2_light(line_cloud.relabeled(perm), 0.1, 1.0, 1.0, 1.0, tau, band_half_width=0.05)
    np.testing.assert_allclose(shifted.values, base.values, rtol=1e-9)
    np.testing.assert_allclose(relabeled.values, base.values, rtol=1e-12)


def test_empty_band_is_flagged():
    cloud = AtomCloud.from_positions([0.0, 1.0, 2.0])
    series = g2_light(cloud, 0.1, 1.0, 1.0, 1.0, [1.0, 1.5], band_half_width=0.1)
    assert np.isnan(series.values[1])
    assert not np.isnan(series.values[0])
    assert "empty-band:1" in series.flags


def test_grid_must_be_positive_and_increasing(line_cloud):
    with pytest.raises(ParameterError):
        g2_light(None, 0.1, 1.0, 1.0, 1.0, [0.0, 1.0])
    with pytest.raises(ParameterError):
        g2_light(None, 0.1, 1.0, 1.0, 1.0, [2.0, 1.0])


def test_transverse_width_precondition():
    geometry = Geometry("box", length=20.0, width=2.0, height=2.0)
    rng = np.random.default_rng(5)
    cloud = AtomCloud(geometry.sample(rng, 300), geometry=geometry)
    with pytest.raises(ParameterError, match="transverse width"):
        g2_light(cloud, 0.1, 1.0, 1.0, 1.0, [1.0, 3.0])
    assert len(g2_light(cloud, 0.1, 1.0, 1.0, 1.0, [2.5, 3.0])) == 2


def test_transverse_width_precondition_on_segment():
    geometry = Geometry("segment", length=20.0, cross_section=4.0)
    cloud = AtomCloud(geometry.sample(np.random.default_rng(6), 300), geometry=geometry)
    with pytest.raises(ParameterError, match="transverse width"):
        g2_light(cloud, 0.1, 1.0, 1.0, 1.0, [1.5, 3.0])
    assert len(g2_light(cloud, 0.1, 1.0, 1.0, 1.0, [2.5, 3.0])) == 2


def test_pair_cap(line_cloud):
    with pytest.raises(CapacityError, match="RYDBERG_MAX_PAIRS"):
        g2_light(line_cloud, 0.1, 1.0, 1.0, 1.0, [1.0], max_pairs=1000)


def test_intensity_ratio_zero_time(line_cloud):
    assert intensity_ratio(line_cloud, 0.1, 0.0) == 0.0


def test_intensity_ratio_matches_continuum_in_3d():
    geometry = Geometry("box", length=8.0, width=8.0, height=8.0)
    rng = np.random.default_rng(77)
    cloud = AtomCloud(geometry.sample(rng, 1024), geometry=geometry)
    eps = 0.1
    samples = intensity_samples(cloud, eps, 1.0, 1.0, interior_margin=2.5)
    assert samples.size > 20
    assert np.all(samples >= 0.0)
    mc = intensity_ratio(cloud, eps, 1.0, 1.0, interior_margin=2.5)
    expected = intensity_ratio_continuum(eps, 1.0, 1.0, 2.0)
    assert expected == pytest.approx(0.5 * eps ** 2 / (1 + eps ** 2) ** 2 * 2.0 * 2.0 * math.pi ** 2 / 3.0)
    sigma_rel = samples.std(ddof=1) / math.sqrt(samples.size) / mc
    assert abs(mc / expected - 1.0) < 3.0 * sigma_rel + 0.03


def test_intensity_ratio_pair_regime_is_small(preset):
    d = derive_params(preset)
    ratio = intensity_ratio_continuum(d.epsilon, preset.storage_T, preset.c3, preset.density_n)
    # with n_Ry r_c^3 ~ 0.04 the retrieved light stays well below the input
    assert ratio == pytest.approx(d.n_ry * d.r_c ** 3 * math.pi ** 2 / 3.0 / (1 + d.epsilon ** 2), rel=1e-9)
    assert ratio < 0.2


def test_intensity_reference_selection():
    cloud = AtomCloud.from_positions([0.0, 1.0, 2.0])
    with pytest.raises(ParameterError, match="geometry"):
        intensity_samples(cloud, 0.1, 1.0, 1.0, interior_margin=0.5)
    geometry = Geometry("segment", length=3.0)
    cloud = AtomCloud.from_positions([0.5, 1.5, 2.5], geometry=geometry)
    assert intensity_samples(cloud, 0.1, 1.0, 1.0, interior_margin=1.0).size == 1
    with pytest.raises(ParameterError, match="No reference atoms"):
        intensity_samples(cloud, 0.1, 1.0, 1.0, interior_margin=2.0)


def test_intensity_line_continuum():
    value = intensity_ratio_continuum(0.1, 1.0, 1.0, 3.0, dim_mode="reduced-1D")
    assert value == pytest.approx(0.5 * 0.01 / 1.01 ** 2 * 3.0 * 2.0 * LINE_MOMENT)
    assert LINE_MOMENT == pytest.approx(1.1727005352, abs=1e-9)
    with pytest.raises(ParameterError):
        intensity_ratio_continuum(0.1, 1.0, 1.0, 3.0, dim_mode="2D")


def test_regularized_autocorrelation_at_zero():
    value = regularized_autocorrelation(np.array([0.0]))[0]
    assert value == pytest.approx(4.0 * LINE_MOMENT, rel=0.02)


def test_continuum_g1_scale_and_decay(preset):
    d = derive_params(preset)
    tau = np.array([0.0, 1.0, 20.0]) * d.r_c / d.v_g0
    g1 = g1_light(preset, tau)
    expected = 0.25 * excitation_weight(d.epsilon) * preset.linear_density * d.r_c * 4.0 * LINE_MOMENT
    assert g1.values[0].real == pytest.approx(expected, rel=0.02)
    assert g1.values[0].imag == 0.0
    assert np.all(np.abs(g1.values) <= g1.values[0].real)
    assert abs(g1.values[2]) / g1.values[0].real < 0.01
    assert g1.metadata["mode"] == "continuum"


def test_peak_normalized_g1(preset):
    d = derive_params(preset)
    tau = np.linspace(0.0, 5.0, 11) * d.r_c / d.v_g0
    g1 = g1_light(preset, tau, normalization="peak-normalized")
    assert g1.values[0] == pytest.approx(1.0)
    assert g1.normalization == "peak-normalized"


def test_cloud_g1_zero_delay_is_mean_s_population():
    rng = np.random.default_rng(9)
    geometry = Geometry("segment", length=12.0)
    cloud = AtomCloud.from_positions(np.sort(rng.uniform(0.0, 12.0, 60)), geometry=geometry)
    params = get_preset("rb87-sec5")
    d = derive_params(params)
    si_cloud = AtomCloud.from_positions(cloud.z * d.r_c, geometry=geometry.scaled(d.r_c))
    g1 = g1_light(params, [0.0], cloud=si_cloud, band_half_width=1e-9 * d.r_c)
    expected = s_population_sums(cloud, d.epsilon, 1.0).mean()
    assert g1.values[0].real == pytest.approx(expected, rel=1e-9)
    assert g1.metadata["mode"] == "monte-carlo"
