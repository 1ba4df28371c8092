# --- tests/ensemble/test_params.py ---
import math
from dataclasses import replace

import numpy as np
import pytest

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.ensemble.params import (
    PhysicalParams,
    derive_params,
    protocol_units,
    rddi_potential,
)
from src.rydberg_ramsey.ensemble.presets import get_preset


@pytest.fixture
def preset():
    return get_preset("rb87-sec5")


def test_preset_reproduces_quoted_values(preset):
    d = derive_params(preset)
    assert d.v_g0 == pytest.approx(140.0, rel=0.02)
    assert d.r_c == pytest.approx(0.18e-3, rel=0.02)
    assert d.loss_length == pytest.approx(0.18e-3, rel=0.02)
    assert d.loss_delay == pytest.approx(1.3e-6, rel=0.10)
    assert rddi_potential(d.r_c, preset.c3) == pytest.approx(1e5, rel=0.02)


def test_preset_sits_in_pair_regime(preset):
    d = derive_params(preset)
    assert 0.0 < d.n_ry * d.r_c ** 3 <= 0.05
    assert d.n_ry <= preset.density_n
    assert 0.0 < d.norm_A <= 1.0


def test_rc_cubed_over_T_is_c3(preset):
    d = derive_params(preset)
    assert d.r_c ** 3 / preset.storage_T == pytest.approx(preset.c3, rel=1e-14)


def test_storage_at_t_max_gives_unit_pair_density(preset):
    d = derive_params(preset)
    at_limit = derive_params(replace(preset, storage_T=d.t_max))
    assert at_limit.n_ry * at_limit.r_c ** 3 == pytest.approx(1.0, rel=1e-12)


def test_no_probe_means_no_rydberg_atoms(preset):
    d = derive_params(replace(preset, omega_p0=0.0))
    assert d.norm_A == 1.0
    assert d.n_ry == 0.0
    assert math.isinf(d.t_max)
    assert math.isinf(d.r_ry)


@pytest.mark.parametrize("factor", [0.1, 3.7, 250.0])
def test_dimensionless_products_are_scale_invariant(preset, factor):
    base = derive_params(preset)
    scaled = derive_params(preset.scaled(factor))
    assert scaled.n_ry * scaled.r_c ** 3 == pytest.approx(base.n_ry * base.r_c ** 3, rel=1e-12)
    assert scaled.r_c / scaled.r_ry == pytest.approx(base.r_c / base.r_ry, rel=1e-12)
    assert scaled.r_c == pytest.approx(factor * base.r_c, rel=1e-12)


def test_protocol_units_match_rc_and_T(preset):
    units = protocol_units(preset)
    d = derive_params(preset)
    assert units.length == pytest.approx(d.r_c)
    assert units.time == preset.storage_T
    assert units.to_protocol_rate(rddi_potential(d.r_c, preset.c3)) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("field", ["omega_c", "gamma_e", "alpha", "length_L", "c3", "storage_T", "density_n", "omega_rf"])
def test_non_positive_inputs_rejected(preset, field):
    with pytest.raises(ParameterError, match=field):
        replace(preset, **{field: 0.0})
    with pytest.raises(ParameterError):
        replace(preset, **{field: -1.0})


def test_strong_probe_rejected(preset):
    with pytest.raises(ParameterError, match="omega_p0 < omega_c"):
        replace(preset, omega_p0=preset.omega_c)


def test_potential_values():
    c3, T = 2.0, 0.5
    r_c = (c3 * T) ** (1 / 3)
    assert rddi_potential(r_c, c3) * T == pytest.approx(1.0)
    assert rddi_potential(r_c / 2, c3) * T == pytest.approx(8.0)
    assert rddi_potential(np.inf, c3) == 0.0
    assert rddi_potential(np.array([1.0, 2.0]), 8.0) == pytest.approx([8.0, 1.0])


@pytest.mark.parametrize("r", [0.0, -1e-6])
def test_potential_rejects_non_positive_distance(r):
    with pytest.raises(ParameterError):
        rddi_potential(r, 1.0)


def test_from_dict_converts_units():
    params = PhysicalParams.from_dict({
        "omega_p0": {"value": 1.0, "unit": "2pi*kHz"},
        "omega_c": {"value": 1.0, "unit": "2pi*MHz"},
        "gamma_e": 1e7,
        "alpha": 10,
        "length_L": {"value": 2.0, "unit": "mm"},
        "c3": {"value": 1.0, "unit": "GHz*um^3"},
        "storage_T": {"value": 5.0, "unit": "us"},
        "density_n": {"value": 1.0, "unit": "cm^-3"},
        "omega_rf": 1e9,
        "geometry": {"kind": "box", "length": 1e-3, "width": {"value": 10, "unit": "um"}, "height": 1e-5},
    })
    assert params.omega_c == pytest.approx(2 * math.pi * 1e6)
    assert params.length_L == pytest.approx(2e-3)
    assert params.c3 == pytest.approx(1e-9)
    assert params.density_n == pytest.approx(1e6)
    assert params.geometry.kind == "box"
    assert params.geometry.width == pytest.approx(1e-5)
    assert params.geometry.volume == pytest.approx(1e-13)


def test_from_dict_rejects_unknown_units_and_keys(preset):
    data = preset.to_dict()
    data["omega_c"] = {"value": 1.0, "unit": "furlongs"}
    with pytest.raises(ParameterError, match="Unknown unit"):
        PhysicalParams.from_dict(data)
    data = preset.to_dict()
    data["detuning"] = 0.0
    with pytest.raises(ParameterError, match="Unknown parameter keys"):
        PhysicalParams.from_dict(data)


def test_to_dict_round_trips(preset):
    assert PhysicalParams.from_dict(preset.to_dict()) == preset
