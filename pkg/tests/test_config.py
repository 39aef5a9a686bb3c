"""Config construction, validation, and strict JSON ingestion."""

import json

import pytest

from slicecf.config import SimConfig, config_from_dict, load_config
from slicecf.errors import ConfigError


def test_defaults():
    cfg = SimConfig(num_ues=50)
    assert cfg.area_side == 1000.0
    assert cfg.num_aps == 100
    assert cfg.antennas_per_ap == 4
    assert cfg.slice_mix == (0.7, 0.3)
    assert cfg.tau_p == 10 and cfg.tau_c == 200
    assert cfg.pilot_power_mw == 100.0 and cfg.data_power_mw == 100.0
    assert cfg.shadow_std_db == 8.0
    assert cfg.total_bandwidth == 80e6
    assert cfg.noise_ref_bandwidth == 20e6
    assert cfg.noise_figure_db == 9.0
    assert cfg.carrier_freq_mhz == 1900.0
    assert (cfg.ap_height_m, cfg.ue_height_m) == (15.0, 1.65)
    assert (cfg.d0_m, cfg.d1_m) == (10.0, 50.0)
    assert cfg.association_fraction == 0.95
    assert cfg.rng_seed == 0


def test_derived_quantities():
    cfg = SimConfig(num_ues=10)
    # thermal noise over 20 MHz at NF 9 dB: k_B*290*B_ref*10^0.9 W -> mW
    assert cfg.noise_power_mw == pytest.approx(6.360793201074298e-10, rel=1e-12)
    assert cfg.rho_p == pytest.approx(157213097233.07877, rel=1e-12)
    assert cfg.rho_d == cfg.rho_p
    assert cfg.prelog == 0.95  # 1 - 10/200 is exact in binary
    assert cfg.embb_fraction == 0.7
    assert cfg.urllc_fraction == 0.3


@pytest.mark.parametrize("bad", [
    {"area_side": 0.0},
    {"area_side": -5.0},
    {"tau_p": 0},
    {"tau_p": 300},           # exceeds tau_c
    {"slice_mix": (0.5, 0.4)},
    {"slice_mix": (1.2, -0.2)},
    {"pilot_power_mw": 0.0},
    {"data_power_mw": -1.0},
    {"total_bandwidth": 0.0},
    {"noise_ref_bandwidth": -1.0},
    {"association_fraction": 0.0},
    {"association_fraction": 1.5},
    {"d0_m": 0.0},
    {"d0_m": 60.0},           # d0 > d1
    {"num_ues": 0},
    {"shadow_std_db": -1.0},
])
def test_invalid_values_rejected(bad):
    kwargs = {"num_ues": 10}
    kwargs.update(bad)
    with pytest.raises(ConfigError):
        SimConfig(**kwargs)


def test_from_dict_roundtrip():
    raw = {"num_ues": 40, "total_bandwidth": 50e6, "slice_mix": [0.5, 0.5],
           "tau_p": 8, "rng_seed": 17}
    cfg = config_from_dict(raw)
    assert cfg.num_ues == 40
    assert cfg.total_bandwidth == 50e6
    assert cfg.slice_mix == (0.5, 0.5)
    assert cfg.tau_p == 8
    assert cfg.rng_seed == 17


def test_unknown_keys_are_hard_errors():
    with pytest.raises(ConfigError, match="unknown config keys"):
        config_from_dict({"num_ues": 10, "bandwith": 80e6})


def test_num_ues_required():
    with pytest.raises(ConfigError, match="num_ues"):
        config_from_dict({"area_side": 500.0})


def test_integer_fields_reject_fractions():
    with pytest.raises(ConfigError):
        config_from_dict({"num_ues": 10.5})
    # whole-valued floats are accepted (JSON has one number type)
    assert config_from_dict({"num_ues": 10.0}).num_ues == 10


def test_load_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"num_ues": 12, "noise_figure_db": 7}))
    cfg = load_config(path)
    assert cfg.num_ues == 12
    assert cfg.noise_figure_db == 7.0

    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(broken)


def test_non_object_document_rejected():
    with pytest.raises(ConfigError):
        config_from_dict([1, 2, 3])
