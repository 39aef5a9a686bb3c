"""Simulation configuration: dataclass, validation, and strict JSON ingestion."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import ConfigError

BOLTZMANN_J_PER_K = 1.380649e-23
NOISE_TEMPERATURE_K = 290.0

_INT_FIELDS = {"num_aps", "antennas_per_ap", "num_ues", "tau_p", "tau_c",
               "blocklength_per_byte", "rng_seed"}


@dataclass(frozen=True)
class SimConfig:
    """Static parameters of one simulated network.

    ``slice_mix`` is the (eMBB, URLLC) population split.  Powers are physical
    milliwatts; the normalized SNRs ``rho_p``/``rho_d`` divide them by thermal
    noise over ``noise_ref_bandwidth`` at the configured noise figure.
    """

    num_ues: int
    area_side: float = 1000.0
    num_aps: int = 100
    antennas_per_ap: int = 4
    slice_mix: tuple[float, float] = (0.7, 0.3)
    tau_p: int = 10
    tau_c: int = 200
    pilot_power_mw: float = 100.0
    data_power_mw: float = 100.0
    shadow_std_db: float = 8.0
    total_bandwidth: float = 80e6
    noise_ref_bandwidth: float = 20e6
    noise_figure_db: float = 9.0
    carrier_freq_mhz: float = 1900.0
    ap_height_m: float = 15.0
    ue_height_m: float = 1.65
    d0_m: float = 10.0
    d1_m: float = 50.0
    association_fraction: float = 0.95
    blocklength_per_byte: int = 8
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "slice_mix", tuple(self.slice_mix))
        if self.area_side <= 0:
            raise ConfigError("area_side must be positive")
        if self.num_aps < 1 or self.antennas_per_ap < 1:
            raise ConfigError("need at least one AP and one antenna per AP")
        if self.num_ues < 1:
            raise ConfigError("num_ues must be >= 1")
        if not (0 < self.tau_p <= self.tau_c):
            raise ConfigError("require 0 < tau_p <= tau_c")
        if len(self.slice_mix) != 2 or any(f < 0 for f in self.slice_mix):
            raise ConfigError("slice_mix must be two non-negative fractions")
        if abs(sum(self.slice_mix) - 1.0) > 1e-9:
            raise ConfigError("slice_mix fractions must sum to 1")
        if self.pilot_power_mw <= 0 or self.data_power_mw <= 0:
            raise ConfigError("transmit powers must be positive")
        if self.shadow_std_db < 0:
            raise ConfigError("shadow_std_db must be >= 0")
        if self.total_bandwidth <= 0 or self.noise_ref_bandwidth <= 0:
            raise ConfigError("bandwidths must be positive")
        if not (0 < self.association_fraction <= 1.0):
            raise ConfigError("association_fraction must lie in (0, 1]")
        if not (0 < self.d0_m <= self.d1_m):
            raise ConfigError("require 0 < d0_m <= d1_m")
        if self.blocklength_per_byte < 1:
            raise ConfigError("blocklength_per_byte must be >= 1")

    @property
    def embb_fraction(self) -> float:
        return self.slice_mix[0]

    @property
    def urllc_fraction(self) -> float:
        return self.slice_mix[1]

    @property
    def noise_power_mw(self) -> float:
        """Thermal noise over the reference bandwidth at the configured NF, in mW."""
        nf_lin = 10.0 ** (self.noise_figure_db / 10.0)
        watts = BOLTZMANN_J_PER_K * NOISE_TEMPERATURE_K * self.noise_ref_bandwidth * nf_lin
        return watts * 1e3

    @property
    def rho_p(self) -> float:
        return self.pilot_power_mw / self.noise_power_mw

    @property
    def rho_d(self) -> float:
        return self.data_power_mw / self.noise_power_mw

    @property
    def prelog(self) -> float:
        return 1.0 - self.tau_p / self.tau_c


def config_from_dict(raw: dict) -> SimConfig:
    """Build a SimConfig from a parsed JSON object; unknown keys are a hard error."""
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    known = {f.name for f in dataclasses.fields(SimConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "num_ues" not in raw:
        raise ConfigError("config must set num_ues")
    kwargs = {}
    for key, value in raw.items():
        if key in _INT_FIELDS:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ConfigError(f"{key} must be an integer")
            try:
                value = int(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be an integer") from None
        elif key == "slice_mix":
            if not isinstance(value, (list, tuple)):
                raise ConfigError("slice_mix must be a two-element array")
            value = tuple(float(v) for v in value)
        else:
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be a number") from None
        kwargs[key] = value
    return SimConfig(**kwargs)


def load_config(path) -> SimConfig:
    """Read a SimConfig from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return config_from_dict(raw)
