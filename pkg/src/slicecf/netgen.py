"""Random network generation: deployments, large-scale fading, pilots,
UE-AP association, and open-loop power control.

Everything here is a pure function of (inputs, seed); repeated calls are
bit-identical.  Positions live on a torus: pairwise distances use the
wrap-around metric so the square area has no boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SimConfig

SLICE_EMBB = "embb"
SLICE_URLLC = "urllc"

# eMBB QoS tiers: 30% premium users at a higher floor and weight.
PREMIUM_FRACTION = 0.30
PREMIUM_WEIGHT = 1.5
STANDARD_WEIGHT = 1.0
PREMIUM_RATE_RANGE = (5e6, 10e6)
STANDARD_RATE_RANGE = (1e6, 3e6)

# URLLC contract ranges: packet size in bytes, Poisson arrival rate,
# delay budget, target decoding error, and priority weight.
URLLC_BYTES_RANGE = (32, 64)
URLLC_ARRIVAL_RANGE = (5.0, 25.0)
URLLC_DELAY_RANGE = (1e-3, 5e-3)
URLLC_ERROR_PROB = 1e-5
URLLC_WEIGHT_RANGE = (2.0, 4.0)


@dataclass(frozen=True)
class Deployment:
    """AP/UE positions (meters) and the per-UE slice label."""

    ap_positions: np.ndarray  # (M, 2)
    ue_positions: np.ndarray  # (K, 2)
    ue_slice: tuple[str, ...]

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_ues(self) -> int:
        return self.ue_positions.shape[0]


@dataclass(frozen=True)
class UeProfile:
    """Per-UE QoS contract; URLLC-only fields are None on eMBB and vice versa."""

    slice: str
    weight: float
    packet_bits: int | None = None
    arrival_rate: float | None = None
    delay_budget: float | None = None
    error_prob: float | None = None
    min_rate: float | None = None


@dataclass(frozen=True)
class ChannelState:
    """Large-scale channel snapshot consumed by the link-metric stage."""

    beta: np.ndarray              # (K, M) linear LSFCs
    pilot_index: np.ndarray       # (K,) in {1..tau_p}
    eta_p: np.ndarray             # (K,) pilot power coefficients in (0, 1]
    eta_d: np.ndarray             # (K,) data power coefficients in (0, 1]
    serving_sets: tuple[np.ndarray, ...]  # ascending AP indices per UE
    rho_p: float
    rho_d: float
    tau_p: int
    num_antennas: int


def wrap_distance(a, b, side: float) -> float:
    """Toroidal distance: minimum over the nine translated copies of ``b``."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    best = math.inf
    for ox in (-side, 0.0, side):
        for oy in (-side, 0.0, side):
            best = min(best, math.hypot(bx + ox - ax, by + oy - ay))
    return best


def _wrap_distance_matrix(ue_pos: np.ndarray, ap_pos: np.ndarray, side: float) -> np.ndarray:
    # Per-axis wrap min(|d|, side-|d|) equals the 9-copy minimum because the
    # axes decouple; the property test cross-checks this against wrap_distance.
    d = np.abs(ue_pos[:, None, :] - ap_pos[None, :, :])
    d = np.minimum(d, side - d)
    return np.hypot(d[..., 0], d[..., 1])


def hata_constant(cfg: SimConfig) -> float:
    """Fixed attenuation term of the COST-Hata urban model, in dB."""
    f = cfg.carrier_freq_mhz
    h_ap = cfg.ap_height_m
    h_ue = cfg.ue_height_m
    return (46.3 + 33.9 * math.log10(f) - 13.82 * math.log10(h_ap)
            - (1.1 * math.log10(f) - 0.7) * h_ue + (1.56 * math.log10(f) - 0.8))


def path_loss_db(d: float, cfg: SimConfig) -> float:
    """Three-slope path loss (dB, negative): 35 dB/decade beyond ``d1_m``,
    20 dB/decade between the breakpoints, flat below ``d0_m``."""
    d = max(float(d), 1.0)  # clamp away the singularity at the origin
    big_l = hata_constant(cfg)
    d_km = d / 1000.0
    d0_km = cfg.d0_m / 1000.0
    d1_km = cfg.d1_m / 1000.0
    if d > cfg.d1_m:
        return -big_l - 35.0 * math.log10(d_km)
    if d > cfg.d0_m:
        return -big_l - 15.0 * math.log10(d1_km) - 20.0 * math.log10(d_km)
    return -big_l - 15.0 * math.log10(d1_km) - 20.0 * math.log10(d0_km)


def _path_loss_db_array(dist: np.ndarray, cfg: SimConfig) -> np.ndarray:
    # Vectorized mirror of path_loss_db for the (K, M) distance matrix.
    d = np.maximum(dist, 1.0)
    big_l = hata_constant(cfg)
    d_km = d / 1000.0
    d0_km = cfg.d0_m / 1000.0
    d1_km = cfg.d1_m / 1000.0
    far = -big_l - 35.0 * np.log10(d_km)
    mid = -big_l - 15.0 * math.log10(d1_km) - 20.0 * np.log10(d_km)
    near = -big_l - 15.0 * math.log10(d1_km) - 20.0 * math.log10(d0_km)
    return np.where(d > cfg.d1_m, far, np.where(d > cfg.d0_m, mid, near))


def large_scale_coeff(d: float, z: float, cfg: SimConfig) -> float:
    """Linear LSFC: path loss plus log-normal shadowing beyond the outer
    breakpoint (no shadowing inside it)."""
    pl = path_loss_db(d, cfg)
    if d > cfg.d1_m:
        pl += cfg.shadow_std_db * z
    return 10.0 ** (pl / 10.0)


def generate_deployment(cfg: SimConfig, seed: int) -> Deployment:
    """Uniform i.i.d. AP/UE positions; URLLC labels on a shuffled prefix so the
    slice counts are exact (URLLC count = round(K * urllc_fraction))."""
    rng = np.random.default_rng(seed)
    ap_pos = rng.uniform(0.0, cfg.area_side, size=(cfg.num_aps, 2))
    ue_pos = rng.uniform(0.0, cfg.area_side, size=(cfg.num_ues, 2))
    n_urllc = round(cfg.num_ues * cfg.urllc_fraction)
    labels = np.array([SLICE_EMBB] * cfg.num_ues, dtype=object)
    perm = rng.permutation(cfg.num_ues)
    labels[perm[:n_urllc]] = SLICE_URLLC
    return Deployment(ap_positions=ap_pos, ue_positions=ue_pos,
                      ue_slice=tuple(labels.tolist()))


def assign_pilots(num_ues: int, tau_p: int, seed: int) -> np.ndarray:
    """Uniform random pilot index in {1..tau_p} per UE, independent across UEs."""
    if tau_p < 1:
        raise ValueError("tau_p must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(1, tau_p + 1, size=num_ues)


def associate(beta: np.ndarray, fraction: float) -> tuple[np.ndarray, ...]:
    """Serving set per UE: shortest descending-LSFC prefix of APs reaching
    ``fraction`` of the UE's total LSFC mass (ties broken by AP index)."""
    if not (0 < fraction <= 1.0):
        raise ValueError("fraction must lie in (0, 1]")
    sets = []
    for row in beta:
        order = np.argsort(-row, kind="stable")
        csum = np.cumsum(row[order])
        target = fraction * csum[-1]
        cut = int(np.searchsorted(csum, target, side="left"))
        cut = min(cut, len(row) - 1)
        sets.append(np.sort(order[: cut + 1]))
    return tuple(sets)


def power_control(beta: np.ndarray, serving: tuple[np.ndarray, ...],
                  cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Full pilot power; data power equalizes the aggregate serving-set LSFC to
    the population median, capped at full power."""
    num_ues = beta.shape[0]
    agg = np.array([beta[k, serving[k]].sum() for k in range(num_ues)])
    beta_ref = float(np.median(agg))
    eta_d = np.minimum(1.0, beta_ref / agg)
    eta_p = np.ones(num_ues)
    return eta_p, eta_d


def build_channel(deployment: Deployment, cfg: SimConfig,
                  shadow_seed: int, pilot_seed: int) -> ChannelState:
    """Compose LSFCs, pilots, association, and power control into a ChannelState."""
    dist = _wrap_distance_matrix(deployment.ue_positions, deployment.ap_positions,
                                 cfg.area_side)
    rng = np.random.default_rng(shadow_seed)
    z = rng.standard_normal(size=dist.shape)
    pl = _path_loss_db_array(dist, cfg)
    shadowed = np.where(dist > cfg.d1_m, cfg.shadow_std_db * z, 0.0)
    beta = 10.0 ** ((pl + shadowed) / 10.0)

    pilots = assign_pilots(deployment.num_ues, cfg.tau_p, pilot_seed)
    serving = associate(beta, cfg.association_fraction)
    eta_p, eta_d = power_control(beta, serving, cfg)
    return ChannelState(beta=beta, pilot_index=pilots, eta_p=eta_p, eta_d=eta_d,
                        serving_sets=serving, rho_p=cfg.rho_p, rho_d=cfg.rho_d,
                        tau_p=cfg.tau_p, num_antennas=cfg.antennas_per_ap)


def generate_profiles(deployment: Deployment, cfg: SimConfig, seed: int) -> tuple[UeProfile, ...]:
    """Draw per-UE QoS contracts.

    URLLC: packet size uniform over whole bytes, uniform arrival rate, delay
    budget, and priority weight.  eMBB: a shuffled 30% premium subset gets the
    higher rate floor and weight.  Draws happen in UE-index order from a single
    generator, so profiles are reproducible per seed.
    """
    rng = np.random.default_rng(seed)
    embb_idx = [k for k, s in enumerate(deployment.ue_slice) if s == SLICE_EMBB]
    n_premium = round(len(embb_idx) * PREMIUM_FRACTION)
    premium = set()
    if embb_idx:
        order = rng.permutation(len(embb_idx))
        premium = {embb_idx[i] for i in order[:n_premium]}

    profiles = []
    for k, slice_label in enumerate(deployment.ue_slice):
        if slice_label == SLICE_URLLC:
            nbytes = int(rng.integers(URLLC_BYTES_RANGE[0], URLLC_BYTES_RANGE[1] + 1))
            lam = float(rng.uniform(*URLLC_ARRIVAL_RANGE))
            dmax = float(rng.uniform(*URLLC_DELAY_RANGE))
            weight = float(rng.uniform(*URLLC_WEIGHT_RANGE))
            profiles.append(UeProfile(slice=SLICE_URLLC, weight=weight,
                                      packet_bits=8 * nbytes, arrival_rate=lam,
                                      delay_budget=dmax, error_prob=URLLC_ERROR_PROB))
        else:
            if k in premium:
                rate = float(rng.uniform(*PREMIUM_RATE_RANGE))
                profiles.append(UeProfile(slice=SLICE_EMBB, weight=PREMIUM_WEIGHT,
                                          min_rate=rate))
            else:
                rate = float(rng.uniform(*STANDARD_RATE_RANGE))
                profiles.append(UeProfile(slice=SLICE_EMBB, weight=STANDARD_WEIGHT,
                                          min_rate=rate))
    return tuple(profiles)
