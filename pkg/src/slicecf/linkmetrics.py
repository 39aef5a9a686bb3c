"""Per-UE link quality: MMSE estimation quality, closed-form uplink SINR,
slice-specific spectral efficiency, queueing delay, and minimum bandwidth.

The SINR expression models MR combining over each UE's serving set with pilot
contamination: a non-coherent term from all interferers, a coherent term from
co-pilot interferers (scaled LSFC projections), and normalized noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .config import SimConfig
from .netgen import SLICE_URLLC, ChannelState, UeProfile

LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinkMetrics:
    """Per-UE link quantities for one drop."""

    c: np.ndarray            # (K, M) estimation coefficients
    gamma: np.ndarray        # (K, M) estimation quality
    sinr: np.ndarray         # (K,) linear
    se: np.ndarray           # (K,) bits/s/Hz; URLLC entries may be negative
    dispersion: np.ndarray   # (K,) channel dispersion V in [0, 1)
    b_min: np.ndarray        # (K,) Hz; +inf when no bandwidth suffices
    r_min_effective: np.ndarray  # (K,) bits/s


def estimation_quality(state: ChannelState) -> tuple[np.ndarray, np.ndarray]:
    """(c, gamma) matrices; co-pilot UEs contaminate each other's estimates."""
    return kernels.estimation_quality(state.beta, state.pilot_index, state.eta_p,
                                      state.tau_p, state.tau_p * state.rho_p)


def sinr(k: int, state: ChannelState, gamma: np.ndarray,
         return_terms: bool = False):
    """Definitional (loop) evaluation of the closed-form SINR for UE ``k``.

    The batch kernels must agree with this function; tests hold them to it.
    With ``return_terms`` the three denominator components are also returned
    (non-coherent interference, coherent co-pilot interference, noise).
    """
    serving = state.serving_sets[k]
    if len(serving) == 0:
        raise ValueError(f"UE {k} has an empty serving set")
    n = float(state.num_antennas)
    rho_d = state.rho_d
    beta = state.beta
    g_sum = float(gamma[k, serving].sum())

    num = n * n * rho_d * state.eta_d[k] * g_sum * g_sum

    den_noncoh = 0.0
    for kk in range(beta.shape[0]):
        den_noncoh += state.eta_d[kk] * float((gamma[k, serving] * beta[kk, serving]).sum())
    den_noncoh *= n * rho_d

    den_coh = 0.0
    for kk in range(beta.shape[0]):
        if kk == k or state.pilot_index[kk] != state.pilot_index[k]:
            continue
        proj = float((gamma[k, serving] * beta[kk, serving] / beta[k, serving]).sum())
        proj *= math.sqrt(state.eta_p[kk] / state.eta_p[k])
        den_coh += state.eta_d[kk] * proj * proj
    den_coh *= n * n * rho_d

    den_noise = n * g_sum

    value = num / (den_noncoh + den_coh + den_noise) if num > 0 else 0.0
    if return_terms:
        return value, (den_noncoh, den_coh, den_noise)
    return value


def _q_function(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@lru_cache(maxsize=64)
def q_inverse(theta: float) -> float:
    """Inverse Gaussian Q-function by bracketed bisection plus Newton polish.

    Accurate to ~1e-12 absolute over the probability range used here.
    """
    if not (0.0 < theta < 1.0):
        raise ValueError("theta must lie in (0, 1)")
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _q_function(mid) > theta:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9:
            break
    x = 0.5 * (lo + hi)
    for _ in range(4):
        # Q'(x) = -phi(x); Newton step on Q(x) - theta = 0.
        pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        if pdf == 0.0:
            break
        x -= (theta - _q_function(x)) / pdf
    return x


def dispersion(sinr_value: float) -> float:
    """Channel dispersion V = 1 - (1 + SINR)^-2, in [0, 1)."""
    return 1.0 - (1.0 + sinr_value) ** -2


def spectral_efficiency(sinr_value: float, profile: UeProfile, cfg: SimConfig) -> float:
    """Shannon SE with the pilot-overhead prelog; URLLC additionally pays the
    finite-blocklength penalty and may come out negative (infeasible link)."""
    prelog = cfg.prelog
    shannon = math.log2(1.0 + sinr_value)
    if profile.slice != SLICE_URLLC:
        return prelog * shannon
    blocklength = profile.packet_bits * cfg.blocklength_per_byte / 8.0
    v = dispersion(sinr_value)
    penalty = math.sqrt(v / blocklength) * q_inverse(profile.error_prob) / LN2
    return prelog * (shannon - penalty)


def urllc_min_rate(profile: UeProfile) -> float:
    """Smallest service rate keeping the M/M/1 sojourn time within budget."""
    if profile.slice != SLICE_URLLC:
        raise ValueError("minimum-rate condition applies to URLLC profiles only")
    return profile.packet_bits * (profile.arrival_rate + 1.0 / profile.delay_budget)


def min_bandwidth(se: float, r_min: float) -> float:
    """Bandwidth demand r_min / SE; +inf when SE <= 0 (no bandwidth suffices)."""
    if se <= 0.0:
        return math.inf
    return r_min / se


def delay(rate: float, profile: UeProfile) -> float:
    """M/M/1 sojourn time at the given service rate; +inf when unstable."""
    if profile.slice != SLICE_URLLC:
        raise ValueError("delay model applies to URLLC profiles only")
    mu = rate / profile.packet_bits
    if mu <= profile.arrival_rate:
        return math.inf
    return 1.0 / (mu - profile.arrival_rate)


def link_metrics(state: ChannelState, profiles: tuple[UeProfile, ...],
                 cfg: SimConfig) -> LinkMetrics:
    """Full per-UE metric sweep for one drop (batch path through the kernels)."""
    c, gamma = estimation_quality(state)
    indptr, indices = kernels.serving_csr(state.serving_sets)
    sinr_vec = kernels.batch_sinr(gamma, state.beta, indptr, indices,
                                  state.pilot_index, state.eta_p, state.eta_d,
                                  state.num_antennas, state.rho_d)
    num_ues = state.beta.shape[0]
    se = np.empty(num_ues)
    disp = np.empty(num_ues)
    r_min = np.empty(num_ues)
    b_min = np.empty(num_ues)
    for k, profile in enumerate(profiles):
        se[k] = spectral_efficiency(float(sinr_vec[k]), profile, cfg)
        disp[k] = dispersion(float(sinr_vec[k]))
        if profile.slice == SLICE_URLLC:
            r_min[k] = urllc_min_rate(profile)
        else:
            r_min[k] = profile.min_rate
        b_min[k] = min_bandwidth(se[k], r_min[k])
    return LinkMetrics(c=c, gamma=gamma, sinr=sinr_vec, se=se, dispersion=disp,
                       b_min=b_min, r_min_effective=r_min)
