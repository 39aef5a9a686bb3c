"""Estimation quality, SINR, spectral efficiency, delay, and demand."""

import math

import numpy as np
import pytest

from slicecf.config import SimConfig
from slicecf.linkmetrics import (delay, dispersion, estimation_quality,
                                 link_metrics, min_bandwidth, q_inverse, sinr,
                                 spectral_efficiency, urllc_min_rate)
from slicecf.netgen import (ChannelState, SLICE_EMBB, SLICE_URLLC, UeProfile,
                            build_channel, generate_deployment,
                            generate_profiles)

CFG = SimConfig(num_ues=30)

URLLC_PROFILE = UeProfile(slice=SLICE_URLLC, weight=2.0, packet_bits=512,
                          arrival_rate=10.0, delay_budget=2e-3, error_prob=1e-5)
EMBB_PROFILE = UeProfile(slice=SLICE_EMBB, weight=1.0, min_rate=1e6)


def make_state(beta, pilot, eta_p=None, eta_d=None, serving=None,
               rho_p=1.0, rho_d=1.0, tau_p=1, n_antennas=4):
    beta = np.asarray(beta, dtype=float)
    num_ues, num_aps = beta.shape
    if eta_p is None:
        eta_p = np.ones(num_ues)
    if eta_d is None:
        eta_d = np.ones(num_ues)
    if serving is None:
        serving = tuple(np.arange(num_aps) for _ in range(num_ues))
    return ChannelState(beta=beta, pilot_index=np.asarray(pilot, dtype=np.int64),
                        eta_p=np.asarray(eta_p, dtype=float),
                        eta_d=np.asarray(eta_d, dtype=float),
                        serving_sets=serving, rho_p=rho_p, rho_d=rho_d,
                        tau_p=tau_p, num_antennas=n_antennas)


# -------------------------------------------------------- estimation quality

def test_estimation_single_ue_unit_case():
    # tau_p * rho_p * eta_p = 1 and beta = 1: c = 1/(1+1), gamma = beta * c
    state = make_state([[1.0]], [1])
    c, gamma = estimation_quality(state)
    assert c[0, 0] == pytest.approx(0.5, rel=1e-12)
    assert gamma[0, 0] == pytest.approx(0.5, rel=1e-12)


def test_estimation_vanishes_without_pilot_power():
    state = make_state([[1.0, 2.0]], [1], rho_p=1e-30)
    _, gamma = estimation_quality(state)
    assert np.all(gamma < 1e-12)


def test_copilot_ue_degrades_estimate():
    clean = make_state([[1.0], [0.5]], [1, 2], tau_p=2)
    dirty = make_state([[1.0], [0.5]], [1, 1], tau_p=2)
    c_clean, _ = estimation_quality(clean)
    c_dirty, _ = estimation_quality(dirty)
    assert c_dirty[0, 0] < c_clean[0, 0]
    # the UE on the untouched pilot keeps its estimate in the clean case only
    assert c_dirty[1, 0] < c_clean[1, 0]


# ----------------------------------------------------------------------- sinr

def test_sinr_hand_evaluated_case():
    # N=4, rho_d=1, all eta=1, one UE, one AP, gamma=0.5, beta=1:
    # num 16*0.25=4, den 4*0.5 + 0 + 4*0.5 = 4
    state = make_state([[1.0]], [1])
    gamma = np.array([[0.5]])
    assert sinr(0, state, gamma) == pytest.approx(1.0, rel=1e-12)


def test_sinr_zero_numerator_and_empty_serving():
    state = make_state([[1.0]], [1], eta_d=[0.0])
    gamma = np.array([[0.5]])
    assert sinr(0, state, gamma) == 0.0

    empty = make_state([[1.0]], [1], serving=(np.array([], dtype=np.int64),))
    with pytest.raises(ValueError):
        sinr(0, empty, gamma)


def test_silencing_copilot_interferer_never_hurts():
    rng = np.random.default_rng(42)
    for _ in range(25):
        num_ues, num_aps = 6, 8
        beta = rng.lognormal(-1.0, 1.5, (num_ues, num_aps))
        pilot = rng.integers(1, 3, num_ues)
        eta_d = rng.uniform(0.2, 1.0, num_ues)
        state = make_state(beta, pilot, eta_d=eta_d, tau_p=2,
                           rho_p=50.0, rho_d=50.0)
        _, gamma = estimation_quality(state)
        base = sinr(0, state, gamma)
        copilots = [k for k in range(1, num_ues) if pilot[k] == pilot[0]]
        if not copilots:
            continue
        quiet_eta = eta_d.copy()
        quiet_eta[copilots[0]] = 0.0
        quiet = make_state(beta, pilot, eta_d=quiet_eta, tau_p=2,
                           rho_p=50.0, rho_d=50.0)
        assert sinr(0, quiet, gamma) >= base - 1e-12


def test_distinct_pilots_kill_coherent_term():
    rng = np.random.default_rng(5)
    beta = rng.lognormal(0.0, 1.0, (4, 6))
    state = make_state(beta, [1, 2, 3, 4], tau_p=4, rho_p=10.0, rho_d=10.0)
    _, gamma = estimation_quality(state)
    for k in range(4):
        _, (_, den_coh, _) = sinr(k, state, gamma, return_terms=True)
        assert den_coh == 0.0


def test_common_beta_scale_leaves_coherent_term_unchanged():
    # the co-pilot projection depends on beta only through ratios, so scaling
    # every LSFC by the same constant (gamma held fixed) must not move it
    rng = np.random.default_rng(17)
    beta = rng.lognormal(0.0, 1.0, (5, 7))
    gamma = rng.uniform(0.01, 0.2, (5, 7))
    pilot = [1, 1, 2, 1, 2]
    state_a = make_state(beta, pilot, tau_p=2)
    state_b = make_state(1000.0 * beta, pilot, tau_p=2)
    for k in range(5):
        _, (noncoh_a, coh_a, noise_a) = sinr(k, state_a, gamma, return_terms=True)
        _, (noncoh_b, coh_b, noise_b) = sinr(k, state_b, gamma, return_terms=True)
        assert coh_b == pytest.approx(coh_a, rel=1e-9)
        assert noise_b == noise_a
        assert noncoh_b == pytest.approx(1000.0 * noncoh_a, rel=1e-9)


# ------------------------------------------------------------------ q_inverse

def test_q_inverse_reference_values():
    assert q_inverse(0.5) == pytest.approx(0.0, abs=1e-10)
    # frozen via 200-step bisection on 0.5*erfc(x/sqrt(2))
    assert q_inverse(1e-5) == pytest.approx(4.2648907939228256, abs=1e-8)


def test_q_inverse_round_trip():
    for theta in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7):
        x = q_inverse(theta)
        q = 0.5 * math.erfc(x / math.sqrt(2.0))
        assert abs(q - theta) / theta <= 1e-10


def test_q_inverse_domain():
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            q_inverse(bad)


# --------------------------------------------------------- spectral efficiency

def test_embb_se_reference_point():
    assert spectral_efficiency(1.0, EMBB_PROFILE, CFG) == 0.95  # exact


def test_urllc_se_reference_point():
    profile = UeProfile(slice=SLICE_URLLC, weight=2.0, packet_bits=256,
                        arrival_rate=10.0, delay_budget=2e-3, error_prob=1e-5)
    # 0.95 * (1 - sqrt(0.75/256) * Qinv(1e-5) / ln 2), frozen independently
    assert spectral_efficiency(1.0, profile, CFG) == pytest.approx(
        0.6336144002207227, rel=1e-9)


def test_se_at_zero_sinr():
    assert spectral_efficiency(0.0, EMBB_PROFILE, CFG) == 0.0
    assert spectral_efficiency(0.0, URLLC_PROFILE, CFG) == 0.0  # V(0) = 0


def test_urllc_se_below_embb_se():
    for s in (1e-3, 0.1, 1.0, 10.0, 1e3):
        embb = spectral_efficiency(s, EMBB_PROFILE, CFG)
        urllc = spectral_efficiency(s, URLLC_PROFILE, CFG)
        assert urllc < embb


def test_se_monotonicity_grid():
    grid = np.geomspace(1e-3, 1e3, 400)
    embb = [spectral_efficiency(float(s), EMBB_PROFILE, CFG) for s in grid]
    assert all(b > a for a, b in zip(embb, embb[1:]))
    urllc = [spectral_efficiency(float(s), URLLC_PROFILE, CFG) for s in grid]
    diffs = np.diff(urllc)
    # the finite-blocklength penalty wins below a small crossover SINR; beyond
    # the first rising step the curve must keep rising
    first_up = int(np.argmax(diffs > 0))
    assert np.all(diffs[first_up:] > 0), "URLLC SE dipped past its crossover"


def test_dispersion_range():
    assert dispersion(0.0) == 0.0
    for s in (0.1, 1.0, 100.0):
        assert 0.0 < dispersion(s) < 1.0


# ----------------------------------------------------- rate/delay/bandwidth

def test_urllc_min_rate_exact():
    assert urllc_min_rate(URLLC_PROFILE) == 261120.0  # 512 * (10 + 500), exact
    doubled = UeProfile(slice=SLICE_URLLC, weight=2.0, packet_bits=1024,
                        arrival_rate=10.0, delay_budget=2e-3, error_prob=1e-5)
    assert urllc_min_rate(doubled) == 2 * 261120.0
    relaxed = UeProfile(slice=SLICE_URLLC, weight=2.0, packet_bits=512,
                        arrival_rate=10.0, delay_budget=1e9, error_prob=1e-5)
    assert urllc_min_rate(relaxed) == pytest.approx(512 * 10.0, rel=1e-6)
    with pytest.raises(ValueError):
        urllc_min_rate(EMBB_PROFILE)


def test_min_bandwidth():
    assert min_bandwidth(2.0, 1e6) == 0.5e6
    assert min_bandwidth(0.0, 1e6) == math.inf
    assert min_bandwidth(-0.3, 1e6) == math.inf
    se = spectral_efficiency(1.0, UeProfile(slice=SLICE_URLLC, weight=2.0,
                                            packet_bits=256, arrival_rate=10.0,
                                            delay_budget=2e-3, error_prob=1e-5), CFG)
    assert min_bandwidth(se, 261120.0) == pytest.approx(412111.84579933406, rel=1e-9)


def test_delay_reference_and_edges():
    assert delay(261120.0, URLLC_PROFILE) == 2e-3  # 1/(510-10) exactly
    assert delay(512 * 10.0, URLLC_PROFILE) == math.inf   # at the stability edge
    assert delay(100.0, URLLC_PROFILE) == math.inf
    assert delay(1e12, URLLC_PROFILE) < 1e-6
    with pytest.raises(ValueError):
        delay(1e6, EMBB_PROFILE)


# -------------------------------------------------------------- full pipeline

def test_link_metrics_batch_consistency():
    dep = generate_deployment(CFG, seed=50)
    profiles = generate_profiles(dep, CFG, seed=51)
    state = build_channel(dep, CFG, shadow_seed=52, pilot_seed=53)
    metrics = link_metrics(state, profiles, CFG)

    assert metrics.sinr.shape == (CFG.num_ues,)
    assert np.all(metrics.sinr >= 0)
    assert np.all((metrics.dispersion >= 0) & (metrics.dispersion < 1))
    for k, profile in enumerate(profiles):
        if profile.slice == SLICE_EMBB:
            assert metrics.se[k] >= 0
            assert metrics.r_min_effective[k] == profile.min_rate
        if metrics.se[k] <= 0:
            assert metrics.b_min[k] == math.inf
        else:
            assert metrics.b_min[k] == pytest.approx(
                metrics.r_min_effective[k] / metrics.se[k], rel=1e-12)


def test_b_min_restores_qos_exactly():
    # serving a UE at exactly b_min * SE must hit its target: rate floor for
    # eMBB, delay budget for URLLC
    dep = generate_deployment(CFG, seed=60)
    profiles = generate_profiles(dep, CFG, seed=61)
    state = build_channel(dep, CFG, shadow_seed=62, pilot_seed=63)
    metrics = link_metrics(state, profiles, CFG)
    checked = 0
    for k, profile in enumerate(profiles):
        if not math.isfinite(metrics.b_min[k]):
            continue
        rate = metrics.b_min[k] * metrics.se[k]
        if profile.slice == SLICE_URLLC:
            assert delay(rate, profile) == pytest.approx(profile.delay_budget,
                                                         rel=1e-9)
        else:
            assert rate == pytest.approx(profile.min_rate, rel=1e-9)
        checked += 1
    assert checked >= CFG.num_ues // 2  # the drop is not degenerate
