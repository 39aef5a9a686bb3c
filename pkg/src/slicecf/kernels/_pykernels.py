"""Pure-numpy kernel implementations (fallback backend).

Mirrors _cykernels exactly; kept vectorized so campaigns stay usable without a
compiler.
"""

import numpy as np


def estimation_quality(beta, pilot, eta_p, tau_p, tau_rho_p):
    num_ues, num_aps = beta.shape
    # Per-pilot contamination sums: S[p, m] = sum of beta*eta_p over UEs on pilot p+1.
    pilot_sums = np.zeros((tau_p, num_aps))
    np.add.at(pilot_sums, pilot - 1, beta * eta_p[:, None])
    den = tau_rho_p * pilot_sums[pilot - 1, :] + 1.0
    amp = np.sqrt(tau_rho_p * eta_p)[:, None]
    c = amp * beta / den
    gamma = amp * beta * c
    return c, gamma


def batch_sinr(gamma, beta, indptr, indices, pilot, eta_p, eta_d,
               n_antennas, rho_d):
    num_ues, num_aps = gamma.shape
    n = float(n_antennas)

    mask = np.zeros((num_ues, num_aps), dtype=bool)
    rows = np.repeat(np.arange(num_ues), np.diff(indptr))
    mask[rows, indices] = True

    g_serv = np.where(mask, gamma, 0.0)
    g_sum = g_serv.sum(axis=1)
    received = beta.T @ eta_d  # total power density per AP
    den_noncoh = n * rho_d * (g_serv @ received)

    # Coherent pilot-contamination term: pairwise projections of interferer
    # LSFCs onto the target's serving profile, restricted to shared pilots.
    ratio = np.where(mask, gamma / beta, 0.0)
    inner = ratio @ beta.T
    copilot = pilot[:, None] == pilot[None, :]
    np.fill_diagonal(copilot, False)
    power_ratio = np.sqrt(eta_p[None, :] / eta_p[:, None])
    den_coh = n * n * rho_d * np.sum(
        copilot * eta_d[None, :] * (power_ratio * inner) ** 2, axis=1)

    den_noise = n * g_sum
    num = n * n * rho_d * eta_d * g_sum ** 2
    den = den_noncoh + den_coh + den_noise

    out = np.zeros(num_ues)
    pos = num > 0
    out[pos] = num[pos] / den[pos]
    return out
