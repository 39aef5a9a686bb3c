# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Typed hot kernels: MMSE estimation quality and the batch SINR sweep.

Same contract as _pykernels; loops exploit the sparsity of the serving sets
instead of dense matrix products.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt


def estimation_quality(double[:, ::1] beta, cnp.int64_t[::1] pilot,
                       double[::1] eta_p, int tau_p, double tau_rho_p):
    cdef Py_ssize_t num_ues = beta.shape[0]
    cdef Py_ssize_t num_aps = beta.shape[1]
    pilot_sums_arr = np.zeros((tau_p, num_aps))
    c_arr = np.empty((num_ues, num_aps))
    gamma_arr = np.empty((num_ues, num_aps))
    cdef double[:, ::1] pilot_sums = pilot_sums_arr
    cdef double[:, ::1] c = c_arr
    cdef double[:, ::1] gamma = gamma_arr
    cdef Py_ssize_t k, m
    cdef cnp.int64_t p
    cdef double amp, den

    for k in range(num_ues):
        p = pilot[k] - 1
        for m in range(num_aps):
            pilot_sums[p, m] += beta[k, m] * eta_p[k]

    for k in range(num_ues):
        p = pilot[k] - 1
        amp = sqrt(tau_rho_p * eta_p[k])
        for m in range(num_aps):
            den = tau_rho_p * pilot_sums[p, m] + 1.0
            c[k, m] = amp * beta[k, m] / den
            gamma[k, m] = amp * beta[k, m] * c[k, m]

    return c_arr, gamma_arr


def batch_sinr(double[:, ::1] gamma, double[:, ::1] beta,
               cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
               cnp.int64_t[::1] pilot, double[::1] eta_p, double[::1] eta_d,
               int n_antennas, double rho_d):
    cdef Py_ssize_t num_ues = gamma.shape[0]
    cdef Py_ssize_t num_aps = gamma.shape[1]
    cdef double n = <double> n_antennas
    received_arr = np.zeros(num_aps)
    out_arr = np.zeros(num_ues)
    cdef double[::1] received = received_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, kk, m, i
    cdef double g_sum, den_noncoh, den_coh, proj, num

    for k in range(num_ues):
        for m in range(num_aps):
            received[m] += eta_d[k] * beta[k, m]

    for k in range(num_ues):
        g_sum = 0.0
        den_noncoh = 0.0
        for i in range(indptr[k], indptr[k + 1]):
            m = indices[i]
            g_sum += gamma[k, m]
            den_noncoh += gamma[k, m] * received[m]
        den_noncoh *= n * rho_d

        den_coh = 0.0
        for kk in range(num_ues):
            if kk != k and pilot[kk] == pilot[k]:
                proj = 0.0
                for i in range(indptr[k], indptr[k + 1]):
                    m = indices[i]
                    proj += gamma[k, m] * beta[kk, m] / beta[k, m]
                proj *= sqrt(eta_p[kk] / eta_p[k])
                den_coh += eta_d[kk] * proj * proj
        den_coh *= n * n * rho_d

        num = n * n * rho_d * eta_d[k] * g_sum * g_sum
        if num > 0.0:
            out[k] = num / (den_noncoh + den_coh + n * g_sum)

    return out_arr
