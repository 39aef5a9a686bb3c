"""Backend selection and numerical parity of the hot kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from slicecf.config import SimConfig
from slicecf.kernels import (BACKEND, _pykernels, batch_sinr,
                             estimation_quality, serving_csr)
from slicecf.linkmetrics import sinr as scalar_sinr
from slicecf.netgen import build_channel, generate_deployment

try:
    from slicecf.kernels import _cykernels
except ImportError:
    _cykernels = None

needs_extension = pytest.mark.skipif(_cykernels is None,
                                     reason="compiled extension not built")


def kernel_args(num_ues=24, seed=5):
    cfg = SimConfig(num_ues=num_ues)
    deployment = generate_deployment(cfg, seed=seed)
    state = build_channel(deployment, cfg, shadow_seed=seed + 1,
                          pilot_seed=seed + 2)
    beta = np.ascontiguousarray(state.beta)
    pilot = np.asarray(state.pilot_index, dtype=np.int64)
    eta_p = np.asarray(state.eta_p, dtype=float)
    eta_d = np.asarray(state.eta_d, dtype=float)
    indptr, indices = serving_csr(state.serving_sets)
    args_est = (beta, pilot, eta_p, state.tau_p, state.tau_p * state.rho_p)
    c, gamma = _pykernels.estimation_quality(*args_est)
    args_sinr = (np.ascontiguousarray(gamma), beta, indptr, indices, pilot,
                 eta_p, eta_d, state.num_antennas, state.rho_d)
    return state, args_est, args_sinr


def test_serving_csr_packing():
    indptr, indices = serving_csr([(0, 2), (1,), ()])
    assert indptr.tolist() == [0, 2, 3, 3]
    assert indices.tolist() == [0, 2, 1]
    indptr, indices = serving_csr([])
    assert indptr.tolist() == [0]
    assert indices.shape == (0,)


def test_batch_matches_scalar_definition():
    # the batch kernel must agree with the per-UE reference expression
    state, args_est, args_sinr = kernel_args()
    c, gamma = estimation_quality(*args_est)
    values = np.asarray(batch_sinr(*args_sinr))
    for k in range(len(state.pilot_index)):
        assert values[k] == pytest.approx(scalar_sinr(k, state, gamma),
                                          rel=1e-9, abs=1e-300)


@needs_extension
def test_backends_agree_on_estimation():
    _, args_est, _ = kernel_args()
    c_py, g_py = _pykernels.estimation_quality(*args_est)
    c_cy, g_cy = _cykernels.estimation_quality(*args_est)
    np.testing.assert_allclose(np.asarray(c_cy), np.asarray(c_py), rtol=1e-12)
    np.testing.assert_allclose(np.asarray(g_cy), np.asarray(g_py), rtol=1e-12)


@needs_extension
def test_backends_agree_on_sinr():
    for seed in (5, 6, 7):
        _, _, args_sinr = kernel_args(seed=seed)
        ref = np.asarray(_pykernels.batch_sinr(*args_sinr))
        got = np.asarray(_cykernels.batch_sinr(*args_sinr))
        np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_backend_name_is_consistent():
    assert BACKEND in ("compiled", "python")
    if _cykernels is None:
        assert BACKEND == "python"


def test_env_var_forces_python_backend():
    env = dict(os.environ, SLICECF_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import slicecf; print(slicecf.BACKEND)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_estimation_output_ranges():
    state, args_est, _ = kernel_args()
    c, gamma = estimation_quality(*args_est)
    beta = np.asarray(state.beta)
    assert c.shape == beta.shape == gamma.shape
    assert np.all(c >= 0) and np.all(np.isfinite(c))
    # gamma is the variance of the channel estimate: bounded by beta
    assert np.all(gamma >= 0)
    assert np.all(gamma <= beta * (1 + 1e-12))
