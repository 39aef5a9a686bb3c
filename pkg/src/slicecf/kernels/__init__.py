"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist: a Cython extension and a pure-numpy
fallback.  The compiled one is preferred when importable; setting the
environment variable ``SLICECF_PURE_PYTHON=1`` forces the fallback.  ``BACKEND``
names whichever is active.  Both produce the same values to floating-point
round-off (see tests and benchmarks/bench_kernels.py).
"""

import os

import numpy as np

from . import _pykernels

_cy = None
if os.environ.get("SLICECF_PURE_PYTHON", "") != "1":
    try:
        from . import _cykernels as _cy  # type: ignore[no-redef]
    except ImportError:
        _cy = None

BACKEND = "compiled" if _cy is not None else "python"
_impl = _cy if _cy is not None else _pykernels


def serving_csr(serving_sets) -> tuple[np.ndarray, np.ndarray]:
    """Pack per-UE serving sets into CSR-style (indptr, indices) arrays."""
    counts = np.asarray([len(s) for s in serving_sets], dtype=np.int64)
    indptr = np.zeros(len(serving_sets) + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    if len(serving_sets):
        indices = np.concatenate([np.asarray(s, dtype=np.int64) for s in serving_sets])
    else:
        indices = np.zeros(0, dtype=np.int64)
    return indptr, np.ascontiguousarray(indices, dtype=np.int64)


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def estimation_quality(beta, pilot, eta_p, tau_p, tau_rho_p):
    """MMSE estimation-quality matrices (c, gamma) for all UE-AP pairs."""
    return _impl.estimation_quality(_f64(beta), _i64(pilot), _f64(eta_p),
                                    int(tau_p), float(tau_rho_p))


def batch_sinr(gamma, beta, indptr, indices, pilot, eta_p, eta_d,
               n_antennas, rho_d):
    """Closed-form uplink SINR for every UE at once."""
    return _impl.batch_sinr(_f64(gamma), _f64(beta), _i64(indptr), _i64(indices),
                            _i64(pilot), _f64(eta_p), _f64(eta_d),
                            int(n_antennas), float(rho_d))
