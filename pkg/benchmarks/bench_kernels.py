#!/usr/bin/env python
"""Time the channel-estimation and SINR kernels on both backends.

Run from anywhere after installing the package:

    python benchmarks/bench_kernels.py [K ...]

Reports best-of-N wall time per call for the pure-numpy backend and, when the
compiled extension built, for the compiled backend, plus the speedup.
"""

from __future__ import annotations

import sys
import time

import numpy as np

from slicecf.config import SimConfig
from slicecf.kernels import _pykernels, serving_csr
from slicecf.linkmetrics import estimation_quality as _est_state
from slicecf.netgen import build_channel, generate_deployment

try:
    from slicecf.kernels import _cykernels
except ImportError:
    _cykernels = None

REPEATS = 30


def _best_of(fn, repeats: int = REPEATS) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _setup(num_ues: int):
    cfg = SimConfig(num_ues=num_ues)
    deployment = generate_deployment(cfg, seed=1)
    state = build_channel(deployment, cfg, shadow_seed=2, pilot_seed=3)
    beta = np.ascontiguousarray(state.beta)
    pilot = np.asarray(state.pilot_index, dtype=np.int64)
    eta_p = np.asarray(state.eta_p, dtype=float)
    eta_d = np.asarray(state.eta_d, dtype=float)
    indptr, indices = serving_csr(state.serving_sets)
    _, gamma = _est_state(state)
    gamma = np.ascontiguousarray(gamma)
    tau_rho_p = state.tau_p * state.rho_p
    args_est = (beta, pilot, eta_p, state.tau_p, tau_rho_p)
    args_sinr = (gamma, beta, indptr, indices, pilot, eta_p, eta_d,
                 state.num_antennas, state.rho_d)
    return args_est, args_sinr


def _bench(num_ues: int) -> None:
    args_est, args_sinr = _setup(num_ues)
    print(f"K={num_ues}")
    for name, mod in (("python", _pykernels), ("compiled", _cykernels)):
        if mod is None:
            print(f"  {name:>8}: extension not built")
            continue
        t_est = _best_of(lambda: mod.estimation_quality(*args_est))
        t_sinr = _best_of(lambda: np.asarray(mod.batch_sinr(*args_sinr)))
        print(f"  {name:>8}: estimation {t_est * 1e6:9.1f} us   "
              f"sinr {t_sinr * 1e6:9.1f} us")
        if name == "python":
            base_est, base_sinr = t_est, t_sinr
        else:
            print(f"  {'speedup':>8}: estimation {base_est / t_est:8.2f}x   "
                  f"sinr {base_sinr / t_sinr:8.2f}x")
    if _cykernels is not None:
        ref = np.asarray(_pykernels.batch_sinr(*args_sinr))
        got = np.asarray(_cykernels.batch_sinr(*args_sinr))
        scale = np.maximum(np.abs(ref), 1e-300)
        print(f"  max |rel diff| between backends: "
              f"{float(np.max(np.abs(got - ref) / scale)):.3e}")


def main() -> None:
    sizes = [int(a) for a in sys.argv[1:]] or [50, 100, 200]
    for num_ues in sizes:
        _bench(num_ues)


if __name__ == "__main__":
    main()
