"""Exact oracles and the comparison baseline.

The bandwidth-split problem with a linear objective and only the total-budget
coupling is an LP whose optimum has closed form: everyone at their minimum and
the whole surplus on the single most efficient UE.  That optimum upper-bounds
the iterative allocator on every admitted set.  For tiny instances the
admission problem itself is solved exactly by subset enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .admission import AdmissionInput
from .errors import InfeasibleError
from .netgen import SLICE_URLLC

BRUTE_FORCE_MAX_UES = 15


@dataclass(frozen=True)
class OracleResult:
    objective: float
    b: np.ndarray
    method: str


def lp_optimum(ues, total_bandwidth: float) -> OracleResult:
    """Closed-form optimum over (weight, se, b_min) triples.

    All UEs sit at their minimum; the surplus goes to the UE maximizing
    w * SE (ties to the lowest index).
    """
    b_min = np.array([u[2] for u in ues])
    v = np.array([u[0] * u[1] for u in ues])
    total_min = float(b_min.sum())
    if total_min > total_bandwidth + 1e-6:
        raise InfeasibleError(
            f"aggregate minimum {total_min:.6f} Hz exceeds budget "
            f"{total_bandwidth:.6f} Hz")
    b = b_min.astype(float).copy()
    if len(ues):
        b[int(np.argmax(v))] += total_bandwidth - total_min
    objective = float(np.dot(v, b))
    return OracleResult(objective=objective, b=b, method="lp_optimum")


@dataclass(frozen=True)
class BruteForceResult:
    admitted_urllc: tuple[int, ...]
    admitted_embb: tuple[int, ...]
    total_gamma: float


def _best_subsets(indices, b_min, gamma, cap):
    """All maximal subsets attaining the maximum total gamma within ``cap``."""
    best_gamma = -1.0
    best: list[tuple[tuple[int, ...], float]] = []
    for r in range(len(indices) + 1):
        for combo in combinations(indices, r):
            used = sum(b_min[k] for k in combo)
            if used > cap:
                continue
            total = sum(gamma[k] for k in combo)
            if total > best_gamma:
                best_gamma = total
                best = [(combo, used)]
            elif total == best_gamma:
                best.append((combo, used))
    maximal = []
    for combo, used in best:
        rest = [k for k in indices if k not in combo]
        if all(used + b_min[k] > cap for k in rest):
            maximal.append((combo, used))
    return maximal if maximal else best


def brute_force_admission(inp: AdmissionInput) -> BruteForceResult:
    """Exhaustive two-level admission optimum for small instances.

    URLLC subsets are enumerated within their stage cap and the maximal
    max-gamma ones kept; eMBB subsets then fill each remaining budget.  The
    returned pair maximizes total gamma subject to that priority order.
    """
    num_ues = len(inp.slices)
    if num_ues > BRUTE_FORCE_MAX_UES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_UES} UEs")
    gamma = [inp.gamma(k) for k in range(num_ues)]
    urllc = [k for k in range(num_ues)
             if inp.slices[k] == SLICE_URLLC and np.isfinite(inp.b_min[k])]
    embb = [k for k in range(num_ues)
            if inp.slices[k] != SLICE_URLLC and np.isfinite(inp.b_min[k])]

    cap_urllc = inp.total_bandwidth - inp.b_embb_min
    urllc_candidates = _best_subsets(urllc, inp.b_min, gamma, cap_urllc)

    best = None
    for urllc_set, urllc_used in urllc_candidates:
        residual = inp.total_bandwidth - urllc_used
        embb_candidates = _best_subsets(embb, inp.b_min, gamma, residual)
        embb_set = embb_candidates[0][0] if embb_candidates else ()
        total = sum(gamma[k] for k in urllc_set) + sum(gamma[k] for k in embb_set)
        if best is None or total > best[2]:
            best = (urllc_set, embb_set, total)
    assert best is not None
    return BruteForceResult(admitted_urllc=tuple(best[0]),
                            admitted_embb=tuple(best[1]),
                            total_gamma=float(best[2]))


def mu_analytic(ues, budget: float) -> float:
    """Closed-form marginal utility of a QA-ruled slice:
    sum(v * phi) / sum(phi) with v = w * SE and phi = v^2."""
    b_min = sum(u[2] for u in ues)
    if budget < b_min - 1e-6:
        raise InfeasibleError("slice budget below aggregate minimum")
    v = np.array([u[0] * u[1] for u in ues])
    phi = v ** 2
    phi_sum = float(phi.sum())
    if phi_sum == 0.0:
        return 0.0
    return float(np.dot(v, phi) / phi_sum)


def round_robin(weights, se, total_bandwidth: float) -> OracleResult:
    """Equal split of the band across every UE, no admission filtering."""
    num_ues = len(weights)
    if num_ues < 1:
        raise ValueError("round robin needs at least one UE")
    share = total_bandwidth / num_ues
    b = np.full(num_ues, share)
    objective = float(sum(w * share * s for w, s in zip(weights, se)))
    return OracleResult(objective=objective, b=b, method="round_robin")
