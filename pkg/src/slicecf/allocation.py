"""Iterative inter-slice bandwidth allocation.

Each slice's budget starts at its admitted minimum plus a head-count share of
the surplus.  The loop then repeatedly moves bandwidth from the slice with the
smallest marginal utility to the one with the largest, re-splitting each
touched slice with the quadratic-allocation (QA) rule, and keeps a transfer
only when the global weighted objective strictly improves.

QA hands every UE its minimum and splits the slice surplus proportionally to
phi = (w * SE)^2, which makes the slice objective linear in the slice budget —
so the marginal utility of a slice is budget-independent and the
finite-difference gradient is exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError

TERMINATION_REASONS = ("mu_balanced", "transfer_floor", "patience", "max_iter")


@dataclass(frozen=True)
class AllocationParams:
    """Loop controls; defaults follow the evaluated configuration.

    ``shrink_on_reject`` is an experimental, non-default variant that halves
    the transfer step after each consecutive rejection.
    """

    t_max: int = 50
    t_patience: int = 5
    eps_transfer: float = 0.01e6
    delta_b: float = 0.1e6
    mu_ratio: float = 1.05
    shrink_on_reject: bool = False

    def __post_init__(self):
        if self.t_max < 0 or self.t_patience < 1:
            raise ValueError("t_max must be >= 0, t_patience >= 1")
        if self.eps_transfer <= 0 or self.delta_b <= 0:
            raise ValueError("eps_transfer and delta_b must be positive")
        if self.mu_ratio <= 1.0:
            raise ValueError("mu_ratio must exceed 1")


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    mu: tuple[float, ...]
    donor: str
    receiver: str
    delta_b: float
    accepted: bool
    objective: float


@dataclass(frozen=True)
class AllocationResult:
    slice_names: tuple[str, ...]
    slice_budgets: tuple[float, ...]
    b: np.ndarray                    # full-length per-UE Hz; rejected UEs hold 0
    objective: float
    iterations_run: int
    termination_reason: str
    trace: tuple[TraceStep, ...]


def weighted_objective(b, weights, se) -> float:
    """Sum of w * b * SE over aligned vectors."""
    total = 0.0
    for bk, wk, sk in zip(b, weights, se):
        total += wk * bk * sk
    return float(total)


def qa_allocate(budget: float, ues) -> np.ndarray:
    """Quadratic-allocation split of one slice budget.

    ``ues`` is a sequence of (weight, se, b_min) with finite b_min.  Every UE
    receives its minimum; the surplus is shared proportionally to (w*SE)^2
    (equally if all shares vanish).  The last UE absorbs the floating-point
    residue so the slice sums exactly to ``budget``.
    """
    n = len(ues)
    if n == 0:
        return np.zeros(0)
    w = np.array([u[0] for u in ues])
    se = np.array([u[1] for u in ues])
    b_min = np.array([u[2] for u in ues])
    total_min = float(b_min.sum())
    if budget < total_min - 1e-6:
        raise InfeasibleError(
            f"slice budget {budget:.6f} Hz below aggregate minimum {total_min:.6f} Hz")
    surplus = max(budget - total_min, 0.0)
    phi = (w * se) ** 2
    phi_sum = float(phi.sum())
    if phi_sum > 0.0:
        b = b_min + surplus * phi / phi_sum
    else:
        b = b_min + surplus / n
    b[-1] += budget - float(b.sum())
    return b


def _slice_objective(b, ues) -> float:
    return float(sum(u[0] * u[1] * bk for u, bk in zip(ues, b)))


def marginal_utility(slices, s: int, delta_b: float) -> float:
    """Finite-difference marginal utility of slice ``s``.

    ``slices`` is a sequence of (budget, ues) pairs.  Only slice ``s`` is
    re-split at the nudged budget; all other slices are untouched, so their
    contributions cancel out of the difference.
    """
    budget, ues = slices[s]
    f_now = _slice_objective(qa_allocate(budget, ues), ues)
    f_up = _slice_objective(qa_allocate(budget + delta_b, ues), ues)
    return (f_up - f_now) / delta_b


def allocate_groups(groups, weights, se, b_min, total_bandwidth: float,
                    params: AllocationParams | None = None) -> AllocationResult:
    """Transfer loop over arbitrary slice groups.

    ``groups`` is a sequence of (name, admitted UE indices); ``weights``,
    ``se``, ``b_min`` are full-length per-UE arrays indexed by those indices.
    """
    if params is None:
        params = AllocationParams()
    names = tuple(g[0] for g in groups)
    members = [np.asarray(g[1], dtype=np.int64) for g in groups]
    num_slices = len(groups)
    num_ues = len(weights)

    ues_per_slice = [
        [(float(weights[k]), float(se[k]), float(b_min[k])) for k in idx]
        for idx in members
    ]
    min_sums = np.array([sum(u[2] for u in ues) for ues in ues_per_slice])
    counts = np.array([len(idx) for idx in members], dtype=float)
    surplus = total_bandwidth - float(min_sums.sum())
    if surplus < -1e-6:
        raise InfeasibleError(
            f"admitted minimums {float(min_sums.sum()):.6f} Hz exceed budget "
            f"{total_bandwidth:.6f} Hz")
    surplus = max(surplus, 0.0)

    # Head-count proportional initialization; with no admitted UEs anywhere the
    # budget is split equally (empty slices otherwise start at exactly their
    # zero minimum).
    total_count = counts.sum()
    if total_count > 0:
        budgets = min_sums + surplus * counts / total_count
    else:
        budgets = np.full(num_slices, total_bandwidth / num_slices)

    per_slice_b = [qa_allocate(float(budgets[s]), ues_per_slice[s])
                   for s in range(num_slices)]
    objective = sum(_slice_objective(per_slice_b[s], ues_per_slice[s])
                    for s in range(num_slices))

    best = (objective, budgets.copy(), [b.copy() for b in per_slice_b])
    trace: list[TraceStep] = []
    reason = "max_iter"
    iterations = 0
    rejections = 0

    for t in range(1, params.t_max + 1):
        iterations = t
        slices_state = [(float(budgets[s]), ues_per_slice[s]) for s in range(num_slices)]
        mu = tuple(marginal_utility(slices_state, s, params.delta_b)
                   for s in range(num_slices))

        eligible = [s for s in range(num_slices) if counts[s] > 0]
        if len(eligible) < 2:
            reason = "mu_balanced"
            break
        donor = min(eligible, key=lambda s: (mu[s], s))
        receiver = max(eligible, key=lambda s: (mu[s], -s))
        if donor == receiver or mu[receiver] <= params.mu_ratio * mu[donor]:
            reason = "mu_balanced"
            break

        delta = min(float(budgets[donor]) / counts[donor],
                    float(budgets[donor]) - float(min_sums[donor]))
        if params.shrink_on_reject and rejections:
            delta /= 2.0 ** rejections
        if delta < params.eps_transfer:
            reason = "transfer_floor"
            break

        cand_budgets = budgets.copy()
        cand_budgets[donor] -= delta
        cand_budgets[receiver] += delta
        cand_donor_b = qa_allocate(float(cand_budgets[donor]), ues_per_slice[donor])
        cand_receiver_b = qa_allocate(float(cand_budgets[receiver]), ues_per_slice[receiver])
        cand_objective = objective
        cand_objective -= _slice_objective(per_slice_b[donor], ues_per_slice[donor])
        cand_objective -= _slice_objective(per_slice_b[receiver], ues_per_slice[receiver])
        cand_objective += _slice_objective(cand_donor_b, ues_per_slice[donor])
        cand_objective += _slice_objective(cand_receiver_b, ues_per_slice[receiver])

        accepted = cand_objective > objective
        trace.append(TraceStep(iteration=t, mu=mu, donor=names[donor],
                               receiver=names[receiver], delta_b=delta,
                               accepted=accepted, objective=cand_objective))
        if accepted:
            budgets = cand_budgets
            per_slice_b[donor] = cand_donor_b
            per_slice_b[receiver] = cand_receiver_b
            objective = cand_objective
            rejections = 0
            if objective > best[0]:
                best = (objective, budgets.copy(), [b.copy() for b in per_slice_b])
        else:
            rejections += 1
            if rejections >= params.t_patience:
                reason = "patience"
                break

    _, best_budgets, best_b = best

    # Exact-sum repair: any residue within a slice lands on its highest-phi UE.
    b_full = np.zeros(num_ues)
    for s in range(num_slices):
        idx = members[s]
        if len(idx) == 0:
            continue
        vals = best_b[s].copy()
        residue = float(best_budgets[s]) - float(vals.sum())
        phi = np.array([(u[0] * u[1]) ** 2 for u in ues_per_slice[s]])
        vals[int(np.argmax(phi))] += residue
        b_full[idx] = vals

    final_objective = weighted_objective(b_full, weights, se)
    return AllocationResult(slice_names=names,
                            slice_budgets=tuple(float(x) for x in best_budgets),
                            b=b_full, objective=final_objective,
                            iterations_run=iterations,
                            termination_reason=reason, trace=tuple(trace))


def allocate(admitted, metrics, weights, total_bandwidth: float,
             params: AllocationParams | None = None) -> AllocationResult:
    """Canonical two-slice entry point (URLLC first, then eMBB)."""
    groups = (("urllc", admitted.admitted_urllc), ("embb", admitted.admitted_embb))
    return allocate_groups(groups, np.asarray(weights, dtype=float),
                           np.asarray(metrics.se, dtype=float),
                           np.asarray(metrics.b_min, dtype=float),
                           total_bandwidth, params)


def trace_to_csv(result: AllocationResult, path) -> None:
    """Dump the iteration trace; one row per proposed transfer."""
    mu_cols = [f"mu_{name}" for name in result.slice_names]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", *mu_cols, "donor", "delta_b_hz",
                         "accepted", "objective"])
        for step in result.trace:
            writer.writerow([step.iteration, *[repr(m) for m in step.mu],
                             step.donor, repr(step.delta_b),
                             int(step.accepted), repr(step.objective)])
