"""Two-stage priority admission control.

URLLC candidates get first access to everything above the eMBB floor; eMBB
candidates then fill whatever bandwidth the admitted URLLC set left behind.
Each stage filters out infeasible demands, ranks by weighted spectral
efficiency, and admits greedily while the stage budget holds.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .netgen import SLICE_URLLC


def efficiency(weight: float, se: float) -> float:
    """Ranking metric: weighted spectral efficiency."""
    return weight * se


@dataclass(frozen=True)
class AdmissionInput:
    """Per-UE admission candidates plus the bandwidth budget split.

    ``slices``, ``weights``, ``se``, ``b_min`` are aligned per-UE sequences;
    ``b_min`` entries may be +inf (no bandwidth satisfies the UE).
    ``b_embb_min`` reserves a floor the URLLC stage may not touch.
    """

    slices: tuple[str, ...]
    weights: tuple[float, ...]
    se: tuple[float, ...]
    b_min: tuple[float, ...]
    total_bandwidth: float
    b_embb_min: float | None = None

    def __post_init__(self):
        if self.total_bandwidth <= 0:
            raise ValueError("total_bandwidth must be positive")
        if self.b_embb_min is None:
            object.__setattr__(self, "b_embb_min", 0.2 * self.total_bandwidth)
        if not (0 <= self.b_embb_min < self.total_bandwidth):
            raise ValueError("b_embb_min must lie in [0, total_bandwidth)")
        lengths = {len(self.slices), len(self.weights), len(self.se), len(self.b_min)}
        if len(lengths) != 1:
            raise ValueError("per-UE sequences must have equal length")

    def gamma(self, k: int) -> float:
        return efficiency(self.weights[k], self.se[k])


@dataclass(frozen=True)
class AdmissionResult:
    admitted_urllc: tuple[int, ...]
    admitted_embb: tuple[int, ...]
    b_used_urllc: float
    b_used_embb: float
    alpha: tuple[int, ...]
    ops_count: int | None = None

    @property
    def admitted(self) -> tuple[int, ...]:
        return tuple(sorted(self.admitted_urllc + self.admitted_embb))


class _OpCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


def _rank(candidates, inp: AdmissionInput, counter: _OpCounter | None):
    """Sort candidate indices by efficiency descending, ties by ascending index."""
    if counter is None:
        return sorted(candidates, key=lambda k: (-inp.gamma(k), k))

    # Mirror the uncounted path's work: one ranking-key evaluation per
    # candidate, then one count per comparison of precomputed keys.
    keys = {}
    for k in candidates:
        counter.count += 1
        keys[k] = (-inp.gamma(k), k)

    def compare(a, b):
        counter.count += 1
        return -1 if keys[a] < keys[b] else (1 if keys[a] > keys[b] else 0)

    return sorted(candidates, key=functools.cmp_to_key(compare))


def _greedy_stage(candidates, inp: AdmissionInput, stage_cap: float,
                  already_used: float, counter: _OpCounter | None):
    """Filter, rank, and greedily admit while the cumulative demand fits."""
    feasible = []
    for k in candidates:
        if counter is not None:
            counter.count += 1
        b = inp.b_min[k]
        if math.isfinite(b) and b <= stage_cap - already_used:
            feasible.append(k)

    admitted = []
    used = already_used
    for k in _rank(feasible, inp, counter):
        if counter is not None:
            counter.count += 1
        if used + inp.b_min[k] <= stage_cap:
            admitted.append(k)
            used += inp.b_min[k]
    return admitted, used - already_used


def admit(inp: AdmissionInput, count_ops: bool = False) -> AdmissionResult:
    """Run both admission stages; deterministic for identical inputs.

    With ``count_ops`` the result carries the number of elementary operations
    performed (filter checks, ranking-key evaluations, sort comparisons,
    greedy budget checks), used by the scaling tests.
    """
    counter = _OpCounter() if count_ops else None
    num_ues = len(inp.slices)
    urllc = [k for k in range(num_ues) if inp.slices[k] == SLICE_URLLC]
    embb = [k for k in range(num_ues) if inp.slices[k] != SLICE_URLLC]

    urllc_cap = inp.total_bandwidth - inp.b_embb_min
    admitted_urllc, used_urllc = _greedy_stage(urllc, inp, urllc_cap, 0.0, counter)

    # Stage 2 may spend everything the URLLC stage left, including the floor.
    admitted_embb, used_embb = _greedy_stage(embb, inp, inp.total_bandwidth,
                                             used_urllc, counter)

    alpha = [0] * num_ues
    for k in admitted_urllc + admitted_embb:
        alpha[k] = 1
    return AdmissionResult(admitted_urllc=tuple(admitted_urllc),
                           admitted_embb=tuple(admitted_embb),
                           b_used_urllc=used_urllc, b_used_embb=used_embb,
                           alpha=tuple(alpha),
                           ops_count=counter.count if counter else None)
