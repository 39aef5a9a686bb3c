"""Monte Carlo campaign harness.

One *drop* is an independent network realization pushed through the full
pipeline; a *campaign* sweeps UE count or slice mix over many seeded drops and
aggregates per-scheme metrics.  Success rates are measured over every UE of a
slice in the drop — rejected UEs count as failures — because the baseline the
schemes are compared against performs no admission at all.

Per-drop seeds are ``master_seed + drop_index``, so any drop can be reproduced
in isolation.  Campaigns are bit-identical across runs and worker counts
(wall-clock fields excluded); workers are capped by the ``SLICECF_THREADS``
environment variable (default 1).
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .admission import AdmissionInput, AdmissionResult, admit
from .allocation import AllocationParams, AllocationResult, allocate
from .config import SimConfig
from .errors import InvariantViolation
from .linkmetrics import LinkMetrics, delay, link_metrics
from .netgen import (SLICE_EMBB, SLICE_URLLC, UeProfile, build_channel,
                     generate_deployment, generate_profiles)
from .reference import lp_optimum, round_robin

SCHEMES = ("proposed", "oracle", "baseline")
CSV_COLUMNS = ("seed", "K", "mix", "scheme", "weighted_sum_rate", "embb_success",
               "urllc_success", "admitted_urllc", "admitted_embb", "runtime_ns",
               "iterations")
_METRIC_FIELDS = ("weighted_sum_rate", "embb_success", "urllc_success",
                  "admitted_urllc", "admitted_embb", "runtime_ns", "iterations")
_RATE_TOL = 1e-6      # Hz / (bit/s) absolute slack in constraint checks
_DELAY_TOL = 1e-9     # seconds


@dataclass(frozen=True)
class SchemeMetrics:
    weighted_sum_rate: float
    embb_success: float
    urllc_success: float
    admitted_urllc: int
    admitted_embb: int
    runtime_ns: int
    iterations: int


@dataclass(frozen=True)
class DropMetrics:
    seed: int
    num_ues: int
    urllc_fraction: float
    schemes: dict[str, SchemeMetrics]
    stage_runtime_ns: dict[str, int]


@dataclass(frozen=True)
class FieldStats:
    mean: float
    stderr: float


@dataclass(frozen=True)
class DropRow:
    """One CSV row: a single scheme's outcome in a single drop."""

    seed: int
    num_ues: int
    mix: float
    scheme: str
    weighted_sum_rate: float
    embb_success: float
    urllc_success: float
    admitted_urllc: int
    admitted_embb: int
    runtime_ns: int
    iterations: int


@dataclass(frozen=True)
class SweepPoint:
    num_ues: int
    urllc_fraction: float
    seeds: tuple[int, ...]
    rows: tuple[DropRow, ...]
    stats: dict[str, dict[str, FieldStats]]


@dataclass(frozen=True)
class CampaignMetrics:
    sweep: str              # "k" | "mix"
    drop_count: int
    master_seed: int
    points: tuple[SweepPoint, ...]


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolation(message)


def _qos_met(k: int, bandwidth: float, profile: UeProfile, se: float) -> bool:
    rate = bandwidth * se
    if profile.slice == SLICE_URLLC:
        return delay(rate, profile) <= profile.delay_budget + _DELAY_TOL
    return rate >= profile.min_rate - _RATE_TOL


def _success_rates(b: np.ndarray, admitted: set[int] | None,
                   profiles, se) -> tuple[float, float]:
    """(embb, urllc) success fractions over the whole slice populations.

    ``admitted=None`` means the scheme serves everyone (no admission stage);
    otherwise non-admitted UEs fail outright.  An absent slice counts 1.0.
    """
    ok = {SLICE_EMBB: 0, SLICE_URLLC: 0}
    total = {SLICE_EMBB: 0, SLICE_URLLC: 0}
    for k, profile in enumerate(profiles):
        total[profile.slice] += 1
        if admitted is not None and k not in admitted:
            continue
        if _qos_met(k, float(b[k]), profile, float(se[k])):
            ok[profile.slice] += 1
    embb = ok[SLICE_EMBB] / total[SLICE_EMBB] if total[SLICE_EMBB] else 1.0
    urllc = ok[SLICE_URLLC] / total[SLICE_URLLC] if total[SLICE_URLLC] else 1.0
    return embb, urllc


def _check_admitted_scheme(name: str, b: np.ndarray, admitted_idx, metrics,
                           profiles) -> None:
    for k in admitted_idx:
        _check(b[k] >= metrics.b_min[k] - _RATE_TOL,
               f"{name}: UE {k} below its minimum bandwidth")
        _check(_qos_met(k, float(b[k]), profiles[k], float(metrics.se[k])),
               f"{name}: admitted UE {k} misses its QoS target")


def run_drop(cfg: SimConfig, seed: int) -> DropMetrics:
    """Run one drop through all three schemes with hard invariant checks."""
    sub = [int(s) for s in np.random.SeedSequence(seed).generate_state(4)]
    timings: dict[str, int] = {}

    t0 = time.perf_counter_ns()
    deployment = generate_deployment(cfg, sub[0])
    profiles = generate_profiles(deployment, cfg, sub[3])
    timings["deployment"] = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    state = build_channel(deployment, cfg, sub[1], sub[2])
    timings["channel"] = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    metrics = link_metrics(state, profiles, cfg)
    timings["link_metrics"] = time.perf_counter_ns() - t0

    weights = tuple(p.weight for p in profiles)
    adm_input = AdmissionInput(slices=deployment.ue_slice, weights=weights,
                               se=tuple(float(x) for x in metrics.se),
                               b_min=tuple(float(x) for x in metrics.b_min),
                               total_bandwidth=cfg.total_bandwidth)
    t0 = time.perf_counter_ns()
    adm = admit(adm_input)
    timings["admission"] = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    alloc = allocate(adm, metrics, weights, cfg.total_bandwidth)
    timings["allocation"] = time.perf_counter_ns() - t0

    admitted = sorted(adm.admitted)
    t0 = time.perf_counter_ns()
    lp = lp_optimum([(weights[k], float(metrics.se[k]), float(metrics.b_min[k]))
                     for k in admitted], cfg.total_bandwidth)
    timings["oracle"] = time.perf_counter_ns() - t0
    oracle_b = np.zeros(cfg.num_ues)
    if admitted:
        oracle_b[admitted] = lp.b

    t0 = time.perf_counter_ns()
    base = round_robin(weights, metrics.se, cfg.total_bandwidth)
    timings["baseline"] = time.perf_counter_ns() - t0

    _run_invariant_checks(cfg, adm, alloc, lp, oracle_b, base, metrics, profiles)

    admitted_set = set(admitted)
    prop_embb, prop_urllc = _success_rates(alloc.b, admitted_set, profiles, metrics.se)
    orac_embb, orac_urllc = _success_rates(oracle_b, admitted_set, profiles, metrics.se)
    base_embb, base_urllc = _success_rates(base.b, None, profiles, metrics.se)

    n_urllc = sum(1 for p in profiles if p.slice == SLICE_URLLC)
    n_embb = len(profiles) - n_urllc
    schemes = {
        "proposed": SchemeMetrics(
            weighted_sum_rate=alloc.objective, embb_success=prop_embb,
            urllc_success=prop_urllc, admitted_urllc=len(adm.admitted_urllc),
            admitted_embb=len(adm.admitted_embb),
            runtime_ns=timings["admission"] + timings["allocation"],
            iterations=alloc.iterations_run),
        "oracle": SchemeMetrics(
            weighted_sum_rate=lp.objective, embb_success=orac_embb,
            urllc_success=orac_urllc, admitted_urllc=len(adm.admitted_urllc),
            admitted_embb=len(adm.admitted_embb),
            runtime_ns=timings["admission"] + timings["oracle"], iterations=0),
        "baseline": SchemeMetrics(
            weighted_sum_rate=base.objective, embb_success=base_embb,
            urllc_success=base_urllc, admitted_urllc=n_urllc,
            admitted_embb=n_embb, runtime_ns=timings["baseline"], iterations=0),
    }
    return DropMetrics(seed=seed, num_ues=cfg.num_ues,
                       urllc_fraction=cfg.urllc_fraction, schemes=schemes,
                       stage_runtime_ns=timings)


def _run_invariant_checks(cfg: SimConfig, adm: AdmissionResult,
                          alloc: AllocationResult, lp, oracle_b, base,
                          metrics: LinkMetrics, profiles) -> None:
    """Hard per-drop checks; any failure aborts the drop."""
    budget = cfg.total_bandwidth
    _check(abs(sum(alloc.slice_budgets) - budget) <= _RATE_TOL,
           "proposed slice budgets do not sum to the band")
    slice_members = {"urllc": adm.admitted_urllc, "embb": adm.admitted_embb}
    for name, budget_s in zip(alloc.slice_names, alloc.slice_budgets):
        members = slice_members[name]
        if not members:
            continue  # an empty slice holds no per-UE bandwidth to compare
        _check(abs(float(alloc.b[list(members)].sum()) - budget_s) <= _RATE_TOL,
               f"proposed per-slice sum drifts from budget in {name}")
    if adm.admitted:
        _check(abs(float(oracle_b.sum()) - budget) <= _RATE_TOL,
               "oracle allocation does not exhaust the band")
    _check(abs(float(base.b.sum()) - budget) <= _RATE_TOL,
           "baseline allocation does not exhaust the band")

    _check_admitted_scheme("proposed", alloc.b, adm.admitted, metrics, profiles)
    _check_admitted_scheme("oracle", oracle_b, adm.admitted, metrics, profiles)

    _check(alloc.objective <= lp.objective * (1 + 1e-12) + _RATE_TOL,
           "proposed objective exceeds the exact optimum")


def _point_config(cfg: SimConfig, sweep: str, value) -> SimConfig:
    if sweep == "k":
        return dataclasses.replace(cfg, num_ues=int(value))
    if sweep == "mix":
        frac = float(value)
        return dataclasses.replace(cfg, slice_mix=(1.0 - frac, frac))
    raise ValueError(f"unknown sweep kind {sweep!r}")


def _worker_count() -> int:
    raw = os.environ.get("SLICECF_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _aggregate(rows: tuple[DropRow, ...]) -> dict[str, dict[str, FieldStats]]:
    stats: dict[str, dict[str, FieldStats]] = {}
    for scheme in SCHEMES:
        values = [r for r in rows if r.scheme == scheme]
        per_field = {}
        for field in _METRIC_FIELDS:
            xs = np.array([float(getattr(r, field)) for r in values])
            mean = float(xs.mean())
            stderr = float(xs.std(ddof=1) / np.sqrt(len(xs))) if len(xs) > 1 else 0.0
            per_field[field] = FieldStats(mean=mean, stderr=stderr)
        stats[scheme] = per_field
    return stats


def run_campaign(cfg: SimConfig, sweep: str, values, drops: int,
                 master_seed: int) -> CampaignMetrics:
    """Sweep ``values`` (UE counts or URLLC fractions) over seeded drops."""
    if drops < 1:
        raise ValueError("drops must be >= 1")
    seeds = [master_seed + i for i in range(drops)]
    workers = _worker_count()
    points = []
    for value in values:
        cfg_point = _point_config(cfg, sweep, value)
        if workers == 1:
            drop_metrics = [run_drop(cfg_point, s) for s in seeds]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                # map() preserves submission order, keeping aggregation
                # deterministic regardless of completion order.
                drop_metrics = list(pool.map(lambda s: run_drop(cfg_point, s), seeds))
        rows = []
        for dm in drop_metrics:
            for scheme in SCHEMES:
                sm = dm.schemes[scheme]
                rows.append(DropRow(seed=dm.seed, num_ues=dm.num_ues,
                                    mix=dm.urllc_fraction, scheme=scheme,
                                    weighted_sum_rate=sm.weighted_sum_rate,
                                    embb_success=sm.embb_success,
                                    urllc_success=sm.urllc_success,
                                    admitted_urllc=sm.admitted_urllc,
                                    admitted_embb=sm.admitted_embb,
                                    runtime_ns=sm.runtime_ns,
                                    iterations=sm.iterations))
        rows = tuple(rows)
        points.append(SweepPoint(num_ues=cfg_point.num_ues,
                                 urllc_fraction=cfg_point.urllc_fraction,
                                 seeds=tuple(seeds), rows=rows,
                                 stats=_aggregate(rows)))
    return CampaignMetrics(sweep=sweep, drop_count=drops,
                           master_seed=master_seed, points=tuple(points))


def campaign_to_dict(campaign: CampaignMetrics) -> dict:
    return {
        "sweep": campaign.sweep,
        "drop_count": campaign.drop_count,
        "master_seed": campaign.master_seed,
        "points": [
            {
                "num_ues": p.num_ues,
                "urllc_fraction": p.urllc_fraction,
                "seeds": list(p.seeds),
                "rows": [dataclasses.asdict(r) for r in p.rows],
                "stats": {
                    scheme: {field: {"mean": fs.mean, "stderr": fs.stderr}
                             for field, fs in per_field.items()}
                    for scheme, per_field in p.stats.items()
                },
            }
            for p in campaign.points
        ],
    }


def campaign_from_dict(raw: dict) -> CampaignMetrics:
    points = []
    for p in raw["points"]:
        rows = tuple(DropRow(**r) for r in p["rows"])
        stats = {
            scheme: {field: FieldStats(mean=fs["mean"], stderr=fs["stderr"])
                     for field, fs in per_field.items()}
            for scheme, per_field in p["stats"].items()
        }
        points.append(SweepPoint(num_ues=p["num_ues"],
                                 urllc_fraction=p["urllc_fraction"],
                                 seeds=tuple(p["seeds"]), rows=rows, stats=stats))
    return CampaignMetrics(sweep=raw["sweep"], drop_count=raw["drop_count"],
                           master_seed=raw["master_seed"], points=tuple(points))


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(float(value))  # plain-float repr even for numpy scalars
    return str(value)


def export(campaign: CampaignMetrics, format: str, path) -> str:
    """Write the campaign as CSV (per-drop rows) or JSON (full mirror).

    Output bytes are a pure function of the campaign contents.
    """
    path = str(path)
    if format == "json":
        payload = json.dumps(campaign_to_dict(campaign), sort_keys=True, indent=2)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload + "\n")
        return path
    if format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for point in campaign.points:
                for r in point.rows:
                    writer.writerow([
                        r.seed, r.num_ues, _format_cell(r.mix), r.scheme,
                        _format_cell(r.weighted_sum_rate),
                        _format_cell(r.embb_success),
                        _format_cell(r.urllc_success),
                        r.admitted_urllc, r.admitted_embb, r.runtime_ns,
                        r.iterations,
                    ])
        return path
    raise ValueError(f"unknown export format {format!r}")


def import_campaign(path) -> CampaignMetrics:
    """Load a campaign previously written by ``export(..., 'json', ...)``."""
    with open(path, "r", encoding="utf-8") as fh:
        return campaign_from_dict(json.load(fh))
