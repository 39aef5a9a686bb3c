"""Uplink cell-free massive MIMO with eMBB/URLLC slicing.

Seeded Monte Carlo pipeline: network generation, closed-form link metrics,
two-stage knapsack admission, marginal-utility bandwidth allocation, exact
reference oracles, and a campaign harness with CSV/JSON/SVG outputs.
"""

from .admission import AdmissionInput, AdmissionResult, admit, efficiency
from .allocation import (AllocationParams, AllocationResult, TraceStep,
                         allocate, allocate_groups, marginal_utility,
                         qa_allocate, trace_to_csv, weighted_objective)
from .config import SimConfig, config_from_dict, load_config
from .errors import ConfigError, InfeasibleError, InvariantViolation
from .harness import (CampaignMetrics, DropMetrics, DropRow, FieldStats,
                      SchemeMetrics, SweepPoint, export, import_campaign,
                      run_campaign, run_drop)
from .kernels import BACKEND
from .linkmetrics import (LinkMetrics, delay, dispersion, link_metrics,
                          min_bandwidth, q_inverse, spectral_efficiency,
                          urllc_min_rate)
from .netgen import (ChannelState, Deployment, UeProfile, build_channel,
                     generate_deployment, generate_profiles)
from .plotting import plot_campaign, render_plot
from .reference import (brute_force_admission, lp_optimum, mu_analytic,
                        round_robin)

__version__ = "0.1.0"

__all__ = [
    "AdmissionInput", "AdmissionResult", "AllocationParams",
    "AllocationResult", "BACKEND", "CampaignMetrics", "ChannelState",
    "ConfigError", "Deployment", "DropMetrics", "DropRow", "FieldStats",
    "InfeasibleError", "InvariantViolation", "LinkMetrics", "SchemeMetrics",
    "SimConfig", "SweepPoint", "TraceStep", "UeProfile", "admit", "allocate",
    "allocate_groups", "brute_force_admission", "build_channel",
    "config_from_dict", "delay", "dispersion", "efficiency", "export",
    "generate_deployment", "generate_profiles", "import_campaign",
    "link_metrics", "load_config", "lp_optimum", "marginal_utility",
    "min_bandwidth", "mu_analytic", "plot_campaign", "q_inverse",
    "qa_allocate", "render_plot", "round_robin", "run_campaign", "run_drop",
    "spectral_efficiency", "trace_to_csv", "urllc_min_rate",
    "weighted_objective",
]
