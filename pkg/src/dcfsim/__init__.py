"""Discrete-event simulator for IEEE 802.11 DCF MAC-parameter studies."""

from .bianchi import BianchiParams, saturation_throughput, solve_fixed_point
from .kernel import RandomStream, Scheduler, SimTime
from .mac import MacParams
from .phy import FrameSizes, PhyParams, PhyTimings
from .scenario import RunResult, ScenarioConfig, mean_metrics, run_replications, run_scenario
from .stats import FlowKey, FlowStats, MetricsReport, compute_metrics
from .traffic import OnOffConfig

__all__ = [
    "BianchiParams",
    "FlowKey",
    "FlowStats",
    "FrameSizes",
    "MacParams",
    "MetricsReport",
    "OnOffConfig",
    "PhyParams",
    "PhyTimings",
    "RandomStream",
    "RunResult",
    "ScenarioConfig",
    "Scheduler",
    "SimTime",
    "compute_metrics",
    "mean_metrics",
    "run_replications",
    "run_scenario",
    "saturation_throughput",
    "solve_fixed_point",
]

__version__ = "0.1.0"
