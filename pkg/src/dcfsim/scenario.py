"""Build and run one simulation scenario; replication and conservation logic.

A scenario is one AP plus n uplink stations on a shared medium, applications
starting at the traffic start time and stopping at simulation_time + 1 s,
with the kernel run to that same stop instant and metrics normalised by the
configured simulation_time (matching the flow-monitor arithmetic the CSV
format mirrors).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .errors import ConfigError, InternalError
from .kernel import RandomStream, Scheduler, seconds
from .mac import AccessCoordinator, ApMac, MacParams, StationMac, TraceFn
from .medium import Medium
from .phy import FrameSizes, PhyParams, PhyTimings
from .stats import FlowKey, FlowMonitor, FlowStats, MetricsReport, compute_metrics
from .traffic import OnOffConfig, OnOffSource, SaturatedSource

MAX_STATIONS = 60


@dataclass(frozen=True)
class ScenarioConfig:
    n_stations: int
    mac: MacParams = MacParams()
    traffic: OnOffConfig | None = None  # None -> defaults derived from sim time
    saturated: bool = False
    simulation_time_s: float = 30.0
    seed: int = 1
    max_stations: int = MAX_STATIONS
    phy: PhyParams = PhyParams()
    sizes: FrameSizes = FrameSizes()
    eifs_enabled: bool = True  # off only for deferral sensitivity studies

    def __post_init__(self) -> None:
        if not 1 <= self.n_stations <= self.max_stations:
            raise ConfigError(
                f"n_stations {self.n_stations} outside [1, {self.max_stations}]"
            )
        if self.simulation_time_s <= 0:
            raise ConfigError("simulation time must be positive")

    def effective_traffic(self) -> OnOffConfig:
        if self.traffic is not None:
            return self.traffic
        return OnOffConfig(stop_s=self.simulation_time_s + 1.0)


@dataclass
class RunResult:
    metrics: MetricsReport
    flows: dict[FlowKey, FlowStats]
    events_executed: int
    attempts: int
    retx_attempts: int
    failures: int
    delivered_by_station: dict[int, int]
    residual_by_flow: dict[FlowKey, int]

    @property
    def measured_collision_probability(self) -> float:
        """Retransmission attempts over total attempts."""
        return self.retx_attempts / self.attempts if self.attempts else 0.0


def run_scenario(cfg: ScenarioConfig, trace: Optional[TraceFn] = None) -> RunResult:
    scheduler = Scheduler()
    timings = PhyTimings(cfg.phy, cfg.sizes)
    medium = Medium(scheduler)
    coordinator = AccessCoordinator(scheduler, medium, timings,
                                    eifs_enabled=cfg.eifs_enabled)
    monitor = FlowMonitor()
    ap = ApMac(scheduler, medium, timings, monitor)

    traffic_cfg = cfg.effective_traffic()
    stations: list[StationMac] = []
    sources = []
    for i in range(1, cfg.n_stations + 1):
        mac = StationMac(
            i, scheduler, medium, coordinator, timings, cfg.mac,
            RandomStream(cfg.seed, i), trace,
        )
        flow = FlowKey(src_addr=i, dst_addr=ap.sid, src_port=49153,
                       dst_port=9 + (i - 1))
        monitor.register(flow)
        if cfg.saturated:
            source = SaturatedSource(
                scheduler, mac, timings, monitor, flow,
                traffic_cfg.payload_bytes, cfg.n_stations,
                traffic_cfg.start_s, traffic_cfg.stop_s,
            )
        else:
            source = OnOffSource(scheduler, mac, timings, monitor, flow, traffic_cfg)
        stations.append(mac)
        sources.append(source)

    start_delay = seconds(traffic_cfg.start_s)
    for source in sources:
        if cfg.saturated:
            scheduler.schedule(start_delay, source.start)
        else:
            source.start()

    executed = scheduler.run_until(seconds(cfg.simulation_time_s + 1.0))

    if not medium.conservation_ok():
        raise InternalError("medium begin/finish conservation violated")

    residuals: dict[FlowKey, int] = {}
    delivered: dict[int, int] = {}
    for mac, source in zip(stations, sources):
        flow = source.flow
        st = monitor.flows[flow]
        in_flight = mac.consumed - ap.rx_by_flow.get(flow, 0) - mac.dropped
        residual = source.queue_len() + in_flight
        if st.tx_packets != st.rx_packets + st.lost_packets + residual:
            raise InternalError(
                f"flow conservation violated for station {mac.sid}: "
                f"tx={st.tx_packets} rx={st.rx_packets} lost={st.lost_packets} "
                f"residual={residual}"
            )
        residuals[flow] = residual
        delivered[mac.sid] = mac.delivered

    return RunResult(
        metrics=compute_metrics(monitor.flows, cfg.simulation_time_s),
        flows=monitor.flows,
        events_executed=executed,
        attempts=sum(m.attempts for m in stations),
        retx_attempts=sum(m.retx_attempts for m in stations),
        failures=sum(m.failures for m in stations),
        delivered_by_station=delivered,
        residual_by_flow=residuals,
    )


def run_replications(cfg: ScenarioConfig, runs: int,
                     trace: Optional[TraceFn] = None) -> list[RunResult]:
    """Independent replications with seeds seed, seed+1, ..., seed+runs-1."""
    if runs < 1:
        raise ConfigError(f"replications must be >= 1, got {runs}")
    return [
        run_scenario(replace(cfg, seed=cfg.seed + r), trace=trace)
        for r in range(runs)
    ]


def mean_metrics(results: list[RunResult]) -> MetricsReport:
    k = len(results)
    return MetricsReport(
        pdr=sum(r.metrics.pdr for r in results) / k,
        plr=sum(r.metrics.plr for r in results) / k,
        agg_throughput_mbps=sum(r.metrics.agg_throughput_mbps for r in results) / k,
        avg_delay_s=sum(r.metrics.avg_delay_s for r in results) / k,
    )
