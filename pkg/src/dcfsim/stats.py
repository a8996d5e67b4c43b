"""Per-flow counters and the four aggregate performance metrics.

Counters mirror an IP-level flow probe sitting above the MAC queue: every
generated packet counts as transmitted, queue rejections and retry-limit
drops count as lost, and deliveries accumulate byte and delay totals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import InternalError
from .kernel import SimTime

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowKey:
    """One uplink flow per station: (protocol, src, dst, ports) tuple."""

    src_addr: int
    dst_addr: int
    src_port: int
    dst_port: int
    protocol: str = "UDP"


@dataclass
class FlowStats:
    tx_packets: int = 0
    rx_packets: int = 0
    lost_packets: int = 0
    tx_bytes: int = 0
    rx_bytes: int = 0
    delay_sum: SimTime = 0
    first_tx: SimTime | None = None
    last_tx: SimTime | None = None
    first_rx: SimTime | None = None
    last_rx: SimTime | None = None


@dataclass
class MetricsReport:
    """The four headline metrics; ratios are totals-over-totals across flows."""

    pdr: float
    plr: float
    agg_throughput_mbps: float
    avg_delay_s: float


class FlowMonitor:
    """Collects per-flow counters during a run; read-only afterwards."""

    def __init__(self) -> None:
        self.flows: dict[FlowKey, FlowStats] = {}

    def register(self, flow: FlowKey) -> FlowStats:
        if flow in self.flows:
            raise InternalError(f"flow registered twice: {flow}")
        st = FlowStats()
        self.flows[flow] = st
        return st

    def record_tx(self, flow: FlowKey, ip_bytes: int, t: SimTime) -> None:
        st = self.flows[flow]
        st.tx_packets += 1
        st.tx_bytes += ip_bytes
        if st.first_tx is None:
            st.first_tx = t
        st.last_tx = t

    def record_rx(self, flow: FlowKey, ip_bytes: int, gen_time: SimTime, t: SimTime) -> None:
        st = self.flows.get(flow)
        if st is None:
            raise InternalError(f"rx for unknown flow: {flow}")
        st.rx_packets += 1
        st.rx_bytes += ip_bytes
        st.delay_sum += t - gen_time
        if st.first_rx is None:
            st.first_rx = t
        st.last_rx = t

    def record_lost(self, flow: FlowKey) -> None:
        self.flows[flow].lost_packets += 1


def compute_metrics(flows: dict[FlowKey, FlowStats], simulation_time_s: float) -> MetricsReport:
    """Aggregate metrics: PDR/PLR over packet totals, throughput in Mb/s over
    the configured simulation time, delay in seconds per received packet."""
    total_tx = sum(st.tx_packets for st in flows.values())
    total_rx = sum(st.rx_packets for st in flows.values())
    total_lost = sum(st.lost_packets for st in flows.values())
    total_rx_bytes = sum(st.rx_bytes for st in flows.values())
    total_delay_ns = sum(st.delay_sum for st in flows.values())

    if total_tx == 0:
        log.warning("degenerate run: no packets transmitted; metrics reported as 0")
        return MetricsReport(0.0, 0.0, 0.0, 0.0)

    pdr = total_rx / total_tx
    plr = total_lost / total_tx
    throughput = total_rx_bytes * 8.0 / simulation_time_s / 1e6
    delay = (total_delay_ns / total_rx) / 1e9 if total_rx else 0.0
    return MetricsReport(pdr, plr, throughput, delay)


def per_flow_ratio_sums(flows: dict[FlowKey, FlowStats]) -> tuple[float, float, float]:
    """Alternate reading of the ratio metrics as sums of per-flow ratios
    (kept for comparison with the totals-over-totals form above).

    Returns (pdr_sum, plr_sum, delay_sum_s_per_rx).
    """
    pdr = sum(st.rx_packets / st.tx_packets for st in flows.values() if st.tx_packets)
    plr = sum(st.lost_packets / st.tx_packets for st in flows.values() if st.tx_packets)
    delay = sum(
        (st.delay_sum / 1e9) / st.rx_packets for st in flows.values() if st.rx_packets
    )
    return pdr, plr, delay
