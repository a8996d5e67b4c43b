"""Translate service schemas to core calls and back.

Kept free of any web-framework import so the CLI can execute requests
in-process with the exact semantics the HTTP endpoints expose.
"""

from __future__ import annotations

from ..bianchi import oracle_rows
from ..mac import MacParams
from ..phy import FrameSizes, PhyParams
from ..scenario import ScenarioConfig, mean_metrics, run_replications
from ..stats import MetricsReport, per_flow_ratio_sums
from ..sweep import SweepSpec, run_sweep
from ..traffic import OnOffConfig
from . import models


def _mac_params(m: models.MacSettings) -> MacParams:
    return MacParams(cw_min=m.cw_min, cw_max=m.cw_max,
                     retry_limit=m.retry_limit, rts_threshold=m.rts_threshold)


def _traffic_config(t: models.TrafficSettings | None, sim_time_s: float) -> OnOffConfig | None:
    if t is None:
        return None
    return OnOffConfig(on_s=t.on_s, off_s=t.off_s, data_rate_bps=t.data_rate_bps,
                       payload_bytes=t.payload_bytes, start_s=t.start_s,
                       stop_s=sim_time_s + 1.0)


def _phy_parts(p: models.PhySettings | None) -> tuple[PhyParams, FrameSizes]:
    if p is None:
        return PhyParams(), FrameSizes()
    return (
        PhyParams(data_rate=p.data_rate_bps, control_rate=p.control_rate_bps),
        FrameSizes(ip_udp_header_bytes=p.ip_udp_header_bytes,
                   llc_snap_bytes=p.llc_snap_bytes,
                   mac_header_plus_fcs_bytes=p.mac_header_plus_fcs_bytes),
    )


def _metrics(m: MetricsReport) -> models.Metrics:
    return models.Metrics(pdr=m.pdr, plr=m.plr,
                          agg_throughput_mbps=m.agg_throughput_mbps,
                          avg_delay_s=m.avg_delay_s)


def simulate(req: models.SimulateRequest, trace=None) -> models.SimulateResponse:
    phy, sizes = _phy_parts(req.phy)
    cfg = ScenarioConfig(
        n_stations=req.stations,
        mac=_mac_params(req.mac),
        traffic=_traffic_config(req.traffic, req.sim_time_s),
        saturated=req.saturated,
        simulation_time_s=req.sim_time_s,
        seed=req.seed,
        phy=phy,
        sizes=sizes,
    )
    results = run_replications(cfg, req.runs, trace=trace)
    attempts = sum(r.attempts for r in results)
    retx = sum(r.retx_attempts for r in results)
    last = results[-1]
    alt_pdr, alt_plr, _ = per_flow_ratio_sums(last.flows)

    flows = None
    if req.include_flows:
        flows = [
            models.FlowRecord(
                station=key.src_addr,
                tx_packets=st.tx_packets,
                rx_packets=st.rx_packets,
                lost_packets=st.lost_packets,
                rx_bytes=st.rx_bytes,
                delay_sum_s=st.delay_sum / 1e9,
                residual=last.residual_by_flow[key],
            )
            for key, st in last.flows.items()
        ]

    return models.SimulateResponse(
        mean=_metrics(mean_metrics(results)),
        runs=[_metrics(r.metrics) for r in results],
        collision_probability=retx / attempts if attempts else 0.0,
        alt_pdr_flow_sum=alt_pdr,
        alt_plr_flow_sum=alt_plr,
        flows=flows,
    )


def sweep(req: models.SweepRequest) -> models.SweepResponse:
    phy, sizes = _phy_parts(req.phy)
    spec = SweepSpec(
        scenario=req.scenario,
        stations=tuple(req.stations) if req.stations else SweepSpec.__dataclass_fields__["stations"].default,
        values=tuple(req.values) if req.values else None,
        base_mac=_mac_params(req.mac),
        traffic=_traffic_config(req.traffic, req.sim_time_s),
        saturated=req.saturated,
        simulation_time_s=req.sim_time_s,
        seed=req.seed,
        replications=req.runs,
        phy=phy,
        sizes=sizes,
    )
    rows = run_sweep(spec, workers=req.workers)
    return models.SweepResponse(
        axis_column=spec.axis_column,
        rows=[
            models.SweepRowRecord(sta_number=r.sta_number, axis_value=r.axis_value,
                                  metrics=_metrics(r.metrics))
            for r in rows
        ],
    )


def oracle(req: models.OracleRequest) -> models.OracleResponse:
    rows = oracle_rows(req.stations, req.cw_min, req.cw_max, req.payload_bytes)
    return models.OracleResponse(rows=[models.OracleRow(**r) for r in rows])
