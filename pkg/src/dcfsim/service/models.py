"""Request/response schemas shared by the HTTP service and the CLI client."""

from __future__ import annotations

from pydantic import BaseModel, Field


class MacSettings(BaseModel):
    cw_min: int = 15
    cw_max: int = 1023
    retry_limit: int = 7
    rts_threshold: int = 65535


class TrafficSettings(BaseModel):
    on_s: float = 1.0
    off_s: float = 1.0
    data_rate_bps: int = 500_000
    payload_bytes: int = 512
    start_s: float = 1.0


class PhySettings(BaseModel):
    """PHY rates and the per-packet stack overhead model."""

    data_rate_bps: int = 12_000_000
    control_rate_bps: int = 12_000_000
    ip_udp_header_bytes: int = 28
    llc_snap_bytes: int = 8
    mac_header_plus_fcs_bytes: int = 28


class Metrics(BaseModel):
    pdr: float
    plr: float
    agg_throughput_mbps: float
    avg_delay_s: float


class FlowRecord(BaseModel):
    station: int
    tx_packets: int
    rx_packets: int
    lost_packets: int
    rx_bytes: int
    delay_sum_s: float
    residual: int


class SimulateRequest(BaseModel):
    stations: int = Field(ge=1)
    mac: MacSettings = MacSettings()
    traffic: TrafficSettings | None = None
    phy: PhySettings | None = None
    saturated: bool = False
    sim_time_s: float = Field(default=30.0, gt=0)
    seed: int = 1
    runs: int = Field(default=1, ge=1)
    include_flows: bool = False


class SimulateResponse(BaseModel):
    mean: Metrics
    runs: list[Metrics]
    collision_probability: float
    alt_pdr_flow_sum: float
    alt_plr_flow_sum: float
    flows: list[FlowRecord] | None = None


class SweepRequest(BaseModel):
    scenario: str
    stations: list[int] | None = None
    values: list[int] | None = None
    mac: MacSettings = MacSettings()
    traffic: TrafficSettings | None = None
    phy: PhySettings | None = None
    saturated: bool = False
    sim_time_s: float = Field(default=30.0, gt=0)
    seed: int = 1
    runs: int = Field(default=1, ge=1)
    workers: int | None = None


class SweepRowRecord(BaseModel):
    sta_number: int
    axis_value: int
    metrics: Metrics


class SweepResponse(BaseModel):
    axis_column: str
    rows: list[SweepRowRecord]


class OracleRequest(BaseModel):
    stations: list[int]
    cw_min: int = 15
    cw_max: int = 1023
    payload_bytes: int = 512


class OracleRow(BaseModel):
    n: int
    tau: float
    p: float
    s_basic_mbps: float
    s_rts_mbps: float


class OracleResponse(BaseModel):
    rows: list[OracleRow]
