"""Experiment presets, station sweeps, CSV and plot-data emission.

The four presets vary exactly one MAC parameter each (access mechanism via
the RTS threshold, CWmin, CWmax, retry limit) across the default station
schedule 1, 2, 4, ..., 60.  Scenario points are independent, so the sweep
may fan out over a process pool; row order in the output is deterministic
regardless of completion order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .errors import ConfigError
from .mac import MacParams
from .phy import FrameSizes, PhyParams
from .scenario import ScenarioConfig, run_scenario
from .stats import MetricsReport
from .traffic import OnOffConfig

# preset name -> (MacParams field, axis CSV column, swept values)
PRESETS: dict[str, tuple[str, str, list[int]]] = {
    "access": ("rts_threshold", "rtsThreshold", [0, 65535]),
    "cwmin": ("cw_min", "cwMin", [3, 7, 15, 31]),
    "cwmax": ("cw_max", "cwMax", [255, 511, 1023]),
    "retry": ("retry_limit", "retryLimit", [1, 3, 5, 7, 9, 11]),
}

CSV_HEADER = ["staNumber", "PDR", "PLR", "aggThroughput", "averageDelay"]


def default_station_schedule(max_stations: int = 60, interval: int = 2) -> list[int]:
    """1, then interval steps up to max: 1, 2, 4, ..., 60 by default."""
    counts = [1]
    n = interval
    while n <= max_stations:
        counts.append(n)
        n += interval
    return counts


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    stations: tuple[int, ...] = tuple(default_station_schedule())
    values: tuple[int, ...] | None = None  # None -> the preset's value list
    base_mac: MacParams = MacParams()
    traffic: OnOffConfig | None = None
    saturated: bool = False
    simulation_time_s: float = 30.0
    seed: int = 1
    replications: int = 1
    phy: PhyParams = PhyParams()
    sizes: FrameSizes = FrameSizes()

    def __post_init__(self) -> None:
        if self.scenario not in PRESETS:
            raise ConfigError(
                f"unknown scenario {self.scenario!r}; choose from {sorted(PRESETS)}"
            )
        if not self.stations:
            raise ConfigError("station list is empty")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")

    @property
    def axis_field(self) -> str:
        return PRESETS[self.scenario][0]

    @property
    def axis_column(self) -> str:
        return PRESETS[self.scenario][1]

    @property
    def axis_values(self) -> tuple[int, ...]:
        return self.values if self.values is not None else tuple(PRESETS[self.scenario][2])


@dataclass(frozen=True)
class SweepRow:
    sta_number: int
    axis_value: int
    metrics: MetricsReport


def _point_config(spec: SweepSpec, value: int, n: int) -> ScenarioConfig:
    mac = replace(spec.base_mac, **{spec.axis_field: value})
    return ScenarioConfig(
        n_stations=n,
        mac=mac,
        traffic=spec.traffic,
        saturated=spec.saturated,
        simulation_time_s=spec.simulation_time_s,
        seed=spec.seed,
        phy=spec.phy,
        sizes=spec.sizes,
    )


def _run_point(args: tuple[ScenarioConfig, int]) -> MetricsReport:
    cfg, rep = args
    return run_scenario(replace(cfg, seed=cfg.seed + rep)).metrics


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """One row per (axis value, station count), replication means applied.

    Rows are ordered axis-value-major, mirroring the per-value output files
    of the sweep this reproduces.
    """
    points = [
        (value, n, _point_config(spec, value, n))
        for value in spec.axis_values
        for n in spec.stations
    ]
    tasks = [(cfg, rep) for _, _, cfg in points for rep in range(spec.replications)]

    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, tasks, chunksize=1))
    else:
        results = [_run_point(t) for t in tasks]

    rows = []
    k = spec.replications
    for i, (value, n, _cfg) in enumerate(points):
        chunk = results[i * k:(i + 1) * k]
        mean = MetricsReport(
            pdr=sum(m.pdr for m in chunk) / k,
            plr=sum(m.plr for m in chunk) / k,
            agg_throughput_mbps=sum(m.agg_throughput_mbps for m in chunk) / k,
            avg_delay_s=sum(m.avg_delay_s for m in chunk) / k,
        )
        rows.append(SweepRow(sta_number=n, axis_value=value, metrics=mean))
    return rows


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def format_csv(rows: list[SweepRow], axis_column: str | None) -> str:
    """Comma-space separated CSV with the header token order of the reference
    output stream, plus the axis column when a parameter is swept."""
    header = list(CSV_HEADER)
    if axis_column:
        header.append(axis_column)
    lines = [", ".join(header)]
    for row in rows:
        m = row.metrics
        fields = [
            str(row.sta_number),
            _fmt(m.pdr),
            _fmt(m.plr),
            _fmt(m.agg_throughput_mbps),
            _fmt(m.avg_delay_s),
        ]
        if axis_column:
            fields.append(str(row.axis_value))
        lines.append(", ".join(fields))
    return "\n".join(lines) + "\n"


PLOT_METRICS = [
    ("pdr", lambda m: m.pdr),
    ("plr", lambda m: m.plr),
    ("throughput", lambda m: m.agg_throughput_mbps),
    ("delay", lambda m: m.avg_delay_s),
]


def emit_plot_data(rows: list[SweepRow], axis_column: str, out_dir: str) -> list[str]:
    """One whitespace-delimited file per metric: station count in the first
    column, one metric column per axis value.  Values are copied from the
    sweep rows, never recomputed."""
    values = sorted({r.axis_value for r in rows})
    stations = sorted({r.sta_number for r in rows})
    by_key = {(r.axis_value, r.sta_number): r.metrics for r in rows}
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, getter in PLOT_METRICS:
        path = os.path.join(out_dir, f"{name}.dat")
        lines = ["# staNumber " + " ".join(f"{axis_column}={v}" for v in values)]
        for n in stations:
            cells = [str(n)]
            for v in values:
                cells.append(_fmt(getter(by_key[(v, n)])))
            lines.append(" ".join(cells))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        written.append(path)
    return written
