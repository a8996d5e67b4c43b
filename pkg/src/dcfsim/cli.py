"""Command-line front-end: a thin client over the service request models.

Subcommands build a request, dispatch it (in-process by default, or to a
running service via --server), and format the response.  All simulation
logic lives in the core package; this module only translates flags.

Exit codes: 0 success, 2 usage/config error, 3 I/O error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import ConfigError, DcfSimError, InternalError
from .service import models
from .stats import MetricsReport
from .sweep import SweepRow, format_csv, emit_plot_data, default_station_schedule

USAGE_EXIT = 2
IO_EXIT = 3
INTERNAL_EXIT = 4


def parse_stations(spec: str) -> list[int]:
    """'default' (1,2,4,...,60), 'a-b[:step]', or a comma list like '1,5,10'."""
    spec = spec.strip()
    if spec == "default":
        return default_station_schedule()
    try:
        if "-" in spec and "," not in spec:
            body, _, step_s = spec.partition(":")
            lo_s, _, hi_s = body.partition("-")
            lo, hi = int(lo_s), int(hi_s)
            step = int(step_s) if step_s else 1
            if lo < 1 or hi < lo or step < 1:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse station list {spec!r}") from None


def parse_int_list(spec: str) -> list[int]:
    try:
        return [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse integer list {spec!r}") from None


def load_config_file(path: str) -> dict[str, str]:
    """key = value lines; '#' starts a comment.  Flags win on conflict."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


# config-file keys accepted per subcommand, with their converters
_CONFIG_TYPES = {
    "stations": str,
    "scenario": str,
    "values": str,
    "cw_min": int,
    "cw_max": int,
    "retry_limit": int,
    "rts_threshold": int,
    "sim_time": float,
    "seed": int,
    "runs": int,
    "saturated": lambda v: v.lower() in ("1", "true", "yes", "on"),
    "payload": int,
    "app_rate": int,
    "on_time": float,
    "off_time": float,
    "app_start": float,
    "data_rate": int,
    "control_rate": int,
    "workers": int,
    "out": str,
    "plot_dir": str,
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    path = getattr(args, "config", None)
    if not path:
        return args
    for key, raw in load_config_file(path).items():
        conv = _CONFIG_TYPES.get(key)
        if conv is None:
            raise ConfigError(f"unknown config key {key!r}")
        if not hasattr(args, key):
            continue  # key not applicable to this subcommand
        if key in args._explicit:
            continue  # command-line flag wins
        setattr(args, key, conv(raw))
    return args


class _TrackingParser(argparse.ArgumentParser):
    """Records which destinations the user set explicitly, so config-file
    values only fill the gaps."""

    def parse_args(self, argv=None, namespace=None):  # type: ignore[override]
        ns = super().parse_args(argv, namespace)
        explicit = set()
        argv = list(sys.argv[1:] if argv is None else argv)
        for action in self._subcommand_actions():
            for opt in action.option_strings:
                if any(a == opt or a.startswith(opt + "=") for a in argv):
                    explicit.add(action.dest)
        ns._explicit = explicit
        return ns

    def _subcommand_actions(self):
        for action in self._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sub in action.choices.values():
                    yield from sub._actions
            else:
                yield action


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cw-min", dest="cw_min", type=int, default=15)
    p.add_argument("--cw-max", dest="cw_max", type=int, default=1023)
    p.add_argument("--retry-limit", dest="retry_limit", type=int, default=7)
    p.add_argument("--rts-threshold", dest="rts_threshold", type=int, default=65535)
    p.add_argument("--sim-time", dest="sim_time", type=float, default=30.0,
                   help="simulated seconds (metric divisor; run stops 1 s later)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--runs", type=int, default=1, help="replications; seeds seed..seed+runs-1")
    p.add_argument("--saturated", action="store_true")
    p.add_argument("--payload", type=int, default=512, help="application payload bytes")
    p.add_argument("--app-rate", dest="app_rate", type=int, default=500_000,
                   help="on/off source rate in b/s")
    p.add_argument("--on-time", dest="on_time", type=float, default=1.0)
    p.add_argument("--off-time", dest="off_time", type=float, default=1.0)
    p.add_argument("--app-start", dest="app_start", type=float, default=1.0)
    p.add_argument("--data-rate", dest="data_rate", type=int, default=12_000_000)
    p.add_argument("--control-rate", dest="control_rate", type=int, default=12_000_000)
    p.add_argument("--config", help="key=value config file; flags win on conflict")
    p.add_argument("--server", help="base URL of a running dcfsim service; "
                                    "default is in-process execution")


def build_parser() -> argparse.ArgumentParser:
    parser = _TrackingParser(prog="dcfsim",
                             description="IEEE 802.11 DCF simulator and oracle")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario and print metrics")
    sim.add_argument("--stations", default="1", help="station count")
    _add_common(sim)
    sim.add_argument("--trace", action="store_true",
                     help="write MAC event trace to stderr (in-process only)")
    sim.add_argument("--flows", action="store_true", help="print per-flow counters")
    sim.add_argument("--json", action="store_true", help="print the raw response")

    sw = sub.add_parser("sweep", help="sweep station counts over a scenario preset")
    sw.add_argument("--scenario", required=True,
                    choices=["access", "cwmin", "cwmax", "retry"])
    sw.add_argument("--stations", default="default",
                    help="'default', 'a-b[:step]', or comma list (default: 1,2,4,...,60)")
    sw.add_argument("--values", help="override the preset's swept values (comma list)")
    _add_common(sw)
    sw.add_argument("--workers", type=int, default=None,
                    help="parallel scenario points (default: CPU count)")
    sw.add_argument("--out", help="CSV output path (default: stdout)")
    sw.add_argument("--plot-dir", dest="plot_dir",
                    help="also write per-metric gnuplot column files here")

    orc = sub.add_parser("oracle", help="saturation fixed-point CSV over station counts")
    orc.add_argument("--stations", default="default")
    orc.add_argument("--cw-min", dest="cw_min", type=int, default=15)
    orc.add_argument("--cw-max", dest="cw_max", type=int, default=1023)
    orc.add_argument("--payload", type=int, default=512)
    orc.add_argument("--config", help="key=value config file; flags win on conflict")
    orc.add_argument("--server", help="base URL of a running dcfsim service")
    orc.add_argument("--out", help="CSV output path (default: stdout)")

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _mac_settings(args) -> models.MacSettings:
    return models.MacSettings(cw_min=args.cw_min, cw_max=args.cw_max,
                              retry_limit=args.retry_limit,
                              rts_threshold=args.rts_threshold)


def _traffic_settings(args) -> models.TrafficSettings:
    return models.TrafficSettings(on_s=args.on_time, off_s=args.off_time,
                                  data_rate_bps=args.app_rate,
                                  payload_bytes=args.payload,
                                  start_s=args.app_start)


def _phy_settings(args) -> models.PhySettings:
    return models.PhySettings(data_rate_bps=args.data_rate,
                              control_rate_bps=args.control_rate)


def _post(server: str, path: str, payload: dict, response_model):
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=None)
    if resp.status_code == 422:
        raise ConfigError(f"service rejected request: {resp.text}")
    if resp.status_code != 200:
        raise InternalError(f"service error {resp.status_code}: {resp.text}")
    return response_model.model_validate(resp.json())


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _stderr_trace(t, sid, event, cw, retry) -> None:
    sys.stderr.write(f"{t / 1e9:.9f} sta={sid} {event} cw={cw} retry={retry}\n")


def cmd_simulate(args) -> int:
    stations = parse_stations(args.stations)
    if len(stations) != 1:
        raise ConfigError("simulate takes a single station count; use sweep for lists")
    req = models.SimulateRequest(
        stations=stations[0], mac=_mac_settings(args),
        traffic=_traffic_settings(args), phy=_phy_settings(args),
        saturated=args.saturated, sim_time_s=args.sim_time,
        seed=args.seed, runs=args.runs, include_flows=args.flows,
    )
    if args.server:
        resp = _post(args.server, "/simulate", req.model_dump(), models.SimulateResponse)
    else:
        from .service import handlers

        trace = _stderr_trace if args.trace else None
        resp = handlers.simulate(req, trace=trace)

    if args.json:
        print(resp.model_dump_json(indent=2))
        return 0
    m = resp.mean
    print(f"stations={stations[0]} runs={args.runs} seed={args.seed}"
          + (" saturated" if args.saturated else ""))
    print(f"PDR {m.pdr:.6g}")
    print(f"PLR {m.plr:.6g}")
    print(f"aggThroughput {m.agg_throughput_mbps:.6g} Mb/s")
    print(f"averageDelay {m.avg_delay_s:.6g} s")
    print(f"collisionProbability {resp.collision_probability:.6g}")
    if resp.flows:
        print("flow  tx      rx      lost    residual  rxBytes      delaySum(s)")
        for f in resp.flows:
            print(f"{f.station:<5d} {f.tx_packets:<7d} {f.rx_packets:<7d} "
                  f"{f.lost_packets:<7d} {f.residual:<9d} {f.rx_bytes:<12d} "
                  f"{f.delay_sum_s:.6g}")
    return 0


def cmd_sweep(args) -> int:
    req = models.SweepRequest(
        scenario=args.scenario,
        stations=parse_stations(args.stations),
        values=parse_int_list(args.values) if args.values else None,
        mac=_mac_settings(args), traffic=_traffic_settings(args),
        phy=_phy_settings(args), saturated=args.saturated,
        sim_time_s=args.sim_time, seed=args.seed, runs=args.runs,
        workers=args.workers,
    )
    if args.server:
        resp = _post(args.server, "/sweep", req.model_dump(), models.SweepResponse)
    else:
        from .service import handlers

        resp = handlers.sweep(req)

    rows = [
        SweepRow(r.sta_number, r.axis_value,
                 MetricsReport(r.metrics.pdr, r.metrics.plr,
                               r.metrics.agg_throughput_mbps, r.metrics.avg_delay_s))
        for r in resp.rows
    ]
    _write_text(args.out, format_csv(rows, resp.axis_column))
    if args.plot_dir:
        emit_plot_data(rows, resp.axis_column, args.plot_dir)
    return 0


def cmd_oracle(args) -> int:
    req = models.OracleRequest(stations=parse_stations(args.stations),
                               cw_min=args.cw_min, cw_max=args.cw_max,
                               payload_bytes=args.payload)
    if args.server:
        resp = _post(args.server, "/oracle", req.model_dump(), models.OracleResponse)
    else:
        from .service import handlers

        resp = handlers.oracle(req)
    lines = ["n, tau, p, S_basic, S_rts"]
    for r in resp.rows:
        lines.append(f"{r.n}, {r.tau:.6g}, {r.p:.6g}, "
                     f"{r.s_basic_mbps:.6g}, {r.s_rts_mbps:.6g}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args)
        handler = {
            "simulate": cmd_simulate,
            "sweep": cmd_sweep,
            "oracle": cmd_oracle,
            "serve": cmd_serve,
        }[args.command]
        return handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return IO_EXIT
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_EXIT
    except DcfSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
