"""Markov fixed-point model of saturated DCF used to cross-check the simulator.

The classic infinite-retry formulation: every station transmits in a generic
slot with probability tau, conditioned on a collision probability p that the
fixed point makes self-consistent.  Throughput follows from the expected
length of a slot weighted by idle/success/collision outcomes, with Ts and Tc
taken from the same PHY timing model the simulator uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, InternalError
from .phy import FrameSizes, PhyParams, PhyTimings

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class BianchiParams:
    n: int
    cw_min: int = 15
    cw_max: int = 1023
    payload_bytes: int = 512
    phy: PhyParams = PhyParams()
    sizes: FrameSizes = FrameSizes()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"need at least one station, got {self.n}")
        w = self.cw_min + 1
        m = math.log2((self.cw_max + 1) / w)
        if w < 2 or m < 0 or abs(m - round(m)) > 1e-9:
            raise ConfigError(
                f"cw bounds must give an integral doubling-stage count: "
                f"cw_min={self.cw_min}, cw_max={self.cw_max}"
            )

    @property
    def w(self) -> int:
        """Initial window size W (the draw has W equally likely values)."""
        return self.cw_min + 1

    @property
    def m(self) -> int:
        """Number of window-doubling stages."""
        return round(math.log2((self.cw_max + 1) / (self.cw_min + 1)))


def _tau_of_p(p: float, w: int, m: int) -> float:
    """tau = 2(1-2p) / ((1-2p)(W+1) + pW(1-(2p)^m)), written via the geometric
    sum so the removable singularity at p = 1/2 stays finite."""
    if abs(1.0 - 2.0 * p) < 1e-9:
        geo = float(m)
    else:
        geo = (1.0 - (2.0 * p) ** m) / (1.0 - 2.0 * p)
    return 2.0 / (w + 1.0 + p * w * geo)


def solve_fixed_point(n: int, w: int, m: int) -> tuple[float, float]:
    """Solve tau = tau(p), p = 1 - (1 - tau)^(n-1) by bisection on p.

    The map f(p) = p - (1 - (1 - tau(p))^(n-1)) is strictly increasing, so
    the root in [0, 1) is unique.  Returns (tau, p).
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if n == 1:
        return _tau_of_p(0.0, w, m), 0.0

    def f(p: float) -> float:
        tau = _tau_of_p(p, w, m)
        return p - (1.0 - (1.0 - tau) ** (n - 1))

    lo, hi = 0.0, 1.0 - 1e-15
    if f(lo) > 0 or f(hi) < 0:
        raise InternalError("fixed-point bracketing failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    tau = _tau_of_p(p, w, m)
    if abs(f(p)) > RESIDUAL_TOL:
        raise InternalError(f"fixed point did not converge: residual {f(p):.3e}")
    return tau, p


def saturation_throughput(params: BianchiParams, use_rts: bool) -> float:
    """Saturation throughput in Mb/s of IP-level payload bits, comparable to
    the simulator's aggregated-throughput metric."""
    tau, _p = solve_fixed_point(params.n, params.w, params.m)
    n = params.n
    p_idle = (1.0 - tau) ** n
    ptr = 1.0 - p_idle
    if ptr == 0.0:
        return 0.0
    ps = n * tau * (1.0 - tau) ** (n - 1) / ptr

    timings = PhyTimings(params.phy, params.sizes)
    ts_ns, tc_ns = timings.exchange_durations(params.payload_bytes, use_rts)
    sigma_ns = params.phy.slot_time
    payload_bits = params.sizes.ip_bytes(params.payload_bytes) * 8

    slot_s = ((1.0 - ptr) * sigma_ns + ptr * ps * ts_ns + ptr * (1.0 - ps) * tc_ns) / 1e9
    return ptr * ps * payload_bits / slot_s / 1e6


def oracle_rows(stations: list[int], cw_min: int, cw_max: int,
                payload_bytes: int = 512) -> list[dict]:
    """(n, tau, p, S_basic, S_rts) for a sweep over station counts."""
    rows = []
    for n in stations:
        params = BianchiParams(n=n, cw_min=cw_min, cw_max=cw_max,
                               payload_bytes=payload_bytes)
        tau, p = solve_fixed_point(n, params.w, params.m)
        rows.append({
            "n": n,
            "tau": tau,
            "p": p,
            "s_basic_mbps": saturation_throughput(params, use_rts=False),
            "s_rts_mbps": saturation_throughput(params, use_rts=True),
        })
    return rows
