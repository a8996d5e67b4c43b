"""Per-station packet sources feeding the MAC queue.

Two source kinds:

- OnOffSource: deterministic on/off generator (constant phases, all stations
  phase-aligned at start_time), FIFO queue with tail drop.  Every generated
  packet counts as transmitted at the IP probe, including ones the full
  queue rejects.
- SaturatedSource: keeps the queue permanently full; the queue is primed to
  capacity at start and refilled each time the MAC consumes the head, with
  gen_time stamped at enqueue.  Used for oracle comparisons, where the MAC
  must never idle for lack of packets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ConfigError
from .kernel import Scheduler, SimTime, seconds
from .mac import AP_ID, Frame, StationMac
from .phy import PhyTimings
from .stats import FlowKey, FlowMonitor

QUEUE_CAPACITY = 500


@dataclass(frozen=True)
class OnOffConfig:
    on_s: float = 1.0
    off_s: float = 1.0
    data_rate_bps: int = 500_000
    payload_bytes: int = 512
    start_s: float = 1.0
    stop_s: float = 31.0

    def __post_init__(self) -> None:
        if self.on_s <= 0 or self.off_s < 0:
            raise ConfigError("on duration must be positive, off non-negative")
        if self.data_rate_bps <= 0 or self.payload_bytes <= 0:
            raise ConfigError("data rate and payload must be positive")
        if self.stop_s <= self.start_s:
            raise ConfigError("stop time must follow start time")

    @property
    def interval_ns(self) -> SimTime:
        """Packet inter-arrival while ON: payload bits / data rate."""
        return round(self.payload_bytes * 8 * 1_000_000_000 / self.data_rate_bps)


class _SourceBase:
    """Frame construction and drop reporting shared by both source kinds."""

    def __init__(self, scheduler: Scheduler, mac: StationMac, timings: PhyTimings,
                 monitor: FlowMonitor, flow: FlowKey, payload_bytes: int):
        self.scheduler = scheduler
        self.mac = mac
        self.monitor = monitor
        self.flow = flow
        self.payload_bytes = payload_bytes
        self._mpdu = timings.sizes.data_mpdu_bytes(payload_bytes)
        self._ip_bytes = timings.sizes.ip_bytes(payload_bytes)
        self._airtime = timings.data_airtime(payload_bytes)
        # DATA reserves the medium through the ACK
        self._duration = timings.phy.sifs + timings.ack_airtime
        self._seq = 0
        self.queue: deque[Frame] = deque()
        mac.source = self

    def _make_frame(self, gen_time: SimTime) -> Frame:
        self._seq += 1
        return Frame(
            "DATA", self.mac.sid, AP_ID, self.payload_bytes, self._mpdu,
            self._airtime, self._duration, self._seq, self.flow, gen_time,
        )

    def report_drop(self, frame: Frame) -> None:
        """Retry limit exhausted at the MAC."""
        self.monitor.record_lost(frame.flow)

    def queue_len(self) -> int:
        return len(self.queue)


class OnOffSource(_SourceBase):
    def __init__(self, scheduler, mac, timings, monitor, flow, cfg: OnOffConfig):
        super().__init__(scheduler, mac, timings, monitor, flow, cfg.payload_bytes)
        self.cfg = cfg
        self._stop_ns = seconds(cfg.stop_s)

    def start(self) -> None:
        """Schedule every ON-period start upfront (phases are deterministic)."""
        period = seconds(self.cfg.on_s + self.cfg.off_s)
        t_on = seconds(self.cfg.start_s)
        while t_on < self._stop_ns:
            on_end = min(t_on + seconds(self.cfg.on_s), self._stop_ns)
            self.scheduler.schedule(
                t_on + self.cfg.interval_ns - self.scheduler.now,
                lambda end=on_end: self._generate(end),
            )
            t_on += period

    def _generate(self, on_end: SimTime) -> None:
        now = self.scheduler.now
        if now > on_end:
            return
        self.monitor.record_tx(self.flow, self._ip_bytes, now)
        if len(self.queue) >= QUEUE_CAPACITY:
            self.monitor.record_lost(self.flow)  # tail drop, probe already counted tx
        else:
            self.queue.append(self._make_frame(now))
            self.mac.notify_arrival()
        nxt = now + self.cfg.interval_ns
        if nxt <= on_end:
            self.scheduler.schedule(self.cfg.interval_ns, lambda: self._generate(on_end))

    def dequeue(self) -> Frame | None:
        return self.queue.popleft() if self.queue else None


class SaturatedSource(_SourceBase):
    """Overload generator: the queue is primed full and fed by a deterministic
    arrival grid whose aggregate rate equals the PHY data rate, comfortably
    above what DCF can serve at any station count.  The queue therefore stays
    full (each MAC consume opens one slot that the next arrival refills),
    rejected arrivals count as lost, and the MAC never idles."""

    def __init__(self, scheduler, mac, timings, monitor, flow,
                 payload_bytes: int, n_stations: int, start_s: float, stop_s: float):
        super().__init__(scheduler, mac, timings, monitor, flow, payload_bytes)
        # per-station inter-arrival; aggregate over n stations = data rate
        self._num = n_stations * payload_bytes * 8 * 1_000_000_000
        self._den = timings.phy.data_rate
        self._start_ns = seconds(start_s)
        self._stop_ns = seconds(stop_s)
        self._k = 0

    def _arrival_time(self, k: int) -> SimTime:
        return self._start_ns + (k * self._num) // self._den

    def start(self) -> None:
        now = self.scheduler.now
        for _ in range(QUEUE_CAPACITY):
            self.monitor.record_tx(self.flow, self._ip_bytes, now)
            self.queue.append(self._make_frame(now))
        self.mac.notify_arrival()
        self._k = 1
        self.scheduler.schedule(self._arrival_time(1) - now, self._arrival)

    def _arrival(self) -> None:
        now = self.scheduler.now
        self.monitor.record_tx(self.flow, self._ip_bytes, now)
        if len(self.queue) >= QUEUE_CAPACITY:
            self.monitor.record_lost(self.flow)
        else:
            self.queue.append(self._make_frame(now))
            self.mac.notify_arrival()
        self._k += 1
        nxt = self._arrival_time(self._k)
        if nxt <= self._stop_ns:
            self.scheduler.schedule(nxt - now, self._arrival)

    def dequeue(self) -> Frame | None:
        return self.queue.popleft() if self.queue else None
