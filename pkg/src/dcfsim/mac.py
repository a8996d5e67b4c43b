"""Per-station DCF state machines plus the shared channel-access coordinator.

Stations contend with DIFS/EIFS deferral and binary exponential backoff;
the AP only ever answers with SIFS-spaced responses (CTS/ACK) and never
contends.  Backoff is event-driven: instead of one event per 9 us slot, the
coordinator computes each contender's counter-expiry instant per idle period
and schedules a single resolution event at the earliest one.  Stations whose
counters hit zero in the same slot transmit at the identical tick, which is
exactly how simultaneous-slot collisions arise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ConfigError, InternalError
from .kernel import RandomStream, Scheduler, SimEvent, SimTime
from .medium import Medium
from .phy import PhyTimings
from .stats import FlowKey, FlowMonitor

AP_ID = 0

# MAC phases
IDLE = "IDLE"
CONTEND = "CONTEND"  # backoff armed or frozen; covers post-backoff too
TX = "TX"
WAIT_CTS = "WAIT_CTS"
WAIT_ACK = "WAIT_ACK"
TX_PENDING = "TX_PENDING"  # CTS received, DATA committed after SIFS

TraceFn = Callable[[SimTime, int, str, int, int], None]


@dataclass(frozen=True)
class MacParams:
    """Contention configuration.  cw values follow the attribute convention
    where cw is the inclusive upper bound of the backoff draw [0, cw]."""

    cw_min: int = 15
    cw_max: int = 1023
    retry_limit: int = 7
    rts_threshold: int = 65535

    def __post_init__(self) -> None:
        if self.cw_min < 1:
            raise ConfigError(f"cw_min must be >= 1, got {self.cw_min}")
        if self.cw_min > self.cw_max:
            raise ConfigError(f"cw_min {self.cw_min} exceeds cw_max {self.cw_max}")
        if self.retry_limit < 1:
            raise ConfigError(f"retry_limit must be >= 1, got {self.retry_limit}")
        if self.rts_threshold < 0:
            raise ConfigError("rts_threshold must be non-negative")


def next_cw(cw: int, cw_max: int) -> int:
    """Double the window on failure: cw <- min(2*(cw+1)-1, cw_max)."""
    return min(2 * (cw + 1) - 1, cw_max)


class Frame:
    __slots__ = (
        "kind", "src", "dst", "payload_bytes", "mpdu_bytes",
        "airtime", "duration", "seq", "flow", "gen_time",
    )

    def __init__(self, kind, src, dst, payload_bytes, mpdu_bytes, airtime,
                 duration, seq, flow, gen_time):
        self.kind = kind
        self.src = src
        self.dst = dst
        self.payload_bytes = payload_bytes
        self.mpdu_bytes = mpdu_bytes
        self.airtime = airtime
        self.duration = duration
        self.seq = seq
        self.flow = flow
        self.gen_time = gen_time

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Frame({self.kind} {self.src}->{self.dst} seq={self.seq})"


def control_frame(kind: str, src: int, dst: int, airtime: SimTime,
                  duration: SimTime) -> Frame:
    return Frame(kind, src, dst, 0, 0, airtime, duration, -1, None, 0)


class AccessCoordinator:
    """Shared DIFS/EIFS + slot grid for all contending stations.

    Owns no per-station policy: stations decide what to send and with which
    counter; the coordinator only turns (epoch, remaining slots) into the
    instant each counter reaches zero, and wakes every station whose counter
    expires earliest.  Ties wake together and collide on the medium.
    """

    def __init__(self, scheduler: Scheduler, medium: Medium, timings: PhyTimings,
                 eifs_enabled: bool = True):
        self.scheduler = scheduler
        self.medium = medium
        self.slot = timings.phy.slot_time
        self.difs = timings.phy.difs
        self.eifs = timings.eifs() if eifs_enabled else timings.phy.difs
        self._contenders: dict[int, "StationMac"] = {}
        self._busy_started_at: SimTime = 0
        self._last_corrupted = False
        self._gen = 0
        self._pending: Optional[SimEvent] = None
        medium.listener = self

    # -- medium callbacks -------------------------------------------------

    def on_busy_start(self, t: SimTime) -> None:
        self._busy_started_at = t
        self._gen += 1
        if self._pending is not None:
            self.scheduler.cancel(self._pending)
            self._pending = None

    def on_busy_end(self, t: SimTime, corrupted: bool) -> None:
        self._last_corrupted = corrupted
        self._gen += 1
        self._schedule_resolution()

    # -- station-facing API ------------------------------------------------

    def aifs_now(self) -> SimTime:
        """Deferral the current idle period requires before slot counting."""
        return self.eifs if self._last_corrupted else self.difs

    def can_transmit_immediately(self, station: "StationMac") -> bool:
        now = self.scheduler.now
        return (
            self.medium.is_idle()
            and self.medium.idle_duration() >= self.aifs_now()
            and station.nav_until <= now
        )

    def request_access(self, station: "StationMac") -> None:
        station.epoch = None
        station.expiry = 0
        station.armed_window = -1
        self._contenders[station.sid] = station
        if self.medium.is_idle():
            self._gen += 1
            self._schedule_resolution()

    # -- internals ----------------------------------------------------------

    def _arm(self, s: "StationMac", idle_start: SimTime) -> None:
        if s.armed_window == idle_start and s.epoch is not None:
            return  # already armed for this idle window
        # Settle slots consumed during the idle window that ended when the
        # last busy period began (floor of whole idle slots past the epoch).
        if s.epoch is not None:
            elapsed = self._busy_started_at - s.epoch
            if elapsed > 0:
                s.backoff_slots -= min(elapsed // self.slot, s.backoff_slots)
        # Counting starts once phys carrier, NAV, and the access request have
        # all been idle/settled for the required spacing.
        epoch = max(
            idle_start + self.aifs_now(),
            s.nav_until + self.difs,
            s.request_time + self.difs,
        )
        s.epoch = epoch
        s.expiry = epoch + s.backoff_slots * self.slot
        s.armed_window = idle_start

    def _schedule_resolution(self) -> None:
        if self._pending is not None:
            self.scheduler.cancel(self._pending)
            self._pending = None
        if not self._contenders or not self.medium.is_idle():
            return
        idle_start = self.medium.idle_since
        expiry = None
        for s in self._contenders.values():
            self._arm(s, idle_start)
            if expiry is None or s.expiry < expiry:
                expiry = s.expiry
        gen = self._gen
        self._pending = self.scheduler.schedule(
            expiry - self.scheduler.now, lambda: self._fire(gen)
        )

    def _fire(self, gen: int) -> None:
        if gen != self._gen:
            return
        self._pending = None
        now = self.scheduler.now
        winners = sorted(
            (s for s in self._contenders.values() if s.expiry == now),
            key=lambda s: s.sid,
        )
        for s in winners:
            del self._contenders[s.sid]
            s.epoch = None
        transmitted = False
        for s in winners:
            transmitted = s.on_access_granted(now) or transmitted
        if not transmitted and self._contenders and self.medium.is_idle():
            self._gen += 1
            self._schedule_resolution()


class StationMac:
    """DCF state machine of one uplink station."""

    __slots__ = (
        "sid", "scheduler", "medium", "coordinator", "timings", "params",
        "stream", "source", "trace",
        "phase", "pending", "cw", "retry_count", "backoff_slots",
        "epoch", "expiry", "request_time", "nav_until", "armed_window",
        "_timeout_ev", "attempts", "retx_attempts", "failures",
        "delivered", "dropped", "consumed",
    )

    def __init__(self, sid: int, scheduler: Scheduler, medium: Medium,
                 coordinator: AccessCoordinator, timings: PhyTimings,
                 params: MacParams, stream: RandomStream,
                 trace: Optional[TraceFn] = None):
        if sid == AP_ID:
            raise InternalError("station id 0 is reserved for the AP")
        self.sid = sid
        self.scheduler = scheduler
        self.medium = medium
        self.coordinator = coordinator
        self.timings = timings
        self.params = params
        self.stream = stream
        self.source = None  # wired by the traffic module
        self.trace = trace

        self.phase = IDLE
        self.pending: Optional[Frame] = None
        self.cw = params.cw_min
        self.retry_count = 0
        self.backoff_slots = 0
        self.epoch: Optional[SimTime] = None
        self.expiry: SimTime = 0
        self.request_time: SimTime = 0
        self.nav_until: SimTime = 0
        self.armed_window: SimTime = -1
        self._timeout_ev: Optional[SimEvent] = None

        self.attempts = 0
        self.retx_attempts = 0
        self.failures = 0
        self.delivered = 0
        self.dropped = 0
        self.consumed = 0

        medium.attach(self)

    # -- helpers -------------------------------------------------------------

    def _trace(self, event: str) -> None:
        if self.trace is not None:
            self.trace(self.scheduler.now, self.sid, event, self.cw, self.retry_count)

    def uses_rts(self, frame: Frame) -> bool:
        return frame.mpdu_bytes > self.params.rts_threshold

    def draw_backoff(self) -> int:
        return self.stream.uniform_int(0, self.cw)

    def _start_contention(self) -> None:
        self.phase = CONTEND
        self.request_time = self.scheduler.now
        self.coordinator.request_access(self)

    # -- traffic-side entry points --------------------------------------------

    def notify_arrival(self) -> None:
        """Queue became non-empty.  Transmit at once when the medium has been
        idle long enough, otherwise begin a fresh backoff cycle."""
        if self.phase != IDLE:
            return  # busy serving or contending (incl. post-backoff)
        self.pending = self.source.dequeue()
        if self.pending is None:
            return
        self.consumed += 1
        self._trace("enqueue")
        if self.coordinator.can_transmit_immediately(self):
            self._transmit()
        else:
            self.backoff_slots = self.draw_backoff()
            self._trace("backoff_draw")
            self._start_contention()

    # -- coordinator callbacks -------------------------------------------------

    def on_access_granted(self, now: SimTime) -> bool:
        """Backoff counter reached zero.  Returns True iff a transmission
        started (a post-backoff expiring with an empty queue does not)."""
        self.backoff_slots = 0
        if self.pending is None:
            self.pending = self.source.dequeue()
            if self.pending is None:
                self.phase = IDLE
                return False
            self.consumed += 1
        self._transmit()
        return True

    # -- medium callbacks -------------------------------------------------------

    def on_tx_end(self, frame: Frame) -> None:
        if frame.kind == "RTS":
            self.phase = WAIT_CTS
            self._timeout_ev = self.scheduler.schedule(
                self.timings.cts_timeout(), self._on_timeout
            )
        elif frame.kind == "DATA":
            self.phase = WAIT_ACK
            self._timeout_ev = self.scheduler.schedule(
                self.timings.ack_timeout(), self._on_timeout
            )

    def receive_frame(self, frame: Frame, now: SimTime) -> None:
        if frame.kind == "CTS" and self.phase == WAIT_CTS:
            self.scheduler.cancel(self._timeout_ev)
            self._timeout_ev = None
            self.phase = TX_PENDING
            self._trace("cts_rx")
            self.scheduler.schedule(self.timings.phy.sifs, self._send_data)
        elif frame.kind == "ACK" and self.phase == WAIT_ACK:
            self.scheduler.cancel(self._timeout_ev)
            self._timeout_ev = None
            self._trace("ack_rx")
            self._on_success()

    def on_overheard(self, frame: Frame, now: SimTime) -> None:
        end = now + frame.duration
        if end > self.nav_until:
            self.nav_until = end

    # -- transmission paths --------------------------------------------------------

    def _transmit(self) -> None:
        if self.nav_until > self.scheduler.now:
            raise InternalError(f"station {self.sid} would transmit inside NAV")
        frame = self.pending
        self.attempts += 1
        if self.retry_count > 0:
            self.retx_attempts += 1
        if self.uses_rts(frame):
            rts = control_frame(
                "RTS", self.sid, AP_ID, self.timings.rts_airtime,
                3 * self.timings.phy.sifs + self.timings.cts_airtime
                + frame.airtime + self.timings.ack_airtime,
            )
            self.phase = TX
            self._trace("tx_rts")
            self.medium.begin_transmission(self, rts)
        else:
            self.phase = TX
            self._trace("tx_data")
            self.medium.begin_transmission(self, frame)

    def _send_data(self) -> None:
        self.phase = TX
        self._trace("tx_data")
        self.medium.begin_transmission(self, self.pending)

    # -- outcome handling --------------------------------------------------------------

    def _on_success(self) -> None:
        self.delivered += 1
        self.cw = self.params.cw_min
        self.retry_count = 0
        self.pending = None
        self._post_backoff()

    def _on_timeout(self) -> None:
        self._timeout_ev = None
        self.failures += 1
        self.retry_count += 1
        self._trace("timeout")
        if self.retry_count > self.params.retry_limit:
            self.dropped += 1
            if self.pending.flow is not None:
                self.source.report_drop(self.pending)
            self._trace("drop")
            self.cw = self.params.cw_min
            self.retry_count = 0
            self.pending = None
            self._post_backoff()
        else:
            self.cw = next_cw(self.cw, self.params.cw_max)
            self.backoff_slots = self.draw_backoff()
            self._trace("backoff_draw")
            self._start_contention()

    def _post_backoff(self) -> None:
        """Mandatory backoff after every transmission attempt completes,
        queue empty or not; the next packet is pulled when it expires."""
        self.backoff_slots = self.draw_backoff()
        self._trace("post_backoff")
        self._start_contention()

    # -- run-end accounting -------------------------------------------------------------

    def undelivered_in_flight(self) -> int:
        """Packets consumed from the queue but neither delivered nor dropped."""
        return self.consumed - self.delivered - self.dropped


class ApMac:
    """Access point: decodes uplink frames, answers after SIFS, hands DATA
    payloads to the flow monitor.  Never contends for the channel."""

    __slots__ = ("sid", "scheduler", "medium", "timings", "monitor",
                 "sizes", "rx_by_flow")

    def __init__(self, scheduler: Scheduler, medium: Medium,
                 timings: PhyTimings, monitor: FlowMonitor):
        self.sid = AP_ID
        self.scheduler = scheduler
        self.medium = medium
        self.timings = timings
        self.monitor = monitor
        self.sizes = timings.sizes
        self.rx_by_flow: dict[FlowKey, int] = {}
        medium.attach(self)

    def receive_frame(self, frame: Frame, now: SimTime) -> None:
        if frame.kind == "RTS":
            cts = control_frame(
                "CTS", self.sid, frame.src, self.timings.cts_airtime,
                frame.duration - self.timings.phy.sifs - self.timings.cts_airtime,
            )
            self.scheduler.schedule(
                self.timings.phy.sifs,
                lambda: self.medium.begin_transmission(self, cts),
            )
        elif frame.kind == "DATA":
            self.monitor.record_rx(
                frame.flow, self.sizes.ip_bytes(frame.payload_bytes),
                frame.gen_time, now,
            )
            self.rx_by_flow[frame.flow] = self.rx_by_flow.get(frame.flow, 0) + 1
            ack = control_frame("ACK", self.sid, frame.src, self.timings.ack_airtime, 0)
            self.scheduler.schedule(
                self.timings.phy.sifs,
                lambda: self.medium.begin_transmission(self, ack),
            )

    def on_tx_end(self, frame: Frame) -> None:
        pass

    def on_overheard(self, frame: Frame, now: SimTime) -> None:
        pass
