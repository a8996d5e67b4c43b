"""Single collision-domain broadcast channel.

All stations are in range of each other (10 m star, zero propagation delay),
so the channel is one shared busy/idle timeline.  Any temporal overlap of two
transmissions corrupts every frame involved; there is no capture effect and
no bit-error model, which makes collisions the only loss mechanism.
"""

from __future__ import annotations

from .errors import InternalError
from .kernel import Scheduler, SimTime


class Transmission:
    __slots__ = ("station", "frame", "start", "end", "corrupted")

    def __init__(self, station, frame, start: SimTime, end: SimTime):
        self.station = station
        self.frame = frame
        self.start = start
        self.end = end
        self.corrupted = False


class Medium:
    """Tracks overlapping transmissions and drives busy/idle notifications.

    The attached listener (the DCF access coordinator) receives busy-start
    and busy-end callbacks; receivers get frames delivered at transmission
    end iff nothing overlapped them.
    """

    def __init__(self, scheduler: Scheduler):
        self.scheduler = scheduler
        self.stations: list = []  # all attached MAC entities, AP included
        self.active: list[Transmission] = []
        self.idle_since: SimTime = 0
        self.listener = None
        self._period_corrupted = False
        self._begun = 0
        self._finished = 0

    def attach(self, station) -> None:
        self.stations.append(station)

    def is_idle(self) -> bool:
        return not self.active

    def idle_duration(self) -> SimTime:
        if self.active:
            return 0
        return self.scheduler.now - self.idle_since

    def begin_transmission(self, station, frame) -> None:
        now = self.scheduler.now
        for tx in self.active:
            if tx.station is station:
                raise InternalError(
                    f"station {station.sid} began a second concurrent transmission"
                )
        tx = Transmission(station, frame, now, now + frame.airtime)
        if self.active:
            # any overlap corrupts every frame involved, both ways
            for other in self.active:
                other.corrupted = True
            tx.corrupted = True
            self._period_corrupted = True
        else:
            self._period_corrupted = False
            if self.listener is not None:
                self.listener.on_busy_start(now)
        self.active.append(tx)
        self._begun += 1
        self.scheduler.schedule(frame.airtime, lambda: self._finish(tx))

    def _finish(self, tx: Transmission) -> None:
        now = self.scheduler.now
        if now != tx.end:
            raise InternalError("transmission finished at the wrong time")
        self.active.remove(tx)
        self._finished += 1
        period_over = not self.active
        if period_over:
            self.idle_since = now
        corrupted_period = self._period_corrupted

        tx.station.on_tx_end(tx.frame)
        if not tx.corrupted:
            # deliver to the addressed receiver; everyone else overhears the
            # duration field (virtual carrier sense)
            frame = tx.frame
            for station in self.stations:
                if station is tx.station:
                    continue
                if station.sid == frame.dst:
                    station.receive_frame(frame, now)
                elif frame.duration > 0:
                    station.on_overheard(frame, now)

        if period_over and self.listener is not None:
            self.listener.on_busy_end(now, corrupted_period)

    def conservation_ok(self) -> bool:
        """Every begin matched by exactly one finish once the run drains."""
        return self._begun == self._finished + len(self.active)
