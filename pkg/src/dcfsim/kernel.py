"""Deterministic discrete-event kernel with an integer-nanosecond clock.

Events execute in (time, insertion-sequence) order, so simultaneous events
fire in FIFO order and a run is fully reproducible for a fixed seed.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from typing import Callable

from .errors import InternalError

# Time is a plain int counting nanoseconds since simulation start.  All
# 802.11a intervals are whole microseconds, so ns arithmetic is exact.
SimTime = int

NS = 1
US = 1_000
MS = 1_000_000
SEC = 1_000_000_000


def us(v: int) -> SimTime:
    return v * US


def seconds(v: float) -> SimTime:
    """Convert seconds to ns; exact for the ms-granular values used here."""
    return round(v * SEC)


class SimEvent:
    """A scheduled callback.  Returned by Scheduler.schedule as the handle
    used for cancellation; cancelled events never execute."""

    __slots__ = ("time", "seq", "fn", "cancelled")

    def __init__(self, time: SimTime, seq: int, fn: Callable[[], None]):
        self.time = time
        self.seq = seq
        self.fn = fn
        self.cancelled = False

    def __lt__(self, other: "SimEvent") -> bool:
        return (self.time, self.seq) < (other.time, other.seq)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        state = "cancelled" if self.cancelled else "pending"
        return f"SimEvent(t={self.time}, seq={self.seq}, {state})"


class Scheduler:
    """Single-threaded event scheduler owning the virtual clock.

    Not shareable across threads mid-run; independent instances may run
    concurrently (one per scenario point).
    """

    def __init__(self) -> None:
        self._heap: list[SimEvent] = []
        self._now: SimTime = 0
        self._seq = 0
        self._running = False

    @property
    def now(self) -> SimTime:
        return self._now

    def schedule(self, delay: SimTime, fn: Callable[[], None]) -> SimEvent:
        """Queue fn at now + delay and return a cancellable handle."""
        if delay < 0:
            raise InternalError(f"event scheduled in the past (delay={delay} ns)")
        ev = SimEvent(self._now + delay, self._seq, fn)
        self._seq += 1
        heapq.heappush(self._heap, ev)
        return ev

    def cancel(self, ev: SimEvent) -> bool:
        """Cancel ev; returns True iff it had not yet executed or been
        cancelled.  Stale handles are safe (idempotent)."""
        if ev.cancelled or ev.fn is None:  # fn is cleared once executed
            return False
        ev.cancelled = True
        return True

    def run_until(self, t_end: SimTime) -> int:
        """Execute all non-cancelled events with time <= t_end in order.

        Returns the number of events executed; afterwards now == t_end.
        """
        if self._running:
            raise InternalError("kernel already running")
        self._running = True
        executed = 0
        heap = self._heap
        try:
            while heap and heap[0].time <= t_end:
                ev = heapq.heappop(heap)
                if ev.cancelled:
                    continue
                if ev.time < self._now:
                    raise InternalError(
                        f"event time {ev.time} precedes clock {self._now}"
                    )
                self._now = ev.time
                fn = ev.fn
                ev.fn = None  # type: ignore[assignment]  # marks "already ran"
                fn()
                executed += 1
        finally:
            self._running = False
        if t_end > self._now:
            self._now = t_end
        return executed


def _derive_seed(seed_root: int, stream_id: int) -> int:
    """Map (seed_root, stream_id) to an independent 128-bit seed.

    SHA-256 keeps distinct streams statistically independent and the mapping
    identical across platforms and processes.
    """
    digest = hashlib.sha256(f"{seed_root}/{stream_id}".encode()).digest()
    return int.from_bytes(digest[:16], "big")


class RandomStream:
    """Reproducible per-station (or per-subsystem) random stream.

    Two streams constructed with the same (seed_root, stream_id) yield the
    same draw sequence; distinct stream_ids do not interact, so adding
    stations never perturbs existing ones.
    """

    __slots__ = ("seed_root", "stream_id", "_rng")

    def __init__(self, seed_root: int, stream_id: int):
        self.seed_root = seed_root
        self.stream_id = stream_id
        self._rng = random.Random(_derive_seed(seed_root, stream_id))

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if lo > hi:
            raise InternalError(f"uniform_int bounds reversed: [{lo}, {hi}]")
        return self._rng.randint(lo, hi)


def uniform_int(stream: RandomStream, lo: int, hi: int) -> int:
    return stream.uniform_int(lo, hi)
