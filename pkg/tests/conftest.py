import pytest

from dcfsim.kernel import Scheduler
from dcfsim.mac import AccessCoordinator, ApMac, MacParams, StationMac
from dcfsim.medium import Medium
from dcfsim.phy import FrameSizes, PhyParams, PhyTimings
from dcfsim.stats import FlowKey, FlowMonitor


class ScriptedStream:
    """Stand-in random stream yielding a fixed sequence of backoff draws."""

    def __init__(self, draws):
        self.draws = list(draws)

    def uniform_int(self, lo, hi):
        if self.draws:
            return self.draws.pop(0)
        return lo


class ListSource:
    """Minimal traffic source: a plain list the MAC pulls from."""

    def __init__(self, mac, monitor=None, flow=None):
        self.queue = []
        self.drops = 0
        self.monitor = monitor
        self.flow = flow
        mac.source = self
        self.mac = mac

    def push(self, frame):
        self.queue.append(frame)
        self.mac.notify_arrival()

    def dequeue(self):
        return self.queue.pop(0) if self.queue else None

    def report_drop(self, frame):
        self.drops += 1
        if self.monitor is not None:
            self.monitor.record_lost(frame.flow)

    def queue_len(self):
        return len(self.queue)


class Harness:
    """One AP plus manually driven stations on a fresh kernel."""

    def __init__(self, n_stations=1, params=None, draws=None):
        self.scheduler = Scheduler()
        self.timings = PhyTimings(PhyParams(), FrameSizes())
        self.medium = Medium(self.scheduler)
        self.coordinator = AccessCoordinator(self.scheduler, self.medium, self.timings)
        self.monitor = FlowMonitor()
        self.ap = ApMac(self.scheduler, self.medium, self.timings, self.monitor)
        params = params or MacParams()
        self.stations = []
        self.sources = []
        self.flows = []
        for i in range(1, n_stations + 1):
            stream = ScriptedStream(draws.get(i, []) if draws else [])
            mac = StationMac(i, self.scheduler, self.medium, self.coordinator,
                             self.timings, params, stream)
            flow = FlowKey(src_addr=i, dst_addr=0, src_port=49153, dst_port=9 + i - 1)
            self.monitor.register(flow)
            self.stations.append(mac)
            self.sources.append(ListSource(mac, self.monitor, flow))
            self.flows.append(flow)

    def frame_for(self, i, payload=512, gen_time=None):
        from dcfsim.mac import Frame

        gen = self.scheduler.now if gen_time is None else gen_time
        sizes = self.timings.sizes
        return Frame(
            "DATA", i, 0, payload, sizes.data_mpdu_bytes(payload),
            self.timings.data_airtime(payload),
            self.timings.phy.sifs + self.timings.ack_airtime,
            1, self.flows[i - 1], gen,
        )

    def run_to(self, t_ns):
        return self.scheduler.run_until(t_ns)


@pytest.fixture
def harness():
    return Harness


@pytest.fixture
def timings():
    return PhyTimings(PhyParams(), FrameSizes())
