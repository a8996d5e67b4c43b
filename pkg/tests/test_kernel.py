import pytest
from scipy import stats as sps

from dcfsim.errors import InternalError
from dcfsim.kernel import RandomStream, Scheduler, uniform_int, us


def test_events_fire_in_time_order():
    sched = Scheduler()
    fired = []
    sched.schedule(us(30), lambda: fired.append("late"))
    sched.schedule(us(10), lambda: fired.append("early"))
    sched.schedule(us(20), lambda: fired.append("mid"))
    assert sched.run_until(us(100)) == 3
    assert fired == ["early", "mid", "late"]
    assert sched.now == us(100)


def test_same_time_fifo_tie_break():
    sched = Scheduler()
    fired = []
    sched.schedule(us(5), lambda: fired.append("a"))
    sched.schedule(us(5), lambda: fired.append("b"))
    sched.run_until(us(5))
    assert fired == ["a", "b"]


def test_zero_delay_fires_after_existing_same_time_events():
    sched = Scheduler()
    fired = []
    sched.schedule(0, lambda: fired.append("first"))
    sched.schedule(0, lambda: fired.append("second"))
    sched.run_until(0)
    assert fired == ["first", "second"]


def test_schedule_at_offset():
    sched = Scheduler()
    seen = []
    sched.schedule(34_000, lambda: seen.append(sched.now))
    sched.run_until(us(100))
    assert seen == [34_000]


def test_cancel_before_fire():
    sched = Scheduler()
    fired = []
    ev = sched.schedule(us(10), lambda: fired.append(1))
    assert sched.cancel(ev) is True
    sched.run_until(us(20))
    assert fired == []


def test_cancel_after_fire_and_double_cancel():
    sched = Scheduler()
    ev = sched.schedule(us(10), lambda: None)
    sched.run_until(us(20))
    assert sched.cancel(ev) is False
    ev2 = sched.schedule(us(30), lambda: None)
    assert sched.cancel(ev2) is True
    assert sched.cancel(ev2) is False


def test_run_until_clamps_and_counts():
    sched = Scheduler()
    for t in (us(1), us(2), us(3)):
        sched.schedule(t, lambda: None)
    sched.schedule(us(50), lambda: None)
    assert sched.run_until(us(10)) == 3
    assert sched.now == us(10)
    # the late event is still queued
    assert sched.run_until(us(60)) == 1


def test_empty_queue_run():
    sched = Scheduler()
    assert sched.run_until(us(7)) == 0
    assert sched.now == us(7)


def test_negative_delay_rejected():
    sched = Scheduler()
    with pytest.raises(InternalError):
        sched.schedule(-1, lambda: None)


def test_events_scheduled_during_run_execute():
    sched = Scheduler()
    fired = []

    def outer():
        sched.schedule(us(5), lambda: fired.append("inner"))

    sched.schedule(us(1), outer)
    sched.run_until(us(10))
    assert fired == ["inner"]


def test_stream_determinism_across_instances():
    a = RandomStream(42, 3)
    b = RandomStream(42, 3)
    assert [a.uniform_int(0, 1023) for _ in range(100)] == \
           [b.uniform_int(0, 1023) for _ in range(100)]


def test_streams_differ_by_id_and_root():
    base = [RandomStream(42, 1).uniform_int(0, 10**9) for _ in range(20)]
    other_id = [RandomStream(42, 2).uniform_int(0, 10**9) for _ in range(20)]
    other_root = [RandomStream(43, 1).uniform_int(0, 10**9) for _ in range(20)]
    assert base != other_id
    assert base != other_root


def test_uniform_int_degenerate_range():
    s = RandomStream(1, 1)
    assert all(uniform_int(s, 0, 0) == 0 for _ in range(10))


def test_uniform_int_bounds_validated():
    s = RandomStream(1, 1)
    with pytest.raises(InternalError):
        s.uniform_int(5, 4)


def test_uniform_int_distribution():
    """10^5 draws over [0,15]: per-value counts within 5 sigma of 100000/16,
    and the whole histogram passes a chi-square test at significance 0.001."""
    s = RandomStream(7, 0)
    n, k = 100_000, 16
    counts = [0] * k
    for _ in range(n):
        counts[s.uniform_int(0, 15)] += 1
    expected = n / k
    sigma = (n * (1 / k) * (1 - 1 / k)) ** 0.5
    for c in counts:
        assert abs(c - expected) < 5 * sigma
    chi2, _ = sps.chisquare(counts)
    assert chi2 < sps.chi2.ppf(0.999, df=k - 1)
