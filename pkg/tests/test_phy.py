import math

import pytest
from hypothesis import given, strategies as st

from dcfsim.errors import ConfigError
from dcfsim.phy import FrameSizes, PhyParams, PhyTimings


def ofdm_reference_us(mpdu_bytes: int, bits_per_symbol: int = 48) -> int:
    """Independent spelling of the OFDM duration rule: 20 us preamble plus
    whole 4 us symbols over service(16) + tail(6) + payload bits."""
    return 20 + 4 * math.ceil((16 + 6 + 8 * mpdu_bytes) / bits_per_symbol)


@pytest.fixture
def phy():
    return PhyParams()


@pytest.fixture
def t(phy):
    return PhyTimings(phy, FrameSizes())


def test_airtime_frozen_values(phy):
    # hand-evaluated: 14 B -> 134 bits -> 3 symbols; 20 B -> 4; 576 B -> 97
    assert phy.airtime(14) == 32_000
    assert phy.airtime(20) == 36_000
    assert phy.airtime(576) == 408_000


def test_airtime_matches_reference_formula(phy):
    for b in (0, 1, 14, 20, 100, 512, 576, 1500, 2304):
        assert phy.airtime(b) == ofdm_reference_us(b) * 1000


@given(st.integers(min_value=0, max_value=4000))
def test_airtime_is_preamble_plus_whole_symbols(b):
    phy = PhyParams()
    at = phy.airtime(b)
    assert (at - phy.preamble_plus_signal) % phy.symbol_time == 0
    assert at >= phy.preamble_plus_signal + phy.symbol_time


@given(st.integers(min_value=0, max_value=4000), st.integers(min_value=0, max_value=64))
def test_airtime_monotone(b, extra):
    phy = PhyParams()
    assert phy.airtime(b + extra) >= phy.airtime(b)


def test_unsupported_rate_rejected(phy):
    with pytest.raises(ConfigError):
        phy.airtime(100, rate=13_000_000)
    with pytest.raises(ConfigError):
        PhyParams(data_rate=5_000_000)


def test_difs_is_sifs_plus_two_slots(phy):
    assert phy.difs == 34_000
    assert phy.difs == phy.sifs + 2 * phy.slot_time


def test_eifs(t):
    # 16 + 32 + 34 us
    assert t.eifs() == 82_000
    assert t.eifs() > t.phy.difs


def test_eifs_tracks_control_rate():
    t6 = PhyTimings(PhyParams(control_rate=6_000_000), FrameSizes())
    # ACK at 6 Mb/s: 134 bits / 24 per symbol -> 6 symbols -> 44 us
    assert t6.ack_airtime == 44_000
    assert t6.eifs() == 16_000 + 44_000 + 34_000


def test_timeouts(t):
    assert t.cts_timeout() == 57_000
    assert t.ack_timeout() == 57_000


def test_mpdu_and_ip_byte_model():
    sizes = FrameSizes()
    assert sizes.data_mpdu_bytes(512) == 576
    assert sizes.ip_bytes(512) == 540


def test_exchange_durations_basic(t):
    ts, tc = t.exchange_durations(512, use_rts=False)
    # 408 + 16 + 32 + 34
    assert ts == 490_000
    assert tc == 408_000 + 82_000


def test_exchange_durations_rts(t):
    ts, tc = t.exchange_durations(512, use_rts=True)
    assert ts == (36 + 32 + 408 + 32 + 3 * 16 + 34) * 1000
    assert tc == 36_000 + 82_000


@given(st.integers(min_value=21, max_value=2304))
def test_rts_collisions_cheaper_than_basic(payload):
    t = PhyTimings(PhyParams(), FrameSizes())
    _, tc_basic = t.exchange_durations(payload, use_rts=False)
    _, tc_rts = t.exchange_durations(payload, use_rts=True)
    assert tc_rts < tc_basic


def test_zero_payload_rejected_but_headers_dominate_small(t):
    with pytest.raises(ConfigError):
        t.exchange_durations(0, use_rts=False)
    ts, _ = t.exchange_durations(1, use_rts=False)
    assert ts > 0
