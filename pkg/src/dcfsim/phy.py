"""802.11a OFDM airtimes, interframe spacings, and frame overhead model.

Everything here is a pure function of immutable parameters; both the MAC
simulation and the analytical oracle consume these numbers so that the two
sides of every comparison share the same timing assumptions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .kernel import SimTime, US

# bits carried per 4 us OFDM symbol for each 802.11a rate
_BITS_PER_SYMBOL = {
    6_000_000: 24,
    9_000_000: 36,
    12_000_000: 48,
    18_000_000: 72,
    24_000_000: 96,
    36_000_000: 144,
    48_000_000: 192,
    54_000_000: 216,
}


@dataclass(frozen=True)
class PhyParams:
    """802.11a timing constants plus the configured data/control rates."""

    slot_time: SimTime = 9 * US
    sifs: SimTime = 16 * US
    preamble_plus_signal: SimTime = 20 * US
    symbol_time: SimTime = 4 * US
    service_bits: int = 16
    tail_bits: int = 6
    data_rate: int = 12_000_000
    control_rate: int = 12_000_000

    def __post_init__(self) -> None:
        for rate in (self.data_rate, self.control_rate):
            if rate not in _BITS_PER_SYMBOL:
                raise ConfigError(f"unsupported OFDM rate: {rate} b/s")

    @property
    def difs(self) -> SimTime:
        return self.sifs + 2 * self.slot_time

    def airtime(self, mpdu_bytes: int, rate: int | None = None) -> SimTime:
        """Duration of one PPDU: preamble + whole OFDM symbols."""
        if mpdu_bytes < 0:
            raise ConfigError(f"negative MPDU size: {mpdu_bytes}")
        rate = self.data_rate if rate is None else rate
        bits_per_symbol = _BITS_PER_SYMBOL.get(rate)
        if bits_per_symbol is None:
            raise ConfigError(f"unsupported OFDM rate: {rate} b/s")
        bits = self.service_bits + self.tail_bits + 8 * mpdu_bytes
        symbols = -(-bits // bits_per_symbol)  # ceil
        return self.preamble_plus_signal + symbols * self.symbol_time


@dataclass(frozen=True)
class FrameSizes:
    """Byte overheads of the abstract frame/stack model.

    The data MPDU is payload + IP/UDP + LLC/SNAP + MAC header/FCS; control
    frames are fixed-size.
    """

    ack_bytes: int = 14
    rts_bytes: int = 20
    cts_bytes: int = 14
    mac_header_plus_fcs_bytes: int = 28
    llc_snap_bytes: int = 8
    ip_udp_header_bytes: int = 28

    def data_mpdu_bytes(self, payload_bytes: int) -> int:
        return (
            payload_bytes
            + self.ip_udp_header_bytes
            + self.llc_snap_bytes
            + self.mac_header_plus_fcs_bytes
        )

    def ip_bytes(self, payload_bytes: int) -> int:
        """Bytes as seen by the IP-level flow probe."""
        return payload_bytes + self.ip_udp_header_bytes


@dataclass(frozen=True)
class PhyTimings:
    """Derived per-frame durations used throughout the MAC and the oracle."""

    phy: PhyParams
    sizes: FrameSizes

    @property
    def ack_airtime(self) -> SimTime:
        return self.phy.airtime(self.sizes.ack_bytes, self.phy.control_rate)

    @property
    def cts_airtime(self) -> SimTime:
        return self.phy.airtime(self.sizes.cts_bytes, self.phy.control_rate)

    @property
    def rts_airtime(self) -> SimTime:
        return self.phy.airtime(self.sizes.rts_bytes, self.phy.control_rate)

    def data_airtime(self, payload_bytes: int) -> SimTime:
        return self.phy.airtime(self.sizes.data_mpdu_bytes(payload_bytes))

    def eifs(self) -> SimTime:
        """Deferral after an undecodable frame: SIFS + ACK-at-control-rate + DIFS."""
        return self.phy.sifs + self.ack_airtime + self.phy.difs

    def cts_timeout(self) -> SimTime:
        """Measured from the end of the station's own RTS."""
        return self.phy.sifs + self.cts_airtime + self.phy.slot_time

    def ack_timeout(self) -> SimTime:
        """Measured from the end of the station's own DATA frame."""
        return self.phy.sifs + self.ack_airtime + self.phy.slot_time

    def exchange_durations(self, payload_bytes: int, use_rts: bool) -> tuple[SimTime, SimTime]:
        """(Ts, Tc): the channel time consumed by one successful exchange and
        by one collided attempt.  Collisions cost the lost frame plus the
        EIFS deferral the observers apply."""
        if payload_bytes <= 0:
            raise ConfigError(f"payload must be positive: {payload_bytes}")
        data = self.data_airtime(payload_bytes)
        sifs, difs = self.phy.sifs, self.phy.difs
        if use_rts:
            ts = self.rts_airtime + self.cts_airtime + data + self.ack_airtime + 3 * sifs + difs
            tc = self.rts_airtime + self.eifs()
        else:
            ts = data + sifs + self.ack_airtime + difs
            tc = data + self.eifs()
        return ts, tc
