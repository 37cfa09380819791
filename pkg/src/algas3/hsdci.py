"""Inter-corner link frames and differential-pair checks.

Frame layout, 8 bytes, big-endian::

    byte 0      sync 0xA5
    bytes 1..6  48-bit word: corner(2) | tick(32) | distance(11) | verdict(3)
    byte 7      checksum = ~(sum of bytes 0..6) & 0xFF

Any single corrupted byte changes the byte sum modulo 256 and is caught.
"""
from __future__ import annotations

from dataclasses import dataclass

SYNC = 0xA5
FRAME_SIZE = 8
PAIRS = ((0, 2), (1, 3))
DEFAULT_MARGIN = 32

_WIDTHS = {"corner": 2, "tick": 32, "distance": 11, "verdict": 3}


class FrameError(ValueError):
    pass


class ChecksumError(FrameError):
    pass


@dataclass(frozen=True, slots=True)
class HsdciFrame:
    corner: int
    tick: int
    distance: int
    verdict: int

    def __post_init__(self):
        for name, bits in _WIDTHS.items():
            v = getattr(self, name)
            if not 0 <= v < 1 << bits:
                raise FrameError(f"{name}={v} does not fit {bits} bits")


def checksum(payload: bytes) -> int:
    return ~sum(payload) & 0xFF


def encode_frame(frame: HsdciFrame) -> bytes:
    word = (frame.corner << 46) | (frame.tick << 14) | (frame.distance << 3) | frame.verdict
    body = bytes([SYNC]) + word.to_bytes(6, "big")
    return body + bytes([checksum(body)])


def decode_frame(data: bytes) -> HsdciFrame:
    if len(data) != FRAME_SIZE:
        raise FrameError(f"frame must be {FRAME_SIZE} bytes, got {len(data)}")
    if checksum(data[:7]) != data[7]:
        raise ChecksumError("HSDCI checksum mismatch")
    if data[0] != SYNC:
        raise FrameError("bad sync byte")
    word = int.from_bytes(data[1:7], "big")
    return HsdciFrame(word >> 46, (word >> 14) & 0xFFFFFFFF,
                      (word >> 3) & 0x7FF, word & 0x7)


@dataclass(frozen=True, slots=True)
class PairStatus:
    pair: tuple[int, int]
    delta: int | None  # None when a frame failed to decode
    within_margin: bool
    margin: int
    comm_fault: bool = False

    @property
    def alarm(self) -> bool:
        return not self.within_margin

    @property
    def label(self) -> str:
        return f"{self.pair[0]}-{self.pair[1]}"


def diff_pair_check(a: int, b: int, margin: int = DEFAULT_MARGIN,
                    pair: tuple[int, int] = (0, 2)) -> PairStatus:
    """Inclusive margin check between two opposite corners' distances."""
    delta = abs(a - b)
    return PairStatus(pair, delta, delta <= margin, margin)


def comm_fault(pair: tuple[int, int], margin: int) -> PairStatus:
    return PairStatus(pair, None, False, margin, comm_fault=True)
