"""Injectable time sources for the recording sink.

Capture sessions read the clock twice at the boundary (wall epoch at begin,
elapsed at end); event timestamps themselves are supplied by the caller. A
virtual clock lets a multi-minute benchmark run in well under a second while
still producing byte-identical snapshots across runs.
"""
from __future__ import annotations

import time


class VirtualClock:
    """Manually advanced clock; starts at a fixed epoch for reproducibility."""

    def __init__(self, epoch_ms: int = 0):
        self.epoch_ms = epoch_ms
        self._elapsed_ms = 0

    def now_epoch_ms(self) -> int:
        return self.epoch_ms + self._elapsed_ms

    def advance_to(self, elapsed_ms: int) -> None:
        if elapsed_ms < self._elapsed_ms:
            raise ValueError("virtual clock cannot move backwards")
        self._elapsed_ms = elapsed_ms

    def advance_by(self, delta_ms: int) -> None:
        self.advance_to(self._elapsed_ms + delta_ms)


class WallClock:
    """System UTC clock at millisecond precision."""

    def now_epoch_ms(self) -> int:
        return int(time.time() * 1000)
