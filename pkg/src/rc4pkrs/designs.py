"""Static description of the seven keystream designs D1..D7."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError

PKRS_SWAPS = 1024
ONE_BYTE_HZ = 200_000_000
TWO_BYTE_HZ = 194_000_000


@dataclass(frozen=True)
class SnapshotSchedule:
    """PKRS swap counts (single-swap units) at which S1 is copied into a secondary box.

    ``points`` holds ``(swap_count, box_index)`` pairs with 1-based box indices.
    """

    points: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        counts = [c for c, _ in self.points]
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise ConfigError("snapshot counts must be strictly increasing")
        if any(c <= 0 or c >= PKRS_SWAPS for c in counts):
            raise ConfigError(f"snapshot counts must lie in 1..{PKRS_SWAPS - 1}")
        boxes = [b for _, b in self.points]
        if len(set(boxes)) != len(boxes) or any(b < 2 for b in boxes):
            raise ConfigError("each secondary box (index >= 2) may be filled once")


@dataclass(frozen=True)
class DesignConfig:
    number: int
    bytes_per_step: int
    boxes: int
    pkrs_swaps: int
    snapshots: SnapshotSchedule
    frequency_hz: int

    @property
    def name(self) -> str:
        return f"D{self.number}"

    @property
    def unrolled(self) -> bool:
        return self.bytes_per_step == 2

    @property
    def ksa_clocks(self) -> int:
        return 256 // self.bytes_per_step

    @property
    def pkrs_clocks(self) -> int:
        return self.pkrs_swaps // self.bytes_per_step

    @property
    def bytes_per_clock(self) -> int:
        return self.bytes_per_step * self.boxes

    @property
    def rate(self) -> Fraction:
        """Clocks per output byte in steady state."""
        return Fraction(1, self.bytes_per_clock)


_NO_SNAP = SnapshotSchedule()
_TWO_BOX = SnapshotSchedule(((512, 2),))
_FOUR_BOX = SnapshotSchedule(((256, 4), (512, 3), (768, 2)))

DESIGNS: dict[int, DesignConfig] = {
    1: DesignConfig(1, 1, 1, 0, _NO_SNAP, ONE_BYTE_HZ),
    2: DesignConfig(2, 1, 1, PKRS_SWAPS, _NO_SNAP, ONE_BYTE_HZ),
    3: DesignConfig(3, 2, 1, PKRS_SWAPS, _NO_SNAP, TWO_BYTE_HZ),
    4: DesignConfig(4, 1, 2, PKRS_SWAPS, _TWO_BOX, ONE_BYTE_HZ),
    5: DesignConfig(5, 2, 2, PKRS_SWAPS, _TWO_BOX, TWO_BYTE_HZ),
    6: DesignConfig(6, 1, 4, PKRS_SWAPS, _FOUR_BOX, ONE_BYTE_HZ),
    7: DesignConfig(7, 2, 4, PKRS_SWAPS, _FOUR_BOX, TWO_BYTE_HZ),
}


def get_design(design: int | str | DesignConfig) -> DesignConfig:
    """Resolve ``3``, ``"d3"``, ``"D3"`` or a config object to a DesignConfig."""
    if isinstance(design, DesignConfig):
        return design
    if isinstance(design, str):
        text = design.strip().upper()
        if text.startswith("D"):
            text = text[1:]
        if not text.isdigit():
            raise ConfigError(f"unknown design {design!r}; expected d1..d7")
        design = int(text)
    if isinstance(design, bool) or not isinstance(design, int) or design not in DESIGNS:
        raise ConfigError(f"unknown design {design!r}; expected d1..d7")
    return DESIGNS[design]
