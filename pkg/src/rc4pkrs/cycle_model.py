"""Clock accounting for the pipelined designs.

Totals are exact rationals: ``setup + fill + n * rate``, where ``setup``
covers the power-on clock, the KSA clocks and (when present) one more
initialisation clock plus the shuffling clocks.  The event trace models the
dual-edge pipelines as half-clock ticks and is consistent with the totals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .designs import DesignConfig, get_design
from .errors import ConfigError

PIPELINE_FILL = 2


@dataclass(frozen=True)
class ClockBudget:
    init_clocks: int
    ksa_clocks: int
    pkrs_clocks: int
    prga_fill_clocks: int
    per_byte_rate: Fraction

    @property
    def setup(self) -> int:
        return self.init_clocks + self.ksa_clocks + self.pkrs_clocks

    def total(self, n: int | Fraction) -> Fraction:
        if n < 0:
            raise ConfigError("byte count must be >= 0")
        return self.setup + self.prga_fill_clocks + Fraction(n) * self.per_byte_rate


def budget(design: DesignConfig | int | str) -> ClockBudget:
    cfg = get_design(design)
    # one initialisation clock per phase that needs it (KSA, and PKRS if present)
    init = 1 + (1 if cfg.pkrs_swaps else 0)
    return ClockBudget(init, cfg.ksa_clocks, cfg.pkrs_clocks, PIPELINE_FILL, cfg.rate)


def clock_count(design: DesignConfig | int | str, n: int | Fraction) -> Fraction:
    return budget(design).total(n)


def per_byte_cost(design: DesignConfig | int | str, n: int | Fraction) -> Fraction:
    if n <= 0:
        raise ConfigError("per-byte cost needs n >= 1")
    return clock_count(design, n) / n


def throughput_bps(design: DesignConfig | int | str, frequency_hz: float | None = None) -> float:
    """Steady-state output bit rate at the given (or the design's default) clock."""
    cfg = get_design(design)
    f = cfg.frequency_hz if frequency_hz is None else frequency_hz
    return cfg.bytes_per_clock * 8 * f


# ---------------------------------------------------------------------------
# half-clock trace
# ---------------------------------------------------------------------------

RISING = "rising"
FALLING = "falling"


@dataclass(frozen=True)
class TraceEvent:
    cycle: int
    edge: str
    action: str
    z_indices: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"cycle {self.cycle} {self.edge}: {self.action}"


@dataclass(frozen=True)
class HalfClockTrace:
    design: DesignConfig
    rounds: int
    events: tuple[TraceEvent, ...]

    def lines(self) -> list[str]:
        return [str(e) for e in self.events]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    @property
    def bytes_emitted(self) -> int:
        return sum(len(e.z_indices) for e in self.events)

    @property
    def prga_clocks(self) -> int:
        """Cycles up to and including the one that emits the last byte."""
        emitting = [e.cycle for e in self.events if e.z_indices]
        return max(emitting) if emitting else 0


def _z_label(z: int, box: str, k: int) -> str:
    return f"Z_{z}=S{box}[S{box}[i_{k}]+S{box}[j{box}_{k}]]"


def _one_byte_events(boxes: int, rounds: int) -> list[TraceEvent]:
    def js(r: int) -> str:
        if boxes == 1:
            return f"j_{r}=j_{r - 1}+S[i_{r}]"
        return ", ".join(f"j{b}_{r}=j{b}_{r - 1}+S{b}[i_{r}]" for b in range(1, boxes + 1))

    def swaps(r: int) -> str:
        if boxes == 1:
            return f"S[i_{r}]<->S[j_{r}]"
        return ", ".join(f"S{b}[i_{r}]<->S{b}[j{b}_{r}]" for b in range(1, boxes + 1))

    def zs(r: int) -> tuple[str, tuple[int, ...]]:
        idx = tuple((r - 1) * boxes + b for b in range(1, boxes + 1))
        tag = (lambda b: "") if boxes == 1 else str
        return ", ".join(_z_label(z, tag(b), r) for b, z in enumerate(idx, 1)), idx

    init = "i_0=0, j_0=0" if boxes == 1 else "i_0=0, " + ", ".join(
        f"j{b}_0=0" for b in range(1, boxes + 1))
    events = [TraceEvent(1, RISING, init)]
    if rounds == 0:
        return events
    # round r: i_r on the falling edge of cycle r, j_r on the rising edge of
    # cycle r+1, the swap on its falling edge, Z_r on the rising edge of r+2
    last = rounds + 2
    for c in range(1, last + 1):
        if c > 1:
            parts = []
            idx: tuple[int, ...] = ()
            if c - 1 <= rounds:
                parts.append(js(c - 1))
            if 1 <= c - 2 <= rounds:
                text, idx = zs(c - 2)
                parts.append(text)
            events.append(TraceEvent(c, RISING, "; ".join(parts), idx))
        if c == last:
            break
        parts = []
        if c <= rounds:
            parts.append(f"i_{c}={c % 256}")
        if 1 <= c - 1 <= rounds:
            parts.append(swaps(c - 1))
        events.append(TraceEvent(c, FALLING, "; ".join(parts) if parts else "idle"))
    return events


def _two_byte_events(boxes: int, rounds: int) -> list[TraceEvent]:
    def box_tag(b: int) -> str:
        return "" if boxes == 1 else str(b)

    def js(r: int) -> str:
        lo, hi = 2 * r - 1, 2 * r
        return ", ".join(
            f"j{box_tag(b)}_{lo}, j{box_tag(b)}_{hi} from j{box_tag(b)}_{lo - 1}"
            for b in range(1, boxes + 1))

    def idx_for(r: int, half: int) -> tuple[int, ...]:
        # byte 2r-1 (half=0) or 2r (half=1) of every box, interleaved by box
        return tuple((2 * (r - 1) + half) * boxes + b for b in range(1, boxes + 1))

    def zs(r: int, half: int) -> tuple[str, tuple[int, ...]]:
        idx = idx_for(r, half)
        k = 2 * r - 1 + half
        return ", ".join(_z_label(z, box_tag(b), k) for b, z in enumerate(idx, 1)), idx

    init = "i_0=0, " + ", ".join(f"j{box_tag(b)}_0=0" for b in range(1, boxes + 1))
    events = [TraceEvent(1, RISING, init)]
    if rounds == 0:
        return events
    # round r: i pair on the falling edge of cycle r, j pair on the rising
    # edge of r+1, both swaps and the first byte on its falling edge, the
    # second byte on the rising edge of r+2
    last = rounds + 2
    for c in range(1, last + 1):
        if c > 1:
            parts = []
            idx: tuple[int, ...] = ()
            if c - 1 <= rounds:
                parts.append(js(c - 1))
            if 1 <= c - 2 <= rounds:
                text, idx = zs(c - 2, 1)
                parts.append(text)
            events.append(TraceEvent(c, RISING, "; ".join(parts), idx))
        if c == last:
            break
        parts = []
        idx = ()
        if c <= rounds:
            parts.append(f"i_{2 * c - 1}={(2 * c - 1) % 256}, i_{2 * c}={(2 * c) % 256}")
        if 1 <= c - 1 <= rounds:
            parts.append("swap pair")
            text, idx = zs(c - 1, 0)
            parts.append(text)
        events.append(TraceEvent(c, FALLING, "; ".join(parts) if parts else "idle", idx))
    return events


def trace(design: DesignConfig | int | str, n_rounds: int) -> HalfClockTrace:
    """Event schedule of the output pipeline for ``n_rounds`` emission rounds.

    Cycles are numbered from 1 and start at the PRGA initialisation clock.
    One round yields one byte per box (two with unrolling).
    """
    cfg = get_design(design)
    if n_rounds < 0:
        raise ConfigError("n_rounds must be >= 0")
    build = _two_byte_events if cfg.unrolled else _one_byte_events
    return HalfClockTrace(cfg, n_rounds, tuple(build(cfg.boxes, n_rounds)))


def clocks_from_trace(tr: HalfClockTrace) -> Fraction:
    """Total clocks implied by a trace: setup plus the traced PRGA cycles."""
    b = budget(tr.design)
    return b.setup + tr.prga_clocks
