"""Design-agnostic keystream generation."""

from __future__ import annotations

from .core_rc4 import KeyMaterial, Phase, enter_phase, ksa, pkrs
from .designs import DesignConfig, get_design
from .errors import ConfigError
from .multibox import advance_boxes, build_ensemble
from .unrolled2x import ksa_unrolled, pkrs_unrolled


class KeystreamEngine:
    """Streaming generator for any design D1..D7.

    ``read(a) + read(b)`` always equals the first ``a + b`` bytes of the
    design's keystream, whatever the split.
    """

    def __init__(self, design: DesignConfig | int | str, key: KeyMaterial | bytes | str) -> None:
        self.design = get_design(design)
        self.key = KeyMaterial.coerce(key)
        cfg = self.design
        if cfg.boxes > 1:
            self._boxes = build_ensemble(self.key, cfg).boxes
        else:
            state = ksa_unrolled(self.key) if cfg.unrolled else ksa(self.key)
            if cfg.pkrs_swaps:
                shuffle = pkrs_unrolled if cfg.unrolled else pkrs
                state = shuffle(enter_phase(state, Phase.PKRS), cfg.pkrs_swaps)
            self._boxes = [enter_phase(state, Phase.PRGA)]
        self._pending = b""
        self.position = 0

    def read(self, n: int) -> bytes:
        if n < 0:
            raise ConfigError("n must be >= 0")
        short = n - len(self._pending)
        if short > 0:
            rounds = -(-short // self.design.bytes_per_clock)
            self._boxes, fresh = advance_boxes(self._boxes, rounds, self.design.unrolled)
            self._pending += fresh
        out, self._pending = self._pending[:n], self._pending[n:]
        self.position += n
        return out


def generate(design: DesignConfig | int | str, key: KeyMaterial | bytes | str, n: int) -> bytes:
    """First ``n`` keystream bytes of ``design`` under ``key``."""
    return KeystreamEngine(design, key).read(n)


def warmup() -> None:
    """Compile (or load from cache) every numba kernel."""
    for number in range(1, 8):
        generate(number, b"warmup", 64)
