"""Multi-box designs D4..D7.

During shuffling, the primary box S1 is copied into the secondary boxes at
fixed swap counts. Afterwards every box runs its own PRGA in lockstep, and
the per-box bytes are interleaved round-robin: S1, S2, (S3, S4).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_rc4 import KeyMaterial, Phase, SBoxState, enter_phase, ksa, pkrs, prga_run
from .designs import DesignConfig, get_design
from .errors import ConfigError
from .unrolled2x import ksa_unrolled, pkrs_unrolled, prga_pairs_run


@dataclass
class BoxEnsemble:
    design: DesignConfig
    boxes: list[SBoxState]
    # swaps each box received before its PRGA started, aligned with ``boxes``
    shuffle_counts: tuple[int, ...]


def build_ensemble(key: KeyMaterial | bytes | str, design: DesignConfig | int | str) -> BoxEnsemble:
    cfg = get_design(design)
    if cfg.boxes < 2:
        raise ConfigError(f"{cfg.name} is a single-box design")
    if cfg.unrolled:
        state, shuffle = ksa_unrolled(key), pkrs_unrolled
    else:
        state, shuffle = ksa(key), pkrs
    state = enter_phase(state, Phase.PKRS)

    taken: dict[int, tuple[SBoxState, int]] = {}
    done = 0
    for count, box in cfg.snapshots.points:
        state = shuffle(state, count - done)
        done = count
        taken[box] = (state.copy(), count)
    state = shuffle(state, cfg.pkrs_swaps - done)

    ordered = [(state, cfg.pkrs_swaps)] + [taken[b] for b in range(2, cfg.boxes + 1)]
    return BoxEnsemble(
        cfg,
        [enter_phase(s, Phase.PRGA) for s, _ in ordered],
        tuple(c for _, c in ordered),
    )


def advance_boxes(boxes: list[SBoxState], rounds: int, unrolled: bool) -> tuple[list[SBoxState], bytes]:
    """Run every box for ``rounds`` emission rounds and interleave the output.

    A round is one byte per box (or one pair per box when ``unrolled``). With
    byte ``r`` of box ``k`` landing at ``r * m + k``, the pair designs produce
    ``[S1.Zn, S2.Zn, ..., S1.Zn+1, S2.Zn+1, ...]`` per round, the same order
    as their byte-wide counterparts.
    """
    new_boxes = []
    streams = []
    for box in boxes:
        if unrolled:
            box, out = prga_pairs_run(box, rounds)
        else:
            box, out = prga_run(box, rounds)
        new_boxes.append(box)
        streams.append(np.frombuffer(out, dtype=np.uint8))
    if not streams:
        return new_boxes, b""
    return new_boxes, np.column_stack(streams).reshape(-1).tobytes()


def keystream_multibox(ensemble: BoxEnsemble, n: int) -> bytes:
    if n < 0:
        raise ConfigError("n must be >= 0")
    cfg = ensemble.design
    rounds = -(-n // cfg.bytes_per_clock)
    _, out = advance_boxes(ensemble.boxes, rounds, cfg.unrolled)
    return out[:n]
