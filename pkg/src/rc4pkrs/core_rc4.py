"""Byte-at-a-time RC4 with an optional post-KSA shuffling phase (PKRS).

The public functions are pure: they take a state and return a fresh one.
Bulk work is delegated to small numba kernels that mutate a private copy.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .designs import DesignConfig, get_design
from .errors import ConfigError, PhaseError

N = 256


class Phase(enum.Enum):
    INIT = "init"
    KSA = "ksa"
    PKRS = "pkrs"
    PRGA = "prga"


# Legal phase entries; KSA is entered only through ksa().
_NEXT = {
    Phase.KSA: {Phase.PKRS, Phase.PRGA},
    Phase.PKRS: {Phase.PRGA},
}


@dataclass(frozen=True)
class KeyMaterial:
    """A 1..256 byte key and its 256-entry repetition ``K``."""

    key: bytes
    K: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        key = bytes(self.key)
        if not 1 <= len(key) <= N:
            raise ConfigError(f"key length must be 1..{N} bytes, got {len(key)}")
        object.__setattr__(self, "key", key)
        rep = np.frombuffer(key * (N // len(key) + 1), dtype=np.uint8)[:N].copy()
        rep.flags.writeable = False
        object.__setattr__(self, "K", rep)

    @classmethod
    def from_text(cls, text: str) -> "KeyMaterial":
        return cls(text.encode("utf-8"))

    @classmethod
    def from_hex(cls, text: str) -> "KeyMaterial":
        try:
            return cls(bytes.fromhex(text))
        except ValueError as exc:
            raise ConfigError(f"invalid hex key: {exc}") from None

    @classmethod
    def coerce(cls, key: "KeyMaterial | bytes | bytearray | str") -> "KeyMaterial":
        if isinstance(key, KeyMaterial):
            return key
        if isinstance(key, str):
            return cls.from_text(key)
        if isinstance(key, (bytes, bytearray, memoryview)):
            return cls(bytes(key))
        raise ConfigError(f"unsupported key type {type(key).__name__}")


@dataclass
class SBoxState:
    S: np.ndarray
    i: int = 0
    j: int = 0
    phase: Phase = Phase.INIT

    @classmethod
    def identity(cls) -> "SBoxState":
        return cls(np.arange(N, dtype=np.uint8))

    def copy(self) -> "SBoxState":
        return SBoxState(self.S.copy(), self.i, self.j, self.phase)

    def is_permutation(self) -> bool:
        return self.S.shape == (N,) and bool(np.array_equal(np.sort(self.S), np.arange(N)))


def enter_phase(state: SBoxState, phase: Phase) -> SBoxState:
    """Move to the next phase, resetting both indices to zero."""
    if phase not in _NEXT.get(state.phase, set()):
        raise PhaseError(f"cannot enter {phase.value} from {state.phase.value}")
    return SBoxState(state.S.copy(), 0, 0, phase)


# ---------------------------------------------------------------------------
# kernels (mask = len(S) - 1 so reduced boxes can reuse them)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _ksa_kernel(S, K):
    mask = S.shape[0] - 1
    j = 0
    for i in range(S.shape[0]):
        j = (j + np.int64(S[i]) + np.int64(K[i])) & mask
        tmp = S[i]
        S[i] = S[j]
        S[j] = tmp
    return j


@njit(cache=True)
def _shuffle_kernel(S, i, j, iters):
    mask = S.shape[0] - 1
    for _ in range(iters):
        i = (i + 1) & mask
        j = (j + np.int64(S[i])) & mask
        tmp = S[i]
        S[i] = S[j]
        S[j] = tmp
    return i, j


@njit(cache=True)
def _prga_kernel(S, i, j, out):
    mask = S.shape[0] - 1
    for k in range(out.shape[0]):
        i = (i + 1) & mask
        si = S[i]
        j = (j + np.int64(si)) & mask
        sj = S[j]
        S[i] = sj
        S[j] = si
        out[k] = S[(np.int64(si) + np.int64(sj)) & mask]
    return i, j


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def ksa(key: KeyMaterial | bytes | str) -> SBoxState:
    km = KeyMaterial.coerce(key)
    S = np.arange(N, dtype=np.uint8)
    j = _ksa_kernel(S, km.K)
    return SBoxState(S, N - 1, int(j), Phase.KSA)


def pkrs(state: SBoxState, iters: int = 1024) -> SBoxState:
    """Run ``iters`` key-free PRGA swap iterations without emitting output."""
    if state.phase is not Phase.PKRS:
        raise PhaseError(f"pkrs requires the pkrs phase, state is in {state.phase.value}")
    if iters < 0:
        raise ConfigError("iters must be >= 0")
    S = state.S.copy()
    i, j = _shuffle_kernel(S, state.i, state.j, iters)
    return SBoxState(S, int(i), int(j), Phase.PKRS)


def prga_step(state: SBoxState) -> tuple[SBoxState, int]:
    if state.phase is not Phase.PRGA:
        raise PhaseError(f"prga_step requires the prga phase, state is in {state.phase.value}")
    S = state.S.copy()
    i = (state.i + 1) % N
    j = (state.j + int(S[i])) % N
    S[i], S[j] = S[j], S[i]
    t = (int(S[i]) + int(S[j])) % N
    return SBoxState(S, i, j, Phase.PRGA), int(S[t])


def prga_run(state: SBoxState, n: int) -> tuple[SBoxState, bytes]:
    """``n`` PRGA steps at once; equivalent to iterating :func:`prga_step`."""
    if state.phase is not Phase.PRGA:
        raise PhaseError(f"prga_run requires the prga phase, state is in {state.phase.value}")
    if n < 0:
        raise ConfigError("n must be >= 0")
    S = state.S.copy()
    out = np.empty(n, dtype=np.uint8)
    i, j = _prga_kernel(S, state.i, state.j, out)
    return SBoxState(S, int(i), int(j), Phase.PRGA), out.tobytes()


def keystream(design: DesignConfig | int | str, key: KeyMaterial | bytes | str, n: int) -> bytes:
    """Keystream of the single-box byte-wide designs D1 and D2."""
    cfg = get_design(design)
    if cfg.number not in (1, 2):
        raise ConfigError(f"core_rc4.keystream handles D1 and D2, not {cfg.name}")
    if n < 0:
        raise ConfigError("n must be >= 0")
    state = ksa(key)
    if cfg.pkrs_swaps:
        state = pkrs(enter_phase(state, Phase.PKRS), cfg.pkrs_swaps)
    _, out = prga_run(enter_phase(state, Phase.PRGA), n)
    return out
