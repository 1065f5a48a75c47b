"""Two-swaps-per-step RC4 (loop unrolled by two).

One step advances the state from ``(i_{n-1}, j_{n-1}, S_{n-1})`` to
``(i_{n+1}, j_{n+1}, S_{n+1})``.  The second ``j`` is computed from the box
*before* the first swap, so the step has to detect the index collisions in
which the first swap changes what the second one reads or writes.  The
collisions are classified by three equality predicates into seven feasible
cases, each realised as one fixed data movement instead of two swaps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from .core_rc4 import N, KeyMaterial, Phase, SBoxState, enter_phase
from .errors import ConfigError, PhaseError, SwapCaseError


class SwapCase(enum.IntEnum):
    """Index-collision class of a paired swap.

    Predicates: ``a = (i_{n+1} == j_n)``, ``b = (i_n == j_{n+1})``,
    ``c = (j_{n+1} == j_n)``.
    """

    DISJOINT = 1         # F F F
    SHARED_J = 2         # F F T
    SECOND_J_HITS_I = 3  # F T F
    SELF_THEN_NEXT = 4   # F T T
    CHAIN = 5            # T F F
    SECOND_IS_SELF = 6   # T F T
    UNDO = 7             # T T F
    IMPOSSIBLE = 8       # T T T

    @classmethod
    def classify(cls, i_n: int, j_n: int, i_next: int, j_next: int) -> "SwapCase":
        return cls(_classify(i_n, j_n, i_next, j_next))


@dataclass(frozen=True)
class PairStepInput:
    i_prev: int
    j_prev: int
    S: np.ndarray
    K: np.ndarray | None = None


@dataclass(frozen=True)
class PairStepOutput:
    i_next: int
    j_next: int
    S: np.ndarray
    z_pair: tuple[int, int] | None = None


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def _classify(i_n, j_n, i_x, j_x):
    a = i_x == j_n
    b = i_n == j_x
    c = j_x == j_n
    return 1 + (4 if a else 0) + (2 if b else 0) + (1 if c else 0)


@njit(cache=True)
def _pair_indices(S, i_prev, j_prev, k_n, k_x):
    mask = S.shape[0] - 1
    i_n = (i_prev + 1) & mask
    i_x = (i_prev + 2) & mask
    j_n = (j_prev + np.int64(S[i_n]) + k_n) & mask
    if i_x != j_n:
        j_x = (j_n + np.int64(S[i_x]) + k_x) & mask
    else:
        # the first swap moved S[i_n] into slot i_{n+1}
        j_x = (j_n + np.int64(S[i_n]) + k_x) & mask
    return i_n, j_n, i_x, j_x


@njit(cache=True)
def _swap_pair(S, i_n, j_n, i_x, j_x):
    case = _classify(i_n, j_n, i_x, j_x)
    if case == 1:
        t = S[i_n]
        S[i_n] = S[j_n]
        S[j_n] = t
        t = S[i_x]
        S[i_x] = S[j_x]
        S[j_x] = t
    elif case == 2:
        o_in = S[i_n]
        o_jn = S[j_n]
        o_ix = S[i_x]
        S[i_n] = o_jn
        S[i_x] = o_in
        S[j_n] = o_ix
    elif case == 3:
        o_in = S[i_n]
        o_jn = S[j_n]
        o_ix = S[i_x]
        S[i_n] = o_ix
        S[j_n] = o_in
        S[i_x] = o_jn
    elif case == 4:
        t = S[i_n]
        S[i_n] = S[i_x]
        S[i_x] = t
    elif case == 5:
        o_in = S[i_n]
        o_jn = S[j_n]
        o_jx = S[j_x]
        S[i_n] = o_jn
        S[j_n] = o_jx
        S[j_x] = o_in
    elif case == 6:
        t = S[i_n]
        S[i_n] = S[j_n]
        S[j_n] = t
    # case 7 leaves S untouched; case 8 is reported to the caller
    return case


@njit(cache=True)
def _z_first(S_before, i_n, j_n):
    mask = S_before.shape[0] - 1
    a = S_before[i_n]
    b = S_before[j_n]
    t = (np.int64(a) + np.int64(b)) & mask
    if t != i_n and t != j_n:
        return S_before[t]
    if t == i_n and t != j_n:
        return b
    if t == j_n and t != i_n:
        return a
    return S_before[t]


@njit(cache=True)
def _z_second(S_after, i_x, j_x):
    mask = S_after.shape[0] - 1
    return S_after[(np.int64(S_after[i_x]) + np.int64(S_after[j_x])) & mask]


@njit(cache=True)
def _ksa_pairs(S, K):
    """All key-driven swaps in pairs, starting from i_prev = -1."""
    mask = S.shape[0] - 1
    i = mask
    j = 0
    for _ in range(S.shape[0] // 2):
        i_n, j_n, i_x, j_x = _pair_indices(S, i, j, np.int64(K[(i + 1) & mask]),
                                           np.int64(K[(i + 2) & mask]))
        if _swap_pair(S, i_n, j_n, i_x, j_x) == 8:
            return i, j, False
        i = i_x
        j = j_x
    return i, j, True


@njit(cache=True)
def _shuffle_pairs(S, i, j, rounds):
    for _ in range(rounds):
        i_n, j_n, i_x, j_x = _pair_indices(S, i, j, 0, 0)
        if _swap_pair(S, i_n, j_n, i_x, j_x) == 8:
            return i, j, False
        i = i_x
        j = j_x
    return i, j, True


@njit(cache=True)
def _prga_pairs(S, i, j, out):
    mask = S.shape[0] - 1
    for k in range(0, out.shape[0], 2):
        i_n, j_n, i_x, j_x = _pair_indices(S, i, j, 0, 0)
        a = S[i_n]
        b = S[j_n]
        t = (np.int64(a) + np.int64(b)) & mask
        if t != i_n and t != j_n:
            z = S[t]
        elif t == i_n and t != j_n:
            z = b
        elif t == j_n and t != i_n:
            z = a
        else:
            z = S[t]
        if _swap_pair(S, i_n, j_n, i_x, j_x) == 8:
            return i, j, False
        out[k] = z
        out[k + 1] = _z_second(S, i_x, j_x)
        i = i_x
        j = j_x
    return i, j, True


def _check(ok: bool) -> None:
    if not ok:
        raise SwapCaseError("paired swap hit the impossible collision case")


# ---------------------------------------------------------------------------
# single-step API
# ---------------------------------------------------------------------------

def _key_terms(inp: PairStepInput) -> tuple[int, int]:
    if inp.K is None:
        return 0, 0
    mask = len(inp.S) - 1
    return int(inp.K[(inp.i_prev + 1) & mask]), int(inp.K[(inp.i_prev + 2) & mask])


def compute_pair_indices(inp: PairStepInput) -> tuple[int, int, int, int]:
    """Return ``(i_n, j_n, i_{n+1}, j_{n+1})``; key terms are added when ``inp.K`` is set."""
    k_n, k_x = _key_terms(inp)
    S = np.asarray(inp.S, dtype=np.uint8)
    return tuple(int(v) for v in _pair_indices(S, inp.i_prev, inp.j_prev, k_n, k_x))


def swap_pair(S: np.ndarray, i_n: int, j_n: int, i_next: int, j_next: int) -> np.ndarray:
    out = np.array(S, dtype=np.uint8, copy=True)
    if _swap_pair(out, i_n, j_n, i_next, j_next) == 8:
        raise SwapCaseError(
            f"impossible collision case for indices ({i_n}, {j_n}, {i_next}, {j_next})")
    return out


def z_pair(S_before: np.ndarray, S_after: np.ndarray,
           i_n: int, j_n: int, i_next: int, j_next: int) -> tuple[int, int]:
    """Both output bytes of a PRGA pair step.

    The first byte is read from the box before either swap, with the lookup
    redirected when ``t_n`` lands on a slot the first swap touched; the
    second is an ordinary lookup in the box after both swaps.
    """
    before = np.asarray(S_before, dtype=np.uint8)
    after = np.asarray(S_after, dtype=np.uint8)
    return int(_z_first(before, i_n, j_n)), int(_z_second(after, i_next, j_next))


def pair_step(inp: PairStepInput, phase: Phase) -> PairStepOutput:
    if phase is Phase.KSA:
        if inp.K is None:
            raise ConfigError("a KSA pair step needs the key array")
    elif phase in (Phase.PKRS, Phase.PRGA):
        if inp.K is not None:
            raise ConfigError(f"the key array is only used in the KSA phase, not {phase.value}")
    else:
        raise PhaseError(f"no pair step is defined for the {phase.value} phase")
    i_n, j_n, i_x, j_x = compute_pair_indices(inp)
    S_after = swap_pair(inp.S, i_n, j_n, i_x, j_x)
    z = z_pair(inp.S, S_after, i_n, j_n, i_x, j_x) if phase is Phase.PRGA else None
    return PairStepOutput(i_x, j_x, S_after, z)


# ---------------------------------------------------------------------------
# bulk phases
# ---------------------------------------------------------------------------

def ksa_unrolled(key: KeyMaterial | bytes | str) -> SBoxState:
    km = KeyMaterial.coerce(key)
    S = np.arange(N, dtype=np.uint8)
    i, j, ok = _ksa_pairs(S, km.K)
    _check(ok)
    return SBoxState(S, int(i), int(j), Phase.KSA)


def pkrs_unrolled(state: SBoxState, swaps: int = 1024) -> SBoxState:
    """Key-free shuffling, two swaps per step; ``swaps`` must be even."""
    if state.phase is not Phase.PKRS:
        raise PhaseError(f"pkrs requires the pkrs phase, state is in {state.phase.value}")
    if swaps < 0 or swaps % 2:
        raise ConfigError("unrolled shuffling needs a non-negative even swap count")
    S = state.S.copy()
    i, j, ok = _shuffle_pairs(S, state.i, state.j, swaps // 2)
    _check(ok)
    return SBoxState(S, int(i), int(j), Phase.PKRS)


def prga_pairs_run(state: SBoxState, pairs: int) -> tuple[SBoxState, bytes]:
    """Emit ``2 * pairs`` keystream bytes."""
    if state.phase is not Phase.PRGA:
        raise PhaseError(f"prga requires the prga phase, state is in {state.phase.value}")
    if pairs < 0:
        raise ConfigError("pairs must be >= 0")
    S = state.S.copy()
    out = np.empty(2 * pairs, dtype=np.uint8)
    i, j, ok = _prga_pairs(S, state.i, state.j, out)
    _check(ok)
    return SBoxState(S, int(i), int(j), Phase.PRGA), out.tobytes()


def keystream_d3(key: KeyMaterial | bytes | str, n: int) -> bytes:
    """Unrolled KSA, 512 unrolled shuffling steps, then ``ceil(n/2)`` output pairs."""
    if n < 0:
        raise ConfigError("n must be >= 0")
    state = pkrs_unrolled(enter_phase(ksa_unrolled(key), Phase.PKRS), 1024)
    _, out = prga_pairs_run(enter_phase(state, Phase.PRGA), (n + 1) // 2)
    return out[:n]
