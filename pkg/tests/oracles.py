"""Plain-Python sequential reference generators used as test oracles."""

from __future__ import annotations


def rc4_ksa(key: bytes, n: int = 256) -> list[int]:
    S = list(range(n))
    j = 0
    for i in range(n):
        j = (j + S[i] + key[i % len(key)]) % n
        S[i], S[j] = S[j], S[i]
    return S


def rc4_prga(S: list[int], count: int, emit: bool = True) -> list[int]:
    """Run ``count`` PRGA steps from i = j = 0 on S (in place)."""
    n = len(S)
    i = j = 0
    out = []
    for _ in range(count):
        i = (i + 1) % n
        j = (j + S[i]) % n
        S[i], S[j] = S[j], S[i]
        if emit:
            out.append(S[(S[i] + S[j]) % n])
    return out


def reference_keystream(key: bytes, count: int, shuffle: int = 0) -> bytes:
    """Classic RC4, optionally with ``shuffle`` silent PRGA steps after the KSA."""
    S = rc4_ksa(key)
    if shuffle:
        rc4_prga(S, shuffle, emit=False)
    return bytes(rc4_prga(S, count))


def reference_multibox(key: bytes, count: int, snapshots: dict[int, int], boxes: int) -> bytes:
    """Sequential model of the multi-box designs.

    ``snapshots`` maps a shuffle swap count to the box index copied at that
    point. After 1024 shuffle swaps every box runs its own PRGA from i = j = 0
    and the outputs are taken round-robin S1, S2, ...
    """
    S = rc4_ksa(key)
    copies: dict[int, list[int]] = {}
    i = j = 0
    for step in range(1, 1025):
        i = (i + 1) % 256
        j = (j + S[i]) % 256
        S[i], S[j] = S[j], S[i]
        if step in snapshots:
            copies[snapshots[step]] = list(S)
    order = [S] + [copies[b] for b in range(2, boxes + 1)]
    state = [[0, 0] for _ in order]
    out = []
    while len(out) < count:
        for box, ij in zip(order, state):
            ij[0] = (ij[0] + 1) % 256
            ij[1] = (ij[1] + box[ij[0]]) % 256
            box[ij[0]], box[ij[1]] = box[ij[1]], box[ij[0]]
            out.append(box[(box[ij[0]] + box[ij[1]]) % 256])
    return bytes(out[:count])
