"""Bit sequences and their on-disk formats."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

DEFAULT_BITS = 1_342_400
BIT_ORDER = "msb-first"

_ASCII_BITS = frozenset(b"01 \t\r\n")


@dataclass(frozen=True)
class BitSequence:
    """Read-only vector of 0/1 values (uint8).

    Bytes expand most-significant bit first.
    """

    bits: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ConfigError("a bit sequence must be a non-empty 1-D array")
        if arr.max() > 1:
            raise ConfigError("bit values must be 0 or 1")
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    def __len__(self) -> int:
        return int(self.bits.size)

    @classmethod
    def from_bytes(cls, data: bytes, nbits: int | None = None) -> "BitSequence":
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        return cls(_truncate(bits, nbits))

    @classmethod
    def from_text(cls, text: str, nbits: int | None = None) -> "BitSequence":
        raw = "".join(text.split()).encode("ascii", errors="replace")
        arr = np.frombuffer(raw, dtype=np.uint8) - ord("0")
        if arr.size and arr.max() > 1:
            raise ConfigError("text bit sequences may only contain '0', '1' and whitespace")
        return cls(_truncate(arr, nbits))

    @classmethod
    def from_file(cls, path: str | os.PathLike, nbits: int | None = None) -> "BitSequence":
        """Load a raw binary dump or an ASCII 0/1 file (detected from content)."""
        with open(path, "rb") as fh:
            data = fh.read()
        if not data:
            raise ConfigError(f"{os.fspath(path)}: empty file")
        if looks_ascii(data):
            return cls.from_text(data.decode("ascii"), nbits)
        return cls.from_bytes(data, nbits)

    def text(self) -> str:
        return (self.bits + ord("0")).tobytes().decode("ascii")


def looks_ascii(data: bytes) -> bool:
    sample = data[:65536]
    return set(sample) <= _ASCII_BITS and any(c in b"01" for c in sample)


def _truncate(bits: np.ndarray, nbits: int | None) -> np.ndarray:
    if nbits is None:
        return bits
    if nbits <= 0:
        raise ConfigError("bit count must be positive")
    if bits.size < nbits:
        raise ConfigError(f"sequence has {bits.size} bits, {nbits} requested")
    return bits[:nbits]


def as_bits(seq: "BitSequence | str | bytes | np.ndarray | list[int]") -> np.ndarray:
    """Coerce supported inputs to a 0/1 uint8 array.

    ``str`` is read as ASCII digits and ``bytes`` as packed data.
    """
    if isinstance(seq, BitSequence):
        return seq.bits
    if isinstance(seq, str):
        return BitSequence.from_text(seq).bits
    if isinstance(seq, (bytes, bytearray)):
        return BitSequence.from_bytes(bytes(seq)).bits
    return BitSequence(np.asarray(seq)).bits
