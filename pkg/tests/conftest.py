from __future__ import annotations

import functools
import math

import mpmath
import numpy as np
import pytest

from rc4pkrs.engine import warmup


@functools.lru_cache(maxsize=None)
def e_expansion_bits(n: int = 1_000_000) -> str:
    """First ``n`` bits of the binary expansion of e, starting with the leading 1."""
    with mpmath.workprec(n + 100):
        v = int(mpmath.floor(mpmath.e * mpmath.mpf(2) ** (n - 2)))
    s = bin(v)[2:]
    assert len(s) == n
    return s


def bits_of(data: bytes) -> str:
    return "".join(map(str, np.unpackbits(np.frombuffer(data, dtype=np.uint8))))


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    warmup()


@pytest.fixture(scope="session")
def e_bits() -> str:
    return e_expansion_bits()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240531)


def close(a: float, b: float, tol: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
