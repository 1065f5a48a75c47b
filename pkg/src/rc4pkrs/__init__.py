"""RC4 keystream designs with post-KSA shuffling, 2-byte unrolling and multiple S-boxes."""

from .core_rc4 import KeyMaterial, Phase, SBoxState
from .designs import DESIGNS, DesignConfig, get_design
from .engine import KeystreamEngine, generate
from .errors import (
    ConfigError,
    HandshakeError,
    PhaseError,
    ProtocolError,
    RC4Error,
    SessionError,
    SwapCaseError,
)

__all__ = [
    "DESIGNS",
    "ConfigError",
    "DesignConfig",
    "HandshakeError",
    "KeyMaterial",
    "KeystreamEngine",
    "Phase",
    "PhaseError",
    "ProtocolError",
    "RC4Error",
    "SBoxState",
    "SessionError",
    "SwapCaseError",
    "generate",
    "get_design",
]
