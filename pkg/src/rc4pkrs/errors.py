"""Exception hierarchy shared by the engines, the statistics suite and the channel."""


class RC4Error(Exception):
    """Base class for every error raised by this package."""


class ConfigError(RC4Error, ValueError):
    """Invalid key, design id or parameter."""


class PhaseError(RC4Error, RuntimeError):
    """An operation was attempted in the wrong cipher phase."""


class SwapCaseError(RC4Error, AssertionError):
    """The index predicates of a paired swap matched the impossible case."""


class ProtocolError(RC4Error):
    """Malformed or incompatible wire data."""


class HandshakeError(ProtocolError):
    """Peers disagree on key or design."""


class SessionError(RC4Error):
    """Connection lost or short read inside an established session."""

    def __init__(self, message: str, offset: int | None = None) -> None:
        if offset is not None:
            message = f"{message} (keystream offset {offset})"
        super().__init__(message)
        self.offset = offset
