"""Point-to-point encrypted TCP channel.

Each endpoint runs a keystream producer thread that fills a bounded FIFO and
a consumer (the caller) that takes exactly as many bytes as each frame needs.
The session keystream is shared by both directions in wire order, so the
protocol is half-duplex: peers must not send concurrently.

Wire format::

    hello  = "RC4X" | version u8 | design u8 | digest[8]
    frame  = length u32 big-endian | payload XOR keystream
"""

from __future__ import annotations

import hashlib
import socket
import struct
import threading
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .core_rc4 import KeyMaterial
from .designs import DesignConfig, get_design
from .engine import KeystreamEngine
from .errors import ConfigError, HandshakeError, ProtocolError, SessionError

MAGIC = b"RC4X"
VERSION = 1
HELLO = struct.Struct("!4sBB8s")
LENGTH = struct.Struct("!I")
MAX_FRAME = 1 << 24
DEFAULT_DISCARD = 64
DEFAULT_FIFO = 4096


@dataclass(frozen=True)
class ChannelConfig:
    role: str
    key: KeyMaterial
    design: DesignConfig
    host: str = "127.0.0.1"
    port: int = 0
    fifo_capacity: int = DEFAULT_FIFO
    discard: int = DEFAULT_DISCARD
    timeout: float | None = 30.0

    def __post_init__(self) -> None:
        if self.role not in ("listener", "initiator"):
            raise ConfigError("role must be 'listener' or 'initiator'")
        if self.fifo_capacity < 1:
            raise ConfigError("FIFO capacity must be positive")
        if self.discard < 1:
            raise ConfigError("the handshake needs at least one discarded keystream byte")
        object.__setattr__(self, "key", KeyMaterial.coerce(self.key))
        object.__setattr__(self, "design", get_design(self.design))


class KeystreamFifo:
    """Bounded blocking byte FIFO between one producer and one consumer."""

    def __init__(self, capacity: int = DEFAULT_FIFO) -> None:
        if capacity < 1:
            raise ConfigError("capacity must be positive")
        self.capacity = capacity
        self._buf = bytearray()
        self._cond = threading.Condition()
        self._closed = False
        self.high_water = 0

    def put(self, data: bytes) -> bool:
        """Append ``data``, blocking while full. Returns False once closed."""
        view = memoryview(data)
        while view:
            with self._cond:
                self._cond.wait_for(lambda: self._closed or len(self._buf) < self.capacity)
                if self._closed:
                    return False
                room = self.capacity - len(self._buf)
                self._buf += view[:room]
                view = view[room:]
                self.high_water = max(self.high_water, len(self._buf))
                self._cond.notify_all()
        return True

    def take(self, n: int) -> bytes:
        """Remove exactly ``n`` bytes, blocking until they have been produced."""
        out = bytearray()
        while len(out) < n:
            with self._cond:
                self._cond.wait_for(lambda: self._closed or self._buf)
                if not self._buf and self._closed:
                    raise SessionError("keystream FIFO closed")
                grab = min(n - len(out), len(self._buf))
                out += self._buf[:grab]
                del self._buf[:grab]
                self._cond.notify_all()
        return bytes(out)

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()


class KeystreamProducer(threading.Thread):
    def __init__(self, engine: KeystreamEngine, fifo: KeystreamFifo, chunk: int | None = None) -> None:
        super().__init__(name="keystream-producer", daemon=True)
        self.engine = engine
        self.fifo = fifo
        self.chunk = chunk or max(1, min(fifo.capacity, 4096))

    def run(self) -> None:
        while self.fifo.put(self.engine.read(self.chunk)):
            pass


def xor_bytes(data: bytes, keystream: bytes) -> bytes:
    if len(data) != len(keystream):
        raise ValueError("length mismatch")
    a = np.frombuffer(data, dtype=np.uint8)
    b = np.frombuffer(keystream, dtype=np.uint8)
    return np.bitwise_xor(a, b).tobytes()


def keystream_digest(prefix: bytes) -> bytes:
    return hashlib.blake2b(prefix, digest_size=8).digest()


def recv_exact(sock: socket.socket, n: int) -> bytes:
    """Read exactly ``n`` bytes; a shorter result means the peer closed."""
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(min(n - len(buf), 1 << 20))
        if not chunk:
            break
        buf += chunk
    return bytes(buf)


class Session:
    def __init__(self, sock: socket.socket, config: ChannelConfig) -> None:
        self.sock = sock
        self.config = config
        self.fifo = KeystreamFifo(config.fifo_capacity)
        self.producer = KeystreamProducer(KeystreamEngine(config.design, config.key), self.fifo)
        self.producer.start()
        self.consumed = 0
        self.frames_sent = 0
        self.frames_received = 0

    # keystream accounting -------------------------------------------------
    def _keystream(self, n: int) -> bytes:
        ks = self.fifo.take(n)
        self.consumed += n
        return ks

    def _handshake(self) -> None:
        digest = keystream_digest(self._keystream(self.config.discard))
        self.sock.sendall(HELLO.pack(MAGIC, VERSION, self.config.design.number, digest))
        raw = recv_exact(self.sock, HELLO.size)
        if len(raw) != HELLO.size:
            raise ProtocolError(f"peer closed during handshake after {len(raw)} bytes")
        magic, version, design, peer_digest = HELLO.unpack(raw)
        if magic != MAGIC:
            raise ProtocolError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ProtocolError(f"unsupported protocol version {version}")
        if design != self.config.design.number:
            raise HandshakeError(f"design mismatch: local D{self.config.design.number}, peer D{design}")
        if peer_digest != digest:
            raise HandshakeError("keystream digest mismatch: key or design differs")

    # frames ---------------------------------------------------------------
    def send(self, plaintext: bytes) -> None:
        if len(plaintext) > MAX_FRAME:
            raise ProtocolError(f"frame of {len(plaintext)} bytes exceeds {MAX_FRAME}")
        offset = self.consumed
        body = xor_bytes(bytes(plaintext), self._keystream(len(plaintext)))
        try:
            self.sock.sendall(LENGTH.pack(len(body)) + body)
        except OSError as exc:
            raise SessionError(f"send failed: {exc}", offset) from exc
        self.frames_sent += 1

    def recv(self) -> bytes | None:
        """Next plaintext frame, or None if the peer closed between frames."""
        offset = self.consumed
        try:
            head = recv_exact(self.sock, LENGTH.size)
        except OSError as exc:
            raise SessionError(f"receive failed: {exc}", offset) from exc
        if not head:
            return None
        if len(head) < LENGTH.size:
            raise SessionError("connection lost inside a frame header", offset)
        (length,) = LENGTH.unpack(head)
        if length > MAX_FRAME:
            raise ProtocolError(f"peer announced a {length}-byte frame (limit {MAX_FRAME})")
        try:
            body = recv_exact(self.sock, length)
        except OSError as exc:
            raise SessionError(f"receive failed: {exc}", offset) from exc
        if len(body) < length:
            raise SessionError(f"connection lost after {len(body)} of {length} payload bytes", offset)
        self.frames_received += 1
        return xor_bytes(body, self._keystream(length))

    def __iter__(self) -> Iterator[bytes]:
        while (frame := self.recv()) is not None:
            yield frame

    def close(self) -> None:
        self.fifo.close()
        try:
            self.sock.close()
        finally:
            self.producer.join(timeout=5)

    def __enter__(self) -> "Session":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def handshake(sock: socket.socket, config: ChannelConfig) -> Session:
    """Start the keystream and verify the peer's key and design."""
    session = Session(sock, config)
    try:
        session._handshake()
    except BaseException:
        session.close()
        raise
    return session


def listen(config: ChannelConfig) -> socket.socket:
    server = socket.create_server((config.host, config.port))
    server.settimeout(config.timeout)
    return server


def accept(server: socket.socket, config: ChannelConfig) -> Session:
    conn, _ = server.accept()
    conn.settimeout(config.timeout)
    return handshake(conn, config)


def serve_once(config: ChannelConfig, on_listening: Callable[[int], None] | None = None) -> Session:
    """Bind, report the port, accept one peer and complete the handshake."""
    with listen(config) as server:
        if on_listening is not None:
            on_listening(server.getsockname()[1])
        return accept(server, config)


def connect(config: ChannelConfig) -> Session:
    sock = socket.create_connection((config.host, config.port), timeout=config.timeout)
    return handshake(sock, config)
