"""Hash backends: Streebog-256/512, SHA-256, HMAC and MGF1.

``Streebog`` follows the ``hashlib`` object protocol (``update``, ``digest``,
``copy``, ``digest_size``, ``block_size``), so the standard library's
:mod:`hmac` module drives it unchanged.

None of this code is constant-time.
"""

from __future__ import annotations

import hashlib
import hmac as _hmac
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels

__all__ = [
    "BACKEND_IDS",
    "HashBackend",
    "MaskLengthError",
    "Streebog",
    "get_backend",
    "hmac",
    "mgf1",
    "streebog_digest",
]


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(words.astype("<u8").tobytes(), "little")


class Streebog:
    """Incremental GOST R 34.11-2012 hash, 256- or 512-bit output."""

    block_size = 64

    def __init__(self, data: bytes = b"", digest_bits: int = 256) -> None:
        if digest_bits not in (256, 512):
            raise ValueError("digest_bits must be 256 or 512")
        self.digest_size = digest_bits // 8
        self.name = f"streebog{digest_bits}"
        iv = 0x0101010101010101 if digest_bits == 256 else 0
        self._h = np.full(8, iv, dtype=np.uint64)
        self._counter = np.zeros(8, dtype=np.uint64)
        self._sigma = np.zeros(8, dtype=np.uint64)
        self._buf = b""
        if data:
            self.update(data)

    @property
    def N(self) -> int:
        """Bit count of the blocks compressed so far."""
        return _words_to_int(self._counter)

    @property
    def Sigma(self) -> int:
        """Sum modulo 2^512 of the blocks compressed so far."""
        return _words_to_int(self._sigma)

    def update(self, data: bytes) -> None:
        buf = self._buf + bytes(data)
        full = len(buf) // 64
        if full:
            blocks = np.frombuffer(buf, dtype=np.uint8, count=64 * full)
            _kernels.streebog_absorb(self._h, self._counter, self._sigma, blocks, full)
        self._buf = buf[64 * full:]

    def copy(self) -> "Streebog":
        other = object.__new__(Streebog)
        other.digest_size = self.digest_size
        other.name = self.name
        other._h = self._h.copy()
        other._counter = self._counter.copy()
        other._sigma = self._sigma.copy()
        other._buf = self._buf
        return other

    def _finalized(self) -> "Streebog":
        done = self.copy()
        tail = np.frombuffer(done._buf.ljust(64, b"\0"), dtype=np.uint8)
        _kernels.streebog_finish(done._h, done._counter, done._sigma, tail, len(done._buf))
        done._buf = b""
        return done

    def digest(self) -> bytes:
        state = self._finalized()._h.astype("<u8").tobytes()
        # Most significant half for the 256-bit variant.
        return state[64 - self.digest_size:]

    def hexdigest(self) -> str:
        return self.digest().hex()


def streebog_digest(message: bytes, variant: int = 256) -> bytes:
    return Streebog(message, digest_bits=variant).digest()


@dataclass(eq=False)
class HashBackend:
    """A 32-byte hash function plus a running count of evaluations.

    Every call to :meth:`new` is one complete hash computation, so ``calls``
    counts hash-function evaluations (HMAC contributes two, MGF1 one per
    output block).
    """

    id: str
    code: int
    _factory: Callable[[bytes], object] = field(repr=False)
    out_len: int = 32
    block_len: int = 64
    calls: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def count(self, k: int) -> None:
        with self._lock:
            self.calls += k

    def new(self, data: bytes = b""):
        self.count(1)
        return self._factory(data)

    def digest(self, data: bytes) -> bytes:
        return self.new(data).digest()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HashBackend) and other.id == self.id

    def __hash__(self) -> int:
        return hash(self.id)


BACKEND_IDS = ("streebog256", "sha256")


def get_backend(backend_id: str) -> HashBackend:
    """Fresh backend instance (with its own call counter)."""
    if backend_id == "streebog256":
        return HashBackend("streebog256", _kernels.STREEBOG256, Streebog)
    if backend_id == "sha256":
        return HashBackend("sha256", _kernels.SHA256, hashlib.sha256)
    raise ValueError(f"unknown hash backend {backend_id!r}; valid: {', '.join(BACKEND_IDS)}")


def hmac(backend: HashBackend, key: bytes, message: bytes) -> bytes:
    """RFC 2104 HMAC tag over ``backend``."""
    return _hmac.new(key, message, digestmod=backend.new).digest()


class MaskLengthError(ValueError):
    pass


def mgf1(backend: HashBackend, seed: bytes, out_len_bytes: int) -> bytes:
    """MGF1: digest(seed || C) for 4-byte big-endian counters, truncated."""
    if out_len_bytes < 0 or out_len_bytes >= (1 << 32) * backend.out_len:
        raise MaskLengthError(f"mask length {out_len_bytes} out of range")
    blocks = -(-out_len_bytes // backend.out_len)
    out = b"".join(backend.digest(seed + c.to_bytes(4, "big")) for c in range(blocks))
    return out[:out_len_bytes]
