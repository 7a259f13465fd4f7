"""Tweakable hash functions F, H, T_l, PRF, PRF_msg and H_msg.

Every public-seed keyed call is masked: the input is XORed with
``MGF1(pk_seed || ADRS, len)`` before ``digest(pk_seed || ADRS || masked)``
is truncated to n bytes.

Two routes compute the same bytes.  The scalar functions (:func:`thash`,
:func:`prf`, ...) compose the primitives of :mod:`hash_core` in Python; the
``*_many`` functions run whole batches through the compiled kernels and are
what the tree code uses on its hot paths.
"""

from __future__ import annotations

import hmac as _hmac
from dataclasses import dataclass, field
from typing import BinaryIO, Iterator, Union

import numpy as np

from . import _kernels
from .address import Adrs
from .hash_core import HashBackend, mgf1
from .params import ParamSet

__all__ = [
    "HashInputError",
    "Message",
    "TweakContext",
    "chain_many",
    "h_msg",
    "iter_message",
    "mask",
    "prf",
    "prf_many",
    "prf_msg",
    "split_digest",
    "thash",
    "thash_many",
]

Message = Union[bytes, bytearray, memoryview, BinaryIO]
_CHUNK = 1 << 16


class HashInputError(ValueError):
    pass


@dataclass
class TweakContext:
    """Backend plus public seed, shared by all tweakable-hash calls of one key.

    When ``trace`` is a list, every tweakable-hash and PRF evaluation appends
    ``(family, adrs_bytes, input_bytes)`` to it.  Tracing forces the chain
    batches down to single steps, so it is for tests only.

    ``workers > 1`` spreads independent subtrees over threads; outputs are
    byte-identical to the sequential run.
    """

    backend: HashBackend
    pk_seed: bytes
    trace: list | None = field(default=None, repr=False)
    workers: int = 1

    def __post_init__(self) -> None:
        self.pk_seed = bytes(self.pk_seed)
        if len(self.pk_seed) > self.backend.out_len:
            raise HashInputError("n exceeds the backend digest length")
        self._seed_arr = np.frombuffer(self.pk_seed, dtype=np.uint8)

    @property
    def n(self) -> int:
        return len(self.pk_seed)


def iter_message(message: Message) -> Iterator[bytes]:
    """Yield a message in chunks; file objects are rewound first when seekable."""
    if isinstance(message, (bytes, bytearray, memoryview)):
        yield bytes(message)
        return
    if message.seekable():
        message.seek(0)
    while chunk := message.read(_CHUNK):
        yield chunk


def _xor(a: bytes, b: bytes) -> bytes:
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(len(a), "big")


def mask(ctx: TweakContext, adrs: Adrs, msg: bytes) -> bytes:
    if not msg:
        return b""
    return _xor(msg, mgf1(ctx.backend, ctx.pk_seed + adrs.to_bytes(), len(msg)))


def thash(ctx: TweakContext, adrs: Adrs, msg: bytes) -> bytes:
    """F (one block), H (two) or T_l (l blocks) depending on ``len(msg)``."""
    if not msg or len(msg) % ctx.n:
        raise HashInputError(f"thash input of {len(msg)} bytes is not a positive multiple of n={ctx.n}")
    a = adrs.to_bytes()
    if ctx.trace is not None:
        ctx.trace.append(("thash", a, bytes(msg)))
    return ctx.backend.digest(ctx.pk_seed + a + mask(ctx, adrs, msg))[:ctx.n]


def prf(ctx: TweakContext, sk_seed: bytes, adrs: Adrs) -> bytes:
    if len(sk_seed) != ctx.n:
        raise HashInputError("sk_seed must be n bytes")
    a = adrs.to_bytes()
    if ctx.trace is not None:
        ctx.trace.append(("prf", a, bytes(sk_seed)))
    return ctx.backend.digest(sk_seed + a)[:ctx.n]


def prf_msg(ctx: TweakContext, sk_prf: bytes, opt_rand: bytes, message: Message) -> bytes:
    """Randomizer: HMAC(sk_prf, opt_rand || message) truncated to n bytes."""
    if len(sk_prf) != ctx.n or len(opt_rand) != ctx.n:
        raise HashInputError("sk_prf and opt_rand must be n bytes")
    mac = _hmac.new(sk_prf, opt_rand, digestmod=ctx.backend.new)
    for chunk in iter_message(message):
        mac.update(chunk)
    return mac.digest()[:ctx.n]


def h_msg(ctx: TweakContext, randomizer: bytes, pk_root: bytes, message: Message, m: int) -> bytes:
    prefix = bytes(randomizer) + ctx.pk_seed + bytes(pk_root)
    inner = ctx.backend.new(prefix)
    for chunk in iter_message(message):
        inner.update(chunk)
    return mgf1(ctx.backend, prefix + inner.digest(), m)


def split_digest(p: ParamSet, digest: bytes) -> tuple[list[int], int, int]:
    """Cut the message digest into FORS indices, tree index and leaf index.

    FORS indices are read most-significant-bit first; tree and leaf indices
    are big-endian integers reduced to their exact bit widths.
    """
    if len(digest) != p.m:
        raise HashInputError(f"digest must be {p.m} bytes, got {len(digest)}")
    md_len = -(-p.k * p.a // 8)
    tree_len = -(-p.tree_bits // 8)
    md = int.from_bytes(digest[:md_len], "big")
    total = 8 * md_len
    amask = (1 << p.a) - 1
    indices = [(md >> (total - (j + 1) * p.a)) & amask for j in range(p.k)]
    tree = int.from_bytes(digest[md_len:md_len + tree_len], "big") & ((1 << p.tree_bits) - 1)
    leaf = int.from_bytes(digest[md_len + tree_len:], "big") & ((1 << p.leaf_bits) - 1)
    return indices, tree, leaf


# --------------------------------------------------------------------------
# Batched routes
# --------------------------------------------------------------------------

def _record(ctx: TweakContext, family: str, rows: np.ndarray, inputs) -> None:
    for a, x in zip(rows, inputs):
        ctx.trace.append((family, a.tobytes(), bytes(x)))


def thash_many(ctx: TweakContext, adrs_rows: np.ndarray, msgs: np.ndarray) -> np.ndarray:
    """Row-wise :func:`thash`; ``msgs`` is (rows, l*n) uint8."""
    msgs = np.ascontiguousarray(msgs, dtype=np.uint8)
    if msgs.shape[1] == 0 or msgs.shape[1] % ctx.n:
        raise HashInputError("thash input is not a positive multiple of n")
    if ctx.trace is not None:
        _record(ctx, "thash", adrs_rows, msgs)
    out = np.empty((msgs.shape[0], ctx.n), dtype=np.uint8)
    calls = _kernels.thash_many(ctx.backend.code, ctx._seed_arr,
                                np.ascontiguousarray(adrs_rows), msgs, ctx.n, out)
    ctx.backend.count(calls)
    return out


def prf_many(ctx: TweakContext, sk_seed: bytes, adrs_rows: np.ndarray) -> np.ndarray:
    if len(sk_seed) != ctx.n:
        raise HashInputError("sk_seed must be n bytes")
    if ctx.trace is not None:
        _record(ctx, "prf", adrs_rows, [sk_seed] * len(adrs_rows))
    out = np.empty((adrs_rows.shape[0], ctx.n), dtype=np.uint8)
    calls = _kernels.prf_many(ctx.backend.code, np.frombuffer(sk_seed, dtype=np.uint8),
                              np.ascontiguousarray(adrs_rows), ctx.n, out)
    ctx.backend.count(calls)
    return out


def chain_many(ctx: TweakContext, x: np.ndarray, adrs_rows: np.ndarray, start, steps) -> np.ndarray:
    """Advance hash chains row-wise; the hash-index word tracks the position."""
    rows = x.shape[0]
    start = np.broadcast_to(np.asarray(start, dtype=np.int64), (rows,)).copy()
    steps = np.broadcast_to(np.asarray(steps, dtype=np.int64), (rows,)).copy()
    x = np.ascontiguousarray(x, dtype=np.uint8)
    adrs_rows = np.ascontiguousarray(adrs_rows)
    if ctx.trace is not None:
        return _chain_traced(ctx, x, adrs_rows, start, steps)
    out = np.empty_like(x)
    calls = _kernels.chain_many(ctx.backend.code, ctx._seed_arr, adrs_rows, x, start, steps, out)
    ctx.backend.count(calls)
    return out


def _chain_traced(ctx, x, adrs_rows, start, steps):
    val = x.copy()
    for step in range(int(steps.max(initial=0))):
        live = np.flatnonzero(step < steps)
        rows = adrs_rows[live].copy()
        rows[:, 28:32] = (start[live] + step).astype(">u4").view(np.uint8).reshape(-1, 4)
        val[live] = thash_many(ctx, rows, val[live])
    return val
