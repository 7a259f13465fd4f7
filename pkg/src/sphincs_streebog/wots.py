"""WOTS+ one-time signatures over the masked tweakable hash."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .address import Adrs, AdrsType, adrs_rows, wots_pk
from .params import ParamSet
from .thash import HashInputError, TweakContext, chain_many, prf_many, thash, thash_many

__all__ = [
    "ChainRangeError",
    "WotsSignature",
    "base_w",
    "chain",
    "wots_pk_gen",
    "wots_sign",
    "wots_pk_from_sig",
]


class ChainRangeError(ValueError):
    pass


@dataclass(frozen=True)
class WotsSignature:
    chains: tuple[bytes, ...]

    def to_bytes(self) -> bytes:
        return b"".join(self.chains)

    @classmethod
    def from_bytes(cls, p: ParamSet, data: bytes) -> "WotsSignature":
        if len(data) != p.len * p.n:
            raise ValueError("WOTS signature has the wrong length")
        return cls(tuple(data[i:i + p.n] for i in range(0, len(data), p.n)))

    def array(self) -> np.ndarray:
        return np.frombuffer(self.to_bytes(), dtype=np.uint8).reshape(len(self.chains), -1)


def _digits(data: bytes, log_w: int, count: int) -> list[int]:
    value = int.from_bytes(data, "big")
    total = 8 * len(data)
    mask = (1 << log_w) - 1
    return [(value >> (total - (i + 1) * log_w)) & mask for i in range(count)]


def base_w(p: ParamSet, msg: bytes) -> list[int]:
    """Message digits followed by checksum digits, most significant first."""
    if len(msg) != p.n:
        raise HashInputError("WOTS message must be n bytes")
    digits = _digits(msg, p.log_w, p.len1)
    csum = sum(p.w - 1 - v for v in digits)
    csum_bits = p.len2 * p.log_w
    csum <<= (8 - csum_bits % 8) % 8
    digits += _digits(csum.to_bytes(-(-csum_bits // 8), "big"), p.log_w, p.len2)
    return digits


def chain(ctx: TweakContext, start_value: bytes, start: int, steps: int, adrs: Adrs,
          w: int = 16) -> bytes:
    """Scalar chain walk: ``steps`` applications of F from position ``start``."""
    if start < 0 or steps < 0 or start + steps > w - 1:
        raise ChainRangeError(f"chain segment [{start}, {start + steps}] exceeds w-1={w - 1}")
    value = bytes(start_value)
    for pos in range(start, start + steps):
        value = thash(ctx, adrs.with_words(word3=pos), value)
    return value


def _chain_rows(p: ParamSet, adrs: Adrs) -> np.ndarray:
    base = Adrs(adrs.layer, adrs.tree, AdrsType.WOTS_HASH, adrs.word1)
    return adrs_rows(base, word2=np.arange(p.len))


def _compress(ctx: TweakContext, adrs: Adrs, ends: np.ndarray) -> bytes:
    row = np.frombuffer(wots_pk(adrs.layer, adrs.tree, adrs.word1).to_bytes(), dtype=np.uint8)
    return thash_many(ctx, row.reshape(1, -1), ends.reshape(1, -1))[0].tobytes()


def wots_pk_gen(p: ParamSet, ctx: TweakContext, sk_seed: bytes, adrs: Adrs) -> bytes:
    """Compressed public key of the keypair addressed by (layer, tree, word1)."""
    rows = _chain_rows(p, adrs)
    secrets = prf_many(ctx, sk_seed, rows)
    ends = chain_many(ctx, secrets, rows, 0, p.w - 1)
    return _compress(ctx, adrs, ends)


def wots_sign(p: ParamSet, ctx: TweakContext, msg: bytes, sk_seed: bytes, adrs: Adrs) -> WotsSignature:
    rows = _chain_rows(p, adrs)
    secrets = prf_many(ctx, sk_seed, rows)
    sig = chain_many(ctx, secrets, rows, 0, np.array(base_w(p, msg)))
    return WotsSignature(tuple(row.tobytes() for row in sig))


def wots_pk_from_sig(p: ParamSet, ctx: TweakContext, sig: WotsSignature, msg: bytes, adrs: Adrs) -> bytes:
    if len(sig.chains) != p.len or any(len(c) != p.n for c in sig.chains):
        raise ValueError("malformed WOTS signature")
    digits = np.array(base_w(p, msg))
    ends = chain_many(ctx, sig.array(), _chain_rows(p, adrs), digits, p.w - 1 - digits)
    return _compress(ctx, adrs, ends)
