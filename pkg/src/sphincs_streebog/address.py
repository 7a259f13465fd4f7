"""32-byte hash addresses (ADRS).

Layout, all fields big-endian::

    layer (4) | tree (12) | type (4) | word1 (4) | word2 (4) | word3 (4)

The meaning of the three trailing words depends on the type:

=========== ========= ============ ===========
type        word1     word2        word3
=========== ========= ============ ===========
WOTS_HASH   keypair   chain        hash index
WOTS_PK     keypair   0            0
TREE        0         tree height  node index
FORS_TREE   keypair   tree height  node index
FORS_ROOTS  keypair   0            0
=========== ========= ============ ===========
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

__all__ = [
    "AddressRangeError",
    "AdrsType",
    "Adrs",
    "adrs_serialize",
    "adrs_rows",
    "wots_chain",
    "wots_pk",
    "tree_node",
    "fors_node",
    "fors_roots",
]

ADRS_BYTES = 32
_U32 = 1 << 32
_U96 = 1 << 96


class AdrsType(IntEnum):
    WOTS_HASH = 0
    WOTS_PK = 1
    TREE = 2
    FORS_TREE = 3
    FORS_ROOTS = 4


class AddressRangeError(ValueError):
    pass


def _check(name: str, value: int, limit: int) -> None:
    if not 0 <= value < limit:
        raise AddressRangeError(f"{name}={value} does not fit its address field")


@dataclass(frozen=True)
class Adrs:
    layer: int = 0
    tree: int = 0
    adrs_type: int = AdrsType.WOTS_HASH
    word1: int = 0
    word2: int = 0
    word3: int = 0

    def __post_init__(self) -> None:
        _check("layer", self.layer, _U32)
        _check("tree", self.tree, _U96)
        _check("type", self.adrs_type, _U32)
        _check("word1", self.word1, _U32)
        _check("word2", self.word2, _U32)
        _check("word3", self.word3, _U32)

    def with_type(self, adrs_type: int) -> "Adrs":
        """Switch type; the three type-specific words start over at zero."""
        return Adrs(self.layer, self.tree, adrs_type)

    def with_words(self, word1: int | None = None, word2: int | None = None,
                   word3: int | None = None) -> "Adrs":
        changes = {k: v for k, v in (("word1", word1), ("word2", word2), ("word3", word3))
                   if v is not None}
        return replace(self, **changes)

    def to_bytes(self) -> bytes:
        return (self.layer.to_bytes(4, "big") + self.tree.to_bytes(12, "big")
                + int(self.adrs_type).to_bytes(4, "big") + self.word1.to_bytes(4, "big")
                + self.word2.to_bytes(4, "big") + self.word3.to_bytes(4, "big"))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Adrs":
        if len(data) != ADRS_BYTES:
            raise ValueError("address must be 32 bytes")
        be = lambda lo, hi: int.from_bytes(data[lo:hi], "big")  # noqa: E731
        return cls(be(0, 4), be(4, 16), be(16, 20), be(20, 24), be(24, 28), be(28, 32))


def adrs_serialize(a: Adrs) -> bytes:
    return a.to_bytes()


def wots_chain(layer: int, tree: int, keypair: int, chain: int, hash_idx: int) -> Adrs:
    return Adrs(layer, tree, AdrsType.WOTS_HASH, keypair, chain, hash_idx)


def wots_pk(layer: int, tree: int, keypair: int) -> Adrs:
    return Adrs(layer, tree, AdrsType.WOTS_PK, keypair)


def tree_node(layer: int, tree: int, height: int, index: int) -> Adrs:
    return Adrs(layer, tree, AdrsType.TREE, 0, height, index)


def fors_node(tree: int, keypair: int, height: int, index: int) -> Adrs:
    return Adrs(0, tree, AdrsType.FORS_TREE, keypair, height, index)


def fors_roots(tree: int, keypair: int) -> Adrs:
    return Adrs(0, tree, AdrsType.FORS_ROOTS, keypair)


def adrs_rows(base: Adrs, word1=None, word2=None, word3=None) -> np.ndarray:
    """Batch of serialized addresses sharing ``base`` except for the given words.

    Each of ``word1``/``word2``/``word3`` may be an integer array (broadcast
    together) or None to keep the base value.  Returns a (rows, 32) uint8 array.
    """
    given = zip((word1, word2, word3), (base.word1, base.word2, base.word3))
    words = np.broadcast_arrays(*(np.asarray(d if w is None else w, dtype=np.int64)
                                  for w, d in given))
    rows = words[0].size
    for w in words:
        if w.size and (w.min() < 0 or w.max() >= _U32):
            raise AddressRangeError("address word out of range")
    out = np.empty((rows, ADRS_BYTES), dtype=np.uint8)
    out[:, :20] = np.frombuffer(base.to_bytes()[:20], dtype=np.uint8)
    for i, w in enumerate(words):
        out[:, 20 + 4 * i:24 + 4 * i] = w.reshape(-1).astype(">u4").view(np.uint8).reshape(rows, 4)
    return out
