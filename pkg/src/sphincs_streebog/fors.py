"""FORS few-time signatures: k Merkle trees of height a.

All k trees share one address type; node ``i`` at height ``z`` of tree ``j``
carries index ``j * 2**(a - z) + i``, so leaves run from ``j * 2**a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .address import Adrs, adrs_rows, fors_node, fors_roots
from .params import ParamSet
from .thash import TweakContext, prf_many, thash_many
from ._parallel import pmap

__all__ = [
    "ForsIndexError",
    "ForsSignature",
    "fors_tree",
    "fors_pk_gen",
    "fors_sign",
    "fors_pk_from_sig",
]


class ForsIndexError(ValueError):
    pass


@dataclass(frozen=True)
class ForsSignature:
    """Per tree: the revealed secret element and its a-node path, bottom-up."""

    secrets: tuple[bytes, ...]
    auth_paths: tuple[tuple[bytes, ...], ...]

    def to_bytes(self) -> bytes:
        return b"".join(s + b"".join(path) for s, path in zip(self.secrets, self.auth_paths))

    @classmethod
    def from_bytes(cls, p: ParamSet, data: bytes) -> "ForsSignature":
        if len(data) != p.k * (p.a + 1) * p.n:
            raise ValueError("FORS signature has the wrong length")
        nodes = [data[i:i + p.n] for i in range(0, len(data), p.n)]
        step = p.a + 1
        return cls(tuple(nodes[j * step] for j in range(p.k)),
                   tuple(tuple(nodes[j * step + 1:(j + 1) * step]) for j in range(p.k)))


def _check_indices(p: ParamSet, indices) -> None:
    if len(indices) != p.k or any(not 0 <= i < 1 << p.a for i in indices):
        raise ForsIndexError(f"need {p.k} indices in [0, {1 << p.a})")


def fors_tree(p: ParamSet, ctx: TweakContext, sk_seed: bytes, adrs: Adrs, j: int):
    """Materialise tree ``j``: returns (secret elements, [level 0 .. level a])."""
    base = fors_node(adrs.tree, adrs.word1, 0, 0)
    leaves_idx = j * (1 << p.a) + np.arange(1 << p.a)
    rows = adrs_rows(base, word3=leaves_idx)
    secrets = prf_many(ctx, sk_seed, rows)
    levels = [thash_many(ctx, rows, secrets)]
    for z in range(1, p.a + 1):
        width = 1 << (p.a - z)
        rows = adrs_rows(base, word2=z, word3=j * width + np.arange(width))
        levels.append(thash_many(ctx, rows, levels[-1].reshape(width, 2 * p.n)))
    return secrets, levels


def _roots_pk(p: ParamSet, ctx: TweakContext, adrs: Adrs, roots: np.ndarray) -> bytes:
    row = np.frombuffer(fors_roots(adrs.tree, adrs.word1).to_bytes(), dtype=np.uint8)
    return thash_many(ctx, row.reshape(1, -1), roots.reshape(1, -1))[0].tobytes()


def fors_pk_gen(p: ParamSet, ctx: TweakContext, sk_seed: bytes, adrs: Adrs) -> bytes:
    trees = pmap(ctx.workers, lambda j: fors_tree(p, ctx, sk_seed, adrs, j)[1][-1], range(p.k))
    return _roots_pk(p, ctx, adrs, np.concatenate(trees))


def fors_sign(p: ParamSet, ctx: TweakContext, indices, sk_seed: bytes, adrs: Adrs) -> ForsSignature:
    _check_indices(p, indices)

    def one(j: int):
        secrets, levels = fors_tree(p, ctx, sk_seed, adrs, j)
        idx = indices[j]
        path = tuple(levels[z][(idx >> z) ^ 1].tobytes() for z in range(p.a))
        return secrets[idx].tobytes(), path

    parts = pmap(ctx.workers, one, range(p.k))
    return ForsSignature(tuple(s for s, _ in parts), tuple(path for _, path in parts))


def fors_pk_from_sig(p: ParamSet, ctx: TweakContext, sig: ForsSignature, indices, adrs: Adrs) -> bytes:
    _check_indices(p, indices)
    if len(sig.secrets) != p.k or any(len(path) != p.a for path in sig.auth_paths):
        raise ValueError("malformed FORS signature")
    idx = np.asarray(indices, dtype=np.int64)
    trees = np.arange(p.k)
    base = fors_node(adrs.tree, adrs.word1, 0, 0)
    secrets = np.frombuffer(b"".join(sig.secrets), dtype=np.uint8).reshape(p.k, p.n)
    node = thash_many(ctx, adrs_rows(base, word3=(trees << p.a) + idx), secrets)
    for z in range(1, p.a + 1):
        sibling = np.frombuffer(b"".join(path[z - 1] for path in sig.auth_paths),
                                dtype=np.uint8).reshape(p.k, p.n)
        right = ((idx >> (z - 1)) & 1).astype(bool)[:, None]
        pair = np.where(right, np.hstack([sibling, node]), np.hstack([node, sibling]))
        rows = adrs_rows(base, word2=z, word3=(trees << (p.a - z)) + (idx >> z))
        node = thash_many(ctx, rows, pair)
    return _roots_pk(p, ctx, adrs, node)
