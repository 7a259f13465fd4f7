"""XMSS-style subtrees and the d-layer hyper-tree.

Subtrees are never stored.  :func:`treehash` regenerates a subtree's leaves
in order and folds them on a stack of at most ``height + 1`` nodes, picking up
the authentication path of a target leaf on the way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .address import Adrs, tree_node, wots_pk
from .params import ParamSet
from .thash import TweakContext, thash
from .wots import WotsSignature, wots_pk_from_sig, wots_pk_gen, wots_sign
from ._parallel import pmap

__all__ = [
    "HtSignature",
    "MalformedHtSignatureError",
    "TreeIndexError",
    "XmssSignature",
    "check_structure",
    "ht_sign",
    "ht_verify",
    "root_from_path",
    "treehash",
    "xmss_pk_from_sig",
    "xmss_sign",
]


class TreeIndexError(ValueError):
    pass


class MalformedHtSignatureError(ValueError):
    pass


@dataclass(frozen=True)
class XmssSignature:
    wots: WotsSignature
    auth_path: tuple[bytes, ...]

    def to_bytes(self) -> bytes:
        return self.wots.to_bytes() + b"".join(self.auth_path)


@dataclass(frozen=True)
class HtSignature:
    layers: tuple[XmssSignature, ...]

    def to_bytes(self) -> bytes:
        return b"".join(layer.to_bytes() for layer in self.layers)

    @classmethod
    def from_bytes(cls, p: ParamSet, data: bytes) -> "HtSignature":
        wots_len = p.len * p.n
        layer_len = wots_len + p.tree_height * p.n
        if len(data) != p.d * layer_len:
            raise MalformedHtSignatureError("hyper-tree signature has the wrong length")
        layers = []
        for off in range(0, len(data), layer_len):
            chunk = data[off:off + layer_len]
            path = chunk[wots_len:]
            layers.append(XmssSignature(WotsSignature.from_bytes(p, chunk[:wots_len]),
                                        tuple(path[i:i + p.n] for i in range(0, len(path), p.n))))
        return cls(tuple(layers))


def _keypair(adrs: Adrs, leaf: int) -> Adrs:
    return wots_pk(adrs.layer, adrs.tree, leaf)


def _treehash(p, ctx, sk_seed, start_leaf, height, adrs, target=None, msg=None, stats=None):
    """Root of the subtree plus, for ``target``, its auth path and WOTS signature."""
    if start_leaf % (1 << height):
        raise TreeIndexError(f"start leaf {start_leaf} not aligned to 2^{height}")
    auth = [b""] * height
    sig = None

    def leaf(idx: int):
        kp = _keypair(adrs, idx)
        if idx == target:
            s = wots_sign(p, ctx, msg, sk_seed, kp)
            return wots_pk_from_sig(p, ctx, s, msg, kp), s
        return wots_pk_gen(p, ctx, sk_seed, kp), None

    indices = range(start_leaf, start_leaf + (1 << height))
    if ctx.workers > 1:
        leaves = iter(pmap(ctx.workers, leaf, indices))
    else:
        leaves = map(leaf, indices)

    stack: list[tuple[int, bytes]] = []
    peak = 0
    for idx, (node, s) in zip(indices, leaves):
        if s is not None:
            sig = s
        z = 0
        peak = max(peak, len(stack) + 1)
        while True:
            if target is not None and z < height and idx >> z == (target >> z) ^ 1:
                auth[z] = node
            if not stack or stack[-1][0] != z:
                break
            left = stack.pop()[1]
            z += 1
            node = thash(ctx, tree_node(adrs.layer, adrs.tree, z, idx >> z), left + node)
        stack.append((z, node))
    if stats is not None:
        stats["peak_stack"] = peak
    return stack[-1][1], tuple(auth), sig


def treehash(p: ParamSet, ctx: TweakContext, sk_seed: bytes, start_leaf: int, height: int,
             adrs: Adrs, *, stats: dict | None = None) -> bytes:
    """Root of the height-``height`` subtree starting at ``start_leaf``.

    ``adrs`` supplies (layer, tree).  With ``stats`` given, the peak number of
    nodes held at once is stored under ``"peak_stack"``.
    """
    return _treehash(p, ctx, sk_seed, start_leaf, height, adrs, stats=stats)[0]


def _check_leaf(p: ParamSet, leaf_index: int) -> None:
    if not 0 <= leaf_index < 1 << p.tree_height:
        raise TreeIndexError(f"leaf index {leaf_index} out of range")


def _xmss_sign(p, ctx, msg, sk_seed, leaf_index, adrs):
    _check_leaf(p, leaf_index)
    root, auth, sig = _treehash(p, ctx, sk_seed, 0, p.tree_height, adrs, target=leaf_index, msg=msg)
    return XmssSignature(sig, auth), root


def xmss_sign(p: ParamSet, ctx: TweakContext, msg: bytes, sk_seed: bytes, leaf_index: int,
              adrs: Adrs) -> XmssSignature:
    return _xmss_sign(p, ctx, msg, sk_seed, leaf_index, adrs)[0]


def root_from_path(p: ParamSet, ctx: TweakContext, leaf: bytes, leaf_index: int,
                   auth_path, adrs: Adrs) -> bytes:
    node = leaf
    for z, sibling in enumerate(auth_path, start=1):
        pair = sibling + node if (leaf_index >> (z - 1)) & 1 else node + sibling
        node = thash(ctx, tree_node(adrs.layer, adrs.tree, z, leaf_index >> z), pair)
    return node


def xmss_pk_from_sig(p: ParamSet, ctx: TweakContext, leaf_index: int, sig: XmssSignature,
                     msg: bytes, adrs: Adrs) -> bytes:
    leaf = wots_pk_from_sig(p, ctx, sig.wots, msg, _keypair(adrs, leaf_index))
    return root_from_path(p, ctx, leaf, leaf_index, sig.auth_path, adrs)


def _check_coords(p: ParamSet, tree_index: int, leaf_index: int) -> None:
    if not 0 <= tree_index < 1 << p.tree_bits:
        raise TreeIndexError(f"tree index {tree_index} out of range")
    _check_leaf(p, leaf_index)


def ht_sign(p: ParamSet, ctx: TweakContext, msg: bytes, sk_seed: bytes, tree_index: int,
            leaf_index: int) -> HtSignature:
    """Layer 0 signs ``msg``; every higher layer signs the root below it."""
    _check_coords(p, tree_index, leaf_index)
    layers = []
    tree, leaf = tree_index, leaf_index
    for layer in range(p.d):
        sig, msg = _xmss_sign(p, ctx, msg, sk_seed, leaf, Adrs(layer, tree))
        layers.append(sig)
        leaf = tree & ((1 << p.tree_height) - 1)
        tree >>= p.tree_height
    return HtSignature(tuple(layers))


def check_structure(p: ParamSet, sig: HtSignature) -> None:
    if len(sig.layers) != p.d:
        raise MalformedHtSignatureError(f"expected {p.d} layers, got {len(sig.layers)}")
    for layer in sig.layers:
        chains, path = layer.wots.chains, layer.auth_path
        if len(chains) != p.len or len(path) != p.tree_height:
            raise MalformedHtSignatureError("layer has the wrong shape")
        if any(len(x) != p.n for x in (*chains, *path)):
            raise MalformedHtSignatureError("node of the wrong length")


def ht_verify(p: ParamSet, ctx: TweakContext, msg: bytes, sig: HtSignature, tree_index: int,
              leaf_index: int, pk_root: bytes) -> bool:
    check_structure(p, sig)
    _check_coords(p, tree_index, leaf_index)
    node, tree, leaf = msg, tree_index, leaf_index
    for layer, xsig in enumerate(sig.layers):
        node = xmss_pk_from_sig(p, ctx, leaf, xsig, node, Adrs(layer, tree))
        leaf = tree & ((1 << p.tree_height) - 1)
        tree >>= p.tree_height
    return node == pk_root
