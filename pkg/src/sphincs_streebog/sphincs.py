"""Keypair generation, signing and verification."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .address import Adrs, fors_node
from .fors import ForsSignature, fors_pk_from_sig, fors_sign
from .hash_core import HashBackend
from .hypertree import (HtSignature, MalformedHtSignatureError, check_structure, ht_sign,
                        ht_verify, treehash)
from .params import ParamSet
from .thash import Message, TweakContext, h_msg, prf_msg, split_digest

__all__ = [
    "MalformedSignatureError",
    "PublicKey",
    "SecretKey",
    "Signature",
    "keygen",
    "sign",
    "verify",
]


class MalformedSignatureError(ValueError):
    """Structurally invalid input, as opposed to a signature that fails to verify."""


@dataclass(frozen=True)
class PublicKey:
    params: ParamSet
    backend: HashBackend
    pk_seed: bytes
    pk_root: bytes

    def to_bytes(self) -> bytes:
        return self.pk_seed + self.pk_root

    @classmethod
    def from_bytes(cls, p: ParamSet, backend: HashBackend, data: bytes) -> "PublicKey":
        if len(data) != p.pk_bytes:
            raise MalformedSignatureError(f"public key must be {p.pk_bytes} bytes")
        return cls(p, backend, data[:p.n], data[p.n:])


@dataclass(frozen=True)
class SecretKey:
    params: ParamSet
    backend: HashBackend
    sk_seed: bytes
    sk_prf: bytes
    pk_seed: bytes
    pk_root: bytes

    @property
    def public_key(self) -> PublicKey:
        return PublicKey(self.params, self.backend, self.pk_seed, self.pk_root)

    def to_bytes(self) -> bytes:
        return self.sk_seed + self.sk_prf + self.pk_seed + self.pk_root

    @classmethod
    def from_bytes(cls, p: ParamSet, backend: HashBackend, data: bytes) -> "SecretKey":
        if len(data) != p.sk_bytes:
            raise MalformedSignatureError(f"secret key must be {p.sk_bytes} bytes")
        n = p.n
        return cls(p, backend, data[:n], data[n:2 * n], data[2 * n:3 * n], data[3 * n:])


@dataclass(frozen=True)
class Signature:
    randomizer: bytes
    fors_sig: ForsSignature
    ht_sig: HtSignature

    def to_bytes(self) -> bytes:
        return self.randomizer + self.fors_sig.to_bytes() + self.ht_sig.to_bytes()

    @classmethod
    def from_bytes(cls, p: ParamSet, data: bytes) -> "Signature":
        if len(data) != p.sig_bytes:
            raise MalformedSignatureError(f"signature must be {p.sig_bytes} bytes, got {len(data)}")
        fors_end = p.n + p.k * (p.a + 1) * p.n
        return cls(data[:p.n], ForsSignature.from_bytes(p, data[p.n:fors_end]),
                   HtSignature.from_bytes(p, data[fors_end:]))


def _fors_adrs(tree: int, leaf: int) -> Adrs:
    return fors_node(tree, leaf, 0, 0)


def keygen(p: ParamSet, backend: HashBackend, entropy: bytes | None = None, *,
           workers: int = 1) -> tuple[SecretKey, PublicKey]:
    """Derive a keypair from 3n bytes (sk_seed || sk_prf || pk_seed)."""
    if entropy is None:
        entropy = os.urandom(3 * p.n)
    if len(entropy) != 3 * p.n:
        raise ValueError(f"entropy must be {3 * p.n} bytes")
    sk_seed, sk_prf, pk_seed = (bytes(entropy[i * p.n:(i + 1) * p.n]) for i in range(3))
    ctx = TweakContext(backend, pk_seed, workers=workers)
    pk_root = treehash(p, ctx, sk_seed, 0, p.tree_height, Adrs(p.d - 1, 0))
    sk = SecretKey(p, backend, sk_seed, sk_prf, pk_seed, pk_root)
    return sk, sk.public_key


def sign(sk: SecretKey, message: Message, opt_rand: bytes | None = None, *,
         workers: int = 1, trace: list | None = None) -> Signature:
    """Sign ``message`` (bytes or a seekable binary file, read twice).

    Without ``opt_rand`` the public seed is used and signing is deterministic.
    """
    p = sk.params
    ctx = TweakContext(sk.backend, sk.pk_seed, trace=trace, workers=workers)
    randomizer = prf_msg(ctx, sk.sk_prf, sk.pk_seed if opt_rand is None else opt_rand, message)
    digest = h_msg(ctx, randomizer, sk.pk_root, message, p.m)
    indices, tree, leaf = split_digest(p, digest)
    adrs = _fors_adrs(tree, leaf)
    fors_sig = fors_sign(p, ctx, indices, sk.sk_seed, adrs)
    fors_pk = fors_pk_from_sig(p, ctx, fors_sig, indices, adrs)
    return Signature(randomizer, fors_sig, ht_sign(p, ctx, fors_pk, sk.sk_seed, tree, leaf))


def verify(pk: PublicKey, message: Message, sig: Signature | bytes, *,
           trace: list | None = None) -> bool:
    """True iff ``sig`` is valid; raises MalformedSignatureError on bad structure."""
    p = pk.params
    if not isinstance(sig, Signature):
        sig = Signature.from_bytes(p, bytes(sig))
    _check_shape(p, sig)
    ctx = TweakContext(pk.backend, pk.pk_seed, trace=trace)
    digest = h_msg(ctx, sig.randomizer, pk.pk_root, message, p.m)
    indices, tree, leaf = split_digest(p, digest)
    adrs = _fors_adrs(tree, leaf)
    fors_pk = fors_pk_from_sig(p, ctx, sig.fors_sig, indices, adrs)
    return ht_verify(p, ctx, fors_pk, sig.ht_sig, tree, leaf, pk.pk_root)


def _check_shape(p: ParamSet, sig: Signature) -> None:
    fors = sig.fors_sig
    ok = (len(sig.randomizer) == p.n and len(fors.secrets) == p.k
          and len(fors.auth_paths) == p.k
          and all(len(path) == p.a for path in fors.auth_paths)
          and all(len(x) == p.n for x in (*fors.secrets, *(y for path in fors.auth_paths for y in path))))
    if not ok:
        raise MalformedSignatureError("FORS part of the signature is malformed")
    try:
        check_structure(p, sig.ht_sig)
    except MalformedHtSignatureError as exc:
        raise MalformedSignatureError(str(exc)) from exc
