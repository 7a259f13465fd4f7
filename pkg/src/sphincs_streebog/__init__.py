"""Stateless hash-based signatures with Streebog-256 or SHA-256 as the hash."""

from .hash_core import BACKEND_IDS, HashBackend, get_backend
from .params import PARAMSETS, ParamSet, paramset_lookup
from .sphincs import MalformedSignatureError, PublicKey, SecretKey, Signature, keygen, sign, verify

__all__ = [
    "BACKEND_IDS",
    "HashBackend",
    "MalformedSignatureError",
    "PARAMSETS",
    "ParamSet",
    "PublicKey",
    "SecretKey",
    "Signature",
    "get_backend",
    "keygen",
    "paramset_lookup",
    "sign",
    "verify",
]
