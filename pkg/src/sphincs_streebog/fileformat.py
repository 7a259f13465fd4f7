"""Key and signature files: an 8-byte header followed by the raw body.

Header layout: ``b"HTSG"``, version ``0x01``, backend id, parameter-set id,
kind.  Files may also be stored as one line of hex; :func:`decode` accepts
either form.
"""

from __future__ import annotations

import binascii
import enum
from dataclasses import dataclass

from .params import PARAMSETS, ParamSet

__all__ = [
    "BACKEND_CODES",
    "FileFormatError",
    "HEADER_LEN",
    "Kind",
    "PARAMSET_CODES",
    "TaggedBlob",
    "body_length",
    "decode",
    "encode",
]

MAGIC = b"HTSG"
VERSION = 0x01
HEADER_LEN = 8

BACKEND_CODES = {"streebog256": 0x01, "sha256": 0x02}
PARAMSET_CODES = {"128s": 0x01, "128f": 0x02, "192s": 0x03, "192f": 0x04,
                  "256s": 0x05, "256f": 0x06, "toy": 0x7F}
_BACKEND_NAMES = {v: k for k, v in BACKEND_CODES.items()}
_PARAMSET_NAMES = {v: k for k, v in PARAMSET_CODES.items()}


class FileFormatError(ValueError):
    pass


class Kind(enum.IntEnum):
    PK = 0x01
    SK = 0x02
    SIG = 0x03


def body_length(p: ParamSet, kind: Kind) -> int:
    return {Kind.PK: p.pk_bytes, Kind.SK: p.sk_bytes, Kind.SIG: p.sig_bytes}[kind]


@dataclass(frozen=True)
class TaggedBlob:
    backend: str
    paramset: str
    kind: Kind
    body: bytes

    @property
    def params(self) -> ParamSet:
        return PARAMSETS[self.paramset]


def encode(blob: TaggedBlob, fmt: str = "bin") -> bytes:
    expected = body_length(blob.params, blob.kind)
    if len(blob.body) != expected:
        raise FileFormatError(f"{blob.kind.name} body must be {expected} bytes, got {len(blob.body)}")
    raw = MAGIC + bytes([VERSION, BACKEND_CODES[blob.backend], PARAMSET_CODES[blob.paramset],
                         blob.kind]) + blob.body
    if fmt == "hex":
        return raw.hex().encode() + b"\n"
    if fmt != "bin":
        raise ValueError(f"unknown format {fmt!r}")
    return raw


def decode(data: bytes, expect: Kind | None = None) -> TaggedBlob:
    """Parse a file, binary or hex.  Lengths are checked before anything else is done."""
    if not data.startswith(MAGIC):
        try:
            data = binascii.unhexlify(b"".join(data.split()))
        except (binascii.Error, ValueError):
            raise FileFormatError("not an HTSG file") from None
        if not data.startswith(MAGIC):
            raise FileFormatError("not an HTSG file")
    if len(data) < HEADER_LEN:
        raise FileFormatError("truncated header")
    version, backend, pset, kind = data[4:8]
    if version != VERSION:
        raise FileFormatError(f"unsupported version {version}")
    if backend not in _BACKEND_NAMES:
        raise FileFormatError(f"unknown backend id 0x{backend:02x}")
    if pset not in _PARAMSET_NAMES:
        raise FileFormatError(f"unknown parameter-set id 0x{pset:02x}")
    try:
        kind = Kind(kind)
    except ValueError:
        raise FileFormatError(f"unknown kind 0x{kind:02x}") from None
    if expect is not None and kind != expect:
        raise FileFormatError(f"expected a {expect.name} file, got {kind.name}")
    blob = TaggedBlob(_BACKEND_NAMES[backend], _PARAMSET_NAMES[pset], kind, bytes(data[HEADER_LEN:]))
    expected = body_length(blob.params, kind)
    if len(blob.body) != expected:
        raise FileFormatError(f"{kind.name} body must be {expected} bytes, got {len(blob.body)}")
    return blob
