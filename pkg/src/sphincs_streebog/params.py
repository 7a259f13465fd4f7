"""Named parameter sets and their derived lengths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["ParamSet", "PARAMSETS", "SECURE_NAMES", "UnknownParamSetError", "paramset_lookup"]


class UnknownParamSetError(ValueError):
    pass


def _len2(len1: int, w: int) -> int:
    return math.floor(math.log2(len1 * (w - 1)) / math.log2(w)) + 1


@dataclass(frozen=True)
class ParamSet:
    name: str
    n: int
    h: int
    d: int
    a: int
    k: int
    w: int
    len1: int = field(init=False)
    len2: int = field(init=False)
    len: int = field(init=False)
    m: int = field(init=False)
    sig_bytes: int = field(init=False)
    pk_bytes: int = field(init=False)
    sk_bytes: int = field(init=False)

    def __post_init__(self) -> None:
        if self.h % self.d:
            raise ValueError(f"{self.name}: h={self.h} not divisible by d={self.d}")
        if self.w != 16:
            raise ValueError(f"{self.name}: only w=16 is supported")
        if self.h - self.h // self.d > 96:
            raise ValueError(f"{self.name}: tree index does not fit the 12-byte address field")
        len1 = math.ceil(8 * self.n / math.log2(self.w))
        len2 = _len2(len1, self.w)
        set_ = object.__setattr__
        set_(self, "len1", len1)
        set_(self, "len2", len2)
        set_(self, "len", len1 + len2)
        set_(self, "m", math.ceil(self.k * self.a / 8) + math.ceil(self.tree_bits / 8)
             + math.ceil(self.leaf_bits / 8))
        set_(self, "sig_bytes", self.n * (1 + self.k * (self.a + 1) + self.h + self.d * (len1 + len2)))
        set_(self, "pk_bytes", 2 * self.n)
        set_(self, "sk_bytes", 4 * self.n)

    @property
    def tree_height(self) -> int:
        """Height of one hyper-tree layer (h/d)."""
        return self.h // self.d

    @property
    def tree_bits(self) -> int:
        return self.h - self.tree_height

    @property
    def leaf_bits(self) -> int:
        return self.tree_height

    @property
    def log_w(self) -> int:
        return self.w.bit_length() - 1


PARAMSETS: dict[str, ParamSet] = {
    p.name: p
    for p in (
        ParamSet("128s", n=16, h=63, d=7, a=12, k=14, w=16),
        ParamSet("128f", n=16, h=66, d=22, a=6, k=33, w=16),
        ParamSet("192s", n=24, h=63, d=7, a=14, k=17, w=16),
        ParamSet("192f", n=24, h=66, d=22, a=8, k=33, w=16),
        ParamSet("256s", n=32, h=64, d=8, a=14, k=22, w=16),
        ParamSet("256f", n=32, h=68, d=17, a=9, k=35, w=16),
        # 64 hyper-tree leaves: small enough for exhaustive checks, not secure.
        ParamSet("toy", n=16, h=6, d=2, a=4, k=8, w=16),
    )
}

SECURE_NAMES: tuple[str, ...] = ("128s", "128f", "192s", "192f", "256s", "256f")


def paramset_lookup(name: str) -> ParamSet:
    try:
        return PARAMSETS[name]
    except KeyError:
        valid = ", ".join(PARAMSETS)
        raise UnknownParamSetError(f"unknown parameter set {name!r}; valid names: {valid}") from None
