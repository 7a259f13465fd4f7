"""Compiled hashing kernels.

Everything on the signing hot path funnels through here: SHA-256 and
Streebog-256 compression, the masked tweakable hash, the keyed PRF and whole
hash chains, each over a batch of rows.  Kernels return the number of complete
hash-function evaluations they performed so callers can keep exact call counts.

Mixing numba's unsigned and signed integer types silently promotes to float,
so every constant is wrapped in an explicit unsigned type.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint32

from . import streebog

STREEBOG256 = 1
SHA256 = 2

_LPS = streebog.lps_table()
_C = streebog.round_constants()
_U8 = np.uint64(8)
_FF = np.uint64(0xFF)
_M32 = np.uint64(0xFFFFFFFF)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)
_IV256_WORD = np.uint64(0x0101010101010101)

_SHA_K = np.array([
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1, 0x923F82A4, 0xAB1C5ED5,
    0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3, 0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174,
    0xE49B69C1, 0xEFBE4786, 0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147, 0x06CA6351, 0x14292967,
    0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13, 0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85,
    0xA2BFE8A1, 0xA81A664B, 0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A, 0x5B9CCA4F, 0x682E6FF3,
    0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208, 0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
], dtype=np.uint32)
_SHA_IV = np.array([
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A, 0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
], dtype=np.uint32)


# --------------------------------------------------------------------------
# Streebog
# --------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _lps(x, out):
    for c in range(8):
        sh = np.uint64(8 * c)
        acc = _ZERO
        for r in range(8):
            acc ^= _LPS[r, (x[r] >> sh) & _FF]
        out[c] = acc


@njit(cache=True, nogil=True)
def _g(h, counter, m, scratch):
    """Compression g_N(h, m) in place on ``h``; ``scratch`` holds 24 words."""
    k = scratch[0:8]
    t = scratch[8:16]
    tmp = scratch[16:24]
    for i in range(8):
        tmp[i] = h[i] ^ counter[i]
    _lps(tmp, k)
    for i in range(8):
        t[i] = m[i]
    for r in range(12):
        for i in range(8):
            tmp[i] = k[i] ^ t[i]
        _lps(tmp, t)
        for i in range(8):
            tmp[i] = k[i] ^ _C[r, i]
        _lps(tmp, k)
    for i in range(8):
        h[i] ^= t[i] ^ k[i] ^ m[i]


@njit(cache=True, nogil=True)
def _add512(acc, m):
    carry = _ZERO
    for i in range(8):
        a = acc[i]
        s = a + m[i]
        c1 = _ONE if s < a else _ZERO
        s2 = s + carry
        c2 = _ONE if s2 < s else _ZERO
        acc[i] = s2
        carry = c1 | c2


@njit(cache=True, nogil=True)
def _add512_small(acc, value):
    carry = np.uint64(value)
    for i in range(8):
        if carry == _ZERO:
            break
        s = acc[i] + carry
        carry = _ONE if s < carry else _ZERO
        acc[i] = s


@njit(cache=True, nogil=True)
def _load_words(data, pos, m):
    for i in range(8):
        w = _ZERO
        for j in range(8):
            w |= np.uint64(data[pos + 8 * i + j]) << np.uint64(8 * j)
        m[i] = w


@njit(cache=True, nogil=True)
def streebog_absorb(h, counter, sigma, data, nblocks):
    """Process ``nblocks`` full 64-byte blocks from ``data``."""
    m = np.empty(8, np.uint64)
    scratch = np.empty(24, np.uint64)
    for b in range(nblocks):
        _load_words(data, 64 * b, m)
        _g(h, counter, m, scratch)
        _add512_small(counter, 512)
        _add512(sigma, m)


@njit(cache=True, nogil=True)
def streebog_finish(h, counter, sigma, tail, tail_len):
    """Pad the final partial block and run both finalisation compressions."""
    block = np.zeros(64, np.uint8)
    for i in range(tail_len):
        block[i] = tail[i]
    block[tail_len] = 1
    m = np.empty(8, np.uint64)
    scratch = np.empty(24, np.uint64)
    _load_words(block, 0, m)
    _g(h, counter, m, scratch)
    _add512_small(counter, 8 * tail_len)
    _add512(sigma, m)
    zero = np.zeros(8, np.uint64)
    _g(h, zero, counter, scratch)
    _g(h, zero, sigma, scratch)


@njit(cache=True, nogil=True)
def _streebog256(data, length, out, ws64, ws8):
    h = ws64[0:8]
    counter = ws64[8:16]
    sigma = ws64[16:24]
    m = ws64[24:32]
    zero = ws64[32:40]
    scratch = ws64[40:64]
    for i in range(8):
        h[i] = _IV256_WORD
        counter[i] = _ZERO
        sigma[i] = _ZERO
        zero[i] = _ZERO
    pos = 0
    while length - pos >= 64:
        _load_words(data, pos, m)
        _g(h, counter, m, scratch)
        _add512_small(counter, 512)
        _add512(sigma, m)
        pos += 64
    block = ws8[0:64]
    tail = length - pos
    for i in range(tail):
        block[i] = data[pos + i]
    block[tail] = 1
    for i in range(tail + 1, 64):
        block[i] = 0
    _load_words(block, 0, m)
    _g(h, counter, m, scratch)
    _add512_small(counter, 8 * tail)
    _add512(sigma, m)
    _g(h, zero, counter, scratch)
    _g(h, zero, sigma, scratch)
    # The 256-bit variant keeps the most significant half: words 4..7.
    for i in range(4):
        w = h[4 + i]
        for j in range(8):
            out[8 * i + j] = np.uint8((w >> np.uint64(8 * j)) & _FF)


# --------------------------------------------------------------------------
# SHA-256
# --------------------------------------------------------------------------

@njit(cache=True, nogil=True, inline="always")
def _rotr(x, r):
    return (x >> r) | (x << (np.uint32(32) - r))


@njit(cache=True, nogil=True)
def _sha256_block(state, data, pos, w):
    for t in range(16):
        p = pos + 4 * t
        w[t] = ((uint32(data[p]) << uint32(24)) | (uint32(data[p + 1]) << uint32(16))
                | (uint32(data[p + 2]) << uint32(8)) | uint32(data[p + 3]))
    for t in range(16, 64):
        x = w[t - 15]
        y = w[t - 2]
        s0 = _rotr(x, uint32(7)) ^ _rotr(x, uint32(18)) ^ (x >> uint32(3))
        s1 = _rotr(y, uint32(17)) ^ _rotr(y, uint32(19)) ^ (y >> uint32(10))
        w[t] = uint32(w[t - 16] + s0 + w[t - 7] + s1)
    a = state[0]
    b = state[1]
    c = state[2]
    d = state[3]
    e = state[4]
    f = state[5]
    g = state[6]
    hh = state[7]
    for t in range(64):
        s1 = _rotr(e, uint32(6)) ^ _rotr(e, uint32(11)) ^ _rotr(e, uint32(25))
        ch = (e & f) ^ (~e & g)
        t1 = uint32(hh + s1 + ch + _SHA_K[t] + w[t])
        s0 = _rotr(a, uint32(2)) ^ _rotr(a, uint32(13)) ^ _rotr(a, uint32(22))
        maj = (a & b) ^ (a & c) ^ (b & c)
        t2 = uint32(s0 + maj)
        hh = g
        g = f
        f = e
        e = uint32(d + t1)
        d = c
        c = b
        b = a
        a = uint32(t1 + t2)
    state[0] += a
    state[1] += b
    state[2] += c
    state[3] += d
    state[4] += e
    state[5] += f
    state[6] += g
    state[7] += hh


@njit(cache=True, nogil=True)
def _sha256(data, length, out, ws32, ws8):
    state = ws32[0:8]
    w = ws32[8:72]
    for i in range(8):
        state[i] = _SHA_IV[i]
    pos = 0
    while length - pos >= 64:
        _sha256_block(state, data, pos, w)
        pos += 64
    tail = length - pos
    block = ws8[0:128]
    for i in range(tail):
        block[i] = data[pos + i]
    block[tail] = 0x80
    for i in range(tail + 1, 128):
        block[i] = 0
    total = 64 if tail < 56 else 128
    bits = np.uint64(length) * _U8
    for j in range(8):
        block[total - 1 - j] = np.uint8((bits >> np.uint64(8 * j)) & _FF)
    _sha256_block(state, block, 0, w)
    if total == 128:
        _sha256_block(state, block, 64, w)
    for i in range(8):
        v = state[i]
        out[4 * i] = np.uint8(v >> uint32(24))
        out[4 * i + 1] = np.uint8((v >> uint32(16)) & uint32(0xFF))
        out[4 * i + 2] = np.uint8((v >> uint32(8)) & uint32(0xFF))
        out[4 * i + 3] = np.uint8(v & uint32(0xFF))


# --------------------------------------------------------------------------
# Backend dispatch and scheme-level batches
# --------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _digest(bid, data, length, out, ws64, ws32, ws8):
    if bid == STREEBOG256:
        _streebog256(data, length, out, ws64, ws8)
    else:
        _sha256(data, length, out, ws32, ws8)


@njit(cache=True, nogil=True)
def _workspace():
    return np.empty(64, np.uint64), np.empty(72, np.uint32), np.empty(128, np.uint8)


@njit(cache=True, nogil=True)
def digest(bid, data):
    """One-shot 32-byte digest of a uint8 array."""
    out = np.empty(32, np.uint8)
    ws64, ws32, ws8 = _workspace()
    _digest(bid, data, data.size, out, ws64, ws32, ws8)
    return out


@njit(cache=True, nogil=True)
def _thash1(bid, seed_len, buf, msg, msg_len, masked, dig, n, out, ws64, ws32, ws8):
    """Masked tweakable hash of one row.

    ``buf`` already holds pk_seed || adrs in its first ``seed_len + 32`` bytes.
    Returns the number of digest evaluations.
    """
    base = seed_len + 32
    calls = 0
    nblocks = (msg_len + 31) // 32
    for c in range(nblocks):
        buf[base] = np.uint8((c >> 24) & 0xFF)
        buf[base + 1] = np.uint8((c >> 16) & 0xFF)
        buf[base + 2] = np.uint8((c >> 8) & 0xFF)
        buf[base + 3] = np.uint8(c & 0xFF)
        _digest(bid, buf, base + 4, dig, ws64, ws32, ws8)
        calls += 1
        lo = 32 * c
        hi = min(lo + 32, msg_len)
        for j in range(lo, hi):
            masked[j] = msg[j] ^ dig[j - lo]
    for j in range(msg_len):
        buf[base + j] = masked[j]
    _digest(bid, buf, base + msg_len, dig, ws64, ws32, ws8)
    calls += 1
    for j in range(n):
        out[j] = dig[j]
    return calls


@njit(cache=True, nogil=True)
def thash_many(bid, pk_seed, adrs, msgs, n, out):
    rows, msg_len = msgs.shape
    s = pk_seed.size
    buf = np.empty(s + 32 + max(msg_len, 4), np.uint8)
    masked = np.empty(msg_len, np.uint8)
    dig = np.empty(32, np.uint8)
    ws64, ws32, ws8 = _workspace()
    for j in range(s):
        buf[j] = pk_seed[j]
    calls = 0
    for i in range(rows):
        for j in range(32):
            buf[s + j] = adrs[i, j]
        calls += _thash1(bid, s, buf, msgs[i], msg_len, masked, dig, n, out[i], ws64, ws32, ws8)
    return calls


@njit(cache=True, nogil=True)
def prf_many(bid, sk_seed, adrs, n, out):
    rows = adrs.shape[0]
    s = sk_seed.size
    buf = np.empty(s + 32, np.uint8)
    dig = np.empty(32, np.uint8)
    ws64, ws32, ws8 = _workspace()
    for j in range(s):
        buf[j] = sk_seed[j]
    for i in range(rows):
        for j in range(32):
            buf[s + j] = adrs[i, j]
        _digest(bid, buf, s + 32, dig, ws64, ws32, ws8)
        for j in range(n):
            out[i, j] = dig[j]
    return rows


@njit(cache=True, nogil=True)
def chain_many(bid, pk_seed, adrs, x, start, steps, out):
    """Advance each row's chain ``steps[i]`` times from position ``start[i]``.

    The hash-index word (bytes 28..31 of the address) is set to the current
    position before every step.
    """
    rows, n = x.shape
    s = pk_seed.size
    buf = np.empty(s + 32 + max(n, 4), np.uint8)
    masked = np.empty(n, np.uint8)
    dig = np.empty(32, np.uint8)
    ws64, ws32, ws8 = _workspace()
    val = np.empty(n, np.uint8)
    nxt = np.empty(n, np.uint8)
    for j in range(s):
        buf[j] = pk_seed[j]
    calls = 0
    for i in range(rows):
        for j in range(n):
            val[j] = x[i, j]
        for j in range(28):
            buf[s + j] = adrs[i, j]
        for pos in range(start[i], start[i] + steps[i]):
            buf[s + 28] = np.uint8((pos >> 24) & 0xFF)
            buf[s + 29] = np.uint8((pos >> 16) & 0xFF)
            buf[s + 30] = np.uint8((pos >> 8) & 0xFF)
            buf[s + 31] = np.uint8(pos & 0xFF)
            calls += _thash1(bid, s, buf, val, n, masked, dig, n, nxt, ws64, ws32, ws8)
            for j in range(n):
                val[j] = nxt[j]
        for j in range(n):
            out[i, j] = val[j]
    return calls
