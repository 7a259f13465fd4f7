import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphincs_streebog.address import Adrs, adrs_rows, wots_chain
from sphincs_streebog.hash_core import get_backend, hmac, mgf1
from sphincs_streebog.params import PARAMSETS
from sphincs_streebog.thash import (HashInputError, TweakContext, chain_many, h_msg, mask, prf, prf_many,
                                    prf_msg, split_digest, thash, thash_many)

SEED = bytes(range(16))


def ctx_for(bid, **kw):
    return TweakContext(get_backend(bid), SEED, **kw)


def test_thash_by_hand(backend_id):
    ctx = ctx_for(backend_id)
    a = wots_chain(0, 1, 2, 3, 4)
    msg = bytes(range(100, 148))
    bitmask = mgf1(get_backend(backend_id), SEED + a.to_bytes(), len(msg))
    masked = bytes(x ^ y for x, y in zip(msg, bitmask))
    assert thash(ctx, a, msg) == get_backend(backend_id).digest(SEED + a.to_bytes() + masked)[:16]


def test_mask_is_an_involution():
    ctx = ctx_for("sha256")
    msg = b"q" * 32
    assert mask(ctx, Adrs(), mask(ctx, Adrs(), msg)) == msg


@pytest.mark.parametrize("length", [0, 15, 17])
def test_thash_rejects_ragged_input(length):
    with pytest.raises(HashInputError):
        thash(ctx_for("sha256"), Adrs(), bytes(length))


def test_prf_by_hand(backend_id):
    a = wots_chain(1, 2, 3, 4, 0)
    sk = b"s" * 16
    assert prf(ctx_for(backend_id), sk, a) == get_backend(backend_id).digest(sk + a.to_bytes())[:16]


def test_prf_msg_is_truncated_hmac(backend_id):
    ctx = ctx_for(backend_id)
    key, opt = b"k" * 16, b"o" * 16
    assert prf_msg(ctx, key, opt, b"hello") == hmac(get_backend(backend_id), key, opt + b"hello")[:16]


def test_h_msg_by_hand(backend_id):
    be = get_backend(backend_id)
    ctx = TweakContext(be, SEED)
    r, root, msg = b"r" * 16, b"t" * 16, b"payload"
    inner = be.digest(r + SEED + root + msg)
    assert h_msg(ctx, r, root, msg, 30) == mgf1(be, r + SEED + root + inner, 30)


@given(st.binary(max_size=3000))
def test_file_and_bytes_agree(msg):
    ctx = ctx_for("sha256")
    fh = io.BytesIO(msg)
    fh.read()  # position is irrelevant; the file is rewound
    assert h_msg(ctx, b"r" * 16, b"t" * 16, fh, 30) == h_msg(ctx, b"r" * 16, b"t" * 16, msg, 30)
    assert prf_msg(ctx, b"k" * 16, b"o" * 16, fh) == prf_msg(ctx, b"k" * 16, b"o" * 16, msg)


def test_split_digest_toy():
    p = PARAMSETS["toy"]
    # k*a = 32 bits of FORS indices, 1 byte of tree index, 1 byte of leaf index
    digest = bytes([0x12, 0x34, 0x56, 0x78, 0xFF, 0xFB])
    indices, tree, leaf = split_digest(p, digest)
    assert indices == [1, 2, 3, 4, 5, 6, 7, 8]
    assert tree == 0x07
    assert leaf == 0x3
    assert tree < 2**p.tree_bits and leaf < 2**p.leaf_bits


@given(st.binary(min_size=30, max_size=30))
def test_split_digest_ranges(digest):
    p = PARAMSETS["128s"]
    indices, tree, leaf = split_digest(p, digest)
    assert len(indices) == p.k and all(0 <= i < 2**p.a for i in indices)
    assert 0 <= tree < 2**p.tree_bits and 0 <= leaf < 2**p.leaf_bits


def test_split_digest_length():
    with pytest.raises(HashInputError):
        split_digest(PARAMSETS["toy"], bytes(5))


@given(st.lists(st.binary(min_size=16, max_size=16), min_size=1, max_size=6),
       st.sampled_from([1, 2, 35]))
def test_batched_thash_matches_scalar(blocks, width):
    for bid in ("streebog256", "sha256"):
        ctx = ctx_for(bid)
        base = wots_chain(1, 5, 2, 0, 0)
        rows = adrs_rows(base, word2=np.arange(len(blocks)))
        msgs = np.frombuffer(b"".join(b * width for b in blocks), dtype=np.uint8).reshape(len(blocks), -1)
        out = thash_many(ctx, rows, msgs)
        for i, b in enumerate(blocks):
            assert out[i].tobytes() == thash(ctx, base.with_words(word2=i), b * width)


def test_batched_prf_matches_scalar(backend_id):
    ctx = ctx_for(backend_id)
    base = wots_chain(0, 3, 1, 0, 0)
    out = prf_many(ctx, b"z" * 16, adrs_rows(base, word2=np.arange(5)))
    for i in range(5):
        assert out[i].tobytes() == prf(ctx, b"z" * 16, base.with_words(word2=i))


def test_batched_chain_matches_scalar(backend_id):
    from sphincs_streebog.wots import chain

    ctx = ctx_for(backend_id)
    base = wots_chain(0, 3, 1, 0, 0)
    x = np.frombuffer(bytes(range(64)), dtype=np.uint8).reshape(4, 16)
    start, steps = np.array([0, 3, 7, 15]), np.array([15, 5, 8, 0])
    out = chain_many(ctx, x, adrs_rows(base, word2=np.arange(4)), start, steps)
    for i in range(4):
        want = chain(ctx, x[i].tobytes(), int(start[i]), int(steps[i]), base.with_words(word2=i))
        assert out[i].tobytes() == want


def test_batch_counts_agree_with_scalar():
    a, b = ctx_for("sha256"), ctx_for("sha256")
    rows = adrs_rows(Adrs(), word3=np.arange(3))
    thash_many(a, rows, np.zeros((3, 48), dtype=np.uint8))
    for i in range(3):
        thash(b, Adrs(word3=i), bytes(48))
    assert a.backend.calls == b.backend.calls == 3 * 3


def test_traced_chain_is_identical(backend_id):
    x = np.arange(32, dtype=np.uint8).reshape(2, 16)
    rows = adrs_rows(wots_chain(0, 0, 0, 0, 0), word2=np.arange(2))
    plain = chain_many(ctx_for(backend_id), x, rows, 2, 9)
    trace = []
    traced = chain_many(ctx_for(backend_id, trace=trace), x, rows, 2, 9)
    assert np.array_equal(plain, traced)
    assert len(trace) == 18


def test_seed_longer_than_digest():
    with pytest.raises(HashInputError):
        TweakContext(get_backend("sha256"), bytes(33))


def test_mask_examples():
    sha = get_backend("sha256")
    ctx = TweakContext(sha, bytes(16))
    assert mask(ctx, Adrs(), b"") == b""
    assert mask(ctx, Adrs(), bytes(16)) == mgf1(get_backend("sha256"), bytes(48), 16)


@pytest.mark.parametrize("n", [16, 24, 32])
@pytest.mark.parametrize("blocks", [1, 2, 35, 14])
def test_output_is_n_bytes(n, blocks):
    ctx = TweakContext(get_backend("sha256"), bytes(n))
    assert len(thash(ctx, Adrs(), bytes(blocks * n))) == n
    assert len(prf_msg(ctx, bytes(n), bytes(n), b"m")) == n


def test_adrs_bit_flips_change_thash(rng):
    ctx = ctx_for("streebog256")
    rows = []
    base = rng.randbytes(32)
    for bit in range(256):
        raw = bytearray(base)
        raw[bit // 8] ^= 1 << (bit % 8)
        rows.append(raw)
    rows = np.frombuffer(b"".join(rows) + base, dtype=np.uint8).reshape(-1, 32)
    for _ in range(4):
        msg = np.frombuffer(rng.randbytes(16), dtype=np.uint8)
        out = thash_many(ctx, rows, np.tile(msg, (len(rows), 1)))
        assert len({r.tobytes() for r in out}) == len(rows)


def test_prf_distinct_over_many_addresses(rng):
    ctx = ctx_for("sha256")
    rows = adrs_rows(wots_chain(0, 0, 0, 0, 0), word1=np.arange(10_000) % 100,
                     word2=np.arange(10_000) // 100)
    out = prf_many(ctx, rng.randbytes(16), rows)
    assert len({r.tobytes() for r in out}) == 10_000


def test_prf_msg_depends_on_message():
    ctx = ctx_for("sha256")
    assert prf_msg(ctx, b"k" * 16, b"o" * 16, b"a") != prf_msg(ctx, b"k" * 16, b"o" * 16, b"b")


@pytest.mark.parametrize("name", ["128s", "128f", "192s", "192f", "256s", "256f"])
def test_h_msg_length(name):
    p = PARAMSETS[name]
    ctx = TweakContext(get_backend("sha256"), bytes(p.n))
    assert len(h_msg(ctx, bytes(p.n), bytes(p.n), b"m", p.m)) == p.m


@given(st.binary(min_size=1, max_size=64), st.data())
def test_h_msg_bit_flip(msg, data):
    ctx = ctx_for("streebog256")
    bit = data.draw(st.integers(0, 8 * len(msg) - 1))
    other = bytearray(msg)
    other[bit // 8] ^= 1 << (bit % 8)
    assert h_msg(ctx, b"r" * 16, b"t" * 16, msg, 30) != h_msg(ctx, b"r" * 16, b"t" * 16, bytes(other), 30)


def test_split_digest_examples():
    p = PARAMSETS["toy"]
    assert split_digest(p, bytes(6)) == ([0] * 8, 0, 0)
    assert split_digest(p, bytes.fromhex("01234567") + bytes(2))[0] == list(range(8))


def _bit_reader(data: bytes, start: int, count: int) -> int:
    bits = "".join(f"{b:08b}" for b in data)
    return int(bits[start:start + count], 2)


@settings(max_examples=1000)
@given(st.sampled_from(["toy", "128s", "192f", "256s"]), st.data())
def test_split_digest_bit_reader(name, data):
    p = PARAMSETS[name]
    digest = data.draw(st.binary(min_size=p.m, max_size=p.m))
    indices, tree, leaf = split_digest(p, digest)
    assert indices == [_bit_reader(digest, j * p.a, p.a) for j in range(p.k)]
    md = -(-p.k * p.a // 8)
    tl = -(-p.tree_bits // 8)
    assert tree == int.from_bytes(digest[md:md + tl], "big") % 2**p.tree_bits
    assert leaf == int.from_bytes(digest[md + tl:], "big") % 2**p.leaf_bits


def test_backends_differ():
    a, b = ctx_for("streebog256"), ctx_for("sha256")
    assert thash(a, Adrs(), bytes(16)) != thash(b, Adrs(), bytes(16))
    assert prf(a, bytes(16), Adrs()) != prf(b, bytes(16), Adrs())


def test_pk_seed_matters():
    a = TweakContext(get_backend("sha256"), bytes(16))
    b = TweakContext(get_backend("sha256"), b"\1" + bytes(15))
    assert thash(a, Adrs(), bytes(32)) != thash(b, Adrs(), bytes(32))
    assert h_msg(a, bytes(16), bytes(16), b"", 30) != h_msg(b, bytes(16), bytes(16), b"", 30)
