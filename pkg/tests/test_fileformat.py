import pytest
from hypothesis import given, strategies as st

from sphincs_streebog.fileformat import (BACKEND_CODES, HEADER_LEN, PARAMSET_CODES, FileFormatError, Kind,
                                         TaggedBlob, body_length, decode, encode)
from sphincs_streebog.params import PARAMSETS

blobs = st.builds(
    lambda b, s, k: TaggedBlob(b, s, k, bytes(body_length(PARAMSETS[s], k))),
    st.sampled_from(list(BACKEND_CODES)), st.sampled_from(list(PARAMSET_CODES)), st.sampled_from(list(Kind)))


@given(blobs, st.sampled_from(["bin", "hex"]))
def test_round_trip(blob, fmt):
    assert decode(encode(blob, fmt)) == blob


def test_header_bytes():
    raw = encode(TaggedBlob("sha256", "toy", Kind.SIG, bytes(1872)))
    assert raw[:HEADER_LEN] == b"HTSG\x01\x02\x7f\x03"
    raw = encode(TaggedBlob("streebog256", "128s", Kind.PK, bytes(32)))
    assert raw[:HEADER_LEN] == b"HTSG\x01\x01\x01\x01"
    assert len(raw) == 8 + 32


def test_paramset_ids():
    assert [PARAMSET_CODES[n] for n in ("128s", "128f", "192s", "192f", "256s", "256f")] == [1, 2, 3, 4, 5, 6]


@pytest.mark.parametrize("mutate", [
    lambda r: r[:-1],
    lambda r: r + b"\0",
    lambda r: b"XTSG" + r[4:],
    lambda r: r[:4] + b"\x02" + r[5:],
    lambda r: r[:5] + b"\x09" + r[6:],
    lambda r: r[:6] + b"\x33" + r[7:],
    lambda r: r[:7] + b"\x07" + r[8:],
    lambda r: r[:6],
])
def test_rejects(mutate):
    raw = encode(TaggedBlob("sha256", "toy", Kind.PK, bytes(32)))
    with pytest.raises(FileFormatError):
        decode(mutate(raw))


def test_expected_kind():
    raw = encode(TaggedBlob("sha256", "toy", Kind.PK, bytes(32)))
    with pytest.raises(FileFormatError):
        decode(raw, expect=Kind.SK)


def test_hex_tolerates_whitespace():
    raw = encode(TaggedBlob("sha256", "toy", Kind.PK, bytes(32)), "hex")
    assert decode(b"  " + raw[:20] + b"\n" + raw[20:]).body == bytes(32)


def test_encode_checks_length():
    with pytest.raises(FileFormatError):
        encode(TaggedBlob("sha256", "toy", Kind.PK, bytes(31)))
