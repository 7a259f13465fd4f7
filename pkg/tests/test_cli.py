import subprocess
import sys

import pytest

from sphincs_streebog.cli import main
from sphincs_streebog.fileformat import decode

SEED = "00" * 48


@pytest.fixture
def keys(tmp_path):
    prefix = str(tmp_path / "k")
    assert main(["keygen", "--paramset", "toy", "--unsafe-toy", "--seed", SEED, "--out", prefix]) == 0
    (tmp_path / "msg").write_bytes(b"hello world")
    return tmp_path


def test_keygen_reproducible(tmp_path, capsys):
    for name in ("a", "b"):
        assert main(["keygen", "--paramset", "toy", "--unsafe-toy", "--seed", SEED,
                     "--out", str(tmp_path / name)]) == 0
    assert "WARNING" in capsys.readouterr().err
    for ext in (".pk", ".sk"):
        assert (tmp_path / f"a{ext}").read_bytes() == (tmp_path / f"b{ext}").read_bytes()


def test_keygen_128s_pk_size(tmp_path):
    assert main(["keygen", "--paramset", "128s", "--seed", "11" * 48, "--out", str(tmp_path / "k")]) == 0
    assert len((tmp_path / "k.pk").read_bytes()) == 8 + 32
    assert len((tmp_path / "k.sk").read_bytes()) == 8 + 64


def test_toy_needs_flag(tmp_path):
    assert main(["keygen", "--paramset", "toy", "--out", str(tmp_path / "k")]) == 2


def test_bogus_paramset(tmp_path, capsys):
    assert main(["keygen", "--paramset", "bogus", "--out", str(tmp_path / "k")]) == 2
    assert "128s" in capsys.readouterr().err


@pytest.mark.parametrize("seed", ["zz", "00" * 47])
def test_bad_seed(tmp_path, seed):
    assert main(["keygen", "--paramset", "toy", "--unsafe-toy", "--seed", seed, "--out", str(tmp_path / "k")]) == 2


def test_missing_arguments():
    assert main(["sign"]) == 2
    assert main([]) == 2


def test_sign_verify(keys, capsys):
    k = keys
    assert main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "s1")]) == 0
    assert main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "s2")]) == 0
    assert (k / "s1").read_bytes() == (k / "s2").read_bytes()
    assert len(decode((k / "s1").read_bytes()).body) == 1872
    assert main(["verify", str(k / "k.pk"), str(k / "msg"), str(k / "s1")]) == 0
    assert "valid" in capsys.readouterr().out


def test_flipped_byte_is_invalid(keys):
    k = keys
    main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "s")])
    raw = bytearray((k / "s").read_bytes())
    raw[100] ^= 0x01
    (k / "s").write_bytes(bytes(raw))
    assert main(["verify", str(k / "k.pk"), str(k / "msg"), str(k / "s")]) == 1


def test_randomized(keys):
    k = keys
    main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "a"), "--randomized"])
    main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "b"), "--randomized"])
    assert (k / "a").read_bytes() != (k / "b").read_bytes()
    assert main(["verify", str(k / "k.pk"), str(k / "msg"), str(k / "a")]) == 0


def test_hex_format(keys):
    k = keys
    assert main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "s.hex"), "--format", "hex"]) == 0
    assert main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "s.bin")]) == 0
    assert bytes.fromhex((k / "s.hex").read_text()) == (k / "s.bin").read_bytes()
    assert main(["verify", str(k / "k.pk"), str(k / "msg"), str(k / "s.hex")]) == 0


def test_truncated_key(keys):
    k = keys
    (k / "bad.sk").write_bytes((k / "k.sk").read_bytes()[:-3])
    assert main(["sign", str(k / "bad.sk"), str(k / "msg"), "--out", str(k / "s")]) == 4


def test_missing_file(keys):
    assert main(["sign", str(keys / "nope.sk"), str(keys / "msg"), "--out", str(keys / "s")]) == 3


def test_header_mismatch(keys):
    k = keys
    main(["keygen", "--paramset", "toy", "--unsafe-toy", "--backend", "sha256", "--seed", SEED,
          "--out", str(k / "h")])
    main(["sign", str(k / "h.sk"), str(k / "msg"), "--out", str(k / "hs")])
    assert main(["verify", str(k / "k.pk"), str(k / "msg"), str(k / "hs")]) == 4


def test_kind_mismatch(keys):
    k = keys
    assert main(["verify", str(k / "k.pk"), str(k / "msg"), str(k / "k.sk")]) == 4


def test_stdin(keys):
    k = keys
    run = [sys.executable, "-m", "sphincs_streebog"]
    out = subprocess.run(run + ["sign", str(k / "k.sk"), "-", "--out", str(k / "s")],
                         input=b"hello world", capture_output=True)
    assert out.returncode == 0, out.stderr
    main(["sign", str(k / "k.sk"), str(k / "msg"), "--out", str(k / "s_file")])
    assert (k / "s").read_bytes() == (k / "s_file").read_bytes()
    ok = subprocess.run(run + ["verify", str(k / "k.pk"), "-", str(k / "s")], input=b"hello world",
                        capture_output=True)
    assert ok.returncode == 0
    bad = subprocess.run(run + ["verify", str(k / "k.pk"), "-", str(k / "s")], input=b"hello", capture_output=True)
    assert bad.returncode == 1


def test_bench_command(tmp_path, capsys):
    assert main(["bench", "--paramset", "toy", "--backend", "sha256", "--iterations", "3",
                 "--csv", str(tmp_path / "b.csv")]) == 0
    assert (tmp_path / "b.csv").read_text().startswith("paramset,backend,operation")
    assert "| toy |" in capsys.readouterr().out
    assert main(["bench", "--paramset", "nope"]) == 2
    assert main(["bench", "--paramset", "toy", "--iterations", "2"]) == 2
