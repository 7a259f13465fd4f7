"""Command-line front end: keygen, sign, verify, bench.

Exit codes: 0 valid / success, 1 invalid signature, 2 usage error,
3 I/O error, 4 malformed or mismatched files.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
from pathlib import Path

from . import bench as _bench
from .fileformat import FileFormatError, Kind, TaggedBlob, decode, encode
from .hash_core import BACKEND_IDS, get_backend
from .params import PARAMSETS, SECURE_NAMES, UnknownParamSetError, paramset_lookup
from .sphincs import MalformedSignatureError, PublicKey, SecretKey, keygen, sign, verify

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO, EXIT_MALFORMED = 0, 1, 2, 3, 4

_SEED_WARNING = """\
WARNING: --seed makes the secret key a function of the given hex string.
WARNING: anyone who knows the seed can sign.  Use it for tests only.
"""


class UsageError(Exception):
    pass


class MismatchError(Exception):
    pass


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)


def _load(path: str, kind: Kind) -> TaggedBlob:
    return decode(_read(path), expect=kind)


def cmd_keygen(args) -> int:
    try:
        p = paramset_lookup(args.paramset)
    except UnknownParamSetError as exc:
        raise UsageError(str(exc)) from None
    if p.name not in SECURE_NAMES and not args.unsafe_toy:
        raise UsageError(f"parameter set {p.name!r} is insecure; pass --unsafe-toy to use it anyway")
    entropy = None
    if args.seed is not None:
        try:
            entropy = bytes.fromhex(args.seed)
        except ValueError:
            raise UsageError("--seed must be hex") from None
        if len(entropy) != 3 * p.n:
            raise UsageError(f"--seed must be {3 * p.n} bytes ({6 * p.n} hex digits) for {p.name}")
        sys.stderr.write(_SEED_WARNING)
    backend = get_backend(args.backend)
    sk, pk = keygen(p, backend, entropy, workers=args.workers)
    _write(args.out + ".pk", encode(TaggedBlob(backend.id, p.name, Kind.PK, pk.to_bytes()), args.format))
    _write(args.out + ".sk", encode(TaggedBlob(backend.id, p.name, Kind.SK, sk.to_bytes()), args.format))
    try:
        os.chmod(args.out + ".sk", 0o600)
    except OSError:
        pass
    return EXIT_OK


def _spool_stdin():
    """Signing reads the message twice, so a pipe is copied to a temp file first."""
    tmp = tempfile.TemporaryFile()
    shutil.copyfileobj(sys.stdin.buffer, tmp)
    tmp.seek(0)
    return tmp


def _open_message(path: str, seekable: bool):
    if path == "-":
        return _spool_stdin() if seekable else sys.stdin.buffer
    return open(path, "rb")


def cmd_sign(args) -> int:
    blob = _load(args.sk, Kind.SK)
    sk = SecretKey.from_bytes(blob.params, get_backend(blob.backend), blob.body)
    opt_rand = os.urandom(sk.params.n) if args.randomized else None
    with _open_message(args.msg, seekable=True) as fh:
        sig = sign(sk, fh, opt_rand, workers=args.workers)
    _write(args.out, encode(TaggedBlob(blob.backend, blob.paramset, Kind.SIG, sig.to_bytes()), args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    pk_blob = _load(args.pk, Kind.PK)
    sig_blob = _load(args.sig, Kind.SIG)
    if (pk_blob.backend, pk_blob.paramset) != (sig_blob.backend, sig_blob.paramset):
        raise MismatchError(f"public key is {pk_blob.paramset}/{pk_blob.backend} but signature is "
                            f"{sig_blob.paramset}/{sig_blob.backend}")
    pk = PublicKey.from_bytes(pk_blob.params, get_backend(pk_blob.backend), pk_blob.body)
    fh = _open_message(args.msg, seekable=False)
    try:
        ok = verify(pk, fh, sig_blob.body)
    finally:
        if fh is not sys.stdin.buffer:
            fh.close()
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_bench(args) -> int:
    try:
        sets = _bench.expand(args.paramset, tuple(PARAMSETS))
        backends = _bench.expand(args.backend, BACKEND_IDS)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.iterations < 3:
        raise UsageError("--iterations must be at least 3")

    def progress(rec):
        print(f"{rec.paramset:>5} {rec.backend:<11} {rec.operation:<6} median {rec.median_ms:10.3f} ms"
              f"  calls {rec.hash_calls}", file=sys.stderr, flush=True)

    records = _bench.run_bench(sets, backends, args.iterations, args.seed, args.workers, progress)
    if args.csv:
        _write(args.csv, _bench.render_csv(records).encode())
    sys.stdout.write(_bench.render_report(records))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sphincs-streebog", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("bin", "hex"), default="bin",
                        help="output encoding; input encoding is detected")
        sp.add_argument("--workers", type=int, default=1, help="threads for tree building")

    kg = sub.add_parser("keygen", help="generate a keypair")
    kg.add_argument("--paramset", default="128s", help=f"one of {', '.join(PARAMSETS)}")
    kg.add_argument("--backend", choices=BACKEND_IDS, default="streebog256")
    kg.add_argument("--out", required=True, metavar="PREFIX", help="writes PREFIX.pk and PREFIX.sk")
    kg.add_argument("--seed", metavar="HEX", help="3n bytes of hex; reproducible and INSECURE")
    kg.add_argument("--unsafe-toy", action="store_true", help="allow the tiny test parameter set")
    common(kg)
    kg.set_defaults(func=cmd_keygen)

    sg = sub.add_parser("sign", help="sign a file or stdin")
    sg.add_argument("sk")
    sg.add_argument("msg", nargs="?", default="-", help="message file, or - for stdin")
    sg.add_argument("--out", required=True)
    sg.add_argument("--randomized", action="store_true", help="fresh randomness in the randomizer")
    common(sg)
    sg.set_defaults(func=cmd_sign)

    vf = sub.add_parser("verify", help="check a signature; exit 0 valid, 1 invalid")
    vf.add_argument("pk")
    vf.add_argument("msg", help="message file, or - for stdin")
    vf.add_argument("sig")
    vf.set_defaults(func=cmd_verify)

    bn = sub.add_parser("bench", help="time keygen/sign/verify")
    bn.add_argument("--paramset", default="all", help="all, or a comma list")
    bn.add_argument("--backend", default="all", help="all, or a comma list")
    bn.add_argument("--iterations", type=int, default=10)
    bn.add_argument("--csv", metavar="PATH")
    bn.add_argument("--seed", type=int, default=0, help="seed for the fixed inputs")
    bn.add_argument("--workers", type=int, default=1)
    bn.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileFormatError, MalformedSignatureError, MismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
