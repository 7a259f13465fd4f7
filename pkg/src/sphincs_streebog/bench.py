"""Timing harness for keygen, sign and verify under both hash backends.

Hash calls are counted as whole hash-function evaluations (one per digest
produced, HMAC counting two), read from the backend's counter.  Closed-form
predictions of the same counts live in :func:`predicted_calls`.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass

from .address import Adrs, fors_node
from .fors import fors_pk_from_sig
from .hash_core import BACKEND_IDS, get_backend
from .params import ParamSet, paramset_lookup
from .hypertree import xmss_pk_from_sig
from .sphincs import PublicKey, Signature, keygen, sign, verify
from .thash import TweakContext, h_msg, split_digest
from .wots import base_w

__all__ = [
    "BenchRecord",
    "CSV_COLUMNS",
    "OPERATIONS",
    "parse_csv",
    "predicted_calls",
    "render_csv",
    "render_markdown",
    "render_report",
    "expand",
    "bench_inputs",
    "run_bench",
    "verify_chain_steps",
]

OPERATIONS = ("keygen", "sign", "verify")
CSV_COLUMNS = ("paramset", "backend", "operation", "iterations", "median_ms", "mean_ms",
               "stddev_ms", "hash_calls")


@dataclass(frozen=True)
class BenchRecord:
    paramset: str
    backend: str
    operation: str
    iterations: int
    median_ms: float
    mean_ms: float
    stddev_ms: float
    hash_calls: int
    threads: int = 1


def bench_inputs(p: ParamSet, seed: int) -> tuple[bytes, bytes]:
    """Fixed entropy and a 64-byte message for one parameter set."""
    rng = random.Random(f"{seed}:{p.name}")
    return rng.randbytes(3 * p.n), rng.randbytes(64)


def _timed(fn, iterations: int, backend) -> tuple[list[float], int]:
    fn()
    times, calls = [], set()
    for _ in range(iterations):
        before = backend.calls
        t0 = time.perf_counter()
        fn()
        times.append((time.perf_counter() - t0) * 1000.0)
        calls.add(backend.calls - before)
    if len(calls) != 1:
        raise RuntimeError(f"hash-call count varied between identical runs: {sorted(calls)}")
    return times, calls.pop()


def run_bench(paramsets, backends, iterations: int = 10, seed: int = 0, workers: int = 1,
              progress=None) -> list[BenchRecord]:
    """One warm-up then ``iterations`` timed runs per (set, backend, operation).

    Every backend sees the same entropy and message for a given set.
    """
    if iterations < 3:
        raise ValueError("iterations must be at least 3")
    params = [paramset_lookup(x) if isinstance(x, str) else x for x in paramsets]
    records = []
    for p in params:
        entropy, msg = bench_inputs(p, seed)
        for bid in backends:
            backend = get_backend(bid)
            sk, pk = keygen(p, backend, entropy, workers=workers)
            sig = sign(sk, msg, workers=workers)
            ops = {
                "keygen": lambda: keygen(p, backend, entropy, workers=workers),
                "sign": lambda: sign(sk, msg, workers=workers),
                "verify": lambda: verify(pk, msg, sig),
            }
            for op in OPERATIONS:
                times, calls = _timed(ops[op], iterations, backend)
                rec = BenchRecord(p.name, backend.id, op, iterations, statistics.median(times),
                                  statistics.fmean(times), statistics.stdev(times), calls, workers)
                records.append(rec)
                if progress is not None:
                    progress(rec)
    return records


# --------------------------------------------------------------------------
# Closed-form hash-call counts
# --------------------------------------------------------------------------

def _thash_cost(n_bytes: int, out_len: int = 32) -> int:
    """MGF1 blocks for the mask plus the final digest."""
    return -(-n_bytes // out_len) + 1


def _leaf_cost(p: ParamSet) -> int:
    """PRF for each chain, w-1 F steps per chain, then the T_len compression."""
    return p.len + p.len * (p.w - 1) * _thash_cost(p.n) + _thash_cost(p.len * p.n)


def _subtree_cost(p: ParamSet) -> int:
    leaves = 1 << p.tree_height
    return leaves * _leaf_cost(p) + (leaves - 1) * _thash_cost(2 * p.n)


def _hmsg_cost(p: ParamSet) -> int:
    return 1 + -(-p.m // 32)


def _fors_verify_cost(p: ParamSet) -> int:
    return p.k * _thash_cost(p.n) + p.k * p.a * _thash_cost(2 * p.n) + _thash_cost(p.k * p.n)


def predicted_calls(p: ParamSet, operation: str, chain_steps: int | None = None) -> int:
    """Hash evaluations for one operation.

    Signing regenerates every subtree on the signing path in full (the
    signing leaf walks each chain to its end as well), so its count is
    data-independent.  Verification walks ``chain_steps`` F calls in total
    over all d WOTS signatures, which depends on the message; pass it in.
    """
    if operation == "keygen":
        return _subtree_cost(p)
    if operation == "sign":
        hmac_cost = 2
        fors_trees = p.k * ((1 << p.a) * (1 + _thash_cost(p.n)) + ((1 << p.a) - 1) * _thash_cost(2 * p.n))
        return hmac_cost + _hmsg_cost(p) + fors_trees + _fors_verify_cost(p) + p.d * _subtree_cost(p)
    if operation == "verify":
        if chain_steps is None:
            raise ValueError("verify needs the number of chain steps")
        per_layer = _thash_cost(p.len * p.n) + p.tree_height * _thash_cost(2 * p.n)
        return (_hmsg_cost(p) + _fors_verify_cost(p) + p.d * per_layer
                + chain_steps * _thash_cost(p.n))
    raise ValueError(f"unknown operation {operation!r}")


def verify_chain_steps(pk: PublicKey, message: bytes, sig: Signature) -> int:
    """Total F steps a verification of ``sig`` will take, from its layer messages.

    Uses a private backend so the caller's counter is left alone.
    """
    p = pk.params
    ctx = TweakContext(get_backend(pk.backend.id), pk.pk_seed)
    digest = h_msg(ctx, sig.randomizer, pk.pk_root, message, p.m)
    indices, tree, leaf = split_digest(p, digest)
    node = fors_pk_from_sig(p, ctx, sig.fors_sig, indices, fors_node(tree, leaf, 0, 0))
    steps = 0
    for layer, xsig in enumerate(sig.ht_sig.layers):
        steps += sum(p.w - 1 - v for v in base_w(p, node))
        node = xmss_pk_from_sig(p, ctx, leaf, xsig, node, Adrs(layer, tree))
        leaf = tree & ((1 << p.tree_height) - 1)
        tree >>= p.tree_height
    return steps


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def render_csv(records) -> str:
    if not records:
        raise ValueError("no benchmark records to report")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.paramset, r.backend, r.operation, r.iterations, _fmt(r.median_ms),
                         _fmt(r.mean_ms), _fmt(r.stddev_ms), r.hash_calls])
    return buf.getvalue()


def parse_csv(text: str) -> list[BenchRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for row in rows:
        out.append(BenchRecord(row["paramset"], row["backend"], row["operation"],
                               int(row["iterations"]), float(row["median_ms"]),
                               float(row["mean_ms"]), float(row["stddev_ms"]),
                               int(row["hash_calls"])))
    return out


def render_markdown(records) -> str:
    """Per (set, op): both medians and their streebog/sha256 ratio."""
    if not records:
        raise ValueError("no benchmark records to report")
    by_key: dict[tuple[str, str], dict[str, BenchRecord]] = {}
    for r in records:
        by_key.setdefault((r.paramset, r.operation), {})[r.backend] = r
    lines = ["| paramset | operation | streebog256 median ms | sha256 median ms | ratio | hash calls |",
             "|---|---|---|---|---|---|"]
    for (pset, op), group in by_key.items():
        s, h = group.get("streebog256"), group.get("sha256")
        ratio = f"{s.median_ms / h.median_ms:.3f}" if s and h and h.median_ms > 0 else "n/a"
        calls = "/".join(str(group[b].hash_calls) for b in BACKEND_IDS if b in group)
        lines.append(f"| {pset} | {op} | {_or_na(s)} | {_or_na(h)} | {ratio} | {calls} |")
    return "\n".join(lines) + "\n"


def _or_na(r: BenchRecord | None) -> str:
    return f"{r.median_ms:.3f}" if r else "n/a"


def render_report(records) -> str:
    """CSV block, blank line, Markdown comparison table."""
    return render_csv(records) + "\n" + render_markdown(records)


def expand(selection: str, universe) -> list[str]:
    """``"all"`` or a comma list, validated against ``universe``."""
    if selection == "all":
        return list(universe)
    names = [x.strip() for x in selection.split(",") if x.strip()]
    bad = [x for x in names if x not in universe]
    if bad or not names:
        raise ValueError(f"unknown name(s) {', '.join(bad) or selection!r}; valid: {', '.join(universe)}")
    return names
