"""Command-line front end.

Subcommands cover key management (keygen), the VRF (prove, verify),
plain signatures (sign, verify-sig), entropy utilities
(entropy-fetch, pool-status), and benchmarking (bench, compare).

Exit codes are uniform: 0 for success or a valid proof/signature,
1 for operational failures and invalid proofs/signatures, 2 for
usage errors. Hex output is lowercase; hex input is parsed
case-insensitively. Secret keys live on disk as raw 32-byte seed
files so they stay portable.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import (
    BenchConfig,
    compare_sources,
    read_ops_csv,
    read_res_csv,
    run_benchmark,
    summarize,
)
from .entropy import (
    RemoteQrngClient,
    SystemEntropySource,
    default_qrng_url,
    min_entropy_estimate,
    open_file_source,
    remote_fetch,
)
from .errors import BenchAborted, QvrfError
from .vrf import (
    SEED_BYTES,
    keypair_from_seed,
    gen_keypair,
    sign,
    verify_signature_bytes,
    vrf_prove,
    vrf_verify_bytes,
)


def _hex_arg(value: str) -> bytes:
    try:
        return bytes.fromhex(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not valid hex: {value!r}") from exc


def _msg_arg(value: str) -> bytes:
    """Message bytes: inline hex, or @path for a raw file."""
    if value.startswith("@"):
        try:
            with open(value[1:], "rb") as handle:
                return handle.read()
        except OSError as exc:
            raise argparse.ArgumentTypeError(f"cannot read message file: {exc}") from exc
    return _hex_arg(value)


def _positive_int(value: str) -> int:
    number = int(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return number


def _add_source_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--entropy", metavar="PATH", help="read entropy from a binary file")
    group.add_argument("--system", action="store_true", help="use the OS entropy source")


def _resolve_source(args):
    if args.system:
        return SystemEntropySource()
    return open_file_source(args.entropy)


def _read_seed_file(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qvrf", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("keygen", help="generate a keypair")
    _add_source_flags(p)
    p.add_argument("--out", required=True, metavar="PREFIX", help="write PREFIX.sk and PREFIX.pk")

    p = sub.add_parser("prove", help="produce (beta, proof) for a message")
    p.add_argument("--sk", required=True, metavar="FILE", help="32-byte seed file")
    p.add_argument("--msg", required=True, type=_msg_arg, help="hex string or @file")
    _add_source_flags(p)

    p = sub.add_parser("verify", help="check (beta, proof) against a message")
    p.add_argument("--pk", required=True, metavar="FILE", help="32-byte public key file")
    p.add_argument("--msg", required=True, type=_msg_arg)
    p.add_argument("--beta", required=True, type=_hex_arg)
    p.add_argument("--proof", required=True, type=_hex_arg)

    p = sub.add_parser("sign", help="sign a message")
    p.add_argument("--sk", required=True, metavar="FILE")
    p.add_argument("--msg", required=True, type=_msg_arg)

    p = sub.add_parser("verify-sig", help="check a signature")
    p.add_argument("--pk", required=True, metavar="FILE")
    p.add_argument("--msg", required=True, type=_msg_arg)
    p.add_argument("--sig", required=True, type=_hex_arg)

    p = sub.add_parser("entropy-fetch", help="pull bytes from a remote QRNG into a file")
    p.add_argument("--url", default=default_qrng_url(), help="endpoint (default: $QVRF_QRNG_URL)")
    p.add_argument("--bytes", required=True, type=_positive_int, dest="n_bytes")
    p.add_argument("--out", required=True, metavar="FILE", help="append raw bytes here")
    p.add_argument("--batch", type=_positive_int, default=1024, help="bytes per request")

    p = sub.add_parser("pool-status", help="report on an entropy file")
    p.add_argument("--entropy", required=True, metavar="PATH")
    p.add_argument("--sample-bytes", type=_positive_int, default=4096)

    p = sub.add_parser("bench", help="run the latency/resource benchmark")
    _add_source_flags(p)
    p.add_argument("-n", "--n-ops", type=_positive_int, default=10_000)
    p.add_argument("--interval", type=_positive_int, default=100, help="ops between samples")
    p.add_argument("--pooled", action="store_true", help="serve entropy through a pool")
    p.add_argument("--block-size", type=_positive_int, default=4096)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--warmup", type=int, default=100)
    p.add_argument("--message-bytes", type=_positive_int, default=32)
    p.add_argument("--out", default="bench", metavar="PREFIX", help="CSV path prefix")
    p.add_argument("--config", metavar="FILE", help="JSON file of BenchConfig fields (overrides flags)")

    p = sub.add_parser("compare", help="compare two benchmark runs from their CSVs")
    p.add_argument("--qrng-ops", required=True, metavar="FILE")
    p.add_argument("--rand-ops", required=True, metavar="FILE")
    p.add_argument("--qrng-res", metavar="FILE")
    p.add_argument("--rand-res", metavar="FILE")
    p.add_argument("--json", action="store_true", help="machine-readable output")

    return parser


# ---------------------------------------------------------------------------
# Subcommand bodies (argparse has validated shapes by the time these run)
# ---------------------------------------------------------------------------


def cmd_keygen(args) -> int:
    source = _resolve_source(args)
    sk, pk = gen_keypair(source)
    with open(f"{args.out}.sk", "wb") as handle:
        handle.write(sk.seed)
    with open(f"{args.out}.pk", "wb") as handle:
        handle.write(pk.encoding)
    print(pk.encoding.hex())
    return 0


def cmd_prove(args) -> int:
    sk, _ = keypair_from_seed(_read_seed_file(args.sk))
    output, proof = vrf_prove(sk, args.msg, _resolve_source(args))
    print(f"beta={output.beta.hex()}")
    print(f"proof={proof.encode().hex()}")
    return 0


def cmd_verify(args) -> int:
    pk_encoding = _read_seed_file(args.pk)
    if vrf_verify_bytes(pk_encoding, args.msg, args.beta, args.proof):
        print("valid")
        return 0
    print("invalid")
    return 1


def cmd_sign(args) -> int:
    sk, _ = keypair_from_seed(_read_seed_file(args.sk))
    print(f"sig={sign(sk, args.msg).encode().hex()}")
    return 0


def cmd_verify_sig(args) -> int:
    pk_encoding = _read_seed_file(args.pk)
    if verify_signature_bytes(pk_encoding, args.msg, args.sig):
        print("valid")
        return 0
    print("invalid")
    return 1


def cmd_entropy_fetch(args) -> int:
    if not args.url:
        print("entropy-fetch: no --url given and QVRF_QRNG_URL is unset", file=sys.stderr)
        return 2
    client = RemoteQrngClient(args.url, batch_length=args.batch)
    written = 0
    try:
        with open(args.out, "ab") as handle:
            remaining = args.n_bytes
            while remaining > 0:
                chunk = remote_fetch(client, min(remaining, args.batch))
                handle.write(chunk)
                written += len(chunk)
                remaining -= len(chunk)
    except QvrfError as exc:
        print(f"entropy-fetch: {exc}", file=sys.stderr)
        if written:
            print(f"entropy-fetch: keeping {written} bytes already written", file=sys.stderr)
        return 1
    print(written)
    return 0


def cmd_pool_status(args) -> int:
    reader = open_file_source(args.entropy)
    sample = reader.read_bytes(min(args.sample_bytes, reader.length))
    estimate = min_entropy_estimate(sample)
    print(
        f"path={args.entropy} length={reader.length} "
        f"sample_bytes={len(sample)} min_entropy_bits_per_byte={estimate:.3f}"
    )
    return 0


def cmd_bench(args) -> int:
    if args.config:
        with open(args.config) as handle:
            config = BenchConfig(**json.load(handle))
    else:
        config = BenchConfig(
            n_ops=args.n_ops,
            source_kind="system-rand" if args.system else "file-qrng",
            entropy_path=args.entropy,
            pool_mode="pooled" if args.pooled else "unbuffered",
            block_size=args.block_size,
            workers=args.workers,
            sample_interval=args.interval,
            message_bytes=args.message_bytes,
            output_path=args.out,
            warmup_ops=args.warmup,
        )
    records, samples = run_benchmark(config)
    summary = summarize(
        records, samples, source_kind=config.source_kind, pool_mode=config.pool_mode
    )
    print(summary.text())
    return 0


def cmd_compare(args) -> int:
    qrng_records = read_ops_csv(args.qrng_ops)
    rand_records = read_ops_csv(args.rand_ops)
    qrng_samples = read_res_csv(args.qrng_res) if args.qrng_res else None
    rand_samples = read_res_csv(args.rand_res) if args.rand_res else None
    report = compare_sources(
        summarize(qrng_records, qrng_samples, source_kind="file-qrng"),
        summarize(rand_records, rand_samples, source_kind="system-rand"),
    )
    print(json.dumps(report.to_dict(), indent=2) if args.json else report.text())
    return 0


_HANDLERS = {
    "keygen": cmd_keygen,
    "prove": cmd_prove,
    "verify": cmd_verify,
    "sign": cmd_sign,
    "verify-sig": cmd_verify_sig,
    "entropy-fetch": cmd_entropy_fetch,
    "pool-status": cmd_pool_status,
    "bench": cmd_bench,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help.
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.subcommand](args)
    except BenchAborted as exc:
        print(f"qvrf: {exc} (partial results flushed)", file=sys.stderr)
        return 1
    except QvrfError as exc:
        print(f"qvrf: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError, TypeError) as exc:
        print(f"qvrf: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())
