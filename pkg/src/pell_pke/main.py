from __future__ import annotations

import argparse
from pathlib import Path
import random
import secrets
import sys

from .bench import bench, keygen_trend, measure_sizes
from .codec import (
    ciphertext_from_record,
    parse,
    parse_many,
    public_key_from_record,
    record_from_ciphertext,
    record_from_public_key,
    record_from_secret_key,
    secret_key_from_record,
    serialize,
    serialize_many,
)
from .field import PellError
from .pke import PublicKey, SchemeId, SchemeMismatch, decrypt_bytes, encrypt_bytes, keygen
from .tui import BenchProgressTui
from .writer import print_size_table, write_bench_csv


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _scheme(value: str) -> SchemeId:
    try:
        return SchemeId(value.strip())
    except ValueError:
        choices = ", ".join(scheme.value for scheme in SchemeId)
        raise argparse.ArgumentTypeError(f"unknown scheme {value!r} (choose from {choices})") from None


def _scheme_list(value: str) -> list[SchemeId]:
    return [_scheme(item) for item in value.split(",") if item.strip()]


def _int_list(value: str) -> list[int]:
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = _ArgumentParser(
        prog="pell-pke",
        description=(
            "ElGamal-style encryption over Pell hyperbolas: key generation, encryption, "
            "decryption, payload size accounting and benchmarks."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    keygen_parser = commands.add_parser("keygen", help="Generate a key pair")
    keygen_parser.add_argument("--scheme", type=_scheme, required=True, help="points, params or alt")
    keygen_parser.add_argument("--bits", type=int, required=True, help="Bit length n of the prime modulus")
    keygen_parser.add_argument("--out-pk", type=Path, required=True, help="Public key output file")
    keygen_parser.add_argument("--out-sk", type=Path, required=True, help="Secret key output file")
    keygen_parser.add_argument("--seed", type=int, default=None, help="Seed for reproducible keys")

    encrypt_parser = commands.add_parser("encrypt", help="Encrypt a file")
    encrypt_parser.add_argument("--pk", type=Path, required=True, help="Public key file")
    encrypt_parser.add_argument("--in", dest="input_path", type=Path, required=True, help="Message file (raw bytes)")
    encrypt_parser.add_argument("--out", type=Path, required=True, help="Ciphertext output file")
    encrypt_parser.add_argument("--seed", type=int, default=None, help="Seed for reproducible ciphertexts")

    decrypt_parser = commands.add_parser("decrypt", help="Decrypt a ciphertext file")
    decrypt_parser.add_argument("--pk", type=Path, required=True, help="Public key file")
    decrypt_parser.add_argument("--sk", type=Path, required=True, help="Secret key file")
    decrypt_parser.add_argument("--in", dest="input_path", type=Path, required=True, help="Ciphertext file")
    decrypt_parser.add_argument("--out", type=Path, required=True, help="Message output file (raw bytes)")

    bench_parser = commands.add_parser("bench", help="Time key generation, encryption and decryption")
    bench_parser.add_argument(
        "--schemes",
        type=_scheme_list,
        default=list(SchemeId),
        help="Comma-separated schemes (default: points,params,alt)",
    )
    bench_parser.add_argument("--bits", type=_int_list, required=True, help="Comma-separated bit lengths")
    bench_parser.add_argument("--reps", type=int, default=10, help="Fresh instances per cell (default: 10)")
    bench_parser.add_argument("--csv", type=Path, required=True, help="CSV report output file")
    bench_parser.add_argument("--seed", type=int, default=0, help="Seed for instance generation (default: 0)")
    bench_parser.add_argument("--workers", type=int, default=1, help="Cells benchmarked in parallel")
    bench_parser.add_argument("--no-tui", action="store_true", help="Disable the progress display")

    sizes_parser = commands.add_parser("sizes", help="Print serialized payload sizes for every scheme")
    sizes_parser.add_argument("--bits", type=int, required=True, help="Bit length n of the prime modulus")
    sizes_parser.add_argument("--seed", type=int, default=0, help="Seed for the instances (default: 0)")

    args = parser.parse_args(argv)
    if getattr(args, "reps", 1) < 1:
        parser.error("--reps must be at least 1")
    if args.command == "bench" and (not args.schemes or not args.bits):
        parser.error("--schemes and --bits must not be empty")
    return args


def _make_rng(seed: int | None) -> random.Random:
    return random.Random(seed) if seed is not None else secrets.SystemRandom()


def _load_public_key(path: Path) -> PublicKey:
    return public_key_from_record(parse(path.read_bytes()))


def _run_keygen(args: argparse.Namespace) -> None:
    pk, sk = keygen(args.scheme, args.bits, _make_rng(args.seed))
    args.out_pk.write_bytes(serialize(record_from_public_key(pk)))
    args.out_sk.write_bytes(serialize(record_from_secret_key(sk, args.scheme)))
    print(f"Wrote {args.scheme.value} public key to {args.out_pk}")
    print(f"Wrote {args.scheme.value} secret key to {args.out_sk}")


def _run_encrypt(args: argparse.Namespace) -> None:
    pk = _load_public_key(args.pk)
    cts = encrypt_bytes(args.input_path.read_bytes(), pk, _make_rng(args.seed))
    args.out.write_bytes(serialize_many(record_from_ciphertext(ct, pk.q) for ct in cts))
    print(f"Wrote {len(cts)} ciphertext block(s) to {args.out}")


def _run_decrypt(args: argparse.Namespace) -> None:
    pk = _load_public_key(args.pk)
    sk_record = parse(args.sk.read_bytes(), modulus=pk.q)
    if sk_record.scheme is not pk.scheme:
        raise SchemeMismatch(f"secret key is for {sk_record.scheme.value}, public key for {pk.scheme.value}")
    records = parse_many(args.input_path.read_bytes(), modulus=pk.q)
    cts = [ciphertext_from_record(record, pk) for record in records]
    args.out.write_bytes(decrypt_bytes(cts, pk, secret_key_from_record(sk_record)))
    print(f"Wrote decrypted message to {args.out}")


def _run_bench(args: argparse.Namespace) -> None:
    with BenchProgressTui(enabled=not args.no_tui) as tui:
        report = bench(args.schemes, args.bits, args.reps, args.seed, workers=args.workers, tui=tui)
    output = write_bench_csv(report, args.csv)
    print(f"Wrote {len(report.rows)} bench row(s) to {output}")
    trend = keygen_trend(report)
    if trend is not None:
        print(f"Info: {trend}")


def _run_sizes(args: argparse.Namespace) -> None:
    print_size_table(measure_sizes(args.bits, random.Random(args.seed)))


_COMMANDS = {
    "keygen": _run_keygen,
    "encrypt": _run_encrypt,
    "decrypt": _run_decrypt,
    "bench": _run_bench,
    "sizes": _run_sizes,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1

    try:
        _COMMANDS[args.command](args)
    except PellError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
