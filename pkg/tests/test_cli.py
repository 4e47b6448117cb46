from __future__ import annotations

import csv
import random

import pytest

from pell_pke.main import main, parse_args
from pell_pke.pke import SchemeId


def _keygen(tmp_path, scheme: str, seed: int = 1):
    pk_path, sk_path = tmp_path / f"{scheme}.pk", tmp_path / f"{scheme}.sk"
    exit_code = main(
        ["keygen", "--scheme", scheme, "--bits", "64", "--out-pk", str(pk_path), "--out-sk", str(sk_path), "--seed", str(seed)]
    )
    assert exit_code == 0
    return pk_path, sk_path


@pytest.mark.parametrize("scheme", ["points", "params", "alt"])
def test_keygen_encrypt_decrypt_pipeline(tmp_path, capsys, scheme: str) -> None:
    pk_path, sk_path = _keygen(tmp_path, scheme)
    assert pk_path.read_bytes().startswith(f"pell/1 pk {scheme}\n".encode())
    assert sk_path.read_bytes().startswith(f"pell/1 sk {scheme}\nsk=".encode())

    message = bytes(random.Random(scheme).randrange(256) for _ in range(100))
    plain, cipher, recovered = tmp_path / "msg.bin", tmp_path / "msg.ct", tmp_path / "msg.out"
    plain.write_bytes(message)

    assert main(["encrypt", "--pk", str(pk_path), "--in", str(plain), "--out", str(cipher)]) == 0
    assert cipher.read_bytes().count(f"pell/1 ct {scheme}".encode()) > 1
    assert main(["decrypt", "--pk", str(pk_path), "--sk", str(sk_path), "--in", str(cipher), "--out", str(recovered)]) == 0
    assert recovered.read_bytes() == message
    assert "Wrote decrypted message" in capsys.readouterr().out


def test_empty_message_round_trip(tmp_path) -> None:
    pk_path, sk_path = _keygen(tmp_path, "params")
    plain, cipher, recovered = tmp_path / "empty", tmp_path / "empty.ct", tmp_path / "empty.out"
    plain.write_bytes(b"")
    assert main(["encrypt", "--pk", str(pk_path), "--in", str(plain), "--out", str(cipher), "--seed", "3"]) == 0
    assert main(["decrypt", "--pk", str(pk_path), "--sk", str(sk_path), "--in", str(cipher), "--out", str(recovered)]) == 0
    assert recovered.read_bytes() == b""


def test_seeded_keygen_is_reproducible(tmp_path) -> None:
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    first = _keygen(tmp_path / "a", "points", seed=5)
    second = _keygen(tmp_path / "b", "points", seed=5)
    assert first[0].read_bytes() == second[0].read_bytes()
    assert first[1].read_bytes() == second[1].read_bytes()


def test_sizes_prints_table(capsys) -> None:
    assert main(["sizes", "--bits", "128"]) == 0
    out = capsys.readouterr().out
    assert "(4n)" in out
    assert "(2n)" in out
    assert "(3n)" in out


def test_bench_writes_csv(tmp_path, capsys) -> None:
    output = tmp_path / "bench.csv"
    exit_code = main(
        ["bench", "--schemes", "points,params,alt", "--bits", "64", "--reps", "1", "--csv", str(output), "--no-tui"]
    )
    assert exit_code == 0
    with output.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 3 * 1 * 5
    assert {row["operation"] for row in rows} == {"keygen", "keygen_setup", "keygen_keys", "encrypt", "decrypt"}
    assert "Wrote 15 bench row(s)" in capsys.readouterr().out


def test_bench_defaults() -> None:
    args = parse_args(["bench", "--bits", "64,128", "--csv", "out.csv"])
    assert args.schemes == list(SchemeId)
    assert args.bits == [64, 128]
    assert args.reps == 10
    assert args.seed == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["keygen", "--scheme", "rsa", "--bits", "64", "--out-pk", "a", "--out-sk", "b"],
        ["bench", "--bits", "64", "--reps", "0", "--csv", "out.csv"],
        ["bench", "--bits", "sixty", "--csv", "out.csv"],
        ["bench", "--schemes", ",", "--bits", "64", "--csv", "out.csv"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(argv: list[str], capsys) -> None:
    assert main(argv) == 1
    assert "Error:" in capsys.readouterr().err


def test_too_small_modulus_exits_1(tmp_path, capsys) -> None:
    argv = ["keygen", "--scheme", "params", "--bits", "4", "--out-pk", str(tmp_path / "pk"), "--out-sk", str(tmp_path / "sk")]
    assert main(argv) == 1
    assert "at least 8" in capsys.readouterr().err


def test_corrupt_key_exits_2(tmp_path, capsys) -> None:
    pk_path = tmp_path / "bad.pk"
    pk_path.write_bytes(b"pell/1 pk params\nq=0B\n")
    plain = tmp_path / "msg"
    plain.write_bytes(b"hello")
    assert main(["encrypt", "--pk", str(pk_path), "--in", str(plain), "--out", str(tmp_path / "ct")]) == 2
    err = capsys.readouterr().err
    assert err.startswith("Error: line 2:")


def test_missing_file_exits_2(tmp_path, capsys) -> None:
    assert main(["encrypt", "--pk", str(tmp_path / "missing.pk"), "--in", str(tmp_path / "x"), "--out", str(tmp_path / "y")]) == 2
    assert "Error:" in capsys.readouterr().err


def test_mismatched_keys_exit_2(tmp_path, capsys) -> None:
    points_pk, _ = _keygen(tmp_path, "points")
    _, params_sk = _keygen(tmp_path, "params")
    plain, cipher = tmp_path / "msg", tmp_path / "msg.ct"
    plain.write_bytes(b"hello")
    assert main(["encrypt", "--pk", str(points_pk), "--in", str(plain), "--out", str(cipher)]) == 0
    argv = ["decrypt", "--pk", str(points_pk), "--sk", str(params_sk), "--in", str(cipher), "--out", str(tmp_path / "out")]
    assert main(argv) == 2
    assert "secret key is for params" in capsys.readouterr().err
