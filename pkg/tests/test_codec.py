from __future__ import annotations

import random

import pytest

from pell_pke.codec import (
    FIELD_LAYOUT,
    ParseError,
    RecordKind,
    WireRecord,
    ciphertext_from_record,
    parse,
    parse_many,
    payload_bits,
    public_key_from_record,
    record_from_ciphertext,
    record_from_public_key,
    record_from_secret_key,
    secret_key_from_record,
    serialize,
    serialize_many,
)
from pell_pke.param_group import ALPHA
from pell_pke.pell_group import NotOnConic
from pell_pke.pke import Ciphertext, SchemeId, decrypt, encrypt, keygen


@pytest.fixture(scope="module")
def keys(ctx128):
    rng = random.Random(21)
    return {scheme: keygen(scheme, 128, rng, ctx=ctx128) for scheme in SchemeId}


def test_points_public_key_round_trip(keys) -> None:
    pk, _ = keys[SchemeId.POINTS]
    data = serialize(record_from_public_key(pk))
    assert data.startswith(b"pell/1 pk points\nq=")
    assert data.endswith(b"\n")
    assert serialize(parse(data)) == data
    assert public_key_from_record(parse(data)) == pk


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_keys_and_ciphertexts_survive_the_wire(keys, scheme: SchemeId) -> None:
    rng = random.Random(scheme.value)
    pk, sk = keys[scheme]
    restored_pk = public_key_from_record(parse(serialize(record_from_public_key(pk))))
    restored_sk = secret_key_from_record(parse(serialize(record_from_secret_key(sk, scheme)), modulus=pk.q))
    assert restored_pk == pk
    assert restored_sk == sk
    for _ in range(20):
        msg = rng.randrange(1 << 100)
        ct = encrypt(msg, pk, rng)
        record = parse(serialize(record_from_ciphertext(ct, pk.q)), modulus=pk.q)
        assert decrypt(ciphertext_from_record(record, restored_pk), restored_pk, restored_sk) == msg


def _random_record(rng: random.Random) -> WireRecord:
    kind, scheme = rng.choice(list(FIELD_LAYOUT))
    modulus = rng.getrandbits(rng.randrange(2, 300)) | 3
    fields: list[tuple[str, int]] = []
    for label in FIELD_LAYOUT[(kind, scheme)]:
        if label in ("q", "p"):
            fields.append((label, modulus))
        elif label == "sk":
            fields.append((label, rng.randrange(2, 1 << 300)))
        elif kind is RecordKind.PUBLIC_KEY:
            fields.append((label, rng.randrange(modulus)))
        else:
            fields.append((label, rng.randrange(1 << 300)))
    return WireRecord(kind, scheme, tuple(fields))


def test_random_records_round_trip() -> None:
    rng = random.Random(22)
    for _ in range(1000):
        record = _random_record(rng)
        data = serialize(record)
        assert parse(data) == record
        assert serialize(parse(data)) == data


def test_alpha_is_written_as_q(f11) -> None:
    record = record_from_ciphertext(Ciphertext(SchemeId.PARAMETERS, ALPHA, f11(3)), 11)
    assert serialize(record) == b"pell/1 ct params\nc1=b\nc2=3\n"
    assert parse(serialize(record), modulus=11).fields == (("c1", 11), ("c2", 3))


def test_zero_is_written_as_single_digit() -> None:
    record = WireRecord(RecordKind.CIPHERTEXT, SchemeId.PARAMETERS, (("c1", 0), ("c2", 255)))
    assert serialize(record) == b"pell/1 ct params\nc1=0\nc2=ff\n"


def test_serialize_rejects_wrong_layout() -> None:
    record = WireRecord(RecordKind.CIPHERTEXT, SchemeId.PARAMETERS, (("c2", 1), ("c1", 1)))
    with pytest.raises(ValueError):
        serialize(record)


@pytest.mark.parametrize(
    "data, line",
    [
        (b"pell/1 ct params\nc1=0A\nc2=3\n", 2),
        (b"pell/1 ct params\nc1=03\nc2=3\n", 2),
        (b"pell/1 ct params\nc1=1\nc3=3\n", 3),
        (b"pell/1 ct params\nc1=1\nc1=3\n", 3),
        (b"pell/1 ct params\nc1=1\n", 1),
        (b"pell/1 ct params\nc2=1\nc1=3\n", 1),
        (b"pell/2 ct params\nc1=1\nc2=3\n", 1),
        (b"pell/1 xx params\nc1=1\nc2=3\n", 1),
        (b"pell/1 ct params\nc1=1\nc2=3", 3),
        (b"hello\n", 1),
        (b"", 1),
        (b"pell/1 ct params\nc1=1\nc2=zz\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(data: bytes, line: int) -> None:
    with pytest.raises(ParseError) as excinfo:
        parse_many(data)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}:")


def test_out_of_range_values(keys) -> None:
    pk, _ = keys[SchemeId.PARAMETERS]
    q = pk.q
    with pytest.raises(ParseError) as excinfo:
        parse(f"pell/1 ct params\nc1={q + 1:x}\nc2=3\n".encode(), modulus=q)
    assert excinfo.value.line == 2
    assert parse(f"pell/1 ct params\nc1={q:x}\nc2=3\n".encode(), modulus=q).get("c1") == q

    lines = serialize(record_from_public_key(pk)).decode().splitlines()
    lines[2] = f"d={q:x}"
    with pytest.raises(ParseError) as excinfo:
        parse(("\n".join(lines) + "\n").encode())
    assert excinfo.value.line == 3

    with pytest.raises(ParseError):
        parse(f"pell/1 sk params\nsk={q + 1:x}\n".encode(), modulus=q)
    with pytest.raises(ParseError):
        parse(b"pell/1 sk params\nsk=1\n")


def test_tampered_public_keys_are_rejected(keys) -> None:
    pk, _ = keys[SchemeId.POINTS]
    record = record_from_public_key(pk)
    lines = serialize(record).decode().splitlines()
    lines[4] = f"gy={(record.get('gy') + 1) % pk.q:x}"
    with pytest.raises(NotOnConic):
        public_key_from_record(parse(("\n".join(lines) + "\n").encode()))

    square_d = WireRecord(
        RecordKind.PUBLIC_KEY,
        SchemeId.PARAMETERS,
        (("q", pk.q), ("d", 4), ("g", 2), ("h", 3)),
    )
    with pytest.raises(ParseError):
        public_key_from_record(square_d)

    composite = WireRecord(
        RecordKind.PUBLIC_KEY,
        SchemeId.PARAMETERS,
        (("q", pk.q * 3), ("d", 2), ("g", 2), ("h", 3)),
    )
    with pytest.raises(ParseError):
        public_key_from_record(composite)


def _with_field(record: WireRecord, label: str, value: int) -> WireRecord:
    fields = tuple((name, value if name == label else old) for name, old in record.fields)
    return WireRecord(record.kind, record.scheme, fields)


@pytest.mark.parametrize("scheme", [SchemeId.PARAMETERS, SchemeId.ALTERNATIVE])
def test_alpha_or_low_order_parameters_are_rejected(keys, scheme: SchemeId) -> None:
    pk, _ = keys[scheme]
    record = record_from_public_key(pk)

    forged = _with_field(_with_field(record, "g", pk.q), "h", pk.q)
    with pytest.raises(ParseError) as excinfo:
        public_key_from_record(parse(serialize(forged)))
    assert excinfo.value.line == 4

    # the parameter 0 squares to alpha
    with pytest.raises(ParseError, match="order q \\+ 1"):
        public_key_from_record(_with_field(record, "g", 0))

    with pytest.raises(ParseError) as excinfo:
        public_key_from_record(_with_field(record, "h", pk.q))
    assert excinfo.value.line == 5


def test_low_order_points_are_rejected(keys) -> None:
    pk, _ = keys[SchemeId.POINTS]
    record = record_from_public_key(pk)

    order_two = _with_field(_with_field(record, "gx", pk.q - 1), "gy", 0)
    with pytest.raises(ParseError) as excinfo:
        public_key_from_record(order_two)
    assert excinfo.value.line == 4

    identity_h = _with_field(_with_field(record, "hx", 1), "hy", 0)
    with pytest.raises(ParseError) as excinfo:
        public_key_from_record(identity_h)
    assert excinfo.value.line == 6


def test_parse_expects_a_single_record(keys) -> None:
    pk, sk = keys[SchemeId.PARAMETERS]
    rng = random.Random(23)
    blocks = [record_from_ciphertext(encrypt(index, pk, rng), pk.q) for index in range(3)]
    data = serialize_many(blocks)
    assert parse_many(data, modulus=pk.q) == blocks
    with pytest.raises(ParseError):
        parse(data, modulus=pk.q)


def test_record_kind_is_checked(keys) -> None:
    pk, sk = keys[SchemeId.PARAMETERS]
    with pytest.raises(ParseError):
        public_key_from_record(record_from_secret_key(sk, SchemeId.PARAMETERS))
    with pytest.raises(ParseError):
        secret_key_from_record(record_from_public_key(pk))


def test_params_ciphertext_hex_length(keys) -> None:
    pk, _ = keys[SchemeId.PARAMETERS]
    ct = encrypt(42, pk, random.Random(24))
    record = record_from_ciphertext(ct, pk.q)
    body = serialize(record).decode().splitlines()[1:]
    hex_chars = sum(len(line.split("=", 1)[1]) for line in body)
    assert hex_chars <= 2 * -(-128 // 4)
    assert payload_bits(record, 128) == 2 * 128


def test_payload_bits_per_scheme(keys) -> None:
    expected_ct = {SchemeId.POINTS: 4, SchemeId.PARAMETERS: 2, SchemeId.ALTERNATIVE: 3}
    expected_pk = {SchemeId.POINTS: 6, SchemeId.PARAMETERS: 4, SchemeId.ALTERNATIVE: 3}
    rng = random.Random(25)
    for scheme, (pk, sk) in keys.items():
        ct = encrypt(7, pk, rng)
        assert payload_bits(record_from_ciphertext(ct, pk.q), 128) == expected_ct[scheme] * 128
        assert payload_bits(record_from_secret_key(sk, scheme), 128) == 128
        pk_bits = payload_bits(record_from_public_key(pk), 128)
        if scheme is SchemeId.ALTERNATIVE:
            assert pk_bits == 3 * 128 + int(pk.d).bit_length()
        else:
            assert pk_bits == expected_pk[scheme] * 128
