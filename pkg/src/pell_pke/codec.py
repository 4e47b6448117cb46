"""Text wire format for keys and ciphertexts.

A record is a header line followed by one `label=hex` line per field::

    pell/1 pk params
    q=f1...
    d=3a...
    g=...
    h=...

Hex is lowercase big-endian without leading zeros ("0" for zero), every line
ends in a newline, and the labels appear in a fixed order per (kind, scheme).
A parameter is stored as an integer in [0, q] where q stands for alpha.
Several records may be concatenated (multi-block ciphertexts).
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
import re

from .field import FieldContext, FieldElement, PellError
from .param_group import ALPHA, Parameter, has_full_param_order, is_alpha
from .pell_group import ConicParams, PellPoint, has_full_order
from .pke import Ciphertext, PublicKey, SchemeId, SecretKey

WIRE_VERSION = 1
_HEADER_RE = re.compile(r"pell/(\d+) (\w+) (\w+)")
_FIELD_RE = re.compile(r"([a-z0-9]+)=(0|[1-9a-f][0-9a-f]*)")


class ParseError(PellError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class RecordKind(str, Enum):
    PUBLIC_KEY = "pk"
    SECRET_KEY = "sk"
    CIPHERTEXT = "ct"


FIELD_LAYOUT: dict[tuple[RecordKind, SchemeId], tuple[str, ...]] = {
    (RecordKind.PUBLIC_KEY, SchemeId.POINTS): ("q", "d", "gx", "gy", "hx", "hy"),
    (RecordKind.PUBLIC_KEY, SchemeId.PARAMETERS): ("q", "d", "g", "h"),
    (RecordKind.PUBLIC_KEY, SchemeId.ALTERNATIVE): ("p", "dprime", "g", "h"),
    (RecordKind.SECRET_KEY, SchemeId.POINTS): ("sk",),
    (RecordKind.SECRET_KEY, SchemeId.PARAMETERS): ("sk",),
    (RecordKind.SECRET_KEY, SchemeId.ALTERNATIVE): ("sk",),
    (RecordKind.CIPHERTEXT, SchemeId.POINTS): ("c1x", "c1y", "c2x", "c2y"),
    (RecordKind.CIPHERTEXT, SchemeId.PARAMETERS): ("c1", "c2"),
    (RecordKind.CIPHERTEXT, SchemeId.ALTERNATIVE): ("c1", "c2", "d"),
}

_MODULUS_LABELS = frozenset({"q", "p"})
_PARAMETER_LABELS = frozenset({"g", "h", "c1", "c2"})
VARIABLE_WIDTH_LABELS = frozenset({"dprime"})


@dataclass(frozen=True, slots=True)
class WireRecord:
    kind: RecordKind
    scheme: SchemeId
    fields: tuple[tuple[str, int], ...]
    version: int = WIRE_VERSION

    def get(self, label: str) -> int:
        for name, value in self.fields:
            if name == label:
                return value
        raise KeyError(label)

    @property
    def modulus(self) -> int | None:
        for name, value in self.fields:
            if name in _MODULUS_LABELS:
                return value
        return None


def serialize(record: WireRecord) -> bytes:
    expected = FIELD_LAYOUT[(record.kind, record.scheme)]
    labels = tuple(name for name, _ in record.fields)
    if labels != expected:
        raise ValueError(f"fields {labels} do not match the layout {expected}")
    if any(value < 0 for _, value in record.fields):
        raise ValueError("wire fields must be non-negative")

    lines = [f"pell/{record.version} {record.kind.value} {record.scheme.value}"]
    lines.extend(f"{name}={value:x}" for name, value in record.fields)
    return ("\n".join(lines) + "\n").encode("ascii")


def serialize_many(records: Iterable[WireRecord]) -> bytes:
    return b"".join(serialize(record) for record in records)


def _parse_header(line: str, line_number: int) -> tuple[int, RecordKind, SchemeId]:
    match = _HEADER_RE.fullmatch(line)
    if not match:
        raise ParseError(f"expected a 'pell/<version> <kind> <scheme>' header, got {line!r}", line_number)
    version = int(match.group(1))
    if version != WIRE_VERSION:
        raise ParseError(f"unsupported wire version {version}", line_number)
    try:
        kind = RecordKind(match.group(2))
        scheme = SchemeId(match.group(3))
    except ValueError as exc:
        raise ParseError(str(exc), line_number) from exc
    return version, kind, scheme


def _check_ranges(
    kind: RecordKind,
    fields: list[tuple[str, int, int]],
    modulus: int | None,
) -> None:
    for name, value, line_number in fields:
        if name in _MODULUS_LABELS:
            if value < 3 or value % 2 == 0:
                raise ParseError(f"{name} must be an odd prime", line_number)
            continue
        if kind is RecordKind.SECRET_KEY:
            if value < 2 or (modulus is not None and value > modulus):
                raise ParseError("secret exponent out of range", line_number)
            continue
        if modulus is None:
            continue
        limit = modulus if name in _PARAMETER_LABELS else modulus - 1
        if value > limit:
            raise ParseError(f"{name} exceeds the field modulus", line_number)


def parse_many(data: bytes, modulus: int | None = None) -> list[WireRecord]:
    """Parse one or more concatenated records.

    Values are range-checked against the record's own modulus, or against
    `modulus` for records that do not carry one (secret keys, ciphertexts).
    """
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError("wire data must be ASCII", 1) from exc
    if not text:
        raise ParseError("empty input", 1)
    if not text.endswith("\n"):
        raise ParseError("missing final newline", text.count("\n") + 1)

    lines = text[:-1].split("\n")
    records: list[WireRecord] = []
    index = 0
    while index < len(lines):
        header_number = index + 1
        version, kind, scheme = _parse_header(lines[index], header_number)
        layout = FIELD_LAYOUT[(kind, scheme)]
        index += 1

        seen: list[tuple[str, int, int]] = []
        while index < len(lines) and not lines[index].startswith("pell/"):
            line_number = index + 1
            match = _FIELD_RE.fullmatch(lines[index])
            if not match:
                raise ParseError(f"malformed field line {lines[index]!r}", line_number)
            name = match.group(1)
            if name not in layout:
                raise ParseError(f"unknown label {name!r} for {kind.value} {scheme.value}", line_number)
            if any(name == previous for previous, _, _ in seen):
                raise ParseError(f"duplicate label {name!r}", line_number)
            seen.append((name, int(match.group(2), 16), line_number))
            index += 1

        labels = tuple(name for name, _, _ in seen)
        if labels != layout:
            missing = [name for name in layout if name not in labels]
            detail = f"missing {', '.join(missing)}" if missing else f"fields out of order, expected {layout}"
            raise ParseError(detail, header_number)

        own_modulus = next((value for name, value, _ in seen if name in _MODULUS_LABELS), None)
        _check_ranges(kind, seen, own_modulus if own_modulus is not None else modulus)
        records.append(
            WireRecord(
                kind=kind,
                scheme=scheme,
                fields=tuple((name, value) for name, value, _ in seen),
                version=version,
            )
        )
    return records


def parse(data: bytes, modulus: int | None = None) -> WireRecord:
    records = parse_many(data, modulus)
    if len(records) != 1:
        raise ParseError(f"expected exactly one record, found {len(records)}", 1)
    return records[0]


def payload_bits(record: WireRecord, bits: int) -> int:
    """Payload size: n bits per field element, actual length for variable-width fields."""
    return sum(value.bit_length() if name in VARIABLE_WIDTH_LABELS else bits for name, value in record.fields)


def _encode_parameter(u: Parameter, q: int) -> int:
    return q if is_alpha(u) else int(u)


def _decode_parameter(value: int, ctx: FieldContext) -> Parameter:
    return ALPHA if value == ctx.p else ctx(value)


def record_from_public_key(pk: PublicKey) -> WireRecord:
    q = pk.q
    if pk.scheme is SchemeId.POINTS:
        g, h = pk.generator, pk.public_elem
        values = (q, int(pk.d), int(g.x), int(g.y), int(h.x), int(h.y))
    else:
        values = (q, int(pk.d), _encode_parameter(pk.generator, q), _encode_parameter(pk.public_elem, q))
    layout = FIELD_LAYOUT[(RecordKind.PUBLIC_KEY, pk.scheme)]
    return WireRecord(RecordKind.PUBLIC_KEY, pk.scheme, tuple(zip(layout, values)))


def public_key_from_record(record: WireRecord) -> PublicKey:
    if record.kind is not RecordKind.PUBLIC_KEY:
        raise ParseError(f"expected a public key record, got {record.kind.value}", 1)
    try:
        ctx = FieldContext.from_prime(record.modulus)
    except ValueError as exc:
        raise ParseError(str(exc), 2) from exc

    values = [value for _, value in record.fields]
    d = ctx(values[1])
    if d.chi() != -1:
        raise ParseError("public key d must be a non-square", 3)
    if record.scheme is SchemeId.POINTS:
        conic = ConicParams.classic(d)
        generator: PellPoint | Parameter = conic.point(values[2], values[3])
        public_elem: PellPoint | Parameter = conic.point(values[4], values[5])
        if not has_full_order(generator, ctx, d):
            raise ParseError("public key generator must have order q + 1", 4)
        if public_elem == conic.identity:
            raise ParseError("public key element must not be the identity", 6)
    else:
        generator = _decode_parameter(values[2], ctx)
        public_elem = _decode_parameter(values[3], ctx)
        if not has_full_param_order(generator, ctx, d):
            raise ParseError("public key generator must have order q + 1", 4)
        if is_alpha(public_elem):
            raise ParseError("public key element must not be alpha", 5)
    return PublicKey(record.scheme, ctx, d, generator, public_elem)


def record_from_secret_key(sk: SecretKey, scheme: SchemeId) -> WireRecord:
    return WireRecord(RecordKind.SECRET_KEY, scheme, (("sk", sk.sk),))


def secret_key_from_record(record: WireRecord) -> SecretKey:
    if record.kind is not RecordKind.SECRET_KEY:
        raise ParseError(f"expected a secret key record, got {record.kind.value}", 1)
    return SecretKey(record.get("sk"))


def record_from_ciphertext(ct: Ciphertext, q: int) -> WireRecord:
    if ct.scheme is SchemeId.POINTS:
        values: tuple[int, ...] = (int(ct.c1.x), int(ct.c1.y), int(ct.c2.x), int(ct.c2.y))
    else:
        values = (_encode_parameter(ct.c1, q), _encode_parameter(ct.c2, q))
        if ct.scheme is SchemeId.ALTERNATIVE:
            values += (int(ct.d),)
    layout = FIELD_LAYOUT[(RecordKind.CIPHERTEXT, ct.scheme)]
    return WireRecord(RecordKind.CIPHERTEXT, ct.scheme, tuple(zip(layout, values)))


def ciphertext_from_record(record: WireRecord, pk: PublicKey) -> Ciphertext:
    if record.kind is not RecordKind.CIPHERTEXT:
        raise ParseError(f"expected a ciphertext record, got {record.kind.value}", 1)
    ctx = pk.ctx
    values = [value for _, value in record.fields]
    if record.scheme is SchemeId.POINTS:
        conic = ConicParams.classic(pk.d)
        return Ciphertext(record.scheme, conic.point(values[0], values[1]), conic.point(values[2], values[3]))
    d: FieldElement | None = ctx(values[2]) if record.scheme is SchemeId.ALTERNATIVE else None
    return Ciphertext(record.scheme, _decode_parameter(values[0], ctx), _decode_parameter(values[1], ctx), d)
