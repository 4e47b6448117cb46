"""ElGamal-style encryption over the Pell hyperbola, in three flavours.

* points      -- the group (C_d, Brahmagupta product); messages ride in y.
* params      -- the parameter group with the modified More exponentiation;
                 a message below q is itself a parameter.
* alt         -- parameters again, but each message fills both coordinates of
                 a point (x, y) and picks its own non-square d; the public key
                 lives over the smallest non-square d' and is moved to d by
                 m -> s m with s^2 = d / d'.

These are textbook, malleable ElGamal variants. They are not IND-CCA secure
and must not be used to protect real data without a proper KEM/DEM wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import random

from .field import FieldContext, FieldElement, PellError, gen_context, min_nonsquare, random_nonsquare
from .param_group import (
    Parameter,
    is_alpha,
    param_inverse,
    param_iso_scale,
    param_mul,
    param_pow_more,
    point_of_param,
    random_param_generator,
)
from .pell_group import ConicParams, PellPoint, brahmagupta, point_inverse, point_pow, random_generator

R_PAD = 8


class EncodingFailure(PellError):
    pass


class MessageTooLarge(PellError):
    pass


class SchemeMismatch(PellError):
    pass


class InvalidCiphertext(PellError):
    pass


class SchemeId(str, Enum):
    POINTS = "points"
    PARAMETERS = "params"
    ALTERNATIVE = "alt"


GroupElement = PellPoint | Parameter


@dataclass(frozen=True, slots=True)
class SchemeSetup:
    """Public parameters: modulus, d (d' for alt) and a generator of order q + 1."""

    scheme: SchemeId
    ctx: FieldContext
    d: FieldElement
    generator: GroupElement


@dataclass(frozen=True, slots=True)
class PublicKey:
    scheme: SchemeId
    ctx: FieldContext
    d: FieldElement
    generator: GroupElement
    public_elem: GroupElement

    @property
    def q(self) -> int:
        return self.ctx.p


@dataclass(frozen=True, slots=True)
class SecretKey:
    sk: int

    def __post_init__(self) -> None:
        if self.sk < 2:
            raise ValueError("secret exponent must be at least 2")


@dataclass(frozen=True, slots=True)
class Ciphertext:
    scheme: SchemeId
    c1: GroupElement
    c2: GroupElement
    d: FieldElement | None = None


def _random_exponent(ctx: FieldContext, rng: random.Random) -> int:
    return rng.randint(2, ctx.p)


def _group_pow(scheme: SchemeId, base: GroupElement, exponent: int, d: FieldElement) -> GroupElement:
    if scheme is SchemeId.POINTS:
        return point_pow(base, exponent, d)
    return param_pow_more(base, exponent, d)


def _require_scheme(expected: SchemeId, *items: PublicKey | Ciphertext) -> None:
    for item in items:
        if item.scheme is not expected:
            raise SchemeMismatch(f"expected a {expected.value} key/ciphertext, got {item.scheme.value}")


def keygen_setup(
    scheme: SchemeId,
    bits: int,
    rng: random.Random,
    *,
    ctx: FieldContext | None = None,
) -> SchemeSetup:
    if ctx is None:
        ctx = gen_context(bits, rng)
    if scheme is SchemeId.POINTS:
        d = random_nonsquare(ctx, rng)
        return SchemeSetup(scheme, ctx, d, random_generator(ctx, d, rng))
    d = min_nonsquare(ctx) if scheme is SchemeId.ALTERNATIVE else random_nonsquare(ctx, rng)
    return SchemeSetup(scheme, ctx, d, random_param_generator(ctx, d, rng))


def keygen_keys(setup: SchemeSetup, rng: random.Random) -> tuple[PublicKey, SecretKey]:
    sk = _random_exponent(setup.ctx, rng)
    public_elem = _group_pow(setup.scheme, setup.generator, sk, setup.d)
    public = PublicKey(setup.scheme, setup.ctx, setup.d, setup.generator, public_elem)
    return public, SecretKey(sk)


def keygen(
    scheme: SchemeId,
    bits: int,
    rng: random.Random,
    *,
    ctx: FieldContext | None = None,
) -> tuple[PublicKey, SecretKey]:
    return keygen_keys(keygen_setup(scheme, bits, rng, ctx=ctx), rng)


def capacity_bits(scheme: SchemeId, bits: int, r_pad: int = R_PAD) -> int:
    """Message bit length that always fits for an n-bit modulus."""
    if scheme is SchemeId.POINTS:
        return bits - 1 - r_pad
    if scheme is SchemeId.PARAMETERS:
        return bits - 1
    return 2 * bits - 2 - r_pad


def reserve_bits(scheme: SchemeId, bits: int, r_pad: int = R_PAD) -> int:
    nominal = 2 * bits if scheme is SchemeId.ALTERNATIVE else bits
    return nominal - capacity_bits(scheme, bits, r_pad)


def message_limit(scheme: SchemeId, ctx: FieldContext, r_pad: int = R_PAD) -> int:
    """Exclusive upper bound on integer messages for this modulus.

    Padded coordinates only need their smallest counter value below p, so the
    padded schemes accept ceil(p / 2^r_pad) values per coordinate. Messages
    at or above 2^capacity_bits may still raise EncodingFailure when the
    counters left below p all miss.
    """
    padded_limit = -(-ctx.p >> r_pad)
    if scheme is SchemeId.POINTS:
        return padded_limit
    if scheme is SchemeId.PARAMETERS:
        return ctx.p
    return padded_limit << (ctx.bits - 1)


def encode_point(msg: int, d: FieldElement, r_pad: int = R_PAD) -> PellPoint:
    """Point of C_d whose y is msg followed by the first working r_pad-bit counter."""
    ctx = d.ctx
    if not 0 <= msg < message_limit(SchemeId.POINTS, ctx, r_pad):
        raise MessageTooLarge(f"message does not fit below {ctx.p} with {r_pad} padding bits")
    base = msg << r_pad
    for counter in range(min(1 << r_pad, ctx.p - base)):
        y = ctx(base + counter)
        rhs = d * (y * y) + 1
        if rhs.chi() != -1:
            return PellPoint(rhs.sqrt(), y)
    raise EncodingFailure(f"no {r_pad}-bit counter puts message {msg} on the conic")


def decode_point(point: PellPoint, r_pad: int = R_PAD) -> int:
    # only y carries data, so the sign chosen for x never matters
    return int(point.y) >> r_pad


def alt_parameter(x: FieldElement, y: FieldElement) -> tuple[FieldElement, FieldElement]:
    """(m, d) with (x, y) on C_d and m its slope parameter: d = (x^2 - 1) / y^2, m = (x + 1) / y."""
    return (x + 1) / y, (x * x - 1) / (y * y)


def encode_alt(msg: int, ctx: FieldContext, r_pad: int = R_PAD) -> tuple[FieldElement, FieldElement]:
    """Split msg into (x_raw, y_raw) and return the parameter and per-message non-square d.

    x = x_raw * 2^r_pad + flag * 2^(r_pad - 1) + counter, where the flag marks a
    zero y_raw replaced by y = 1.
    """
    if not 0 <= msg < message_limit(SchemeId.ALTERNATIVE, ctx, r_pad):
        raise MessageTooLarge(f"message does not fit in two coordinates below {ctx.p}")
    y_bits = ctx.bits - 1
    x_raw, y_raw = msg >> y_bits, msg & ((1 << y_bits) - 1)
    flag = 0
    if y_raw == 0:
        y_raw, flag = 1, 1 << (r_pad - 1)

    y = ctx(y_raw)
    inv_y2 = (y * y).inverse()
    for counter in range(1 << (r_pad - 1)):
        x_value = (x_raw << r_pad) | flag | counter
        if x_value >= ctx.p:
            break
        x = ctx(x_value)
        d = (x * x - 1) * inv_y2
        if d.chi() == -1:
            return (x + 1) / y, d
    raise EncodingFailure(f"no {r_pad - 1}-bit counter gives a non-square d for message {msg}")


def decode_alt(m: Parameter, d: FieldElement, r_pad: int = R_PAD) -> int:
    point = point_of_param(m, ConicParams.classic(d))
    x, y = int(point.x), int(point.y)
    y_raw = 0 if x & (1 << (r_pad - 1)) else y
    return ((x >> r_pad) << (d.ctx.bits - 1)) | y_raw


def encrypt_points(
    msg: int,
    pk: PublicKey,
    rng: random.Random,
    *,
    r_pad: int = R_PAD,
    exponent: int | None = None,
) -> Ciphertext:
    _require_scheme(SchemeId.POINTS, pk)
    point = encode_point(msg, pk.d, r_pad)
    r = _random_exponent(pk.ctx, rng) if exponent is None else exponent
    c1 = point_pow(pk.generator, r, pk.d)
    c2 = brahmagupta(point_pow(pk.public_elem, r, pk.d), point, pk.d)
    return Ciphertext(SchemeId.POINTS, c1, c2)


def decrypt_points(ct: Ciphertext, pk: PublicKey, sk: SecretKey, *, r_pad: int = R_PAD) -> int:
    _require_scheme(SchemeId.POINTS, pk, ct)
    shared = point_pow(ct.c1, sk.sk, pk.d)
    return decode_point(brahmagupta(point_inverse(shared), ct.c2, pk.d), r_pad)


def encrypt_params(
    msg: int,
    pk: PublicKey,
    rng: random.Random,
    *,
    exponent: int | None = None,
) -> Ciphertext:
    _require_scheme(SchemeId.PARAMETERS, pk)
    if not 0 <= msg < pk.q:
        raise MessageTooLarge(f"message must be below q = {pk.q}")
    r = _random_exponent(pk.ctx, rng) if exponent is None else exponent
    c1 = param_pow_more(pk.generator, r, pk.d)
    c2 = param_mul(param_pow_more(pk.public_elem, r, pk.d), pk.ctx(msg), pk.d)
    return Ciphertext(SchemeId.PARAMETERS, c1, c2)


def decrypt_params(ct: Ciphertext, pk: PublicKey, sk: SecretKey) -> int:
    _require_scheme(SchemeId.PARAMETERS, pk, ct)
    m = param_mul(param_inverse(param_pow_more(ct.c1, sk.sk, pk.d)), ct.c2, pk.d)
    if is_alpha(m):
        raise InvalidCiphertext("ciphertext decrypts to the identity parameter")
    return int(m)


def encrypt_alt(
    msg: int,
    pk: PublicKey,
    rng: random.Random,
    *,
    r_pad: int = R_PAD,
    exponent: int | None = None,
) -> Ciphertext:
    _require_scheme(SchemeId.ALTERNATIVE, pk)
    m, d = encode_alt(msg, pk.ctx, r_pad)
    r = _random_exponent(pk.ctx, rng) if exponent is None else exponent
    # d and 1/d' are both non-squares, so d / d' always has a root
    s = (d / pk.d).sqrt()
    c1 = param_pow_more(param_iso_scale(pk.generator, s), r, d)
    c2 = param_mul(param_pow_more(param_iso_scale(pk.public_elem, s), r, d), m, d)
    return Ciphertext(SchemeId.ALTERNATIVE, c1, c2, d)


def decrypt_alt(ct: Ciphertext, pk: PublicKey, sk: SecretKey, *, r_pad: int = R_PAD) -> int:
    _require_scheme(SchemeId.ALTERNATIVE, pk, ct)
    if ct.d is None or ct.d.chi() != -1:
        raise InvalidCiphertext("alternative ciphertext must carry a non-square d")
    m = param_mul(param_inverse(param_pow_more(ct.c1, sk.sk, ct.d)), ct.c2, ct.d)
    if is_alpha(m):
        raise InvalidCiphertext("ciphertext decrypts to the identity parameter")
    return decode_alt(m, ct.d, r_pad)


def encrypt(msg: int, pk: PublicKey, rng: random.Random, *, exponent: int | None = None) -> Ciphertext:
    if pk.scheme is SchemeId.POINTS:
        return encrypt_points(msg, pk, rng, exponent=exponent)
    if pk.scheme is SchemeId.PARAMETERS:
        return encrypt_params(msg, pk, rng, exponent=exponent)
    return encrypt_alt(msg, pk, rng, exponent=exponent)


def decrypt(ct: Ciphertext, pk: PublicKey, sk: SecretKey) -> int:
    if pk.scheme is SchemeId.POINTS:
        return decrypt_points(ct, pk, sk)
    if pk.scheme is SchemeId.PARAMETERS:
        return decrypt_params(ct, pk, sk)
    return decrypt_alt(ct, pk, sk)


def block_bytes(scheme: SchemeId, bits: int) -> int:
    """Data bytes per block; one extra marker byte keeps leading zeros intact."""
    size = capacity_bits(scheme, bits) // 8 - 1
    if size < 1:
        raise MessageTooLarge(f"a {bits}-bit {scheme.value} key cannot carry byte messages")
    return size


def message_to_blocks(data: bytes, scheme: SchemeId, bits: int) -> list[int]:
    size = block_bytes(scheme, bits)
    chunks = [data[start : start + size] for start in range(0, len(data), size)] or [b""]
    return [int.from_bytes(b"\x01" + chunk, "big") for chunk in chunks]


def blocks_to_message(blocks: list[int]) -> bytes:
    parts: list[bytes] = []
    for block in blocks:
        raw = block.to_bytes((block.bit_length() + 7) // 8, "big")
        if not raw or raw[0] != 1:
            raise EncodingFailure("decrypted block lacks its marker byte")
        parts.append(raw[1:])
    return b"".join(parts)


def encrypt_bytes(data: bytes, pk: PublicKey, rng: random.Random) -> list[Ciphertext]:
    return [encrypt(block, pk, rng) for block in message_to_blocks(data, pk.scheme, pk.ctx.bits)]


def decrypt_bytes(cts: list[Ciphertext], pk: PublicKey, sk: SecretKey) -> bytes:
    return blocks_to_message([decrypt(ct, pk, sk) for ct in cts])
