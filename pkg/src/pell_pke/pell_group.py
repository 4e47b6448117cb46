"""Points of Pell conics x^2 - d y^2 = c and their group laws.

The classic hyperbola (c = 1, identity (1, 0)) uses the Brahmagupta product.
A generalized conic uses any of its points (a, b) as identity and the product
(1/c) (a, -b) * P * Q, where * is the classic product.

Points carry coordinates only; the owning `ConicParams` is passed to every
operation that needs d, c or the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
import random

from .field import FieldContext, FieldElement, PellError, order_cofactor_exponents, random_element
from .opcount import record_exponentiation

ENUMERATION_LIMIT = 2**16


class NotOnConic(PellError):
    pass


class BadScale(PellError):
    pass


class TooLarge(PellError):
    pass


@dataclass(frozen=True, slots=True)
class PellPoint:
    x: FieldElement
    y: FieldElement

    def conjugate(self) -> "PellPoint":
        return PellPoint(self.x, -self.y)

    def scaled(self, factor: FieldElement) -> "PellPoint":
        return PellPoint(factor * self.x, factor * self.y)


@dataclass(frozen=True, slots=True)
class ConicParams:
    d: FieldElement
    c: FieldElement
    identity: PellPoint

    def __post_init__(self) -> None:
        if not self.d or not self.c:
            raise ValueError("conic constants d and c must be nonzero")
        if not self.contains(self.identity):
            raise NotOnConic(
                f"identity ({self.identity.x}, {self.identity.y}) is not on x^2 - {self.d} y^2 = {self.c}"
            )

    @classmethod
    def classic(cls, d: FieldElement) -> "ConicParams":
        return cls(d=d, c=d.ctx.one(), identity=PellPoint(d.ctx.one(), d.ctx.zero()))

    @property
    def ctx(self) -> FieldContext:
        return self.d.ctx

    @property
    def is_classic(self) -> bool:
        return self.c == 1 and self.identity.x == 1 and self.identity.y == 0

    def contains(self, point: PellPoint) -> bool:
        x, y = point.x, point.y
        return x * x - self.d * (y * y) == self.c

    def point(self, x: FieldElement | int, y: FieldElement | int) -> PellPoint:
        """Build a point of this conic, rejecting coordinates off the curve."""
        candidate = PellPoint(self.ctx(int(x)), self.ctx(int(y)))
        if not self.contains(candidate):
            raise NotOnConic(f"({int(x)}, {int(y)}) is not on x^2 - {self.d} y^2 = {self.c}")
        return candidate


def brahmagupta(p: PellPoint, q: PellPoint, d: FieldElement) -> PellPoint:
    """Classic product (x1 x2 + d y1 y2, x1 y2 + y1 x2): five multiplications."""
    return PellPoint(
        p.x * q.x + d * (p.y * q.y),
        p.x * q.y + p.y * q.x,
    )


def _brahmagupta_square(p: PellPoint, d: FieldElement) -> PellPoint:
    cross = p.x * p.y
    return PellPoint(p.x * p.x + d * (p.y * p.y), cross + cross)


def point_inverse(p: PellPoint) -> PellPoint:
    return p.conjugate()


def gen_brahmagupta(p: PellPoint, q: PellPoint, params: ConicParams) -> PellPoint:
    if params.is_classic:
        return brahmagupta(p, q, params.d)
    shifted = brahmagupta(params.identity.conjugate(), p, params.d)
    return brahmagupta(shifted, q, params.d).scaled(params.c.inverse())


def gen_inverse(p: PellPoint, params: ConicParams) -> PellPoint:
    """Inverse for the generalized product: (1/c) (a, b) * (a, b) * (x, -y).

    The printed variant with (x, y) in the last factor does not satisfy
    P * P^-1 = (a, b); the conjugate does.
    """
    if params.is_classic:
        return point_inverse(p)
    anchor = params.identity
    doubled = brahmagupta(anchor, anchor, params.d)
    return brahmagupta(doubled, p.conjugate(), params.d).scaled(params.c.inverse())


def iso_scale(p: PellPoint, s: FieldElement, d: FieldElement, d_prime: FieldElement) -> PellPoint:
    """Isomorphism C_d -> C_d' given by (x, y) -> (x, s y), valid when d = d' s^2."""
    if d != d_prime * (s * s):
        raise BadScale(f"{d} != {d_prime} * {s}^2")
    return PellPoint(p.x, s * p.y)


def phi(p: PellPoint, params: ConicParams) -> PellPoint:
    """Isomorphism from the classic hyperbola C_d onto the generalized conic."""
    return brahmagupta(params.identity, p, params.d)


def phi_inv(p: PellPoint, params: ConicParams) -> PellPoint:
    ctx = params.ctx
    return gen_brahmagupta(PellPoint(ctx.one(), ctx.zero()), p, params)


def gen_iso(p: PellPoint, src: ConicParams, dst: ConicParams) -> PellPoint:
    """Isomorphism between two generalized conics sharing d: P -> (a', b') *_src P."""
    if src.d != dst.d:
        raise ValueError("gen_iso needs conics with the same d")
    return gen_brahmagupta(dst.identity, p, src)


def bijection_from_classic(p: PellPoint, params: ConicParams, anchor: PellPoint | None = None) -> PellPoint:
    """Set bijection C_d -> C_{c,d} (not a group morphism).

    Scales by sqrt(c) when c is a square, otherwise multiplies by a fixed
    point of the target conic (the identity unless `anchor` is given).
    """
    if params.c.chi() == 1:
        return p.scaled(params.c.sqrt())
    target = params.identity if anchor is None else anchor
    if not params.contains(target):
        raise NotOnConic("anchor point is not on the target conic")
    return brahmagupta(p, target, params.d)


def point_pow(p: PellPoint, exponent: int, d: FieldElement) -> PellPoint:
    """Left-to-right square-multiply with the Brahmagupta product."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    record_exponentiation()
    ctx = d.ctx
    result = PellPoint(ctx.one(), ctx.zero())
    for bit in bin(exponent)[2:]:
        result = _brahmagupta_square(result, d)
        if bit == "1":
            result = brahmagupta(result, p, d)
    return result


def point_pow_naive(p: PellPoint, exponent: int, d: FieldElement) -> PellPoint:
    ctx = d.ctx
    result = PellPoint(ctx.one(), ctx.zero())
    for _ in range(exponent):
        result = brahmagupta(result, p, d)
    return result


def enumerate_conic(params: ConicParams) -> list[PellPoint]:
    """Every point of the conic by scanning x; only for small fields."""
    ctx = params.ctx
    if ctx.p > ENUMERATION_LIMIT:
        raise TooLarge(f"refusing to enumerate a conic over a {ctx.bits}-bit field")

    inv_d = params.d.inverse()
    points: list[PellPoint] = []
    for x in ctx.elements():
        rhs = (x * x - params.c) * inv_d
        character = rhs.chi()
        if character == 0:
            points.append(PellPoint(x, ctx.zero()))
        elif character == 1:
            root = rhs.sqrt()
            points.append(PellPoint(x, root))
            points.append(PellPoint(x, -root))
    return points


def has_full_order(p: PellPoint, ctx: FieldContext, d: FieldElement) -> bool:
    identity = PellPoint(ctx.one(), ctx.zero())
    return all(point_pow(p, exponent, d) != identity for exponent in order_cofactor_exponents(ctx))


def _point_of_slope(m: FieldElement, d: FieldElement) -> PellPoint:
    denominator = (m * m - d).inverse()
    return PellPoint((m * m + d) * denominator, (m + m) * denominator)


def random_generator(ctx: FieldContext, d: FieldElement, rng: random.Random) -> PellPoint:
    """Random point of order p + 1 on C_d, for a non-square d."""
    if d.chi() != -1:
        raise ValueError("generator search needs a non-square d")
    while True:
        candidate = _point_of_slope(random_element(ctx, rng), d)
        if has_full_order(candidate, ctx, d):
            return candidate
