"""The parameter group P_{d,q} = F_p u {alpha} and fast exponentiation in it.

A finite parameter m stands for the class [m + t] of F_p[t]/(t^2 - d) modulo
scalars and alpha for the class [1]. The product is

    m1 . m2 = (m1 m2 + d) / (m1 + m2),   or alpha when m1 + m2 = 0,

and the line-slope parameterization maps every (generalized) Pell conic onto
this group. Powers are Redei rational functions Q_e(m, d) = A_e / B_e with
(m + t)^e = A_e + B_e t, evaluated by a square-multiply on the pair (A, B)
with a single inversion at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
import random
from typing import TypeAlias

from .field import FieldContext, FieldElement, PellError, order_cofactor_exponents, random_element
from .opcount import record_exponentiation
from .pell_group import ConicParams, PellPoint


class DegenerateIdentity(PellError):
    pass


class SingularParameter(PellError):
    pass


@dataclass(frozen=True, slots=True)
class Alpha:
    """The parameter of the identity class; sits outside F_p."""

    def __repr__(self) -> str:
        return "ALPHA"


ALPHA = Alpha()

Parameter: TypeAlias = FieldElement | Alpha


def is_alpha(u: Parameter) -> bool:
    return isinstance(u, Alpha)


@dataclass(frozen=True, slots=True)
class QuadExt:
    """x + t y in F_p[t] / (t^2 - d)."""

    x: FieldElement
    y: FieldElement
    d: FieldElement

    @classmethod
    def one(cls, d: FieldElement) -> "QuadExt":
        return cls(d.ctx.one(), d.ctx.zero(), d)

    def __mul__(self, other: "QuadExt") -> "QuadExt":
        if other.d != self.d:
            raise ValueError("cannot multiply elements of different quadratic extensions")
        return QuadExt(
            self.x * other.x + self.d * (self.y * other.y),
            self.x * other.y + self.y * other.x,
            self.d,
        )

    def __pow__(self, exponent: int) -> "QuadExt":
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        result = QuadExt.one(self.d)
        for bit in bin(exponent)[2:]:
            result = result * result
            if bit == "1":
                result = result * self
        return result

    def norm(self) -> FieldElement:
        return self.x * self.x - self.d * (self.y * self.y)


def param_mul(u: Parameter, v: Parameter, d: FieldElement) -> Parameter:
    if is_alpha(u):
        return v
    if is_alpha(v):
        return u
    total = u + v
    if not total:
        return ALPHA
    return (u * v + d) / total


def param_inverse(u: Parameter) -> Parameter:
    if is_alpha(u):
        return ALPHA
    return -u


def param_of_point(point: PellPoint, params: ConicParams) -> Parameter:
    """Slope parameter of a conic point: (x + a) / (y - b), with the two special points handled."""
    a, b = params.identity.x, params.identity.y
    if point == params.identity:
        return ALPHA
    if point.y != b:
        return (point.x + a) / (point.y - b)
    # y == b and not the identity: the point is (-a, b)
    if not a:
        raise DegenerateIdentity("(-a, b) has no parameter when the identity has a = 0")
    return -(b * params.d) / a


def point_of_param(u: Parameter, params: ConicParams) -> PellPoint:
    if is_alpha(u):
        return params.identity
    a, b, d = params.identity.x, params.identity.y, params.d
    denominator = u * u - d
    if not denominator:
        raise SingularParameter(f"m = {u} satisfies m^2 = d")
    k = (a * u + b * d) / denominator
    return PellPoint((u + u) * k - a, k + k + b)


def param_pow_more(u: Parameter, exponent: int, d: FieldElement) -> Parameter:
    """u^e for the parameter product by the modified More algorithm.

    (N, D) tracks (N + D t) = (u + t)^k; one inversion at the end. A zero
    denominator means the power is the identity class.
    """
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    record_exponentiation()
    if is_alpha(u):
        return ALPHA

    ctx = d.ctx
    numerator, denominator = ctx.one(), ctx.zero()
    for bit in bin(exponent)[2:]:
        cross = numerator * denominator
        numerator, denominator = numerator * numerator + d * (denominator * denominator), cross + cross
        if bit == "1":
            numerator, denominator = numerator * u + d * denominator, numerator + denominator * u
    if not denominator:
        return ALPHA
    return numerator / denominator


def param_pow_square_multiply(u: Parameter, exponent: int, d: FieldElement) -> Parameter:
    """Square-multiply with the direct product: one inversion per group operation."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    result: Parameter = ALPHA
    for bit in bin(exponent)[2:]:
        result = param_mul(result, result, d)
        if bit == "1":
            result = param_mul(result, u, d)
    return result


def redei_oracle(m: FieldElement, exponent: int, d: FieldElement) -> tuple[FieldElement, FieldElement]:
    """(A_e, B_e) with (m + t)^e = A_e + B_e t in the quadratic extension."""
    power = QuadExt(m, d.ctx.one(), d) ** exponent
    return power.x, power.y


def param_iso_scale(u: Parameter, s: FieldElement) -> Parameter:
    """m -> s m, an isomorphism from the d' product to the d = d' s^2 product."""
    if not s:
        raise ValueError("scale factor must be nonzero")
    if is_alpha(u):
        return ALPHA
    return s * u


def has_full_param_order(u: Parameter, ctx: FieldContext, d: FieldElement) -> bool:
    return all(not is_alpha(param_pow_more(u, exponent, d)) for exponent in order_cofactor_exponents(ctx))


def random_param_generator(ctx: FieldContext, d: FieldElement, rng: random.Random) -> FieldElement:
    """Random parameter of order p + 1 for a non-square d."""
    if d.chi() != -1:
        raise ValueError("generator search needs a non-square d")
    while True:
        candidate = random_element(ctx, rng)
        if has_full_param_order(candidate, ctx, d):
            return candidate
