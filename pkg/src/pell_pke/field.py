"""Prime-field arithmetic and the number theory the conic groups are built on.

Elements are immutable `FieldElement` values bound to a `FieldContext`
(the modulus p and, for generated contexts, the prime p' with p = 2p' - 1).
Operators follow the usual ring syntax; plain ints are accepted on either side
and reduced into the field.

`pow(0, 0)` is 1 by convention.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
import random

from .opcount import record_inversion, record_multiplication

MILLER_RABIN_ROUNDS = 64
MIN_CONTEXT_BITS = 8
_FACTORIZATION_LIMIT = 2**40


class PellError(ValueError):
    """Base class for every domain error raised by this package."""


class ZeroInverse(PellError):
    pass


class NotASquare(PellError):
    pass


def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for number in range(2, int(limit**0.5) + 1):
        if flags[number]:
            flags[number * number :: number] = bytearray(len(flags[number * number :: number]))
    return tuple(index for index, flag in enumerate(flags) if flag)


_SMALL_PRIMES = _sieve(2000)


@dataclass(frozen=True, slots=True)
class FieldContext:
    p: int
    p_prime: int | None = None

    def __post_init__(self) -> None:
        if self.p < 3 or self.p % 2 == 0:
            raise ValueError(f"field modulus must be an odd prime, got {self.p}")
        if self.p_prime is not None and 2 * self.p_prime - 1 != self.p:
            raise ValueError(f"p' = {self.p_prime} does not satisfy p = 2p' - 1 for p = {self.p}")

    @classmethod
    def from_prime(cls, p: int) -> "FieldContext":
        """Context for an explicit prime; p' is recorded only when (p + 1) / 2 is prime."""
        checker = random.Random(p)
        if not is_probable_prime(p, checker):
            raise ValueError(f"{p} is not prime")
        half = (p + 1) // 2
        return cls(p=p, p_prime=half if is_probable_prime(half, checker) else None)

    @property
    def bits(self) -> int:
        return self.p.bit_length()

    @property
    def group_order(self) -> int:
        """Order p + 1 of the Pell group for a non-square d."""
        return self.p + 1

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> Iterator["FieldElement"]:
        for value in range(self.p):
            yield FieldElement(value, self)


@dataclass(frozen=True, slots=True, eq=False)
class FieldElement:
    """Canonical residue modulo ctx.p.

    Compares equal to any int congruent to it, but hashes like its canonical
    value, so only ints in [0, p) find it in a set or dict.
    """

    value: int
    ctx: FieldContext

    def _coerce(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.ctx.p != self.ctx.p:
                raise ValueError(f"mixed moduli {self.ctx.p} and {other.ctx.p}")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def _wrap(self, value: int) -> "FieldElement":
        return FieldElement(value % self.ctx.p, self.ctx)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.ctx.p == other.ctx.p
        if isinstance(other, int):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        return self._wrap(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        return self._wrap(self.value - self._coerce(other))

    def __rsub__(self, other: "FieldElement | int") -> "FieldElement":
        return self._wrap(self._coerce(other) - self.value)

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        record_multiplication()
        return self._wrap(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return self._wrap(-self.value)

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        return self * self._wrap(self._coerce(other)).inverse()

    def __rtruediv__(self, other: "FieldElement | int") -> "FieldElement":
        return self._wrap(self._coerce(other)) * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** -exponent
        return self._wrap(pow(self.value, exponent, self.ctx.p))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.value} mod {self.ctx.p})"

    def __str__(self) -> str:
        return str(self.value)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroInverse(f"0 has no inverse modulo {self.ctx.p}")
        record_inversion()
        return self._wrap(pow(self.value, -1, self.ctx.p))

    def chi(self) -> int:
        """Quadratic character by Euler's criterion: 0, +1 or -1."""
        if self.value == 0:
            return 0
        return 1 if pow(self.value, (self.ctx.p - 1) // 2, self.ctx.p) == 1 else -1

    def is_square(self) -> bool:
        return self.chi() != -1

    def sqrt(self) -> "FieldElement":
        """Square root by Tonelli-Shanks; the smaller of the two roots is returned."""
        if self.chi() == -1:
            raise NotASquare(f"{self.value} is not a square modulo {self.ctx.p}")
        root = _tonelli_shanks(self.value, self.ctx.p)
        return self._wrap(min(root, self.ctx.p - root))


def _tonelli_shanks(a: int, p: int) -> int:
    if a == 0:
        return 0
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1

    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1

    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, walker = 0, t
        while walker != 1:
            walker = walker * walker % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def is_probable_prime(n: int, rng: random.Random, rounds: int = MILLER_RABIN_ROUNDS) -> bool:
    """Trial division by small primes, then Miller-Rabin with random bases."""
    if n < 2:
        return False
    for prime in _SMALL_PRIMES:
        if n == prime:
            return True
        if n % prime == 0:
            return False
    if n < _SMALL_PRIMES[-1] ** 2:
        return True

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for _ in range(rounds):
        x = pow(rng.randrange(2, n - 1), d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _survives_sieve(n: int) -> bool:
    for prime in _SMALL_PRIMES:
        if n % prime == 0:
            return n == prime
    return True


def gen_context(bits: int, rng: random.Random) -> FieldContext:
    """Random n-bit prime p = 2p' - 1 with p' prime, so p + 1 = 2p' has no small factors but 2."""
    if bits < MIN_CONTEXT_BITS:
        raise ValueError(f"context bit length must be at least {MIN_CONTEXT_BITS}, got {bits}")

    while True:
        half = rng.getrandbits(bits - 1) | (1 << (bits - 2)) | 1
        p = 2 * half - 1
        if not (_survives_sieve(half) and _survives_sieve(p)):
            continue
        if not (is_probable_prime(half, rng, rounds=1) and is_probable_prime(p, rng, rounds=1)):
            continue
        if is_probable_prime(half, rng) and is_probable_prime(p, rng):
            return FieldContext(p=p, p_prime=half)


def random_element(ctx: FieldContext, rng: random.Random) -> FieldElement:
    return FieldElement(rng.randrange(ctx.p), ctx)


def random_nonsquare(ctx: FieldContext, rng: random.Random) -> FieldElement:
    while True:
        candidate = random_element(ctx, rng)
        if candidate.chi() == -1:
            return candidate


def min_nonsquare(ctx: FieldContext) -> FieldElement:
    value = 2
    while ctx(value).chi() != -1:
        value += 1
    return ctx(value)


def order_cofactor_exponents(ctx: FieldContext) -> tuple[int, ...]:
    """Exponents (p + 1) / l for each prime l dividing p + 1.

    An element g of a group of order p + 1 is a generator iff g^e is not the
    identity for every returned e.
    """
    order = ctx.group_order
    if ctx.p_prime is not None:
        return tuple(sorted({order // 2, order // ctx.p_prime}))
    if ctx.p > _FACTORIZATION_LIMIT:
        raise ValueError("p + 1 cannot be factored for large p without a recorded p'")

    factors: set[int] = set()
    remaining, candidate = order, 2
    while candidate * candidate <= remaining:
        while remaining % candidate == 0:
            factors.add(candidate)
            remaining //= candidate
        candidate += 1
    if remaining > 1:
        factors.add(remaining)
    return tuple(sorted(order // factor for factor in factors))
