"""Pell hyperbola groups, Redei-function exponentiation and ElGamal-style encryption."""

from .field import FieldContext, FieldElement, PellError, gen_context
from .param_group import ALPHA, Parameter, param_mul, param_pow_more
from .pell_group import ConicParams, PellPoint, brahmagupta, point_pow
from .pke import Ciphertext, PublicKey, SchemeId, SecretKey, decrypt, encrypt, keygen

__all__ = [
    "ALPHA",
    "Ciphertext",
    "ConicParams",
    "FieldContext",
    "FieldElement",
    "Parameter",
    "PellError",
    "PellPoint",
    "PublicKey",
    "SchemeId",
    "SecretKey",
    "brahmagupta",
    "decrypt",
    "encrypt",
    "gen_context",
    "keygen",
    "param_mul",
    "param_pow_more",
    "point_pow",
]
