"""Coefficient fields and the projective join algebra."""

from .field import Field, Scalar, RATIONALS, arith, parse_field
from .pjoin import (
    ProjClass,
    TruncatedPoly,
    associativity_check,
    binomial_identity_check,
    homological_length_join,
    pj_pullback,
    pj_pushforward,
)

__all__ = [
    'Field',
    'Scalar',
    'RATIONALS',
    'arith',
    'parse_field',
    'ProjClass',
    'TruncatedPoly',
    'associativity_check',
    'binomial_identity_check',
    'homological_length_join',
    'pj_pullback',
    'pj_pushforward',
]
