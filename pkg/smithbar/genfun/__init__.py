"""Generating functions of tuples of symplectic maps of C^{d+1}."""

from .forms import HermitianForm, build_Qn, generating_relation_check, index_signature
from .tuples import GFTuple, OracleGF, QuadraticGF, assemble_F, build_sigma_mt
from .spectrum import (
    SpectrumSample,
    critical_spectrum,
    maslov_index_check,
    rotation_barcode,
)
from .identities import identity_suite, smith_fixed_locus_check

__all__ = [
    'HermitianForm',
    'build_Qn',
    'generating_relation_check',
    'index_signature',
    'GFTuple',
    'OracleGF',
    'QuadraticGF',
    'assemble_F',
    'build_sigma_mt',
    'SpectrumSample',
    'critical_spectrum',
    'maslov_index_check',
    'rotation_barcode',
    'identity_suite',
    'smith_fixed_locus_check',
]
