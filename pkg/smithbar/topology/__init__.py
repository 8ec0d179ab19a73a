"""Filtered chain complexes, their barcodes and bottleneck distances."""

from .complex import (
    CyclicAction,
    FilteredChainComplex,
    Generator,
    fixed_subcomplex,
    parse_complex,
    smith_dimension_check,
)
from .persistence import Bar, Barcode, compute_barcode, window_dimension
from .bottleneck import bottleneck_distance

__all__ = [
    'CyclicAction',
    'FilteredChainComplex',
    'Generator',
    'fixed_subcomplex',
    'parse_complex',
    'smith_dimension_check',
    'Bar',
    'Barcode',
    'compute_barcode',
    'window_dimension',
    'bottleneck_distance',
]
