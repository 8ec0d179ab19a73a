"""Z-periodic barcodes of Hamiltonian diffeomorphisms and their certificates."""

from .barcode import (
    FiniteOrbit,
    LocalDatum,
    PeriodicBarcode,
    assemble_N,
    beta_stats,
    betamax_validate,
    betatot_integral,
    expand_window,
    homological_count,
    smith_barcode_check,
)
from .certificate import hz_certificate

__all__ = [
    'FiniteOrbit',
    'LocalDatum',
    'PeriodicBarcode',
    'assemble_N',
    'beta_stats',
    'betamax_validate',
    'betatot_integral',
    'expand_window',
    'homological_count',
    'smith_barcode_check',
    'hz_certificate',
]
