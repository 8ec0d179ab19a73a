"""
smithbar - barcode verification engine

Exact barcodes of filtered chain complexes, Z-periodic barcodes of
Hamiltonian diffeomorphisms of CP^d, quadratic generating functions and
the projective-join algebra, with checks for every quantitative identity
relating them.

Features:
- Exact arithmetic over Q and F_p
- Barcodes, window dimensions and bottleneck distance
- Periodic barcode statistics, Smith-type checks and certificates
- Generating-function forms, Maslov jumps and rotation spectra
- Projective-join cohomology on the projective-class basis
"""

__version__ = "0.1.0"
__author__ = "smithbar developers"
