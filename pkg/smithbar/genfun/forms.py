"""
Hermitian forms on (C^{d+1})^n and their signatures.

The real inner product is <x, y> = Re sum conj(x_j) y_j, so a Hermitian
matrix A defines the quadratic map w -> <w, A w> with gradient 2 A w.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from ..core.config import get_tolerance, resolve
from ..core.errors import BorderlineEigenvalue, EvenTupleError, InputError
from ..utils.logger import get_logger

logger = get_logger(__name__)

HERMITIAN_TOL = 1e-12


def inner(x: np.ndarray, y: np.ndarray) -> float:
    """Real part of the Hermitian product, conjugate-linear in ``x``."""
    return float(np.real(np.vdot(x, y)))


@dataclass(frozen=True, eq=False)
class HermitianForm:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"form matrix must be square, got shape {m.shape}")
        scale = max(1.0, float(np.abs(m).max(initial=0.0)))
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITIAN_TOL * scale):
            raise InputError("form matrix is not Hermitian")
        object.__setattr__(self, 'matrix', (m + m.conj().T) / 2)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def evaluate(self, v: np.ndarray) -> float:
        return inner(v, self.matrix @ v)

    def gradient(self, v: np.ndarray) -> np.ndarray:
        return 2 * (self.matrix @ v)

    def real_matrix(self) -> np.ndarray:
        """Symmetric matrix of the same form on R^{2M}, in coordinates (Re v, Im v)."""
        a, b = self.matrix.real, self.matrix.imag
        return np.block([[a, -b], [b, a]])

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __add__(self, other: 'HermitianForm') -> 'HermitianForm':
        return HermitianForm(self.matrix + other.matrix)

    def __neg__(self) -> 'HermitianForm':
        return HermitianForm(-self.matrix)


def zero_form(dim: int) -> HermitianForm:
    return HermitianForm(np.zeros((dim, dim), dtype=complex))


def scalar_form(dim: int, value: float) -> HermitianForm:
    return HermitianForm(value * np.eye(dim, dtype=complex))


def classify(eigenvalues: np.ndarray, tol: Optional[float] = None) -> Tuple[int, int, int]:
    """Counts of eigenvalues below -tol, within [-tol, tol] and above tol.

    Raises:
        BorderlineEigenvalue: some eigenvalue lies in the guard band (tol, 10 tol)
    """
    tol = resolve(tol, get_tolerance)
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    mags = np.abs(eigenvalues)
    borderline = eigenvalues[(mags > tol) & (mags < 10 * tol)]
    if borderline.size:
        raise BorderlineEigenvalue(float(borderline[0]), tol)
    n_minus = int(np.sum(eigenvalues < -tol))
    n_plus = int(np.sum(eigenvalues > tol))
    return n_minus, len(eigenvalues) - n_minus - n_plus, n_plus


def index_signature(h: HermitianForm, tol: Optional[float] = None) -> Tuple[int, int, int]:
    """Complex signature (n_minus, n_zero, n_plus) of ``h``."""
    return classify(h.eigenvalues(), tol)


def real_signature(h: HermitianForm, tol: Optional[float] = None) -> Tuple[int, int, int]:
    """Real index, nullity and coindex: each complex count doubled."""
    n_minus, n_zero, n_plus = index_signature(h, tol)
    return 2 * n_minus, 2 * n_zero, 2 * n_plus


# ---------------------------------------------------------------------------
# Q_n
# ---------------------------------------------------------------------------

def qn_matrix(n: int, d: int) -> np.ndarray:
    """Hermitian matrix of v -> 1/2 sum_k <v_k, i v_{k+1}> (cyclic), any n."""
    size = d + 1
    mat = np.zeros((n * size, n * size), dtype=complex)
    eye = np.eye(size, dtype=complex)
    for k in range(n):
        j = (k + 1) % n
        mat[k * size:(k + 1) * size, j * size:(j + 1) * size] += 0.25j * eye
        mat[j * size:(j + 1) * size, k * size:(k + 1) * size] += -0.25j * eye
    return mat


def build_Qn(n: int, d: int) -> HermitianForm:
    """Generating form of the identity tuple of odd size ``n`` on (C^{d+1})^n."""
    if n < 1 or n % 2 == 0:
        raise EvenTupleError(f"generating forms need an odd tuple size, got n={n}")
    return HermitianForm(qn_matrix(n, d))


def qn_value(v: np.ndarray, n: int) -> float:
    """Q_n(v) = 1/2 sum_k <v_k, i v_{k+1}> evaluated directly on blocks."""
    blocks = np.asarray(v, dtype=complex).reshape(n, -1)
    return 0.5 * sum(inner(blocks[k], 1j * blocks[(k + 1) % n]) for k in range(n))


def qn_w_value(w: np.ndarray, n: int) -> float:
    """Q_n written in the variables w_k = (v_k + v_{k+1}) / 2, for odd ``n``."""
    blocks = np.asarray(w, dtype=complex).reshape(n, -1)
    total = 0.0
    for k in range(n):
        for l in range(k):
            total += (-1) ** (k + l) * inner(blocks[k], 1j * blocks[l])
    return 2 * total


# ---------------------------------------------------------------------------
# Generating relation
# ---------------------------------------------------------------------------

def step_map(form: HermitianForm) -> np.ndarray:
    """Linear map generated by the quadratic function w -> <w, A w>.

    Solves A(z + Phi z) = i(z - Phi z) for Phi, i.e. the Cayley transform
    (A + i)^{-1}(i - A).
    """
    eye = np.eye(form.dim, dtype=complex)
    return np.linalg.solve(form.matrix + 1j * eye, 1j * eye - form.matrix)


def symplectic_defect(phi: np.ndarray) -> float:
    """Distance of a complex-linear map from preserving <x, i y>."""
    phi = np.asarray(phi, dtype=complex)
    return float(np.linalg.norm(phi.conj().T @ phi - np.eye(phi.shape[0]), ord=2))


def generating_relation_check(f, phi: Union[np.ndarray, Callable[[np.ndarray], np.ndarray]],
                              samples: int = 20, rng: Optional[np.random.Generator] = None,
                              dim: Optional[int] = None) -> float:
    """Max over sampled z of |grad f((z + Phi z)/2) - i(z - Phi z)|.

    ``f`` is anything with a ``gradient`` method; ``phi`` is a matrix or a
    callable linear map.
    """
    rng = rng or np.random.default_rng(0)
    apply = phi if callable(phi) else (lambda z: np.asarray(phi) @ z)
    if dim is None:
        if callable(phi):
            raise InputError("dim is required when phi is a callable")
        dim = np.asarray(phi).shape[0]
    worst = 0.0
    for _ in range(samples):
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        image = apply(z)
        residual = f.gradient((z + image) / 2) - 1j * (z - image)
        worst = max(worst, float(np.linalg.norm(residual)))
    return worst


def is_symplectic(phi: np.ndarray, tol: float = 1e-9) -> bool:
    return symplectic_defect(phi) < tol
