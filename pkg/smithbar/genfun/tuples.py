"""
Tuples of elementary generating functions and their assembled forms.

A tuple sigma = (f_1, ..., f_n) of S^1-invariant functions on C^{d+1} defines

    F_sigma(v_1, ..., v_n) = sum_k f_k((v_k + v_{k+1}) / 2) + 1/2 <v_k, i v_{k+1}>

with cyclic indices. Vectors in (C^{d+1})^n are flat complex arrays of
length n(d+1), block k holding v_k.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag

from ..core.config import get_n0, resolve
from ..core.errors import EvenTupleError, InputError, OutOfRange
from ..utils.logger import get_logger
from .forms import (
    HermitianForm, generating_relation_check, inner, qn_matrix, qn_w_value,
    scalar_form, zero_form,
)

logger = get_logger(__name__)

RELATION_TOL = 1e-8


class ElementaryGF:
    """An S^1-invariant 2-homogeneous function on C^{d+1} with f(0) = 0."""

    dim: int

    def value(self, w: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def negated(self) -> 'ElementaryGF':
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class QuadraticGF(ElementaryGF):
    form: HermitianForm

    @property
    def dim(self) -> int:
        return self.form.dim

    def value(self, w: np.ndarray) -> float:
        return self.form.evaluate(w)

    def gradient(self, w: np.ndarray) -> np.ndarray:
        return self.form.gradient(w)

    def negated(self) -> 'QuadraticGF':
        return QuadraticGF(-self.form)


@dataclass(frozen=True, eq=False)
class OracleGF(ElementaryGF):
    """User-supplied value and gradient (gradient g with df(w)[h] = <g, h>)."""

    dim: int
    value_fn: Callable[[np.ndarray], float]
    gradient_fn: Callable[[np.ndarray], np.ndarray]
    label: str = 'oracle'
    sign: int = 1

    def value(self, w: np.ndarray) -> float:
        return self.sign * float(self.value_fn(w))

    def gradient(self, w: np.ndarray) -> np.ndarray:
        return self.sign * np.asarray(self.gradient_fn(w), dtype=complex)

    def negated(self) -> 'OracleGF':
        return OracleGF(self.dim, self.value_fn, self.gradient_fn, self.label, -self.sign)


@dataclass(frozen=True, eq=False)
class GFTuple:
    d: int
    entries: Tuple[ElementaryGF, ...] = dc_field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))
        for f in self.entries:
            if f.dim != self.d + 1:
                raise InputError(f"entry of dimension {f.dim} in a tuple over C^{self.d + 1}")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def block(self) -> int:
        return self.d + 1

    @property
    def size(self) -> int:
        return self.n * (self.d + 1)

    @property
    def is_quadratic(self) -> bool:
        return all(isinstance(f, QuadraticGF) for f in self.entries)

    def blocks(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.size,):
            raise InputError(f"expected a vector of length {self.size}, got shape {v.shape}")
        return v.reshape(self.n, self.block)


# ---------------------------------------------------------------------------
# Building tuples
# ---------------------------------------------------------------------------

def identity_tuple(d: int, n: int = 1) -> GFTuple:
    """epsilon^n: n copies of the zero function."""
    return GFTuple(d, tuple(QuadraticGF(zero_form(d + 1)) for _ in range(n)))


def delta_gf(d: int, angle: float) -> QuadraticGF:
    """Elementary function w -> -tan(pi angle) |w|^2 of z -> e^{-2 i pi angle} z."""
    if abs(angle) >= 0.5:
        raise OutOfRange(f"rotation angle {angle} outside the tangent branch")
    return QuadraticGF(scalar_form(d + 1, -math.tan(math.pi * angle)))


def chi(m: int, t: float) -> float:
    """Odd monotone clamp: identity up to m + 1/4, constant m + 1/2 beyond m + 3/4."""
    s = abs(t)
    if s <= m + 0.25:
        out = s
    elif s >= m + 0.75:
        out = m + 0.5
    else:
        out = m + 0.25 + (s - m - 0.25) / 2
    return math.copysign(out, t)


def delta_angles(m: int, t: float, n0: Optional[int] = None) -> List[float]:
    """Per-block rotation angles of delta^{(m)}_t."""
    n0 = resolve(n0, get_n0)
    if m < 1:
        raise OutOfRange(f"m must be at least 1, got {m}")
    if m == 1:
        return [t / n0] * n0
    inner_t = chi(m - 1, t)
    return delta_angles(m - 1, inner_t, n0) + [(t - inner_t) / n0] * n0


def delta_tuple(d: int, m: int, t: float, n0: Optional[int] = None) -> GFTuple:
    return GFTuple(d, tuple(delta_gf(d, angle) for angle in delta_angles(m, t, n0)))


def concat_tuples(*tuples: GFTuple) -> GFTuple:
    ds = {tp.d for tp in tuples}
    if len(ds) != 1:
        raise InputError(f"cannot concatenate tuples over different dimensions {sorted(ds)}")
    return GFTuple(ds.pop(), tuple(f for tp in tuples for f in tp.entries))


def build_sigma_mt(sigma: GFTuple, m: int, t: float, n0: Optional[int] = None) -> GFTuple:
    """sigma_{m,t} = (sigma, delta^{(m)}_t).

    Raises:
        OutOfRange: |t| > m
    """
    n0 = resolve(n0, get_n0)
    if n0 < 4 or n0 % 2:
        raise OutOfRange(f"n0 must be an even integer >= 4, got {n0}")
    if abs(t) > m:
        raise OutOfRange(f"|t| = {abs(t)} exceeds m = {m}")
    return concat_tuples(sigma, delta_tuple(sigma.d, m, t, n0))


def inverse_tuple(sigma: GFTuple) -> GFTuple:
    """sigma^{-1} = (-f_n, ..., -f_1)."""
    return GFTuple(sigma.d, tuple(f.negated() for f in reversed(sigma.entries)))


def power_tuple(sigma: GFTuple, p: int) -> GFTuple:
    """sigma^p by plain concatenation (even size when p and n are)."""
    return GFTuple(sigma.d, sigma.entries * p)


def odd_power_tuple(sigma: GFTuple, p: int) -> GFTuple:
    """sigma^p padded with one identity entry when the size would be even."""
    tp = power_tuple(sigma, p)
    if tp.n % 2 == 0:
        tp = concat_tuples(tp, identity_tuple(sigma.d, 1))
    return tp


def rotation_tuple(a: Sequence[float], n: Optional[int] = None) -> GFTuple:
    """n-step tuple of the rotation [z_j] -> [e^{2 i pi a_j} z_j].

    Each step diag(e^{2 i pi a_j / n}) is generated by w -> sum_j tan(pi a_j / n) |w_j|^2;
    the sign is verified against the step map before the tuple is returned.
    """
    a = [float(x) for x in a]
    if n is None:
        n = 2 * math.floor(max(abs(x) for x in a) + 0.5) + 1
    if n < 1 or n % 2 == 0:
        raise EvenTupleError(f"rotation tuples need an odd number of steps, got {n}")
    if max(abs(x) for x in a) / n >= 0.5:
        raise OutOfRange(f"{n} steps leave some angle a_j/n outside the tangent branch")
    diag = np.array([math.tan(math.pi * x / n) for x in a])
    step = QuadraticGF(HermitianForm(np.diag(diag).astype(complex)))
    phi = np.diag(np.exp(2j * math.pi * np.array(a) / n))
    residual = generating_relation_check(step, phi)
    if residual >= RELATION_TOL:
        raise InputError(f"rotation step fails the generating relation (residual {residual:.2e})")
    return GFTuple(len(a) - 1, (step,) * n)


def random_quadratic_tuple(d: int, n: int, rng: np.random.Generator, scale: float = 1.0) -> GFTuple:
    """Tuple of random Hermitian forms with entries of size about ``scale``."""
    entries = []
    for _ in range(n):
        x = rng.standard_normal((d + 1, d + 1)) + 1j * rng.standard_normal((d + 1, d + 1))
        entries.append(QuadraticGF(HermitianForm(scale * (x + x.conj().T) / 2)))
    return GFTuple(d, tuple(entries))


# ---------------------------------------------------------------------------
# Assembly and evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeneratingOracle:
    """Value and gradient of F_sigma for tuples with non-quadratic entries."""

    sigma: GFTuple

    @property
    def dim(self) -> int:
        return self.sigma.size

    def evaluate(self, v: np.ndarray) -> float:
        return evaluate_F(self.sigma, v)

    def gradient(self, v: np.ndarray) -> np.ndarray:
        return gradient_F(self.sigma, v)


def _warn_even(sigma: GFTuple) -> None:
    if sigma.n % 2 == 0:
        logger.warning("Evaluating F for an even tuple of size %d (raw evaluation only)", sigma.n)


def assemble_F(sigma: GFTuple) -> Union[HermitianForm, GeneratingOracle]:
    """Hermitian matrix of F_sigma when every entry is quadratic, an oracle otherwise."""
    _warn_even(sigma)
    if not sigma.is_quadratic:
        return GeneratingOracle(sigma)
    n, size = sigma.n, sigma.block
    mat = qn_matrix(n, sigma.d)
    for k, f in enumerate(sigma.entries):
        quarter = f.form.matrix / 4
        for r in (k, (k + 1) % n):
            for c in (k, (k + 1) % n):
                mat[r * size:(r + 1) * size, c * size:(c + 1) * size] += quarter
    return HermitianForm(mat)


def evaluate_F(sigma: GFTuple, v: np.ndarray) -> float:
    """F_sigma(v) from the defining sum."""
    blocks = sigma.blocks(v)
    n = sigma.n
    total = 0.0
    for k, f in enumerate(sigma.entries):
        nxt = blocks[(k + 1) % n]
        total += f.value((blocks[k] + nxt) / 2) + 0.5 * inner(blocks[k], 1j * nxt)
    return total


def gradient_F(sigma: GFTuple, v: np.ndarray) -> np.ndarray:
    """Gradient of F_sigma for the real inner product."""
    blocks = sigma.blocks(v)
    n = sigma.n
    grad = np.zeros_like(blocks)
    for k, f in enumerate(sigma.entries):
        nxt = (k + 1) % n
        g = f.gradient((blocks[k] + blocks[nxt]) / 2) / 2
        grad[k] += g
        grad[nxt] += g
    for k in range(n):
        grad[k] += 0.5j * (blocks[(k + 1) % n] - blocks[(k - 1) % n])
    return grad.reshape(-1)


# ---------------------------------------------------------------------------
# Change of variables w_k = (v_k + v_{k+1}) / 2
# ---------------------------------------------------------------------------

def a_matrix(n: int) -> np.ndarray:
    """Real n x n matrix of the change of variables (invertible iff n is odd)."""
    mat = np.zeros((n, n))
    for k in range(n):
        mat[k, k] += 0.5
        mat[k, (k + 1) % n] += 0.5
    return mat


def w_variables(v: np.ndarray, n: int) -> np.ndarray:
    blocks = np.asarray(v, dtype=complex).reshape(n, -1)
    return ((blocks + np.roll(blocks, -1, axis=0)) / 2).reshape(-1)


def v_from_w(w: np.ndarray, n: int) -> np.ndarray:
    """Inverse change of variables v_k = sum_j (-1)^j w_{k+j}.

    Raises:
        EvenTupleError: ``n`` is even and the change of variables is singular
    """
    if n % 2 == 0:
        raise EvenTupleError(f"w_k = (v_k + v_(k+1))/2 is not invertible for even n={n}")
    blocks = np.asarray(w, dtype=complex).reshape(n, -1)
    out = np.zeros_like(blocks)
    for j in range(n):
        out += (-1) ** j * np.roll(blocks, -j, axis=0)
    return out.reshape(-1)


def evaluate_F_w(sigma: GFTuple, w: np.ndarray) -> float:
    """F_sigma in w-variables, through the defining sum at v = A_n^{-1} w."""
    return evaluate_F(sigma, v_from_w(w, sigma.n))


def evaluate_F_split(sigma: GFTuple, w: np.ndarray) -> float:
    """sum_k f_k(w_k) + Q_n(w) with Q_n in its closed w-variable form."""
    blocks = np.asarray(w, dtype=complex).reshape(sigma.n, -1)
    return sum(f.value(blocks[k]) for k, f in enumerate(sigma.entries)) + qn_w_value(w, sigma.n)


def alternating_sum(w: np.ndarray, n: int) -> np.ndarray:
    """sum_k (-1)^{k+1} w_k with k counted from 1."""
    blocks = np.asarray(w, dtype=complex).reshape(n, -1)
    signs = np.array([(-1) ** k for k in range(n)], dtype=float)
    return signs @ blocks


def btilde(w: np.ndarray, w2: np.ndarray, n: int, m: int) -> np.ndarray:
    """B~_{n,m}(w, w') = (w, sum_k (-1)^{k+1} w'_k, w') in w-variables."""
    return np.concatenate([np.asarray(w, dtype=complex), alternating_sum(w2, m),
                           np.asarray(w2, dtype=complex)])


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
    except (TypeError, ValueError) as e:
        raise InputError(f"matrix entries must be [re, im] pairs: {e}") from e


def tuple_from_json(data: dict) -> GFTuple:
    try:
        d = int(data['d'])
        entries = []
        for item in data['entries']:
            kind = item.get('kind', 'quadratic')
            if kind == 'quadratic':
                entries.append(QuadraticGF(HermitianForm(_matrix_from_json(item['matrix']))))
            elif kind == 'identity':
                entries.append(QuadraticGF(zero_form(d + 1)))
            else:
                raise InputError(f"entry kind {kind!r} cannot be read from a file")
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed tuple document: {e}") from e
    return GFTuple(d, tuple(entries))


def tuple_to_json(sigma: GFTuple) -> dict:
    if not sigma.is_quadratic:
        raise InputError("only quadratic tuples can be written to a file")
    return {
        'd': sigma.d,
        'entries': [
            {'kind': 'quadratic',
             'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in f.form.matrix]}
            for f in sigma.entries
        ],
    }


def block_form(sigma: GFTuple) -> HermitianForm:
    """Block-diagonal form diag(A_1, ..., A_n) of a quadratic tuple."""
    return HermitianForm(block_diag(*[f.form.matrix for f in sigma.entries]))
