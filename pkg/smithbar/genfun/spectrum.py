"""
Index jumps and critical values of the family F_{sigma_{m,t}}.

Critical C-lines of F_{sigma_{m,t}} correspond to fixed points of
e^{-2 i pi t} Phi, so the values of t at which the family degenerates are the
actions of the fixed points. In the quadratic case they are found as jumps of

    kappa(t) = complex dimension of the non-positive eigenspace,

which is nondecreasing in t. For oracle tuples they are found by solving
grad F = 0 on the unit sphere.
"""

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect, least_squares

from ..algebra.field import RATIONALS, Field, parse_field
from ..core.config import get_grid, get_n0, get_tolerance, resolve
from ..core.errors import (
    DegenerateRotation, DegenerateSpectrum, InputError, InvariantViolation,
    NonConvergence, OutOfRange,
)
from ..periodic.barcode import PeriodicBarcode
from ..utils.formatters import duration_fmt
from ..utils.logger import get_logger
from .forms import HermitianForm, real_signature
from .tuples import (
    GFTuple, assemble_F, build_sigma_mt, identity_tuple, inverse_tuple,
    odd_power_tuple, rotation_tuple,
)

logger = get_logger(__name__)

JUMP_XTOL = 1e-12
JUMP_PROBE = 1e-7
CLASS_TOL = 1e-6
DEGENERATE_TOL = 1e-9
MORSE_TOL = 1e-6
HESS_STEP = 1e-5
ORACLE_RESIDUAL_TOL = 1e-7
ORACLE_MAX_DIM = 64
RATIONAL_DENOMINATOR = 10 ** 9


@dataclass(frozen=True, eq=False)
class SpectrumPoint:
    """An action value t with a unit representative of its fixed C-line in C^{d+1}."""

    t: float
    representative: np.ndarray
    morse_index: Optional[int] = None

    @property
    def action_class(self) -> float:
        return mod1(self.t)


@dataclass(frozen=True, eq=False)
class SpectrumSample:
    points: Tuple[SpectrumPoint, ...] = ()
    failures: Tuple[NonConvergence, ...] = ()

    @property
    def actions(self) -> List[float]:
        return [pt.t for pt in self.points]

    def to_json(self) -> dict:
        return {
            'points': [
                {'t': pt.t,
                 'representative': [[float(z.real), float(z.imag)] for z in pt.representative],
                 'morse_index': pt.morse_index}
                for pt in self.points
            ],
            'failures': [{'t': f.seed, 'residual': f.residual} for f in self.failures],
        }


@dataclass(frozen=True, eq=False)
class RotationReport:
    barcode: PeriodicBarcode
    sample: SpectrumSample
    classes: Tuple[float, ...]
    max_class_error: float

    def to_json(self) -> dict:
        return {
            'K': self.barcode.K,
            'N': self.barcode.d + 1 + 2 * self.barcode.K,
            'classes': list(self.classes),
            'max_class_error': self.max_class_error,
            'spectrum': self.sample.to_json(),
        }


def mod1(t: float) -> float:
    """t mod 1 with values within CLASS_TOL of 1 snapped to 0."""
    r = t % 1.0
    return 0.0 if r > 1.0 - CLASS_TOL else r


def circular_distance(x: float, y: float) -> float:
    r = (x - y) % 1.0
    return min(r, 1.0 - r)


def _form_at(sigma: GFTuple, m: int, t: float, n0: int) -> HermitianForm:
    return assemble_F(build_sigma_mt(sigma, m, t, n0))


def _representative(v: np.ndarray, d: int) -> np.ndarray:
    """First block of a critical vector, normalized with its largest entry real positive."""
    block = np.asarray(v[:d + 1], dtype=complex)
    block = block / np.linalg.norm(block)
    k = int(np.argmax(np.abs(block)))
    return block * (np.conj(block[k]) / abs(block[k]))


# ---------------------------------------------------------------------------
# Maslov-type index jump
# ---------------------------------------------------------------------------

def maslov_index_check(d: int, m: int, t: float, n0: Optional[int] = None,
                       tol: Optional[float] = None) -> dict:
    """Compare ind T_{m,t} - ind T_{m,0} with 2(d+1) floor(t), T = F_{(eps, delta^{(m)}_t)}.

    The index at 0 is taken on the closed side (index plus nullity), so that
    both sides count the same eigenvalues once t has crossed 0.

    Raises:
        OutOfRange: t is an integer or |t| > m
    """
    n0 = resolve(n0, get_n0)
    if float(t).is_integer():
        raise OutOfRange(f"t={t} is an integer; the index jumps there")
    if abs(t) > m:
        raise OutOfRange(f"|t| = {abs(t)} exceeds m = {m}")
    eps = identity_tuple(d, 1)
    ind_t, _, _ = real_signature(_form_at(eps, m, t, n0), tol)
    ind_0, null_0, _ = real_signature(_form_at(eps, m, 0.0, n0), tol)
    difference = ind_t - (ind_0 + null_0)
    expected = 2 * (d + 1) * math.floor(t)
    return {
        'd': d,
        'm': m,
        't': t,
        'n0': n0,
        'index_t': ind_t,
        'index_0': ind_0 + null_0,
        'nullity_0': null_0,
        'difference': difference,
        'expected': expected,
        'nullity_holds': null_0 == 2 * (d + 1),
        'holds': difference == expected and null_0 == 2 * (d + 1),
    }


# ---------------------------------------------------------------------------
# Quadratic sweep
# ---------------------------------------------------------------------------

def _locate_jumps(kappa: Callable[[float], int], lo: float, hi: float,
                  k_lo: int, k_hi: int) -> List[float]:
    start = lo
    jumps = []
    while k_lo < k_hi:
        t_star = bisect(lambda t: kappa(t) - k_lo - 0.5, lo, hi, xtol=JUMP_XTOL)
        before = kappa(max(t_star - JUMP_PROBE, start))
        after = kappa(min(t_star + JUMP_PROBE, hi))
        if after - before > 1:
            raise DegenerateSpectrum(f"{after - before} complex lines become critical at t={t_star:.9f}")
        jumps.append(t_star)
        lo, k_lo = min(t_star + JUMP_PROBE, hi), after
    return jumps


def sweep_jumps(sigma: GFTuple, m: int, grid: Optional[int] = None, n0: Optional[int] = None,
                tol: Optional[float] = None) -> List[float]:
    """Positions in [-m, m] where kappa(t) increases, refined by bisection.

    Raises:
        DegenerateSpectrum: a jump exceeds one complex dimension, or zero
            eigenvalues persist at consecutive grid points
    """
    grid = resolve(grid, get_grid)
    n0 = resolve(n0, get_n0)
    tol = resolve(tol, get_tolerance)
    if not sigma.is_quadratic:
        raise InputError("the eigenvalue sweep needs a quadratic tuple")

    def kappa(t: float) -> int:
        return int(np.sum(_form_at(sigma, m, t, n0).eigenvalues() <= tol))

    start = time.perf_counter()
    ts = np.linspace(-m, m, grid)
    kappas = []
    zero_prev = False
    for t in ts:
        eigs = _form_at(sigma, m, float(t), n0).eigenvalues()
        zero_now = bool(np.any(np.abs(eigs) <= tol))
        if zero_now and zero_prev:
            raise DegenerateSpectrum(f"zero eigenvalues persist around t={t:.6f}")
        zero_prev = zero_now
        kappas.append(int(np.sum(eigs <= tol)))

    jumps: List[float] = []
    for lo, hi, k_lo, k_hi in zip(ts, ts[1:], kappas, kappas[1:]):
        if k_hi < k_lo:
            raise InvariantViolation('monotone', message=f"kappa decreased on [{lo:.6f}, {hi:.6f}]")
        if k_hi > k_lo:
            jumps.extend(_locate_jumps(kappa, float(lo), float(hi), k_lo, k_hi))
    logger.debug("Swept %d grid points, %d jumps in %s", grid, len(jumps),
                 duration_fmt(time.perf_counter() - start))
    return jumps


def _quadratic_point(sigma: GFTuple, m: int, t: float, n0: int) -> SpectrumPoint:
    sigma_mt = build_sigma_mt(sigma, m, t, n0)
    eigs, vecs = np.linalg.eigh(assemble_F(sigma_mt).matrix)
    j = int(np.argmin(np.abs(eigs)))
    others = np.delete(eigs, j)
    morse = None
    if not np.any(np.abs(others) <= MORSE_TOL):
        morse = 2 * int(np.sum(others < -MORSE_TOL)) - (sigma_mt.n - 1) * (sigma.d + 1)
    return SpectrumPoint(t, _representative(vecs[:, j], sigma.d), morse)


# ---------------------------------------------------------------------------
# Rotations
# ---------------------------------------------------------------------------

def _check_distinct(a: Sequence[float]) -> None:
    for i in range(len(a)):
        for j in range(i):
            if circular_distance(a[i], a[j]) < DEGENERATE_TOL:
                raise DegenerateRotation(
                    f"coefficients a_{j}={a[j]} and a_{i}={a[i]} coincide modulo 1"
                )


def action_classes(jumps: Sequence[float]) -> List[float]:
    """Jump positions mod 1, clustered within CLASS_TOL."""
    reps = sorted(mod1(t) for t in jumps)
    clusters: List[List[float]] = []
    for x in reps:
        if clusters and x - clusters[-1][-1] <= CLASS_TOL:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    return [float(np.mean(c)) for c in clusters]


def _rotation_report(sigma: GFTuple, predicted: Sequence[float], m: int, n0: int,
                     grid: int, tol: float, field: Field) -> RotationReport:
    jumps = sweep_jumps(sigma, m, grid, n0, tol)
    classes = action_classes(jumps)
    if len(classes) != sigma.d + 1:
        raise DegenerateSpectrum(f"found {len(classes)} action classes, expected {sigma.d + 1}")
    error = max(min(circular_distance(a, c) for c in classes) for a in predicted)
    if error > CLASS_TOL:
        logger.warning("Action classes deviate from the fixed point actions by %.2e", error)
    spectral = tuple(sorted(Fraction(c).limit_denominator(RATIONAL_DENOMINATOR) % 1
                            for c in classes))
    barcode = PeriodicBarcode(d=sigma.d, field=field, finite_orbits=(), spectral=spectral)
    points = tuple(_quadratic_point(sigma, m, t, n0) for t in jumps)
    return RotationReport(barcode, SpectrumSample(points), tuple(classes), error)


def rotation_barcode(a: Sequence[float], m: int, n: Optional[int] = None,
                     n0: Optional[int] = None, grid: Optional[int] = None,
                     tol: Optional[float] = None, field: Optional[Field] = None) -> RotationReport:
    """Periodic barcode and action spectrum of [z_j] -> [e^{2 i pi a_j} z_j] on CP^d.

    Raises:
        DegenerateRotation: two coefficients agree modulo 1
    """
    a = [float(x) for x in a]
    _check_distinct(a)
    n0 = resolve(n0, get_n0)
    logger.info("Rotation sweep for a=%s, m=%d", a, m)
    return _rotation_report(rotation_tuple(a, n), [x % 1.0 for x in a], m, n0,
                            resolve(grid, get_grid), resolve(tol, get_tolerance),
                            field or RATIONALS)


def rotation_power_barcode(a: Sequence[float], p: int, m: int, n: Optional[int] = None,
                           n0: Optional[int] = None, grid: Optional[int] = None,
                           tol: Optional[float] = None, field: Optional[Field] = None) -> RotationReport:
    """Barcode of the p-th iterate of a rotation, over f<p> unless ``field`` is given."""
    a = [float(x) for x in a]
    powered = [p * x for x in a]
    _check_distinct(powered)
    sigma = odd_power_tuple(rotation_tuple(a, n), p)
    return _rotation_report(sigma, [x % 1.0 for x in powered], m, resolve(n0, get_n0),
                            resolve(grid, get_grid), resolve(tol, get_tolerance),
                            field or parse_field(f"f{p}"))


def spectral_inverse_check(a: Sequence[float], m: int, n: Optional[int] = None,
                           n0: Optional[int] = None, grid: Optional[int] = None,
                           tol: Optional[float] = None) -> dict:
    """Actions of sigma^{-1} against the negated actions of sigma, inside (-m, m)."""
    a = [float(x) for x in a]
    _check_distinct(a)
    sigma = rotation_tuple(a, n)
    margin = m - CLASS_TOL

    def inside(jumps: List[float]) -> List[float]:
        return sorted(t for t in jumps if abs(t) < margin)

    forward = inside(sweep_jumps(sigma, m, grid, n0, tol))
    backward = inside(sweep_jumps(inverse_tuple(sigma), m, grid, n0, tol))
    negated = sorted(-t for t in forward)
    same_size = len(negated) == len(backward)
    error = max((abs(x - y) for x, y in zip(negated, backward)), default=0.0)
    return {
        'actions': forward,
        'inverse_actions': backward,
        'max_error': error,
        'holds': same_size and error <= CLASS_TOL,
    }


# ---------------------------------------------------------------------------
# Oracle search
# ---------------------------------------------------------------------------

def _sphere_residual(F, x: np.ndarray) -> np.ndarray:
    half = x.size // 2
    g = F.gradient(x[:half] + 1j * x[half:])
    return np.concatenate([g.real, g.imag, [x @ x - 1.0]])


def _random_unit(rng: np.random.Generator, size: int) -> np.ndarray:
    x = rng.standard_normal(size)
    return x / np.linalg.norm(x)


def projected_hessian(F, v: np.ndarray) -> np.ndarray:
    """Finite-difference real Hessian of F at v, projected off span{v, iv}."""
    size = v.size
    x0 = np.concatenate([v.real, v.imag])

    def g_real(x: np.ndarray) -> np.ndarray:
        g = F.gradient(x[:size] + 1j * x[size:])
        return np.concatenate([g.real, g.imag])

    hess = np.empty((2 * size, 2 * size))
    for j in range(2 * size):
        step = np.zeros(2 * size)
        step[j] = HESS_STEP
        hess[:, j] = (g_real(x0 + step) - g_real(x0 - step)) / (2 * HESS_STEP)
    hess = (hess + hess.T) / 2
    iv = 1j * v
    basis, _ = np.linalg.qr(np.stack([x0, np.concatenate([iv.real, iv.imag])], axis=1))
    proj = np.eye(2 * size) - basis @ basis.T
    return proj @ hess @ proj


def _oracle_point(sigma: GFTuple, m: int, t: float, x: np.ndarray, n0: int) -> SpectrumPoint:
    sigma_mt = build_sigma_mt(sigma, m, t, n0)
    F = assemble_F(sigma_mt)
    half = x.size // 2
    v = (x[:half] + 1j * x[half:]) / np.linalg.norm(x)
    eigs = np.linalg.eigvalsh(projected_hessian(F, v))
    morse = None
    if int(np.sum(np.abs(eigs) <= MORSE_TOL)) == 2:
        morse = int(np.sum(eigs < -MORSE_TOL)) - (sigma_mt.n - 1) * (sigma.d + 1)
    return SpectrumPoint(t, _representative(v, sigma.d), morse)


def _oracle_spectrum(sigma: GFTuple, m: int, grid: int, n0: int, seeds: int,
                     rng: np.random.Generator) -> SpectrumSample:
    size = 2 * (sigma.n + m * n0) * (sigma.d + 1)
    if size > 2 * ORACLE_MAX_DIM:
        raise InputError(f"oracle search limited to {ORACLE_MAX_DIM} complex dimensions, got {size // 2}")

    def residual_at(t: float) -> Callable[[np.ndarray], np.ndarray]:
        F = assemble_F(build_sigma_mt(sigma, m, t, n0))
        return lambda x: _sphere_residual(F, x)

    def joint(y: np.ndarray) -> np.ndarray:
        return residual_at(float(y[-1]))(y[:-1])

    ts = np.linspace(-m, m, grid)
    best_x: List[np.ndarray] = []
    phi: List[float] = []
    warm = None
    for t in ts:
        fun = residual_at(float(t))
        starts = ([warm] if warm is not None else []) + [_random_unit(rng, size) for _ in range(seeds)]
        res = min((least_squares(fun, x0, method='trf') for x0 in starts), key=lambda r: r.cost)
        warm = res.x
        best_x.append(res.x)
        phi.append(math.sqrt(2 * res.cost))
    for i in range(1, grid):
        if phi[i] < ORACLE_RESIDUAL_TOL and phi[i - 1] < ORACLE_RESIDUAL_TOL:
            raise DegenerateSpectrum(f"critical points persist on [{ts[i - 1]:.6f}, {ts[i]:.6f}]")

    points: List[SpectrumPoint] = []
    failures: List[NonConvergence] = []
    lower = np.full(size + 1, -np.inf)
    upper = np.full(size + 1, np.inf)
    for i in range(1, grid - 1):
        if not (phi[i] <= phi[i - 1] and phi[i] <= phi[i + 1]):
            continue
        lower[-1], upper[-1] = ts[i - 1], ts[i + 1]
        res = least_squares(joint, np.concatenate([best_x[i], [ts[i]]]), bounds=(lower, upper),
                            method='trf', jac='3-point', xtol=1e-12, ftol=1e-12, gtol=1e-12)
        residual = math.sqrt(2 * res.cost)
        if residual >= ORACLE_RESIDUAL_TOL:
            logger.warning("No critical point near t=%.6f (residual %.2e)", ts[i], residual)
            failures.append(NonConvergence(float(ts[i]), residual))
            continue
        points.append(_oracle_point(sigma, m, float(res.x[-1]), res.x[:-1], n0))
    return SpectrumSample(_dedupe(points), tuple(failures))


def _dedupe(points: List[SpectrumPoint]) -> Tuple[SpectrumPoint, ...]:
    out: List[SpectrumPoint] = []
    for pt in sorted(points, key=lambda p: p.t):
        if out and pt.t - out[-1].t <= CLASS_TOL:
            continue
        out.append(pt)
    return tuple(out)


def critical_spectrum(sigma: GFTuple, m: int, grid: Optional[int] = None, n0: Optional[int] = None,
                      tol: Optional[float] = None, seeds: int = 2,
                      rng: Optional[np.random.Generator] = None) -> SpectrumSample:
    """Action values of sigma in [-m, m] with representatives and relative Morse indices.

    Morse indices are reported relative to (N-1)(d+1), the index of Q_N for the
    tuple size N of sigma_{m,t}. Oracle seeds that fail to converge are listed
    in ``failures``.
    """
    grid = resolve(grid, get_grid)
    n0 = resolve(n0, get_n0)
    start = time.perf_counter()
    if sigma.is_quadratic:
        jumps = sweep_jumps(sigma, m, grid, n0, tol)
        sample = SpectrumSample(_dedupe([_quadratic_point(sigma, m, t, n0) for t in jumps]))
    else:
        sample = _oracle_spectrum(sigma, m, grid, n0, seeds, rng or np.random.default_rng(0))
    logger.info("Critical spectrum: %d action values, %d failures in %s", len(sample.points),
                len(sample.failures), duration_fmt(time.perf_counter() - start))
    return sample
