"""
Numerical residuals of the function-level identities between generating functions.

Every check samples random unit vectors and reports the largest absolute
residual; a check passes when that residual is below the residual tolerance
(``SB_RESIDUAL_TOL``, 1e-8 by default).
"""

import math
import time
from typing import Callable, Dict, Optional

import numpy as np
from sympy import isprime

from ..core.config import get_n0, get_residual_tolerance, get_seed, resolve
from ..core.errors import BadResidue, EvenTupleError, InputError
from ..utils.formatters import duration_fmt
from ..utils.logger import get_logger
from .forms import inner, qn_value
from .tuples import (
    GFTuple, alternating_sum, btilde, build_sigma_mt, concat_tuples, evaluate_F,
    evaluate_F_split, evaluate_F_w, identity_tuple, inverse_tuple, power_tuple,
    v_from_w, w_variables,
)

logger = get_logger(__name__)


def random_unit(rng: np.random.Generator, blocks: int, dim: int) -> np.ndarray:
    z = rng.standard_normal(blocks * dim) + 1j * rng.standard_normal(blocks * dim)
    return z / np.linalg.norm(z)


def reversed_tail(v: np.ndarray, n: int) -> np.ndarray:
    """(v_1, v_n, v_{n-1}, ..., v_2)."""
    blocks = np.asarray(v).reshape(n, -1)
    return np.concatenate([blocks[:1], blocks[:0:-1]]).reshape(-1)


def _max_residual(samples: int, trial: Callable[[], float]) -> float:
    return max((trial() for _ in range(samples)), default=0.0)


def _require_odd(sigma: GFTuple, what: str) -> None:
    if sigma.n % 2 == 0:
        raise EvenTupleError(f"{what} needs an odd tuple size, got n={sigma.n}")


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

def bmn_residual(sigma: GFTuple, sigma2: GFTuple, rng: np.random.Generator, samples: int) -> float:
    """F_{(sigma, eps, sigma')}(B~(w, w')) - F_sigma(w) - F_sigma'(w') in w-variables."""
    _require_odd(sigma, "B~ composition")
    _require_odd(sigma2, "B~ composition")
    joined = concat_tuples(sigma, identity_tuple(sigma.d, 1), sigma2)
    n, m, dim = sigma.n, sigma2.n, sigma.block

    def trial() -> float:
        w, w2 = random_unit(rng, n, dim), random_unit(rng, m, dim)
        lhs = evaluate_F_w(joined, btilde(w, w2, n, m))
        return abs(lhs - evaluate_F_w(sigma, w) - evaluate_F_w(sigma2, w2))

    return _max_residual(samples, trial)


def btilde_associativity_residual(n: int, m: int, k: int, dim: int,
                                  rng: np.random.Generator, samples: int) -> float:
    """B~(B~(w, w'), w'') against B~(w, B~(w', w''))."""

    def trial() -> float:
        w, w2, w3 = random_unit(rng, n, dim), random_unit(rng, m, dim), random_unit(rng, k, dim)
        left = btilde(btilde(w, w2, n, m), w3, n + m + 1, k)
        right = btilde(w, btilde(w2, w3, m, k), n, m + k + 1)
        return float(np.linalg.norm(left - right))

    return _max_residual(samples, trial)


def finverse_residual(sigma: GFTuple, rng: np.random.Generator, samples: int) -> float:
    """F_{sigma^-1}(v_1, ..., v_n) + F_sigma(v_1, v_n, ..., v_2)."""
    inv = inverse_tuple(sigma)

    def trial() -> float:
        v = random_unit(rng, sigma.n, sigma.block)
        return abs(evaluate_F(inv, v) + evaluate_F(sigma, reversed_tail(v, sigma.n)))

    return _max_residual(samples, trial)


def fcyclic_residual(sigma: GFTuple, sigma2: GFTuple, rng: np.random.Generator, samples: int) -> float:
    """F_{(sigma, sigma')}(v, v') - F_{(sigma', sigma)}(v', v)."""
    forward = concat_tuples(sigma, sigma2)
    backward = concat_tuples(sigma2, sigma)

    def trial() -> float:
        v, v2 = random_unit(rng, sigma.n, sigma.block), random_unit(rng, sigma2.n, sigma.block)
        return abs(evaluate_F(forward, np.concatenate([v, v2]))
                   - evaluate_F(backward, np.concatenate([v2, v])))

    return _max_residual(samples, trial)


def qn_antisymmetry_residual(n: int, dim: int, rng: np.random.Generator, samples: int) -> float:
    """Q_n(v_1, v_2, ..., v_n) + Q_n(v_1, v_n, ..., v_2)."""

    def trial() -> float:
        v = random_unit(rng, n, dim)
        return abs(qn_value(v, n) + qn_value(reversed_tail(v, n), n))

    return _max_residual(samples, trial)


def w_variables_residual(sigma: GFTuple, rng: np.random.Generator, samples: int) -> float:
    """F_sigma(v) against sum f_k(w_k) + Q_n(w), plus the round trip v -> w -> v."""
    _require_odd(sigma, "the change of variables")

    def trial() -> float:
        v = random_unit(rng, sigma.n, sigma.block)
        w = w_variables(v, sigma.n)
        split = abs(evaluate_F(sigma, v) - evaluate_F_split(sigma, w))
        return max(split, float(np.linalg.norm(v_from_w(w, sigma.n) - v)))

    return _max_residual(samples, trial)


def identity_suite(sigma: GFTuple, sigma2: GFTuple, seeds: int = 100,
                   seed: Optional[int] = None) -> Dict[str, dict]:
    """Residuals of the composition, inverse, cyclic, antisymmetry and change-of-variable identities."""
    if sigma.d != sigma2.d:
        raise InputError(f"tuples over C^{sigma.d + 1} and C^{sigma2.d + 1}")
    rng = np.random.default_rng(resolve(seed, get_seed))
    tol = get_residual_tolerance()
    start = time.perf_counter()
    residuals = {
        'bmn': bmn_residual(sigma, sigma2, rng, seeds),
        'btilde_associativity': btilde_associativity_residual(
            sigma.n, sigma2.n, sigma.n, sigma.block, rng, seeds),
        'finverse': finverse_residual(sigma, rng, seeds),
        'fcyclic': fcyclic_residual(sigma, sigma2, rng, seeds),
        'qn_antisymmetry': qn_antisymmetry_residual(sigma.n, sigma.block, rng, seeds),
        'w_variables': w_variables_residual(sigma, rng, seeds),
    }
    logger.info("Identity suite with %d samples finished in %s", seeds,
                duration_fmt(time.perf_counter() - start))
    report = {name: {'residual': value, 'pass': value < tol} for name, value in residuals.items()}
    for name, row in report.items():
        if not row['pass']:
            logger.warning("Identity %s failed with residual %.3e", name, row['residual'])
    return report


# ---------------------------------------------------------------------------
# Z/p fixed loci
# ---------------------------------------------------------------------------

def _odd_prime_residuals(sigma_mt: GFTuple, p: int, q: int, rng: np.random.Generator,
                         samples: int) -> Dict[str, float]:
    n, dim = sigma_mt.n, sigma_mt.block
    powered = power_tuple(sigma_mt, p)
    zeta_q = np.exp(2j * math.pi * q / p)
    signs = np.array([(-1) ** (k + 1) for k in range(n)], dtype=float)
    tan_q = math.tan(math.pi * q / p)

    def identity_trial() -> float:
        v = random_unit(rng, n, dim)
        orbit = np.concatenate([zeta_q ** j * v for j in range(p)])
        blocks = v.reshape(n, dim)
        u = blocks + np.outer(signs * (1 - zeta_q) / 2, blocks[0])
        rhs = p * (evaluate_F(sigma_mt, u.reshape(-1)) - tan_q * inner(u[0], u[0]))
        return abs(evaluate_F(powered, orbit) - rhs)

    def cyclic_trial() -> float:
        v = random_unit(rng, p * n, dim)
        return abs(evaluate_F(powered, v) - evaluate_F(powered, np.roll(v, -n * dim)))

    return {
        'fixed_locus': _max_residual(samples, identity_trial),
        'cyclic_invariance': _max_residual(samples, cyclic_trial),
    }


def involution(w: np.ndarray, n: int) -> np.ndarray:
    """(w1, x, w3) -> (w3, -x + s(w1) + s(w3), w1) on (C^{d+1})^{2n+1}, s the alternating sum."""
    blocks = np.asarray(w, dtype=complex).reshape(2 * n + 1, -1)
    w1, x, w3 = blocks[:n].reshape(-1), blocks[n], blocks[n + 1:].reshape(-1)
    middle = -x + alternating_sum(w1, n) + alternating_sum(w3, n)
    return np.concatenate([w3, middle, w1])


def _involution_residuals(sigma_mt: GFTuple, rng: np.random.Generator, samples: int) -> Dict[str, float]:
    n, dim = sigma_mt.n, sigma_mt.block
    doubled = concat_tuples(sigma_mt, identity_tuple(sigma_mt.d, 1), sigma_mt)

    def invariance_trial() -> float:
        w = random_unit(rng, 2 * n + 1, dim)
        return abs(evaluate_F_w(doubled, w) - evaluate_F_w(doubled, involution(w, n)))

    def fixed_trial() -> float:
        w = random_unit(rng, n, dim)
        point = np.concatenate([w, alternating_sum(w, n), w])
        return abs(evaluate_F_w(doubled, point) - 2 * evaluate_F_w(sigma_mt, w))

    def anti_fixed_trial() -> float:
        w, x = random_unit(rng, n, dim), random_unit(rng, 1, dim)
        lhs = 0.5 * evaluate_F_w(doubled, np.concatenate([w, x, -w]))
        rhs = evaluate_F_w(sigma_mt, w) + 2 * inner(alternating_sum(w, n), 1j * x)
        return abs(lhs - rhs)

    return {
        'involution_invariance': _max_residual(samples, invariance_trial),
        'fixed_locus': _max_residual(samples, fixed_trial),
        'anti_fixed_locus': _max_residual(samples, anti_fixed_trial),
    }


def smith_fixed_locus_check(sigma: GFTuple, m: int, t: float, p: int, q: int = 0,
                            n0: Optional[int] = None, samples: int = 20,
                            seed: Optional[int] = None) -> dict:
    """Restriction of F to the fixed locus of the Z/p action on sigma_{m,t}^p.

    Raises:
        BadResidue: q outside {-(p-1)/2, ..., (p-1)/2}
    """
    if not isprime(p):
        raise InputError(f"p={p} is not prime")
    half = (p - 1) // 2 if p > 2 else 1
    if not (-half <= q <= half if p > 2 else q in (0, 1)):
        raise BadResidue(f"q={q} outside the admissible residues for p={p}")
    _require_odd(sigma, "the fixed locus identity")
    sigma_mt = build_sigma_mt(sigma, m, t, resolve(n0, get_n0))
    rng = np.random.default_rng(resolve(seed, get_seed))
    if p == 2:
        residuals = _involution_residuals(sigma_mt, rng, samples)
    else:
        residuals = _odd_prime_residuals(sigma_mt, p, q, rng, samples)
    tol = get_residual_tolerance()
    return {
        'p': p,
        'q': q,
        'm': m,
        't': t,
        'residuals': residuals,
        'holds': all(r < tol for r in residuals.values()),
    }
