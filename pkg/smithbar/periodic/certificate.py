"""
Certificate arithmetic for periodic points.

From beta_max <= 1 and the Smith bound beta_tot(sigma^p) >= p beta_tot(sigma),
the number of finite orbits of the p-th iterate satisfies K_p >= p beta_tot,
hence N_p = d + 1 + 2 K_p. Once N_p exceeds the total local homology n*B that
fixed points can account for, some p-periodic point is not a fixed point.
"""

import math
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from sympy import isprime, primerange

from ..core.errors import InputError, VacuousCertificate
from ..utils.formatters import duration_fmt, format_rational
from ..utils.logger import get_logger

logger = get_logger(__name__)


def parse_primes(text: str) -> List[int]:
    """Parse ``lo..hi`` (all primes in the closed range) or a comma separated list."""
    raw = text.strip()
    try:
        if '..' in raw:
            lo, hi = (int(x) for x in raw.split('..', 1))
            return list(primerange(lo, hi + 1))
        values = [int(x) for x in raw.split(',') if x.strip()]
    except ValueError as e:
        raise InputError(f"bad prime list {text!r}") from e
    bad = [p for p in values if not isprime(p)]
    if bad:
        raise InputError(f"not prime: {', '.join(map(str, bad))}")
    return sorted(set(values))


def hz_certificate(d: int, betatot_q: Fraction, n: int, loc_bound: Fraction,
                   primes: Sequence[int]) -> dict:
    """Smallest listed prime whose iterate is forced to have a non-fixed periodic point.

    Raises:
        VacuousCertificate: ``betatot_q`` is zero
    """
    betatot_q = Fraction(betatot_q)
    if betatot_q <= 0:
        raise VacuousCertificate("total finite bar length is zero; no growth can be certified")
    threshold = n * Fraction(loc_bound)

    per_prime = []
    minimal: Optional[int] = None
    for p in sorted(primes):
        k_lower = math.ceil(p * betatot_q)
        n_lower = d + 1 + 2 * k_lower
        exceeds = n_lower > threshold
        per_prime.append({'p': p, 'K_lower': k_lower, 'N_lower': n_lower, 'exceeds': exceeds})
        if exceeds and minimal is None:
            minimal = p
    logger.info("Certificate over %d primes: A=%s", len(per_prime), minimal)
    return {
        'd': d,
        'betatot': format_rational(betatot_q),
        'threshold': format_rational(threshold),
        'min_prime_A': minimal,
        'per_prime': per_prime,
    }


def hz_scan(d: int, betatot_q: Fraction, n: int, loc_bound: Fraction, bound: int) -> Optional[int]:
    """Prime-by-prime scan of the inequality chain, counting finite orbits upward."""
    start = time.perf_counter()
    betatot_q = Fraction(betatot_q)
    threshold = n * Fraction(loc_bound)
    for p in range(2, bound + 1):
        if not isprime(p):
            continue
        # smallest K with K * beta_max >= beta_tot(sigma^p) >= p * beta_tot, beta_max <= 1
        k = 0
        while k < p * betatot_q:
            k += 1
        if d + 1 + 2 * k > threshold:
            logger.debug("Scan finished in %s", duration_fmt(time.perf_counter() - start))
            return p
    return None
