"""
Z-periodic barcodes of Hamiltonian diffeomorphisms of CP^d.

A periodic barcode is stored through orbit representatives: finite bars with
birth in [0, 1) and the d+1 spectral values c_0 <= ... <= c_d. The Z-action
sends a bar [a, b) of degree k to [a+1, b+1) of degree k + 2(d+1), and the
infinite bar born at c_k sits in degree 2k with c_{k+d+1} = c_k + 1.
"""

import math
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..algebra.field import Field, parse_field
from ..core.errors import (
    ConsistencyViolation, EndpointCollision, FieldMismatch, InputError,
)
from ..topology.persistence import Bar, Barcode, make_barcode, window_dimension
from ..utils.formatters import INFINITY, format_rational, parse_rational
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class FiniteOrbit:
    birth: Fraction
    death: Fraction
    degree: int

    @property
    def length(self) -> Fraction:
        return self.death - self.birth


@dataclass(frozen=True)
class PeriodicBarcode:
    d: int
    field: Field
    finite_orbits: Tuple[FiniteOrbit, ...] = ()
    spectral: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.d < 0:
            raise InputError(f"d must be nonnegative, got {self.d}")
        if len(self.spectral) != self.d + 1:
            raise InputError(f"expected {self.d + 1} spectral values, got {len(self.spectral)}")
        if any(x > y for x, y in zip(self.spectral, self.spectral[1:])):
            raise InputError("spectral values must be nondecreasing")
        if self.spectral[-1] >= self.spectral[0] + 1:
            raise InputError("spectral values must lie in one period [c_0, c_0 + 1)")
        for orbit in self.finite_orbits:
            if not 0 <= orbit.birth < 1:
                raise InputError(f"finite orbit birth {orbit.birth} outside [0, 1)")
            if not orbit.death > orbit.birth:
                raise InputError(f"finite orbit [{orbit.birth}, {orbit.death}) is empty")

    @property
    def K(self) -> int:
        return len(self.finite_orbits)


@dataclass(frozen=True)
class LocalDatum:
    fixed_point_id: str
    action_class: Fraction
    loc_dims: Mapping[int, int] = dc_field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return sum(self.loc_dims.values())


@dataclass(frozen=True)
class BetaStats:
    betas: Tuple[Fraction, ...]
    beta_max: Fraction
    beta_tot: Fraction
    K: int


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def periodic_from_json(data: dict) -> PeriodicBarcode:
    try:
        orbits = tuple(
            FiniteOrbit(parse_rational(o['birth']), parse_rational(o['death']), int(o['degree']))
            for o in data.get('finite_orbits', [])
        )
        return PeriodicBarcode(
            d=int(data['d']),
            field=parse_field(str(data.get('field', 'q'))),
            finite_orbits=orbits,
            spectral=tuple(parse_rational(c) for c in data['spectral']),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed periodic barcode document: {e}") from e


def periodic_to_json(pb: PeriodicBarcode) -> dict:
    return {
        'd': pb.d,
        'field': pb.field.spec,
        'finite_orbits': [
            {'birth': format_rational(o.birth), 'death': format_rational(o.death), 'degree': o.degree}
            for o in pb.finite_orbits
        ],
        'spectral': [format_rational(c) for c in pb.spectral],
    }


def local_data_from_json(items: Iterable[dict]) -> List[LocalDatum]:
    try:
        return [
            LocalDatum(str(item['id']), parse_rational(item['action']) % 1,
                       {int(k): int(v) for k, v in item.get('loc_dims', {0: 1}).items()})
            for item in items
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed local data: {e}") from e


# ---------------------------------------------------------------------------
# Spectral sequence and expansion
# ---------------------------------------------------------------------------

def spectral_value(pb: PeriodicBarcode, k: int) -> Fraction:
    """c_k for any integer k, through c_{k+d+1} = c_k + 1."""
    shift, r = divmod(k, pb.d + 1)
    return pb.spectral[r] + shift


def spectral_window(pb: PeriodicBarcode, lo: Fraction, hi: Fraction) -> List[Tuple[int, Fraction]]:
    """All (k, c_k) with lo <= c_k <= hi, ordered by k."""
    out = []
    for r, c in enumerate(pb.spectral):
        for shift in range(math.ceil(lo - c), math.floor(hi - c) + 1):
            out.append((r + shift * (pb.d + 1), c + shift))
    return sorted(out)


def expand_window(pb: PeriodicBarcode, a: Fraction, t: Fraction) -> Barcode:
    """Z-translates of all orbit representatives meeting [a, t].

    Infinite bars are included when born inside [a, t]; those born earlier
    contain both ends of the window and never change a window count.
    """
    if not a < t:
        raise InputError(f"window ({a}, {t}) must satisfy a < t")
    period = 2 * (pb.d + 1)
    bars: List[Bar] = []
    for orbit in pb.finite_orbits:
        for j in range(math.floor(a - orbit.death) + 1, math.floor(t - orbit.birth) + 1):
            bars.append(Bar(orbit.degree + period * j, orbit.birth + j, orbit.death + j))
    for k, c in spectral_window(pb, a, t):
        bars.append(Bar(2 * k, c, INFINITY))
    return make_barcode(pb.field, bars)


def endpoint_classes(pb: PeriodicBarcode) -> Counter:
    """Multiset of bar endpoint positions modulo 1."""
    classes: Counter = Counter()
    for orbit in pb.finite_orbits:
        classes[orbit.birth % 1] += 1
        classes[orbit.death % 1] += 1
    for c in pb.spectral:
        classes[c % 1] += 1
    return classes


def window_dimension_periodic(pb: PeriodicBarcode, a: Fraction, t: Fraction) -> int:
    """Window dimension of the full Z-periodic barcode."""
    classes = endpoint_classes(pb)
    for x in (a, t):
        if x % 1 in classes:
            raise EndpointCollision(f"{format_rational(x)} is a bar endpoint modulo 1")
    return window_dimension(expand_window(pb, a, t), a, t)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

def beta_stats(pb: PeriodicBarcode) -> BetaStats:
    betas = tuple(sorted(o.length for o in pb.finite_orbits))
    return BetaStats(
        betas=betas,
        beta_max=betas[-1] if betas else Fraction(0),
        beta_tot=sum(betas, Fraction(0)),
        K=len(betas),
    )


def homological_count(pb: PeriodicBarcode) -> int:
    """N = d + 1 + 2K."""
    return pb.d + 1 + 2 * pb.K


def assemble_N(d: int, data: Sequence[LocalDatum], pb: Optional[PeriodicBarcode] = None) -> int:
    """Sum of local homology dimensions, cross-checked against ``pb`` when given.

    Raises:
        ConsistencyViolation: counts or endpoint classes disagree with ``pb``
    """
    total = sum(datum.dimension for datum in data)
    if pb is None:
        return total
    if pb.d != d:
        raise ConsistencyViolation(f"local data for d={d} but barcode has d={pb.d}")
    expected = homological_count(pb)
    if total != expected:
        raise ConsistencyViolation(f"N={total} from local data but d+1+2K={expected}")
    weights: Counter = Counter()
    for datum in data:
        weights[datum.action_class % 1] += datum.dimension
    weights = +weights
    if weights != endpoint_classes(pb):
        raise ConsistencyViolation("endpoint positions mod 1 do not match action classes")
    return total


def betamax_validate(pb: PeriodicBarcode) -> dict:
    """Check beta_max <= 1 and beta_max <= c_{d+k} - c_k over one period."""
    stats = beta_stats(pb)
    refined = [spectral_value(pb, pb.d + k) - spectral_value(pb, k) for k in range(pb.d + 1)]
    bound_1 = stats.beta_max <= 1
    refined_ok = stats.beta_max <= min(refined)
    too_long = [o for o in pb.finite_orbits if o.length > 1]
    for o in too_long:
        logger.warning("Finite orbit [%s, %s) longer than 1", o.birth, o.death)
    return {
        'beta_max': format_rational(stats.beta_max),
        'bound_1': bound_1,
        'refined_bounds': [format_rational(x) for x in refined],
        'refined_holds': refined_ok,
        'holds': bound_1 and refined_ok,
    }


def window_integral(pb: PeriodicBarcode, a: Fraction, n: int) -> Fraction:
    """Exact integral over t in [0, 1] of the window dimension on (a+t, a+t+n)."""
    if n < 1:
        raise InputError(f"n must be a positive integer, got {n}")
    cuts = {Fraction(0), Fraction(1)} | {(e - a) % 1 for e in endpoint_classes(pb)}
    cuts = sorted(cuts)
    total = Fraction(0)
    for lo, hi in zip(cuts, cuts[1:]):
        mid = a + (lo + hi) / 2
        total += (hi - lo) * window_dimension_periodic(pb, mid, mid + n)
    return total


def betatot_integral(pb: PeriodicBarcode, a: Fraction, n: int) -> Fraction:
    """Total finite bar length recovered as (integral - n(d+1)) / 2."""
    return (window_integral(pb, a, n) - n * (pb.d + 1)) / 2


# ---------------------------------------------------------------------------
# Smith-type barcode inequalities
# ---------------------------------------------------------------------------

def smith_shifts(p: int) -> List[Fraction]:
    """Window shifts summed on the right-hand side for the prime ``p``."""
    if p == 2:
        return [Fraction(0), Fraction(1, 2)]
    half = (p - 1) // 2
    return [Fraction(q, p) for q in range(-half, half + 1)]


def smith_barcode_check(pb: PeriodicBarcode, pb_p: PeriodicBarcode, p: int,
                        windows: Sequence[Tuple[Fraction, Fraction]]) -> dict:
    """Compare the barcode of the p-th iterate with p shifted copies of the barcode."""
    if pb.d != pb_p.d:
        raise ConsistencyViolation(f"barcodes for d={pb.d} and d={pb_p.d}")
    if pb.field != pb_p.field or pb.field.p != p:
        raise FieldMismatch(f"both barcodes must be over f{p}, got {pb.field.spec} and {pb_p.field.spec}")

    beta_tot = beta_stats(pb).beta_tot
    beta_tot_p = beta_stats(pb_p).beta_tot
    total_holds = beta_tot_p >= p * beta_tot

    shifts = smith_shifts(p)
    rows = []
    for a, b in windows:
        lhs = window_dimension_periodic(pb_p, p * a, p * b)
        rhs = sum(window_dimension_periodic(pb, a + s, b + s) for s in shifts)
        rows.append({
            'a': format_rational(a),
            'b': format_rational(b),
            'lhs': lhs,
            'rhs': rhs,
            'holds': lhs >= rhs,
        })
    holds = total_holds and all(row['holds'] for row in rows)
    if not holds:
        logger.warning("Smith barcode check violated for p=%d", p)
    return {
        'p': p,
        'beta_tot': format_rational(beta_tot),
        'beta_tot_p': format_rational(beta_tot_p),
        'total_holds': total_holds,
        'windows': rows,
        'holds': holds,
    }


def random_smith_windows(pb: PeriodicBarcode, pb_p: PeriodicBarcode, p: int, samples: int,
                         rng: Optional[random.Random] = None,
                         denominator: int = 10 ** 6) -> List[Tuple[Fraction, Fraction]]:
    """Random windows avoiding every endpoint used by :func:`smith_barcode_check`."""
    rng = rng or random.Random(0)
    bad = set(endpoint_classes(pb))
    bad_p = set(endpoint_classes(pb_p))
    shifts = smith_shifts(p)

    def clear(a: Fraction, b: Fraction) -> bool:
        if (p * a) % 1 in bad_p or (p * b) % 1 in bad_p:
            return False
        return all((x + s) % 1 not in bad for x in (a, b) for s in shifts)

    windows: List[Tuple[Fraction, Fraction]] = []
    attempts = 0
    while len(windows) < samples:
        attempts += 1
        if attempts > 100 * (samples + 1):
            raise InputError("could not sample windows avoiding the bar endpoints")
        a = Fraction(rng.randrange(-2 * denominator, 2 * denominator), denominator)
        b = a + Fraction(rng.randrange(1, 3 * denominator), denominator)
        if clear(a, b):
            windows.append((a, b))
    return windows
