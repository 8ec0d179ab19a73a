"""
Barcodes of filtered chain complexes.

Bars are half-open intervals [birth, death); an infinite death is stored as
``math.inf`` so bars of mixed finite and infinite length compare and sort
with ordinary ``Fraction`` arithmetic.
"""

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..algebra.field import Field, Raw, RATIONALS, parse_field
from ..core.errors import EndpointCollision, InputError
from ..utils.formatters import INFINITY, Bound, format_bound, parse_rational
from ..utils.logger import get_logger
from .complex import FilteredChainComplex, Generator, parse_complex

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class Bar:
    degree: int
    birth: Fraction
    death: Bound
    multiplicity: int = 1

    @property
    def is_infinite(self) -> bool:
        return self.death == INFINITY

    @property
    def length(self) -> Bound:
        return self.death - self.birth

    def contains(self, x: Fraction) -> bool:
        return self.birth <= x < self.death

    def endpoints(self) -> Tuple[Bound, ...]:
        return (self.birth,) if self.is_infinite else (self.birth, self.death)


@dataclass(frozen=True)
class Barcode:
    field: Field
    bars: Tuple[Bar, ...] = ()

    def __iter__(self):
        return iter(self.bars)

    def __len__(self) -> int:
        return sum(b.multiplicity for b in self.bars)

    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.bars})

    def in_degree(self, degree: int) -> List[Bar]:
        return [b for b in self.bars if b.degree == degree]

    def expanded(self) -> List[Bar]:
        """One unit-multiplicity bar per copy."""
        return [Bar(b.degree, b.birth, b.death) for b in self.bars for _ in range(b.multiplicity)]


def make_barcode(field: Field, bars: Iterable[Bar]) -> Barcode:
    """Merge equal intervals and sort canonically by (degree, birth, death)."""
    counts: Counter = Counter()
    for b in bars:
        if not b.birth < b.death:
            raise InputError(f"bar [{b.birth}, {b.death}) must have birth < death")
        if b.multiplicity < 1:
            raise InputError("bar multiplicity must be positive")
        counts[(b.degree, b.birth, b.death)] += b.multiplicity
    merged = [Bar(deg, birth, death, mult) for (deg, birth, death), mult in counts.items()]
    return Barcode(field, tuple(sorted(merged)))


# ---------------------------------------------------------------------------
# Column reduction
# ---------------------------------------------------------------------------

def _filtration_order(generators: Sequence[Generator]) -> List[int]:
    # faces precede cofaces at equal filtration, then input order
    return sorted(range(len(generators)),
                  key=lambda i: (generators[i].filtration, generators[i].degree, i))


def reduce_boundary(c: FilteredChainComplex) -> Tuple[List[int], Dict[int, int], List[Dict[int, Raw]]]:
    """Standard column reduction in filtration order.

    Returns:
        order: generator positions sorted into filtration order
        pairs: map from a birth column (row) to the column that kills it
        columns: reduced columns, indexed in filtration order
    """
    fld = c.field
    order = _filtration_order(c.generators)
    rank = {c.generators[i].id: r for r, i in enumerate(order)}

    columns: List[Dict[int, Raw]] = []
    for i in order:
        columns.append({rank[h]: coef for coef, h in c.boundary_of(c.generators[i].id)})

    pivots: Dict[int, int] = {}
    for j, col in enumerate(columns):
        while col:
            low = max(col)
            k = pivots.get(low)
            if k is None:
                pivots[low] = j
                break
            other = columns[k]
            factor = fld.div(col[low], other[low])
            for row, value in other.items():
                updated = fld.sub(col.get(row, fld.zero()), fld.mul(factor, value))
                if fld.is_zero(updated):
                    col.pop(row, None)
                else:
                    col[row] = updated
    return order, pivots, columns


def compute_barcode(c: FilteredChainComplex) -> Barcode:
    """Barcode of the sublevel persistence module of ``c``."""
    order, pivots, columns = reduce_boundary(c)
    gens = [c.generators[i] for i in order]
    bars: List[Bar] = []
    for row, col in pivots.items():
        birth, death = gens[row].filtration, gens[col].filtration
        if birth < death:
            bars.append(Bar(gens[row].degree, birth, death))
    for j, col in enumerate(columns):
        if not col and j not in pivots:
            bars.append(Bar(gens[j].degree, gens[j].filtration, INFINITY))
    logger.debug("Reduced %d columns over %s into %d bars", len(columns), c.field.spec, len(bars))
    return make_barcode(c.field, bars)


def total_dimension(b: Barcode) -> int:
    """Dimension of the homology at filtration +inf."""
    return sum(bar.multiplicity for bar in b if bar.is_infinite)


def betti_at(b: Barcode, t: Fraction) -> Dict[int, int]:
    """Per-degree dimension of the module at level ``t``."""
    out: Dict[int, int] = {}
    for bar in b:
        if bar.contains(t):
            out[bar.degree] = out.get(bar.degree, 0) + bar.multiplicity
    return out


def euler_at(b: Barcode, t: Fraction) -> int:
    return sum((-1) ** deg * count for deg, count in betti_at(b, t).items())


# ---------------------------------------------------------------------------
# Window dimension
# ---------------------------------------------------------------------------

def window_dimension(b: Barcode, a: Fraction, t: Fraction) -> int:
    """Number of bars, with multiplicity, containing exactly one of ``a`` and ``t``.

    Raises:
        EndpointCollision: ``a`` or ``t`` is an endpoint of some bar
    """
    if not a < t:
        raise InputError(f"window ({a}, {t}) must satisfy a < t")
    total = 0
    for bar in b:
        if a in bar.endpoints() or t in bar.endpoints():
            raise EndpointCollision(
                f"window ({format_bound(a)}, {format_bound(t)}) hits an endpoint of "
                f"[{format_bound(bar.birth)}, {format_bound(bar.death)})"
            )
        if bar.contains(a) != bar.contains(t):
            total += bar.multiplicity
    return total


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def barcode_to_json(b: Barcode) -> dict:
    return {
        'field': b.field.spec,
        'bars': [
            {
                'degree': bar.degree,
                'birth': format_bound(bar.birth),
                'death': format_bound(bar.death),
                'mult': bar.multiplicity,
            }
            for bar in b
        ],
    }


def barcode_from_json(data: dict) -> Barcode:
    try:
        fld = parse_field(str(data.get('field', 'q')))
        bars = [
            Bar(int(item['degree']),
                parse_rational(item['birth']),
                parse_rational(item['death'], allow_inf=True),
                int(item.get('mult', 1)))
            for item in data.get('bars', [])
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed barcode document: {e}") from e
    return make_barcode(fld, bars)


# ---------------------------------------------------------------------------
# Cross-field comparison and perturbation
# ---------------------------------------------------------------------------

def compare_fields(text: str, specs: Sequence[str]) -> dict:
    """Barcodes of one integer-coefficient complex over several fields, compared with Q."""
    reference = compute_barcode(parse_complex(text, field=RATIONALS))
    ref_bars = set(reference.bars)
    fields = {}
    for spec in specs:
        fld = parse_field(spec)
        b = compute_barcode(parse_complex(text, field=fld))
        fields[fld.spec] = {
            'agrees': set(b.bars) == ref_bars,
            'barcode': barcode_to_json(b),
        }
    return {'reference': barcode_to_json(reference), 'fields': fields}


def perturb_filtration(c: FilteredChainComplex, eps: Fraction,
                       rng: Optional[random.Random] = None) -> FilteredChainComplex:
    """Move each filtration value by at most ``eps``, keeping faces no later than cofaces."""
    rng = rng or random.Random(0)
    eps = Fraction(eps)
    new_value: Dict[str, Fraction] = {}
    for g in sorted(c.generators, key=lambda g: g.degree):
        shifted = g.filtration + eps * Fraction(rng.randint(-1000, 1000), 1000)
        faces = [new_value[h] for _, h in c.boundary_of(g.id)]
        new_value[g.id] = max([shifted] + faces)
    gens = tuple(Generator(g.id, g.degree, new_value[g.id]) for g in c.generators)
    return FilteredChainComplex(c.field, gens, dict(c.boundary), None)
