"""
Filtered chain complexes over an exact field.

Text format (UTF-8, line oriented, ``#`` starts a comment)::

    field q
    gen y 1 1
    gen z 2 2
    bnd z 2 y
    act 2
    perm y y 1

``act <p>`` opens an optional action block whose ``perm`` lines give the
image and sign of each moved or sign-changed generator; unlisted generators
are fixed with sign 1.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import isprime

from ..algebra.field import Field, Raw, RATIONALS, parse_field
from ..core.errors import (
    ComplexSyntaxError, FieldMismatch, InvalidField, InvariantViolation,
    NotClosedUnderBoundary, SmithbarError,
)
from ..utils.formatters import format_rational, parse_rational
from ..utils.logger import get_logger

logger = get_logger(__name__)

Chain = Dict[str, Raw]


@dataclass(frozen=True)
class Generator:
    id: str
    degree: int
    filtration: Fraction


@dataclass(frozen=True)
class CyclicAction:
    """A Z/p action permuting generators up to unit signs."""

    order: int
    permutation: Mapping[str, str] = dc_field(default_factory=dict)
    sign: Mapping[str, Raw] = dc_field(default_factory=dict)

    def image(self, gid: str, field: Field) -> Tuple[str, Raw]:
        return self.permutation.get(gid, gid), self.sign.get(gid, field.one())

    def is_fixed(self, gid: str) -> bool:
        return self.permutation.get(gid, gid) == gid


@dataclass(frozen=True)
class FilteredChainComplex:
    field: Field
    generators: Tuple[Generator, ...]
    boundary: Mapping[str, Tuple[Tuple[Raw, str], ...]]
    action: Optional[CyclicAction] = None

    @cached_property
    def by_id(self) -> Dict[str, Generator]:
        return {g.id: g for g in self.generators}

    @cached_property
    def position(self) -> Dict[str, int]:
        return {g.id: i for i, g in enumerate(self.generators)}

    def boundary_of(self, gid: str) -> Tuple[Tuple[Raw, str], ...]:
        return self.boundary.get(gid, ())

    def __len__(self) -> int:
        return len(self.generators)


# ---------------------------------------------------------------------------
# Parsing and serialization
# ---------------------------------------------------------------------------

def _tokens(text: str) -> Iterable[Tuple[int, List[str]]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if content:
            yield lineno, content.split()


def parse_complex(text, field: Optional[Field] = None) -> FilteredChainComplex:
    """Parse and validate a complex.

    Args:
        text: complex file content (``str`` or UTF-8 ``bytes``)
        field: overrides the ``field`` header when given

    Raises:
        ComplexSyntaxError: malformed line
        InvariantViolation: any complex or action invariant fails
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode('utf-8')

    header: Optional[Field] = None
    gens: List[Tuple[int, str, int, Fraction]] = []
    bnds: List[Tuple[int, str, List[str]]] = []
    order: Optional[int] = None
    perms: List[Tuple[int, str, str, str]] = []

    for lineno, toks in _tokens(text):
        keyword = toks[0]
        if keyword == 'field':
            if len(toks) != 2:
                raise ComplexSyntaxError(lineno, "expected 'field <spec>'")
            if header is not None:
                raise ComplexSyntaxError(lineno, "duplicate field header")
            try:
                header = parse_field(toks[1])
            except InvalidField as e:
                raise ComplexSyntaxError(lineno, str(e)) from e
        elif keyword == 'gen':
            if len(toks) != 4:
                raise ComplexSyntaxError(lineno, "expected 'gen <id> <degree> <filtration>'")
            try:
                degree = int(toks[2])
                filtration = parse_rational(toks[3])
            except (ValueError, SmithbarError) as e:
                raise ComplexSyntaxError(lineno, f"bad degree or filtration: {e}") from e
            gens.append((lineno, toks[1], degree, filtration))
        elif keyword == 'bnd':
            if len(toks) < 4 or len(toks) % 2:
                raise ComplexSyntaxError(lineno, "expected 'bnd <id> (<coef> <id>)+'")
            bnds.append((lineno, toks[1], toks[2:]))
        elif keyword == 'act':
            if len(toks) != 2 or not toks[1].isdigit():
                raise ComplexSyntaxError(lineno, "expected 'act <order>'")
            if order is not None:
                raise ComplexSyntaxError(lineno, "duplicate action block")
            order = int(toks[1])
            if not isprime(order):
                raise ComplexSyntaxError(lineno, f"action order {order} is not prime")
        elif keyword == 'perm':
            if order is None:
                raise ComplexSyntaxError(lineno, "'perm' outside an action block")
            if len(toks) != 4:
                raise ComplexSyntaxError(lineno, "expected 'perm <id> <id> <coef>'")
            perms.append((lineno, toks[1], toks[2], toks[3]))
        else:
            raise ComplexSyntaxError(lineno, f"unknown keyword {keyword!r}")

    fld = field or header or RATIONALS

    generators = []
    seen = set()
    for _, gid, degree, filtration in gens:
        if gid in seen:
            raise InvariantViolation('unique', [gid], "duplicate generator id")
        seen.add(gid)
        generators.append(Generator(gid, degree, filtration))

    boundary: Dict[str, Tuple[Tuple[Raw, str], ...]] = {}
    for lineno, gid, rest in bnds:
        if gid in boundary:
            raise ComplexSyntaxError(lineno, f"duplicate boundary for {gid!r}")
        chain: Chain = {}
        for coef_text, hid in zip(rest[0::2], rest[1::2]):
            try:
                coef = fld.parse(coef_text)
            except SmithbarError as e:
                raise ComplexSyntaxError(lineno, f"bad coefficient {coef_text!r}: {e}") from e
            chain[hid] = fld.add(chain.get(hid, fld.zero()), coef)
        boundary[gid] = tuple((c, h) for h, c in chain.items() if not fld.is_zero(c))

    action = None
    if order is not None:
        permutation: Dict[str, str] = {}
        sign: Dict[str, Raw] = {}
        for lineno, src, dst, coef_text in perms:
            if src in permutation:
                raise ComplexSyntaxError(lineno, f"duplicate perm entry for {src!r}")
            try:
                sign[src] = fld.parse(coef_text)
            except SmithbarError as e:
                raise ComplexSyntaxError(lineno, f"bad sign {coef_text!r}: {e}") from e
            permutation[src] = dst
        action = CyclicAction(order, permutation, sign)

    c = FilteredChainComplex(fld, tuple(generators), boundary, action)
    validate_complex(c)
    if action is not None:
        validate_action(c, action)
    logger.debug("Parsed complex over %s with %d generators", fld.spec, len(c))
    return c


def serialize_complex(c: FilteredChainComplex) -> str:
    """Write ``c`` back in the text format accepted by :func:`parse_complex`."""
    fld = c.field
    lines = [f"field {fld.spec}"]
    for g in c.generators:
        lines.append(f"gen {g.id} {g.degree} {format_rational(g.filtration)}")
    for g in c.generators:
        terms = c.boundary_of(g.id)
        if terms:
            body = ' '.join(f"{fld.format(coef)} {hid}" for coef, hid in terms)
            lines.append(f"bnd {g.id} {body}")
    if c.action is not None:
        lines.append(f"act {c.action.order}")
        for g in c.generators:
            if g.id in c.action.permutation or g.id in c.action.sign:
                dst, s = c.action.image(g.id, fld)
                lines.append(f"perm {g.id} {dst} {fld.format(s)}")
    return '\n'.join(lines) + '\n'


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _apply_boundary(c: FilteredChainComplex, chain: Chain) -> Chain:
    fld = c.field
    out: Chain = {}
    for gid, coef in chain.items():
        for bcoef, hid in c.boundary_of(gid):
            out[hid] = fld.add(out.get(hid, fld.zero()), fld.mul(coef, bcoef))
    return {h: v for h, v in out.items() if not fld.is_zero(v)}


def validate_complex(c: FilteredChainComplex) -> None:
    """Check ids, degrees, filtration compatibility and that the boundary squares to zero."""
    by_id = c.by_id
    for gid in c.boundary:
        if gid not in by_id:
            raise InvariantViolation('unknown', [gid], "boundary of an undeclared generator")
    for g in c.generators:
        for _, hid in c.boundary_of(g.id):
            h = by_id.get(hid)
            if h is None:
                raise InvariantViolation('unknown', [g.id, hid], "boundary names an undeclared generator")
            if h.degree != g.degree - 1:
                raise InvariantViolation('degree', [g.id, hid], "boundary must lower degree by 1")
            if h.filtration > g.filtration:
                raise InvariantViolation('filtration', [g.id, hid], "face enters later than its coface")
    for g in c.generators:
        chain = dict((hid, coef) for coef, hid in c.boundary_of(g.id))
        if _apply_boundary(c, chain):
            raise InvariantViolation('boundary-squared', [g.id], "boundary does not square to zero")


def validate_action(c: FilteredChainComplex, a: CyclicAction) -> None:
    """Check that ``a`` is a Z/p action by signed permutations commuting with the boundary."""
    fld = c.field
    by_id = c.by_id
    for src, dst in a.permutation.items():
        if src not in by_id or dst not in by_id:
            raise InvariantViolation('action-unknown', [src, dst], "action names an undeclared generator")
    for gid, s in a.sign.items():
        if fld.is_zero(s):
            raise InvariantViolation('action-sign', [gid], "action sign must be a unit")
    images = [a.image(g.id, fld)[0] for g in c.generators]
    if len(set(images)) != len(images):
        raise InvariantViolation('action-bijective', [], "action is not a permutation")
    for g in c.generators:
        dst = by_id[a.image(g.id, fld)[0]]
        if dst.degree != g.degree:
            raise InvariantViolation('action-degree', [g.id, dst.id], "action must preserve degree")
        if dst.filtration != g.filtration:
            raise InvariantViolation('action-filtration', [g.id, dst.id], "action must preserve filtration")

    for g in c.generators:
        gid, coef = g.id, fld.one()
        for _ in range(a.order):
            dst, s = a.image(gid, fld)
            gid, coef = dst, fld.mul(coef, s)
        if gid != g.id or coef != fld.one():
            raise InvariantViolation('action-order', [g.id], f"action does not have order dividing {a.order}")

    for g in c.generators:
        # a(bd g) == bd(a g)
        lhs: Chain = {}
        for bcoef, hid in c.boundary_of(g.id):
            dst, s = a.image(hid, fld)
            lhs[dst] = fld.add(lhs.get(dst, fld.zero()), fld.mul(bcoef, s))
        lhs = {h: v for h, v in lhs.items() if not fld.is_zero(v)}
        dst, s = a.image(g.id, fld)
        rhs = {h: fld.mul(s, v) for h, v in _apply_boundary(c, {dst: fld.one()}).items()}
        if lhs != rhs:
            raise InvariantViolation('action-chain-map', [g.id], "action does not commute with the boundary")


# ---------------------------------------------------------------------------
# Derived complexes
# ---------------------------------------------------------------------------

def relabel(c: FilteredChainComplex, mapping: Mapping[str, str]) -> FilteredChainComplex:
    """Rename generators; ids missing from ``mapping`` are kept."""
    ren = lambda gid: mapping.get(gid, gid)
    gens = tuple(Generator(ren(g.id), g.degree, g.filtration) for g in c.generators)
    bnd = {ren(gid): tuple((coef, ren(h)) for coef, h in terms) for gid, terms in c.boundary.items()}
    action = None
    if c.action is not None:
        action = CyclicAction(
            c.action.order,
            {ren(s): ren(d) for s, d in c.action.permutation.items()},
            {ren(s): v for s, v in c.action.sign.items()},
        )
    return FilteredChainComplex(c.field, gens, bnd, action)


def reorder(c: FilteredChainComplex, order: Sequence[int]) -> FilteredChainComplex:
    """Permute the input order of generators (``order[i]`` is the old position)."""
    gens = tuple(c.generators[i] for i in order)
    return FilteredChainComplex(c.field, gens, dict(c.boundary), c.action)


def with_field(c: FilteredChainComplex, fld: Field) -> FilteredChainComplex:
    """Reinterpret integer boundary coefficients of a rational complex over ``fld``."""
    if not c.field.is_rational:
        raise FieldMismatch(f"can only change field of a complex over q, not {c.field.spec}")
    bnd = {}
    for gid, terms in c.boundary.items():
        mapped = tuple((fld.coerce(coef), h) for coef, h in terms)
        bnd[gid] = tuple((coef, h) for coef, h in mapped if not fld.is_zero(coef))
    out = FilteredChainComplex(fld, c.generators, bnd, None)
    validate_complex(out)
    return out


def euler_curve(c: FilteredChainComplex, t: Fraction) -> int:
    """Alternating count of generators with filtration at most ``t``."""
    return sum((-1) ** g.degree for g in c.generators if g.filtration <= t)


def fixed_subcomplex(c: FilteredChainComplex, a: Optional[CyclicAction] = None) -> FilteredChainComplex:
    """The subcomplex spanned by generators the action fixes.

    Raises:
        NotClosedUnderBoundary: a fixed generator has a moved face
    """
    a = a or c.action
    if a is None:
        return c
    fixed = [g for g in c.generators if a.is_fixed(g.id)]
    keep = {g.id for g in fixed}
    for g in fixed:
        moved = [h for _, h in c.boundary_of(g.id) if h not in keep]
        if moved:
            raise NotClosedUnderBoundary(
                f"fixed generator {g.id} has faces outside the fixed set: {', '.join(moved)}"
            )
    bnd = {g.id: c.boundary_of(g.id) for g in fixed if c.boundary_of(g.id)}
    return FilteredChainComplex(c.field, tuple(fixed), bnd, None)


def smith_dimension_check(c: FilteredChainComplex, a: Optional[CyclicAction] = None) -> dict:
    """Compare total homology of ``c`` with that of its fixed subcomplex over F_p."""
    from .persistence import compute_barcode, total_dimension

    a = a or c.action
    if a is None:
        raise InvariantViolation('action-missing', [], "no action given")
    if c.field.p != a.order:
        raise FieldMismatch(f"complex over {c.field.spec} but action of order {a.order}")

    fixed = fixed_subcomplex(c, a)
    dim_total = total_dimension(compute_barcode(c))
    dim_fixed = total_dimension(compute_barcode(fixed))
    report = {
        'p': a.order,
        'dimTotal': dim_total,
        'dimFixed': dim_fixed,
        'fixedGenerators': len(fixed),
        'holds': dim_total >= dim_fixed,
    }
    if not report['holds']:
        logger.warning("Smith inequality fails: %d < %d", dim_total, dim_fixed)
    return report
