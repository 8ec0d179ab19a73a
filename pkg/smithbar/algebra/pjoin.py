"""
Projective join algebra on the basis of projective classes.

The join CP^m * CP^n = CP^{m+n+1} induces

    pj^* u^k = sum_{i+j=k-1} u1^i u2^j        in H^*(CP^m x CP^n)
    pj_*([CP^i] x [CP^j]) = [CP^{i+j+1}]

with H^*(CP^m x CP^n) = Z[u1, u2] / (u1^{m+1}, u2^{n+1}).
"""

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Mapping, Optional, Tuple

import sympy

from ..core.errors import AmbientOverflow, InputError, InvariantViolation
from ..utils.logger import get_logger

logger = get_logger(__name__)

U1, U2 = sympy.symbols('u1 u2')


@dataclass(frozen=True)
class TruncatedPoly:
    m: int
    n: int
    coefficients: Mapping[Tuple[int, int], int] = dc_field(default_factory=dict)

    def __post_init__(self):
        kept = {
            (i, j): int(c) for (i, j), c in self.coefficients.items()
            if c and 0 <= i <= self.m and 0 <= j <= self.n
        }
        object.__setattr__(self, 'coefficients', kept)

    @classmethod
    def monomial(cls, m: int, n: int, i: int, j: int, coef: int = 1) -> 'TruncatedPoly':
        return cls(m, n, {(i, j): coef})

    @classmethod
    def from_expr(cls, expr, m: int, n: int) -> 'TruncatedPoly':
        poly = sympy.Poly(sympy.expand(expr), U1, U2)
        return cls(m, n, {monom: int(c) for monom, c in poly.terms()})

    def to_expr(self):
        return sum((c * U1 ** i * U2 ** j for (i, j), c in self.coefficients.items()), sympy.Integer(0))

    def _check(self, other: 'TruncatedPoly') -> None:
        if (self.m, self.n) != (other.m, other.n):
            raise InputError(f"truncations ({self.m},{self.n}) and ({other.m},{other.n}) differ")

    def __add__(self, other: 'TruncatedPoly') -> 'TruncatedPoly':
        self._check(other)
        out: Dict[Tuple[int, int], int] = dict(self.coefficients)
        for key, c in other.coefficients.items():
            out[key] = out.get(key, 0) + c
        return TruncatedPoly(self.m, self.n, out)

    def __mul__(self, other: 'TruncatedPoly') -> 'TruncatedPoly':
        self._check(other)
        out: Dict[Tuple[int, int], int] = {}
        for (i1, j1), c1 in self.coefficients.items():
            for (i2, j2), c2 in other.coefficients.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return TruncatedPoly(self.m, self.n, out)

    def __str__(self) -> str:
        return format_poly(self)


@dataclass(frozen=True)
class ProjClass:
    ambient: int
    coefficients: Mapping[int, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        for i in self.coefficients:
            if not 0 <= i <= self.ambient:
                raise AmbientOverflow(f"[CP^{i}] does not live in CP^{self.ambient}")
        object.__setattr__(self, 'coefficients', {i: int(c) for i, c in self.coefficients.items() if c})

    @classmethod
    def basis(cls, i: int, ambient: Optional[int] = None) -> 'ProjClass':
        return cls(i if ambient is None else ambient, {i: 1})

    @property
    def degrees(self) -> List[int]:
        return sorted(2 * i for i in self.coefficients)

    def __add__(self, other: 'ProjClass') -> 'ProjClass':
        out = dict(self.coefficients)
        for i, c in other.coefficients.items():
            out[i] = out.get(i, 0) + c
        return ProjClass(max(self.ambient, other.ambient), out)

    def __rmul__(self, scalar: int) -> 'ProjClass':
        return ProjClass(self.ambient, {i: scalar * c for i, c in self.coefficients.items()})

    def __str__(self) -> str:
        return format_class(self)


def pj_pullback(k: int, m: int, n: int) -> TruncatedPoly:
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    return TruncatedPoly(m, n, {(i, k - 1 - i): 1 for i in range(k)})


def pj_pushforward(a: ProjClass, b: ProjClass) -> ProjClass:
    """Bilinear extension of [CP^i] x [CP^j] -> [CP^{i+j+1}] into CP^{m+n+1}."""
    ambient = a.ambient + b.ambient + 1
    out: Dict[int, int] = {}
    for i, ca in a.coefficients.items():
        for j, cb in b.coefficients.items():
            if i + j + 1 > ambient:
                raise AmbientOverflow(f"[CP^{i + j + 1}] exceeds CP^{ambient}")
            out[i + j + 1] = out.get(i + j + 1, 0) + ca * cb
    return ProjClass(ambient, out)


def associativity_check(i: int, j: int, k: int,
                        ambients: Optional[Tuple[int, int, int]] = None) -> bool:
    """Both bracketings of the triple join of [CP^i], [CP^j], [CP^k]."""
    m1, m2, m3 = ambients or (i, j, k)
    a, b, c = ProjClass.basis(i, m1), ProjClass.basis(j, m2), ProjClass.basis(k, m3)
    left = pj_pushforward(pj_pushforward(a, b), c)
    right = pj_pushforward(a, pj_pushforward(b, c))
    return left == right


def associativity_sweep(max_index: int) -> dict:
    failures = [
        (i, j, k)
        for i in range(max_index + 1)
        for j in range(max_index + 1)
        for k in range(max_index + 1)
        if not associativity_check(i, j, k)
    ]
    checked = (max_index + 1) ** 3
    logger.debug("Associativity sweep: %d triples, %d failures", checked, len(failures))
    return {'max_index': max_index, 'checked': checked, 'failures': failures, 'holds': not failures}


def join_witness(l_a: int, l_b: int) -> ProjClass:
    return pj_pushforward(ProjClass.basis(l_a - 1), ProjClass.basis(l_b - 1))


def homological_length_join(l_a: int, l_b: int) -> int:
    """Homological length of a join, verified on the top classes of the factors.

    Raises:
        InvariantViolation: the witness is not [CP^{l_a + l_b - 1}]
    """
    if l_a < 1 or l_b < 1:
        raise InputError(f"homological lengths must be positive, got {l_a} and {l_b}")
    witness = join_witness(l_a, l_b)
    if witness.coefficients != {l_a + l_b - 1: 1}:
        raise InvariantViolation('homlength', message=f"join witness is {witness}")
    return l_a + l_b


def binomial_identity_check(k: int, m: Optional[int] = None, n: Optional[int] = None) -> bool:
    """sum_{i=1}^{k} C(k,i) (u1-u2)^{i-1} u2^{k-i} against sum_{i+j=k-1} u1^i u2^j."""
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    m = k if m is None else m
    n = k if n is None else n
    lhs = sum(comb(k, i) * (U1 - U2) ** (i - 1) * U2 ** (k - i) for i in range(1, k + 1))
    return TruncatedPoly.from_expr(lhs, m, n) == pj_pullback(k, m, n)


def stabilize(cls: ProjClass, n: int) -> ProjClass:
    """Join with CP^n: [CP^i] -> [CP^{i+n+1}]."""
    return pj_pushforward(cls, ProjClass.basis(n))


def cap_product(cls: ProjClass, l: int) -> ProjClass:
    """[CP^k] cap u^l = [CP^{k-l}], zero when l > k."""
    if l < 0:
        raise InputError(f"cohomological degree must be nonnegative, got {l}")
    return ProjClass(cls.ambient, {i - l: c for i, c in cls.coefficients.items() if i >= l})


def pairing(k: int, cls: ProjClass) -> int:
    """<u^k, cls>."""
    return cls.coefficients.get(k, 0)


def homological_length(cls: ProjClass) -> int:
    return 1 + max(cls.coefficients) if cls.coefficients else 0


def _term(coef: int, body: str) -> str:
    if not body:
        return str(abs(coef))
    return body if abs(coef) == 1 else f"{abs(coef)}{body}"


def _join_terms(terms: List[Tuple[int, str]]) -> str:
    if not terms:
        return "0"
    out = ""
    for idx, (coef, body) in enumerate(terms):
        text = _term(coef, body)
        if idx == 0:
            out = text if coef > 0 else f"-{text}"
        else:
            out += f" + {text}" if coef > 0 else f" - {text}"
    return out


def format_poly(poly: TruncatedPoly) -> str:
    def monomial(i: int, j: int) -> str:
        parts = []
        for name, e in (('u1', i), ('u2', j)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return '*'.join(parts)

    keys = sorted(poly.coefficients, key=lambda ij: (-(ij[0] + ij[1]), -ij[0]))
    terms = [(poly.coefficients[key], monomial(*key)) for key in keys]
    return _join_terms(terms)


def format_class(cls: ProjClass) -> str:
    return _join_terms([(cls.coefficients[i], f"[CP^{i}]") for i in sorted(cls.coefficients)])
