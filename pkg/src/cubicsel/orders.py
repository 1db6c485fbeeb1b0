"""Cubic etale algebras over the local field and their orders.

The two shapes in scope are the split algebra F^3 and the unramified
cubic field extension; an order is parametrized by exponents (a, b)
relative to a good basis: (1,1,1), (0,p^a,0), (0,0,p^b) in the split
case and 1, p^a*alpha, p^b*alpha^2 in the inert case, where alpha has
minimal polynomial x^3 - a2 x^2 - a1 x - a0 irreducible mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .matrices import Mat3, howell_form, module_contains
from .rings import (
    LocalElem,
    PrecisionTooLow,
    RingSpec,
    Valuation,
    exact_div_pk,
    int_valuation,
    reduce_mod_p,
    valuation,
)


class InvalidParameters(ValueError):
    """Order parameters violate the shape constraints."""


class NotAnOrder(ValueError):
    """The given module is not a ring of full rank containing 1."""


class AlgebraKind(Enum):
    SPLIT = "split"
    INERT = "inert"


@dataclass(frozen=True)
class CubicAlgebraLocal:
    """Split algebra F^3, or the field F[alpha] with alpha^3 = a2 alpha^2
    + a1 alpha + a0 and irreducible residue minimal polynomial."""

    spec: RingSpec
    kind: AlgebraKind
    a0: LocalElem | None = None
    a1: LocalElem | None = None
    a2: LocalElem | None = None

    @classmethod
    def split(cls, spec: RingSpec) -> "CubicAlgebraLocal":
        return cls(spec=spec, kind=AlgebraKind.SPLIT)

    @classmethod
    def inert(cls, spec: RingSpec, a0, a1, a2) -> "CubicAlgebraLocal":
        a0, a1, a2 = spec.of(a0), spec.of(a1), spec.of(a2)
        r0, r1, r2 = (reduce_mod_p(x) for x in (a0, a1, a2))
        for t in spec.residue_elements():
            if (t * t * t - r2 * t * t - r1 * t - r0).is_zero():
                raise InvalidParameters(
                    "x^3 - a2 x^2 - a1 x - a0 has a residue root, so the "
                    "cubic extension is not a field")
        return cls(spec=spec, kind=AlgebraKind.INERT, a0=a0, a1=a1, a2=a2)

    def min_poly_coeffs(self) -> tuple[LocalElem, LocalElem, LocalElem]:
        if self.kind is not AlgebraKind.INERT:
            raise InvalidParameters("the split algebra has no generator")
        return self.a0, self.a1, self.a2

    def alpha_mul(self, x: tuple, y: tuple) -> tuple:
        """Product of two elements given in coordinates on 1, alpha, alpha^2."""
        a0, a1, a2 = self.min_poly_coeffs()
        spec = self.spec
        prod = [spec.zero()] * 5
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                prod[i + j] = prod[i + j] + xi * yj
        # alpha^3 = a2 alpha^2 + a1 alpha + a0;
        # alpha^4 = (a2^2 + a1) alpha^2 + (a1 a2 + a0) alpha + a0 a2
        c0, c1, c2, c3, c4 = prod
        c0 = c0 + a0 * c3 + (a0 * a2) * c4
        c1 = c1 + a1 * c3 + (a1 * a2 + a0) * c4
        c2 = c2 + a2 * c3 + (a2 * a2 + a1) * c4
        return (c0, c1, c2)


@dataclass(frozen=True)
class LocalOrder:
    """An order of shape (a, b) in a cubic etale algebra."""

    algebra: CubicAlgebraLocal
    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise InvalidParameters("exponents must be nonnegative")
        if self.algebra.kind is AlgebraKind.INERT and not (self.a <= self.b <= 2 * self.a):
            raise InvalidParameters(
                f"inert orders require a <= b <= 2a, got (a, b) = ({self.a}, {self.b})")

    @property
    def spec(self) -> RingSpec:
        return self.algebra.spec

    @property
    def kind(self) -> AlgebraKind:
        return self.algebra.kind


@dataclass(frozen=True)
class StructureConstants:
    """Products e_i e_j expanded on the basis (e1, e2, e3); table[i][j]
    holds the coefficient triple of e_{i+1} e_{j+1}."""

    table: tuple[tuple[tuple[LocalElem, LocalElem, LocalElem], ...], ...]

    def product(self, i: int, j: int) -> tuple[LocalElem, LocalElem, LocalElem]:
        return self.table[i - 1][j - 1]


def structure_constants(order: LocalOrder) -> StructureConstants:
    """Multiplication table of the basis (e1 = 1, e2, e3)."""
    spec = order.spec
    zero, one = spec.zero(), spec.one()
    a, b = order.a, order.b

    def triple(c1=None, c2=None, c3=None):
        return (c1 or zero, c2 or zero, c3 or zero)

    if order.kind is AlgebraKind.SPLIT:
        e22 = triple(c2=spec.pi_pow(a))
        e23 = triple()
        e33 = triple(c3=spec.pi_pow(b))
    else:
        a0, a1, a2 = order.algebra.min_poly_coeffs()
        e22 = triple(c3=spec.pi_pow(2 * a - b))
        e23 = triple(a0 * spec.pi_pow(a + b), a1 * spec.pi_pow(b), a2 * spec.pi_pow(a))
        e33 = triple((a0 * a2) * spec.pi_pow(2 * b),
                     (a0 + a1 * a2) * spec.pi_pow(2 * b - a),
                     (a1 + a2 * a2) * spec.pi_pow(b))
    ident = lambda k: tuple(one if t == k else zero for t in range(3))
    row1 = (ident(0), ident(1), ident(2))
    row2 = (ident(1), e22, e23)
    row3 = (ident(2), e23, e33)
    return StructureConstants(table=(row1, row2, row3))


def regular_rep(order: LocalOrder) -> tuple[Mat3, Mat3]:
    """Matrices of multiplication by e2 and e3 on the basis (e1, e2, e3);
    column j holds the coordinates of e_i * e_j."""
    sc = structure_constants(order)
    spec = order.spec

    def mult_matrix(i: int) -> Mat3:
        cols = [sc.product(i, j) for j in (1, 2, 3)]
        rows = [[cols[j][r] for j in range(3)] for r in range(3)]
        return Mat3.from_rows(rows)

    return mult_matrix(2), mult_matrix(3)


def disc_exponent(order: LocalOrder) -> int:
    """Valuation of the order discriminant; scaling the maximal-order basis
    by diag(1, p^a, p^b) contributes the square of its determinant."""
    return 2 * (order.a + order.b)


def gram_disc_exponent(order: LocalOrder) -> Valuation:
    """Independent discriminant computation: valuation of det Tr(e_i e_j),
    with traces taken from the regular representation."""
    if order.spec.N <= 2 * (order.a + order.b):
        raise PrecisionTooLow(
            "need N > 2(a+b) to certify the discriminant valuation")
    a0, b0 = regular_rep(order)
    mats = [Mat3.identity(order.spec), a0, b0]
    gram = Mat3.from_rows(
        [[(mats[i] @ mats[j]).trace() for j in range(3)] for i in range(3)])
    return valuation(gram.det())


def division_embedding_number(order: LocalOrder) -> int:
    """Embedding count into the valuation ring of the local division
    algebra: 1 when the algebra is a field and the order is maximal,
    otherwise no embedding exists."""
    if order.kind is AlgebraKind.INERT and order.a == 0 and order.b == 0:
        return 1
    return 0


def irreducible_cubics(spec: RingSpec, count: int):
    """First `count` coefficient triples (a0, a1, a2) of field generators
    x^3 - a2 x^2 - a1 x - a0 irreducible over the residue field, scanned
    in ascending order of the (a0, a1, a2) residue-index tuple."""
    out = []
    q = spec.residue_size
    for idx in range(q ** 3):
        i0, rest = idx % q, idx // q
        i1, i2 = rest % q, rest // q
        r0 = spec.residue_by_index(i0)
        r1 = spec.residue_by_index(i1)
        r2 = spec.residue_by_index(i2)
        if any((t * t * t - r2 * t * t - r1 * t - r0).is_zero()
               for t in spec.residue_elements()):
            continue
        out.append((spec.of(r0.coeffs), spec.of(r1.coeffs), spec.of(r2.coeffs)))
        if len(out) == count:
            return out
    raise AssertionError("not enough irreducible cubics exist at this size")


@dataclass(frozen=True)
class NormalizedOrder:
    """Result of normalizing an inert order given by an arbitrary basis:
    shape exponents plus the adapted generator (coordinates on 1, alpha,
    alpha^2) with the order equal to R + R p^a gen + R p^b gen^2."""

    a: int
    b: int
    generator: tuple[LocalElem, LocalElem, LocalElem]
    generator_changed: bool


def normalize_inert_order(algebra: CubicAlgebraLocal, basis) -> NormalizedOrder:
    """Recover the shape exponents (a, b) of the module spanned by three
    vectors in coordinates on (1, alpha, alpha^2).

    The module must be a full-rank ring containing 1.  The exponent a is
    the least valuation appearing in the (alpha, alpha^2) part of the
    module, realized by some adapted generator; b is then the least j
    with p^j gen^2 in the module.  The reconstruction R + R p^a gen +
    R p^b gen^2 is checked to equal the input module exactly.
    """
    if algebra.kind is not AlgebraKind.INERT:
        raise InvalidParameters("normalization applies to inert algebras")
    spec = algebra.spec
    rows = [tuple(spec.of(x) for x in vec) for vec in basis]
    if any(len(r) != 3 for r in rows):
        raise ValueError("basis vectors need 3 coordinates")
    module = howell_form(rows)
    one_vec = (spec.one(), spec.zero(), spec.zero())
    if len(module) != 3:
        raise NotAnOrder("module does not have full rank at this precision")
    if not module_contains(module, one_vec):
        raise NotAnOrder("module does not contain 1")
    for x in module:
        for y in module:
            if not module_contains(module, algebra.alpha_mul(x, y)):
                raise NotAnOrder("module is not closed under multiplication")

    def min_val(row) -> int:
        return min(int_valuation(c, spec.p, spec.N)
                   for x in row[1:] for c in x.coeffs)

    a = min(min_val(row) for row in module)
    if a >= spec.N:
        raise NotAnOrder("module has no generator part at this precision")
    gen_row = next(row for row in module if min_val(row) == a)
    gen = (spec.zero(), exact_div_pk(gen_row[1], a), exact_div_pk(gen_row[2], a))
    gen_changed = gen != (spec.zero(), spec.one(), spec.zero())
    gen_sq = algebra.alpha_mul(gen, gen)
    b = None
    for j in range(spec.N):
        pj = spec.pi_pow(j)
        if module_contains(module, tuple(pj * c for c in gen_sq)):
            b = j
            break
    if b is None:
        raise PrecisionTooLow("no multiple of gen^2 lies in the module below "
                              "the working precision")
    if not (a <= b <= 2 * a):
        raise NotAnOrder(f"recovered exponents ({a}, {b}) violate a <= b <= 2a")
    rebuilt = howell_form([
        one_vec,
        tuple(spec.pi_pow(a) * c for c in gen),
        tuple(spec.pi_pow(b) * c for c in gen_sq),
    ])
    if rebuilt != module:
        raise NotAnOrder("module is not of the shape R + R p^a gen + R p^b gen^2")
    return NormalizedOrder(a=a, b=b, generator=gen, generator_changed=gen_changed)
