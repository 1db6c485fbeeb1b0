"""Optimal embeddings of cubic local orders into the 3x3 matrix ring.

Covers optimality testing by two independent routes, detection of the
exceptional (non-regular) orbit, the explicit normal forms for both
orbits, proof conjugators with exact verification, orbit classification
through the intertwiner oracle, local embedding numbers, and the local
norm-class sets that feed the global selectivity computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .matrices import (
    Mat3,
    SolutionModule,
    intertwiners,
    is_unit_matrix,
    minor_select_det,
    residue_classify,
    residue_rank,
    unit_det_in_module,
)
from .orders import AlgebraKind, LocalOrder, regular_rep, structure_constants
from .rings import PrecisionTooLow, SpecMismatch, exact_div_pk, invert, valuation


class NotAHomomorphism(ValueError):
    """The matrices fail the order's multiplication table."""


class NotOptimal(ValueError):
    """The operation requires an optimal embedding pair."""


class NoWitnessExpected(ValueError):
    """No conjugator to the regular form exists (two orbits)."""


class ParameterOutOfRange(ValueError):
    """A conjugator parameter violates its integrality precondition."""


class SpecialPatternDivergence(RuntimeError):
    """The residue pattern test disagreed with the orbit-level oracle;
    surfaced loudly so it can be investigated, never ignored."""


class OrbitClass(Enum):
    REGULAR = "regular"
    SPECIAL = "special"


@dataclass(frozen=True)
class EmbeddingPair:
    """Images (A, B) of the basis elements e2, e3 under an embedding into
    M_3 (e1 maps to the identity); validated against the structure
    constants on construction via make_pair."""

    order: LocalOrder
    A: Mat3
    B: Mat3


def _combo(order: LocalOrder, a_mat: Mat3, b_mat: Mat3, coeffs) -> Mat3:
    c1, c2, c3 = coeffs
    ident = Mat3.identity(order.spec)
    return ident.scale(c1) + a_mat.scale(c2) + b_mat.scale(c3)


def make_pair(order: LocalOrder, a_mat: Mat3, b_mat: Mat3) -> EmbeddingPair:
    """Validate that (A, B) satisfies the order's multiplication table at
    the working precision and wrap it as an EmbeddingPair."""
    if a_mat.spec != order.spec or b_mat.spec != order.spec:
        raise SpecMismatch("matrices do not share the order's ring spec")
    sc = structure_constants(order)
    if a_mat @ b_mat != b_mat @ a_mat:
        raise NotAHomomorphism("images of e2 and e3 do not commute")
    checks = (
        ("e2*e2", a_mat @ a_mat, sc.product(2, 2)),
        ("e2*e3", a_mat @ b_mat, sc.product(2, 3)),
        ("e3*e3", b_mat @ b_mat, sc.product(3, 3)),
    )
    for name, product, coeffs in checks:
        if product != _combo(order, a_mat, b_mat, coeffs):
            raise NotAHomomorphism(f"product {name} violates the structure constants")
    return EmbeddingPair(order=order, A=a_mat, B=b_mat)


def regular_pair(order: LocalOrder) -> EmbeddingPair:
    a0, b0 = regular_rep(order)
    return make_pair(order, a0, b0)


def special_normal_form(order: LocalOrder) -> EmbeddingPair:
    """The normal form representing the exceptional orbit (when it is a
    distinct orbit; otherwise it is just another regular representative)."""
    spec = order.spec
    a, b = order.a, order.b
    zero = spec.zero()
    if order.kind is AlgebraKind.SPLIT:
        a_mat = Mat3.from_rows([
            [zero, zero, zero],
            [zero, zero, spec.one()],
            [zero, zero, spec.pi_pow(a)],
        ])
        b_mat = Mat3.from_rows([
            [spec.pi_pow(b), zero, zero],
            [spec.one(), zero, zero],
            [zero, zero, zero],
        ])
        return make_pair(order, a_mat, b_mat)
    a0, a1, a2 = order.algebra.min_poly_coeffs()
    u = a0 + a1 * a2
    a_mat = Mat3.from_rows([
        [a2 * spec.pi_pow(a), spec.pi_pow(a + b), zero],
        [zero, a2 * spec.pi_pow(a), spec.one()],
        [u * spec.pi_pow(2 * a - b), (a1 - a2 * a2) * spec.pi_pow(2 * a), -(a2 * spec.pi_pow(a))],
    ])
    b_mat = Mat3.from_rows([
        [(a2 * a2) * spec.pi_pow(b), (2 * a2) * spec.pi_pow(2 * b), spec.pi_pow(2 * b - a)],
        [u, a1 * spec.pi_pow(b), zero],
        [zero, u * spec.pi_pow(a + b), a1 * spec.pi_pow(b)],
    ])
    return make_pair(order, a_mat, b_mat)


def is_optimal(pair: EmbeddingPair) -> bool:
    """Optimality of the embedding, decided by two independent criteria
    that must agree: linear independence of (I, A, B) mod p, and the
    existence of three entry positions whose selection matrix has nonzero
    residue determinant."""
    spec = pair.order.spec
    ident = Mat3.identity(spec, residue=True)
    a_res = pair.A.reduce_mod_p()
    b_res = pair.B.reduce_mod_p()
    independent = residue_rank(
        [list(ident.entries), list(a_res.entries), list(b_res.entries)]) == 3
    positions = [(s, t) for s in (1, 2, 3) for t in (1, 2, 3)]
    witnessed = any(
        not minor_select_det(ident, a_res, b_res, combo).is_zero()
        for combo in itertools.combinations(positions, 3))
    if independent != witnessed:
        raise RuntimeError(
            "internal inconsistency: the optimality criteria disagree")
    return independent


def classify_orbit(pair: EmbeddingPair) -> OrbitClass:
    """Conjugacy class of the pair relative to the regular representation,
    decided by searching the intertwiner module for a unit determinant.

    The intertwiner space of two faithful embeddings of the cubic etale
    algebra has dimension exactly 3 over the fraction field, and the
    truncation artifacts of the solved system vanish mod p whenever the
    system's elementary divisors stay below the precision.  The residue
    dimension of the computed module therefore certifies faithfulness:
    3 means the search is exact, more means the precision is too low.
    """
    if not is_optimal(pair):
        raise NotOptimal("orbit classification requires an optimal pair")
    module = intertwiner_module(pair)
    dim = module.residue_dimension()
    if dim > 3:
        raise PrecisionTooLow(
            f"intertwiner module has residue dimension {dim} > 3; raise N")
    if dim < 3:
        raise RuntimeError(
            "internal inconsistency: the intertwiner space lost rank")
    witness = unit_det_in_module(module)
    return OrbitClass.REGULAR if witness is not None else OrbitClass.SPECIAL


def intertwiner_module(pair: EmbeddingPair) -> SolutionModule:
    """Module of U with U A = A0 U and U B = B0 U against the regular
    representation of the pair's order."""
    a0, b0 = regular_rep(pair.order)
    return intertwiners((pair.A, pair.B), (a0, b0))


def is_special(pair: EmbeddingPair) -> bool:
    """Whether the pair lies in the exceptional orbit.

    The orbit-level oracle is authoritative.  The residue pattern (A
    reduces into the Jordan class and, after the classifying conjugation,
    B has a unit lower-left block entry with equal diagonal and zero
    corner) is evaluated as well; disagreement raises rather than being
    absorbed.
    """
    if not is_optimal(pair):
        raise NotOptimal("speciality is defined for optimal pairs")
    cls, v = residue_classify(pair.A.reduce_mod_p())
    pattern = False
    if cls.kind == "jordan":
        b_conj = pair.B.reduce_mod_p().conjugate_by(v)
        pattern = (not b_conj[(1, 0)].is_zero()
                   and (b_conj[(1, 1)] - b_conj[(0, 0)]).is_zero()
                   and b_conj[(0, 2)].is_zero())
    orbit = classify_orbit(pair)
    if pattern != (orbit is OrbitClass.SPECIAL):
        raise SpecialPatternDivergence(
            f"pattern test says {pattern} but the orbit oracle says {orbit}")
    return orbit is OrbitClass.SPECIAL


def embedding_number(order: LocalOrder) -> int:
    """Number of unit-group conjugacy classes of optimal embeddings into
    the 3x3 matrix ring: split orders have one orbit exactly when ab = 0,
    inert orders exactly when b = 2a; otherwise two."""
    if order.kind is AlgebraKind.SPLIT:
        return 1 if order.a * order.b == 0 else 2
    return 1 if order.b == 2 * order.a else 2


def regular_special_witness(order: LocalOrder) -> Mat3:
    """Explicit unit-determinant conjugator carrying the special normal
    form to the regular representation, for single-orbit orders; verified
    exactly at the working precision."""
    if embedding_number(order) != 1:
        raise NoWitnessExpected("the two forms lie in distinct orbits")
    spec = order.spec
    zero, one = spec.zero(), spec.one()
    if order.kind is AlgebraKind.SPLIT:
        if order.a == 0 and order.b == 0 and spec.p == 2:
            u = Mat3.from_rows([
                [one, zero, one],
                [one, one, one],
                [one, one, zero],
            ])
        else:
            u = Mat3.from_rows([
                [one, zero, spec.pi_pow(order.b)],
                [zero, one, one],
                [one, spec.pi_pow(order.a), zero],
            ])
    else:
        a0, a1, a2 = order.algebra.min_poly_coeffs()
        w = a0 + a1 * a2
        u = Mat3.from_rows([
            [one, a2 * spec.pi_pow(order.a), (a2 * a2) * spec.pi_pow(2 * order.a)],
            [zero, zero, w],
            [zero, w, zero],
        ])
    a0m, b0m = regular_rep(order)
    sp = special_normal_form(order)
    if sp.A.conjugate_by(u) != a0m or sp.B.conjugate_by(u) != b0m:
        raise RuntimeError("witness conjugator failed exact verification")
    return u


def _g_eval(order: LocalOrder, d):
    """g(d) for g(x) = x^3 - a2 p^a x^2 - a1 p^2a x - a0 p^3a, the minimal
    polynomial of the scaled generator."""
    spec = order.spec
    a0, a1, a2 = order.algebra.min_poly_coeffs()
    a = order.a
    return (d * d * d - (a2 * spec.pi_pow(a)) * (d * d)
            - (a1 * spec.pi_pow(2 * a)) * d - a0 * spec.pi_pow(3 * a))


def sinert_target_matrix(order: LocalOrder, d) -> Mat3:
    """The parametrized conjugate A_d of the special normal form."""
    spec = order.spec
    d = spec.of(d)
    a0, a1, a2 = order.algebra.min_poly_coeffs()
    a, b = order.a, order.b
    g = _g_eval(order, d)
    vg = valuation(g)
    if not vg.is_exact or vg.k < 2 * a - b:
        raise ParameterOutOfRange("v(g(d)) >= 2a - b is required")
    h = exact_div_pk(g, vg.k)
    zero = spec.zero()
    return Mat3.from_rows([
        [d, spec.pi_pow(vg.k - 2 * a + b), zero],
        [zero, d, spec.one()],
        [-(h * spec.pi_pow(2 * a - b)),
         a1 * spec.pi_pow(2 * a) + (2 * a2) * spec.pi_pow(a) * d - 3 * (d * d),
         a2 * spec.pi_pow(a) - 2 * d],
    ])


def sinert_conjugator(order: LocalOrder, d) -> Mat3:
    """The explicit conjugator U_d with U_d^{-1} A'_0 U_d = A_d, verified
    together with its determinant value (a0 + a1 a2)^2 h(d)^{-2}."""
    if order.kind is not AlgebraKind.INERT:
        raise ParameterOutOfRange("the parametrized conjugator is inert-only")
    spec = order.spec
    d = spec.of(d)
    a0, a1, a2 = order.algebra.min_poly_coeffs()
    a, b = order.a, order.b
    g = _g_eval(order, d)
    vg = valuation(g)
    if not vg.is_exact or vg.k < 2 * a - b:
        raise ParameterOutOfRange("v(g(d)) >= 2a - b is required")
    e = d - a2 * spec.pi_pow(a)
    ve = valuation(e)
    if ve.is_exact and ve.k < 2 * a - b:
        raise ParameterOutOfRange("v(d - a2 p^a) >= 2a - b is required")
    h = exact_div_pk(g, vg.k)
    hinv = invert(h)
    q = exact_div_pk(e, 2 * a - b)
    u = a0 + a1 * a2
    zero = spec.zero()
    u_d = Mat3.from_rows([
        [spec.one(), 2 * d * q * hinv, q * hinv],
        [zero, -(u * hinv), zero],
        [zero, -(u * e * hinv), -(u * hinv)],
    ])
    expected_det = (u * u) * (hinv * hinv)
    if u_d.det() != expected_det:
        raise RuntimeError("determinant of U_d failed exact verification")
    a_prime = special_normal_form(order).A
    if a_prime @ u_d != u_d @ sinert_target_matrix(order, d):
        raise RuntimeError("U_d failed to intertwine A'_0 with A_d")
    return u_d


@dataclass(frozen=True)
class NormClassSet:
    """Subset of Z/3 (always containing 0) of reduced-norm valuations
    attainable by optimal-embedding conjugators, modulo norms of the
    unramified cubic extension."""

    classes: frozenset[int]

    def __post_init__(self):
        if 0 not in self.classes or not self.classes <= {0, 1, 2}:
            raise ValueError("norm classes form a subset of Z/3 containing 0")


@dataclass(frozen=True)
class ShiftedNormSet:
    """A coset v + S of a norm-class set, kept as (shift, base) so that
    composed conjugations accumulate in the shift."""

    shift: int
    base: NormClassSet

    def resolve(self) -> frozenset[int]:
        return frozenset((self.shift + c) % 3 for c in self.base.classes)

    def compose(self, extra_shift: int) -> "ShiftedNormSet":
        return ShiftedNormSet((self.shift + extra_shift) % 3, self.base)


def local_norm_set(order: LocalOrder) -> NormClassSet:
    """Norm classes of the local optimal-embedding set: everything in the
    split case; 0 and the discriminant-square-root valuation mod 3 in the
    inert case."""
    if order.kind is AlgebraKind.SPLIT:
        return NormClassSet(frozenset({0, 1, 2}))
    return NormClassSet(frozenset({0, (order.a + order.b) % 3}))


def translate_norm_set(s: NormClassSet, v: int) -> ShiftedNormSet:
    """Translate a norm-class set by the class of a conjugating norm."""
    return ShiftedNormSet(v % 3, s)
