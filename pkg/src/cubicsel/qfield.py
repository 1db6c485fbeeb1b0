"""Exact arithmetic in Q(sqrt(-23)) and the end-to-end worked example.

The field is F = Q(sqrt(-23)) with ring of integers R = Z[w] for
w = (1 + sqrt(-23))/2, whose class group is cyclic of order 3 generated
by the even prime p2 = (2, w).  K = F(alpha) with alpha^3 = alpha^2 - 1
is a degree-3 everywhere-unramified extension, and two orders of K
(the maximal order, and R + p2*O_K) exercise the entire selectivity
pipeline.  Every numeric identity is verified exactly: matrix claims in
Q(sqrt(-23)) arithmetic, local claims in Z/2^N after completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .embeddings import OrbitClass, classify_orbit, is_optimal, make_pair
from .matrices import Mat3
from .orders import CubicAlgebraLocal, LocalOrder, disc_exponent, regular_rep
from .rings import LocalElem, RingSpec, hensel_root, invert, ring_make, valuation
from .selectivity import (
    PrimeDatum,
    SelectivityContext,
    Splitting,
    admitted_types,
    parse_config,
    selectivity_set,
    validate,
    verdict,
    vhat_element,
)

D_FIELD = -23


class NotIntegralAtPrime(ArithmeticError):
    """The element has a pole at the chosen even prime."""


class QuadElem:
    """(u + v*sqrt(-23)) / d in lowest terms, with d > 0."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u: int, v: int = 0, d: int = 1):
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            u, v, d = -u, -v, -d
        g = math.gcd(math.gcd(abs(u), abs(v)), d)
        self.u, self.v, self.d = u // g, v // g, d // g

    @classmethod
    def from_rational(cls, q) -> "QuadElem":
        q = Fraction(q)
        return cls(q.numerator, 0, q.denominator)

    @classmethod
    def sqrt_m23(cls) -> "QuadElem":
        return cls(0, 1, 1)

    @classmethod
    def omega(cls) -> "QuadElem":
        return cls(1, 1, 2)

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.u * o.d + o.u * self.d,
                        self.v * o.d + o.v * self.d, self.d * o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.u, -self.v, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.u * o.u + D_FIELD * self.v * o.v,
                        self.u * o.v + self.v * o.u, self.d * o.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.u * self.u - D_FIELD * self.v * self.v
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElem(self.d * self.u, -self.d * self.v, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadElem.from_rational(other) / self

    def conj(self) -> "QuadElem":
        return QuadElem(self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.u * self.u - D_FIELD * self.v * self.v, self.d * self.d)

    def trace(self) -> Fraction:
        return Fraction(2 * self.u, self.d)

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_integral(self) -> bool:
        """Membership in Z[(1 + sqrt(-23))/2]: denominator 1, or 2 with
        numerators of equal parity."""
        if self.d == 1:
            return True
        return self.d == 2 and (self.u - self.v) % 2 == 0

    def __eq__(self, other):
        o = self._coerce(other)
        return (o is not None and self.u == o.u and self.v == o.v and self.d == o.d)

    def __hash__(self):
        return hash((self.u, self.v, self.d))

    def __repr__(self):
        body = f"{self.u}" if self.v == 0 else f"{self.u}{self.v:+}*sqrt(-23)"
        return body if self.d == 1 else f"({body})/{self.d}"


class QMat3:
    """3x3 matrix over Q(sqrt(-23))."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(x if isinstance(x, QuadElem) else QuadElem.from_rational(x)
                        for x in entries)
        if len(entries) != 9:
            raise ValueError("a QMat3 needs 9 entries")
        self.entries = entries

    @classmethod
    def from_rows(cls, rows) -> "QMat3":
        return cls(tuple(x for row in rows for x in row))

    @classmethod
    def identity(cls) -> "QMat3":
        return cls((1, 0, 0, 0, 1, 0, 0, 0, 1))

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[3 * i + j]

    def __add__(self, other):
        return QMat3(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return QMat3(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other):
        a, b = self.entries, other.entries
        out = []
        for i in (0, 3, 6):
            for j in (0, 1, 2):
                out.append(a[i] * b[j] + a[i + 1] * b[j + 3] + a[i + 2] * b[j + 6])
        return QMat3(tuple(out))

    def scale(self, c) -> "QMat3":
        c = c if isinstance(c, QuadElem) else QuadElem.from_rational(c)
        return QMat3(tuple(c * x for x in self.entries))

    def trace(self) -> QuadElem:
        e = self.entries
        return e[0] + e[4] + e[8]

    def det(self) -> QuadElem:
        e = self.entries
        return (e[0] * (e[4] * e[8] - e[5] * e[7])
                - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def __eq__(self, other):
        return isinstance(other, QMat3) and self.entries == other.entries

    def __repr__(self):
        e = self.entries
        return f"QMat3({[e[0:3], e[3:6], e[6:9]]})"


def _q(u, v=0, d=1):
    return QuadElem(u, v, d)


_R = QuadElem.sqrt_m23()

# Multiplication by alpha and by beta = (alpha^2 + 15 alpha + 10)/sqrt(-23)
# on the integral basis (1, alpha, beta) of the maximal order of K.
PHI_ALPHA = QMat3.from_rows([
    [_q(0), _q(-10), _q(0, 7)],
    [_q(1), _q(-15), _q(0, 10)],
    [_q(0), _q(0, 1), _q(16)],
])
PHI_BETA = QMat3.from_rows([
    [_q(0), _q(0, 7), _q(117)],
    [_q(0), _q(0, 10), _q(167)],
    [_q(1), _q(16), _q(0, -12)],
])

# Multiplication by 2*alpha and 2*alpha^2 on the basis (1, 2a, 2a^2) of
# the local order R + 2a R + 2a^2 R at the even prime.
PHI_P_2ALPHA_ROWS = ((0, 0, -4), (1, 0, 0), (0, 2, 2))
PHI_P_2ALPHA_SQ_ROWS = ((0, -4, -4), (0, 0, -2), (1, 2, 2))

# Inverse of the basis-change matrix relating (1, 2a, 2a^2) to (1, a, b).
WCAL_INV = QMat3.from_rows([
    [_q(1), _q(0), _q(-20)],
    [_q(0), _q(2), _q(-30)],
    [_q(0), _q(0), _q(0, 2)],
])

# Local scaling for the non-free type at the even prime: diag(1/2, 1, 1).
W_LOCAL = QMat3.from_rows([
    [_q(1, 0, 2), _q(0), _q(0)],
    [_q(0), _q(1), _q(0)],
    [_q(0), _q(0), _q(1)],
])


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CheckReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, bool(passed), detail))

    def extend(self, other: "CheckReport"):
        self.checks.extend(other.checks)

    def failed_names(self) -> list:
        return [c.name for c in self.checks if not c.passed]


def verify_alpha() -> CheckReport:
    """Exact checks on the generator matrix: its cubic relation and
    commutation with the second basis matrix."""
    rep = CheckReport([])
    ident = QMat3.identity()
    cubic = PHI_ALPHA @ PHI_ALPHA @ PHI_ALPHA - PHI_ALPHA @ PHI_ALPHA + ident
    rep.add("alpha_cubic_relation", cubic.is_zero(),
            "phi(alpha)^3 - phi(alpha)^2 + I = 0")
    rep.add("alpha_beta_commute",
            (PHI_ALPHA @ PHI_BETA - PHI_BETA @ PHI_ALPHA).is_zero(),
            "phi(alpha) phi(beta) = phi(beta) phi(alpha)")
    return rep


def verify_beta() -> CheckReport:
    """Exact checks on the second basis matrix: its defining formula, its
    cubic relation, integrality, and unit trace-form determinant of the
    basis (1, alpha, beta)."""
    rep = CheckReport([])
    ident = QMat3.identity()
    lhs = PHI_ALPHA @ PHI_ALPHA + PHI_ALPHA.scale(15) + ident.scale(10)
    rep.add("beta_formula", lhs == PHI_BETA.scale(_R),
            "phi(alpha)^2 + 15 phi(alpha) + 10 I = sqrt(-23) phi(beta)")
    b2 = PHI_BETA @ PHI_BETA
    cubic = (b2 @ PHI_BETA + (b2.scale(_R)).scale(2)
             - PHI_BETA.scale(29) + ident.scale(_R))
    rep.add("beta_cubic_relation", cubic.is_zero(),
            "phi(beta)^3 + 2 sqrt(-23) phi(beta)^2 - 29 phi(beta) + sqrt(-23) I = 0")
    rep.add("entries_integral",
            all(x.is_integral() for x in PHI_ALPHA.entries + PHI_BETA.entries),
            "all entries lie in Z[(1+sqrt(-23))/2]")
    mats = [ident, PHI_ALPHA, PHI_BETA]
    gram = QMat3.from_rows(
        [[(mats[i] @ mats[j]).trace() for j in range(3)] for i in range(3)])
    d = gram.det()
    rep.add("basis_trace_form_unit", d == QuadElem(1) or d == QuadElem(-1),
            f"trace-form determinant of (1, alpha, beta) is {d!r}")
    return rep


def omega_completion(n: int, root: int = 0) -> LocalElem:
    """Image of w = (1+sqrt(-23))/2 in Z/2^n: the root of t^2 - t + 6
    lifting the chosen residue seed.  Seed 0 selects the prime (2, w);
    seed 1 selects its conjugate."""
    if root not in (0, 1):
        raise ValueError("root seed must be 0 or 1")
    spec = ring_make(2, 1, n)
    poly = [spec.of(6), spec.of(-1), spec.of(1)]
    return hensel_root(poly, spec.residue(root))


def complete_at_two(x: QuadElem, n: int, root: int = 0) -> LocalElem:
    """Completion of F at the even prime selected by the root convention,
    to precision 2^n.  Requires x to be integral there."""
    k = 0
    d = x.d
    while d % 2 == 0:
        d //= 2
        k += 1
    wide = omega_completion(n + k, root)
    mod = 2 ** (n + k)
    r = wide.coeffs[0]
    num = (x.u + x.v * (2 * r - 1)) % mod
    if num % (2 ** k):
        raise NotIntegralAtPrime(f"{x!r} is not integral at the chosen prime")
    spec = ring_make(2, 1, n)
    d_inv = invert(spec.of(d))
    return spec.of(num // (2 ** k)) * d_inv


def complete_matrix(m: QMat3, n: int, root: int = 0) -> Mat3:
    spec = ring_make(2, 1, n)
    return Mat3(spec, tuple(complete_at_two(x, n, root) for x in m.entries))


def v2_at_prime(x: QuadElem, root: int = 0, window: int = 24) -> int:
    """2-adic valuation of a nonzero integral element at the chosen prime."""
    val = valuation(complete_at_two(x, window, root))
    if not val.is_exact:
        raise ArithmeticError("valuation exceeds the probing window")
    return val.k


def s2_local_order(n: int) -> LocalOrder:
    """The completion of R + p2*O_K at the even prime: inert of shape
    (1, 1) for the generator with minimal polynomial x^3 - x^2 + 1."""
    spec = ring_make(2, 1, n)
    algebra = CubicAlgebraLocal.inert(spec, a0=-1, a1=0, a2=1)
    return LocalOrder(algebra=algebra, a=1, b=1)


def verify_S2_local(n: int = 16, root: int = 0) -> CheckReport:
    """Local chain at the even prime: the displayed multiplication
    matrices are the regular representation of the shape-(1,1) inert
    order, they form an optimal embedding, the exact basis-change
    intertwines them with the global matrices, and the conjugating
    reduced norm has valuation 1."""
    rep = CheckReport([])
    rep.add("completion_root", True,
            f"omega maps to the Hensel root with residue {root} "
            f"({'prime (2, omega)' if root == 0 else 'conjugate prime'})")
    spec = ring_make(2, 1, n)
    order = s2_local_order(n)
    a0, b0 = regular_rep(order)
    a_disp = Mat3(spec, tuple(spec.of(c) for row in PHI_P_2ALPHA_ROWS for c in row))
    b_disp = Mat3(spec, tuple(spec.of(c) for row in PHI_P_2ALPHA_SQ_ROWS for c in row))
    rep.add("displayed_equals_regular_rep", a0 == a_disp and b0 == b_disp,
            "multiplication matrices of (1, 2a, 2a^2) match the displays")
    try:
        pair = make_pair(order, a_disp, b_disp)
        rep.add("pair_is_embedding", True, "structure constants hold at 2^%d" % n)
    except Exception as exc:  # surfaced as a failed check, not a crash
        rep.add("pair_is_embedding", False, str(exc))
        return rep
    rep.add("pair_is_optimal", is_optimal(pair), "reductions are independent mod 2")
    rep.add("pair_orbit_regular", classify_orbit(pair) is OrbitClass.REGULAR,
            "the displayed pair lies in the regular orbit")
    lhs_a = WCAL_INV @ QMat3.from_rows([[QuadElem(c) for c in row]
                                        for row in PHI_P_2ALPHA_ROWS])
    rhs_a = (PHI_ALPHA @ WCAL_INV).scale(2)
    lhs_b = WCAL_INV @ QMat3.from_rows([[QuadElem(c) for c in row]
                                        for row in PHI_P_2ALPHA_SQ_ROWS])
    rhs_b = ((PHI_ALPHA @ PHI_ALPHA) @ WCAL_INV).scale(2)
    rep.add("conjugation_reaches_global", lhs_a == rhs_a and lhs_b == rhs_b,
            "Wcal^-1 carries the local regular matrices to the global ones")
    det_winv = WCAL_INV.det()
    rep.add("det_Wcal_inv", det_winv == _q(0, 4) and v2_at_prime(det_winv, root) == 2,
            "det Wcal^-1 = 4 sqrt(-23), valuation 2")
    norm_conj = W_LOCAL.det() * det_winv
    rep.add("conjugator_norm", norm_conj == _q(0, 2),
            "reduced norm of the order-to-order conjugation is 2 sqrt(-23)")
    v_norm = v2_at_prime(norm_conj, root)
    rep.add("conjugator_norm_valuation", v_norm == 1,
            "valuation 1, so the translation class is the generator")
    rep.add("vhat_contribution_is_generator", (v_norm * 1) % 3 == 1,
            "rho of the even prime times the valuation equals sigma")
    return rep


def s1_context() -> SelectivityContext:
    return SelectivityContext(
        primes=(PrimeDatum(label="p2", rho=1, splitting=Splitting.INERT),),
        sqrt_disc=(),
        algebra_is_matrix=True,
        K_unramified_everywhere=True,
        embedding_exists=True,
        vhat=(("p2", 1),),
        types=(("O1", 1), ("O2", 0), ("O3", 2)),
        name="Q(sqrt(-23)) maximal order",
    )


def s2_context() -> SelectivityContext:
    return SelectivityContext(
        primes=(PrimeDatum(label="p2", rho=1, splitting=Splitting.INERT),),
        sqrt_disc=(("p2", 2),),
        algebra_is_matrix=True,
        K_unramified_everywhere=True,
        embedding_exists=True,
        vhat=(("p2", 1),),
        types=(("O1", 1), ("O2", 0), ("O3", 2)),
        name="Q(sqrt(-23)) order R + p2*O_K",
    )


def load_shipped_config(stem: str) -> SelectivityContext:
    text = resources.files("cubicsel").joinpath(f"data/{stem}.cfg").read_text("utf-8")
    return parse_config(text)


def run_example(precision: int = 16, root: int = 0) -> CheckReport:
    """Full selectivity story for both orders of the worked field, with
    the shipped config files cross-parsed against the built-in contexts."""
    rep = CheckReport([])
    ctx1, ctx2 = s1_context(), s2_context()
    for label, ctx in (("s1", ctx1), ("s2", ctx2)):
        findings = validate(ctx)
        rep.add(f"{label}_context_valid", not findings, "; ".join(findings))
    v1 = verdict(ctx1)
    rep.add("s1_selectivity_set", v1.D == frozenset({0}), f"D = {sorted(v1.D)}")
    rep.add("s1_fraction", v1.fraction == Fraction(1, 3), f"fraction = {v1.fraction}")
    rep.add("s1_admitted", v1.admitted_types == ("O1",),
            f"admitted = {','.join(v1.admitted_types)}")
    v2 = verdict(ctx2)
    rep.add("s2_selectivity_set", v2.D == frozenset({0, 2}), f"D = {sorted(v2.D)}")
    rep.add("s2_vhat", vhat_element(ctx2) == 1, "translation class is the generator")
    shifted = frozenset((vhat_element(ctx2) + d) % 3 for d in v2.D)
    rep.add("s2_translated_set", shifted == frozenset({0, 1}),
            f"vhat + D = {sorted(shifted)}")
    rep.add("s2_fraction", v2.fraction == Fraction(2, 3), f"fraction = {v2.fraction}")
    rep.add("s2_admitted", v2.admitted_types == ("O2", "O1"),
            f"admitted = {','.join(v2.admitted_types)}")
    order = s2_local_order(10)
    rep.add("s2_local_global_consistency",
            disc_exponent(order) // 2 == 2
            and frozenset({0, (order.a + order.b) % 3}) == v2.D,
            "local discriminant exponent and norm classes match the context")
    for stem, builtin in (("q23_s1", ctx1), ("q23_s2", ctx2)):
        parsed = load_shipped_config(stem)
        same = (parsed.sqrt_disc == builtin.sqrt_disc
                and parsed.vhat == builtin.vhat
                and parsed.types == builtin.types
                and parsed.primes == builtin.primes
                and verdict(parsed) == verdict(builtin))
        rep.add(f"{stem}_config_agrees", same,
                "shipped config reproduces the built-in context")
    return rep
