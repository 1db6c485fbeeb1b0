"""3x3 matrix algebra over truncated local rings and their residue fields.

Provides determinants and exact inverses, characteristic and minimal
polynomials over the residue field, the four-way similarity classification
of residue matrices with an explicit conjugator, minor-selection
determinants, and the linear-algebra engine used as a conjugacy oracle:
Howell canonical forms over W/(p^N), solution modules of homogeneous
systems, intertwiner modules, and the unit-determinant search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .rings import (
    LocalElem,
    NotAUnit,
    ResidueElem,
    RingSpec,
    SpecMismatch,
    exact_div_pk,
    int_valuation,
    lift,
    reduce_mod_p,
    ring_make,
    rpoly_roots,
    unit_part,
)


class SingularAtPrecision(ArithmeticError):
    """Matrix inversion failed: the determinant is not a unit."""


class TooManyGenerators(ValueError):
    """The unit-determinant search is capped at 4 module generators."""


class MatrixFormatError(ValueError):
    """A matrix text block could not be parsed."""


class Mat3:
    """Immutable 3x3 matrix; entries are all LocalElem or all ResidueElem
    over one shared RingSpec.  Row-major storage."""

    __slots__ = ("spec", "entries")

    def __init__(self, spec: RingSpec, entries: tuple):
        if len(entries) != 9:
            raise ValueError("a Mat3 needs exactly 9 entries")
        self.spec = spec
        self.entries = entries

    @classmethod
    def from_rows(cls, rows) -> "Mat3":
        flat = tuple(x for row in rows for x in row)
        return cls(flat[0].spec, flat)

    @classmethod
    def identity(cls, spec: RingSpec, residue: bool = False) -> "Mat3":
        one = spec.residue(1) if residue else spec.one()
        zero = spec.residue(0) if residue else spec.zero()
        return cls(spec, (one, zero, zero, zero, one, zero, zero, zero, one))

    @classmethod
    def zero(cls, spec: RingSpec, residue: bool = False) -> "Mat3":
        z = spec.residue(0) if residue else spec.zero()
        return cls(spec, (z,) * 9)

    @classmethod
    def scalar(cls, x) -> "Mat3":
        z = x - x
        return cls(x.spec, (x, z, z, z, x, z, z, z, x))

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        return self.entries[3 * i + j]

    def rows(self):
        e = self.entries
        return [list(e[0:3]), list(e[3:6]), list(e[6:9])]

    def _check(self, other: "Mat3"):
        if self.spec != other.spec:
            raise SpecMismatch("matrices over different ring specs")

    def __add__(self, other: "Mat3") -> "Mat3":
        self._check(other)
        return Mat3(self.spec, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat3") -> "Mat3":
        self._check(other)
        return Mat3(self.spec, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat3":
        return Mat3(self.spec, tuple(-a for a in self.entries))

    def __matmul__(self, other: "Mat3") -> "Mat3":
        self._check(other)
        a, b = self.entries, other.entries
        out = []
        for i in (0, 3, 6):
            for j in (0, 1, 2):
                out.append(a[i] * b[j] + a[i + 1] * b[j + 3] + a[i + 2] * b[j + 6])
        return Mat3(self.spec, tuple(out))

    def scale(self, c) -> "Mat3":
        return Mat3(self.spec, tuple(c * a for a in self.entries))

    def __eq__(self, other):
        return (isinstance(other, Mat3) and self.spec == other.spec
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.spec, self.entries))

    def is_zero(self) -> bool:
        return all(not e for e in self.entries)

    def transpose(self) -> "Mat3":
        e = self.entries
        return Mat3(self.spec, (e[0], e[3], e[6], e[1], e[4], e[7], e[2], e[5], e[8]))

    def trace(self):
        e = self.entries
        return e[0] + e[4] + e[8]

    def det(self):
        e = self.entries
        return (e[0] * (e[4] * e[8] - e[5] * e[7])
                - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]))

    def adjugate(self) -> "Mat3":
        e = self.entries
        c = (
            e[4] * e[8] - e[5] * e[7], e[2] * e[7] - e[1] * e[8], e[1] * e[5] - e[2] * e[4],
            e[5] * e[6] - e[3] * e[8], e[0] * e[8] - e[2] * e[6], e[2] * e[3] - e[0] * e[5],
            e[3] * e[7] - e[4] * e[6], e[1] * e[6] - e[0] * e[7], e[0] * e[4] - e[1] * e[3],
        )
        return Mat3(self.spec, c)

    def inverse(self) -> "Mat3":
        d = self.det()
        if isinstance(d, ResidueElem):
            if d.is_zero():
                raise SingularAtPrecision("residue matrix is singular")
            return self.adjugate().scale(d.inverse())
        try:
            from .rings import invert
            dinv = invert(d)
        except NotAUnit as exc:
            raise SingularAtPrecision("determinant is not a unit") from exc
        return self.adjugate().scale(dinv)

    def reduce_mod_p(self) -> "Mat3":
        return Mat3(self.spec, tuple(reduce_mod_p(x) for x in self.entries))

    def lift(self) -> "Mat3":
        return Mat3(self.spec, tuple(lift(x) for x in self.entries))

    def conjugate_by(self, v: "Mat3") -> "Mat3":
        """v^{-1} @ self @ v."""
        return v.inverse() @ self @ v

    def __repr__(self):
        return "Mat3(%s)" % (self.rows(),)


def is_unit_matrix(m: Mat3) -> bool:
    d = m.det()
    if isinstance(d, ResidueElem):
        return not d.is_zero()
    from .rings import is_unit
    return is_unit(d)


def matmul(a: Mat3, b: Mat3) -> Mat3:
    return a @ b


def det(m: Mat3):
    return m.det()


def trace(m: Mat3):
    return m.trace()


def matinv(m: Mat3) -> Mat3:
    return m.inverse()


# ---------------------------------------------------------------------------
# Linear algebra over the residue field.

def _rref(rows: list[list[ResidueElem]]):
    """Reduced row echelon form in place; returns (rows, pivot_columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def residue_rank(vectors: list[list[ResidueElem]]) -> int:
    _, pivots = _rref([list(v) for v in vectors])
    return len(pivots)


def residue_solve(columns: list[list[ResidueElem]], target: list[ResidueElem]):
    """Solve sum_i c_i * columns[i] = target; returns coefficients or None."""
    if not columns:
        return None if any(not t.is_zero() for t in target) else []
    n = len(columns)
    spec = target[0].spec
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(len(target))]
    rows, pivots = _rref(aug)
    if n in pivots:
        return None
    coeffs = [spec.residue(0)] * n
    for r, c in enumerate(pivots):
        coeffs[c] = rows[r][n]
    return coeffs


def residue_kernel(m: Mat3) -> list[list[ResidueElem]]:
    """Basis of the right kernel of a residue matrix."""
    spec = m.spec
    rows, pivots = _rref([list(r) for r in m.rows()])
    free = [c for c in range(3) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [spec.residue(0)] * 3
        vec[fcol] = spec.residue(1)
        for r, c in enumerate(pivots):
            vec[c] = -rows[r][fcol]
        basis.append(vec)
    return basis


def _mat_vec(m: Mat3, v: list[ResidueElem]) -> list[ResidueElem]:
    e = m.entries
    return [e[3 * i] * v[0] + e[3 * i + 1] * v[1] + e[3 * i + 2] * v[2] for i in range(3)]


def char_poly(m: Mat3) -> list[ResidueElem]:
    """Characteristic polynomial x^3 - tr x^2 + s2 x - det, constant first."""
    spec = m.spec
    e = m.entries
    s2 = (e[4] * e[8] - e[5] * e[7]) + (e[0] * e[8] - e[2] * e[6]) + (e[0] * e[4] - e[1] * e[3])
    return [-m.det(), s2, -m.trace(), spec.residue(1)]


def min_poly(m: Mat3) -> list[ResidueElem]:
    """Monic minimal polynomial: the least d with I, m, .., m^d dependent."""
    spec = m.spec
    one = spec.residue(1)
    powers = [Mat3.identity(spec, residue=True)]
    for d in (1, 2, 3):
        powers.append(powers[-1] @ m)
        cols = [list(p.entries) for p in powers[:-1]]
        target = list(powers[-1].entries)
        coeffs = residue_solve(cols, target)
        if coeffs is not None:
            return [-c for c in coeffs] + [one]
    raise AssertionError("a 3x3 matrix has minimal degree at most 3")


@dataclass(frozen=True)
class SimilarityClass:
    """Canonical residue similarity class.

    kind is one of "scalar", "two_eigen", "jordan", "companion".
    Parameters: scalar -> (x,); two_eigen -> (repeated, simple);
    jordan -> (x,); companion -> (x, y, z) for char x^3 - z x^2 - y x - x0
    written as (x0, y, z).
    """

    kind: str
    params: tuple[ResidueElem, ...]

    def canonical_matrix(self, spec: RingSpec) -> Mat3:
        zero, one = spec.residue(0), spec.residue(1)
        if self.kind == "scalar":
            (x,) = self.params
            return Mat3(spec, (x, zero, zero, zero, x, zero, zero, zero, x))
        if self.kind == "two_eigen":
            x, y = self.params
            return Mat3(spec, (x, zero, zero, zero, x, zero, zero, zero, y))
        if self.kind == "jordan":
            (x,) = self.params
            return Mat3(spec, (x, zero, zero, zero, x, one, zero, zero, x))
        if self.kind == "companion":
            x, y, z = self.params
            return Mat3(spec, (zero, one, zero, zero, zero, one, x, y, z))
        raise ValueError(f"unknown class kind {self.kind!r}")


def _vectors_lex(spec: RingSpec):
    """All nonzero vectors over the residue field in the canonical
    enumeration order (index digits, last coordinate fastest)."""
    elems = list(spec.residue_elements())
    for v1 in elems:
        for v2 in elems:
            for v3 in elems:
                if not (v1.is_zero() and v2.is_zero() and v3.is_zero()):
                    yield [v1, v2, v3]


def _det3_vectors(cols: list[list[ResidueElem]]) -> ResidueElem:
    (a, d, g), (b, e, h), (c, f, i) = cols
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def residue_classify(m: Mat3) -> tuple[SimilarityClass, Mat3]:
    """Classify a residue matrix up to similarity and return (class, V)
    with V invertible and V^{-1} m V equal to the canonical matrix.

    The class is read off the minimal polynomial: degree 1 is scalar;
    degree 3 is the companion of the characteristic polynomial; degree 2
    splits into a double root (Jordan) or two distinct roots (two
    eigenvalues, the repeated one determined by the trace).
    """
    spec = m.spec
    mp = min_poly(m)
    deg = len(mp) - 1
    if deg == 1:
        x = -mp[0]
        return SimilarityClass("scalar", (x,)), Mat3.identity(spec, residue=True)
    if deg == 3:
        cp = char_poly(m)
        x0, y, z = -cp[0], -cp[1], -cp[2]
        for v3 in _vectors_lex(spec):
            mv = _mat_vec(m, v3)
            mmv = _mat_vec(m, mv)
            if not _det3_vectors([v3, mv, mmv]).is_zero():
                v2 = [a - z * b for a, b in zip(mv, v3)]
                v1 = [a - z * b - y * c for a, b, c in zip(mmv, mv, v3)]
                V = Mat3.from_rows([[v1[i], v2[i], v3[i]] for i in range(3)])
                return SimilarityClass("companion", (x0, y, z)), V
        raise AssertionError("cyclic vector must exist when min poly has degree 3")
    # degree 2: factor the minimal polynomial over the residue field
    distinct = []
    for r in rpoly_roots(mp):
        if r not in distinct:
            distinct.append(r)
    if len(distinct) == 1:
        x = distinct[0]
        n = m - Mat3.scalar(x)
        for v3 in _vectors_lex(spec):
            v2 = _mat_vec(n, v3)
            if any(not c.is_zero() for c in v2):
                break
        else:
            raise AssertionError("nilpotent part must be nonzero in the Jordan case")
        kern = residue_kernel(n)
        v1 = kern[0]
        if residue_rank([v1, v2]) < 2:
            v1 = kern[1]
        V = Mat3.from_rows([[v1[i], v2[i], v3[i]] for i in range(3)])
        return SimilarityClass("jordan", (x,)), V
    if len(distinct) != 2:
        raise AssertionError("a degree-2 minimal polynomial over a field with "
                             "a 3x3 matrix must split")
    r, s = distinct
    # The repeated eigenvalue is fixed by the trace: tr = 2x + y.
    tr = m.trace()
    if tr == r + r + s:
        x, y = r, s
    else:
        x, y = s, r
    ex = residue_kernel(m - Mat3.scalar(x))
    ey = residue_kernel(m - Mat3.scalar(y))
    V = Mat3.from_rows([[ex[0][i], ex[1][i], ey[0][i]] for i in range(3)])
    return SimilarityClass("two_eigen", (x, y)), V


def minor_select_det(a1: Mat3, a2: Mat3, a3: Mat3,
                     positions: Sequence[tuple[int, int]]) -> ResidueElem:
    """Determinant of the 3x3 matrix whose (j, i) entry is the (s_j, t_j)
    entry of a_i, for three 1-indexed positions (s_j, t_j)."""
    mats = (a1, a2, a3)
    rows = []
    for (s, t) in positions:
        if not (1 <= s <= 3 and 1 <= t <= 3):
            raise ValueError("positions are 1-indexed pairs within 3x3")
        rows.append([m[(s - 1, t - 1)] for m in mats])
    return Mat3.from_rows(rows).det()


# ---------------------------------------------------------------------------
# Howell canonical form over the chain ring W/(p^N).
#
# Every ideal of W/(p^N) is (p^k), so echelon reduction works with exact
# division by uniformizer powers instead of extended gcds.  The form is
# canonical for the row module: pivots are exactly p^k, entries below a
# pivot are zero, entries above are reduced mod p^k, and for each pivot
# p^k with k > 0 the saturation row p^{N-k} * row is included, so every
# module element reduces to zero greedily against the rows.

def _row_scale(row, c):
    return [c * x for x in row]


def _row_sub(row, other, c):
    return [x - c * y for x, y in zip(row, other)]


def _coeff_mod_pk(x: LocalElem, k: int) -> LocalElem:
    pk = x.spec.p ** k
    return LocalElem(x.spec, tuple(c % pk for c in x.coeffs))


def _coeff_div_pk(x: LocalElem, k: int) -> LocalElem:
    pk = x.spec.p ** k
    return LocalElem(x.spec, tuple(c // pk for c in x.coeffs))


def howell_form(rows: Sequence[Sequence[LocalElem]]) -> tuple[tuple[LocalElem, ...], ...]:
    """Howell canonical generating set of the row module of `rows`."""
    work = [list(r) for r in rows if any(x.coeffs != (0,) * x.spec.f for x in r)]
    if not work:
        return ()
    spec = work[0][0].spec
    ncols = len(work[0])
    N = spec.N
    from .rings import invert as _invert
    result: list[list[LocalElem]] = []
    r = 0
    for c in range(ncols):
        best = None
        best_v = N
        for i in range(r, len(work)):
            v = min(int_valuation(x, spec.p, N) for x in work[i][c].coeffs)
            if v < best_v:
                best, best_v = i, v
        if best is None:
            continue
        work[r], work[best] = work[best], work[r]
        k = best_v
        _, u = unit_part(work[r][c])
        work[r] = _row_scale(work[r], _invert(u))
        for i in range(r + 1, len(work)):
            if work[i][c]:
                q = _coeff_div_pk(work[i][c], k)
                work[i] = _row_sub(work[i], work[r], q)
        for i in range(r):
            if any(cc >= spec.p ** k for cc in work[i][c].coeffs):
                q = _coeff_div_pk(work[i][c] - _coeff_mod_pk(work[i][c], k), k)
                work[i] = _row_sub(work[i], work[r], q)
        if k > 0:
            ann = spec.pi_pow(N - k)
            extra = _row_scale(work[r], ann)
            if any(x for x in extra):
                work.append(extra)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r] if any(x for x in row))


def _pivot(row: Sequence[LocalElem]) -> tuple[int, int]:
    """(column, valuation) of the leading entry of a Howell row."""
    for j, x in enumerate(row):
        if x:
            v = min(int_valuation(c, x.spec.p, x.spec.N) for c in x.coeffs)
            return j, v
    raise ValueError("zero row has no pivot")


def module_contains(howell_rows, vector: Sequence[LocalElem]) -> bool:
    """Membership test against a Howell form, by greedy reduction."""
    w = list(vector)
    for row in howell_rows:
        j, k = _pivot(row)
        x = w[j]
        if not x:
            continue
        if any(c % (x.spec.p ** k) for c in x.coeffs):
            return False
        q = _coeff_div_pk(x, k)
        w = _row_sub(w, row, q)
    return all(not x for x in w)


@dataclass(frozen=True)
class SolutionModule:
    """Solution set of a homogeneous linear system over W/(p^N), presented
    by a Howell-canonical generating set of flat vectors.  Equality of the
    presentations decides equality of the modules."""

    spec: RingSpec
    ncols: int
    generators: tuple[tuple[LocalElem, ...], ...]

    def contains(self, vector: Sequence[LocalElem]) -> bool:
        return module_contains(self.generators, vector)

    def matrices(self) -> list[Mat3]:
        if self.ncols != 9:
            raise ValueError("generators are not 3x3 matrices")
        return [Mat3(self.spec, g) for g in self.generators]

    def residue_dimension(self) -> int:
        """Dimension of the module's image in the residue-field vector
        space (9f coordinates over F_p, equivalently rank over F_{p^f})."""
        reduced = [[reduce_mod_p(x) for x in g] for g in self.generators]
        return residue_rank(reduced)

    def residue_spanning_generators(self) -> list[tuple[LocalElem, ...]]:
        """Greedy subsequence of generators whose reductions mod p form a
        basis of the module's residue image; generators that vanish mod p
        (truncation artifacts of the solved system) are never selected."""
        chosen: list[tuple[LocalElem, ...]] = []
        reduced: list[list[ResidueElem]] = []
        rank = 0
        for g in self.generators:
            candidate = reduced + [[reduce_mod_p(x) for x in g]]
            r = residue_rank(candidate)
            if r > rank:
                chosen.append(g)
                reduced = candidate
                rank = r
        return chosen


def solve_homogeneous(equations: Sequence[Sequence[LocalElem]], spec: RingSpec,
                      nunknowns: int | None = None) -> SolutionModule:
    """All solutions x of E x = 0 over W/(p^N).

    Computes the Howell form of [E^T | I]; the rows whose leading block
    vanishes generate exactly the kernel, by the saturation property of
    the Howell form.
    """
    eqs = [list(e) for e in equations]
    if nunknowns is None:
        if not eqs:
            raise ValueError("cannot infer the number of unknowns")
        nunknowns = len(eqs[0])
    m = len(eqs)
    zero, one = spec.zero(), spec.one()
    stacked = []
    for j in range(nunknowns):
        row = [eqs[i][j] for i in range(m)]
        row += [one if t == j else zero for t in range(nunknowns)]
        stacked.append(row)
    h = howell_form(stacked)
    kernel_rows = [row[m:] for row in h if all(not x for x in row[:m])]
    canon = howell_form(kernel_rows) if kernel_rows else ()
    return SolutionModule(spec=spec, ncols=nunknowns, generators=canon)


def intertwiners(pair: tuple[Mat3, Mat3], target: tuple[Mat3, Mat3]) -> SolutionModule:
    """The module {U : U A = A0 U and U B = B0 U} for pair (A, B) and
    target (A0, B0), as 18 linear equations in the 9 entries of U."""
    (a, b), (a0, b0) = pair, target
    spec = a.spec
    if any(mat.spec != spec for mat in (b, a0, b0)):
        raise SpecMismatch("intertwiner matrices over different ring specs")
    zero = spec.zero()
    equations = []
    for lhs, rhs in ((a, a0), (b, b0)):
        for i in range(3):
            for j in range(3):
                # coefficient of U[r][s] in (U lhs - rhs U)[i][j]
                row = [zero] * 9
                for s in range(3):
                    row[3 * i + s] = row[3 * i + s] + lhs[(s, j)]
                for r in range(3):
                    row[3 * r + j] = row[3 * r + j] - rhs[(i, r)]
                equations.append(row)
    return solve_homogeneous(equations, spec, 9)


def unit_det_in_module(module: SolutionModule) -> Mat3 | None:
    """First module element with unit determinant, scanning residue-field
    coefficient tuples over the residue-spanning generators in
    lexicographic order (first generator most significant).

    Whether a combination has unit determinant depends only on its
    reduction mod p, and the module is closed under coefficients from
    the full ring, so scanning residue representatives over a spanning
    subsequence of generators is exhaustive.
    """
    if module.ncols != 9:
        raise ValueError("the unit-determinant search expects 3x3 matrices")
    gens = [Mat3(module.spec, g) for g in module.residue_spanning_generators()]
    if len(gens) > 4:
        raise TooManyGenerators(f"{len(gens)} generators exceed the search cap")
    if not gens:
        return None
    spec = module.spec
    gens_res = [g.reduce_mod_p() for g in gens]
    elems = list(spec.residue_elements())
    for combo in itertools.product(elems, repeat=len(gens)):
        if all(c.is_zero() for c in combo):
            continue
        acc = Mat3.zero(spec, residue=True)
        for c, g in zip(combo, gens_res):
            acc = acc + g.scale(c)
        if not acc.det().is_zero():
            out = Mat3.zero(spec)
            for c, g in zip(combo, gens):
                out = out + g.scale(lift(c))
            return out
    return None


# ---------------------------------------------------------------------------
# Matrix text format (shared with the command-line tools):
#   line 1: "p f N"
#   line 2 (only if f > 1): "h c0 c1 ... c_{f-1}"
#   then 3 lines per matrix, 3 whitespace-separated entries per line,
#   each entry being f comma-separated integer coefficients.

def parse_matrix_text(text: str) -> tuple[RingSpec, list[Mat3]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise MatrixFormatError("header must be 'p f N'")
    try:
        p, f, n = (int(t) for t in head)
    except ValueError as exc:
        raise MatrixFormatError("non-integer header field") from exc
    idx = 1
    h = None
    if idx < len(lines) and lines[idx].split()[0] == "h":
        parts = lines[idx].split()[1:]
        try:
            h = [int(t) for t in parts]
        except ValueError as exc:
            raise MatrixFormatError("non-integer modulus coefficient") from exc
        idx += 1
    try:
        spec = ring_make(p, f, n, h)
    except (ValueError, ArithmeticError) as exc:
        raise MatrixFormatError(f"bad ring parameters: {exc}") from exc
    body = lines[idx:]
    if not body or len(body) % 3:
        raise MatrixFormatError("expected groups of 3 entry lines")
    mats = []
    for block in range(0, len(body), 3):
        entries = []
        for ln in body[block:block + 3]:
            cells = ln.split()
            if len(cells) != 3:
                raise MatrixFormatError(f"expected 3 entries per line, got {ln!r}")
            for cell in cells:
                try:
                    coeffs = [int(t) for t in cell.split(",")]
                except ValueError as exc:
                    raise MatrixFormatError(f"bad entry {cell!r}") from exc
                if len(coeffs) != f:
                    raise MatrixFormatError(
                        f"entry {cell!r} needs {f} coefficients")
                entries.append(spec.of(coeffs))
        mats.append(Mat3(spec, tuple(entries)))
    return spec, mats


def format_matrix_text(spec: RingSpec, mats: Sequence[Mat3]) -> str:
    lines = [f"{spec.p} {spec.f} {spec.N}"]
    if spec.f > 1:
        lines.append("h " + " ".join(str(c) for c in spec.modulus))
    for m in mats:
        for row in m.rows():
            lines.append(" ".join(",".join(str(c) for c in x.coeffs) for x in row))
    return "\n".join(lines) + "\n"
