"""Exact arithmetic in truncated unramified local rings.

The base object is W/(p^N) where W is the unramified extension of the
p-adic integers with residue degree f, realized as (Z/p^N)[x]/(h) for a
monic degree-f polynomial h that is irreducible modulo p.  Elements are
stored as tuples of f canonical integer coefficients in [0, p^N); the
residue field F_{p^f} uses coefficients in [0, p).

Everything here is immutable and all operations are pure functions, so
values can be shared freely across threads or worker processes.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence


class NotPrime(ValueError):
    """The claimed characteristic fails a primality check."""


class ReducibleModulus(ValueError):
    """The defining polynomial h is not irreducible modulo p."""


class SpecMismatch(ValueError):
    """Operands belong to different ring specs."""


class NotAUnit(ArithmeticError):
    """Inversion was requested for a non-unit element."""


class NotSimpleRoot(ArithmeticError):
    """Hensel lifting requires a simple root of the reduction."""


class PrecisionTooLow(ArithmeticError):
    """The working precision cannot certify the requested quantity."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_BOUND = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin below 3.3e24, trial division above)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    if n < _MR_BOUND:
        d = n - 1
        r = 0
        while d % 2 == 0:
            d //= 2
            r += 1
        for w in _MR_WITNESSES:
            x = pow(w, d, n)
            if x in (1, n - 1):
                continue
            for _ in range(r - 1):
                x = x * x % n
                if x == n - 1:
                    break
            else:
                return False
        return True
    q = 41
    while q * q <= n:
        if n % q == 0:
            return False
        q += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """Parameters of a ring W/(p^N): characteristic p, residue degree f,
    precision exponent N, and the low coefficients (c0..c_{f-1}) of the
    monic defining polynomial h = x^f + c_{f-1} x^{f-1} + ... + c0."""

    p: int
    f: int
    N: int
    modulus: tuple[int, ...]

    @functools.cached_property
    def pn(self) -> int:
        return self.p ** self.N

    @functools.cached_property
    def residue_size(self) -> int:
        return self.p ** self.f

    def zero(self) -> "LocalElem":
        return LocalElem(self, (0,) * self.f)

    def one(self) -> "LocalElem":
        return self.of(1)

    def of(self, value) -> "LocalElem":
        """Coerce an integer or coefficient sequence into the ring."""
        if isinstance(value, LocalElem):
            if value.spec != self:
                raise SpecMismatch(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, int):
            coeffs = (value % self.pn,) + (0,) * (self.f - 1)
            return LocalElem(self, coeffs)
        coeffs = tuple(int(c) % self.pn for c in value)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {len(coeffs)}")
        return LocalElem(self, coeffs)

    def pi_pow(self, k: int) -> "LocalElem":
        """The uniformizer power p^k as a ring element (0 once k >= N)."""
        if k < 0:
            raise ValueError("negative uniformizer power is not integral")
        return self.of(self.p ** k if k < self.N else 0)

    def residue(self, value) -> "ResidueElem":
        if isinstance(value, ResidueElem):
            if value.spec != self:
                raise SpecMismatch(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, int):
            return ResidueElem(self, (value % self.p,) + (0,) * (self.f - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {len(coeffs)}")
        return ResidueElem(self, coeffs)

    def residue_elements(self) -> Iterator["ResidueElem"]:
        """All p^f residue-field elements, enumerated by base-p digit tuples
        (constant coefficient least significant)."""
        for k in range(self.residue_size):
            yield self.residue_by_index(k)

    def residue_by_index(self, k: int) -> "ResidueElem":
        coeffs = []
        for _ in range(self.f):
            k, c = divmod(k, self.p)
            coeffs.append(c)
        return ResidueElem(self, tuple(coeffs))

    def __repr__(self):
        return f"RingSpec(p={self.p}, f={self.f}, N={self.N})"


def ring_make(p: int, f: int, N: int, h: Sequence[int] | None = None) -> RingSpec:
    """Validate parameters and build a RingSpec.

    h gives the low coefficients (constant first) of the monic degree-f
    defining polynomial; it may be omitted when f = 1 (x is used).  For
    f in {2, 3} irreducibility mod p is equivalent to having no root in
    the prime field, which is checked exhaustively.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1 or f > 3:
        raise ValueError("residue degree f must be 1, 2 or 3")
    if N < 1:
        raise ValueError("precision exponent N must be >= 1")
    if h is None:
        if f != 1:
            raise ValueError("a defining polynomial is required for f > 1")
        low = (0,)
    else:
        low = tuple(int(c) % p for c in h)
        if len(low) != f:
            raise ValueError(f"expected {f} low coefficients for h, got {len(low)}")
    if f > 1:
        for r in range(p):
            if (pow(r, f, p) + sum(low[i] * pow(r, i, p) for i in range(f))) % p == 0:
                raise ReducibleModulus(
                    f"h has the root {r} modulo {p}, so it is reducible")
    return RingSpec(p=p, f=f, N=N, modulus=low)


def _poly_mul_reduce(a: tuple, b: tuple, low: tuple, f: int, mod: int) -> tuple:
    # Schoolbook product followed by reduction via x^f = -(low part); f <= 3.
    if f == 1:
        return (a[0] * b[0] % mod,)
    prod = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for d in range(2 * f - 2, f - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(f):
                prod[d - f + i] -= c * low[i]
    return tuple(c % mod for c in prod[:f])


class LocalElem:
    """An element of W/(p^N), as canonical coefficients on 1, x, .., x^{f-1}."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, LocalElem):
            if other.spec != self.spec:
                raise SpecMismatch("operands from different ring specs")
            return other
        if isinstance(other, int):
            return self.spec.of(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        mod = self.spec.pn
        return LocalElem(self.spec, tuple((a + b) % mod for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        mod = self.spec.pn
        return LocalElem(self.spec, tuple(-a % mod for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        mod = self.spec.pn
        return LocalElem(self.spec, tuple((a - b) % mod for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        s = self.spec
        return LocalElem(s, _poly_mul_reduce(self.coeffs, o.coeffs, s.modulus, s.f, s.pn))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.of(other)
        return (isinstance(other, LocalElem) and self.spec == other.spec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        if self.spec.f == 1:
            return f"{self.coeffs[0]} (mod {self.spec.p}^{self.spec.N})"
        return f"{list(self.coeffs)} (mod {self.spec.p}^{self.spec.N})"


class ResidueElem:
    """An element of the residue field F_{p^f}."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, ResidueElem):
            if other.spec != self.spec:
                raise SpecMismatch("operands from different ring specs")
            return other
        if isinstance(other, int):
            return self.spec.residue(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return ResidueElem(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return ResidueElem(self.spec, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return ResidueElem(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        s = self.spec
        return ResidueElem(s, _poly_mul_reduce(self.coeffs, o.coeffs, s.modulus, s.f, s.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.residue(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "ResidueElem":
        if self.is_zero():
            raise NotAUnit("zero has no inverse in the residue field")
        s = self.spec
        if s.f == 1:
            return ResidueElem(s, (pow(self.coeffs[0], s.p - 2, s.p),))
        # Extended Euclid of the coefficient polynomial with h over F_p.
        inv = _fp_poly_invmod(list(self.coeffs), list(s.modulus) + [1], s.p)
        inv += [0] * (s.f - len(inv))
        return ResidueElem(s, tuple(inv[:s.f]))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.residue(other)
        return (isinstance(other, ResidueElem) and self.spec == other.spec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(("res", self.spec, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def index(self) -> int:
        """Position of the element in the canonical base-p digit enumeration."""
        return sum(c * self.spec.p ** i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.spec.f == 1:
            return f"{self.coeffs[0]} (mod {self.spec.p})"
        return f"{list(self.coeffs)} (mod {self.spec.p})"


def _fp_poly_divmod(num: list[int], den: list[int], p: int):
    num = [c % p for c in num]
    den = [c % p for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(0, len(num) - len(den) + 1)
    rem = list(num)
    while len(rem) >= len(den) and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(den):
            break
        shift = len(rem) - len(den)
        factor = rem[-1] * inv_lead % p
        quot[shift] = factor
        for i, dc in enumerate(den):
            rem[shift + i] = (rem[shift + i] - factor * dc) % p
    return quot, rem


def _fp_poly_invmod(a: list[int], mod: list[int], p: int) -> list[int]:
    # Inverse of a modulo mod in F_p[x], via extended Euclid.
    r0, r1 = list(mod), [c % p for c in a]
    t0, t1 = [0], [1]
    while any(r1):
        q, r = _fp_poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        qt = [0] * (len(q) + len(t1))
        for i, qc in enumerate(q):
            if qc:
                for j, tc in enumerate(t1):
                    qt[i + j] = (qt[i + j] + qc * tc) % p
        t_new = [(t0[i] if i < len(t0) else 0) - (qt[i] if i < len(qt) else 0)
                 for i in range(max(len(t0), len(qt)))]
        t0, t1 = t1, [c % p for c in t_new]
    while r0 and r0[-1] == 0:
        r0.pop()
    if len(r0) != 1:
        raise NotAUnit("element is not invertible modulo h")
    scale = pow(r0[0], p - 2, p)
    return [c * scale % p for c in t0]


@dataclass(frozen=True)
class Valuation:
    """p-adic valuation certified at the working precision: Exact(k) with
    k < N, or at-least-precision (k is None), in particular for zero."""

    k: int | None = None

    @classmethod
    def exact(cls, k: int) -> "Valuation":
        return cls(k)

    @classmethod
    def at_least_precision(cls) -> "Valuation":
        return cls(None)

    @property
    def is_exact(self) -> bool:
        return self.k is not None

    def __repr__(self):
        return f"Exact({self.k})" if self.is_exact else "AtLeastPrecision"


def int_valuation(c: int, p: int, cap: int) -> int:
    """v_p of a canonical representative; returns cap for zero."""
    if c == 0:
        return cap
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


def valuation(x: LocalElem) -> Valuation:
    """Valuation of x: the minimum of the coefficient valuations, since the
    power basis of an unramified extension is an integral basis."""
    s = x.spec
    v = min(int_valuation(c, s.p, s.N) for c in x.coeffs)
    return Valuation.exact(v) if v < s.N else Valuation.at_least_precision()


def is_unit(x: LocalElem) -> bool:
    return any(c % x.spec.p for c in x.coeffs)


def invert(x: LocalElem) -> LocalElem:
    """Inverse in W/(p^N): residue-field inverse lifted by Newton iteration."""
    if not is_unit(x):
        raise NotAUnit(f"{x!r} is not a unit")
    s = x.spec
    y = lift(reduce_mod_p(x).inverse())
    two = s.of(2)
    k = 1
    while k < s.N:
        y = y * (two - x * y)
        k *= 2
    return y


def reduce_mod_p(x: LocalElem) -> ResidueElem:
    return ResidueElem(x.spec, tuple(c % x.spec.p for c in x.coeffs))


def lift(r: ResidueElem) -> LocalElem:
    """Canonical lift of a residue element (same coefficient tuple)."""
    return LocalElem(r.spec, r.coeffs)


def exact_div_pk(x: LocalElem, k: int) -> LocalElem:
    """Divide by p^k, which must divide every coefficient exactly."""
    if k == 0:
        return x
    pk = x.spec.p ** k
    if any(c % pk for c in x.coeffs):
        raise PrecisionTooLow(f"{x!r} is not divisible by p^{k}")
    return LocalElem(x.spec, tuple(c // pk for c in x.coeffs))


def unit_part(x: LocalElem) -> tuple[int, LocalElem]:
    """Decompose a nonzero x as p^k * u with u a unit; returns (k, u)."""
    v = valuation(x)
    if not v.is_exact:
        raise NotAUnit("zero has no unit part at this precision")
    return v.k, exact_div_pk(x, v.k)


def local_poly_eval(coeffs: Sequence[LocalElem], x: LocalElem) -> LocalElem:
    """Evaluate a polynomial (constant coefficient first) at x."""
    acc = x.spec.zero()
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def hensel_root(coeffs: Sequence[LocalElem], seed: ResidueElem) -> LocalElem:
    """Lift a simple residue root to a root at full precision N by Newton
    iteration.  Requires poly(seed) = 0 and poly'(seed) a unit mod p."""
    spec = coeffs[0].spec
    if seed.spec != spec:
        raise SpecMismatch("seed from a different ring spec")
    deriv = [spec.of(i) * coeffs[i] for i in range(1, len(coeffs))]
    r = lift(seed)
    if not reduce_mod_p(local_poly_eval(coeffs, r)).is_zero():
        raise NotSimpleRoot("seed is not a root of the reduction")
    if not is_unit(local_poly_eval(deriv, r)):
        raise NotSimpleRoot("derivative vanishes at the seed modulo p")
    k = 1
    while k < spec.N:
        r = r - local_poly_eval(coeffs, r) * invert(local_poly_eval(deriv, r))
        k *= 2
    if not local_poly_eval(coeffs, r).is_zero():
        raise NotSimpleRoot("Newton iteration failed to converge")
    return r


# ---------------------------------------------------------------------------
# Polynomials over the residue field F_{p^f}, as lists of ResidueElem with
# the constant coefficient first.  Used for minimal-polynomial analysis.

def rpoly_trim(poly: list[ResidueElem]) -> list[ResidueElem]:
    while poly and poly[-1].is_zero():
        poly = poly[:-1]
    return poly


def rpoly_eval(poly: Sequence[ResidueElem], x: ResidueElem) -> ResidueElem:
    acc = x.spec.residue(0)
    for c in reversed(list(poly)):
        acc = acc * x + c
    return acc


def rpoly_divmod(num, den):
    num = list(num)
    den = rpoly_trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    spec = den[0].spec
    inv_lead = den[-1].inverse()
    quot = [spec.residue(0)] * max(0, len(num) - len(den) + 1)
    rem = list(num)
    while True:
        rem = rpoly_trim(rem)
        if len(rem) < len(den):
            break
        shift = len(rem) - len(den)
        factor = rem[-1] * inv_lead
        quot[shift] = factor
        for i, dc in enumerate(den):
            rem[shift + i] = rem[shift + i] - factor * dc
    return quot, rem


def rpoly_gcd(u, v):
    """Monic gcd over F_{p^f}."""
    u, v = rpoly_trim(list(u)), rpoly_trim(list(v))
    while v:
        _, r = rpoly_divmod(u, v)
        u, v = v, rpoly_trim(r)
    if u:
        lead_inv = u[-1].inverse()
        u = [c * lead_inv for c in u]
    return u


def rpoly_derivative(poly):
    if len(poly) <= 1:
        return []
    spec = poly[0].spec
    return rpoly_trim([spec.residue(i) * poly[i] for i in range(1, len(poly))])


def rpoly_is_squarefree(poly) -> bool:
    d = rpoly_derivative(poly)
    if not d:
        return len(rpoly_trim(list(poly))) <= 1
    return len(rpoly_gcd(poly, d)) == 1


def rpoly_roots(poly) -> list[ResidueElem]:
    """All roots in F_{p^f}, by exhaustive scan (f <= 3 keeps this small)."""
    poly = rpoly_trim(list(poly))
    if not poly:
        raise ValueError("the zero polynomial has every element as a root")
    spec = poly[0].spec
    return [x for x in spec.residue_elements() if rpoly_eval(poly, x).is_zero()]
