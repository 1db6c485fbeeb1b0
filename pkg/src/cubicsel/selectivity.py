"""Global selectivity verdicts from declarative class-field data.

The Galois group of the degree-3 setting is cyclic of order 3 and its
elements are encoded as residues 0 (identity), 1, 2.  Class-field inputs
(restriction values rho on prime classes, type labels with their rho'
values, the translation element from a chosen global embedding) are
supplied in a small line-oriented config format rather than computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


class ConfigError(ValueError):
    """The config text violates the grammar."""


class InconsistentContext(ValueError):
    """The context data contradicts class-field constraints."""


class UnknownPrime(KeyError):
    """A referenced prime label is not declared."""


class HypothesisViolated(ValueError):
    """The verdict requires an optimal embedding to exist somewhere."""


class Splitting:
    SPLIT = "split"
    INERT = "inert"


def _check_galois(value: int, what: str) -> int:
    if value not in (0, 1, 2):
        raise ValueError(f"{what} must be 0, 1 or 2, got {value!r}")
    return value


@dataclass(frozen=True)
class PrimeDatum:
    label: str
    rho: int
    splitting: str = Splitting.INERT
    ramified_in_K: bool = False

    def __post_init__(self):
        _check_galois(self.rho, "rho")
        if self.splitting not in (Splitting.SPLIT, Splitting.INERT):
            raise ValueError(f"unknown splitting {self.splitting!r}")


@dataclass(frozen=True)
class SelectivityContext:
    """Declarative global data for one order S in a cubic extension K/F."""

    primes: tuple[PrimeDatum, ...]
    sqrt_disc: tuple[tuple[str, int], ...]
    algebra_is_matrix: bool
    K_unramified_everywhere: bool
    embedding_exists: bool
    vhat: tuple[tuple[str, int], ...] = ()
    types: tuple[tuple[str, int], ...] = ()
    galois: bool = True
    name: str = ""

    def prime(self, label: str) -> PrimeDatum:
        for p in self.primes:
            if p.label == label:
                return p
        raise UnknownPrime(label)


@dataclass(frozen=True)
class Verdict:
    D: frozenset[int]
    selective: bool
    fraction: Fraction
    admitted_types: tuple[str, ...]


def validate(ctx: SelectivityContext) -> list[str]:
    """Non-throwing consistency scan; returns human-readable findings."""
    findings = []
    seen = set()
    for p in ctx.primes:
        if p.label in seen:
            findings.append(f"duplicate prime label {p.label}")
        seen.add(p.label)
        if p.splitting == Splitting.SPLIT and p.rho != 0:
            findings.append(
                f"prime {p.label} splits completely but rho is {p.rho}; "
                "the restriction of a split class is the identity")
        if p.ramified_in_K and ctx.K_unramified_everywhere:
            findings.append(
                f"prime {p.label} is flagged ramified while the extension "
                "is asserted unramified everywhere")
    labels = {p.label for p in ctx.primes}
    for lab, k in ctx.sqrt_disc:
        if lab not in labels:
            findings.append(f"discriminant factor references unknown prime {lab}")
        if k < 1:
            findings.append(f"discriminant factor at {lab} has exponent {k} < 1")
    for lab, _ in ctx.vhat:
        if lab not in labels:
            findings.append(f"translation datum references unknown prime {lab}")
    seen_types = set()
    for lab, rp in ctx.types:
        if lab in seen_types:
            findings.append(f"duplicate type label {lab}")
        seen_types.add(lab)
        if rp not in (0, 1, 2):
            findings.append(f"type {lab} has rho_prime {rp} outside Z/3")
    return findings


def selectivity_set(ctx: SelectivityContext) -> frozenset[int]:
    """D = {0} together with k * rho(p) mod 3 over the exact prime-power
    divisors p^k of the discriminant square root.  The identity is always
    present because almost all primes carry exponent zero."""
    out = {0}
    for lab, k in ctx.sqrt_disc:
        p = ctx.prime(lab)
        if p.splitting == Splitting.SPLIT and p.rho != 0:
            raise InconsistentContext(
                f"split prime {lab} carries nonzero rho {p.rho}")
        out.add((k * p.rho) % 3)
    return frozenset(out)


def vhat_element(ctx: SelectivityContext) -> int:
    """Galois class of the translation element: sum of valuation * rho
    over the declared idele components."""
    total = 0
    for lab, val in ctx.vhat:
        total += val * ctx.prime(lab).rho
    return total % 3


def admitted_types(ctx: SelectivityContext) -> tuple[str, ...]:
    """Type labels admitting an optimal embedding: those whose rho' value
    lies in the translated set vhat + D.  When the selectivity conditions
    fail every type admits one.  Output is ordered by the Galois value,
    then label, so reports are deterministic."""
    if not (ctx.algebra_is_matrix and ctx.K_unramified_everywhere and ctx.galois):
        chosen = list(ctx.types)
    else:
        target = {(vhat_element(ctx) + d) % 3 for d in selectivity_set(ctx)}
        chosen = [(lab, rp) for lab, rp in ctx.types if rp % 3 in target]
    chosen.sort(key=lambda t: (t[1], t[0]))
    return tuple(lab for lab, _ in chosen)


def verdict(ctx: SelectivityContext) -> Verdict:
    """Selectivity verdict: the order misses some types exactly when the
    extension is everywhere unramified, the algebra is the matrix
    algebra, the Galois setting applies, and D is a proper subset of
    Z/3; the admitted fraction is then |D|/3, otherwise 1."""
    if not ctx.embedding_exists:
        raise HypothesisViolated(
            "the verdict presumes an optimal embedding into some maximal order")
    d_set = selectivity_set(ctx)
    conditions = ctx.algebra_is_matrix and ctx.K_unramified_everywhere and ctx.galois
    selective = conditions and d_set != frozenset({0, 1, 2})
    fraction = Fraction(len(d_set), 3) if conditions else Fraction(1)
    return Verdict(D=d_set, selective=selective, fraction=fraction,
                   admitted_types=admitted_types(ctx))


# ---------------------------------------------------------------------------
# Config grammar (UTF-8, line oriented):
#   '#' starts a comment; blank lines ignored.
#   Section headers: [field], [prime <label>], [order], [algebra], [vhat],
#   [type <label>].  Within a section, 'key = value' lines.  Unknown keys
#   and sections are errors.

_BOOLEANS = {"true": True, "false": False}


def _parse_bool(value: str, where: str) -> bool:
    try:
        return _BOOLEANS[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"{where}: expected true or false, got {value!r}") from None


def parse_config(text: str) -> SelectivityContext:
    primes: list[PrimeDatum] = []
    sqrt_disc: list[tuple[str, int]] = []
    vhat: list[tuple[str, int]] = []
    types: list[tuple[str, int]] = []
    algebra = {"matrix": None, "unramified_K": None, "embedding_exists": None}
    name = ""

    section = None
    label = None
    pending_prime: dict | None = None
    pending_type: dict | None = None

    def flush_prime():
        nonlocal pending_prime
        if pending_prime is not None:
            if pending_prime.get("rho") is None:
                raise ConfigError(f"prime {pending_prime['label']} is missing rho")
            try:
                primes.append(PrimeDatum(
                    label=pending_prime["label"],
                    rho=pending_prime["rho"],
                    splitting=pending_prime.get("splitting", Splitting.INERT),
                    ramified_in_K=pending_prime.get("ramified", False),
                ))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            pending_prime = None

    def flush_type():
        nonlocal pending_type
        if pending_type is not None:
            if pending_type.get("rho_prime") is None:
                raise ConfigError(f"type {pending_type['label']} is missing rho_prime")
            types.append((pending_type["label"], pending_type["rho_prime"]))
            pending_type = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{where}: unterminated section header")
            flush_prime()
            flush_type()
            parts = line[1:-1].split()
            if not parts:
                raise ConfigError(f"{where}: empty section header")
            section = parts[0]
            label = parts[1] if len(parts) > 1 else None
            if section in ("field", "order", "algebra", "vhat"):
                if label is not None:
                    raise ConfigError(f"{where}: section [{section}] takes no label")
            elif section in ("prime", "type"):
                if label is None:
                    raise ConfigError(f"{where}: section [{section}] needs a label")
                if section == "prime":
                    pending_prime = {"label": label}
                else:
                    pending_type = {"label": label}
            else:
                raise ConfigError(f"{where}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if section is None:
            raise ConfigError(f"{where}: key outside any section")
        if section == "field":
            if key == "name":
                name = value
            else:
                raise ConfigError(f"{where}: unknown key {key!r} in [field]")
        elif section == "prime":
            if key == "rho":
                try:
                    pending_prime["rho"] = _check_galois(int(value), "rho")
                except ValueError:
                    raise ConfigError(f"{where}: rho must be 0, 1 or 2") from None
            elif key == "splitting":
                if value not in (Splitting.SPLIT, Splitting.INERT):
                    raise ConfigError(f"{where}: splitting must be split or inert")
                pending_prime["splitting"] = value
            elif key == "ramified":
                pending_prime["ramified"] = _parse_bool(value, where)
            else:
                raise ConfigError(f"{where}: unknown key {key!r} in [prime]")
        elif section == "order":
            if key != "factor":
                raise ConfigError(f"{where}: unknown key {key!r} in [order]")
            parts = value.split()
            if len(parts) != 2:
                raise ConfigError(f"{where}: factor takes '<label> <k>'")
            try:
                k = int(parts[1])
            except ValueError:
                raise ConfigError(f"{where}: factor exponent must be an integer") from None
            if k < 1:
                raise ConfigError(f"{where}: factor exponent must be >= 1")
            sqrt_disc.append((parts[0], k))
        elif section == "algebra":
            if key not in algebra:
                raise ConfigError(f"{where}: unknown key {key!r} in [algebra]")
            algebra[key] = _parse_bool(value, where)
        elif section == "vhat":
            if key != "val":
                raise ConfigError(f"{where}: unknown key {key!r} in [vhat]")
            parts = value.split()
            if len(parts) != 2:
                raise ConfigError(f"{where}: val takes '<label> <integer>'")
            try:
                vhat.append((parts[0], int(parts[1])))
            except ValueError:
                raise ConfigError(f"{where}: val second field must be an integer") from None
        elif section == "type":
            if key != "rho_prime":
                raise ConfigError(f"{where}: unknown key {key!r} in [type]")
            try:
                pending_type["rho_prime"] = _check_galois(int(value), "rho_prime")
            except ValueError:
                raise ConfigError(f"{where}: rho_prime must be 0, 1 or 2") from None
        else:
            raise ConfigError(f"{where}: unknown section state")
    flush_prime()
    flush_type()
    missing = [k for k, v in algebra.items() if v is None]
    if missing:
        raise ConfigError(f"[algebra] section is missing keys: {', '.join(missing)}")
    return SelectivityContext(
        primes=tuple(primes),
        sqrt_disc=tuple(sqrt_disc),
        algebra_is_matrix=algebra["matrix"],
        K_unramified_everywhere=algebra["unramified_K"],
        embedding_exists=algebra["embedding_exists"],
        vhat=tuple(vhat),
        types=tuple(types),
        name=name,
    )


def load_config(path) -> SelectivityContext:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
