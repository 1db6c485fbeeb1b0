"""Command-line interface: deterministic key=value reports over the
library's local counts, classification, oracle sweeps, selectivity
verdicts, and the worked example.

Exit codes: 0 success, 1 mathematical check failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .embeddings import (
    NotAHomomorphism,
    OrbitClass,
    classify_orbit,
    embedding_number,
    is_optimal,
    is_special,
    local_norm_set,
    make_pair,
    regular_pair,
    regular_special_witness,
    special_normal_form,
)
from .matrices import MatrixFormatError, parse_matrix_text, unit_det_in_module
from .orders import (
    AlgebraKind,
    CubicAlgebraLocal,
    InvalidParameters,
    LocalOrder,
    disc_exponent,
    irreducible_cubics,
)
from .qfield import run_example, verify_S2_local, verify_alpha, verify_beta
from .rings import NotPrime, ReducibleModulus, RingSpec, ring_make
from .selectivity import (
    ConfigError,
    HypothesisViolated,
    InconsistentContext,
    UnknownPrime,
    load_config,
    validate,
    verdict,
)

DEFAULT_SEED = 3141


@dataclass
class Report:
    """Ordered key=value lines plus an exit code; rendering is stable so
    identical inputs produce byte-identical output."""

    lines: list = field(default_factory=list)
    exit_code: int = 0

    def add(self, key: str, value) -> None:
        self.lines.append((key, str(value)))

    def render(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.lines)


def _fmt_set(values) -> str:
    return "{" + ",".join(str(v) for v in sorted(values)) + "}"


def default_precision(a: int, b: int) -> int:
    """Working precision covering every valuation comparison that the
    shape (a, b) can produce, with headroom."""
    return 2 * (a + b) + 6


def _parse_minpoly(text: str, spec: RingSpec):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("minpoly takes three coefficients a0,a1,a2")
    coeffs = []
    for part in parts:
        if "." in part:
            coeffs.append(spec.of([int(t) for t in part.split(".")]))
        else:
            coeffs.append(spec.of(int(part)))
    return coeffs


def _build_order(args, spec: RingSpec) -> LocalOrder:
    if args.kind == "split":
        algebra = CubicAlgebraLocal.split(spec)
    else:
        if not args.minpoly:
            raise InvalidParameters("inert orders need --minpoly a0,a1,a2")
        a0, a1, a2 = _parse_minpoly(args.minpoly, spec)
        algebra = CubicAlgebraLocal.inert(spec, a0, a1, a2)
    return LocalOrder(algebra=algebra, a=args.a, b=args.b)


def _make_spec(args, a: int, b: int) -> RingSpec:
    n = args.precision if args.precision else default_precision(a, b)
    h = [int(t) for t in args.modulus.split(",")] if args.modulus else None
    return ring_make(args.p, args.f, n, h)


def cmd_local_count(args) -> Report:
    rep = Report()
    try:
        spec = _make_spec(args, args.a, args.b)
        order = _build_order(args, spec)
    except (InvalidParameters, NotPrime, ReducibleModulus, ValueError) as exc:
        rep.add("error", exc)
        rep.exit_code = 2
        return rep
    rep.add("m", embedding_number(order))
    rep.add("norm_set", _fmt_set(local_norm_set(order).classes))
    rep.add("disc_exponent", disc_exponent(order))
    return rep


def cmd_classify(args) -> Report:
    rep = Report()
    try:
        with open(args.matrices, "r", encoding="utf-8") as fh:
            spec, mats = parse_matrix_text(fh.read())
    except OSError as exc:
        rep.add("error", exc)
        rep.exit_code = 2
        return rep
    except MatrixFormatError as exc:
        rep.add("error", f"matrix file: {exc}")
        rep.exit_code = 2
        return rep
    if len(mats) != 2:
        rep.add("error", f"expected 2 matrices in the file, found {len(mats)}")
        rep.exit_code = 2
        return rep
    try:
        order = _build_order(args, spec)
    except (InvalidParameters, ValueError) as exc:
        rep.add("error", exc)
        rep.exit_code = 2
        return rep
    try:
        pair = make_pair(order, mats[0], mats[1])
    except NotAHomomorphism as exc:
        rep.add("homomorphism", "false")
        rep.add("reason", exc)
        rep.exit_code = 1
        return rep
    rep.add("homomorphism", "true")
    optimal = is_optimal(pair)
    rep.add("optimal", "true" if optimal else "false")
    if optimal:
        orbit = classify_orbit(pair)
        rep.add("special", "true" if is_special(pair) else "false")
        rep.add("orbit", orbit.value)
    else:
        rep.add("special", "false")
        rep.add("orbit", "none")
    return rep


def _sweep_cells(pmax: int, fmax: int, abmax: int):
    """Deterministic cell list: primes up to pmax, residue degrees up to
    fmax, all split shapes with a + b <= abmax, and all inert shapes
    a <= b <= 2a with a + b <= abmax over two minimal polynomials."""
    primes = [p for p in (2, 3, 5, 7, 11, 13) if p <= pmax]
    cells = []
    for p in primes:
        for f in range(1, fmax + 1):
            modulus = _default_modulus(p, f)
            for a in range(abmax + 1):
                for b in range(abmax + 1 - a):
                    cells.append((p, f, modulus, "split", a, b, None))
            probe = ring_make(p, f, 2, modulus)
            minpolys = [tuple(x.coeffs for x in triple)
                        for triple in irreducible_cubics(probe, 2)]
            for a in range(abmax + 1):
                for b in range(a, min(2 * a, abmax - a) + 1):
                    for mp in minpolys:
                        cells.append((p, f, modulus, "inert", a, b, mp))
    return cells


def _default_modulus(p: int, f: int):
    """First monic degree-f polynomial irreducible mod p, in the scan
    order of constant-first coefficient tuples."""
    if f == 1:
        return None
    for idx in range(p ** f):
        coeffs = []
        k = idx
        for _ in range(f):
            k, c = divmod(k, p)
            coeffs.append(c)
        try:
            ring_make(p, f, 1, coeffs)
            return tuple(coeffs)
        except ReducibleModulus:
            continue
    raise AssertionError("an irreducible polynomial of each degree exists")


def _cell_key(cell):
    p, f, _, kind, a, b, mp = cell
    return (p, f, kind, a, b, mp or ())


def _run_cell(cell):
    p, f, modulus, kind, a, b, mp = cell
    spec = ring_make(p, f, default_precision(a, b), modulus)
    if kind == "split":
        algebra = CubicAlgebraLocal.split(spec)
    else:
        algebra = CubicAlgebraLocal.inert(
            spec, spec.of(mp[0]), spec.of(mp[1]), spec.of(mp[2]))
    order = LocalOrder(algebra=algebra, a=a, b=b)
    closed = embedding_number(order)
    special = special_normal_form(order)
    oracle = 1 if classify_orbit(special) is OrbitClass.REGULAR else 2
    agree = closed == oracle
    if closed == 1 and agree:
        try:
            regular_special_witness(order)
        except Exception:
            agree = False
    def fmt(coeffs):
        if coeffs is None:
            return "-"
        return ",".join(".".join(str(c) for c in t) if len(t) > 1 else str(t[0])
                        for t in coeffs)
    line = (f"p={p} f={f} kind={kind} a={a} b={b} "
            f"minpoly={fmt(mp)} closed={closed} oracle={oracle} "
            f"agree={'true' if agree else 'false'}")
    return _cell_key(cell), line, agree


def cmd_oracle_compare(args) -> Report:
    rep = Report()
    cells = _sweep_cells(args.pmax, args.fmax, args.abmax)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_cell, cells, chunksize=4))
    else:
        results = [_run_cell(cell) for cell in cells]
    results.sort(key=lambda t: t[0])
    all_agree = True
    for _, line, agree in results:
        rep.add("cell", line)
        all_agree &= agree
    rep.add("all_agree", "true" if all_agree else "false")
    rep.exit_code = 0 if all_agree else 1
    return rep


def cmd_selectivity(args) -> Report:
    rep = Report()
    try:
        ctx = load_config(args.config)
    except OSError as exc:
        rep.add("error", exc)
        rep.exit_code = 2
        return rep
    except ConfigError as exc:
        rep.add("error", exc)
        rep.exit_code = 2
        return rep
    findings = validate(ctx)
    for finding in findings:
        rep.add("warn", finding)
    if findings and args.strict:
        rep.exit_code = 1
        return rep
    try:
        v = verdict(ctx)
    except (HypothesisViolated, InconsistentContext, UnknownPrime) as exc:
        rep.add("error", exc)
        rep.exit_code = 1
        return rep
    rep.add("D", _fmt_set(v.D))
    rep.add("selective", "true" if v.selective else "false")
    rep.add("fraction", v.fraction)
    rep.add("admitted", ",".join(v.admitted_types))
    return rep


def cmd_example(args) -> Report:
    rep = Report()
    if args.root == 1:
        rep.add("warn", "conjugate-root completion in use; matrix identities "
                        "are exact over the field and verdicts are unchanged")
    rep.add("completion_root", args.root)
    checks = verify_alpha()
    checks.extend(verify_beta())
    checks.extend(verify_S2_local(args.precision, args.root))
    checks.extend(run_example(args.precision, args.root))
    for c in checks.checks:
        rep.add(f"check {c.name}", "pass" if c.passed else "fail")
    if not checks.ok:
        rep.add("failed", ",".join(checks.failed_names()))
        rep.exit_code = 1
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubicsel",
        description="Local optimal-embedding counts and global selectivity "
                    "verdicts for cubic orders in degree-3 matrix algebras.")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized validation subroutines "
                             "(current subcommands are fully deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    def order_flags(sp, need_ring: bool):
        if need_ring:
            sp.add_argument("--p", type=int, required=True, help="residue characteristic")
            sp.add_argument("--f", type=int, default=1, help="residue degree (default 1)")
            sp.add_argument("--modulus", default=None,
                            help="comma-separated low coefficients of the degree-f "
                                 "defining polynomial (required for f > 1)")
            sp.add_argument("--precision", type=int, default=None,
                            help="precision exponent N (default 2(a+b)+6)")
        sp.add_argument("--kind", choices=("split", "inert"), required=True)
        sp.add_argument("--a", type=int, required=True)
        sp.add_argument("--b", type=int, required=True)
        sp.add_argument("--minpoly", default=None,
                        help="a0,a1,a2 for x^3 - a2 x^2 - a1 x - a0 (inert only)")

    sp = sub.add_parser("local-count", help="embedding number, norm classes, "
                                            "and discriminant exponent of one order")
    order_flags(sp, need_ring=True)
    sp.set_defaults(func=cmd_local_count)

    sp = sub.add_parser("classify", help="classify an embedding pair from a matrix file")
    order_flags(sp, need_ring=False)
    sp.add_argument("--matrices", required=True, help="matrix file with the images of e2 and e3")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("oracle-compare", help="closed-form counts vs the intertwiner oracle")
    sp.add_argument("--pmax", type=int, default=5)
    sp.add_argument("--fmax", type=int, default=2)
    sp.add_argument("--abmax", type=int, default=6)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_oracle_compare)

    sp = sub.add_parser("selectivity", help="global verdict from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                    help="exit 1 when validation finds problems (default on)")
    sp.set_defaults(func=cmd_selectivity)

    sp = sub.add_parser("example", help="verify the Q(sqrt(-23)) worked example")
    sp.add_argument("--precision", type=int, default=16)
    sp.add_argument("--root", type=int, choices=(0, 1), default=0,
                    help="residue seed of the completion root (0 selects (2, omega))")
    sp.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = args.func(args)
    sys.stdout.write(report.render())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
