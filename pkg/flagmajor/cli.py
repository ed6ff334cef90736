"""Command-line front end.

Results go to stdout, logs to stderr. Exit codes: 0 success, 1 a
verification failed, 2 invalid parameters, 3 internal consistency fault.
"""

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from flagmajor.basis import (
    FAMILIES,
    METHODS,
    Basis,
    FailureWitness,
    decompose,
    rpn_basis,
    sn_basis,
    validate_basis,
    weyl_basis,
    wreath_basis,
)
from flagmajor.colored import GroupSpec, element_order, format_element, parse_element
from flagmajor.config import get_settings
from flagmajor.errors import ConsistencyError, FlagMajorError, GroupSizeError, UnsupportedParameters
from flagmajor.polynomial import QPolynomial
from flagmajor.search import SearchLimits, alpha_scan, search_perfect_hilbertian
from flagmajor.signed import THETA_READINGS
from flagmajor.stats import fmaj_polynomial, hilbert_polynomial, poincare_polynomial
from flagmajor.verify import (
    WEYL_SPECS,
    VerificationReport,
    bplus_mahonian,
    bplus_perfectness,
    bplus_polynomial_chain,
    bplus_presentation,
    bplus_relations,
    coxeter_system,
    fmaj_psi_invariance,
    is_hilbertian,
    is_mahonian,
    length_parity_rule,
    parity_criterion,
    psi_bijection,
    theta_bijection,
    theta_length_invariance,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_FAULT = 3

SERIES_KINDS = ("fmaj", "poincare", "hilbert")
VERIFY_PROPERTIES = ("mahonian", "hilbertian", "psi-theta", "parity", "all")
BASIS_KINDS = ("u", "tau", "t")


def _time_limit(args: argparse.Namespace) -> Optional[float]:
    """The search time cap: explicit, else none for long runs, else the configured default."""
    if getattr(args, "command", None) != "search":
        return None
    if args.time_limit is not None:
        return float(args.time_limit)
    if args.long_running:
        return None
    return get_settings().time_limit


class CommandConfig:
    """Validated options of one invocation.

    Attributes:
        command: The subcommand.
        family: ``A``, ``B``, ``D`` or ``Bplus`` when a family was chosen.
        spec: The group G(r, p, n) (for a family, the ambient G(r, p, n)).
        variant: ``standard``, ``beta`` or ``zero``.
        alpha, beta: Optional u-basis parameters.
        kind: Which construction to use for --r/--p/--n groups.
        output_format: ``text`` or ``json``.
        max_order: Largest group the command may enumerate.
        verbosity: Number of -v flags.
    """

    def __init__(
        self,
        command: str,
        family: Optional[str],
        spec: Optional[GroupSpec],
        variant: str = "standard",
        alpha: Optional[int] = None,
        beta: Optional[int] = None,
        kind: str = "u",
        output_format: str = "text",
        max_order: int = 10**6,
        time_limit: Optional[float] = None,
        workers: int = 1,
        max_candidates: Optional[int] = None,
        long_running: bool = False,
        method: str = "table",
        theta_reading: str = "prose",
        verbosity: int = 0,
    ) -> None:
        self.command: str = command
        self.family: Optional[str] = family
        self.spec: Optional[GroupSpec] = spec
        self.variant: str = variant
        self.alpha: Optional[int] = alpha
        self.beta: Optional[int] = beta
        self.kind: str = kind
        self.output_format: str = output_format
        self.max_order: int = max_order
        self.time_limit: Optional[float] = time_limit
        self.workers: int = workers
        self.max_candidates: Optional[int] = max_candidates
        self.long_running: bool = long_running
        self.method: str = method
        self.theta_reading: str = theta_reading
        self.verbosity: int = verbosity

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CommandConfig":
        """Check parameter combinations before anything is computed.

        Raises:
            UnsupportedParameters: On a missing or contradictory option.
            GroupSizeError: If the group exceeds --max-order.
        """
        family = getattr(args, "family", None)
        group_text = getattr(args, "group", None)
        r = getattr(args, "r", None)
        p = getattr(args, "p", None)
        n = getattr(args, "n", None)
        zero = getattr(args, "zero", False)
        beta = getattr(args, "beta", None)
        alpha = getattr(args, "alpha", None)
        kind = getattr(args, "kind", "u")
        variant = "zero" if zero else ("beta" if beta is not None else "standard")

        spec: Optional[GroupSpec] = None
        if group_text is not None:
            if family is not None or r is not None or p is not None or n is not None:
                raise UnsupportedParameters("use either --group or --family/--r/--p/--n, not both")
            spec = GroupSpec.parse(group_text)
        elif args.command != "alpha-scan":
            if n is None:
                raise UnsupportedParameters("--n is required")
            if family is not None:
                if r is not None or p is not None:
                    raise UnsupportedParameters("use either --family or --r/--p, not both")
                if variant != "standard" or alpha is not None or kind != "u":
                    raise UnsupportedParameters("--alpha/--beta/--zero/--kind apply to --r/--p/--n groups")
                if family == "Bplus":
                    spec = GroupSpec(2, 1, n)
                else:
                    fr, fp = WEYL_SPECS[family]
                    spec = GroupSpec(fr, fp, n)
            else:
                if r is None:
                    raise UnsupportedParameters("give --family or --r (with --p and --n)")
                spec = GroupSpec(r, 1 if p is None else p, n)

        max_order = args.max_order
        if spec is not None and spec.order > max_order:
            raise GroupSizeError(spec.order, max_order)
        return cls(
            command=args.command,
            family=family,
            spec=spec,
            variant=variant,
            alpha=alpha,
            beta=beta,
            kind=kind,
            output_format=args.format,
            max_order=max_order,
            time_limit=_time_limit(args),
            workers=getattr(args, "workers", 1),
            max_candidates=getattr(args, "max_candidates", None),
            long_running=getattr(args, "long_running", False),
            method=getattr(args, "method", "table"),
            theta_reading=getattr(args, "theta_reading", "prose"),
            verbosity=args.verbose,
        )

    @property
    def n(self) -> int:
        assert self.spec is not None
        return self.spec.n

    @property
    def timings(self) -> bool:
        return self.verbosity > 0

    def weyl_family(self) -> Optional[str]:
        """The Coxeter family of the selected group, if it has one."""
        if self.family is not None:
            return self.family
        assert self.spec is not None
        for name, (r, p) in WEYL_SPECS.items():
            if (self.spec.r, self.spec.p) == (r, p):
                return name
        return None

    def build_basis(self) -> Basis:
        """Construct the basis selected by the options."""
        assert self.spec is not None
        if self.family is not None:
            return FAMILIES[self.family](self.spec.n)
        spec = self.spec
        if self.kind == "t":
            if (spec.r, spec.p) != (1, 1):
                raise UnsupportedParameters("the t-basis needs r = p = 1")
            return sn_basis(spec.n)
        if self.kind == "tau":
            if spec.p != 1 or self.variant != "standard" or self.alpha is not None:
                raise UnsupportedParameters("the tau-basis needs p = 1 and no variant options")
            return wreath_basis(spec.r, spec.n)
        return rpn_basis(spec, self.variant, self.beta, self.alpha)


def _emit(config: CommandConfig, payload: Dict[str, object], text: str) -> None:
    if config.output_format == "json":
        record: Dict[str, object] = {"schema": SCHEMA_VERSION, "command": config.command}
        record.update(payload)
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        print(text)


def _polynomial_record(polynomial: QPolynomial) -> Dict[str, object]:
    return {"text": str(polynomial), "coefficients": polynomial.coefficients}


def cmd_basis(config: CommandConfig) -> int:
    """Print a basis and check that its products are distinct."""
    basis = config.build_basis()
    outcome = validate_basis(basis, ceiling=config.max_order)
    record = basis.to_record()
    lines = [
        f"basis: {basis.label}",
        f"group: {basis.group_label} (order {basis.group_order})",
    ]
    if basis.alpha is not None:
        lines.append(f"alpha: {basis.alpha}")
    if basis.beta is not None:
        lines.append(f"beta: {basis.beta}")
    lines.append("moduli: " + ", ".join(str(m) for m in basis.moduli))
    lines.append(f"perfect: {'yes' if basis.perfect else 'no'}")
    lines.append("elements:")
    for i, a in enumerate(basis.elements, 1):
        lines.append(f"  a_{i} = {format_element(a)}  (order {element_order(a)})")

    if isinstance(outcome, FailureWitness):
        lines.append(f"DISTINCT-PRODUCTS: FAIL ({outcome.message})")
        payload: Dict[str, object] = {
            "basis": record,
            "validation": {"ok": False, "witness": outcome.to_dict()},
        }
        _emit(config, payload, "\n".join(lines))
        return EXIT_FAULT
    lines.append(f"DISTINCT-PRODUCTS: OK ({len(outcome)} of {basis.group_order})")
    payload = {
        "basis": record,
        "validation": {"ok": True, "products": len(outcome), "group_order": basis.group_order},
    }
    _emit(config, payload, "\n".join(lines))
    return EXIT_OK


def cmd_decompose(config: CommandConfig, element_text: str) -> int:
    """Print the exponent vector and fmaj of one element."""
    basis = config.build_basis()
    g = parse_element(element_text, basis.r)
    ks = decompose(g, basis, config.method)
    text = "\n".join(
        [
            f"element: {format_element(g)}",
            f"basis: {basis.label}",
            "exponents: " + ", ".join(str(k) for k in ks),
            f"fmaj: {sum(ks)}",
        ]
    )
    payload: Dict[str, object] = {
        "element": format_element(g),
        "basis": basis.label,
        "exponents": list(ks),
        "fmaj": sum(ks),
    }
    _emit(config, payload, text)
    return EXIT_OK


def cmd_fmaj(config: CommandConfig, element_texts: Sequence[str]) -> int:
    """Print fmaj for each element given."""
    basis = config.build_basis()
    rows: List[Tuple[str, int]] = []
    for text in element_texts:
        g = parse_element(text, basis.r)
        rows.append((format_element(g), sum(decompose(g, basis, config.method))))
    payload: Dict[str, object] = {
        "basis": basis.label,
        "values": [{"element": e, "fmaj": v} for e, v in rows],
    }
    _emit(config, payload, "\n".join(f"{e}\t{v}" for e, v in rows))
    return EXIT_OK


def cmd_series(config: CommandConfig, kind: str) -> int:
    """Print the fmaj, Poincare or Hilbert series of the selected group."""
    assert config.spec is not None
    if kind == "fmaj":
        basis = config.build_basis()
        label = basis.label
        polynomial = fmaj_polynomial(basis)
    elif kind == "poincare":
        family = config.weyl_family()
        if family is None:
            raise UnsupportedParameters(
                f"{config.spec.label} has no Coxeter generating set; use A, B, D or Bplus"
            )
        label, group, generators = coxeter_system(family, config.n)
        polynomial = poincare_polynomial(group, generators)
    else:
        if config.family == "Bplus":
            raise UnsupportedParameters("no Hilbert series is defined here for B_n+")
        label = config.spec.label
        polynomial = hilbert_polynomial(config.spec)
    payload: Dict[str, object] = {"series": kind, "group": label}
    payload.update(_polynomial_record(polynomial))
    _emit(config, payload, str(polynomial))
    return EXIT_OK


def _verify_reports(config: CommandConfig, prop: str) -> List[VerificationReport]:
    assert config.spec is not None
    n = config.n
    family = config.weyl_family()
    reports: List[VerificationReport] = []
    if prop in ("mahonian", "all"):
        if family == "Bplus":
            reports.append(bplus_mahonian(n))
        elif family is not None:
            _, group, generators = coxeter_system(family, n)
            basis = weyl_basis(family, n) if config.family else config.build_basis()
            reports.append(is_mahonian(basis, group, generators))
        elif prop == "mahonian":
            raise UnsupportedParameters(f"{config.spec.label} is not a Coxeter group")
    if prop in ("hilbertian", "all"):
        if family == "Bplus":
            if prop == "hilbertian":
                raise UnsupportedParameters("no Hilbert series is defined here for B_n+")
        else:
            reports.append(is_hilbertian(config.build_basis(), config.spec))
    if prop in ("psi-theta", "all") and (prop == "psi-theta" or family in ("D", "Bplus")):
        if n < 2:
            raise UnsupportedParameters("psi and theta need n >= 2")
        reports.extend(
            [
                psi_bijection(n),
                fmaj_psi_invariance(n),
                theta_bijection(n, config.theta_reading),
                theta_length_invariance(n, config.theta_reading),
                bplus_polynomial_chain(n),
            ]
        )
        if family == "Bplus" or prop == "psi-theta":
            reports.extend([bplus_presentation(n), bplus_relations(n), bplus_perfectness(n)])
    if prop in ("parity", "all") and (prop == "parity" or family in ("D", "Bplus")):
        if n < 2:
            raise UnsupportedParameters("the parity checks need n >= 2")
        reports.extend([parity_criterion(n), length_parity_rule(n)])
    return reports


def cmd_verify(config: CommandConfig, prop: str) -> int:
    """Run the selected checks; exit 1 if any of them fails."""
    reports = _verify_reports(config, prop)
    holds = all(report.holds for report in reports)
    payload: Dict[str, object] = {
        "holds": holds,
        "reports": [report.to_dict(config.timings) for report in reports],
    }
    text = "\n\n".join(report.render_text(config.timings) for report in reports)
    _emit(config, payload, text)
    return EXIT_OK if holds else EXIT_FAILED


def cmd_search(config: CommandConfig) -> int:
    """Search for a perfect Hilbertian basis and print the outcome."""
    assert config.spec is not None
    limits = SearchLimits(
        max_candidates=config.max_candidates,
        time_limit=config.time_limit,
        workers=config.workers,
        long_running=config.long_running,
    )
    outcome = search_perfect_hilbertian(config.spec, limits)
    lines = [
        f"group: {config.spec.label} (order {config.spec.order})",
        "required orders: " + ", ".join(str(m) for m in outcome.orders),
        "orderings: " + "; ".join(str(o) for o in outcome.orderings),
        f"candidates examined: {outcome.candidates}",
    ]
    if outcome.found is not None:
        lines.append("result: found")
        for i, a in enumerate(outcome.found.elements, 1):
            lines.append(f"  a_{i} = {format_element(a)}  (order {outcome.found.moduli[i - 1]})")
    elif outcome.exhausted:
        lines.append("result: none (exhausted)")
    else:
        lines.append(f"result: none (stopped: {outcome.stop_reason})")
    if config.timings:
        lines.append(f"elapsed: {outcome.elapsed:.3f}s")
    _emit(config, outcome.to_dict(config.timings), "\n".join(lines))
    return EXIT_OK


def cmd_alpha_scan(config: CommandConfig, r_max: int, n_max: int) -> int:
    """Tabulate select_alpha over a range of groups."""
    cells = alpha_scan(r_max, n_max)
    coprime = [c for c in cells if c.gcd == 1]
    relaxed = [c for c in cells if c.gcd > 1]
    summary = {
        "cells": len(cells),
        "gcd_one": len(coprime),
        "gcd_one_with_alpha": sum(1 for c in coprime if c.alpha is not None),
        "gcd_above_one": len(relaxed),
        "gcd_above_one_with_alpha": sum(1 for c in relaxed if c.alpha is not None),
    }
    lines = [
        f"{c.spec.label}\tgcd={c.gcd}\talpha={'none' if c.alpha is None else c.alpha}"
        for c in cells
    ]
    lines.extend(f"{key}: {value}" for key, value in summary.items())
    payload: Dict[str, object] = {"cells": [c.to_dict() for c in cells], "summary": summary}
    _emit(config, payload, "\n".join(lines))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    settings = get_settings()

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="Output format.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging; timings.")
    common.add_argument(
        "--max-order",
        type=int,
        default=settings.cli_max_order,
        help="Largest group order that may be enumerated.",
    )

    group = argparse.ArgumentParser(add_help=False)
    group.add_argument("--family", choices=sorted(FAMILIES), help="Weyl family or Bplus.")
    group.add_argument("--r", type=int, help="Color modulus r.")
    group.add_argument("--p", type=int, help="Index p (a divisor of r); default 1.")
    group.add_argument("--n", type=int, help="Degree n.")
    group.add_argument("--group", help="Group parameters as r,p,n or G(r,p,n).")

    construction = argparse.ArgumentParser(add_help=False)
    construction.add_argument("--alpha", type=int, help="Use this alpha instead of the smallest valid one.")
    variant = construction.add_mutually_exclusive_group()
    variant.add_argument("--beta", type=int, help="Use the beta variant of the top element.")
    variant.add_argument("--zero", action="store_true", help="Use the colorless top element (r = p).")
    construction.add_argument("--kind", choices=BASIS_KINDS, default="u", help="Construction for --r/--p/--n.")
    construction.add_argument("--method", choices=METHODS, default="table", help="Decomposition method.")

    parser = argparse.ArgumentParser(
        prog="flagmajor", description="Perfect bases and flag major index for G(r,p,n)."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("basis", parents=[common, group, construction], help="Build and validate a basis.")

    decompose_parser = subparsers.add_parser(
        "decompose", parents=[common, group, construction], help="Exponent vector of an element."
    )
    decompose_parser.add_argument("element", help="Element text, e.g. '[-2,1,3]' or 'c=[..];w=[..]'.")

    fmaj_parser = subparsers.add_parser("fmaj", parents=[common, group, construction], help="fmaj of elements.")
    fmaj_parser.add_argument("elements", nargs="+", help="Element texts.")

    series_parser = subparsers.add_parser(
        "series", parents=[common, group, construction], help="Generating polynomials."
    )
    series_parser.add_argument("kind_of_series", metavar="series", choices=SERIES_KINDS)

    verify_parser = subparsers.add_parser(
        "verify", parents=[common, group, construction], help="Exhaustive property checks."
    )
    verify_parser.add_argument("property", choices=VERIFY_PROPERTIES)
    verify_parser.add_argument(
        "--theta-reading", choices=THETA_READINGS, default="prose", help="Branch condition of theta."
    )

    search_parser = subparsers.add_parser(
        "search", parents=[common, group], help="Search for a perfect Hilbertian basis."
    )
    search_parser.add_argument(
        "--time-limit",
        type=float,
        help=f"Seconds (default {settings.time_limit:g}; none with --long-running).",
    )
    search_parser.add_argument("--workers", type=int, default=settings.workers, help="Worker processes.")
    search_parser.add_argument("--max-candidates", type=int, help="Stop after this many candidates.")
    search_parser.add_argument(
        "--long-running", action="store_true", help="Allow groups above the quick-search size."
    )

    scan_parser = subparsers.add_parser("alpha-scan", parents=[common], help="Scan alpha existence.")
    scan_parser.add_argument("--r-max", type=int, default=12)
    scan_parser.add_argument("--n-max", type=int, default=6)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    handlers: Dict[str, Callable[[CommandConfig], int]] = {
        "basis": cmd_basis,
        "decompose": lambda c: cmd_decompose(c, args.element),
        "fmaj": lambda c: cmd_fmaj(c, args.elements),
        "series": lambda c: cmd_series(c, args.kind_of_series),
        "verify": lambda c: cmd_verify(c, args.property),
        "search": cmd_search,
        "alpha-scan": lambda c: cmd_alpha_scan(c, args.r_max, args.n_max),
    }
    try:
        config = CommandConfig.from_args(args)
        return handlers[args.command](config)
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for key, value in sorted(exc.details.items()):
            print(f"  {key}: {value}", file=sys.stderr)
        return EXIT_FAULT
    except (FlagMajorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
