"""Exhaustive checks of the Mahonian, Hilbertian, psi/theta and parity properties.

Every check returns a VerificationReport. A failing report always carries a
witness that can be re-checked on its own.
"""

import logging
import time
from typing import Dict, List, Optional, Sequence, Tuple

from flagmajor.basis import Basis, bplus_basis, decompose, validate_basis, weyl_basis, DecompositionTable
from flagmajor.colored import (
    ColoredPerm,
    GroupSpec,
    closure,
    compose,
    element_order,
    enumerate_group,
    format_element,
    power,
)
from flagmajor.errors import UnsupportedParameters
from flagmajor.polynomial import QPolynomial
from flagmajor.signed import (
    b_length,
    bn_plus_generators,
    bplus_generators_symmetric,
    coxeter_generators,
    d_length,
    enumerate_bplus,
    enumerate_dn,
    is_bplus,
    is_dn,
    psi,
    theta,
)
from flagmajor.stats import bfs_length, fmaj, fmaj_polynomial, hilbert_polynomial, poincare_polynomial

logger = logging.getLogger(__name__)

WEYL_SPECS: Dict[str, Tuple[int, int]] = {"A": (1, 1), "B": (2, 1), "D": (2, 2)}


class VerificationReport:
    """Outcome of one property check.

    Attributes:
        name: The property checked, e.g. ``"mahonian"``.
        group: Description of the group.
        holds: Whether the property holds.
        witness: Key/value description of a counterexample (only when failing).
        sizes: Counts that were examined.
        elapsed: Wall time in seconds.
        note: Optional remark shown with the report.
    """

    def __init__(
        self,
        name: str,
        group: str,
        holds: bool,
        witness: Optional[Dict[str, str]] = None,
        sizes: Optional[Dict[str, int]] = None,
        elapsed: float = 0.0,
        note: str = "",
    ) -> None:
        """Create a report.

        Raises:
            ValueError: If a failing report has no witness.
        """
        if not holds and not witness:
            raise ValueError(f"failing report {name!r} needs a witness")
        self.name: str = name
        self.group: str = group
        self.holds: bool = holds
        self.witness: Dict[str, str] = witness or {}
        self.sizes: Dict[str, int] = sizes or {}
        self.elapsed: float = elapsed
        self.note: str = note

    def to_dict(self, timings: bool = False) -> Dict[str, object]:
        """JSON-ready form; elapsed time only when ``timings`` is set."""
        record: Dict[str, object] = {
            "property": self.name,
            "group": self.group,
            "holds": self.holds,
            "witness": dict(self.witness) if self.witness else None,
            "sizes": dict(self.sizes),
        }
        if self.note:
            record["note"] = self.note
        if timings:
            record["elapsed"] = round(self.elapsed, 6)
        return record

    def render_text(self, timings: bool = False) -> str:
        """One record: a status line followed by indented details."""
        status = "HOLDS" if self.holds else "FAILS"
        lines = [f"{self.name} [{self.group}]: {status}"]
        for key in sorted(self.sizes):
            lines.append(f"  {key}: {self.sizes[key]}")
        for key in sorted(self.witness):
            lines.append(f"  witness.{key}: {self.witness[key]}")
        if self.note:
            lines.append(f"  note: {self.note}")
        if timings:
            lines.append(f"  elapsed: {self.elapsed:.3f}s")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"VerificationReport({self.name}, {self.group}, holds={self.holds})"


def coxeter_system(family: str, n: int) -> Tuple[str, List[ColoredPerm], List[ColoredPerm]]:
    """Return (label, group, generators) for A_n, B_n, D_n or B_n+.

    B_n+ uses R together with the inverses of its elements.

    Raises:
        UnsupportedParameters: For an unknown family.
    """
    if family == "Bplus":
        return f"B_{n}+", enumerate_bplus(n), bplus_generators_symmetric(n)
    if family not in WEYL_SPECS:
        raise UnsupportedParameters(f"unknown family {family!r}")
    r, p = WEYL_SPECS[family]
    spec = GroupSpec(r, p, n)
    return f"{family}_{n}", enumerate_group(spec), coxeter_generators(family, n)


def is_mahonian(
    basis: Basis,
    group: Sequence[ColoredPerm],
    generators: Sequence[ColoredPerm],
    name: str = "mahonian",
) -> VerificationReport:
    """Check that Fmaj of the basis equals the Poincare series of the generators."""
    start = time.perf_counter()
    fmaj_series = fmaj_polynomial(basis)
    poincare = poincare_polynomial(group, generators)
    holds = fmaj_series == poincare
    witness = None if holds else {"fmaj": str(fmaj_series), "poincare": str(poincare)}
    return VerificationReport(
        name,
        f"{basis.group_label} / {basis.label}",
        holds,
        witness,
        {"elements": len(group), "generators": len(generators)},
        time.perf_counter() - start,
    )


def is_hilbertian(basis: Basis, spec: GroupSpec) -> VerificationReport:
    """Check that Fmaj of the basis equals the Hilbert series of G(r, p, n)."""
    start = time.perf_counter()
    fmaj_series = fmaj_polynomial(basis)
    hilbert = hilbert_polynomial(spec)
    holds = fmaj_series == hilbert
    witness = None if holds else {"fmaj": str(fmaj_series), "hilbert": str(hilbert)}
    return VerificationReport(
        "hilbertian",
        f"{spec.label} / {basis.label}",
        holds,
        witness,
        {"elements": basis.group_order},
        time.perf_counter() - start,
    )


def weyl_hilbert_equals_poincare(family: str, n: int) -> VerificationReport:
    """Check Poincare series = Hilbert series for a Weyl group with Coxeter generators."""
    start = time.perf_counter()
    if family not in WEYL_SPECS:
        raise UnsupportedParameters(f"{family!r} is not a Weyl family")
    r, p = WEYL_SPECS[family]
    label, group, generators = coxeter_system(family, n)
    poincare = poincare_polynomial(group, generators)
    hilbert = hilbert_polynomial(GroupSpec(r, p, n))
    holds = poincare == hilbert
    witness = None if holds else {"poincare": str(poincare), "hilbert": str(hilbert)}
    return VerificationReport(
        "hilbert-equals-poincare",
        label,
        holds,
        witness,
        {"elements": len(group)},
        time.perf_counter() - start,
    )


def psi_bijection(n: int) -> VerificationReport:
    """Check that psi maps D_n bijectively onto B_n+."""
    start = time.perf_counter()
    seen: Dict[ColoredPerm, ColoredPerm] = {}
    witness: Optional[Dict[str, str]] = None
    dn = enumerate_dn(n)
    for w in dn:
        image = psi(w)
        if not is_bplus(image):
            witness = {"element": format_element(w), "image": format_element(image), "reason": "image not in B_n+"}
            break
        if image in seen:
            witness = {
                "element": format_element(w),
                "other": format_element(seen[image]),
                "image": format_element(image),
                "reason": "two elements share an image",
            }
            break
        seen[image] = w
    bplus_order = len(enumerate_bplus(n))
    if witness is None and len(seen) != bplus_order:
        witness = {"images": str(len(seen)), "expected": str(bplus_order), "reason": "not onto"}
    return VerificationReport(
        "psi-bijection",
        f"D_{n} -> B_{n}+",
        witness is None,
        witness,
        {"domain": len(dn), "codomain": bplus_order},
        time.perf_counter() - start,
    )


def fmaj_psi_invariance(n: int) -> VerificationReport:
    """Check fmaj_d(w) = fmaj_c(psi(w)) for every w in D_n, element by element."""
    start = time.perf_counter()
    d = weyl_basis("D", n)
    c = bplus_basis(n)
    dn = d.group_elements()
    witness = None
    for w in dn:
        left = fmaj(w, d)
        right = fmaj(psi(w), c)
        if left != right:
            witness = {
                "element": format_element(w),
                "psi": format_element(psi(w)),
                "fmaj_d": str(left),
                "fmaj_c": str(right),
            }
            break
    return VerificationReport(
        "fmaj-psi-invariance",
        f"D_{n} -> B_{n}+",
        witness is None,
        witness,
        {"elements": len(dn)},
        time.perf_counter() - start,
    )


def theta_bijection(n: int, reading: str = "prose") -> VerificationReport:
    """Check that theta maps B_n+ bijectively onto D_n."""
    start = time.perf_counter()
    seen: Dict[ColoredPerm, ColoredPerm] = {}
    witness: Optional[Dict[str, str]] = None
    bplus = enumerate_bplus(n)
    for w in bplus:
        image = theta(w, reading)
        if not is_dn(image):
            witness = {"element": format_element(w), "image": format_element(image), "reason": "image not in D_n"}
            break
        if image in seen:
            witness = {
                "element": format_element(w),
                "other": format_element(seen[image]),
                "image": format_element(image),
                "reason": "two elements share an image",
            }
            break
        seen[image] = w
    dn_order = len(enumerate_dn(n))
    if witness is None and len(seen) != dn_order:
        witness = {"images": str(len(seen)), "expected": str(dn_order), "reason": "not onto"}
    return VerificationReport(
        "theta-bijection",
        f"B_{n}+ -> D_{n} ({reading})",
        witness is None,
        witness,
        {"domain": len(bplus), "codomain": dn_order},
        time.perf_counter() - start,
    )


def theta_length_invariance(n: int, reading: str = "prose") -> VerificationReport:
    """Check that the length in B_n+ (w.r.t. R and its inverses) equals the D_n length of theta(w)."""
    start = time.perf_counter()
    bplus = enumerate_bplus(n)
    bplus_lengths = bfs_length(bplus, bplus_generators_symmetric(n))
    dn = enumerate_dn(n)
    dn_lengths = {w: d_length(w) for w in dn}
    witness = None
    for w in bplus:
        image = theta(w, reading)
        if image not in dn_lengths:
            witness = {"element": format_element(w), "image": format_element(image), "reason": "image not in D_n"}
            break
        if bplus_lengths[w] != dn_lengths[image]:
            witness = {
                "element": format_element(w),
                "image": format_element(image),
                "length_bplus": str(bplus_lengths[w]),
                "length_d": str(dn_lengths[image]),
            }
            break
    return VerificationReport(
        "theta-length-invariance",
        f"B_{n}+ -> D_{n} ({reading})",
        witness is None,
        witness,
        {"elements": len(bplus)},
        time.perf_counter() - start,
    )


def parity_criterion(n: int) -> VerificationReport:
    """Check both stated parity equivalences for fmaj.

    For w in D_n: fmaj_d(w) is even iff w is in B_n+. For w in B_n+:
    fmaj_c(w) is even iff w is in D_n. The equivalence is known to fail
    (delta_1 is in both groups and has fmaj 1), so this report is expected
    to carry a witness; see length_parity_rule for the rule that does hold.
    """
    start = time.perf_counter()
    d = weyl_basis("D", n)
    c = bplus_basis(n)
    dn = d.group_elements()
    bplus = c.group_elements()
    witness = None
    for w in dn:
        value = fmaj(w, d)
        if (value % 2 == 0) != is_bplus(w):
            witness = {
                "element": format_element(w),
                "basis": d.label,
                "fmaj": str(value),
                "in_bplus": str(is_bplus(w)),
            }
            break
    if witness is None:
        for w in bplus:
            value = fmaj(w, c)
            if (value % 2 == 0) != is_dn(w):
                witness = {
                    "element": format_element(w),
                    "basis": c.label,
                    "fmaj": str(value),
                    "in_dn": str(is_dn(w)),
                }
                break
    return VerificationReport(
        "parity-criterion",
        f"D_{n} and B_{n}+",
        witness is None,
        witness,
        {"d_elements": len(dn), "bplus_elements": len(bplus)},
        time.perf_counter() - start,
    )


def length_parity_rule(n: int) -> VerificationReport:
    """Check B_n length parity of w = sum of k_i * (length of delta_i), mod 2, on D_n."""
    start = time.perf_counter()
    d = weyl_basis("D", n)
    weights = [b_length(a) % 2 for a in d.elements]
    dn = d.group_elements()
    witness = None
    for w in dn:
        ks = decompose(w, d)
        predicted = sum(k * weight for k, weight in zip(ks, weights)) % 2
        if b_length(w) % 2 != predicted:
            witness = {"element": format_element(w), "exponents": str(list(ks))}
            break
    return VerificationReport(
        "length-parity-rule",
        f"D_{n}",
        witness is None,
        witness,
        {"elements": len(dn)},
        time.perf_counter() - start,
    )


def bplus_presentation(n: int) -> VerificationReport:
    """Check unique presentation in B_n+ with moduli (n, 2(n-1), ..., 2)."""
    start = time.perf_counter()
    c = bplus_basis(n)
    outcome = validate_basis(c)
    holds = isinstance(outcome, DecompositionTable) and len(outcome) == c.group_order
    witness = None if holds else {"failure": getattr(outcome, "message", "table size mismatch")}
    return VerificationReport(
        "bplus-presentation",
        f"B_{n}+ / {c.label}",
        holds,
        witness,
        {"elements": c.group_order, "products": c.size},
        time.perf_counter() - start,
    )


def bplus_mahonian(n: int) -> VerificationReport:
    """Check Fmaj of the gamma-basis = Poincare series of B_n+ w.r.t. R and its inverses."""
    _, group, generators = coxeter_system("Bplus", n)
    return is_mahonian(bplus_basis(n), group, generators, name="bplus-mahonian")


def bplus_polynomial_chain(n: int) -> VerificationReport:
    """Compute the six sums linking Fmaj over B_n+ to its Poincare series and compare them."""
    start = time.perf_counter()
    c = bplus_basis(n)
    d = weyl_basis("D", n)
    bplus = c.group_elements()
    dn = d.group_elements()
    psi_inverse = {psi(w): w for w in dn}
    theta_inverse = {theta(w): w for w in bplus}
    bplus_lengths = bfs_length(bplus, bplus_generators_symmetric(n))
    dn_lengths = {w: d_length(w) for w in dn}
    terms = [
        ("fmaj_c over B_n+", QPolynomial.from_statistic(fmaj(w, c) for w in bplus)),
        ("fmaj_d of psi^-1 over B_n+", QPolynomial.from_statistic(fmaj(psi_inverse[w], d) for w in bplus)),
        ("fmaj_d over D_n", QPolynomial.from_statistic(fmaj(w, d) for w in dn)),
        ("length_D over D_n", QPolynomial.from_statistic(dn_lengths.values())),
        ("length_B+ of theta^-1 over D_n", QPolynomial.from_statistic(bplus_lengths[theta_inverse[w]] for w in dn)),
        ("length_B+ over B_n+", QPolynomial.from_statistic(bplus_lengths.values())),
    ]
    reference = terms[0][1]
    witness = None
    for name, value in terms[1:]:
        if value != reference:
            witness = {"first": f"{terms[0][0]} = {reference}", "differs": f"{name} = {value}"}
            break
    return VerificationReport(
        "bplus-polynomial-chain",
        f"B_{n}+ and D_{n}",
        witness is None,
        witness,
        {"terms": len(terms), "elements": len(bplus)},
        time.perf_counter() - start,
    )


def bplus_relations(n: int) -> VerificationReport:
    """Check the defining relations of R and that R generates B_n+."""
    start = time.perf_counter()
    generators = bn_plus_generators(n)
    k = len(generators)
    identity = ColoredPerm.identity(n, 2)
    failures: List[str] = []
    if element_order(generators[0]) != 4:
        failures.append("r_1^4")
    for i in range(1, k):
        if power(generators[i], 2) != identity:
            failures.append(f"r_{i + 1}^2")
    for i in range(k - 1):
        if power(compose(generators[i], generators[i + 1]), 3) != identity:
            failures.append(f"(r_{i + 1} r_{i + 2})^3")
    for i in range(k):
        for j in range(i + 2, k):
            if power(compose(generators[i], generators[j]), 2) != identity:
                failures.append(f"(r_{i + 1} r_{j + 1})^2")
    generated = set(closure(generators))
    expected = set(enumerate_bplus(n))
    if generated != expected:
        failures.append("closure")
    witness = {"relations": ", ".join(failures)} if failures else None
    return VerificationReport(
        "bplus-relations",
        f"B_{n}+",
        not failures,
        witness,
        {"generators": k, "closure": len(generated)},
        time.perf_counter() - start,
    )


def bplus_perfectness(n: int) -> VerificationReport:
    """Check that the gamma-basis moduli equal the element orders exactly when n is odd."""
    start = time.perf_counter()
    c = bplus_basis(n)
    orders = [element_order(a) for a in c.elements]
    matches = orders == c.moduli
    holds = matches == (n % 2 == 1) and c.perfect == matches
    witness = None if holds else {"orders": str(orders), "moduli": str(c.moduli)}
    return VerificationReport(
        "bplus-perfectness",
        f"B_{n}+ / {c.label}",
        holds,
        witness,
        {"perfect": int(matches)},
        time.perf_counter() - start,
    )
