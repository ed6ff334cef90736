"""Perfect bases (ordered generating systems) and unique decomposition.

A basis is a sequence (a_1, ..., a_k) with moduli (m_1, ..., m_k) such that
every group element is uniquely a_1^{k_1} a_2^{k_2} ... a_k^{k_k} with
0 <= k_i < m_i. Elements are always stored in left-to-right multiplication
order; constructors take care of the reversed indexing of each family.
"""

import itertools
import logging
import math
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from flagmajor.colored import (
    ColoredPerm,
    GroupSpec,
    compose,
    element_order,
    enumerate_group,
    erase_last,
    format_element,
    in_grpn,
    inverse,
    power,
    closure,
)
from flagmajor.config import default_max_order
from flagmajor.errors import (
    ConsistencyError,
    DimensionError,
    GroupSizeError,
    NotInGroupError,
    PeelUnsupportedError,
    UnsupportedParameters,
)
from flagmajor.signed import enumerate_bplus, is_bplus, psi, signed_perm

logger = logging.getLogger(__name__)

ExponentVector = Tuple[int, ...]

VARIANTS = ("standard", "beta", "zero")
METHODS = ("table", "peel")


class DecompositionTable:
    """The map element -> exponent vector of a validated basis."""

    def __init__(self, entries: Dict[ColoredPerm, ExponentVector]) -> None:
        self.entries: Dict[ColoredPerm, ExponentVector] = entries

    def lookup(self, g: ColoredPerm) -> Optional[ExponentVector]:
        return self.entries.get(g)

    def items(self) -> Iterator[Tuple[ColoredPerm, ExponentVector]]:
        return iter(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, g: object) -> bool:
        return g in self.entries


class FailureWitness:
    """Why a sequence is not a basis of its group.

    Attributes:
        kind: ``"collision"`` (two exponent vectors with one product),
            ``"outside"`` (a product outside the group) or ``"count"``
            (the number of exponent vectors differs from the group order).
        message: Human-readable summary.
        exponents: The offending exponent vector(s).
        element: The product involved, if any.
    """

    def __init__(
        self,
        kind: str,
        message: str,
        exponents: Sequence[ExponentVector] = (),
        element: Optional[ColoredPerm] = None,
    ) -> None:
        self.kind: str = kind
        self.message: str = message
        self.exponents: List[ExponentVector] = list(exponents)
        self.element: Optional[ColoredPerm] = element

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "message": self.message,
            "exponents": [list(ks) for ks in self.exponents],
            "element": None if self.element is None else format_element(self.element),
        }

    def __repr__(self) -> str:
        return f"FailureWitness({self.kind}: {self.message})"


class Basis:
    """An ordered generating system of a group of colored permutations.

    Attributes:
        elements: (a_1, ..., a_k) in left-to-right multiplication order.
        moduli: (m_1, ..., m_k).
        label: Provenance tag such as ``u-basis(4,2,3,alpha=0)``.
        spec: The ambient G(r, p, n).
        perfect: True if every modulus equals the order of its element.
        even_length: True if the target group is B_n+ rather than G(r, p, n).
        peel_coefficient: The coefficient lam of the structural membership
            test c_top = lam * (sum of the lower colors), or None if peel
            decomposition is not available.
        alpha, beta, variant: Construction parameters of the u-basis.
    """

    def __init__(
        self,
        elements: Sequence[ColoredPerm],
        moduli: Sequence[int],
        label: str,
        spec: GroupSpec,
        perfect: bool,
        even_length: bool = False,
        peel_coefficient: Optional[int] = None,
        alpha: Optional[int] = None,
        beta: Optional[int] = None,
        variant: Optional[str] = None,
    ) -> None:
        """Store a basis and check its shape.

        Raises:
            ValueError: If elements and moduli differ in length or a modulus
                is not positive.
            DimensionError: If an element does not live in G(spec.r, spec.n).
            ConsistencyError: If the basis is flagged perfect but a modulus
                differs from the element order.
        """
        if len(elements) != len(moduli):
            raise ValueError(f"{len(elements)} elements but {len(moduli)} moduli")
        if any(m < 1 for m in moduli):
            raise ValueError(f"moduli must be positive, got {list(moduli)}")
        for a in elements:
            if a.n != spec.n or a.r != spec.r:
                raise DimensionError(f"{format_element(a)} is not in G({spec.r},{spec.n})")
        self.elements: List[ColoredPerm] = list(elements)
        self.moduli: List[int] = list(moduli)
        self.label: str = label
        self.spec: GroupSpec = spec
        self.perfect: bool = perfect
        self.even_length: bool = even_length
        self.peel_coefficient: Optional[int] = peel_coefficient
        self.alpha: Optional[int] = alpha
        self.beta: Optional[int] = beta
        self.variant: Optional[str] = variant
        self._table: Optional[DecompositionTable] = None
        self._chain: Optional[List[ColoredPerm]] = None
        if perfect:
            for a, m in zip(self.elements, self.moduli):
                order = element_order(a)
                if order != m:
                    raise ConsistencyError(
                        f"{label}: {format_element(a)} has order {order}, modulus {m}",
                        {"element": format_element(a), "order": str(order)},
                    )

    @property
    def degree(self) -> int:
        return self.spec.n

    @property
    def r(self) -> int:
        return self.spec.r

    @property
    def size(self) -> int:
        """Number of exponent vectors, the product of the moduli."""
        return math.prod(self.moduli)

    @property
    def group_label(self) -> str:
        return f"B_{self.degree}+" if self.even_length else self.spec.label

    @property
    def group_order(self) -> int:
        return self.spec.order // 2 if self.even_length else self.spec.order

    def contains(self, g: ColoredPerm) -> bool:
        """True if g belongs to the target group of this basis."""
        if g.n != self.degree or g.r != self.r:
            return False
        if self.even_length:
            return is_bplus(g)
        return in_grpn(g, self.spec)

    def group_elements(self, ceiling: Optional[int] = None) -> List[ColoredPerm]:
        """Enumerate the target group."""
        if self.even_length:
            limit = default_max_order() if ceiling is None else ceiling
            if self.spec.order > limit:
                raise GroupSizeError(self.spec.order, limit)
            return enumerate_bplus(self.degree)
        return enumerate_group(self.spec, ceiling)

    def table(self) -> DecompositionTable:
        """The validated decomposition table, built on first use.

        Raises:
            ConsistencyError: If the basis fails validation.
        """
        if self._table is None:
            outcome = validate_basis(self)
            if isinstance(outcome, FailureWitness):
                raise ConsistencyError(
                    f"{self.label} is not a basis of {self.group_label}: {outcome.message}",
                    {k: str(v) for k, v in outcome.to_dict().items()},
                )
            self._table = outcome
        return self._table

    def peel_chain(self) -> List[ColoredPerm]:
        """Each element with its top letters erased down to its peel level."""
        if self._chain is None:
            chain = []
            for level, a in enumerate(self.elements):
                for _ in range(level):
                    a = erase_last(a)
                chain.append(a)
            self._chain = chain
        return self._chain

    def to_record(self) -> Dict[str, object]:
        """Structured form used by the command line's JSON output."""
        return {
            "label": self.label,
            "group": self.group_label,
            "order": self.group_order,
            "moduli": list(self.moduli),
            "elements": [format_element(a) for a in self.elements],
            "perfect": self.perfect,
            "alpha": self.alpha,
            "beta": self.beta,
            "variant": self.variant,
        }

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Basis({self.label}, moduli={self.moduli})"


def _t_window(i: int, n: int) -> List[int]:
    # t_i = s_i s_{i-1} ... s_1 = [i+1, 1, 2, ..., i, i+2, ..., n]
    return [i + 1] + list(range(1, i + 1)) + list(range(i + 2, n + 1))


def sn_basis(n: int) -> Basis:
    """The perfect basis (t_{n-1}, ..., t_1) of S_n; empty when n = 1.

    Raises:
        UnsupportedParameters: If n < 1.
    """
    if n < 1:
        raise UnsupportedParameters(f"S_n needs n >= 1, got {n}")
    elements = [ColoredPerm(1, (0,) * n, _t_window(i, n)) for i in range(n - 1, 0, -1)]
    moduli = [i + 1 for i in range(n - 1, 0, -1)]
    return Basis(elements, moduli, f"t-basis({n})", GroupSpec(1, 1, n), True, peel_coefficient=0)


def wreath_basis(r: int, n: int) -> Basis:
    """The perfect basis (tau_{n-1}, ..., tau_0) of G(r, n), tau_i = ((1,0,...,0); t_i).

    Raises:
        UnsupportedParameters: If r or n is not positive.
    """
    spec = GroupSpec(r, 1, n)
    colors = [1 % r] + [0] * (n - 1)
    elements = [ColoredPerm(r, colors, _t_window(i, n)) for i in range(n - 1, -1, -1)]
    moduli = [r * (i + 1) for i in range(n - 1, -1, -1)]
    return Basis(elements, moduli, f"tau-basis({r},{n})", spec, True, peel_coefficient=0)


def _alpha_residue(spec: GroupSpec, alpha: int) -> int:
    return ((spec.n - 1) * alpha * spec.p - spec.n) % spec.quotient


def alpha_is_valid(spec: GroupSpec, alpha: int) -> bool:
    """True if gcd(r/p, (n-1) alpha p - n) = 1."""
    return math.gcd(spec.quotient, _alpha_residue(spec, alpha)) == 1


def select_alpha(spec: GroupSpec) -> Optional[int]:
    """Smallest alpha in [0, r/p) with gcd(r/p, (n-1) alpha p - n) = 1, or None."""
    for alpha in range(spec.quotient):
        if alpha_is_valid(spec, alpha):
            return alpha
    return None


def _u_element(spec: GroupSpec, i: int, last: int) -> ColoredPerm:
    # (1, 0, ..., 0, last); t_i
    colors = [0] * spec.n
    colors[0] = 1 % spec.r
    colors[-1] = (colors[-1] + last) % spec.r
    return ColoredPerm(spec.r, colors, _t_window(i, spec.n))


def rpn_basis(
    spec: GroupSpec,
    variant: str = "standard",
    beta: Optional[int] = None,
    alpha: Optional[int] = None,
) -> Basis:
    """Build the perfect basis (u_{n-1}, ..., u_0) of G(r, p, n).

    u_i = ((1,0,...,0,alpha p - 1); t_i) for i <= n-2 and the top element
    u_{n-1} = ((1,0,...,0,p-1); t_{n-1}). The ``beta`` variant uses
    beta p - 1 as the last color of u_{n-1}; the ``zero`` variant (r = p only)
    makes u_{n-1} colorless. For n = 1 the single element is ((p); id) with
    modulus r/p (((beta p); id) for beta, the identity for zero).

    Args:
        spec: The group; gcd(n, p, r/p) must be 1.
        variant: ``"standard"``, ``"beta"`` or ``"zero"``.
        beta: Required for the beta variant; gcd(beta, r/p) must be 1.
        alpha: Override for alpha; the smallest valid alpha is used if omitted.

    Returns:
        The perfect basis with moduli (n r/p, (n-1) r, ..., r).

    Raises:
        UnsupportedParameters: If a precondition on gcds, beta, alpha or the
            variant is violated.
        ConsistencyError: If no alpha exists although gcd(n, p, r/p) = 1.
    """
    if variant not in VARIANTS:
        raise UnsupportedParameters(f"unknown variant {variant!r}")
    if spec.gcd_flag != 1:
        raise UnsupportedParameters(
            f"{spec.label}: gcd(n, p, r/p) = {spec.gcd_flag}, the construction needs 1"
        )
    if variant == "beta":
        if beta is None:
            raise UnsupportedParameters("the beta variant needs a value for beta")
        if math.gcd(beta, spec.quotient) != 1:
            raise UnsupportedParameters(
                f"beta={beta} is not coprime to r/p={spec.quotient}"
            )
    elif beta is not None:
        raise UnsupportedParameters("beta is only used by the beta variant")
    if variant == "zero" and spec.r != spec.p:
        raise UnsupportedParameters(f"the zero variant needs r = p, got {spec.label}")

    if alpha is None:
        alpha = select_alpha(spec)
        if alpha is None:
            raise ConsistencyError(f"no alpha found for {spec.label} although gcd is 1")
    elif not alpha_is_valid(spec, alpha):
        raise UnsupportedParameters(
            f"alpha={alpha} fails gcd(r/p, (n-1) alpha p - n) = 1 for {spec.label}"
        )

    r, p, n = spec.r, spec.p, spec.n
    if variant == "beta":
        assert beta is not None
        top_last = beta * p - 1
    elif variant == "zero":
        top_last = None
    else:
        top_last = p - 1

    if top_last is None:
        top = ColoredPerm(r, (0,) * n, _t_window(n - 1, n))
    else:
        top = _u_element(spec, n - 1, top_last)
    lower = [_u_element(spec, i, alpha * p - 1) for i in range(n - 2, -1, -1)]
    moduli = [n * r // p] + [(i + 1) * r for i in range(n - 2, -1, -1)]

    label = f"u-basis({r},{p},{n},alpha={alpha}"
    if variant == "beta":
        label += f",beta={beta}"
    elif variant == "zero":
        label += ",zero"
    label += ")"
    logger.debug("Built %s", label)
    return Basis(
        [top] + lower,
        moduli,
        label,
        spec,
        True,
        peel_coefficient=(alpha * p - 1) % r,
        alpha=alpha,
        beta=beta,
        variant=variant,
    )


def _beta(i: int, n: int) -> List[int]:
    # beta_i = [-i, 1, 2, ..., i-1, i+1, ..., n]
    return [-i] + list(range(1, i)) + list(range(i + 1, n + 1))


def _delta(i: int, n: int) -> List[int]:
    # delta_i = [-i, 1, ..., i-1, i+1, ..., n-1, -n] for i < n; delta_n = [n, 1, ..., n-1]
    if i == n:
        return [n] + list(range(1, n))
    return _beta(i, n - 1) + [-n]


def weyl_basis(family: str, n: int) -> Basis:
    """The bases a, b, d of the Weyl groups of type A, B and D.

    A: (alpha_n, ..., alpha_2) with alpha_i = [i, 1, ..., i-1, ...], moduli (n, ..., 2).
    B: (beta_n, ..., beta_1), moduli (2n, ..., 2).
    D: (delta_n, ..., delta_1), moduli (n, 2(n-1), ..., 2).

    Raises:
        UnsupportedParameters: For an unknown family or too small a degree.
    """
    if family == "A":
        basis = sn_basis(n)
        basis.label = f"a-basis({n})"
        return basis
    if family == "B":
        if n < 1:
            raise UnsupportedParameters("type B needs n >= 1")
        elements = [signed_perm(_beta(i, n)) for i in range(n, 0, -1)]
        moduli = [2 * i for i in range(n, 0, -1)]
        return Basis(elements, moduli, f"b-basis({n})", GroupSpec(2, 1, n), True, peel_coefficient=0)
    if family == "D":
        if n < 2:
            raise UnsupportedParameters("type D needs n >= 2")
        elements = [signed_perm(_delta(i, n)) for i in range(n, 0, -1)]
        moduli = [n] + [2 * i for i in range(n - 1, 0, -1)]
        return Basis(elements, moduli, f"d-basis({n})", GroupSpec(2, 2, n), True, peel_coefficient=1)
    raise UnsupportedParameters(f"unknown Weyl family {family!r}")


def bplus_basis(n: int) -> Basis:
    """The basis (gamma_n, ..., gamma_1) of B_n+, gamma_i = psi(delta_i).

    The moduli are (n, 2(n-1), ..., 2). The basis is perfect only for odd n;
    for even n, gamma_n has order 2n.

    Raises:
        UnsupportedParameters: If n < 2.
    """
    if n < 2:
        raise UnsupportedParameters("B_n+ needs n >= 2")
    elements = [psi(signed_perm(_delta(i, n))) for i in range(n, 0, -1)]
    moduli = [n] + [2 * i for i in range(n - 1, 0, -1)]
    return Basis(
        elements,
        moduli,
        f"gamma-basis({n})",
        GroupSpec(2, 1, n),
        n % 2 == 1,
        even_length=True,
    )


FAMILIES: Dict[str, Callable[[int], Basis]] = {
    "A": lambda n: weyl_basis("A", n),
    "B": lambda n: weyl_basis("B", n),
    "D": lambda n: weyl_basis("D", n),
    "Bplus": bplus_basis,
}


def _products(basis: Basis) -> Iterator[Tuple[ColoredPerm, ExponentVector]]:
    """Yield (a_1^{k_1} ... a_k^{k_k}, ks) in lexicographic order of ks."""
    powers = [[power(a, k) for k in range(m)] for a, m in zip(basis.elements, basis.moduli)]
    identity = ColoredPerm.identity(basis.degree, basis.r)
    level: List[Tuple[ColoredPerm, ExponentVector]] = [(identity, ())]
    for row in powers:
        level = [(compose(x, y), ks + (k,)) for x, ks in level for k, y in enumerate(row)]
    return iter(level)


def validate_basis(
    basis: Basis,
    group: Optional[Sequence[ColoredPerm]] = None,
    ceiling: Optional[int] = None,
) -> Union[DecompositionTable, FailureWitness]:
    """Check that every group element has exactly one presentation.

    Args:
        basis: The candidate basis.
        group: The target group; enumerated from the basis if omitted.
        ceiling: Largest number of exponent vectors to enumerate.

    Returns:
        The decomposition table, or a witness of the first failure found.

    Raises:
        GroupSizeError: If the number of exponent vectors exceeds the ceiling.
    """
    limit = default_max_order() if ceiling is None else ceiling
    if basis.size > limit:
        raise GroupSizeError(basis.size, limit)
    members = set(basis.group_elements(ceiling) if group is None else group)
    if basis.size != len(members):
        return FailureWitness(
            "count",
            f"{basis.size} exponent vectors for a group of order {len(members)}",
        )
    entries: Dict[ColoredPerm, ExponentVector] = {}
    for g, ks in _products(basis):
        if g not in members:
            return FailureWitness(
                "outside", f"{ks} gives {format_element(g)} outside the group", [ks], g
            )
        previous = entries.get(g)
        if previous is not None:
            return FailureWitness(
                "collision",
                f"{previous} and {ks} both give {format_element(g)}",
                [previous, ks],
                g,
            )
        entries[g] = ks
    logger.debug("Validated %s: %d distinct products", basis.label, len(entries))
    return DecompositionTable(entries)


def _fixes_top(h: ColoredPerm, coefficient: int) -> bool:
    top = h.n
    return h.perm[top - 1] == top and h.colors[top - 1] == (
        coefficient * sum(h.colors[: top - 1])
    ) % h.r


def _peel(g: ColoredPerm, basis: Basis) -> ExponentVector:
    coefficient = basis.peel_coefficient
    assert coefficient is not None
    chain = basis.peel_chain()
    last = len(chain) - 1
    current = g
    ks: List[int] = []
    for level, (a, m) in enumerate(zip(chain, basis.moduli)):
        a_inv = inverse(a)
        h = current
        for k in range(m):
            found = h.is_identity() if level == last else _fixes_top(h, coefficient)
            if found:
                break
            h = compose(a_inv, h)
        else:
            raise NotInGroupError(f"{format_element(g)} has no presentation in {basis.label}")
        ks.append(k)
        current = h if level == last else erase_last(h)
        coefficient = 0
    if not chain and not g.is_identity():
        raise NotInGroupError(f"{format_element(g)} is not in the trivial group")
    return tuple(ks)


def decompose(g: ColoredPerm, basis: Basis, method: str = "table") -> ExponentVector:
    """Return the unique exponent vector of g.

    The ``table`` method looks g up in the validated table. The ``peel``
    method strips the leading element structurally: it scans k until
    a_1^{-k} g fixes the top letter with the required top color, erases the
    top letter and continues with the next element.

    Args:
        g: An element of the basis's group.
        basis: A basis.
        method: ``"table"`` or ``"peel"``.

    Returns:
        (k_1, ..., k_k) with a_1^{k_1} ... a_k^{k_k} = g.

    Raises:
        DimensionError: If g has the wrong degree or color modulus.
        NotInGroupError: If g is not in the basis's group.
        PeelUnsupportedError: If peel is requested for a basis without a
            structural chain.
        UnsupportedParameters: For an unknown method.
    """
    if g.n != basis.degree or g.r != basis.r:
        raise DimensionError(f"{format_element(g)} checked against {basis.label}")
    if method == "table":
        ks = basis.table().lookup(g)
        if ks is None:
            raise NotInGroupError(f"{format_element(g)} is not in {basis.group_label}")
        return ks
    if method == "peel":
        if basis.peel_coefficient is None:
            raise PeelUnsupportedError(f"{basis.label} has no peel decomposition")
        if not basis.contains(g):
            raise NotInGroupError(f"{format_element(g)} is not in {basis.group_label}")
        return _peel(g, basis)
    raise UnsupportedParameters(f"unknown method {method!r}; use one of {METHODS}")


def compose_from_exponents(basis: Basis, ks: Sequence[int]) -> ColoredPerm:
    """Return a_1^{k_1} ... a_k^{k_k}.

    Raises:
        UnsupportedParameters: If ks has the wrong length or breaks a bound.
    """
    if len(ks) != len(basis.elements):
        raise UnsupportedParameters(
            f"{len(ks)} exponents for a basis of length {len(basis.elements)}"
        )
    result = ColoredPerm.identity(basis.degree, basis.r)
    for a, m, k in zip(basis.elements, basis.moduli, ks):
        if not 0 <= k < m:
            raise UnsupportedParameters(f"exponent {k} outside [0, {m})")
        result = compose(result, power(a, k))
    return result


def exponent_vectors(basis: Basis) -> Iterator[ExponentVector]:
    """All exponent vectors of a basis in lexicographic order."""
    return itertools.product(*(range(m) for m in basis.moduli))


def u_subgroup(spec: GroupSpec, alpha: int) -> List[ColoredPerm]:
    """The subgroup H generated by u_0, ..., u_{n-2}.

    Raises:
        UnsupportedParameters: If n < 2.
    """
    if spec.n < 2:
        raise UnsupportedParameters("H needs n >= 2")
    generators = [_u_element(spec, i, alpha * spec.p - 1) for i in range(spec.n - 1)]
    return closure(generators)


def h_relation_holds(h: ColoredPerm, spec: GroupSpec, alpha: int) -> bool:
    """True if c_n = (alpha p - 1)(c_1 + ... + c_{n-1}) mod r."""
    return h.colors[-1] == ((alpha * spec.p - 1) * sum(h.colors[:-1])) % spec.r
