"""Permutation statistics, flag major index and generating polynomials."""

import logging
from collections import deque
from typing import Dict, Optional, Sequence, Set, Tuple, Union

from flagmajor.basis import Basis, decompose
from flagmajor.colored import ColoredPerm, GroupSpec, compose, format_element
from flagmajor.errors import (
    ConsistencyError,
    DimensionError,
    ElementFormatError,
    NotInGroupError,
    UnreachedElementsError,
)
from flagmajor.polynomial import QPolynomial, q_product

logger = logging.getLogger(__name__)

Permutation = Union[Sequence[int], ColoredPerm]


def _plain_window(pi: Permutation) -> Tuple[int, ...]:
    if isinstance(pi, ColoredPerm):
        if pi.r != 1:
            raise DimensionError(f"expected a plain permutation, got an element of G({pi.r},{pi.n})")
        return pi.perm
    window = tuple(int(v) for v in pi)
    if sorted(window) != list(range(1, len(window) + 1)):
        raise ElementFormatError(f"{list(window)} is not a permutation")
    return window


def des(pi: Permutation) -> Set[int]:
    """Descent set {i : pi(i) > pi(i+1)} of a plain permutation.

    Raises:
        DimensionError: If pi is a colored permutation with r > 1.
        ElementFormatError: If pi is not a permutation.
    """
    window = _plain_window(pi)
    return {i for i in range(1, len(window)) if window[i - 1] > window[i]}


def maj(pi: Permutation) -> int:
    """Major index: the sum of the descents."""
    return sum(des(pi))


def inv_length(pi: Permutation) -> int:
    """Number of inversions, the Coxeter length in S_n."""
    window = _plain_window(pi)
    return sum(
        1
        for i in range(len(window))
        for j in range(i + 1, len(window))
        if window[i] > window[j]
    )


def fmaj(g: ColoredPerm, basis: Basis, method: str = "table") -> int:
    """Flag major index of g: the sum of its exponents with respect to basis."""
    return sum(decompose(g, basis, method))


def fmaj_polynomial(
    basis: Basis, group: Optional[Sequence[ColoredPerm]] = None
) -> QPolynomial:
    """Generating function of fmaj, computed by summation and by the product formula.

    Args:
        basis: A basis; it is validated on first use.
        group: Elements to sum over; the basis's whole group if omitted.

    Returns:
        The product of [m_i]_q over the moduli.

    Raises:
        ConsistencyError: If the summed polynomial differs from the product.
    """
    if group is None:
        summed = QPolynomial.from_statistic(sum(ks) for _, ks in basis.table().items())
    else:
        summed = QPolynomial.from_statistic(fmaj(g, basis) for g in group)
    product = q_product(basis.moduli)
    if summed != product:
        raise ConsistencyError(
            f"Fmaj of {basis.label} does not match the product of its q-integers",
            {"summed": str(summed), "product": str(product)},
        )
    return product


def bfs_length(
    group: Sequence[ColoredPerm], generators: Sequence[ColoredPerm]
) -> Dict[ColoredPerm, int]:
    """Word length of every element in the Cayley graph of the generators.

    The search starts at the identity and multiplies by the generators on the
    right, in the order given. Inverses are not added automatically.

    Args:
        group: The full group.
        generators: The generating multiset.

    Returns:
        Element -> geodesic length from the identity.

    Raises:
        ValueError: If the group is empty.
        NotInGroupError: If a product leaves the group.
        UnreachedElementsError: If the generators do not reach every element.
    """
    if not group:
        raise ValueError("bfs_length needs a nonempty group")
    members = set(group)
    start = ColoredPerm.identity(group[0].n, group[0].r)
    if start not in members:
        raise NotInGroupError("the group does not contain the identity")
    lengths = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        step = lengths[x] + 1
        for s in generators:
            y = compose(x, s)
            if y in lengths:
                continue
            if y not in members:
                raise NotInGroupError(f"generator product {format_element(y)} leaves the group")
            lengths[y] = step
            queue.append(y)
    if len(lengths) != len(members):
        witness = next(g for g in group if g not in lengths)
        raise UnreachedElementsError(format_element(witness), len(members) - len(lengths))
    return lengths


def poincare_polynomial(
    group: Sequence[ColoredPerm], generators: Sequence[ColoredPerm]
) -> QPolynomial:
    """Length generating function sum(q**length(g))."""
    return QPolynomial.from_statistic(bfs_length(group, generators).values())


def hilbert_moduli(spec: GroupSpec) -> Tuple[int, ...]:
    """(r, 2r, ..., (n-1)r, nr/p)."""
    return tuple(spec.r * i for i in range(1, spec.n)) + (spec.n * spec.r // spec.p,)


def hilbert_polynomial(spec: GroupSpec) -> QPolynomial:
    """Hilbert series [r]_q [2r]_q ... [(n-1)r]_q [nr/p]_q of G(r, p, n)."""
    return q_product(hilbert_moduli(spec))
