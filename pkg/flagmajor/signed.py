"""Signed permutations: Coxeter generators, lengths, B_n+ and the maps psi, theta.

Signed permutations are the elements of G(2, n) (colors 0/1). A letter is
negative when it carries color 1, so ``signed_perm([-2, 1, 3])`` is the
element with window (2, 1, 3) and colors (0, 1, 0).
"""

import logging
from typing import List, Sequence, Tuple

from flagmajor.colored import ColoredPerm, GroupSpec, compose, enumerate_group, inverse
from flagmajor.errors import ElementFormatError, NotInGroupError, UnsupportedParameters

logger = logging.getLogger(__name__)

THETA_READINGS = ("prose", "display")


def signed_perm(window: Sequence[int]) -> ColoredPerm:
    """Build an element of G(2, n) from a signed one-line window.

    Raises:
        ElementFormatError: If the absolute values are not a permutation.
    """
    letters = [abs(v) for v in window]
    if 0 in window or sorted(letters) != list(range(1, len(letters) + 1)):
        raise ElementFormatError(f"{list(window)} is not a signed permutation")
    colors = [0] * len(letters)
    for v in window:
        if v < 0:
            colors[-v - 1] = 1
    return ColoredPerm(2, colors, letters)


def signed_window(w: ColoredPerm) -> Tuple[int, ...]:
    """Return the signed one-line window of an element of G(1, n) or G(2, n)."""
    if w.r > 2:
        raise ElementFormatError(f"G({w.r},{w.n}) elements have no signed window")
    return tuple(-v if w.colors[v - 1] else v for v in w.perm)


def _adjacent_transpositions(n: int, r: int) -> List[ColoredPerm]:
    generators = []
    for i in range(1, n):
        window = list(range(1, n + 1))
        window[i - 1], window[i] = window[i], window[i - 1]
        generators.append(ColoredPerm(r, (0,) * n, window))
    return generators


def sign_change_first(n: int) -> ColoredPerm:
    """s_0 = [-1, 2, ..., n]."""
    return signed_perm([-1] + list(range(2, n + 1)))


def sign_change_last(n: int) -> ColoredPerm:
    """v_n = [1, ..., n-1, -n]."""
    return signed_perm(list(range(1, n)) + [-n])


def coxeter_generators(family: str, n: int) -> List[ColoredPerm]:
    """Return the Coxeter generating set of the Weyl group A, B or D of rank n.

    A uses the adjacent transpositions of S_n (r = 1). B adds s_0 = [-1,2,...,n]
    in front and D adds [-2,-1,3,...,n] instead (r = 2).

    Raises:
        UnsupportedParameters: For an unknown family or a degree that is too small.
    """
    if family == "A":
        if n < 1:
            raise UnsupportedParameters("type A needs n >= 1")
        return _adjacent_transpositions(n, 1)
    if family == "B":
        if n < 1:
            raise UnsupportedParameters("type B needs n >= 1")
        return [sign_change_first(n)] + _adjacent_transpositions(n, 2)
    if family == "D":
        if n < 2:
            raise UnsupportedParameters("type D needs n >= 2")
        first = signed_perm([-2, -1] + list(range(3, n + 1)))
        return [first] + _adjacent_transpositions(n, 2)
    raise UnsupportedParameters(f"unknown Coxeter family {family!r}")


def b_length(w: ColoredPerm) -> int:
    """Coxeter length in B_n: inversions of the window minus its negative entries."""
    window = signed_window(w)
    inversions = sum(
        1
        for i in range(len(window))
        for j in range(i + 1, len(window))
        if window[i] > window[j]
    )
    return inversions - sum(v for v in window if v < 0)


def d_length(w: ColoredPerm) -> int:
    """Coxeter length in D_n: inversions plus pairs i < j with w_i + w_j < 0."""
    window = signed_window(w)
    total = 0
    for i in range(len(window)):
        for j in range(i + 1, len(window)):
            if window[i] > window[j]:
                total += 1
            if window[i] + window[j] < 0:
                total += 1
    return total


def is_dn(w: ColoredPerm) -> bool:
    """True if w has an even number of negative letters."""
    return w.r == 2 and sum(w.colors) % 2 == 0


def is_bplus(w: ColoredPerm) -> bool:
    """True if w has even Coxeter length in B_n."""
    return w.r == 2 and b_length(w) % 2 == 0


def enumerate_bplus(n: int) -> List[ColoredPerm]:
    """List B_n+ in the enumeration order of B_n."""
    return [w for w in enumerate_group(GroupSpec(2, 1, n)) if is_bplus(w)]


def enumerate_dn(n: int) -> List[ColoredPerm]:
    return enumerate_group(GroupSpec(2, 2, n))


def psi(w: ColoredPerm) -> ColoredPerm:
    """Map D_n to B_n+: switch the sign of the last letter when w is odd.

    Raises:
        NotInGroupError: If w is not in D_n.
    """
    if not is_dn(w):
        raise NotInGroupError(f"psi is defined on D_n; {w} is not in D_{w.n}")
    if is_bplus(w):
        return w
    return compose(w, sign_change_last(w.n))


def theta(w: ColoredPerm, reading: str = "prose") -> ColoredPerm:
    """Map B_n+ to D_n by switching the sign of the first letter.

    With the ``"prose"`` reading the sign is switched when w is not in D_n,
    which gives a bijection onto D_n. The ``"display"`` reading switches it
    when w is not in B_n+, which never happens on the domain, so every
    element is returned unchanged.

    Raises:
        NotInGroupError: If w is not in B_n+.
        UnsupportedParameters: For an unknown reading.
    """
    if reading not in THETA_READINGS:
        raise UnsupportedParameters(f"unknown theta reading {reading!r}")
    if not is_bplus(w):
        raise NotInGroupError(f"theta is defined on B_n+; {w} is not in B_{w.n}+")
    switch = not is_dn(w) if reading == "prose" else not is_bplus(w)
    return compose(w, sign_change_first(w.n)) if switch else w


def bn_plus_generators(n: int) -> List[ColoredPerm]:
    """Return R = (r_1, ..., r_{n-1}) generating B_n+.

    r_1 = [2,-1,3,...,n] has order 4; for i >= 2, r_i = [-1,2,...,i+1,i,...,n]
    is s_0 s_i.

    Raises:
        UnsupportedParameters: If n < 2.
    """
    if n < 2:
        raise UnsupportedParameters("B_n+ generators need n >= 2")
    generators = [signed_perm([2, -1] + list(range(3, n + 1)))]
    for i in range(2, n):
        window = list(range(1, n + 1))
        window[i - 1], window[i] = window[i], window[i - 1]
        window[0] = -window[0]
        generators.append(signed_perm(window))
    return generators


def bplus_generators_symmetric(n: int) -> List[ColoredPerm]:
    """R followed by the inverses not already in R."""
    generators = bn_plus_generators(n)
    result = list(generators)
    for g in generators:
        g_inv = inverse(g)
        if g_inv not in result:
            result.append(g_inv)
    return result
