"""Colored permutations: the wreath product G(r, n) and its subgroups G(r, p, n).

An element is a pair (colors; perm). ``perm`` is a one-line window, so
``perm[i - 1]`` is the image of i, and ``colors[i - 1]`` is the color carried
by the letter i. The product follows the wreath-product rule

    (c; pi) * (c'; pi') = ((c_i + c'_{pi^-1(i)})_i; pi o pi')

with ``(pi o pi')(i) = pi(pi'(i))``. For r = 2 this is exactly composition of
signed permutations, the sign of the letter i being ``colors[i - 1]``.
"""

import itertools
import logging
import math
import re
from collections import deque
from typing import Any, Dict, List, Optional, Sequence, Tuple

from flagmajor.config import default_max_order
from flagmajor.errors import DimensionError, ElementFormatError, GroupSizeError, UnsupportedParameters

logger = logging.getLogger(__name__)


class ColoredPerm:
    """An immutable element of G(r, n).

    Attributes:
        r: The color modulus.
        colors: Residues in [0, r), indexed by letter.
        perm: The permutation in one-line notation (values 1..n).
    """

    __slots__ = ("r", "colors", "perm", "_hash")

    r: int
    colors: Tuple[int, ...]
    perm: Tuple[int, ...]
    _hash: int

    def __init__(self, r: int, colors: Sequence[int], perm: Sequence[int]) -> None:
        """Create a colored permutation, checking every invariant.

        Args:
            r: The color modulus (at least 1).
            colors: One residue per letter, each in [0, r).
            perm: A bijection of {1, ..., n} in one-line notation.

        Raises:
            ElementFormatError: If r < 1, the lengths differ, a color is out of
                range or the window is not a permutation.
        """
        colors_t = tuple(int(c) for c in colors)
        perm_t = tuple(int(v) for v in perm)
        if r < 1:
            raise ElementFormatError(f"color modulus must be positive, got {r}")
        if not perm_t:
            raise ElementFormatError("a colored permutation needs at least one letter")
        if len(colors_t) != len(perm_t):
            raise ElementFormatError(
                f"{len(colors_t)} colors given for a window of length {len(perm_t)}"
            )
        if sorted(perm_t) != list(range(1, len(perm_t) + 1)):
            raise ElementFormatError(f"window {list(perm_t)} is not a permutation")
        bad = [c for c in colors_t if not 0 <= c < r]
        if bad:
            raise ElementFormatError(f"colors {bad} are outside [0, {r})")
        self._assign(r, colors_t, perm_t)

    def _assign(self, r: int, colors: Tuple[int, ...], perm: Tuple[int, ...]) -> None:
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "_hash", hash((r, colors, perm)))

    @classmethod
    def _trusted(
        cls, r: int, colors: Tuple[int, ...], perm: Tuple[int, ...]
    ) -> "ColoredPerm":
        # Internal fast path: arguments are already reduced and bijective.
        obj = cls.__new__(cls)
        obj._assign(r, colors, perm)
        return obj

    @classmethod
    def identity(cls, n: int, r: int) -> "ColoredPerm":
        """Return the identity of G(r, n)."""
        if n < 1:
            raise ElementFormatError("a colored permutation needs at least one letter")
        return cls(r, (0,) * n, tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        """The degree (number of letters)."""
        return len(self.perm)

    def is_identity(self) -> bool:
        """True if this is the identity of its group."""
        return not any(self.colors) and all(v == i for i, v in enumerate(self.perm, 1))

    def sort_key(self) -> Tuple[int, int, Tuple[int, ...], Tuple[int, ...]]:
        """Key giving the enumeration order: lexicographic by (perm, colors)."""
        return (len(self.perm), self.r, self.perm, self.colors)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("ColoredPerm is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredPerm):
            return NotImplemented
        return (
            self.r == other.r
            and self.perm == other.perm
            and self.colors == other.colors
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "ColoredPerm") -> bool:
        return self.sort_key() < other.sort_key()

    def __reduce__(self) -> Tuple[Any, Tuple[int, Tuple[int, ...], Tuple[int, ...]]]:
        return (ColoredPerm, (self.r, self.colors, self.perm))

    def __repr__(self) -> str:
        return f"ColoredPerm({format_element(self)}, r={self.r})"

    def __str__(self) -> str:
        return format_element(self)


class GroupSpec:
    """The parameters (r, p, n) of the complex reflection group G(r, p, n).

    Attributes:
        r: Color modulus.
        p: A divisor of r; the group has index p in G(r, n).
        n: Degree.
    """

    def __init__(self, r: int, p: int, n: int) -> None:
        """Validate and store the parameters.

        Raises:
            UnsupportedParameters: If a parameter is not positive or p does not divide r.
        """
        if r < 1 or p < 1 or n < 1:
            raise UnsupportedParameters(f"r, p, n must be positive, got ({r},{p},{n})")
        if r % p != 0:
            raise UnsupportedParameters(f"p={p} does not divide r={r}")
        self.r: int = r
        self.p: int = p
        self.n: int = n

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``"r,p,n"`` (optionally wrapped as ``G(r,p,n)``)."""
        match = re.fullmatch(r"\s*(?:G\s*\()?\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)?\s*", text)
        if match is None:
            raise UnsupportedParameters(f"cannot read group parameters from {text!r}")
        r, p, n = (int(x) for x in match.groups())
        return cls(r, p, n)

    @property
    def order(self) -> int:
        """|G(r, p, n)| = n! r^n / p."""
        return math.factorial(self.n) * self.r**self.n // self.p

    @property
    def quotient(self) -> int:
        """r / p."""
        return self.r // self.p

    @property
    def gcd_flag(self) -> int:
        """gcd(n, p, r/p); the main construction needs this to be 1."""
        return math.gcd(self.n, self.p, self.quotient)

    @property
    def label(self) -> str:
        return f"G({self.r},{self.p},{self.n})"

    def to_dict(self) -> Dict[str, int]:
        return {"r": self.r, "p": self.p, "n": self.n, "order": self.order}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupSpec):
            return NotImplemented
        return (self.r, self.p, self.n) == (other.r, other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.r, self.p, self.n))

    def __repr__(self) -> str:
        return f"GroupSpec(r={self.r}, p={self.p}, n={self.n})"


def _check_same_group(g: ColoredPerm, h: ColoredPerm) -> None:
    if g.r != h.r or len(g.perm) != len(h.perm):
        raise DimensionError(
            f"cannot combine elements of G({g.r},{g.n}) and G({h.r},{h.n})"
        )


def compose(g: ColoredPerm, h: ColoredPerm) -> ColoredPerm:
    """Multiply two elements of G(r, n) with the wreath-product rule.

    Args:
        g: The left factor (c; pi).
        h: The right factor (c'; pi').

    Returns:
        ((c_i + c'_{pi^-1(i)}); pi o pi').

    Raises:
        DimensionError: If g and h do not share n and r.
    """
    _check_same_group(g, h)
    r = g.r
    g_perm = g.perm
    colors = list(g.colors)
    # c'_i lands on letter pi(i)
    for i, c in enumerate(h.colors):
        if c:
            j = g_perm[i] - 1
            colors[j] = (colors[j] + c) % r
    perm = tuple(g_perm[v - 1] for v in h.perm)
    return ColoredPerm._trusted(r, tuple(colors), perm)


def inverse(g: ColoredPerm) -> ColoredPerm:
    """Return the group inverse of g."""
    n = len(g.perm)
    inv_perm = [0] * n
    for i, v in enumerate(g.perm, 1):
        inv_perm[v - 1] = i
    colors = tuple((-g.colors[v - 1]) % g.r for v in g.perm)
    return ColoredPerm._trusted(g.r, colors, tuple(inv_perm))


def power(g: ColoredPerm, k: int) -> ColoredPerm:
    """Return g**k for any integer k."""
    base = g if k >= 0 else inverse(g)
    result = ColoredPerm.identity(g.n, g.r)
    for _ in range(abs(k)):
        result = compose(result, base)
    return result


def element_order(g: ColoredPerm) -> int:
    """Smallest k >= 1 with g**k equal to the identity."""
    k = 1
    x = g
    while not x.is_identity():
        x = compose(x, g)
        k += 1
    return k


def in_grpn(g: ColoredPerm, spec: GroupSpec) -> bool:
    """True if g lies in G(r, p, n), i.e. its color sum is 0 mod p.

    Raises:
        DimensionError: If g is not an element of G(spec.r, spec.n).
    """
    if g.r != spec.r or g.n != spec.n:
        raise DimensionError(f"element of G({g.r},{g.n}) checked against {spec.label}")
    return sum(g.colors) % spec.p == 0


def enumerate_group(spec: GroupSpec, ceiling: Optional[int] = None) -> List[ColoredPerm]:
    """List every element of G(r, p, n), lexicographically by (perm, colors).

    Args:
        spec: The group parameters.
        ceiling: Largest order allowed; defaults to the configured ceiling.

    Returns:
        The n! r^n / p elements in a deterministic order.

    Raises:
        GroupSizeError: If the order exceeds the ceiling.
    """
    limit = default_max_order() if ceiling is None else ceiling
    if spec.order > limit:
        raise GroupSizeError(spec.order, limit)
    r, p, n = spec.r, spec.p, spec.n
    color_vectors = [c for c in itertools.product(range(r), repeat=n) if sum(c) % p == 0]
    elements = [
        ColoredPerm._trusted(r, colors, perm)
        for perm in itertools.permutations(range(1, n + 1))
        for colors in color_vectors
    ]
    logger.debug("Enumerated %s: %d elements", spec.label, len(elements))
    return elements


def closure(
    generators: Sequence[ColoredPerm], ceiling: Optional[int] = None
) -> List[ColoredPerm]:
    """Return the subgroup generated by the given elements.

    The subgroup is found breadth first from the identity, multiplying by the
    generators on the right in the order given, so the result order is
    deterministic.

    Raises:
        ValueError: If no generators are given.
        DimensionError: If the generators live in different groups.
        GroupSizeError: If the subgroup grows past the ceiling.
    """
    if not generators:
        raise ValueError("closure needs at least one generator")
    first = generators[0]
    for g in generators[1:]:
        _check_same_group(first, g)
    limit = default_max_order() if ceiling is None else ceiling
    start = ColoredPerm.identity(first.n, first.r)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                order.append(y)
                if len(order) > limit:
                    raise GroupSizeError(len(order), limit)
                queue.append(y)
    return order


def erase_last(g: ColoredPerm) -> ColoredPerm:
    """Drop the top letter of an element that fixes it (the map G(r,n) -> G(r,n-1)).

    Raises:
        DimensionError: If g has degree 1 or moves its top letter.
    """
    n = g.n
    if n < 2 or g.perm[-1] != n:
        raise DimensionError(f"{format_element(g)} does not fix its top letter {n}")
    return ColoredPerm._trusted(g.r, g.colors[:-1], g.perm[:-1])


def format_element(g: ColoredPerm) -> str:
    """Render an element as text.

    For r <= 2 the signed one-line form ``[-2,1,3]`` is used (a letter is
    negative when it carries color 1); otherwise ``c=[...];w=[...]``.
    """
    if g.r <= 2:
        entries = (-v if g.colors[v - 1] else v for v in g.perm)
        return "[" + ",".join(str(v) for v in entries) + "]"
    colors = ",".join(str(c) for c in g.colors)
    window = ",".join(str(v) for v in g.perm)
    return f"c=[{colors}];w=[{window}]"


_CANONICAL = re.compile(r"c=\[([^\]]*)\];w=\[([^\]]*)\]")
_SIGNED = re.compile(r"\[([^\]]*)\]")


def _parse_ints(body: str, text: str) -> List[int]:
    if body == "":
        raise ElementFormatError(f"empty window in {text!r}")
    try:
        return [int(x) for x in body.split(",")]
    except ValueError:
        raise ElementFormatError(f"non-integer entry in {text!r}") from None


def parse_element(text: str, r: int) -> ColoredPerm:
    """Read an element of G(r, n) from text.

    Accepts the canonical ``c=[c1,...,cn];w=[w1,...,wn]`` form for any r and
    the signed shorthand ``[-2, 1, 3]`` when r <= 2. The degree is the window
    length.

    Args:
        text: The element text; whitespace is ignored.
        r: The color modulus of the target group.

    Returns:
        The parsed element.

    Raises:
        ElementFormatError: On malformed text, out-of-range colors or a
            non-bijective window.
    """
    compact = re.sub(r"\s+", "", text)
    match = _CANONICAL.fullmatch(compact)
    if match is not None:
        colors = _parse_ints(match.group(1), text)
        window = _parse_ints(match.group(2), text)
        return ColoredPerm(r, colors, window)
    match = _SIGNED.fullmatch(compact)
    if match is None:
        raise ElementFormatError(f"cannot read an element from {text!r}")
    entries = _parse_ints(match.group(1), text)
    if r > 2:
        raise ElementFormatError(f"signed shorthand needs r <= 2, got r={r}")
    if 0 in entries:
        raise ElementFormatError(f"0 is not a letter in {text!r}")
    window = [abs(v) for v in entries]
    if sorted(window) != list(range(1, len(window) + 1)):
        raise ElementFormatError(f"window {window} is not a permutation")
    colors = [0] * len(window)
    for v in entries:
        if v < 0:
            colors[-v - 1] = 1
    return ColoredPerm(r, colors, window)
