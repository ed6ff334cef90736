"""Integer polynomials in q, q-integers and q-integer factorization."""

import logging
from typing import Dict, Iterable, List, Optional, Sequence

from sympy import ZZ, Poly, Symbol

logger = logging.getLogger(__name__)

q = Symbol("q")


class QPolynomial:
    """A polynomial in q with nonnegative integer coefficients.

    Arithmetic is carried by a ``sympy.Poly`` over the integers; coefficient
    lists are read and written low degree first, and the zero polynomial has
    no coefficients at all.
    """

    def __init__(self, coefficients: Sequence[int] = ()) -> None:
        """Create a polynomial from coefficients listed low degree first.

        Args:
            coefficients: coefficients[d] is the coefficient of q**d.

        Raises:
            ValueError: If a coefficient is negative.
        """
        values = [int(c) for c in coefficients]
        if any(c < 0 for c in values):
            raise ValueError(f"coefficients must be nonnegative, got {values}")
        self._poly: Poly = Poly.from_list(values[::-1] or [0], q, domain=ZZ)

    @classmethod
    def _wrap(cls, poly: Poly) -> "QPolynomial":
        result = cls.__new__(cls)
        result._poly = poly
        return result

    @classmethod
    def one(cls) -> "QPolynomial":
        return cls((1,))

    @classmethod
    def from_counts(cls, counts: Dict[int, int]) -> "QPolynomial":
        """Build sum(counts[d] * q**d) from a degree -> multiplicity map."""
        if not counts:
            return cls()
        values = [0] * (max(counts) + 1)
        for degree, count in counts.items():
            if degree < 0:
                raise ValueError(f"negative degree {degree}")
            values[degree] += count
        return cls(values)

    @classmethod
    def from_statistic(cls, values: Iterable[int]) -> "QPolynomial":
        """Generating function sum(q**v) of a statistic's values."""
        counts: Dict[int, int] = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        return cls.from_counts(counts)

    def as_poly(self) -> Poly:
        """The underlying ``sympy.Poly`` in q."""
        return self._poly

    @property
    def coefficients(self) -> List[int]:
        """Coefficients low degree first (empty for the zero polynomial)."""
        if self._poly.is_zero:
            return []
        return [int(c) for c in reversed(self._poly.all_coeffs())]

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return -1 if self._poly.is_zero else int(self._poly.degree())

    def is_zero(self) -> bool:
        return bool(self._poly.is_zero)

    def evaluate(self, value: int = 1) -> int:
        """Evaluate at an integer point."""
        return int(self._poly.eval(value))

    def is_palindromic(self) -> bool:
        """True if the coefficient list reads the same in both directions."""
        coefficients = self.coefficients
        return coefficients == coefficients[::-1]

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        return QPolynomial._wrap(self._poly + other._poly)

    def __mul__(self, other: "QPolynomial") -> "QPolynomial":
        return QPolynomial._wrap(self._poly * other._poly)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(tuple(self.coefficients))

    def __repr__(self) -> str:
        return f"QPolynomial({self.coefficients})"

    def __str__(self) -> str:
        coefficients = self.coefficients
        if not coefficients:
            return "0"
        terms = []
        for degree, c in enumerate(coefficients):
            if c == 0:
                continue
            if degree == 0:
                terms.append(str(c))
                continue
            power = "q" if degree == 1 else f"q^{degree}"
            terms.append(power if c == 1 else f"{c}{power}")
        return " + ".join(terms)


def q_integer(m: int) -> QPolynomial:
    """Return [m]_q = 1 + q + ... + q**(m-1).

    Raises:
        ValueError: If m < 1.
    """
    if m < 1:
        raise ValueError(f"q-integers need m >= 1, got {m}")
    return QPolynomial([1] * m)


def q_product(ms: Iterable[int]) -> QPolynomial:
    """Return the product of [m]_q over ms (1 for an empty list)."""
    result = QPolynomial.one()
    for m in ms:
        result = result * q_integer(m)
    return result


def q_integer_factorization(polynomial: QPolynomial) -> Optional[List[int]]:
    """Write a polynomial as a product of q-integers [m]_q with m >= 2.

    The largest m with [m]_q dividing a product of q-integers is the largest
    factor present (only [M]_q contributes the cyclotomic factor of order M),
    so dividing out the largest q-integer each time recovers the factors.

    Args:
        polynomial: A nonzero polynomial with constant term 1.

    Returns:
        The factors in ascending order (empty for the polynomial 1), or None
        if the polynomial is not a product of q-integers.

    Raises:
        ValueError: If the polynomial is zero or its constant term is not 1.
    """
    coefficients = polynomial.coefficients
    if not coefficients or coefficients[0] != 1:
        raise ValueError(f"factorization needs constant term 1, got {polynomial}")
    # Quotients may leave the nonnegative cone, so division runs on plain Polys.
    current = polynomial.as_poly()
    factors: List[int] = []
    while current.degree() > 0:
        for m in range(current.degree() + 1, 1, -1):
            quotient, remainder = current.div(q_integer(m).as_poly())
            if remainder.is_zero:
                factors.append(m)
                current = quotient
                break
        else:
            logger.debug("No q-integer divides remainder %s", current.as_expr())
            return None
    return sorted(factors)
