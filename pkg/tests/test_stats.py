"""Tests for permutation statistics and generating polynomials."""

import itertools
from collections import Counter

import pytest
from sympy.combinatorics import Permutation

from flagmajor.basis import rpn_basis, sn_basis, wreath_basis
from flagmajor.colored import ColoredPerm, GroupSpec, enumerate_group
from flagmajor.errors import ConsistencyError, DimensionError, NotInGroupError, UnreachedElementsError
from flagmajor.polynomial import QPolynomial, q_product
from flagmajor.signed import coxeter_generators, enumerate_dn, signed_perm
from flagmajor.stats import (
    bfs_length,
    des,
    fmaj,
    fmaj_polynomial,
    hilbert_polynomial,
    inv_length,
    maj,
    poincare_polynomial,
)


def symmetric_group(n):
    return enumerate_group(GroupSpec(1, 1, n))


class TestDescents:
    """Tests for des, maj and inv_length."""

    def test_identity(self):
        """Test the identity has no descents or inversions."""
        assert des([1, 2, 3]) == set()
        assert maj([1, 2, 3]) == 0
        assert inv_length([1, 2, 3]) == 0

    def test_reverse(self):
        """Test [3,2,1] has descents {1,2}, maj 3 and 3 inversions."""
        assert des([3, 2, 1]) == {1, 2}
        assert maj([3, 2, 1]) == 3
        assert inv_length([3, 2, 1]) == 3

    def test_accepts_plain_colored_perm(self):
        """Test r = 1 elements are accepted and colored ones rejected."""
        assert maj(ColoredPerm(1, [0, 0, 0], [3, 1, 2])) == 1
        with pytest.raises(DimensionError):
            des(signed_perm([2, 1]))

    def test_eulerian_numbers(self):
        """Test descent counts over S_4 are (1, 11, 11, 1)."""
        counts = Counter(len(des(g)) for g in symmetric_group(4))
        assert [counts[k] for k in range(4)] == [1, 11, 11, 1]

    def test_maj_over_s3(self):
        """Test sum of q^maj over S_3 is [1][2][3]."""
        series = QPolynomial.from_statistic(maj(g) for g in symmetric_group(3))
        assert series == q_product([1, 2, 3])
        assert series.coefficients == [1, 2, 2, 1]

    def test_inversions_match_sympy(self):
        """Test inv_length agrees with sympy on S_5."""
        for window in itertools.permutations(range(1, 6)):
            assert inv_length(window) == Permutation([v - 1 for v in window]).inversions()

    def test_inversions_match_bfs(self):
        """Test inv_length is the BFS length for adjacent transpositions on S_5."""
        group = symmetric_group(5)
        lengths = bfs_length(group, coxeter_generators("A", 5))
        for g in group:
            assert inv_length(g) == lengths[g]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_maj_and_inv_equidistributed(self, n):
        """Test maj and inv have the same generating function on S_n."""
        group = symmetric_group(n)
        by_maj = QPolynomial.from_statistic(maj(g) for g in group)
        by_inv = QPolynomial.from_statistic(inv_length(g) for g in group)
        assert by_maj == by_inv == q_product(range(1, n + 1))


class TestFlagMajor:
    """Tests for fmaj and fmaj_polynomial."""

    def test_identity(self):
        """Test fmaj(identity) = 0."""
        basis = rpn_basis(GroupSpec(4, 2, 3))
        assert fmaj(ColoredPerm.identity(3, 4), basis) == 0

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_fmaj_is_maj_on_sn(self, n):
        """Test fmaj over the t-basis equals maj elementwise."""
        basis = sn_basis(n)
        for g in symmetric_group(n):
            assert fmaj(g, basis) == maj(g)

    def test_maximum_attained_once(self):
        """Test the largest fmaj is sum(m_i - 1), attained by exactly one element."""
        basis = rpn_basis(GroupSpec(4, 2, 3))
        values = Counter(fmaj(g, basis) for g in enumerate_group(GroupSpec(4, 2, 3)))
        top = sum(m - 1 for m in basis.moduli)
        assert max(values) == top
        assert values[top] == 1

    def test_empty_basis(self):
        """Test the trivial group has Fmaj = 1."""
        assert fmaj_polynomial(sn_basis(1)) == QPolynomial.one()

    def test_sn3(self):
        """Test Fmaj of the t-basis of S_3 is 1 + 2q + 2q^2 + q^3."""
        assert str(fmaj_polynomial(sn_basis(3))) == "1 + 2q + 2q^2 + q^3"

    def test_wreath_2_2(self):
        """Test Fmaj of the tau-basis of G(2,2) is [2][4]."""
        assert fmaj_polynomial(wreath_basis(2, 2)).coefficients == [1, 2, 2, 2, 1]

    def test_explicit_group_mismatch(self):
        """Test summing over the wrong element set is a consistency fault."""
        basis = sn_basis(3)
        partial = symmetric_group(3)[:-1]
        with pytest.raises(ConsistencyError):
            fmaj_polynomial(basis, partial)


class TestBfs:
    """Tests for bfs_length and the Poincare series."""

    def test_identity_length(self):
        """Test the identity has length 0."""
        group = symmetric_group(3)
        assert bfs_length(group, coxeter_generators("A", 3))[ColoredPerm.identity(3, 1)] == 0

    def test_longest_b2(self):
        """Test the longest element of B_2 has length 4."""
        group = enumerate_group(GroupSpec(2, 1, 2))
        lengths = bfs_length(group, coxeter_generators("B", 2))
        assert lengths[signed_perm([-1, -2])] == 4

    def test_s4_series(self):
        """Test the Poincare series of S_4 is [2][3][4]."""
        assert poincare_polynomial(symmetric_group(4), coxeter_generators("A", 4)) == q_product([2, 3, 4])

    def test_trivial_group(self):
        """Test the trivial group has Poincare series 1."""
        assert poincare_polynomial(symmetric_group(1), []) == QPolynomial.one()

    def test_b3_series(self):
        """Test the Poincare series of B_3 is [2][4][6]."""
        group = enumerate_group(GroupSpec(2, 1, 3))
        assert poincare_polynomial(group, coxeter_generators("B", 3)) == q_product([2, 4, 6])

    def test_d3_equals_s4(self):
        """Test D_3 and S_4 have the same Poincare series."""
        d3 = poincare_polynomial(enumerate_dn(3), coxeter_generators("D", 3))
        s4 = poincare_polynomial(symmetric_group(4), coxeter_generators("A", 4))
        assert d3 == s4

    @pytest.mark.parametrize("family, params", [("A", (1, 1)), ("B", (2, 1)), ("D", (2, 2))])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_palindromic(self, family, params, n):
        """Test Coxeter Poincare series are palindromic."""
        group = enumerate_group(GroupSpec(params[0], params[1], n))
        assert poincare_polynomial(group, coxeter_generators(family, n)).is_palindromic()

    def test_unreached(self):
        """Test a single transposition does not generate S_3."""
        with pytest.raises(UnreachedElementsError) as excinfo:
            bfs_length(symmetric_group(3), [ColoredPerm(1, [0, 0, 0], [2, 1, 3])])
        assert excinfo.value.unreached == 4

    def test_leaving_the_group(self):
        """Test a generator outside the group is reported."""
        with pytest.raises(NotInGroupError):
            bfs_length(enumerate_dn(2), coxeter_generators("B", 2))


class TestHilbert:
    """Tests for hilbert_polynomial."""

    def test_symmetric(self):
        """Test Hilb(1,1,4) = [1][2][3][4]."""
        assert hilbert_polynomial(GroupSpec(1, 1, 4)) == q_product([1, 2, 3, 4])

    def test_b2(self):
        """Test Hilb(2,1,2) = [2][4]."""
        assert hilbert_polynomial(GroupSpec(2, 1, 2)) == q_product([2, 4])

    def test_g422(self):
        """Test Hilb(4,2,2) = [4][4]."""
        assert hilbert_polynomial(GroupSpec(4, 2, 2)) == q_product([4, 4])

    @pytest.mark.parametrize("params", [(6, 2, 3), (3, 3, 3), (9, 3, 3)])
    def test_value_at_one(self, params):
        """Test Hilb(1) = |G|."""
        spec = GroupSpec(*params)
        assert hilbert_polynomial(spec).evaluate(1) == spec.order
