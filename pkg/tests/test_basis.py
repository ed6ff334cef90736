"""Tests for basis constructors, validation and decomposition."""

import pytest

from flagmajor.basis import (
    FAMILIES,
    Basis,
    DecompositionTable,
    FailureWitness,
    alpha_is_valid,
    bplus_basis,
    compose_from_exponents,
    decompose,
    exponent_vectors,
    h_relation_holds,
    rpn_basis,
    select_alpha,
    sn_basis,
    u_subgroup,
    validate_basis,
    weyl_basis,
    wreath_basis,
)
from flagmajor.colored import ColoredPerm, GroupSpec, element_order, enumerate_group, erase_last
from flagmajor.errors import (
    ConsistencyError,
    DimensionError,
    GroupSizeError,
    NotInGroupError,
    PeelUnsupportedError,
    UnsupportedParameters,
)
from flagmajor.signed import enumerate_bplus, signed_perm, signed_window
from flagmajor.stats import fmaj_polynomial, hilbert_polynomial

ACCEPTANCE = [
    ((1, 1, 5), "standard"),
    ((2, 1, 4), "standard"),
    ((2, 2, 4), "standard"),
    ((3, 1, 3), "standard"),
    ((4, 2, 3), "standard"),
    ((6, 2, 3), "standard"),
    ((6, 3, 2), "standard"),
    ((3, 3, 3), "zero"),
]


def windows(basis):
    return [signed_window(a) for a in basis.elements]


class TestAcceptance:
    """Tests for the u-basis on the acceptance groups."""

    @pytest.mark.parametrize("params, variant", ACCEPTANCE)
    def test_distinct_products(self, params, variant):
        """Test the products enumerate the group exactly once."""
        spec = GroupSpec(*params)
        basis = rpn_basis(spec, variant)
        table = validate_basis(basis)
        assert isinstance(table, DecompositionTable)
        assert basis.size == spec.order == len(table)

    @pytest.mark.parametrize("params, variant", ACCEPTANCE)
    def test_fmaj_is_hilbert(self, params, variant):
        """Test the fmaj generating function is the Hilbert series."""
        spec = GroupSpec(*params)
        assert fmaj_polynomial(rpn_basis(spec, variant)) == hilbert_polynomial(spec)

    @pytest.mark.parametrize("params, variant", ACCEPTANCE)
    def test_peel_matches_table(self, params, variant):
        """Test structural peeling agrees with the table on every element."""
        spec = GroupSpec(*params)
        basis = rpn_basis(spec, variant)
        for g in enumerate_group(spec):
            assert decompose(g, basis, "peel") == decompose(g, basis, "table")

    def test_moduli(self):
        """Test the moduli (n r/p, (n-1) r, ..., r)."""
        assert rpn_basis(GroupSpec(4, 2, 3)).moduli == [6, 8, 4]
        assert rpn_basis(GroupSpec(6, 3, 2)).moduli == [4, 6]

    def test_label(self):
        """Test labels record alpha and the variant."""
        assert rpn_basis(GroupSpec(4, 2, 3)).label == "u-basis(4,2,3,alpha=0)"
        assert rpn_basis(GroupSpec(8, 2, 3), "beta", beta=3).label == "u-basis(8,2,3,alpha=0,beta=3)"
        assert rpn_basis(GroupSpec(3, 3, 3), "zero").label == "u-basis(3,3,3,alpha=0,zero)"

    def test_elements(self):
        """Test u_2 = ((1,0,1); t_2) and the lower elements for G(4,2,3), alpha = 0."""
        basis = rpn_basis(GroupSpec(4, 2, 3))
        top, u1, u0 = basis.elements
        assert (top.colors, top.perm) == ((1, 0, 1), (3, 1, 2))
        assert (u1.colors, u1.perm) == ((1, 0, 3), (2, 1, 3))
        assert (u0.colors, u0.perm) == ((1, 0, 3), (1, 2, 3))

    def test_beta_variant(self):
        """Test the beta variant is a Hilbertian basis of G(8,2,3)."""
        spec = GroupSpec(8, 2, 3)
        basis = rpn_basis(spec, "beta", beta=3)
        assert basis.elements[0].colors == (1, 0, 5)
        assert fmaj_polynomial(basis) == hilbert_polynomial(spec)

    def test_zero_variant_matches_d_basis(self):
        """Test the zero variant on G(2,2,4) has the moduli and Fmaj of the d-basis."""
        zero = rpn_basis(GroupSpec(2, 2, 4), "zero")
        d = weyl_basis("D", 4)
        assert zero.moduli == d.moduli
        assert fmaj_polynomial(zero) == fmaj_polynomial(d)


class TestAlpha:
    """Tests for alpha selection."""

    @pytest.mark.parametrize(
        "params, expected",
        [
            ((4, 2, 3), 0),
            ((4, 2, 2), None),
            ((6, 2, 3), 1),
            ((6, 3, 2), 1),
            ((3, 1, 3), 1),
            ((2, 1, 4), 1),
        ],
    )
    def test_select_alpha(self, params, expected):
        """Test the smallest valid alpha."""
        assert select_alpha(GroupSpec(*params)) == expected

    def test_alpha_is_valid(self):
        """Test alpha = 0 fails and alpha = 2 passes for G(6,2,3)."""
        spec = GroupSpec(6, 2, 3)
        assert not alpha_is_valid(spec, 0)
        assert alpha_is_valid(spec, 2)

    def test_alpha_override(self):
        """Test a valid alpha override is used and still gives a basis."""
        spec = GroupSpec(6, 2, 3)
        basis = rpn_basis(spec, alpha=2)
        assert basis.alpha == 2
        assert fmaj_polynomial(basis) == hilbert_polynomial(spec)


class TestRpnErrors:
    """Tests for rejected constructions."""

    def test_gcd_not_one(self):
        """Test G(4,2,2) has gcd(n, p, r/p) = 2."""
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(4, 2, 2))

    def test_beta_not_coprime(self):
        """Test beta = 2 is rejected for r/p = 4."""
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(8, 2, 3), "beta", beta=2)

    def test_beta_missing_or_unused(self):
        """Test beta must come with the beta variant and only with it."""
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(8, 2, 3), "beta")
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(8, 2, 3), beta=3)

    def test_zero_needs_r_equal_p(self):
        """Test the zero variant is rejected for G(4,2,3)."""
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(4, 2, 3), "zero")

    def test_invalid_alpha(self):
        """Test alpha = 0 is rejected for G(6,2,3)."""
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(6, 2, 3), alpha=0)

    def test_unknown_variant(self):
        """Test an unknown variant name."""
        with pytest.raises(UnsupportedParameters):
            rpn_basis(GroupSpec(4, 2, 3), "other")


class TestDegreeOne:
    """Tests for n = 1."""

    def test_rpn(self):
        """Test G(6,2,1) has the single element ((2); id) of order 3."""
        basis = rpn_basis(GroupSpec(6, 2, 1))
        assert [a.colors for a in basis.elements] == [(2,)]
        assert basis.moduli == [3]
        assert fmaj_polynomial(basis) == hilbert_polynomial(GroupSpec(6, 2, 1))

    def test_rpn_trivial(self):
        """Test G(3,3,1) is trivial with modulus 1."""
        basis = rpn_basis(GroupSpec(3, 3, 1))
        assert basis.moduli == [1]
        assert basis.elements[0].is_identity()

    def test_sn(self):
        """Test S_1 has the empty basis."""
        basis = sn_basis(1)
        assert len(basis) == 0
        assert decompose(ColoredPerm.identity(1, 1), basis) == ()
        assert decompose(ColoredPerm.identity(1, 1), basis, "peel") == ()


class TestFamilies:
    """Tests for the t, tau, a, b, d and gamma bases."""

    def test_sn_basis(self):
        """Test the t-basis of S_4."""
        basis = sn_basis(4)
        assert [a.perm for a in basis.elements] == [(4, 1, 2, 3), (3, 1, 2, 4), (2, 1, 3, 4)]
        assert basis.moduli == [4, 3, 2]

    def test_wreath_basis(self):
        """Test tau_0 = ((1,0,0); id) closes the tau-basis of G(3,3)."""
        basis = wreath_basis(3, 3)
        assert basis.moduli == [9, 6, 3]
        assert basis.elements[-1].colors == (1, 0, 0)
        assert basis.elements[-1].perm == (1, 2, 3)
        assert fmaj_polynomial(basis) == hilbert_polynomial(GroupSpec(3, 1, 3))

    def test_b_basis(self):
        """Test beta_3 = [-3,1,2], beta_2 = [-2,1,3], beta_1 = [-1,2,3]."""
        basis = weyl_basis("B", 3)
        assert windows(basis) == [(-3, 1, 2), (-2, 1, 3), (-1, 2, 3)]
        assert basis.moduli == [6, 4, 2]

    def test_d_basis(self):
        """Test delta_3 = [3,1,2], delta_2 = [-2,1,-3], delta_1 = [-1,2,-3]."""
        basis = weyl_basis("D", 3)
        assert windows(basis) == [(3, 1, 2), (-2, 1, -3), (-1, 2, -3)]
        assert basis.moduli == [3, 4, 2]

    def test_a_basis_label(self):
        """Test the type A basis is the t-basis under its own label."""
        basis = weyl_basis("A", 3)
        assert basis.label == "a-basis(3)"
        assert basis.moduli == sn_basis(3).moduli

    @pytest.mark.parametrize("family", ["A", "B", "D"])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_weyl_peel(self, family, n):
        """Test peel and table agree for the Weyl bases."""
        basis = FAMILIES[family](n)
        for g, ks in basis.table().items():
            assert decompose(g, basis, "peel") == ks

    def test_unknown_family(self):
        """Test an unknown Weyl family."""
        with pytest.raises(UnsupportedParameters):
            weyl_basis("E", 6)


class TestBPlusBasis:
    """Tests for the gamma-basis of B_n+."""

    def test_gamma_4(self):
        """Test gamma_4 = [4,1,2,-3] has order 8, twice its modulus."""
        basis = bplus_basis(4)
        assert windows(basis)[0] == (4, 1, 2, -3)
        assert basis.moduli[0] == 4
        assert element_order(basis.elements[0]) == 8

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_perfect_only_for_odd_n(self, n):
        """Test the gamma-basis is perfect exactly when n is odd."""
        basis = bplus_basis(n)
        orders_match = all(element_order(a) == m for a, m in zip(basis.elements, basis.moduli))
        assert basis.perfect == orders_match == (n % 2 == 1)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_is_a_basis(self, n):
        """Test the products enumerate B_n+ exactly once."""
        basis = bplus_basis(n)
        table = basis.table()
        assert len(table) == len(enumerate_bplus(n)) == basis.group_order
        assert basis.group_label == f"B_{n}+"

    def test_no_peel(self):
        """Test peel is not available for the gamma-basis."""
        basis = bplus_basis(3)
        with pytest.raises(PeelUnsupportedError):
            decompose(ColoredPerm.identity(3, 2), basis, "peel")


class TestBasisShape:
    """Tests for the Basis constructor."""

    def test_length_mismatch(self):
        """Test elements and moduli must match in length."""
        with pytest.raises(ValueError):
            Basis([ColoredPerm.identity(2, 1)], [1, 1], "x", GroupSpec(1, 1, 2), False)

    def test_wrong_group(self):
        """Test elements must live in G(spec.r, spec.n)."""
        with pytest.raises(DimensionError):
            Basis([ColoredPerm.identity(3, 1)], [1], "x", GroupSpec(1, 1, 2), False)

    def test_false_perfect_flag(self):
        """Test a perfect basis must have moduli equal to the orders."""
        t2 = ColoredPerm(1, [0, 0, 0], [3, 1, 2])
        with pytest.raises(ConsistencyError):
            Basis([t2], [2], "x", GroupSpec(1, 1, 3), True)

    def test_to_record(self):
        """Test the structured record."""
        record = rpn_basis(GroupSpec(4, 2, 3)).to_record()
        assert record["group"] == "G(4,2,3)"
        assert record["order"] == 192
        assert record["moduli"] == [6, 8, 4]
        assert record["alpha"] == 0
        assert record["variant"] == "standard"


class TestValidation:
    """Tests for validate_basis failure witnesses."""

    def test_collision(self):
        """Test (t_2, t_2) with moduli (3, 2) collides at t_2."""
        t2 = ColoredPerm(1, [0, 0, 0], [3, 1, 2])
        basis = Basis([t2, t2], [3, 2], "x", GroupSpec(1, 1, 3), False)
        witness = validate_basis(basis)
        assert isinstance(witness, FailureWitness)
        assert witness.kind == "collision"
        assert witness.exponents == [(0, 1), (1, 0)]
        assert witness.element == t2

    def test_outside(self):
        """Test s_0 leaves D_2 at exponent vector (1, 0)."""
        s0 = signed_perm([-1, 2])
        s1 = signed_perm([2, 1])
        basis = Basis([s0, s1], [2, 2], "x", GroupSpec(2, 2, 2), False)
        witness = validate_basis(basis)
        assert isinstance(witness, FailureWitness)
        assert witness.kind == "outside"
        assert witness.exponents == [(1, 0)]
        assert witness.to_dict()["element"] == "[-1,2]"

    def test_count(self):
        """Test too few exponent vectors."""
        t2 = ColoredPerm(1, [0, 0, 0], [3, 1, 2])
        witness = validate_basis(Basis([t2], [3], "x", GroupSpec(1, 1, 3), True))
        assert isinstance(witness, FailureWitness)
        assert witness.kind == "count"

    def test_table_raises_on_failure(self):
        """Test the lazy table reports a failed basis as a consistency fault."""
        t2 = ColoredPerm(1, [0, 0, 0], [3, 1, 2])
        with pytest.raises(ConsistencyError):
            Basis([t2, t2], [3, 2], "x", GroupSpec(1, 1, 3), False).table()

    def test_ceiling(self):
        """Test the enumeration ceiling."""
        with pytest.raises(GroupSizeError):
            validate_basis(rpn_basis(GroupSpec(4, 2, 3)), ceiling=100)


class TestDecompose:
    """Tests for decompose and compose_from_exponents."""

    def test_round_trip_b3(self):
        """Test compose_from_exponents inverts decompose on B_3."""
        basis = weyl_basis("B", 3)
        for g in enumerate_group(GroupSpec(2, 1, 3)):
            assert compose_from_exponents(basis, decompose(g, basis)) == g

    def test_compose_from_exponents(self):
        """Test t_2^1 t_1^0 = [3,1,2]."""
        assert compose_from_exponents(sn_basis(3), (1, 0)).perm == (3, 1, 2)

    def test_compose_bad_exponents(self):
        """Test wrong lengths and out-of-range exponents."""
        basis = sn_basis(3)
        with pytest.raises(UnsupportedParameters):
            compose_from_exponents(basis, (1,))
        with pytest.raises(UnsupportedParameters):
            compose_from_exponents(basis, (3, 0))

    def test_wrong_degree(self):
        """Test elements of another G(r, n) are rejected."""
        with pytest.raises(DimensionError):
            decompose(ColoredPerm.identity(4, 2), weyl_basis("D", 3))

    def test_not_in_group(self):
        """Test s_0 has no presentation in the d-basis."""
        basis = weyl_basis("D", 3)
        s0 = signed_perm([-1, 2, 3])
        with pytest.raises(NotInGroupError):
            decompose(s0, basis)
        with pytest.raises(NotInGroupError):
            decompose(s0, basis, "peel")

    def test_unknown_method(self):
        """Test an unknown decomposition method."""
        with pytest.raises(UnsupportedParameters):
            decompose(ColoredPerm.identity(3, 1), sn_basis(3), "guess")

    def test_exponent_vectors(self):
        """Test exponent vectors run lexicographically over the moduli."""
        vectors = list(exponent_vectors(sn_basis(3)))
        assert vectors[:3] == [(0, 0), (0, 1), (1, 0)]
        assert len(vectors) == 6


class TestUSubgroup:
    """Tests for the subgroup generated by the lower u-elements."""

    def test_order_and_relation(self):
        """Test H in G(4,2,3) has 32 elements, all satisfying the color relation."""
        spec = GroupSpec(4, 2, 3)
        subgroup = u_subgroup(spec, 0)
        assert len(subgroup) == 32
        assert all(h.perm[-1] == 3 for h in subgroup)
        assert all(h_relation_holds(h, spec, 0) for h in subgroup)

    def test_erasing_is_onto(self):
        """Test erasing the top letter maps H onto G(4,1,2)."""
        subgroup = u_subgroup(GroupSpec(4, 2, 3), 0)
        image = {erase_last(h) for h in subgroup}
        assert image == set(enumerate_group(GroupSpec(4, 1, 2)))

    def test_needs_two_letters(self):
        """Test n = 1 has no such subgroup."""
        with pytest.raises(UnsupportedParameters):
            u_subgroup(GroupSpec(4, 2, 1), 0)
