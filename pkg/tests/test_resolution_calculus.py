import itertools

import pytest
from hypothesis import given, strategies as st

from acmlift.errors import (
    BadCancellation,
    DegreeTooSmall,
    InvalidInput,
    PreconditionError,
    SocleObstruction,
)
from acmlift.hvector import hvector_from_betti
from acmlift.matrix_core import BettiTable, DegreeMatrix, betti_from_degree_matrix, enumerate_degree_matrices
from acmlift.resolution_calculus import (
    BDLSpec,
    CILinkSpec,
    LiaisonAddSpec,
    UnionSpec,
    apply,
    basic_double_link,
    ci_link,
    liaison_addition,
    socle_degrees,
    socle_threshold,
    spec_from_json,
    union_two_aCM,
)

from conftest import degree_matrices

POINT = BettiTable((1, 1), (2,))
CONIC_POINTS = BettiTable((1, 2), (3,))
THREE_POINTS = BettiTable((2, 2, 2), (3, 3))


def degree(B):
    return hvector_from_betti(B).degree


def small_tables():
    return [betti_from_degree_matrix(M) for t in (1, 2, 3) for M in enumerate_degree_matrices(t, -1, 4)]


def valid_links():
    for B in small_tables():
        d = degree(B)
        for f in range(B.alpha, B.alpha + 3):
            for g in range(f, f + 3):
                if f * g <= d:
                    continue
                for flags in itertools.product((False, True), repeat=2):
                    spec = CILinkSpec(f, g, *flags)
                    try:
                        yield B, spec, ci_link(B, spec)
                    except (BadCancellation, PreconditionError):
                        continue


class TestLinkage:
    def test_three_points_to_one(self):
        # Three points on two conics: the residual is the fourth point.
        assert ci_link(THREE_POINTS, CILinkSpec(2, 2, True, True)) == POINT

    def test_unflagged_link_keeps_ghost_terms(self):
        R = ci_link(THREE_POINTS, CILinkSpec(2, 2))
        assert R == BettiTable((2, 2, 1, 1), (2, 2, 2))
        assert hvector_from_betti(R).coeffs == (1,)

    def test_reverse_swaps_and_negates_flags(self):
        assert CILinkSpec(2, 3, True, False).reverse() == CILinkSpec(2, 3, True, False)
        assert CILinkSpec(2, 3, False, False).reverse() == CILinkSpec(2, 3, True, True)

    def test_involution_and_degree_on_small_tables(self):
        count = 0
        for B, spec, R in valid_links():
            assert ci_link(R, spec.reverse()) == B
            assert degree(R) == spec.f * spec.g - degree(B)
            count += 1
        assert count > 1000

    def test_forms_sharing_a_factor(self):
        # A point on a line: two conics through it both contain the line.
        with pytest.raises(PreconditionError):
            ci_link(BettiTable((1, 3), (4,)), CILinkSpec(2, 2))

    def test_degree_too_small(self):
        with pytest.raises(DegreeTooSmall):
            ci_link(THREE_POINTS, CILinkSpec(1, 3))

    def test_flag_without_generator(self):
        with pytest.raises(BadCancellation):
            ci_link(THREE_POINTS, CILinkSpec(3, 3, True, False))


class TestBasicDoubleLink:
    def test_point_to_three_points(self):
        assert basic_double_link(POINT, BDLSpec(2, 1)) == THREE_POINTS

    def test_flagged_surface_cancels(self):
        assert basic_double_link(CONIC_POINTS, BDLSpec(1, 1, True)) == BettiTable((3, 1), (4,))

    @given(degree_matrices(max_t=3), st.integers(0, 3), st.integers(1, 3))
    def test_degree_grows_by_product(self, M, extra, t_deg):
        B = betti_from_degree_matrix(M)
        s = B.alpha + extra
        assert degree(basic_double_link(B, BDLSpec(s, t_deg))) == degree(B) + s * t_deg

    def test_rejections(self):
        with pytest.raises(DegreeTooSmall):
            basic_double_link(THREE_POINTS, BDLSpec(1, 1))
        with pytest.raises(InvalidInput):
            basic_double_link(POINT, BDLSpec(1, 0))
        with pytest.raises(BadCancellation):
            basic_double_link(POINT, BDLSpec(2, 1, True))


class TestUnion:
    def test_line_and_conic_through_a_point(self):
        assert union_two_aCM(POINT, CONIC_POINTS, 1) == THREE_POINTS

    def test_socle_obstruction(self):
        X1 = BettiTable((3, 4), (7,))
        X2 = betti_from_degree_matrix(DegreeMatrix(((3, 4, 8), (2, 3, 7))))
        assert socle_threshold(X1, 6) == 11
        with pytest.raises(SocleObstruction):
            union_two_aCM(X1, X2, 6)

    def test_dF_must_be_a_generator_degree(self):
        with pytest.raises(InvalidInput):
            union_two_aCM(POINT, CONIC_POINTS, 3)

    def test_degrees_add(self):
        tables = [betti_from_degree_matrix(M) for t in (1, 2) for M in enumerate_degree_matrices(t, 0, 3)]
        seen = 0
        for X1, X2 in itertools.product(tables, repeat=2):
            for dF in set(X2.gens):
                try:
                    U = union_two_aCM(X1, X2, dF)
                except SocleObstruction:
                    continue
                assert degree(U) == degree(X1) + degree(X2)
                seen += 1
        assert seen > 20


class TestLiaisonAddition:
    def test_two_points_and_their_line(self):
        # Y, Z points and F = Q linear: Y + Z + one more point.
        L = liaison_addition(POINT, POINT, LiaisonAddSpec(1, 1))
        assert degree(L) == 3
        assert hvector_from_betti(L).coeffs == (1, 2)

    @given(degree_matrices(max_t=3), degree_matrices(max_t=3), st.integers(0, 2), st.integers(0, 2))
    def test_degree_identity(self, MY, MZ, e1, e2):
        Y, Z = betti_from_degree_matrix(MY), betti_from_degree_matrix(MZ)
        spec = LiaisonAddSpec(Y.alpha + e1, Z.alpha + e2)
        assert degree(liaison_addition(Y, Z, spec)) == degree(Y) + degree(Z) + spec.degF * spec.degQ

    def test_flagged_cancels_one_pair(self):
        plain = liaison_addition(POINT, POINT, LiaisonAddSpec(1, 1))
        flagged = liaison_addition(POINT, POINT, LiaisonAddSpec(1, 1, True, False))
        assert len(flagged.gens) == len(plain.gens) - 1
        assert hvector_from_betti(flagged) == hvector_from_betti(plain)

    def test_degree_too_small(self):
        with pytest.raises(DegreeTooSmall):
            liaison_addition(THREE_POINTS, POINT, LiaisonAddSpec(1, 1))


class TestPlumbing:
    @pytest.mark.parametrize(
        "spec",
        [CILinkSpec(2, 3, True, False), BDLSpec(2, 1, True), LiaisonAddSpec(2, 2, False, True), UnionSpec(4)],
    )
    def test_json_round_trip(self, spec):
        assert spec_from_json(spec.to_json()) == spec

    @pytest.mark.parametrize("data", [{}, {"op": "blowup"}, {"op": "bdl", "s": 2}, "bdl"])
    def test_bad_descriptors(self, data):
        with pytest.raises(InvalidInput):
            spec_from_json(data)

    def test_apply_dispatches(self):
        assert apply(POINT, BDLSpec(2, 1)) == THREE_POINTS
        assert apply(POINT, UnionSpec(1), CONIC_POINTS) == THREE_POINTS
        with pytest.raises(InvalidInput):
            apply(POINT, UnionSpec(1))

    def test_higher_ambient_is_rejected(self):
        with pytest.raises(InvalidInput):
            ci_link(BettiTable((2, 2, 2, 2), (3, 3), ambient=3), CILinkSpec(2, 2))

    def test_socle_degrees(self):
        assert socle_degrees(THREE_POINTS) == (0, 0)
        assert socle_degrees(BettiTable((3, 4), (7,))) == (4,)
