import pytest
from hypothesis import given

from acmlift.classifier import (
    classify_hvector,
    classify_lifting_matrix,
    classify_plane_section,
    generator_lifting,
    is_plane_curve_and_line,
    is_three_general_points,
)
from acmlift.hvector import HVector, hvector_from_degree_matrix
from acmlift.matrix_core import DegreeMatrix, HomogeneousMatrix, enumerate_degree_matrices

from conftest import degree_matrices


def integral_two_by_three(lo=1, hi=6):
    return [M for M in enumerate_degree_matrices(2, lo, hi) if M.bottom_left() >= 1]


def expected_class(M):
    """Three-way split of integral 2x3 matrices, written from the raw inequalities."""
    a = lambda i, j: M.rows[i - 1][j - 1]
    if a(2, 1) >= 3:
        return "forced"
    ones = all(x == 1 for x in M.entries())
    first = a(2, 2) >= 3 and a(1, 1) != 2 and a(2, 1) != 2
    second = a(1, 1) >= 3 and a(2, 3) >= 3 and a(2, 1) != 2 and a(2, 2) != 2
    return "integral-forced" if ones or first or second else "realizable"


class TestPlaneSections:
    def test_three_general_points(self):
        v = classify_plane_section(DegreeMatrix(((1, 1, 1), (1, 1, 1))))
        assert v.forced_acm_all.value is False
        assert v.realizable_reduced_connected_nonacm.value is False
        assert v.realizable_reduced_connected_nonacm.reason == "three-general-points"
        assert v.realizable_disconnected_nonacm.value is True
        assert v.realizable_integral_smooth_nonacm.value == "no"
        assert v.buchsbaum_nonacm.value is False

    @pytest.mark.parametrize("b", [2, 3, 4])
    def test_plane_curve_and_line(self, b):
        M = DegreeMatrix(((1, b, b), (2 - b, 1, 1)))
        assert is_plane_curve_and_line(M)
        v = classify_plane_section(M)
        assert v.realizable_reduced_connected_nonacm.value is False
        assert v.realizable_reduced_connected_nonacm.reason == "plane-curve-and-line"
        assert v.realizable_disconnected_nonacm.value is True
        assert v.realizable_integral_smooth_nonacm.value == "not-integral-matrix"

    def test_not_plane_curve_and_line(self):
        assert not is_plane_curve_and_line(DegreeMatrix(((1, 1, 1), (1, 1, 1))))
        assert not is_plane_curve_and_line(DegreeMatrix(((1, 2, 2), (1, 2, 2))))

    @pytest.mark.parametrize(
        "rows, connected, disconnected",
        [(((1, 2),), False, True), (((1, 3),), False, False), (((2, 4),), True, True), (((3, 3),), False, False)],
    )
    def test_single_row(self, rows, connected, disconnected):
        v = classify_plane_section(DegreeMatrix(rows))
        assert v.realizable_reduced_connected_nonacm.value is connected
        assert v.realizable_disconnected_nonacm.value is disconnected

    def test_forced_acm(self):
        v = classify_plane_section(DegreeMatrix(((4, 4, 5), (3, 3, 4))))
        assert v.forced_acm_all.value is True
        assert v.realizable_reduced_connected_nonacm.value is False
        assert v.realizable_integral_smooth_nonacm.value == "no"

    def test_char_zero_note_only_without_twos(self):
        assert classify_plane_section(DegreeMatrix(((1, 1, 1), (1, 1, 1)))).assumptions
        assert not classify_plane_section(DegreeMatrix(((1, 2, 2), (1, 2, 2)))).assumptions

    def test_json_has_every_flag(self):
        data = classify_plane_section(DegreeMatrix(((1, 2, 2), (1, 2, 2)))).to_json()
        assert data["buchsbaum_nonacm"] == {"value": True, "reason": "entry-equal-2",
                                            "detail": data["buchsbaum_nonacm"]["detail"]}
        assert len(data) == 7


class TestIntegralPartition:
    def test_each_matrix_lands_in_one_class(self):
        matrices = integral_two_by_three()
        assert len(matrices) > 50
        counts = {"forced": 0, "integral-forced": 0, "realizable": 0}
        reasons = {
            "forced": {"bottom-left-at-least-3"},
            "integral-forced": {"two-by-three-exception", "wide-corner-exception", "three-general-points"},
            "realizable": {"two-by-three-smooth"},
        }
        for M in matrices:
            cls = expected_class(M)
            flag = classify_plane_section(M).realizable_integral_smooth_nonacm
            assert flag.reason in reasons[cls], (M.rows, flag)
            assert flag.value == ("yes" if cls == "realizable" else "no")
            counts[cls] += 1
        assert all(counts.values())

    def test_non_integral_matrix(self):
        flag = classify_plane_section(DegreeMatrix(((1, 2, 2), (0, 1, 1)))).realizable_integral_smooth_nonacm
        assert flag.value == "not-integral-matrix"

    @pytest.mark.parametrize("rows, value", [(((2, 3),), "yes"), (((1, 3),), "no"), (((3, 3),), "no")])
    def test_single_row_integral(self, rows, value):
        assert classify_plane_section(DegreeMatrix(rows)).realizable_integral_smooth_nonacm.value == value


class TestBuchsbaumFlag:
    def test_entry_two_iff_buchsbaum_exhaustive(self):
        for t in (1, 2, 3):
            for M in enumerate_degree_matrices(t, -1, 5):
                v = classify_plane_section(M)
                assert v.buchsbaum_nonacm.value is (2 in M.entries())

    @given(degree_matrices(max_t=4))
    def test_entry_two_iff_buchsbaum(self, M):
        assert classify_plane_section(M).buchsbaum_nonacm.value is (2 in M.entries())


class TestHVectors:
    def test_three_general_points_is_the_disconnected_exception(self):
        v = classify_hvector(HVector((1, 2)))
        assert v.realizable_connected.value is False
        assert v.realizable_connected.reason == "three-general-points"
        assert v.realizable_nonacm_reduced.value is True

    @pytest.mark.parametrize("b", [3, 4, 5])
    def test_plane_curve_and_line(self, b):
        v = classify_hvector(HVector((1, 2) + (1,) * (b - 1)))
        assert v.canonical_matrix.rows == ((1, b, b), (2 - b, 1, 1))
        assert v.realizable_connected.value is False
        assert v.realizable_connected.reason == "plane-curve-and-line"

    @pytest.mark.parametrize("h", [(1, 2, 1), (1, 2, 3), (1, 2, 3, 2, 1), (1, 2, 2, 1)])
    def test_connected_otherwise(self, h):
        assert classify_hvector(HVector(h)).realizable_connected.value is True

    @pytest.mark.parametrize("h, value", [((1, 1), False), ((1, 1, 1), False), ((1, 1, 1, 1), False)])
    def test_collinear(self, h, value):
        v = classify_hvector(HVector(h))
        assert v.realizable_connected.value is value
        assert v.realizable_connected.reason == "collinear-section"

    def test_not_decreasing_type_is_never_integral(self):
        v = classify_hvector(HVector((1, 2, 2, 1, 1)))
        assert v.realizable_integral_smooth_nonacm.reason == "not-decreasing-type"

    def test_rational_quartic(self):
        assert classify_hvector(HVector((1, 2, 1))).realizable_integral_smooth_nonacm.value == "yes"

    def test_agrees_with_matrix_classifier_on_integral_track(self):
        for M in integral_two_by_three(1, 5):
            if M.bottom_left() >= 3:
                continue
            if any(x == 0 for x in M.entries()):
                continue
            hv = classify_hvector(hvector_from_degree_matrix(M)).realizable_integral_smooth_nonacm
            mv = classify_plane_section(M).realizable_integral_smooth_nonacm
            assert hv.value == mv.value, M.rows


class TestGeneratorLifting:
    def test_bottom_row_threshold(self):
        report = generator_lifting(DegreeMatrix(((2, 3, 4), (1, 2, 3))))
        assert [g.must_lift for g in report] == [False, False, True]
        assert report[2].reason == "a_(t,3) >= 3"

    def test_nothing_forced(self):
        assert not any(g.must_lift for g in generator_lifting(DegreeMatrix(((1, 2, 3), (0, 1, 2)))))

    def test_buchsbaum_columns(self):
        report = generator_lifting(DegreeMatrix(((1, 2, 3), (0, 1, 2))), buchsbaum=True)
        assert [g.must_lift for g in report] == [True, False, False]
        assert [g.reason for g in report] == ["column-without-2", "column-meets-2", "column-meets-2"]

    def test_generator_degrees_follow_the_table(self):
        report = generator_lifting(DegreeMatrix(((1, 1, 1), (1, 1, 1))))
        assert [g.degree for g in report] == [2, 2, 2]

    @given(degree_matrices(max_t=4))
    def test_forced_lifts_are_a_suffix(self, M):
        flags = [g.must_lift for g in generator_lifting(M)]
        assert flags == sorted(flags)
        assert all(flags) == (M.bottom_left() >= 3)


class TestLiftingMatrices:
    def test_n_two(self):
        v = classify_lifting_matrix(HomogeneousMatrix(((1, 2, 2), (1, 2, 2))), 2)
        assert v.forced_acm.value is False
        assert v.buchsbaum_possible.value is True
        assert "necessary and sufficient" in v.buchsbaum_possible.detail

    def test_n_three(self):
        L = HomogeneousMatrix(((4, 4, 5), (4, 4, 5)))
        v = classify_lifting_matrix(L, 3)
        assert v.forced_acm.value is True
        assert v.buchsbaum_possible.value is False
        v = classify_lifting_matrix(HomogeneousMatrix(((3, 3, 4),)), 3)
        assert v.buchsbaum_possible.value is True
        assert "necessary only" in v.buchsbaum_possible.detail

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            classify_lifting_matrix(HomogeneousMatrix(((1, 2),)), 1)


def test_three_general_points_predicate():
    shapes = [((1, 1, 1), (1, 1, 1)), ((1, 1),), ((1, 1, 1, 1),) * 3]
    assert [is_three_general_points(HomogeneousMatrix(r)) for r in shapes] == [True, False, False]
