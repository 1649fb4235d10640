import pytest
from hypothesis import given, strategies as st

from acmlift.errors import ConventionError, NotDegreeMatrix, NotHomogeneous, PreconditionError, ShapeError
from acmlift.hvector import hvector_from_degree_matrix
from acmlift.matrix_core import (
    BettiTable,
    DegreeMatrix,
    HomogeneousMatrix,
    as_degree_matrix,
    betti_from_degree_matrix,
    check_homogeneous,
    complete_matrix,
    degree_matrix_from_betti,
    enumerate_degree_matrices,
    find_blocks,
    is_degree_matrix,
    is_integral_degree_matrix,
    pad_with_degenerate_row,
    transpose_antidiagonal,
)

from conftest import brute_force_degree_matrices, degree_matrices


class TestConstruction:
    def test_all_ones_is_a_degree_matrix(self):
        M = DegreeMatrix(((1, 1, 1), (1, 1, 1)))
        assert M.t == 2 and M.shape == (2, 3)
        assert M.trace() == 2
        assert M.bottom_left() == 1

    @pytest.mark.parametrize(
        "rows, error",
        [
            (((1, 2, 3), (1, 1, 2)), NotHomogeneous),
            (((2, 1, 3), (1, 0, 2)), ConventionError),
            (((1, 2), (0, 1)), ShapeError),
            (((1, 2, 3), (-1, 0, 1)), NotDegreeMatrix),
            (((0, 1),), NotDegreeMatrix),
        ],
    )
    def test_rejects(self, rows, error):
        with pytest.raises(error):
            DegreeMatrix(rows)

    def test_ragged_rows(self):
        with pytest.raises(ShapeError):
            HomogeneousMatrix(((1, 2, 3), (1, 2)))

    def test_homogeneous_non_square_shapes_are_allowed(self):
        L = HomogeneousMatrix(((1, 2, 2, 3), (-1, 0, 0, 1), (-1, 0, 0, 1)))
        assert L.shape == (3, 4)
        assert not is_degree_matrix(L)
        wide = HomogeneousMatrix(((2, 2, 3, 3, 3),))
        assert not wide.has_hilbert_burch_shape()

    def test_check_homogeneous(self):
        assert check_homogeneous([[1, 2, 3], [0, 1, 2]])
        assert not check_homogeneous([[1, 2, 3], [0, 2, 2]])
        with pytest.raises(ShapeError):
            check_homogeneous([[1, 2], [3, 4]])

    def test_complete_matrix(self):
        M = complete_matrix([1, 2, 4], [1, 0])
        assert M.to_list() == [[1, 2, 4], [0, 1, 3]]

    def test_json_round_trip(self):
        M = DegreeMatrix(((2, 2, 3), (2, 2, 3)))
        assert HomogeneousMatrix.from_json(M.to_json()) == HomogeneousMatrix(M.rows)

    def test_integral_needs_positive_subdiagonal(self):
        assert is_integral_degree_matrix(HomogeneousMatrix(((1, 2, 2), (1, 2, 2))))
        assert not is_integral_degree_matrix(HomogeneousMatrix(((1, 2, 2), (0, 1, 1))))


class TestBettiTables:
    def test_three_general_points(self):
        B = betti_from_degree_matrix(DegreeMatrix(((1, 1, 1), (1, 1, 1))))
        assert B.gens == (2, 2, 2) and B.syz == (3, 3)

    def test_sorting_and_alpha(self):
        B = BettiTable((1, 2), (3,))
        assert B.gens == (2, 1)
        assert B.alpha == 1

    def test_shape_rule(self):
        with pytest.raises(ShapeError):
            BettiTable((2, 2), (3, 3))

    def test_higher_ambient_skips_shape_rule(self):
        B = BettiTable((2, 2, 2, 2), (3, 3), ambient=3)
        assert degree_matrix_from_betti(B).shape == (2, 4)

    def test_numerator(self):
        assert BettiTable((2, 1), (3,)).numerator() == {0: 1, 1: -1, 2: -1, 3: 1}

    @given(degree_matrices())
    def test_round_trip(self, M):
        assert degree_matrix_from_betti(betti_from_degree_matrix(M)) == HomogeneousMatrix(M.rows)

    @given(degree_matrices())
    def test_entries_are_syzygy_minus_generator(self, M):
        B = betti_from_degree_matrix(M)
        for i, m in enumerate(B.syz):
            for j, d in enumerate(B.gens):
                assert M.rows[i][j] == m - d


class TestReshaping:
    @given(degree_matrices())
    def test_antidiagonal_transpose_is_an_involution(self, M):
        assert transpose_antidiagonal(transpose_antidiagonal(M)) == HomogeneousMatrix(M.rows)

    def test_antidiagonal_transpose_example(self):
        assert transpose_antidiagonal([[1, 2], [1, 2], [0, 1]]).to_list() == [[1, 2, 2], [0, 1, 1]]

    @pytest.mark.parametrize("rows", [((3, 4),), ((3, 3, 4), (3, 3, 4)), ((4, 5, 5), (3, 4, 4))])
    def test_padding_keeps_the_hvector(self, rows):
        M = DegreeMatrix(rows)
        P = pad_with_degenerate_row(M)
        assert P.shape == (M.t + 1, M.t + 2)
        assert P[P.t, 1] == 0 and P[P.t, 2] == 2
        assert hvector_from_degree_matrix(as_degree_matrix(P)) == hvector_from_degree_matrix(M)

    def test_padding_needs_bottom_left_three(self):
        with pytest.raises(PreconditionError):
            pad_with_degenerate_row(DegreeMatrix(((2, 3),)))

    def test_delete_and_submatrix(self):
        M = DegreeMatrix(((1, 2, 2, 3), (0, 1, 1, 2), (0, 1, 1, 2)))
        assert M.delete(1, 1).to_list() == [[1, 1, 2], [1, 1, 2]]
        assert M.submatrix([2, 3], [2, 3, 4]).to_list() == [[1, 1, 2], [1, 1, 2]]


class TestBlocks:
    def test_minimal_curve_matrix_has_one_block(self):
        M = DegreeMatrix(((1, 2, 2, 2),) * 3)
        (blk,) = find_blocks(M, 2)
        assert (blk.rows, blk.cols) == ((1, 3), (2, 4))
        assert blk.height == 3 and blk.width == 3
        assert len(list(blk.cells())) == 9

    def test_staircase_gives_separate_blocks(self):
        M = DegreeMatrix(((1, 2, 3), (0, 1, 2)))
        blocks = find_blocks(M, 2)
        assert [(b.rows, b.cols) for b in blocks] == [((1, 1), (2, 2)), ((2, 2), (3, 3))]

    def test_no_block(self):
        assert find_blocks(DegreeMatrix(((1, 1, 1), (1, 1, 1))), 2) == []

    @given(degree_matrices(), st.integers(-1, 6))
    def test_blocks_partition_the_value(self, M, v):
        cells = [c for b in find_blocks(M, v) for c in b.cells()]
        assert len(cells) == len(set(cells))
        expected = {(i, j) for i in range(1, M.t + 1) for j in range(1, M.ncols + 1) if M[i, j] == v}
        assert set(cells) == expected


class TestEnumeration:
    @pytest.mark.parametrize("t, lo, hi", [(1, -1, 5), (2, -1, 5), (3, -1, 5), (2, 1, 6), (3, 0, 3)])
    def test_matches_brute_force(self, t, lo, hi):
        fast = {M.rows for M in enumerate_degree_matrices(t, lo, hi)}
        assert fast == brute_force_degree_matrices(t, lo, hi)

    def test_counts_are_frozen(self):
        # Frozen from the brute-force oracle above.
        counts = [sum(1 for _ in enumerate_degree_matrices(t, -1, 5)) for t in (1, 2, 3)]
        assert counts == [15, 100, 427]

    def test_no_duplicates(self):
        rows = [M.rows for M in enumerate_degree_matrices(3, -1, 5)]
        assert len(rows) == len(set(rows))
