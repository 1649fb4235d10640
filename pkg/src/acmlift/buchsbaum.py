"""Bounds on the deficiency module of arithmetically Buchsbaum curves."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .matrix_core import (
    BettiTable,
    Block,
    DegreeMatrix,
    HomogeneousMatrix,
    betti_from_degree_matrix,
    find_blocks,
)
from .resolution_calculus import LiaisonAddSpec, liaison_addition


@dataclass(frozen=True)
class BlockBound:
    block: Block
    degree: int
    height: int  # rows equal to the witness row
    width: int  # columns equal to the block's columns
    bound: int


@dataclass(frozen=True)
class DeficiencyBounds:
    alpha_lower: int
    alpha_plus_upper: int
    per_degree: dict[int, int]
    delta: int
    J: list[tuple[int, int]] = field(default_factory=list)  # (column j, witness row k(j))
    blocks: list[BlockBound] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha_lower": self.alpha_lower,
            "alpha_plus_upper": self.alpha_plus_upper,
            "per_degree": {str(k): v for k, v in sorted(self.per_degree.items())},
            "delta": self.delta,
            "J": [{"column": j, "witness_row": k} for j, k in self.J],
        }


def deficiency_bounds(B: BettiTable, n: int = 2) -> tuple[int, int]:
    """Initial-degree lower bound and final-degree upper bound of the module."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return max(B.syz[-1] - n - 1, B.gens[-1] - 1), B.syz[0] - n - 1


def _equal_rows(M: HomogeneousMatrix, k: int) -> int:
    return sum(1 for row in M.rows if row == M.rows[k - 1])


def _equal_cols(M: HomogeneousMatrix, j: int) -> int:
    col = [r[j - 1] for r in M.rows]
    return sum(1 for c in range(M.ncols) if [r[c] for r in M.rows] == col)


def per_degree_dim_bounds(
    M: HomogeneousMatrix, n: int = 2, table: Optional[BettiTable] = None
) -> DeficiencyBounds:
    """Per-degree upper bounds on ``dim M_C``, one entry per block of ``n``'s.

    ``table`` supplies absolute degrees; for plane sections it is recovered
    from the degree matrix.
    """
    if table is None:
        table = betti_from_degree_matrix(M)
    lo, hi = deficiency_bounds(table, n)
    per_degree: dict[int, int] = {}
    J: list[tuple[int, int]] = []
    bounds: list[BlockBound] = []
    for blk in find_blocks(M, n):
        k, j = blk.rows[0], blk.cols[0]
        lam, mu = _equal_rows(M, k), _equal_cols(M, j)
        # Homogeneity makes equal-row and equal-column counts the block sides.
        assert (lam, mu) == (blk.height, blk.width), (blk, lam, mu)
        degree = table.gens[j - 1] - 1
        assert degree == table.syz[k - 1] - n - 1
        per_degree[degree] = per_degree.get(degree, 0) + min(lam, mu)
        J.extend((c, k) for c in range(blk.cols[0], blk.cols[1] + 1))
        bounds.append(BlockBound(blk, degree, lam, mu, min(lam, mu)))
    return DeficiencyBounds(lo, hi, per_degree, sum(per_degree.values()), J, bounds)


def delta(M: HomogeneousMatrix) -> int:
    return per_degree_dim_bounds(M).delta


@dataclass(frozen=True)
class MinimalCurveData:
    n: int
    curve_shifts: dict[int, int]  # resolution of I_C: degree -> rank, last module first
    section: BettiTable
    matrix: DegreeMatrix


def minimal_curve_family(n: int) -> MinimalCurveData:
    """Curves whose module is ``k^n`` in degree ``2n - 2`` with minimal degree."""
    if n < 1:
        raise ValueError("n must be at least 1")
    section = BettiTable((2 * n,) + (2 * n - 1,) * n, (2 * n + 1,) * n)
    matrix = DegreeMatrix(tuple((1,) + (2,) * n for _ in range(n)))
    shifts = {2 * n + 2: n, 2 * n + 1: 4 * n, 2 * n: 3 * n + 1}
    return MinimalCurveData(n, shifts, section, matrix)


def minimal_curve_section_by_liaison(n: int) -> BettiTable:
    """Build the same section table by adding two points ``n - 1`` times."""
    two_points = BettiTable((2, 1), (3,))
    table = two_points
    for k in range(2, n + 1):
        table = liaison_addition(table, two_points, LiaisonAddSpec(2 * k - 2, 2, False, True))
    return table
