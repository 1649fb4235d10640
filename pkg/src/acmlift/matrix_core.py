"""Degree matrices, lifting matrices and Betti tables of codimension-two points.

A degree matrix of ``t`` syzygies and ``t + 1`` generators is the integer
matrix ``a[i][j] = m_i - d_j`` where both degree lists are sorted
descending.  Entries therefore grow from left to right and from bottom to
top.  Indices in messages are 1-based; the code itself is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .errors import (
    ConventionError,
    InvalidInput,
    NotDegreeMatrix,
    NotHomogeneous,
    PreconditionError,
    ShapeError,
)

Grid = Sequence[Sequence[int]]


def _as_grid(entries: Grid) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(x) for x in row) for row in entries)
    if not rows or not rows[0]:
        raise ShapeError("matrix must have at least one row and one column")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ShapeError(f"row {i} has {len(row)} entries, expected {width}")
    return rows


def _cross_sums_agree(rows: tuple[tuple[int, ...], ...]) -> bool:
    a11 = rows[0][0]
    return all(
        rows[i][j] == rows[i][0] + rows[0][j] - a11
        for i in range(len(rows))
        for j in range(len(rows[0]))
    )


def _is_monotone(rows: tuple[tuple[int, ...], ...]) -> bool:
    first = rows[0]
    col = [r[0] for r in rows]
    return all(x <= y for x, y in zip(first, first[1:])) and all(
        x >= y for x, y in zip(col, col[1:])
    )


@dataclass(frozen=True)
class HomogeneousMatrix:
    """Integer matrix with ``a[i][j] + a[r][s] == a[i][s] + a[r][j]``.

    Any rectangular shape is accepted so the same type carries lifting
    matrices of points in higher projective spaces.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = _as_grid(self.rows)
        object.__setattr__(self, "rows", rows)
        if not _cross_sums_agree(rows):
            raise NotHomogeneous(f"matrix {list(map(list, rows))} is not homogeneous")
        if not _is_monotone(rows):
            raise ConventionError(
                "entries must be non-decreasing along rows and non-increasing down columns"
            )

    @property
    def t(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.t, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        """1-based entry access, ``M[i, j] == a_{i,j}``."""
        i, j = ij
        if not (1 <= i <= self.t and 1 <= j <= self.ncols):
            raise IndexError(f"entry ({i},{j}) outside a {self.t}x{self.ncols} matrix")
        return self.rows[i - 1][j - 1]

    def entries(self) -> Iterator[int]:
        for row in self.rows:
            yield from row

    def has_hilbert_burch_shape(self) -> bool:
        return self.ncols == self.t + 1

    def bottom_left(self) -> int:
        return self.rows[-1][0]

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.rows[h][h] for h in range(min(self.t, self.ncols)))

    def subdiagonal(self) -> tuple[int, ...]:
        return tuple(self.rows[h + 1][h] for h in range(min(self.t - 1, self.ncols)))

    def trace(self) -> int:
        return sum(self.diagonal())

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "HomogeneousMatrix":
        """Submatrix on the given 1-based row and column indices (kept in order)."""
        rs, cs = sorted(rows), sorted(cols)
        return HomogeneousMatrix(tuple(tuple(self.rows[i - 1][j - 1] for j in cs) for i in rs))

    def delete(self, row: int, col: int) -> "HomogeneousMatrix":
        """Drop one row and one column (1-based)."""
        return self.submatrix(
            [i for i in range(1, self.t + 1) if i != row],
            [j for j in range(1, self.ncols + 1) if j != col],
        )

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def to_json(self) -> dict:
        return {"rows": self.to_list()}

    @classmethod
    def from_json(cls, data: dict) -> "HomogeneousMatrix":
        if not isinstance(data, dict) or "rows" not in data:
            raise InvalidInput("matrix JSON needs a 'rows' field")
        return cls(data["rows"])

    def __str__(self) -> str:
        width = max(len(str(x)) for x in self.entries())
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.rows)


class DegreeMatrix(HomogeneousMatrix):
    """Homogeneous ``t x (t+1)`` matrix with positive diagonal."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.has_hilbert_burch_shape():
            raise ShapeError(f"degree matrix must be t x (t+1), got {self.t}x{self.ncols}")
        bad = [h + 1 for h, a in enumerate(self.diagonal()) if a <= 0]
        if bad:
            raise NotDegreeMatrix(f"diagonal entries must be positive; a_{{h,h}} <= 0 at h={bad}")


def as_degree_matrix(M: HomogeneousMatrix | Grid) -> DegreeMatrix:
    if isinstance(M, DegreeMatrix):
        return M
    rows = M.rows if isinstance(M, HomogeneousMatrix) else M
    return DegreeMatrix(rows)


@dataclass(frozen=True)
class BettiTable:
    """Shifts of the minimal free resolution of a zero-dimensional scheme.

    ``gens`` are the generator degrees ``d_j`` and ``syz`` the last-module
    shifts ``m_i``; both are kept as descending multisets.
    """

    gens: tuple[int, ...]
    syz: tuple[int, ...]
    ambient: int = 2

    def __post_init__(self) -> None:
        gens = tuple(sorted((int(x) for x in self.gens), reverse=True))
        syz = tuple(sorted((int(x) for x in self.syz), reverse=True))
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "syz", syz)
        if self.ambient < 2:
            raise InvalidInput("ambient dimension must be at least 2")
        if not gens:
            raise InvalidInput("a Betti table needs at least one generator")
        if self.ambient == 2 and len(gens) != len(syz) + 1:
            raise ShapeError(
                f"plane points need one more generator than syzygy, got {len(gens)} and {len(syz)}"
            )

    @property
    def alpha(self) -> int:
        """Initial degree of the ideal."""
        return self.gens[-1]

    def shift(self, k: int) -> "BettiTable":
        return BettiTable(tuple(d + k for d in self.gens), tuple(m + k for m in self.syz), self.ambient)

    def numerator(self) -> dict[int, int]:
        """Sparse coefficients of ``1 - sum z^d_j + sum z^m_i``."""
        out: dict[int, int] = {0: 1}
        for d in self.gens:
            out[d] = out.get(d, 0) - 1
        for m in self.syz:
            out[m] = out.get(m, 0) + 1
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        return {"gens": list(self.gens), "syz": list(self.syz), "ambient": self.ambient}

    @classmethod
    def from_json(cls, data: dict) -> "BettiTable":
        for key in ("gens", "syz"):
            if not isinstance(data, dict) or key not in data:
                raise InvalidInput(f"Betti table JSON needs a '{key}' field")
        return cls(tuple(data["gens"]), tuple(data["syz"]), int(data.get("ambient", 2)))


@dataclass(frozen=True)
class Block:
    """Maximal rectangle of equal entries; ranges are 1-based and inclusive."""

    rows: tuple[int, int]
    cols: tuple[int, int]
    value: int

    @property
    def height(self) -> int:
        return self.rows[1] - self.rows[0] + 1

    @property
    def width(self) -> int:
        return self.cols[1] - self.cols[0] + 1

    def cells(self) -> Iterator[tuple[int, int]]:
        for i in range(self.rows[0], self.rows[1] + 1):
            for j in range(self.cols[0], self.cols[1] + 1):
                yield (i, j)


def check_homogeneous(entries: Grid) -> bool:
    rows = _as_grid(entries)
    if len(rows[0]) != len(rows) + 1:
        raise ShapeError(f"expected t x (t+1), got {len(rows)}x{len(rows[0])}")
    return _cross_sums_agree(rows)


def complete_matrix(first_row: Sequence[int], first_column: Sequence[int]) -> HomogeneousMatrix:
    """Unique homogeneous matrix with the given first row and first column."""
    if not first_row or not first_column:
        raise ShapeError("first row and first column must be nonempty")
    if first_row[0] != first_column[0]:
        raise InvalidInput("first_row[1] and first_column[1] must agree")
    a11 = first_row[0]
    rows = tuple(tuple(ci + rj - a11 for rj in first_row) for ci in first_column)
    return HomogeneousMatrix(rows)


def is_degree_matrix(M: HomogeneousMatrix) -> bool:
    return M.has_hilbert_burch_shape() and all(a > 0 for a in M.diagonal())


def is_integral_degree_matrix(M: HomogeneousMatrix) -> bool:
    return is_degree_matrix(M) and all(a > 0 for a in M.subdiagonal())


def betti_from_degree_matrix(M: HomogeneousMatrix) -> BettiTable:
    M = as_degree_matrix(M)
    t = M.t
    total = M.trace()
    syz = [total + M.rows[i][t] for i in range(t)]
    gens = [total - M.rows[j][j] + M.rows[j][t] for j in range(t)] + [total]
    return BettiTable(tuple(gens), tuple(syz))


def degree_matrix_from_betti(B: BettiTable) -> HomogeneousMatrix:
    """Lifting matrix ``(m_i - d_j)``; the degree matrix when ``B.ambient == 2``."""
    if not B.syz:
        raise InvalidInput("lifting matrix needs at least one syzygy shift")
    return HomogeneousMatrix(tuple(tuple(m - d for d in B.gens) for m in B.syz))


def transpose_antidiagonal(M: HomogeneousMatrix | Grid) -> HomogeneousMatrix:
    """Reflect across the anti-diagonal: output (p, q) is input (k+1-q, l+1-p)."""
    rows = M.rows if isinstance(M, HomogeneousMatrix) else _as_grid(M)
    k, l = len(rows), len(rows[0])
    return HomogeneousMatrix(
        tuple(tuple(rows[k - 1 - q][l - 1 - p] for q in range(k)) for p in range(l))
    )


def pad_with_degenerate_row(M: HomogeneousMatrix) -> HomogeneousMatrix:
    """Add a bottom row starting ``0, 2`` and a new first column.

    The result has the same h-vector as ``M`` (a ghost pair is introduced).
    """
    M = as_degree_matrix(M)
    if M.bottom_left() < 3:
        raise PreconditionError(f"padding needs a_(t,1) >= 3, got {M.bottom_left()}")
    # Old column 1 becomes column 2; b_(t+1,1) = 0 and b_(t+1,2) = 2 force
    # the new first column to be the old one minus 2.
    first_row = [M.rows[0][0] - 2] + list(M.rows[0])
    first_col = [r[0] - 2 for r in M.rows] + [0]
    return complete_matrix(first_row, first_col)


def find_blocks(M: HomogeneousMatrix, v: int) -> list[Block]:
    """All maximal rectangles of entries equal to ``v``, ordered by row."""
    rows = M.rows
    blocks: list[Block] = []
    seen: set[tuple[int, int]] = set()
    for i in range(M.t):
        for j in range(M.ncols):
            if rows[i][j] != v or (i, j) in seen:
                continue
            j2 = j
            while j2 + 1 < M.ncols and rows[i][j2 + 1] == v:
                j2 += 1
            i2 = i
            while i2 + 1 < M.t and all(rows[i2 + 1][c] == v for c in range(j, j2 + 1)):
                i2 += 1
            for a in range(i, i2 + 1):
                for b in range(j, j2 + 1):
                    seen.add((a, b))
            blocks.append(Block((i + 1, i2 + 1), (j + 1, j2 + 1), v))
    return blocks


def enumerate_degree_matrices(t: int, lo: int, hi: int) -> Iterator[DegreeMatrix]:
    """Every ``t x (t+1)`` degree matrix with all entries in ``[lo, hi]``.

    The extreme entries sit in the first row and first column, so bounding
    those bounds the whole matrix.
    """
    values = range(lo, hi + 1)
    for first_row in combinations_with_replacement(values, t + 1):
        a11 = first_row[0]
        for tail in combinations_with_replacement(range(lo, a11 + 1), t - 1):
            first_col = (a11,) + tuple(sorted(tail, reverse=True))
            M = complete_matrix(first_row, first_col)
            if is_degree_matrix(M):
                yield DegreeMatrix(M.rows)
