"""Shared oracles and hypothesis strategies.

The oracles here never call the package's own arithmetic: they expand
power series term by term or enumerate matrices by brute force.
"""

from __future__ import annotations

import itertools

from hypothesis import assume, strategies as st

from acmlift.matrix_core import DegreeMatrix, HomogeneousMatrix, is_degree_matrix


def series_hvector(gens, syz, terms=None):
    """Coefficients of ``(1 - sum z^d + sum z^m) / (1 - z)^2`` by series expansion.

    ``1 / (1 - z)^2 = sum (k + 1) z^k``; the product is truncated well past
    the numerator's degree and trailing zeros are dropped.
    """
    top = max(list(gens) + list(syz))
    terms = terms or top + 3
    num = [0] * (top + 1)
    num[0] = 1
    for d in gens:
        num[d] -= 1
    for m in syz:
        num[m] += 1
    out = [sum(num[j] * (k - j + 1) for j in range(min(k, top) + 1)) for k in range(terms)]
    assert all(c == 0 for c in out[top:]), "series does not terminate"
    while out and out[-1] == 0:
        out.pop()
    return out


def brute_force_degree_matrices(t, lo, hi):
    """All ``t x (t+1)`` degree matrices with entries in ``[lo, hi]``, by exhaustion.

    Every homogeneous matrix is fixed by its first row and first column,
    so we try all of those and keep the ones that satisfy every rule.
    """
    found = set()
    vals = range(lo, hi + 1)
    for row in itertools.product(vals, repeat=t + 1):
        for col_tail in itertools.product(vals, repeat=t - 1):
            col = (row[0],) + col_tail
            grid = [[col[i] + row[j] - row[0] for j in range(t + 1)] for i in range(t)]
            if any(x < lo or x > hi for r in grid for x in r):
                continue
            if any(r[j] > r[j + 1] for r in grid for j in range(t)):
                continue
            if any(grid[i][0] < grid[i + 1][0] for i in range(t - 1)):
                continue
            if any(grid[i][i] <= 0 for i in range(t)):
                continue
            found.add(tuple(map(tuple, grid)))
    return found


@st.composite
def degree_matrices(draw, max_t=4, lo=-1, hi=6, min_t=1):
    """Degree matrices built from a sorted first row and a decreasing first column.

    Each column entry is drawn above the bound that keeps its diagonal entry
    positive, so almost nothing is filtered.
    """
    t = draw(st.integers(min_t, max_t))
    first = draw(st.integers(max(1, lo), hi))
    row = [first] + sorted(draw(st.lists(st.integers(first, hi), min_size=t, max_size=t)))
    col = [first]
    for i in range(1, t):
        floor = max(lo, first - row[i] + 1)
        assume(floor <= col[-1])
        col.append(draw(st.integers(floor, col[-1])))
    grid = tuple(tuple(col[i] + row[j] - first for j in range(t + 1)) for i in range(t))
    assume(is_degree_matrix(HomogeneousMatrix(grid)))
    return DegreeMatrix(grid)


def integral_degree_matrices(max_t=4, hi=6):
    """All entries positive, so the subdiagonal is too."""
    return degree_matrices(max_t=max_t, lo=1, hi=hi)


ACCEPTANCE_LINES: list[str] = []


def report_criterion(number, ok, detail):
    """Record one PASS/FAIL line; pytest prints them all in the terminal summary."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
