"""h-vectors of plane point schemes.

Two independent routes compute the h-vector of a degree matrix: the closed
product formula over the diagonal, and exact division of the Hilbert series
numerator by ``(1 - z)^2``.  The second route is the oracle for the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import AmbiguousInversion, InvalidHVector, InvalidInput, NotDivisible
from .matrix_core import (
    BettiTable,
    DegreeMatrix,
    HomogeneousMatrix,
    as_degree_matrix,
    degree_matrix_from_betti,
    is_degree_matrix,
)

Poly = list[int]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_add(a: Sequence[int], b: Sequence[int]) -> Poly:
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]


def strip(p: Sequence[int]) -> Poly:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return out


def ones(n: int) -> Poly:
    """``1 + z + ... + z^(n-1)``."""
    return [1] * n


def format_poly(coeffs: Sequence[int], var: str = "z") -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class HVector:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(strip(int(c) for c in self.coeffs))
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs or coeffs[0] != 1:
            raise InvalidHVector(f"h-vector must start with h_0 = 1, got {list(coeffs)}")
        neg = [i for i, c in enumerate(coeffs) if c < 0]
        if neg:
            raise InvalidHVector(f"h-vector has negative coefficients at {neg}")

    @property
    def s(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return sum(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    def to_json(self) -> dict:
        return {"h": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "HVector":
        if not isinstance(data, dict) or "h" not in data:
            raise InvalidInput("h-vector JSON needs an 'h' field")
        return cls(tuple(data["h"]))


@dataclass(frozen=True)
class UVWS:
    u: int
    v: int
    w: Optional[int]
    s: int


def _divide_by_one_minus_z(p: Sequence[int]) -> Poly:
    """Exact quotient by ``1 - z``; prefix sums, remainder must vanish."""
    out, acc = [], 0
    for c in p:
        acc += c
        out.append(acc)
    if out and out[-1] != 0:
        raise NotDivisible("numerator is not divisible by (1 - z)^2")
    return out[:-1]


def numerator_coeffs(B: BettiTable) -> Poly:
    sparse = B.numerator()
    if not sparse:
        raise NotDivisible("numerator vanishes: the table describes the empty scheme")
    top = max(sparse)
    dense = [0] * (top + 1)
    for k, v in sparse.items():
        if k < 0:
            raise NotDivisible(f"negative shift {k} in Betti table")
        dense[k] += v
    return dense


def hvector_from_betti(B: BettiTable) -> HVector:
    """Divide the Hilbert series numerator by ``(1 - z)^2`` exactly."""
    if B.ambient != 2:
        raise InvalidInput("h-vector of a Betti table is defined here for plane points only")
    q = _divide_by_one_minus_z(_divide_by_one_minus_z(numerator_coeffs(B)))
    q = strip(q)
    if not q or any(c < 0 for c in q):
        raise NotDivisible(f"quotient {q} is not a nonnegative h-vector")
    return HVector(tuple(q))


def hvector_from_degree_matrix(M: HomogeneousMatrix) -> HVector:
    """Closed form: sum over diagonal positions of products of geometric runs."""
    M = as_degree_matrix(M)
    t = M.t
    diag = M.diagonal()
    total: Poly = [0]
    for i in range(t):
        offset = sum(diag[:i])
        top = sum(diag[i + 1 :]) + M.rows[i][t] - 1
        term = poly_mul(ones(diag[i]), ones(top + 1))
        total = poly_add(total, [0] * offset + term)
    return HVector(tuple(total))


def betti_from_hvector(h: HVector) -> BettiTable:
    """Generator/syzygy degrees read off ``h(z)(1 - z)^2`` with no ghost pairs."""
    N = poly_mul(h.coeffs, [1, -2, 1])
    if N[0] != 1:
        raise InvalidHVector("numerator must have constant term 1")
    if sum(N) != 0:
        raise InvalidHVector("numerator does not vanish at z = 1")
    gens, syz = [], []
    for k, c in enumerate(N[1:], start=1):
        if c < 0:
            gens += [k] * (-c)
        elif c > 0:
            syz += [k] * c
    if len(gens) != len(syz) + 1:
        raise InvalidHVector(
            f"{len(gens)} generators and {len(syz)} syzygies do not fit a Hilbert-Burch resolution"
        )
    return BettiTable(tuple(gens), tuple(syz))


def degree_matrix_from_hvector(h: HVector) -> DegreeMatrix:
    """The unique degree matrix without zero entries whose h-vector is ``h``."""
    B = betti_from_hvector(h)
    M = degree_matrix_from_betti(B)
    if not is_degree_matrix(M):
        raise AmbiguousInversion(
            f"no zero-free degree matrix realizes {h}; candidate {M.to_list()} has a non-positive diagonal"
        )
    return DegreeMatrix(M.rows)


def is_decreasing_type(h: HVector) -> bool:
    c = h.coeffs
    return all(not (c[i] > c[i + 1]) or c[i + 1] > c[i + 2] for i in range(h.s - 1))


def degree_and_genus(h: HVector) -> tuple[int, int]:
    return h.degree, sum((i - 1) * c for i, c in enumerate(h.coeffs) if i >= 2)


def extract_uvws(h: HVector) -> UVWS:
    c = h.coeffs
    u = max(i for i, x in enumerate(c) if x == i + 1)
    v = max(i for i, x in enumerate(c) if x == u + 1)
    w = next((i for i in range(v, h.s) if c[i] - c[i + 1] != 1), None)
    return UVWS(u, v, w, h.s)
