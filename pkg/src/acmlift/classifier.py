"""Decide, from section data alone, which kinds of non-aCM curves can exist.

Every verdict carries a reason code and a short human explanation so that
tests and corpora can assert the rule that fired, not just the bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .hvector import HVector, degree_matrix_from_hvector, is_decreasing_type
from .matrix_core import (
    BettiTable,
    DegreeMatrix,
    HomogeneousMatrix,
    as_degree_matrix,
    betti_from_degree_matrix,
    is_integral_degree_matrix,
    pad_with_degenerate_row,
)

TriState = Literal["yes", "no", "not-integral-matrix"]

CHAR0_NOTE = "characteristic zero is assumed for statements relying on the socle lifting criterion"


@dataclass(frozen=True)
class Flag:
    value: bool | str
    reason: str
    detail: str

    def to_json(self) -> dict:
        return {"value": self.value, "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    forced_acm_all: Flag
    realizable_reduced_connected_nonacm: Flag
    realizable_disconnected_nonacm: Flag
    realizable_integral_smooth_nonacm: Flag
    buchsbaum_nonacm: Flag
    integral_buchsbaum_nonacm: Flag
    assumptions: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        names = (
            "forced_acm_all",
            "realizable_reduced_connected_nonacm",
            "realizable_disconnected_nonacm",
            "realizable_integral_smooth_nonacm",
            "buchsbaum_nonacm",
            "integral_buchsbaum_nonacm",
        )
        out = {name: getattr(self, name).to_json() for name in names}
        out["assumptions"] = list(self.assumptions)
        return out


def _all_equal(M: HomogeneousMatrix, v: int) -> bool:
    return all(x == v for x in M.entries())


def _has_entry(M: HomogeneousMatrix, v: int) -> bool:
    return any(x == v for x in M.entries())


def is_three_general_points(M: HomogeneousMatrix) -> bool:
    """The all-ones 2x3 matrix."""
    return M.shape == (2, 3) and _all_equal(M, 1)


def is_plane_curve_and_line(M: HomogeneousMatrix) -> bool:
    """``[[1, b, b], [2 - b, 1, 1]]`` with ``b >= 2``.

    Reduced curves with this section are a plane curve of degree ``b + 1``
    plus a line.  When they meet, the two ideals sum to the ideal of the
    meeting point and the union is aCM.
    """
    return (
        M.shape == (2, 3)
        and M[1, 1] == M[2, 2] == M[2, 3] == 1
        and M[1, 2] >= 2
    )


def is_two_by_three_exception(M: HomogeneousMatrix) -> bool:
    """``a22 >= 3``, ``a11 != 2``, ``a21 != 2``: every integral curve is aCM."""
    return M.shape == (2, 3) and M[2, 2] >= 3 and M[1, 1] != 2 and M[2, 1] != 2


def is_wide_corner_exception(M: HomogeneousMatrix) -> bool:
    """``a11, a23 >= 3`` with ``a21, a22 != 2``: every integral curve is aCM."""
    return (
        M.shape == (2, 3)
        and M[1, 1] >= 3
        and M[2, 3] >= 3
        and M[2, 1] != 2
        and M[2, 2] != 2
    )


def _integral_track(M: DegreeMatrix) -> Flag:
    if not is_integral_degree_matrix(M):
        return Flag("not-integral-matrix", "subdiagonal-not-positive",
                    "integral curves have sections with positive subdiagonal")
    t, low = M.t, M.bottom_left()
    if t == 1:
        a = M[1, 1]
        if a == 2:
            return Flag("yes", "rational-on-quadric",
                        "a smooth rational curve on a quadric has this complete intersection section")
        if a == 1:
            return Flag("no", "collinear-section", "collinear sections force a plane curve")
        return Flag("no", "complete-intersection-no-quadric",
                    "an integral curve off a quadric with complete intersection section is itself one")
    if low >= 3:
        return Flag("no", "bottom-left-at-least-3", "all generators lift, the curve is aCM")
    if t == 2:
        if is_three_general_points(M):
            return Flag("no", "three-general-points", "an integral cubic curve is a twisted cubic")
        if is_two_by_three_exception(M):
            return Flag("no", "two-by-three-exception",
                        "a22 >= 3 with a11, a21 != 2 forces integral curves to be aCM")
        if is_wide_corner_exception(M):
            return Flag("no", "wide-corner-exception",
                        "a11, a23 >= 3 with a21, a22 != 2 forces integral curves to be aCM")
        return Flag("yes", "two-by-three-smooth", "one of the five smooth constructions applies")
    return Flag("yes", "linked-from-reflected-matrix",
                "link a curve realizing the anti-diagonal reflection of the first t-1 columns")


def classify_plane_section(M: HomogeneousMatrix) -> Verdict:
    M = as_degree_matrix(M)
    t, low = M.t, M.bottom_left()
    has_two = _has_entry(M, 2)

    if low >= 3:
        forced = Flag(True, "bottom-left-at-least-3", "every curve with this general section is aCM")
    else:
        forced = Flag(False, "bottom-left-at-most-2", "some generator need not lift")

    if t == 1:
        a = M[1, 1]
        if a == 2:
            connected = Flag(True, "rational-on-quadric", "smooth rational curve on a quadric")
            disconnected = Flag(True, "two-disjoint-plane-curves",
                                "two disjoint plane curves of the same degree")
        elif a == 1:
            connected = Flag(False, "collinear-section",
                             "a curve with collinear general section is planar or has degree <= 2")
            two_points = M[1, 2] == 2
            disconnected = Flag(two_points, "two-skew-lines" if two_points else "collinear-section",
                                "two skew lines" if two_points else
                                "a curve with collinear general section is planar or a line")
        else:
            connected = Flag(False, "bottom-left-at-least-3", "forced aCM")
            disconnected = Flag(False, "bottom-left-at-least-3", "forced aCM")
    else:
        if low >= 3:
            connected = Flag(False, "bottom-left-at-least-3", "forced aCM")
            disconnected = Flag(False, "bottom-left-at-least-3", "forced aCM")
        elif is_three_general_points(M):
            connected = Flag(False, "three-general-points",
                             "connected reduced cubics with this section are aCM")
            disconnected = Flag(True, "three-general-points",
                                "three skew lines, or a line and a conic")
        elif is_plane_curve_and_line(M):
            connected = Flag(False, "plane-curve-and-line",
                             "a plane curve and a line meeting it form an aCM curve")
            disconnected = Flag(True, "plane-curve-and-line", "a plane curve and a disjoint line")
        else:
            connected = Flag(True, "double-link-chain",
                             "union of complete intersections through a point, then basic double links")
            disconnected = Flag(True, "disjoint-union", "disjoint union of two aCM curves")

    if has_two:
        buch = Flag(True, "entry-equal-2", "a curve in the linkage class of two skew lines")
    else:
        buch = Flag(False, "no-entry-equal-2", "the socle contains no degree a Buchsbaum module can use")

    integral = _integral_track(M)
    if integral.value == "not-integral-matrix":
        int_buch = integral
    elif t == 1:
        ok = M[1, 1] == 2
        int_buch = Flag("yes" if ok else "no", "rational-on-quadric" if ok else "no-entry-equal-2",
                        "rational curve on a quadric" if ok else "no Buchsbaum integral curve")
    elif has_two:
        int_buch = Flag("yes", "entry-equal-2", "integral curve in the linkage class of two skew lines")
    else:
        int_buch = Flag("no", "no-entry-equal-2", "no Buchsbaum integral curve")

    notes = []
    if not has_two:
        notes.append(CHAR0_NOTE)
    return Verdict(forced, connected, disconnected, integral, buch, int_buch, notes)


@dataclass(frozen=True)
class VerdictPn:
    forced_acm: Flag
    buchsbaum_possible: Flag

    def to_json(self) -> dict:
        return {"forced_acm": self.forced_acm.to_json(),
                "buchsbaum_possible": self.buchsbaum_possible.to_json()}


def classify_lifting_matrix(L: HomogeneousMatrix, n: int) -> VerdictPn:
    if n < 2:
        raise ValueError("n must be at least 2")
    low = L.bottom_left()
    forced = Flag(low >= n + 1, "bottom-left-vs-n+1",
                  f"a_(t,1) = {low} {'>=' if low >= n + 1 else '<'} {n + 1}")
    has_n = _has_entry(L, n)
    exact = "necessary and sufficient" if n == 2 else "necessary only"
    buch = Flag(has_n, "entry-equal-n", f"an entry equal to {n} is {exact}")
    return VerdictPn(forced, buch)


@dataclass(frozen=True)
class HVerdict:
    realizable_nonacm_reduced: Flag
    realizable_connected: Flag
    realizable_integral_smooth_nonacm: Flag
    canonical_matrix: DegreeMatrix

    def to_json(self) -> dict:
        return {
            "realizable_nonacm_reduced": self.realizable_nonacm_reduced.to_json(),
            "realizable_connected": self.realizable_connected.to_json(),
            "realizable_integral_smooth_nonacm": self.realizable_integral_smooth_nonacm.to_json(),
            "canonical_matrix": self.canonical_matrix.to_json(),
        }


def classify_hvector(h: HVector) -> HVerdict:
    M = degree_matrix_from_hvector(h)
    if M.t == 1 and M[1, 1] == 1:
        two = M[1, 2] == 2
        reduced = Flag(two, "two-skew-lines" if two else "collinear-section",
                       "two skew lines" if two else "collinear sections force a plane curve or a line")
        connected = Flag(False, "collinear-section", "a connected curve here is planar")
    elif M.shape == (2, 3) and _all_equal(M, 1):
        reduced = Flag(True, "line-plus-conic", "disjoint union of a plane conic and a line")
        connected = Flag(False, "three-general-points", "connected cubics with this section are aCM")
    elif is_plane_curve_and_line(M):
        reduced = Flag(True, "plane-curve-and-line", "a plane curve and a disjoint line")
        connected = Flag(False, "plane-curve-and-line",
                         "every section has a collinear subset of length degree - 1, forcing a plane curve and a line")
    else:
        reduced = Flag(True, "canonical-matrix-or-padding", "double-link chain on the canonical or padded matrix")
        connected = Flag(True, "canonical-matrix-or-padding", "double-link chain on the canonical or padded matrix")

    if not is_decreasing_type(h):
        integral = Flag("no", "not-decreasing-type", "sections of integral curves have decreasing type")
    else:
        target = M
        if M.bottom_left() >= 3:
            padded = pad_with_degenerate_row(M)
            if not is_integral_degree_matrix(padded):
                integral = Flag("no", "complete-intersection-no-quadric",
                                "complete intersection of two forms of degree at least 3")
                return HVerdict(reduced, connected, integral, M)
            target = padded
        inner = _integral_track(as_degree_matrix(target))
        value = "no" if inner.value == "not-integral-matrix" else inner.value
        integral = Flag(value, inner.reason, inner.detail)
    return HVerdict(reduced, connected, integral, M)


@dataclass(frozen=True)
class GeneratorLift:
    column: int
    degree: int
    must_lift: bool
    reason: str

    def to_json(self) -> dict:
        return {"column": self.column, "degree": self.degree, "must_lift": self.must_lift,
                "reason": self.reason}


def generator_lifting(M: HomogeneousMatrix, buchsbaum: bool = False) -> list[GeneratorLift]:
    """Which minimal generators of the section ideal are forced to lift."""
    M = as_degree_matrix(M)
    B: BettiTable = betti_from_degree_matrix(M)
    t, cols = M.t, M.ncols
    report = []
    if buchsbaum:
        lifts = [all(M[i, j] != 2 for i in range(1, t + 1)) for j in range(1, cols + 1)]
        for j in range(1, cols + 1):
            if M[1, j] < 2:
                for k in range(j):
                    lifts[k] = True
        for j in range(1, cols + 1):
            reason = "column-without-2" if lifts[j - 1] else "column-meets-2"
            report.append(GeneratorLift(j, B.gens[j - 1], lifts[j - 1], reason))
        return report
    first = next((j for j in range(1, cols + 1) if M[t, j] >= 3), None)
    for j in range(1, cols + 1):
        forced = first is not None and j >= first
        reason = f"a_(t,{first}) >= 3" if forced else "not-forced"
        report.append(GeneratorLift(j, B.gens[j - 1], forced, reason))
    return report
