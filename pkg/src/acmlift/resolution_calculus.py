"""Betti-table transforms: linkage, basic double links, unions, liaison addition.

Every transform works on the first and last modules of the resolution only.
Cancellation of a summand pair happens only when a spec flag says a form is a
minimal generator; equal degrees alone never trigger it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .errors import AcmLiftError, BadCancellation, DegreeTooSmall, InvalidInput, PreconditionError, SocleObstruction
from .hvector import hvector_from_betti
from .matrix_core import BettiTable


@dataclass(frozen=True)
class CILinkSpec:
    f: int
    g: int
    f_is_min_gen: bool = False
    g_is_min_gen: bool = False

    @property
    def c(self) -> int:
        return self.f + self.g

    def reverse(self) -> "CILinkSpec":
        """Spec linking the residual back to the original scheme.

        A linking form is a minimal generator of the residual exactly when
        its partner was not cancelled in the first link.
        """
        return CILinkSpec(self.f, self.g, not self.g_is_min_gen, not self.f_is_min_gen)

    def to_json(self) -> dict:
        return {
            "op": "ci_link",
            "f": self.f,
            "g": self.g,
            "f_min_gen": self.f_is_min_gen,
            "g_min_gen": self.g_is_min_gen,
        }


@dataclass(frozen=True)
class BDLSpec:
    s: int
    t_deg: int
    s_is_min_gen: bool = False

    def to_json(self) -> dict:
        return {"op": "bdl", "s": self.s, "t": self.t_deg, "s_min_gen": self.s_is_min_gen}


@dataclass(frozen=True)
class LiaisonAddSpec:
    degF: int
    degQ: int
    F_is_min_gen_of_Y: bool = False
    Q_is_min_gen_of_Z: bool = False

    def to_json(self) -> dict:
        return {
            "op": "liaison_addition",
            "degF": self.degF,
            "degQ": self.degQ,
            "F_min_gen": self.F_is_min_gen_of_Y,
            "Q_min_gen": self.Q_is_min_gen_of_Z,
        }


@dataclass(frozen=True)
class UnionSpec:
    dF: int

    def to_json(self) -> dict:
        return {"op": "union", "dF": self.dF}


def _remove_one(values: list[int], x: int, what: str) -> None:
    try:
        values.remove(x)
    except ValueError:
        raise BadCancellation(f"no {what} of degree {x} to cancel") from None


def _witness(gens: Sequence[int], degree: int, label: str) -> int:
    """1-based index of a generator of the given degree."""
    for j, d in enumerate(gens, start=1):
        if d == degree:
            return j
    raise BadCancellation(f"{label} of degree {degree} is flagged minimal but no generator has that degree")


def _plane(B: BettiTable, name: str) -> None:
    if B.ambient != 2:
        raise InvalidInput(f"{name} must be a table of plane points")


def ci_link(B: BettiTable, spec: CILinkSpec) -> BettiTable:
    """Residual of ``B`` in a complete intersection of type ``(f, g)``."""
    _plane(B, "linked table")
    for label, deg in (("f", spec.f), ("g", spec.g)):
        if deg < B.alpha:
            raise DegreeTooSmall(f"{label}={deg} is below the initial degree {B.alpha}")
    c = spec.c
    gens = [spec.f, spec.g] + [c - m for m in B.syz]
    syz = [c - d for d in B.gens]
    pool = list(B.gens)
    if spec.f_is_min_gen:
        pool.pop(_witness(pool, spec.f, "f") - 1)
        _remove_one(gens, spec.g, "generator")
        _remove_one(syz, spec.g, "syzygy")
    if spec.g_is_min_gen:
        pool.pop(_witness(pool, spec.g, "g") - 1)
        _remove_one(gens, spec.f, "generator")
        _remove_one(syz, spec.f, "syzygy")
    residual = BettiTable(tuple(gens), tuple(syz))
    try:
        hvector_from_betti(residual)
    except AcmLiftError:
        # Too few forms of degree f and g, or they share a factor.
        raise PreconditionError(
            f"no complete intersection of type ({spec.f}, {spec.g}) contains the scheme"
        ) from None
    return residual


def basic_double_link(B: BettiTable, spec: BDLSpec) -> BettiTable:
    """Table of ``D + (S intersect F)``: shift by ``t_deg`` and add the surface."""
    _plane(B, "input table")
    if spec.s < B.alpha:
        raise DegreeTooSmall(f"surface degree {spec.s} is below the initial degree {B.alpha}")
    if spec.t_deg < 1:
        raise InvalidInput("the hypersurface degree must be at least 1")
    gens = [d + spec.t_deg for d in B.gens] + [spec.s]
    syz = [m + spec.t_deg for m in B.syz] + [spec.s + spec.t_deg]
    if spec.s_is_min_gen:
        _witness(B.gens, spec.s, "surface")
        _remove_one(gens, spec.s + spec.t_deg, "generator")
        _remove_one(syz, spec.s + spec.t_deg, "syzygy")
    return BettiTable(tuple(gens), tuple(syz))


def socle_threshold(B1: BettiTable, dF: int) -> int:
    """Smallest degree a further generator of the second scheme may have.

    The Artinian ring of the first scheme modulo ``F`` has socle in degree
    ``max(m) + dF - 3``; other generators must start one degree later.
    """
    return max(B1.syz) + dF - 2


def union_two_aCM(B1: BettiTable, B2: BettiTable, dF: int) -> BettiTable:
    """Section table of a union of two aCM curves meeting in a point.

    ``F`` is a minimal generator of ``I_X2`` of degree ``dF``; the union's
    resolution is read from ``I_X1 + (F)`` and ``I_X2``.
    """
    _plane(B1, "X1")
    _plane(B2, "X2")
    if dF not in B2.gens:
        raise InvalidInput(f"dF={dF} is not a generator degree of X2 {list(B2.gens)}")
    others = list(B2.gens)
    others.remove(dF)
    threshold = socle_threshold(B1, dF)
    low = [d for d in others if d < threshold]
    if low:
        raise SocleObstruction(
            f"X2 has generators in degrees {low} at or below the socle degree {threshold - 1}"
        )
    syz = list(B2.syz) + [m + dF for m in B1.syz]
    gens = others + [d + dF for d in B1.gens]
    return BettiTable(tuple(gens), tuple(syz))


def liaison_addition(BY: BettiTable, BZ: BettiTable, spec: LiaisonAddSpec) -> BettiTable:
    """Table of ``F * I_Z + Q * I_Y`` with ``F`` in ``I_Y`` and ``Q`` in ``I_Z``."""
    _plane(BY, "Y")
    _plane(BZ, "Z")
    if spec.degF < BY.alpha:
        raise DegreeTooSmall(f"degF={spec.degF} is below the initial degree {BY.alpha} of Y")
    if spec.degQ < BZ.alpha:
        raise DegreeTooSmall(f"degQ={spec.degQ} is below the initial degree {BZ.alpha} of Z")
    both = spec.degF + spec.degQ
    gens = [d + spec.degQ for d in BY.gens] + [d + spec.degF for d in BZ.gens]
    syz = [m + spec.degQ for m in BY.syz] + [m + spec.degF for m in BZ.syz] + [both]
    if spec.F_is_min_gen_of_Y:
        _witness(BY.gens, spec.degF, "F")
    if spec.Q_is_min_gen_of_Z:
        _witness(BZ.gens, spec.degQ, "Q")
    if spec.F_is_min_gen_of_Y or spec.Q_is_min_gen_of_Z:
        _remove_one(gens, both, "generator")
        _remove_one(syz, both, "syzygy")
    return BettiTable(tuple(gens), tuple(syz))


def socle_degrees(B: BettiTable) -> tuple[int, ...]:
    n = B.ambient
    return tuple(m - n - 1 for m in B.syz)


def spec_from_json(data: dict) -> Any:
    """Parse one transform descriptor of a pipeline."""
    if not isinstance(data, dict) or "op" not in data:
        raise InvalidInput("transform descriptor needs an 'op' field")
    op = data["op"]
    try:
        if op == "ci_link":
            return CILinkSpec(int(data["f"]), int(data["g"]), bool(data.get("f_min_gen", False)),
                              bool(data.get("g_min_gen", False)))
        if op == "bdl":
            return BDLSpec(int(data["s"]), int(data["t"]), bool(data.get("s_min_gen", False)))
        if op == "liaison_addition":
            return LiaisonAddSpec(int(data["degF"]), int(data["degQ"]),
                                  bool(data.get("F_min_gen", False)), bool(data.get("Q_min_gen", False)))
        if op == "union":
            return UnionSpec(int(data["dF"]))
    except KeyError as exc:
        raise InvalidInput(f"transform '{op}' is missing field {exc.args[0]!r}") from None
    raise InvalidInput(f"unknown transform op {op!r}")


def apply(B: BettiTable, spec: Any, other: BettiTable | None = None) -> BettiTable:
    """Apply one transform; binary transforms take ``B`` as the first operand.

    For a union ``B`` is the scheme whose ideal is extended by ``F`` and
    ``other`` owns ``F``; for liaison addition ``B`` is ``Y`` and ``other``
    is ``Z``.
    """
    if isinstance(spec, CILinkSpec):
        return ci_link(B, spec)
    if isinstance(spec, BDLSpec):
        return basic_double_link(B, spec)
    if other is None:
        raise InvalidInput(f"{type(spec).__name__} needs a second table")
    if isinstance(spec, UnionSpec):
        return union_two_aCM(B, other, spec.dF)
    if isinstance(spec, LiaisonAddSpec):
        return liaison_addition(B, other, spec)
    raise InvalidInput(f"unknown transform {spec!r}")
