"""Explicit curve recipes realizing a degree matrix, and their replay.

A recipe is a base curve with a known general plane section, followed by
links, basic double links and liaison additions.  Replaying a recipe pushes
the section table, the deficiency module, the degree and the list of
complete-intersection components through every step, so a recipe can be
checked against its target without trusting the synthesizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Iterator, Optional, Union

from .buchsbaum import delta
from .classifier import classify_plane_section, generator_lifting, is_three_general_points
from .errors import AcmLiftError, InvalidInput, NotRealizable, NoUnionPivot, ReplayError
from .hvector import HVector, hvector_from_degree_matrix, poly_mul
from .matrix_core import (
    BettiTable,
    DegreeMatrix,
    HomogeneousMatrix,
    as_degree_matrix,
    betti_from_degree_matrix,
    complete_matrix,
    degree_matrix_from_betti,
    is_degree_matrix,
    transpose_antidiagonal,
)
from .resolution_calculus import (
    BDLSpec,
    CILinkSpec,
    LiaisonAddSpec,
    UnionSpec,
    basic_double_link,
    ci_link,
    liaison_addition,
    spec_from_json,
    union_two_aCM,
)

Spec = Union[CILinkSpec, BDLSpec, LiaisonAddSpec, UnionSpec]


# ---------------------------------------------------------------------------
# Hilbert functions used to describe deficiency modules exactly


def _hilbert_function(degrees: tuple[int, ...], nvars: int, top: int) -> list[int]:
    """Hilbert function of a complete intersection of the given degrees, up to ``top``."""
    p = [1]
    for d in degrees:
        p = poly_mul(p, [1] + [0] * (d - 1) + [-1])
    p = (p + [0] * (top + 1))[: top + 1]
    for _ in range(nvars):
        acc = 0
        for i, c in enumerate(p):
            acc += c
            p[i] = acc
    return p


def _ci_union_module(first: tuple[int, int], second: tuple[int, int], through_point: bool) -> dict[int, int]:
    """Module of two complete-intersection curves, disjoint or meeting in one point.

    Disjoint: ``S/(F1, F2, G1, G2)``.  Through a point ``P``: ``I_P/(F1, F2, G1, G2)``,
    whose Hilbert function comes from ``(I : G2)``, the ideal of the residual
    of ``P`` in the complete intersection of the other three forms.
    """
    e = tuple(first) + tuple(second)
    top = sum(e) + 2
    if not through_point:
        H = _hilbert_function(e, 4, top)
        return {d: v for d, v in enumerate(H) if v}
    three, f = e[:3], e[3]
    HI = _hilbert_function(three, 4, top)
    socle = sum(three) - 3
    HZ = [h - (1 if d >= socle else 0) for d, h in enumerate(HI)]
    dims = {}
    for d in range(top + 1):
        HJ = HI[d] - (HZ[d - f] if d >= f else 0)
        if HJ - 1:
            dims[d] = HJ - 1
    return dims


def _quadric_module(p: int, q: int) -> dict[int, int]:
    """Module of a curve of bidegree ``(p, q)`` on a smooth quadric."""

    def h0(k: int) -> int:
        return k + 1 if k >= 0 else 0

    def h1(k: int) -> int:
        return -k - 1 if k <= -2 else 0

    dims = {}
    for n in range(max(p, q) + 1):
        a, b = n - p, n - q
        v = h0(a) * h1(b) + h1(a) * h0(b)
        if v:
            dims[n] = v
    return dims


def _maximal_rank_rational_module(d: int) -> dict[int, int]:
    dims = {}
    for n in range(d + 1):
        v = n * d + 1 - comb(n + 3, 3)
        if v > 0:
            dims[n] = v
    return dims


# ---------------------------------------------------------------------------
# Deficiency module bookkeeping


def _format_dims(dims: dict[int, int]) -> str:
    if not dims:
        return "0"
    parts = []
    for deg, v in sorted(dims.items()):
        power = "" if v == 1 else f"^{v}"
        parts.append(f"k{power}({-deg})")
    return " + ".join(parts)


@dataclass(frozen=True)
class Deficiency:
    """Deficiency module data; ``dims`` is exact when known, else only ``alpha``/bounds."""

    dims: Optional[tuple[tuple[int, int], ...]]
    alpha: Optional[int]
    alpha_plus_bound: Optional[int]
    presentation: str

    @classmethod
    def exact(cls, dims: dict[int, int], presentation: Optional[str] = None) -> "Deficiency":
        items = tuple(sorted((d, v) for d, v in dims.items() if v))
        alpha = items[0][0] if items else None
        top = items[-1][0] if items else None
        return cls(items, alpha, top, presentation or _format_dims(dict(items)))

    @property
    def dim(self) -> Optional[int]:
        return None if self.dims is None else sum(v for _, v in self.dims)

    @property
    def alpha_plus(self) -> Optional[int]:
        return None if self.dims is None else (self.dims[-1][0] if self.dims else None)

    def per_degree(self) -> Optional[dict[int, int]]:
        return None if self.dims is None else dict(self.dims)

    def is_concentrated(self) -> bool:
        return self.dims is not None and len(self.dims) == 1

    def shift(self, k: int) -> "Deficiency":
        if self.dims is not None:
            return Deficiency.exact({d + k: v for d, v in self.dims})
        return Deficiency(
            None,
            None if self.alpha is None else self.alpha + k,
            None if self.alpha_plus_bound is None else self.alpha_plus_bound + k,
            f"({self.presentation})({-k})",
        )

    def dual(self, c: int) -> "Deficiency":
        """Module after a link by a complete intersection with ``f + g = c``."""
        if self.dims is not None:
            return Deficiency.exact({c - 4 - d: v for d, v in self.dims})
        return Deficiency(
            None,
            None,
            None if self.alpha is None else c - 4 - self.alpha,
            f"dual of ({self.presentation}) twisted by {c - 4}",
        )

    def direct_sum(self, other: "Deficiency") -> "Deficiency":
        if self.dims is not None and other.dims is not None:
            merged: dict[int, int] = {}
            for d, v in self.dims + other.dims:
                merged[d] = merged.get(d, 0) + v
            return Deficiency.exact(merged)
        alphas = [x.alpha for x in (self, other)]
        bounds = [x.alpha_plus_bound for x in (self, other)]
        return Deficiency(
            None,
            min(alphas) if None not in alphas else None,
            max(bounds) if None not in bounds else None,
            f"({self.presentation}) + ({other.presentation})",
        )

    def to_json(self) -> dict:
        return {
            "dims": None if self.dims is None else {str(d): v for d, v in self.dims},
            "dim": self.dim,
            "alpha": self.alpha,
            "alpha_plus": self.alpha_plus,
            "alpha_plus_bound": self.alpha_plus_bound,
            "presentation": self.presentation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Deficiency":
        dims = data.get("dims")
        if dims is not None:
            items = tuple(sorted((int(d), int(v)) for d, v in dims.items()))
            return cls(items, data.get("alpha"), data.get("alpha_plus_bound"), data.get("presentation", ""))
        return cls(None, data.get("alpha"), data.get("alpha_plus_bound"), data.get("presentation", ""))


# ---------------------------------------------------------------------------
# Curve state, base curves, steps and recipes

Components = Optional[tuple[tuple[int, int], ...]]


@dataclass(frozen=True)
class CurveState:
    section: BettiTable
    deficiency: Deficiency
    degree: int
    components: Components
    max_gen: Optional[int]


def _ci_pair(p: int, q: int) -> tuple[int, int]:
    return (min(p, q), max(p, q))


def _ci_table(p: int, q: int) -> BettiTable:
    lo, hi = _ci_pair(p, q)
    return betti_from_degree_matrix(DegreeMatrix(((lo, hi),)))


BASE_KINDS = (
    "two-skew-lines",
    "rational-on-quadric",
    "generic-rational",
    "skew-lines-on-quadric",
    "union-of-two-ci",
    "union-of-two-acm",
    "linked-point-complement",
)


@dataclass(frozen=True)
class BaseCurve:
    kind: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": dict(sorted(self.params.items()))}

    @classmethod
    def from_json(cls, data: dict) -> "BaseCurve":
        if not isinstance(data, dict) or "kind" not in data:
            raise InvalidInput("base curve JSON needs a 'kind' field")
        if data["kind"] not in BASE_KINDS:
            raise InvalidInput(f"unknown base kind {data['kind']!r}")
        return cls(data["kind"], dict(data.get("params", {})))


def _param(base: BaseCurve, key: str) -> Any:
    try:
        return base.params[key]
    except KeyError:
        raise InvalidInput(f"base '{base.kind}' needs parameter {key!r}") from None


def base_state(base: BaseCurve) -> CurveState:
    """Section table and invariants of a base curve."""
    kind = base.kind
    if kind == "two-skew-lines":
        return CurveState(BettiTable((2, 1), (3,)), Deficiency.exact({0: 1}), 2, ((1, 1), (1, 1)), 2)
    if kind == "rational-on-quadric":
        a = int(_param(base, "a"))
        if a < 2:
            raise InvalidInput("a rational curve on a quadric with section CI(2, a) needs a >= 2")
        module = Deficiency.exact(_quadric_module(1, 2 * a - 1))
        return CurveState(_ci_table(2, a), module, 2 * a, None, None)
    if kind == "generic-rational":
        d = int(_param(base, "d"))
        if d < 1:
            raise InvalidInput("degree must be positive")
        table = betti_from_degree_matrix(generic_points_matrix(d))
        return CurveState(table, Deficiency.exact(_maximal_rank_rational_module(d)), d, None, None)
    if kind == "skew-lines-on-quadric":
        k = int(_param(base, "count"))
        if k < 3 or k % 2 == 0:
            raise InvalidInput("count must be odd and at least 3")
        m = (k - 1) // 2
        table = betti_from_degree_matrix(DegreeMatrix(((1, 1, m), (1, 1, m))))
        return CurveState(table, Deficiency.exact(_quadric_module(k, 0)), k, ((1, 1),) * k, None)
    if kind in ("union-of-two-ci", "union-of-two-acm"):
        through = bool(_param(base, "through_common_point"))
        dF = int(_param(base, "dF"))
        if kind == "union-of-two-ci":
            first = _ci_pair(*map(int, _param(base, "first")))
            second = _ci_pair(*map(int, _param(base, "second")))
            B1, B2 = _ci_table(*first), _ci_table(*second)
            module = Deficiency.exact(_ci_union_module(first, second, through))
            comps: Components = (first, second)
            max_gen = first[1] + second[1] if through else None
        else:
            N = as_degree_matrix(HomogeneousMatrix(tuple(map(tuple, _param(base, "first")))))
            L = as_degree_matrix(HomogeneousMatrix(tuple(map(tuple, _param(base, "second")))))
            B1, B2 = betti_from_degree_matrix(N), betti_from_degree_matrix(L)
            module = Deficiency(None, 1 if through else 0, None,
                                "I_P/(I_C1 + I_C2)" if through else "S/(I_C1 + I_C2)")
            comps, max_gen = None, None
        table = union_two_aCM(B1, B2, dF)
        degree = _section_degree(B1) + _section_degree(B2)
        return CurveState(table, module, degree, comps, max_gen)
    if kind == "linked-point-complement":
        a11, a12, a22, a23 = (int(_param(base, key)) for key in ("a11", "a12", "a22", "a23"))
        first, second = _ci_pair(a22, a23), _ci_pair(a11, a12 + a23)
        table = union_two_aCM(_ci_table(*first), _ci_table(*second), a11)
        module = Deficiency(None, a11 + a22 + a23 - 3, a12 + a23 - 1, "I_X/(I_C1 + I_C2)")
        return CurveState(table, module, a11 * (a12 + a23) + a22 * a23, (first, second), a12 + a23 + 1)
    raise InvalidInput(f"unknown base kind {kind!r}")


def _section_degree(B: BettiTable) -> int:
    return hvector_from_degree_matrix(degree_matrix_from_betti(B)).degree


@dataclass(frozen=True)
class Step:
    spec: Spec
    partner: Optional["CurveRecipe"] = None
    note: str = ""

    def to_json(self) -> dict:
        out: dict = {"transform": self.spec.to_json()}
        if self.partner is not None:
            out["partner"] = self.partner.to_json()
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Step":
        if not isinstance(data, dict) or "transform" not in data:
            raise InvalidInput("step JSON needs a 'transform' field")
        partner = data.get("partner")
        return cls(
            spec_from_json(data["transform"]),
            None if partner is None else CurveRecipe.from_json(partner),
            data.get("note", ""),
        )


def advance(state: CurveState, step: Step, partner: Optional[CurveState] = None) -> CurveState:
    """Push one step through the section table and the curve invariants."""
    spec = step.spec
    if isinstance(spec, CILinkSpec):
        return CurveState(
            ci_link(state.section, spec),
            state.deficiency.dual(spec.c),
            spec.f * spec.g - state.degree,
            None,
            None,
        )
    if isinstance(spec, BDLSpec):
        comps = None if state.components is None else state.components + (_ci_pair(spec.s, spec.t_deg),)
        max_gen = None if state.max_gen is None else max(state.max_gen + spec.t_deg, spec.s)
        return CurveState(
            basic_double_link(state.section, spec),
            state.deficiency.shift(spec.t_deg),
            state.degree + spec.s * spec.t_deg,
            comps,
            max_gen,
        )
    if partner is None:
        raise InvalidInput(f"{type(spec).__name__} needs a partner curve")
    if isinstance(spec, LiaisonAddSpec):
        comps = None
        if state.components is not None and partner.components is not None:
            comps = state.components + partner.components + (_ci_pair(spec.degF, spec.degQ),)
        return CurveState(
            liaison_addition(state.section, partner.section, spec),
            state.deficiency.shift(spec.degQ).direct_sum(partner.deficiency.shift(spec.degF)),
            state.degree + partner.degree + spec.degF * spec.degQ,
            comps,
            None,
        )
    if isinstance(spec, UnionSpec):
        comps = None
        if state.components is not None and partner.components is not None:
            comps = state.components + partner.components
        return CurveState(
            union_two_aCM(state.section, partner.section, spec.dF),
            Deficiency(None, 1, None, "I_P/(I_C1 + I_C2)"),
            state.degree + partner.degree,
            comps,
            None,
        )
    raise InvalidInput(f"unknown transform {spec!r}")


PROPERTY_NAMES = ("reduced", "connected", "smooth", "integral", "buchsbaum")


@dataclass(frozen=True)
class CurveRecipe:
    """A base curve plus transforms; predictions are those of the synthesizer.

    ``properties`` lists what the construction guarantees; ``False`` means
    "not asserted", never "known to fail".
    """

    target: DegreeMatrix
    goal: str
    base: BaseCurve
    steps: tuple[Step, ...]
    predicted_section: BettiTable
    predicted_deficiency: Deficiency
    max_gen_degree: Optional[int]
    degree: int
    components: Components
    properties: dict = field(default_factory=dict)
    pivot: Optional[dict] = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "target": self.target.to_list(),
            "goal": self.goal,
            "pivot": self.pivot,
            "base": self.base.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "predicted_section": self.predicted_section.to_json(),
            "predicted_deficiency": self.predicted_deficiency.to_json(),
            "max_gen_degree": self.max_gen_degree,
            "degree": self.degree,
            "components": None if self.components is None else [list(c) for c in self.components],
            "properties": {k: bool(self.properties.get(k, False)) for k in PROPERTY_NAMES},
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CurveRecipe":
        if not isinstance(data, dict):
            raise InvalidInput("recipe JSON must be an object")
        try:
            comps = data.get("components")
            return cls(
                target=as_degree_matrix(HomogeneousMatrix(tuple(map(tuple, data["target"])))),
                goal=str(data.get("goal", "")),
                base=BaseCurve.from_json(data["base"]),
                steps=tuple(Step.from_json(s) for s in data.get("steps", [])),
                predicted_section=BettiTable.from_json(data["predicted_section"]),
                predicted_deficiency=Deficiency.from_json(data["predicted_deficiency"]),
                max_gen_degree=data.get("max_gen_degree"),
                degree=int(data["degree"]),
                components=None if comps is None else tuple(tuple(c) for c in comps),
                properties=dict(data.get("properties", {})),
                pivot=data.get("pivot"),
                notes=tuple(data.get("notes", [])),
            )
        except KeyError as exc:
            raise InvalidInput(f"recipe JSON is missing field {exc.args[0]!r}") from None


def replay(recipe: CurveRecipe) -> CurveState:
    """Recompute every invariant from the base and the steps."""
    try:
        state = base_state(recipe.base)
    except AcmLiftError as exc:
        raise ReplayError(f"base curve: {exc}", 0, exc) from exc
    for index, step in enumerate(recipe.steps, start=1):
        partner = None
        if step.partner is not None:
            partner = replay(step.partner)
        try:
            state = advance(state, step, partner)
        except AcmLiftError as exc:
            raise ReplayError(str(exc), index, exc) from exc
    return state


@dataclass(frozen=True)
class VerificationReport:
    final_section: BettiTable
    final_matrix: Optional[HomogeneousMatrix]
    matches_target: bool
    matches_prediction: bool
    deficiency: Deficiency
    deficiency_consistent: bool
    degree: int
    degree_matches_hvector: bool
    components_degree_ok: Optional[bool]
    max_gen_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        return (
            self.matches_target
            and self.matches_prediction
            and self.deficiency_consistent
            and self.degree_matches_hvector
            and self.components_degree_ok is not False
            and self.max_gen_ok is not False
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "final_section": self.final_section.to_json(),
            "final_matrix": None if self.final_matrix is None else self.final_matrix.to_list(),
            "matches_target": self.matches_target,
            "matches_prediction": self.matches_prediction,
            "deficiency": self.deficiency.to_json(),
            "deficiency_consistent": self.deficiency_consistent,
            "degree": self.degree,
            "degree_matches_hvector": self.degree_matches_hvector,
            "components_degree_ok": self.components_degree_ok,
            "max_gen_ok": self.max_gen_ok,
        }


def verify_recipe(recipe: CurveRecipe, target: Optional[HomogeneousMatrix] = None) -> VerificationReport:
    """Replay ``recipe`` and compare against ``target`` and the recipe's own predictions."""
    target = as_degree_matrix(recipe.target if target is None else target)
    state = replay(recipe)
    final = degree_matrix_from_betti(state.section)
    matches_target = final == HomogeneousMatrix(target.rows)
    components_ok = None
    if state.components is not None:
        components_ok = sum(p * q for p, q in state.components) == state.degree
    max_gen_ok = None
    if recipe.max_gen_degree is not None:
        top = state.section.gens[0]
        max_gen_ok = top <= recipe.max_gen_degree
        if recipe.properties.get("buchsbaum"):
            max_gen_ok = max_gen_ok and recipe.max_gen_degree <= top + 1
    return VerificationReport(
        final_section=state.section,
        final_matrix=final,
        matches_target=matches_target,
        matches_prediction=state.section == recipe.predicted_section,
        deficiency=state.deficiency,
        deficiency_consistent=state.deficiency == recipe.predicted_deficiency,
        degree=state.degree,
        degree_matches_hvector=state.degree == hvector_from_degree_matrix(target).degree,
        components_degree_ok=components_ok,
        max_gen_ok=max_gen_ok,
    )


# ---------------------------------------------------------------------------
# Helpers shared by the synthesizers


@dataclass(frozen=True)
class _Plan:
    """A recipe under construction: base, steps and the resulting state."""

    base: BaseCurve
    steps: tuple[Step, ...]
    state: CurveState

    def then(self, step: Step) -> "_Plan":
        partner = None if step.partner is None else replay(step.partner)
        return _Plan(self.base, self.steps + (step,), advance(self.state, step, partner))


def _start(base: BaseCurve) -> _Plan:
    return _Plan(base, (), base_state(base))


def _finish(plan: _Plan, target: DegreeMatrix, goal: str, properties: dict,
            pivot: Optional[dict] = None, notes: tuple[str, ...] = (),
            max_gen: Optional[int] = None) -> CurveRecipe:
    if degree_matrix_from_betti(plan.state.section) != HomogeneousMatrix(target.rows):
        raise NotRealizable(
            f"construction produced {degree_matrix_from_betti(plan.state.section).to_list()} "
            f"instead of {target.to_list()}",
            "construction-mismatch",
        )
    return CurveRecipe(
        target=target,
        goal=goal,
        base=plan.base,
        steps=plan.steps,
        predicted_section=plan.state.section,
        predicted_deficiency=plan.state.deficiency,
        max_gen_degree=plan.state.max_gen if max_gen is None else max_gen,
        degree=plan.state.degree,
        components=plan.state.components,
        properties={k: bool(properties.get(k, False)) for k in PROPERTY_NAMES},
        pivot=pivot,
        notes=notes,
    )


def _table(M: HomogeneousMatrix) -> BettiTable:
    return betti_from_degree_matrix(as_degree_matrix(M))


def _generator_degree(M: DegreeMatrix, j: int) -> int:
    """``d_j`` of the section with degree matrix ``M`` (1-based, unsorted)."""
    t = M.t
    if j == t + 1:
        return M.trace()
    return M.trace() - M[j, j] + M[j, t + 1]


def _bdl_insertion(big: DegreeMatrix, i0: int, j0: int) -> Optional[BDLSpec]:
    """Basic double link taking ``big`` minus row ``i0``, column ``j0`` back to ``big``.

    The surface degree is the generator degree ``d_(j0)`` of ``big`` and the
    second form has degree ``a_(i0, j0)``.  Returns ``None`` when the step is
    not available.
    """
    small = big.delete(i0, j0)
    if not is_degree_matrix(small):
        return None
    spec = BDLSpec(_generator_degree(big, j0), big[i0, j0])
    try:
        out = basic_double_link(_table(small), spec)
    except AcmLiftError:
        return None
    return spec if out == _table(big) else None


def _as_matrix(M: HomogeneousMatrix | list) -> DegreeMatrix:
    if isinstance(M, HomogeneousMatrix):
        return as_degree_matrix(M)
    return as_degree_matrix(HomogeneousMatrix(tuple(map(tuple, M))))


# ---------------------------------------------------------------------------
# Generic points


def generic_hvector(d: int) -> HVector:
    """h-vector ``1, 2, ..., n, s`` of ``d`` general points in the plane."""
    if d < 1:
        raise InvalidInput("number of points must be positive")
    n = max(i for i in range(d + 1) if comb(i + 1, 2) <= d)
    s = d - comb(n + 1, 2)
    return HVector(tuple(range(1, n + 1)) + ((s,) if s else ()))


def generic_points_matrix(d: int) -> DegreeMatrix:
    """Degree matrix of ``d`` general points, read off ``n`` and ``s`` directly."""
    if d < 1:
        raise InvalidInput("number of points must be positive")
    n = max(i for i in range(d + 1) if comb(i + 1, 2) <= d)
    s = d - comb(n + 1, 2)
    if s <= n // 2:
        rows = [(2,) * (n + 1 - s)] * s + [(1,) * (n + 1 - s)] * (n - 2 * s)
    else:
        rows = [(1,) * (2 * s - n) + (2,) * (n + 1 - s)] * s
    return DegreeMatrix(tuple(rows))


# ---------------------------------------------------------------------------
# Non-aCM curves: unions through a point followed by basic double links


def _block_ok(B: HomogeneousMatrix) -> bool:
    """A 2x3 block whose union of complete intersections is non-aCM.

    With ``a11 = a22 = a23 = 1`` three of the four forms are linear, they cut
    out the common point, and the union is aCM.
    """
    return (
        B.shape == (2, 3)
        and is_degree_matrix(B)
        and B.bottom_left() <= 2
        and not (B[1, 1] == B[2, 2] == B[2, 3] == 1)
    )


def _union_ci_base(B: HomogeneousMatrix, nice: bool) -> BaseCurve:
    a11, a12, a22, a23 = B[1, 1], B[1, 2], B[2, 2], B[2, 3]
    if nice:
        return BaseCurve("linked-point-complement", {"a11": a11, "a12": a12, "a22": a22, "a23": a23})
    return BaseCurve("union-of-two-ci", {
        "first": [a22, a23],
        "second": [a11, a12 + a23],
        "dF": a11,
        "through_common_point": True,
    })


def _chain_from_pivot(M: DegreeMatrix, k: int, l: int) -> list[tuple[int, int]]:
    """Rows and columns of ``M`` added, in order, after the 2x3 block at ``(k, l)``."""
    t = M.t
    adds = [(k - 1 - p, l - p) for p in range(1, l)]
    adds += [(k - l - 1 - q, l + 3 + q) for q in range(k - l - 1)]
    adds += [(k + 1 + r, k + 2 + r) for r in range(t - k)]
    return adds


def _run_chain(M: DegreeMatrix, rows: list[int], cols: list[int],
               adds: list[tuple[int, int]]) -> Optional[list[Step]]:
    steps = []
    rows, cols = list(rows), list(cols)
    for i, j in adds:
        rows2, cols2 = sorted(rows + [i]), sorted(cols + [j])
        big = M.submatrix(rows2, cols2)
        if not is_degree_matrix(big):
            return None
        spec = _bdl_insertion(as_degree_matrix(big), rows2.index(i) + 1, cols2.index(j) + 1)
        if spec is None:
            return None
        steps.append(Step(spec, note=f"add row {i} and column {j}"))
        rows, cols = rows2, cols2
    return steps


def _pivots(M: DegreeMatrix) -> Iterator[tuple[int, int]]:
    t = M.t
    for k in range(2, t + 1):
        for l in range(1, min(k - 1, t - 1) + 1):
            if M[k, l] <= 2 and M[k - 1, l] > 0 and M[k, l + 1] > 0:
                yield k, l


def _search_chain(M: DegreeMatrix) -> Optional[tuple[tuple[int, ...], tuple[int, ...], list[tuple[int, int]]]]:
    """Any sequence of row/column deletions down to a usable 2x3 block."""

    @lru_cache(maxsize=None)
    def go(rows: tuple[int, ...], cols: tuple[int, ...]):
        sub = M.submatrix(rows, cols)
        if len(rows) == 2:
            return (rows, cols, ()) if _block_ok(sub) else None
        big = as_degree_matrix(sub)
        for a, i in enumerate(rows, start=1):
            for b, j in enumerate(cols, start=1):
                rest_r = tuple(x for x in rows if x != i)
                rest_c = tuple(x for x in cols if x != j)
                if not is_degree_matrix(M.submatrix(rest_r, rest_c)):
                    continue
                if _bdl_insertion(big, a, b) is None:
                    continue
                found = go(rest_r, rest_c)
                if found is not None:
                    return found[0], found[1], found[2] + ((i, j),)
        return None

    found = go(tuple(range(1, M.t + 1)), tuple(range(1, M.ncols + 1)))
    if found is None:
        return None
    return found[0], found[1], list(found[2])


def _check_non_acm_input(M: DegreeMatrix) -> None:
    if M.bottom_left() >= 3:
        raise NotRealizable("a_(t,1) >= 3: every curve with this section is aCM", "bottom-left-at-least-3")
    if is_three_general_points(M):
        raise NotRealizable("connected reduced curves with three general points as section are aCM",
                            "three-general-points")


def _union_candidates(M: DegreeMatrix, connected: bool) -> Iterator[tuple[int, BaseCurve]]:
    t = M.t
    for r in range(2, t + 1):
        base = _union_base(M, r, connected)
        if base is not None:
            yield r, base


def _union_base(M: DegreeMatrix, r: int, connected: bool) -> Optional[BaseCurve]:
    t = M.t
    if not 2 <= r <= t or M[r, r - 1] > 2:
        return None
    a = M[1, 1] + M[r, t + 1] + sum(M[i, i] for i in range(r, t + 1)) - M[r, 1]
    first_row = [M[1, j] for j in range(1, r)] + [a]
    first_col = [M[i, 1] for i in range(1, r)]
    try:
        L = complete_matrix(first_row, first_col)
    except AcmLiftError:
        return None
    if not is_degree_matrix(L) or not a > M[1, r - 1]:
        return None
    N = M.submatrix(range(r, t + 1), range(r, t + 2))
    if not is_degree_matrix(N):
        return None
    if L.shape == (1, 2) and N.shape == (1, 2):
        base = BaseCurve("union-of-two-ci", {
            "first": list(N.rows[0]), "second": list(L.rows[0]),
            "dF": L.trace(), "through_common_point": connected,
        })
    else:
        base = BaseCurve("union-of-two-acm", {
            "first": N.to_list(), "second": L.to_list(),
            "dF": L.trace(), "through_common_point": connected,
        })
    try:
        state = base_state(base)
    except AcmLiftError:
        return None
    if state.deficiency.dims is not None and state.deficiency.dim == 0:
        return None
    return base if state.section == _table(M) else None


def _t1_non_acm(M: DegreeMatrix) -> CurveRecipe:
    a, b = M[1, 1], M[1, 2]
    if a == 2:
        plan = _start(BaseCurve("rational-on-quadric", {"a": b}))
        props = {"reduced": True, "connected": True, "smooth": True, "integral": True,
                 "buchsbaum": b == 2}
        return _finish(plan, M, "nonacm", props, {"rule": "rational-on-quadric"})
    if (a, b) == (1, 2):
        plan = _start(BaseCurve("two-skew-lines"))
        props = {"reduced": True, "smooth": True, "buchsbaum": True}
        return _finish(plan, M, "nonacm", props, {"rule": "two-skew-lines"})
    raise NotRealizable("a reduced curve with collinear general section of degree >= 3 is planar",
                        "collinear-section")


def synthesize_non_acm(M: HomogeneousMatrix | list, mode: str = "bdl-chain",
                       pivot: Optional[Union[int, tuple[int, int]]] = None,
                       connected: bool = True) -> CurveRecipe:
    """A reduced non-aCM curve with section degree matrix ``M``.

    ``bdl-chain`` starts from a union of two complete intersections on a 2x3
    block and adds rows and columns by basic double links; ``nice`` uses the
    curve built from a point and its linked complement as the 2x3 base;
    ``union`` takes two aCM curves through a common point.
    """
    recipes = _non_acm_recipes(_as_matrix(M), mode, pivot, connected, first_only=True)
    return recipes[0]


def enumerate_non_acm_recipes(M: HomogeneousMatrix | list, mode: str = "bdl-chain",
                              connected: bool = True) -> list[CurveRecipe]:
    """One recipe per qualifying pivot, in lexicographic pivot order."""
    return _non_acm_recipes(_as_matrix(M), mode, None, connected, first_only=False)


def _non_acm_recipes(M: DegreeMatrix, mode: str, pivot, connected: bool, first_only: bool) -> list[CurveRecipe]:
    if mode not in ("bdl-chain", "union", "nice"):
        raise InvalidInput(f"unknown mode {mode!r}")
    _check_non_acm_input(M)
    if mode == "union":
        return _union_recipes(M, pivot, connected, first_only)
    if M.t == 1:
        if mode == "nice":
            raise NotRealizable("the nice construction needs a 2x3 block", "no-2x3-block")
        return [_t1_non_acm(M)]
    nice = mode == "nice"
    props = {"reduced": True, "connected": True}
    out: list[CurveRecipe] = []
    candidates = [pivot] if pivot is not None else list(_pivots(M))
    for k, l in candidates:
        if not (2 <= k <= M.t and 1 <= l <= min(k - 1, M.t - 1)):
            continue
        block = M.submatrix([k - 1, k], [l, l + 1, l + 2])
        if not _block_ok(block):
            continue
        steps = _run_chain(M, [k - 1, k], [l, l + 1, l + 2], _chain_from_pivot(M, k, l))
        if steps is None:
            continue
        plan = _start(_union_ci_base(block, nice))
        for step in steps:
            plan = plan.then(step)
        branch = "l=k-1" if l == k - 1 else "l<=k-2"
        props["buchsbaum"] = plan.state.deficiency.is_concentrated()
        out.append(_finish(plan, M, "nonacm", props, {"k": k, "l": l, "branch": branch}))
        if first_only:
            return out
    if out:
        return out
    if pivot is not None:
        raise NotRealizable(f"pivot {pivot} does not start a valid chain", "invalid-pivot")
    found = _search_chain(M)
    if found is not None:
        rows, cols, adds = found
        block = M.submatrix(rows, cols)
        plan = _start(_union_ci_base(block, nice))
        for step in _run_chain(M, list(rows), list(cols), adds) or []:
            plan = plan.then(step)
        props["buchsbaum"] = plan.state.deficiency.is_concentrated()
        return [_finish(plan, M, "nonacm", props,
                        {"block_rows": list(rows), "block_cols": list(cols), "branch": "search"})]
    if nice:
        raise NotRealizable("no 2x3 block of the matrix starts a chain", "no-2x3-block")
    return _union_recipes(M, None, connected, True)


def _union_recipes(M: DegreeMatrix, pivot, connected: bool, first_only: bool) -> list[CurveRecipe]:
    if is_three_general_points(M):
        raise NoUnionPivot("the all-ones 2x3 matrix has no union construction")
    if pivot is not None:
        r = pivot if isinstance(pivot, int) else pivot[0]
        base = _union_base(M, r, connected)
        if base is None:
            reason = f"a_({r},{r - 1}) = {M[r, r - 1]} > 2" if 2 <= r <= M.t and M[r, r - 1] > 2 \
                else "the union does not reproduce the section"
            raise NoUnionPivot(f"row {r} is not a union pivot: {reason}")
        candidates = [(r, base)]
    else:
        candidates = list(_union_candidates(M, connected))
    if not candidates:
        raise NoUnionPivot("no row r with a_(r,r-1) <= 2 gives a union of two aCM curves")
    props = {"reduced": True, "connected": connected}
    out = []
    for r, base in candidates:
        plan = _start(base)
        props["buchsbaum"] = plan.state.deficiency.is_concentrated()
        out.append(_finish(plan, M, "nonacm", props, {"r": r}))
        if first_only:
            break
    return out


# ---------------------------------------------------------------------------
# Curves in the linkage class of two skew lines


def _positions_of(M: HomogeneousMatrix, v: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, M.t + 1) for j in range(1, M.ncols + 1) if M[i, j] == v]


def _buchsbaum_moves(M: DegreeMatrix) -> Iterator[tuple[str, HomogeneousMatrix, Spec]]:
    """Candidate (rule, smaller matrix, step) triples, one per class of entry 2."""
    t = M.t
    a = M.__getitem__
    seen = set()
    for i, j in _positions_of(M, 2):
        if 2 <= j <= t:
            rule = "interior-column"
        elif j == 1 and i != 1:
            rule = "first-column"
        elif (i, j) == (1, 1):
            rule = "top-left"
        else:
            rule = "last-column"
        if rule in seen:
            continue
        seen.add(rule)
        if rule == "interior-column":
            N = transpose_antidiagonal(M.submatrix(range(1, t + 1), range(2, t + 1)))
            tail = sum(a((x, x)) for x in range(2, t + 1))
            spec = CILinkSpec(M.trace(), a((1, t + 1)) + tail)
        elif rule == "first-column":
            N = transpose_antidiagonal(M.submatrix(range(1, t + 1), [1] + list(range(3, t + 1))))
            tail = sum(a((x, x)) for x in range(3, t + 1)) + a((2, 1))
            spec = CILinkSpec(tail + a((1, 2)), tail + a((1, t + 1)))
        elif rule == "top-left":
            N = M.submatrix(range(1, t), range(1, t + 1))
            spec = BDLSpec(M.trace(), a((t, t + 1)))
        else:
            N = transpose_antidiagonal(M.submatrix(range(1, t + 1), list(range(2, t)) + [t + 1]))
            head = a((t, t + 1)) + sum(a((x, x)) for x in range(2, t))
            spec = CILinkSpec(head + a((1, 1)), head + a((1, t)))
        yield rule, N, spec


def _buchsbaum_plan(M: DegreeMatrix) -> tuple[_Plan, list[str]]:
    @lru_cache(maxsize=None)
    def go(rows: tuple[tuple[int, ...], ...]):
        M_ = DegreeMatrix(rows)
        table = _table(M_)
        if M_.t == 1:
            a, b = M_[1, 1], M_[1, 2]
            if (a, b) == (1, 2):
                return _start(BaseCurve("two-skew-lines")), ("two-skew-lines",)
            if a == 2:
                plan = _start(BaseCurve("two-skew-lines")).then(
                    Step(CILinkSpec(2, b + 1, True, False), note="link two skew lines on a quadric"))
                return plan, ("two-skew-lines", "quadric-link")
            return None
        for rule, N, spec in _buchsbaum_moves(M_):
            if not is_degree_matrix(N):
                continue
            sub = go(N.rows)
            if sub is None:
                continue
            plan, rules = sub
            try:
                plan = plan.then(Step(spec, note=rule))
            except AcmLiftError:
                continue
            if plan.state.section == table:
                return plan, rules + (rule,)
        return None

    found = go(M.rows)
    if found is None:
        raise NotRealizable(f"no link chain reaches {M.to_list()}", "construction-mismatch")
    return found[0], list(found[1])


def synthesize_buchsbaum(M: HomogeneousMatrix | list) -> CurveRecipe:
    """A curve in the linkage class of two skew lines; its module is ``k`` in one degree."""
    M = _as_matrix(M)
    if 2 not in set(M.entries()):
        raise NotRealizable("a Buchsbaum non-aCM curve needs an entry equal to 2", "no-entry-equal-2")
    plan, rules = _buchsbaum_plan(M)
    verdict = classify_plane_section(M).integral_buchsbaum_nonacm.value == "yes"
    props = {"buchsbaum": True, "integral": verdict, "smooth": verdict, "reduced": verdict,
             "connected": verdict}
    max_gen = plan.state.section.gens[0] + 1
    notes = ("ideal generated in degree at most the section's top generator degree plus one",)
    return _finish(plan, M, "buchsbaum", props, {"rules": rules}, notes, max_gen=max_gen)


# ---------------------------------------------------------------------------
# Integral smooth non-aCM curves


def synthesize_integral_smooth(M: HomogeneousMatrix | list) -> CurveRecipe:
    """Integral smooth non-aCM curve whose general plane section has degree matrix ``M``."""
    M = _as_matrix(M)
    flag = classify_plane_section(M).realizable_integral_smooth_nonacm
    if flag.value != "yes":
        raise NotRealizable(flag.detail, flag.reason)
    props = {"reduced": True, "connected": True, "smooth": True, "integral": True}
    t = M.t
    if t == 1:
        plan = _start(BaseCurve("rational-on-quadric", {"a": M[1, 2]}))
        props["buchsbaum"] = plan.state.deficiency.is_concentrated()
        return _finish(plan, M, "integral", props, {"rule": "rational-on-quadric"})
    if t == 2:
        plan, rule = _integral_2x3(M)
        props["buchsbaum"] = plan.state.deficiency.is_concentrated()
        return _finish(plan, M, "integral", props, {"rule": rule})
    N = as_degree_matrix(transpose_antidiagonal(M.submatrix(range(1, t + 1), range(1, t))))
    if N.shape == (2, 3) and N[1, 1] == N[2, 2] == N[2, 3] == 1:
        # Connected curves with this section are aCM; a line off a plane curve is not.
        D = _start(BaseCurve("union-of-two-ci", {
            "first": [1, 1], "second": [1, N[1, 2] + 1], "dF": 1, "through_common_point": False}))
        inner = "line-and-plane-curve"
    else:
        try:
            rec = synthesize_non_acm(N, mode="nice")
            inner = "nice"
        except NotRealizable:
            rec = synthesize_non_acm(N, mode="bdl-chain")
            inner = "bdl-chain"
        D = _Plan(rec.base, rec.steps, replay(rec))
    f = M.trace()
    g = f - M[t, t] + M[t, t + 1]
    plan = D.then(Step(CILinkSpec(f, g), note="link the reflected-matrix curve"))
    props["buchsbaum"] = plan.state.deficiency.is_concentrated()
    return _finish(plan, M, "integral", props, {"rule": "linked-from-reflected-matrix", "inner": inner})


def _integral_2x3(M: DegreeMatrix) -> tuple[_Plan, str]:
    a11, a12, a13 = M[1, 1], M[1, 2], M[1, 3]
    a21, a22, a23 = M[2, 1], M[2, 2], M[2, 3]
    lines = BaseCurve("two-skew-lines")
    if a21 == 2:
        plan = _start(BaseCurve("rational-on-quadric", {"a": a11})).then(
            Step(CILinkSpec(a11 + a22, a11 + a23), note="case a21 = 2"))
        return plan, "rational-curve-linked"
    if a21 == 1 and a22 == 2:
        plan = _start(lines).then(Step(BDLSpec(a11 + 2, a11 + a23 - 1), note="case a21 = 1, a22 = 2"))
        return plan, "skew-lines-double-link"
    if a21 == 1 and a11 == 2:
        plan = _start(lines).then(Step(CILinkSpec(a12 + 1, a13 + 1), note="case a21 = 1, a11 = 2"))
        return plan, "skew-lines-linked"
    if a21 == 1 and a11 == 1 and a22 == 1 and a23 >= 2:
        a = a23
        plan = _start(BaseCurve("skew-lines-on-quadric", {"count": 2 * a - 1})).then(
            Step(CILinkSpec(2, 2 * a, True, False), note="case a11 = a21 = 1"))
        return plan, "quadric-lines-linked"
    if a21 == 1 and a11 >= 3 and a22 == 1 and a23 == 2:
        plan = _start(lines).then(Step(BDLSpec(a11 + 2, a11), note="case a11 >= 3, a23 = 2"))
        return plan, "skew-lines-double-link"
    if a21 == 1 and a11 >= 3 and a22 == 1 and a23 == 1:
        a = a11
        plan = _start(BaseCurve("skew-lines-on-quadric", {"count": 2 * a + 1})).then(
            Step(CILinkSpec(a + 1, a + 2, True, False), note="case a11 >= 3, a23 = 1"))
        return plan, "quadric-lines-linked"
    raise NotRealizable(f"no integral construction covers {M.to_list()}", "no-integral-case")


def integral_case(M: HomogeneousMatrix | list) -> Optional[str]:
    """Which 2x3 construction applies, by the case hypotheses alone, or ``None``."""
    M = _as_matrix(M)
    if M.shape != (2, 3) or M.bottom_left() not in (1, 2) or min(M.entries()) < 1:
        return None
    if is_three_general_points(M):
        return None
    try:
        return _integral_2x3(M)[1]
    except AcmLiftError:
        return None


# ---------------------------------------------------------------------------
# Buchsbaum curves with the largest possible module


def synthesize_max_deficiency(M: HomogeneousMatrix | list) -> CurveRecipe:
    """Buchsbaum curve whose module reaches every per-degree bound; ``dim = delta(M)``."""
    M = _as_matrix(M)
    if 2 not in set(M.entries()):
        raise NotRealizable("a Buchsbaum non-aCM curve needs an entry equal to 2", "no-entry-equal-2")
    plan, rules = _maxdef_plan(M)
    props = {"buchsbaum": True}
    return _finish(plan, M, "maxdef", props, {"rules": rules},
                   ("module dimension reaches the block bound in every degree",))


def _recipe_of(plan: _Plan, target: DegreeMatrix, goal: str) -> CurveRecipe:
    return _finish(plan, target, goal, {"buchsbaum": True})


def _maxdef_plan(M: DegreeMatrix) -> tuple[_Plan, list[str]]:
    found = _module_plan(M.rows, delta(M))
    if found is None:
        raise NotRealizable(f"no liaison-addition chain reaches {M.to_list()}", "construction-mismatch")
    return found[0], list(found[1])


_SKEW_LINES = None


def _skew_lines_recipe() -> CurveRecipe:
    global _SKEW_LINES
    if _SKEW_LINES is None:
        _SKEW_LINES = _recipe_of(_start(BaseCurve("two-skew-lines")), DegreeMatrix(((1, 2),)), "buchsbaum")
    return _SKEW_LINES


def _surface_floor(M: HomogeneousMatrix) -> int:
    """Smallest degree in which the ideal of a Buchsbaum curve with section ``M`` surely has forms.

    The ideal contains forms of degree ``trace + 1``; when the lowest section
    generator must lift, the trace itself is enough.
    """
    lowest = generator_lifting(M, buchsbaum=True)[-1]
    return M.trace() if lowest.must_lift else M.trace() + 1


@lru_cache(maxsize=None)
def _module_plan(rows: tuple[tuple[int, ...], ...], k: int) -> Optional[tuple[_Plan, tuple[str, ...]]]:
    """A Buchsbaum curve with section ``rows`` and module of dimension ``k``.

    Moves: liaison addition of two skew lines at an entry 2, a basic double
    link at any entry, or a link with a complete intersection of smaller
    degree.  Surfaces must have degree at least ``_surface_floor`` of the
    curve they contain.
    """
    M = DegreeMatrix(rows)
    if k < 1 or delta(M) < k:
        return None
    table = _table(M)
    if k == 1:
        try:
            plan, _ = _buchsbaum_plan(M)
        except NotRealizable:
            return None
        return plan, ("linkage-class-of-two-skew-lines",)

    def attempt(sub, step, rule):
        if sub is None:
            return None
        try:
            plan = sub[0].then(step)
        except AcmLiftError:
            return None
        if plan.state.section == table:
            return plan, sub[1] + (rule,)
        return None

    t = M.t
    twos = sorted(_positions_of(M, 2), key=lambda ij: (ij[1] > ij[0], ij))
    for i, j in twos:
        N = M.delete(i, j)
        if not is_degree_matrix(N):
            continue
        degF = _generator_degree(M, j) - 1
        if degF < _surface_floor(N):
            continue
        step = Step(LiaisonAddSpec(degF, 2, False, True), _skew_lines_recipe(),
                    f"add two skew lines at entry ({i},{j})")
        found = attempt(_module_plan(N.rows, k - 1), step, f"liaison-addition-at-{i}-{j}")
        if found:
            return found
    for i in range(1, t + 1):
        for j in range(1, t + 2):
            N = M.delete(i, j)
            if t == 1 or not is_degree_matrix(N):
                continue
            spec = _bdl_insertion(M, i, j)
            if spec is None or spec.s < _surface_floor(N):
                continue
            found = attempt(_module_plan(N.rows, k), Step(spec, note=f"double link adding row {i}, column {j}"),
                            f"double-link-at-{i}-{j}")
            if found:
                return found
    deg = hvector_from_degree_matrix(M).degree
    low = _surface_floor(M)
    for f in range(low, 2 * deg):
        for g in range(f, 2 * deg // f + 1):
            if f * g >= 2 * deg:
                break
            try:
                residual = ci_link(table, CILinkSpec(f, g))
                N = degree_matrix_from_betti(residual)
            except AcmLiftError:
                continue
            if not is_degree_matrix(N):
                continue
            found = attempt(_module_plan(as_degree_matrix(N).rows, k), Step(CILinkSpec(f, g), note="link"),
                            f"link-{f}-{g}")
            if found:
                return found
    return None


# ---------------------------------------------------------------------------
# Dispatch


GOALS = {
    "nonacm": synthesize_non_acm,
    "buchsbaum": synthesize_buchsbaum,
    "integral": synthesize_integral_smooth,
    "maxdef": synthesize_max_deficiency,
}


def synthesize(M: HomogeneousMatrix | list, goal: str, mode: str = "bdl-chain",
               all_pivots: bool = False) -> list[CurveRecipe]:
    if goal not in GOALS:
        raise InvalidInput(f"unknown goal {goal!r}; expected one of {sorted(GOALS)}")
    if goal == "nonacm":
        if all_pivots:
            return enumerate_non_acm_recipes(M, mode)
        return [synthesize_non_acm(M, mode)]
    return [GOALS[goal](M)]
