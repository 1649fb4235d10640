"""Command-line front end.

Every subcommand reads UTF-8 JSON (a path or ``-`` for stdin) and writes
JSON to stdout.  Exit status: 0 on success, 1 on domain errors (reported as
JSON), 2 on malformed input.  Set ``ACMLIFT_VERBOSE=1`` for progress logging
on stderr; it never changes stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Optional, Sequence

from .buchsbaum import per_degree_dim_bounds
from .classifier import classify_hvector, classify_lifting_matrix, classify_plane_section, generator_lifting
from .errors import AcmLiftError, InvalidInput
from .hvector import (
    HVector,
    betti_from_hvector,
    degree_matrix_from_hvector,
    format_poly,
    hvector_from_betti,
    hvector_from_degree_matrix,
)
from .matrix_core import (
    BettiTable,
    HomogeneousMatrix,
    betti_from_degree_matrix,
    degree_matrix_from_betti,
    enumerate_degree_matrices,
    is_degree_matrix,
)
from .recipe_synthesizer import CurveRecipe, synthesize, verify_recipe

log = logging.getLogger("acmlift")


class InputError(Exception):
    """Malformed input: bad JSON, missing fields, wrong types."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.field = field

    def to_json(self) -> dict:
        out: dict[str, Any] = {"error": "InputError", "message": str(self)}
        if self.line is not None:
            out["line"] = self.line
        if self.field is not None:
            out["field"] = self.field
        return out


# ---------------------------------------------------------------------------
# Input parsing


def _read_json(source: str) -> Any:
    try:
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


def _int_grid(value: Any, field: str) -> list[list[int]]:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise InputError("expected a non-empty list of rows", field=field)
    for r, row in enumerate(value):
        for c, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise InputError(f"entry {x!r} is not an integer", field=f"{field}[{r}][{c}]")
    return value


def _int_list(value: Any, field: str) -> list[int]:
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise InputError("expected a list of integers", field=field)
    return value


def parse_matrix(data: Any) -> HomogeneousMatrix:
    """Accepts ``{"rows": [[...]]}`` or a bare list of rows."""
    rows = data.get("rows") if isinstance(data, dict) else data
    if isinstance(data, dict) and rows is None:
        raise InputError("matrix JSON needs a 'rows' field", field="rows")
    grid = _int_grid(rows, "rows")
    return HomogeneousMatrix(tuple(tuple(r) for r in grid))


def parse_hvector(data: Any) -> HVector:
    coeffs = data.get("h") if isinstance(data, dict) else data
    if isinstance(data, dict) and coeffs is None:
        raise InputError("h-vector JSON needs an 'h' field", field="h")
    return HVector(tuple(_int_list(coeffs, "h")))


def parse_betti(data: Any) -> BettiTable:
    if not isinstance(data, dict):
        raise InputError("Betti table JSON must be an object with 'gens' and 'syz'")
    for key in ("gens", "syz"):
        if key not in data:
            raise InputError(f"Betti table JSON needs a '{key}' field", field=key)
        _int_list(data[key], key)
    return BettiTable.from_json(data)


def parse_recipe(data: Any) -> CurveRecipe:
    return CurveRecipe.from_json(data)


# ---------------------------------------------------------------------------
# Commands: each takes parsed arguments and returns a JSON-ready value.


def _hvector_json(h: HVector) -> dict:
    return {"h": list(h.coeffs), "poly": format_poly(h.coeffs), "degree": h.degree}


def cmd_classify(matrix: HomogeneousMatrix, integral_only: bool = False, buchsbaum: bool = False,
                 n: int = 2) -> dict:
    if n != 2:
        return classify_lifting_matrix(matrix, n).to_json()
    verdict = classify_plane_section(matrix).to_json()
    if integral_only:
        verdict = {"realizable_integral_smooth_nonacm": verdict["realizable_integral_smooth_nonacm"],
                   "integral_buchsbaum_nonacm": verdict["integral_buchsbaum_nonacm"]}
    out = {"matrix": matrix.to_list(), "verdict": verdict}
    if buchsbaum:
        out["generator_lifting"] = [g.to_json() for g in generator_lifting(matrix, buchsbaum=True)]
    return out


def cmd_hvector(matrix: Optional[HomogeneousMatrix] = None, betti: Optional[BettiTable] = None) -> dict:
    if matrix is not None:
        return _hvector_json(hvector_from_degree_matrix(matrix))
    assert betti is not None
    return _hvector_json(hvector_from_betti(betti))


def cmd_invert(h: HVector) -> dict:
    M = degree_matrix_from_hvector(h)
    return {
        "h": list(h.coeffs),
        "matrix": M.to_list(),
        "betti": betti_from_hvector(h).to_json(),
        "classification": classify_hvector(h).to_json(),
    }


def cmd_betti(matrix: Optional[HomogeneousMatrix] = None, h: Optional[HVector] = None) -> dict:
    if matrix is not None:
        return betti_from_degree_matrix(matrix).to_json()
    assert h is not None
    return betti_from_hvector(h).to_json()


def cmd_synthesize(matrix: HomogeneousMatrix, goal: str, mode: str = "bdl-chain",
                   all_pivots: bool = False) -> Any:
    recipes = synthesize(matrix, goal, mode, all_pivots)
    if all_pivots:
        return [r.to_json() for r in recipes]
    return recipes[0].to_json()


def cmd_replay(recipe: CurveRecipe, target: Optional[HomogeneousMatrix] = None) -> dict:
    return verify_recipe(recipe, target).to_json()


def cmd_bounds(matrix: HomogeneousMatrix) -> dict:
    return per_degree_dim_bounds(matrix).to_json()


def cmd_selfcheck(max_t: int = 3, max_entry: int = 5, min_entry: int = -1) -> dict:
    """Closed-form h-vectors against series division, plus inversion round trips."""
    total = identity_failures = inverted = inversion_failures = 0
    per_t: dict[str, int] = {}
    first_failure = None
    for t in range(1, max_t + 1):
        count = 0
        for M in enumerate_degree_matrices(t, min_entry, max_entry):
            count += 1
            h = hvector_from_degree_matrix(M)
            if h != hvector_from_betti(betti_from_degree_matrix(M)):
                identity_failures += 1
                first_failure = first_failure or M.to_list()
            if 0 not in set(M.entries()):
                inverted += 1
                if degree_matrix_from_hvector(h) != M:
                    inversion_failures += 1
                    first_failure = first_failure or M.to_list()
        per_t[str(t)] = count
        total += count
        log.info("selfcheck: t=%d, %d matrices", t, count)
    return {
        "matrices": total,
        "per_t": per_t,
        "hvector_identity_failures": identity_failures,
        "inversions_checked": inverted,
        "inversion_failures": inversion_failures,
        "first_failure": first_failure,
        "ok": identity_failures == 0 and inversion_failures == 0,
    }


BATCH_DEFAULTS = {"matrix": "classify", "hvector": "invert", "betti": "betti", "recipe": "replay"}


def run_entry(entry: Any) -> dict:
    """Evaluate one corpus entry; the result is what the single command would print."""
    if not isinstance(entry, dict) or "id" not in entry:
        raise InputError("corpus entries need an 'id'", field="id")
    kinds = [k for k in BATCH_DEFAULTS if k in entry]
    if len(kinds) != 1:
        raise InputError("a corpus entry needs exactly one of matrix, hvector, betti, recipe",
                         field=str(entry["id"]))
    kind = kinds[0]
    command = entry.get("command", BATCH_DEFAULTS[kind])
    payload = entry[kind]
    options = entry.get("options", {})
    if kind == "matrix":
        M = parse_matrix(payload)
        handlers: dict[str, Callable[[], Any]] = {
            "classify": lambda: cmd_classify(M, **options),
            "hvector": lambda: cmd_hvector(matrix=M),
            "betti": lambda: cmd_betti(matrix=M),
            "bounds": lambda: cmd_bounds(M),
            "synthesize": lambda: cmd_synthesize(M, **options),
        }
    elif kind == "hvector":
        h = parse_hvector(payload)
        handlers = {"invert": lambda: cmd_invert(h), "betti": lambda: cmd_betti(h=h)}
    elif kind == "betti":
        B = parse_betti(payload)
        handlers = {"hvector": lambda: cmd_hvector(betti=B),
                    "betti": lambda: {"matrix": degree_matrix_from_betti(B).to_list(),
                                      "hvector": _hvector_json(hvector_from_betti(B))}}
    else:
        R = parse_recipe(payload)
        handlers = {"replay": lambda: cmd_replay(R)}
    if command not in handlers:
        raise InputError(f"command {command!r} does not apply to a {kind} payload", field="command")
    return handlers[command]()


def cmd_batch(corpus: Any) -> list[dict]:
    entries = corpus.get("entries") if isinstance(corpus, dict) else corpus
    if not isinstance(entries, list):
        raise InputError("corpus must be a list of entries or an object with 'entries'")
    ids = [e.get("id") if isinstance(e, dict) else None for e in entries]
    dupes = sorted({str(i) for i in ids if ids.count(i) > 1})
    if dupes:
        raise InputError(f"duplicate corpus ids: {dupes}", field="id")
    out = []
    for entry in entries:
        try:
            record: dict[str, Any] = {"id": entry.get("id") if isinstance(entry, dict) else None,
                                      "result": run_entry(entry)}
        except AcmLiftError as exc:
            record = {"id": entry.get("id"), "error": exc.to_json()}
        except InputError as exc:
            record = {"id": entry.get("id") if isinstance(entry, dict) else None, "error": exc.to_json()}
        if isinstance(entry, dict) and "expected" in entry:
            record["matches_expected"] = record.get("result", record.get("error")) == entry["expected"]
        out.append(record)
    return out


# ---------------------------------------------------------------------------
# Output


def _pretty(value: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        if value and all(isinstance(r, list) and _is_flat(r) for r in value):
            width = max(len(str(x)) for r in value for x in r) if any(value) else 1
            return "\n".join(pad + " ".join(str(x).rjust(width) for x in r) for r in value)
        return "\n".join(f"{pad}- " + _pretty(v, indent + 1).lstrip() for v in value)
    return pad + _inline(value)


def _is_flat(v: Any) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _inline(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def emit(value: Any, pretty: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if pretty:
        stream.write(_pretty(value) + "\n")
    else:
        stream.write(json.dumps(value, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")
    p = argparse.ArgumentParser(prog="acmlift", description="Degree matrices, h-vectors and curve recipes.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help)

    c = add("classify", help="which non-aCM curves a section allows")
    c.add_argument("--matrix", required=True)
    c.add_argument("--integral-only", action="store_true")
    c.add_argument("--buchsbaum", action="store_true", help="also report which generators must lift")
    c.add_argument("--n", type=int, default=2, help="ambient dimension of the points")

    h = add("hvector", help="h-vector of a degree matrix or Betti table")
    g = h.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix")
    g.add_argument("--betti")

    i = add("invert", help="degree matrix and verdict from an h-vector")
    i.add_argument("--h", required=True, dest="hvector")

    b = add("betti", help="generator and syzygy degrees")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix")
    g.add_argument("--h", dest="hvector")

    s = add("synthesize", help="emit a curve recipe")
    s.add_argument("--matrix", required=True)
    s.add_argument("--goal", required=True, choices=["nonacm", "buchsbaum", "integral", "maxdef"])
    s.add_argument("--mode", default="bdl-chain", choices=["bdl-chain", "union", "nice"])
    s.add_argument("--all-pivots", action="store_true")

    r = add("replay", help="replay and verify a recipe")
    r.add_argument("--recipe", required=True)
    r.add_argument("--matrix", help="target to compare against instead of the recipe's own")

    d = add("bounds", help="deficiency module bounds")
    d.add_argument("--matrix", required=True)

    sc = add("selfcheck", help="closed-form h-vectors against series division")
    sc.add_argument("--max-t", type=int, default=3)
    sc.add_argument("--max-entry", type=int, default=5)
    sc.add_argument("--min-entry", type=int, default=-1)

    bt = add("batch", help="evaluate a corpus of entries in order")
    bt.add_argument("--corpus", required=True)
    return p


def dispatch(args: argparse.Namespace) -> tuple[Any, int]:
    cmd = args.command
    if cmd == "classify":
        return cmd_classify(parse_matrix(_read_json(args.matrix)), args.integral_only, args.buchsbaum, args.n), 0
    if cmd == "hvector":
        if args.matrix is not None:
            return cmd_hvector(matrix=parse_matrix(_read_json(args.matrix))), 0
        return cmd_hvector(betti=parse_betti(_read_json(args.betti))), 0
    if cmd == "invert":
        return cmd_invert(parse_hvector(_read_json(args.hvector))), 0
    if cmd == "betti":
        if args.matrix is not None:
            return cmd_betti(matrix=parse_matrix(_read_json(args.matrix))), 0
        return cmd_betti(h=parse_hvector(_read_json(args.hvector))), 0
    if cmd == "synthesize":
        return cmd_synthesize(parse_matrix(_read_json(args.matrix)), args.goal, args.mode, args.all_pivots), 0
    if cmd == "replay":
        target = None if args.matrix is None else parse_matrix(_read_json(args.matrix))
        report = cmd_replay(parse_recipe(_read_json(args.recipe)), target)
        return report, 0 if report["ok"] else 1
    if cmd == "bounds":
        M = parse_matrix(_read_json(args.matrix))
        if not is_degree_matrix(M):
            raise InvalidInput("bounds need a degree matrix")
        return cmd_bounds(M), 0
    if cmd == "selfcheck":
        report = cmd_selfcheck(args.max_t, args.max_entry, args.min_entry)
        return report, 0 if report["ok"] else 1
    if cmd == "batch":
        return cmd_batch(_read_json(args.corpus)), 0
    raise InputError(f"unknown command {cmd!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    if os.environ.get("ACMLIFT_VERBOSE"):
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    pretty = getattr(args, "pretty", False)
    try:
        value, status = dispatch(args)
    except InputError as exc:
        emit(exc.to_json(), pretty)
        return 2
    except InvalidInput as exc:
        emit(exc.to_json(), pretty)
        return 2
    except AcmLiftError as exc:
        emit(exc.to_json(), pretty)
        return 1
    emit(value, pretty)
    return status


if __name__ == "__main__":
    sys.exit(main())
