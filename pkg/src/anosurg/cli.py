"""Command-line front end: problem ingestion, census / profile / classify /
game / staircase / thresholds commands, JSON results, and SVG figures.

Problem files are JSON:

    {"matrix": [[2, 1], [1, 1]],
     "sets": [{"point": ["1/2", "1/2"], "characteristic_number": 1,
               "role": "Y"}],
     "options": {"boundary_mode": "closed", "budget": 10000, "svg": false}}

Every exact value in machine output is a string ("a/b + c/d*sqrt(D)" or a
plain rational) that the parser round-trips losslessly; output is
byte-identical for identical input.  Exit codes: 0 ok, 1 parse error,
2 unsupported input, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .quadfield import QuadFieldError, qn_from_str, qn_to_str
from .torus import (HyperbolicMatrix, InvariantError, UnsupportedMatrixError,
                    eigenframe, marked_set, orbit_of, point)
from .rectangles import census_records, case_profile, enumerate_primitive
from .game import DEFAULT_BUDGET, DominationAnalysis, DominationHypothesisError
from .game import GameConfig, game_trace_records, play_game
from .staircase import (StaircaseError, build_staircase, containment_check,
                        incompleteness_threshold, staircase_records)
from .classify import SurgeryProblem, classify, verdict_records
from . import svgfig


class ParseError(ValueError):
    """Malformed problem file or argument; the message names the field."""


# ---------------------------------------------------------------------------
# problem ingestion


def _fraction(text, where):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: not a rational 'p/q': {text!r}")


def load_problem(data: dict):
    """Parse a problem dict -> (matrix, {'X','Y'} marked sets, options)."""
    if not isinstance(data, dict):
        raise ParseError("problem: expected a JSON object")
    try:
        rows = data["matrix"]
    except KeyError:
        raise ParseError("matrix: missing")
    try:
        (a, b), (c, d) = rows
        A = HyperbolicMatrix(int(a), int(b), int(c), int(d))
    except UnsupportedMatrixError:
        raise
    except (TypeError, ValueError):
        raise ParseError("matrix: expected 2x2 integer rows")
    seeds = {"X": [], "Y": []}
    for i, entry in enumerate(data.get("sets", [])):
        where = f"sets[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        role = entry.get("role")
        if role not in ("X", "Y"):
            raise ParseError(f"{where}.role: expected 'X' or 'Y', got {role!r}")
        pt = entry.get("point")
        if not (isinstance(pt, (list, tuple)) and len(pt) == 2):
            raise ParseError(f"{where}.point: expected a pair of rationals")
        p = point(_fraction(pt[0], f"{where}.point[0]"),
                  _fraction(pt[1], f"{where}.point[1]"))
        char = entry.get("characteristic_number", 0)
        if not isinstance(char, int):
            raise ParseError(f"{where}.characteristic_number: expected an integer")
        seeds[role].append((p, char))
    sets = {role: marked_set(A, seeds[role], role) for role in ("X", "Y")}
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise ParseError("options: expected an object")
    boundary = opts.get("boundary_mode", "closed")
    if boundary not in ("closed", "open"):
        raise ParseError(f"options.boundary_mode: expected closed|open, got {boundary!r}")
    budget = opts.get("budget", DEFAULT_BUDGET)
    if not (isinstance(budget, int) and budget >= 1):
        raise ParseError("options.budget: expected a positive integer")
    options = {"boundary_mode": boundary, "budget": budget,
               "svg": bool(opts.get("svg", False))}
    return A, sets, options


def _read_problem(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise ParseError(f"problem file: {e}")
    except json.JSONDecodeError as e:
        raise ParseError(f"problem file: invalid JSON: {e}")
    return load_problem(data)


def _parse_point(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise ParseError(f"point: expected 'x,y', got {text!r}")
    return point(_fraction(parts[0], "point[0]"), _fraction(parts[1], "point[1]"))


def _emit(payload, out=None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    (out or sys.stdout).write(text)


def _write_svg(path, text):
    with open(path, "w") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_census(args):
    A, sets, _ = _read_problem(args.problem)
    frame = eigenframe(A)
    own = sets[args.set]
    if own.is_empty():
        raise ParseError(f"sets: no points with role {args.set!r}")
    signs = ("positive", "negative") if args.sign == "both" else (args.sign,)
    reps = {sign: enumerate_primitive(A, own, sign, frame) for sign in signs}
    _emit({
        "matrix": [[A.a, A.b], [A.c, A.d]],
        "set": args.set,
        "census": {sign: census_records(r) for sign, r in reps.items()},
    })
    if args.svg:
        allreps = [r for sign in signs for r in reps[sign]]
        _write_svg(args.svg, svgfig.census_figure(
            frame, allreps, (sets["X"], sets["Y"])))
    return 0


def _cmd_profile(args):
    A, sets, _ = _read_problem(args.problem)
    if sets["X"].is_empty() or sets["Y"].is_empty():
        raise ParseError("sets: profile needs nonempty X and Y")
    prof = case_profile(A, sets["X"], sets["Y"], eigenframe(A))
    _emit({
        "booleans": {
            "pos_x_disjoint": prof.pos_x_disjoint,
            "neg_x_disjoint": prof.neg_x_disjoint,
            "pos_y_disjoint": prof.pos_y_disjoint,
            "neg_y_disjoint": prof.neg_y_disjoint,
        },
        "case": prof.case,
        "symmetry": prof.symmetry,
        "primitive_reduction_assumed": prof.primitive_reduction_assumed,
        "witnesses": {k: census_records([v])[0]
                      for k, v in sorted(prof.witnesses.items())},
    })
    return 0


def _cmd_classify(args):
    A, sets, _ = _read_problem(args.problem)
    verdict = classify(SurgeryProblem(A, sets["X"], sets["Y"]))
    _emit(verdict_records(verdict))
    return 0


def _cmd_game(args):
    A, sets, options = _read_problem(args.problem)
    frame = eigenframe(A)
    try:
        t0 = qn_from_str(args.t0, frame.D)
        r = qn_from_str(args.r, frame.D)
    except QuadFieldError as e:
        raise ParseError(f"t0/r: {e}")
    p = _parse_point(args.point)
    cfg = GameConfig(frame, (sets["X"], sets["Y"]), args.quadrant)
    budget = args.budget if args.budget is not None else options["budget"]
    outcome = play_game(cfg, p, t0, r, budget)
    _emit({
        "status": outcome.status,
        "final_t": None if outcome.final_t is None else qn_to_str(outcome.final_t),
        "crossings": game_trace_records(outcome),
    })
    if args.svg:
        _write_svg(args.svg, svgfig.game_figure(
            outcome, t0, r, y_points=sets["Y"].points))
    return 0


def _cmd_staircase(args):
    A, sets, _ = _read_problem(args.problem)
    own = sets[args.set]
    other = sets["Y" if args.set == "X" else "X"]
    if own.is_empty():
        raise ParseError(f"sets: no points with role {args.set!r}")
    origin = _parse_point(args.origin) if args.origin else own.points[0]
    try:
        st = build_staircase(A, own, other, origin, args.quadrant, eigenframe(A))
    except StaircaseError as e:
        _emit({"staircase": None, "reason": str(e)})
        return 0
    n = incompleteness_threshold(st)
    _emit({
        "staircase": staircase_records(st),
        "incompleteness_threshold": n,
        "containment_at_threshold": containment_check(
            st, -n if args.quadrant in ("++", "--") else n),
    })
    if args.svg:
        _write_svg(args.svg, svgfig.staircase_figure(st))
    return 0


def _cmd_thresholds(args):
    A, sets, _ = _read_problem(args.problem)
    frame = eigenframe(A)
    X, Y = sets["X"], sets["Y"]
    if X.is_empty() or Y.is_empty():
        raise ParseError("sets: thresholds need nonempty X and Y")
    out = {"domination": {}, "incompleteness": {}}
    for own_name, own, other in (("X", X, Y), ("Y", Y, X)):
        for sign in ("positive", "negative"):
            try:
                analysis = DominationAnalysis(A, own, other, sign=sign, frame=frame)
                out["domination"][f"{own_name}-{sign}"] = analysis.threshold
            except DominationHypothesisError:
                out["domination"][f"{own_name}-{sign}"] = None
        for quadrant in ("++", "+-"):
            val = None
            for base in own.points:
                try:
                    st = build_staircase(A, own, other, base, quadrant, frame)
                except StaircaseError:
                    continue
                val = incompleteness_threshold(st)
                break
            out["incompleteness"][f"{own_name}-{quadrant}"] = val
    _emit(out)
    return 0


# ---------------------------------------------------------------------------
# embedded fixtures and the examples command

FIXTURES = {
    "a2_half": {
        "matrix": [[2, 1], [1, 1]],
        "sets": [
            {"point": ["0", "0"], "characteristic_number": -1, "role": "X"},
            {"point": ["1/2", "1/2"], "characteristic_number": 1, "role": "Y"},
        ],
    },
    "b2_half": {
        "matrix": [[13, 8], [8, 5]],
        "sets": [
            {"point": ["0", "0"], "characteristic_number": -2, "role": "X"},
            {"point": ["1/2", "1/2"], "characteristic_number": 2, "role": "Y"},
        ],
    },
    "case3": {
        "matrix": [[3, 2], [4, 3]],
        "sets": [
            {"point": ["0", "0"], "characteristic_number": 1, "role": "X"},
            {"point": ["0", "1/2"], "characteristic_number": -1, "role": "Y"},
        ],
    },
}


def _run_examples(out):
    """The built-in fixture suite; returns the number of failures."""
    from .rectangles import rect_meets
    checks = []

    def check(name, fn):
        try:
            ok = bool(fn())
            detail = ""
        except Exception as e:          # report, never crash the suite
            ok, detail = False, f" ({type(e).__name__}: {e})"
        checks.append((name, ok, detail))

    def halves_cover(rows):
        A = HyperbolicMatrix.from_rows(rows)
        frame = eigenframe(A)
        X = marked_set(A, [(point(0, 0), 0)], "X")
        halves = [point(0, Fraction(1, 2)), point(Fraction(1, 2), 0),
                  point(Fraction(1, 2), Fraction(1, 2))]
        seeds, covered = [], set()
        for p in halves:                # the three points may share orbits
            if p not in covered:
                seeds.append((p, 0))
                covered |= set(orbit_of(A, p)[0])
        H = marked_set(A, seeds, "Y")
        assert set(H.points) == set(halves)
        for sign in ("positive", "negative"):
            for rep in enumerate_primitive(A, X, sign, frame):
                if not rect_meets(frame, rep.rect.rect, H, "closed"):
                    return False
        return True

    for k in (2, 3, 4):
        rows = [[k, k - 1], [1, 1]]
        check(f"integer-rectangles-meet-half-integers [[{k},{k-1}],[1,1]]",
              lambda rows=rows: halves_cover(rows))
    check("integer-rectangles-meet-half-integers [[3,2],[4,3]]",
          lambda: halves_cover([[3, 2], [4, 3]]))

    def disjoint_census(rows):
        A = HyperbolicMatrix.from_rows(rows)
        frame = eigenframe(A)
        X = marked_set(A, [(point(0, 0), 0)], "X")
        Y = marked_set(A, [(point(Fraction(1, 2), Fraction(1, 2)), 0)], "Y")
        found = {}
        for sign in ("positive", "negative"):
            found[sign] = any(
                not rect_meets(frame, rep.rect.rect, Y, "closed")
                for rep in enumerate_primitive(A, X, sign, frame))
        return found["positive"] and found["negative"]

    A2 = HyperbolicMatrix(2, 1, 1, 1)
    A3 = HyperbolicMatrix(3, 2, 1, 1)
    check("cube-of-[[2,1],[1,1]]: both-sign rectangles avoid (1/2,1/2)-orbit",
          lambda: disjoint_census(A2.power_rows(3)))
    check("square-of-[[3,2],[1,1]]: both-sign rectangles avoid (1/2,1/2)-orbit",
          lambda: disjoint_census(A3.power_rows(2)))

    def b2_unit_rectangle():
        A = HyperbolicMatrix.from_rows(A2.power_rows(3))
        frame = eigenframe(A)
        X = marked_set(A, [(point(0, 0), 0)], "X")
        Y = marked_set(A, [(point(Fraction(1, 2), Fraction(1, 2)), 0)], "Y")
        from .rectangles import is_primitive, marked_rect
        mr = marked_rect(frame, X, point(0, 0), point(1, 0), "positive")
        return is_primitive(frame, mr, X) and not rect_meets(
            frame, mr.rect, Y, "closed")

    check("cube-of-[[2,1],[1,1]]: unit horizontal diagonal is a disjoint witness",
          b2_unit_rectangle)

    def case3_profile():
        data = dict(FIXTURES["case3"])
        A, sets, _ = load_problem(data)
        prof = case_profile(A, sets["X"], sets["Y"], eigenframe(A))
        return (prof.booleans == (True, False, True, False)
                and prof.case == 3)

    check("[[3,2],[4,3]] with (0,1/2)-orbit: one-sided profile (case 3)", case3_profile)

    def a2_classify():
        A, sets, _ = load_problem(dict(FIXTURES["a2_half"]))
        v = classify(SurgeryProblem(A, sets["X"], sets["Y"]))
        return v.status == "RCoveredPositive" and v.rule.startswith("domination")

    check("[[2,1],[1,1]] fixture: strong positive surgery dominates", a2_classify)

    failures = 0
    for name, ok, detail in checks:
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}{detail}\n")
        failures += 0 if ok else 1
    out.write(f"{len(checks) - failures}/{len(checks)} checks passed\n")
    return failures


def _cmd_examples(args):
    failures = _run_examples(sys.stdout)
    return 0 if failures == 0 else 3


# ---------------------------------------------------------------------------
# entry point


def _build_parser():
    p = argparse.ArgumentParser(
        prog="anosurg",
        description="Exact rectangle censuses, holonomy games, staircases and "
                    "classification for surgered suspension Anosov flows.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("census", _cmd_census, help="primitive rectangle census")
    sp.add_argument("problem")
    sp.add_argument("--set", choices=("X", "Y"), default="X")
    sp.add_argument("--sign", choices=("positive", "negative", "both"),
                    default="both")
    sp.add_argument("--svg", metavar="PATH")

    sp = add("profile", _cmd_profile, help="disjointness case profile")
    sp.add_argument("problem")

    sp = add("classify", _cmd_classify, help="full classification verdict")
    sp.add_argument("problem")

    sp = add("game", _cmd_game, help="run the holonomy crossing game")
    sp.add_argument("problem")
    sp.add_argument("--point", required=True, help="start point 'x,y'")
    sp.add_argument("--t0", required=True, help="initial offset (exact string)")
    sp.add_argument("--r", required=True, help="target height (exact string)")
    sp.add_argument("--quadrant", choices=("++", "--", "+-", "-+"), default="++")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--svg", metavar="PATH")

    sp = add("staircase", _cmd_staircase, help="build and verify a staircase")
    sp.add_argument("problem")
    sp.add_argument("--set", choices=("X", "Y"), default="X")
    sp.add_argument("--origin", help="origin lift 'x,y' (default: first point)")
    sp.add_argument("--quadrant", choices=("++", "--", "+-", "-+"), default="++")
    sp.add_argument("--svg", metavar="PATH")

    sp = add("thresholds", _cmd_thresholds,
             help="domination and incompleteness thresholds")
    sp.add_argument("problem")

    add("examples", _cmd_examples, help="run the built-in fixture suite")
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except UnsupportedMatrixError as e:
        print(f"unsupported: {e}", file=sys.stderr)
        return 2
    except InvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
