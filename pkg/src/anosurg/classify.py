"""Verdicts for surgered suspension flows: combine the sign rule, the
rectangle disjointness profile, domination thresholds, and staircase
thresholds into a machine-checkable classification.

Decision order: all surgeries zero -> Suspension; all nonzero surgery signs
equal -> RCovered with that sign; a domination certificate (one of four
sign/role variants) -> RCovered regardless of the other set's surgeries; a
pair of staircases undertwisting adjacent quadrant types -> NonRCovered;
otherwise Unknown with full diagnostics.  All thresholds compare against
twists (characteristic number times orbit period).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .torus import (HyperbolicMatrix, InvariantError, MarkedSet, Point,
                    eigenframe, mod1, sets_disjoint)
from .rectangles import case_profile
from .game import DominationAnalysis, DominationHypothesisError
from .staircase import (Staircase, StaircaseError, build_staircase,
                        incompleteness_threshold, staircase_records)

STATUSES = ("Suspension", "RCoveredPositive", "RCoveredNegative",
            "NonRCovered", "Unknown")


@dataclass(frozen=True)
class SurgeryProblem:
    A: HyperbolicMatrix
    X: MarkedSet
    Y: MarkedSet

    def __post_init__(self):
        if not sets_disjoint(self.X, self.Y):
            raise ValueError("marked sets overlap")

    @property
    def frame(self):
        return _frame(self.A)

    def geometry(self):
        """Hashable key identifying the problem up to the surgery strengths."""
        return (self.A,
                tuple(orb.points for orb in self.X.orbits),
                tuple(orb.points for orb in self.Y.orbits))


@dataclass(frozen=True)
class Verdict:
    status: str
    rule: str                      # which decision rule fired
    evidence: dict = field(default_factory=dict, compare=False)
    primitive_reduction_assumed: bool = True

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")


# ---------------------------------------------------------------------------
# memoized geometry analyses (the sweep varies only the surgery strengths)

_frames = {}
_profiles = {}
_dominations = {}
_staircases = {}


def _frame(A):
    if A not in _frames:
        _frames[A] = eigenframe(A)
    return _frames[A]


def _twists(mset: MarkedSet):
    return tuple(orb.twist for orb in mset.orbits)


def _profile(problem: SurgeryProblem):
    key = problem.geometry()
    if key not in _profiles:
        _profiles[key] = case_profile(problem.A, problem.X, problem.Y,
                                      _frame(problem.A))
    return _profiles[key]


def _domination(problem: SurgeryProblem, own: str, sign: str):
    """Domination threshold for the (own-set rectangles, sign) variant, or
    None when some primitive rectangle misses the other set."""
    key = (problem.geometry(), own, sign)
    if key not in _dominations:
        X, Y = problem.X, problem.Y
        first, second = (X, Y) if own == "X" else (Y, X)
        try:
            analysis = DominationAnalysis(problem.A, first, second, sign=sign,
                                          frame=_frame(problem.A))
            _dominations[key] = analysis
        except DominationHypothesisError:
            _dominations[key] = None
    return _dominations[key]


def _staircase_at(problem: SurgeryProblem, own: str, base: Point,
                  quadrant: str):
    """A staircase of the own set at the given origin, or None."""
    key = (problem.geometry(), own, base, quadrant)
    if key not in _staircases:
        X, Y = problem.X, problem.Y
        first, second = (X, Y) if own == "X" else (Y, X)
        try:
            _staircases[key] = build_staircase(problem.A, first, second, base,
                                               quadrant, _frame(problem.A))
        except StaircaseError:
            _staircases[key] = None
    return _staircases[key]


def _staircase(problem: SurgeryProblem, own: str, quadrant: str):
    """A staircase of the own set avoiding the other, tried from every point
    of the own set; None when no origin admits one."""
    key = (problem.geometry(), own, quadrant)
    if key not in _staircases:
        first = problem.X if own == "X" else problem.Y
        found = None
        for base in first.points:
            st = _staircase_at(problem, own, base, quadrant)
            if st is not None:
                found = (st, incompleteness_threshold(st))
                break
        _staircases[key] = found
    return _staircases[key]


# ---------------------------------------------------------------------------
# the decision procedure


def _sign_rule(problem: SurgeryProblem):
    nonzero = [t for t in _twists(problem.X) + _twists(problem.Y) if t != 0]
    if not nonzero:
        return Verdict("Suspension", "zero-surgeries")
    if all(t > 0 for t in nonzero):
        return Verdict("RCoveredPositive", "sign-rule",
                       {"twists": {"X": list(_twists(problem.X)),
                                   "Y": list(_twists(problem.Y))}})
    if all(t < 0 for t in nonzero):
        return Verdict("RCoveredNegative", "sign-rule",
                       {"twists": {"X": list(_twists(problem.X)),
                                   "Y": list(_twists(problem.Y))}})
    return None


_DOMINATION_VARIANTS = (
    # (own rectangles, sign, twisted set, direction, verdict)
    ("X", "positive", "Y", +1, "RCoveredPositive"),
    ("X", "negative", "Y", -1, "RCoveredNegative"),
    ("Y", "positive", "X", +1, "RCoveredPositive"),
    ("Y", "negative", "X", -1, "RCoveredNegative"),
)


def _domination_rule(problem: SurgeryProblem):
    for own, sign, twisted, direction, status in _DOMINATION_VARIANTS:
        other = problem.Y if twisted == "Y" else problem.X
        if (problem.X if own == "X" else problem.Y).is_empty():
            continue
        if other.is_empty():
            continue
        analysis = _domination(problem, own, sign)
        if analysis is None:
            continue
        tw = _twists(other)
        if direction > 0 and not all(t >= analysis.threshold for t in tw):
            continue
        if direction < 0 and not all(t <= -analysis.threshold for t in tw):
            continue
        rule = f"domination-{sign}" + ("" if own == "X" else "-roles-swapped")
        return Verdict(status, rule, {
            "rectangles": own, "sign": sign,
            "threshold": analysis.threshold,
            "twisted_set": twisted, "twists": list(tw),
        })
    return None


_STAIRCASE_VARIANTS = (
    # ((X staircase quadrant, X twist direction), (Y quadrant, Y direction))
    (("++", -1), ("+-", +1)),   # positive X-staircase, negative Y-staircase
    (("+-", +1), ("++", -1)),   # mirror: negative X-staircase, positive Y
)


def _staircase_rule(problem: SurgeryProblem):
    if problem.X.is_empty() or problem.Y.is_empty():
        return None
    for (qx, dx), (qy, dy) in _STAIRCASE_VARIANTS:
        got_x = _staircase(problem, "X", qx)
        got_y = _staircase(problem, "Y", qy)
        if got_x is None or got_y is None:
            continue
        (st_x, nx), (st_y, ny) = got_x, got_y
        tx, ty = _twists(problem.X), _twists(problem.Y)
        if not all(t * dx >= nx for t in tx):
            continue
        if not all(t * dy >= ny for t in ty):
            continue
        rule = ("staircase-adjacent-quadrants" if qx == "++"
                else "staircase-adjacent-quadrants-mirror")
        return Verdict("NonRCovered", rule, {
            "X_staircase": staircase_records(st_x),
            "Y_staircase": staircase_records(st_y),
            "thresholds": {"X": nx, "Y": ny},
            "twists": {"X": list(tx), "Y": list(ty)},
        })
    return None


def classify(problem: SurgeryProblem) -> Verdict:
    """Classify the surgered flow; see the module docstring for the order."""
    verdict = _sign_rule(problem)
    if verdict is not None:
        return verdict
    if not (problem.X.is_empty() or problem.Y.is_empty()):
        verdict = _domination_rule(problem)
        if verdict is not None:
            return verdict
        verdict = _staircase_rule(problem)
        if verdict is not None:
            return verdict
    diagnostics = {"twists": {"X": list(_twists(problem.X)),
                              "Y": list(_twists(problem.Y))}}
    reduction = True
    if not (problem.X.is_empty() or problem.Y.is_empty()):
        prof = _profile(problem)
        diagnostics["profile"] = {
            "booleans": list(prof.booleans), "case": prof.case,
            "symmetry": prof.symmetry,
        }
        reduction = prof.primitive_reduction_assumed
        thresholds = {}
        for own, sign, twisted, direction, _ in _DOMINATION_VARIANTS:
            analysis = _domination(problem, own, sign)
            if analysis is not None:
                thresholds[f"domination-{own}-{sign}"] = analysis.threshold
        for own, quadrants in (("X", ("++", "+-")), ("Y", ("++", "+-"))):
            for q in quadrants:
                got = _staircase(problem, own, q)
                if got is not None:
                    thresholds[f"staircase-{own}-{q}"] = got[1]
        diagnostics["thresholds"] = thresholds
    return Verdict("Unknown", "no-rule-applies", diagnostics,
                   primitive_reduction_assumed=reduction)


# ---------------------------------------------------------------------------
# per-quadrant certificates


def quadrant_report(problem: SurgeryProblem, point: Point, quadrant: str):
    """Certificate for the quadrant at a marked point.

    Returns (status, evidence) with status CompleteCertified (the domination
    threshold is met by the other set's twists), IncompleteCertified (a
    staircase exists and the point's own twists exceed its threshold), or
    Unknown.  Raises if both certificates fire: that would be contradictory.
    """
    base = mod1((point[0], point[1]))
    if base in problem.X.points:
        own, other, own_name = problem.X, problem.Y, "X"
    elif base in problem.Y.points:
        own, other, own_name = problem.Y, problem.X, "Y"
    else:
        raise ValueError(f"{point} is not a marked point")
    contracting = quadrant in ("++", "--")
    sign = "positive" if contracting else "negative"

    complete = None
    if not other.is_empty():
        analysis = _domination(problem, own_name, sign)
        if analysis is not None:
            n = max(1, max(iv.least_n for iv in analysis.intervals(base)))
            tw = _twists(other)
            ok = (all(t >= n for t in tw) if contracting
                  else all(t <= -n for t in tw))
            if ok:
                complete = {"threshold": n, "other_twists": list(tw)}

    incomplete = None
    if not other.is_empty():
        st = _staircase_at(problem, own_name, base, quadrant)
        if st is not None:
            n = incompleteness_threshold(st)
            tw = _twists(own)
            ok = (all(t <= -n for t in tw) if contracting
                  else all(t >= n for t in tw))
            if ok:
                incomplete = {"threshold": n, "own_twists": list(tw),
                              "staircase": staircase_records(st)}

    if complete is not None and incomplete is not None:
        raise InvariantError(
            f"contradictory certificates for quadrant {quadrant} at {base}")
    if complete is not None:
        return "CompleteCertified", complete
    if incomplete is not None:
        return "IncompleteCertified", incomplete
    return "Unknown", {}


def verdict_records(verdict: Verdict) -> dict:
    """JSON-ready serialization of a verdict."""
    return {
        "status": verdict.status,
        "rule": verdict.rule,
        "primitive_reduction_assumed": verdict.primitive_reduction_assumed,
        "evidence": verdict.evidence,
    }
