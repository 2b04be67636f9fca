"""Exact-arithmetic tools for surgered suspension Anosov flows.

The package decides, with certificates, whether the orbit space of a
suspension flow modified by integer surgeries on periodic orbits carries a
globally ordered (R-covered) structure, via:

- `quadfield`: exact arithmetic in Q(sqrt(D));
- `torus`: hyperbolic matrices, eigenframes, marked orbits, and exact
  enumeration of marked lifts in (stable, unstable) boxes;
- `rectangles`: the primitive marked-rectangle census, disjointness profiles,
  and strings of rectangles;
- `game`: the holonomy crossing game and the domination threshold;
- `staircase`: periodic staircases and the incompleteness threshold;
- `classify`: the combined decision procedure;
- `cli`: the `anosurg` command-line interface;
- `svgfig`: deterministic SVG figures.
"""

from .quadfield import (QuadFieldError, QuadNum, qn_ceil, qn_floor,
                        qn_from_str, qn_pow, qn_sign, qn_to_str)
from .torus import (EigenFrame, FrameView, GroupElement, HyperbolicMatrix,
                    InvariantError, MarkedPointHit, MarkedSet, Orbit,
                    UnsupportedMatrixError, eigenframe, enumerate_hits,
                    fixing_lift, hits_in_box, marked_set, mod1, orbit_of,
                    point, quadrant_contracting, quadrant_view, sets_disjoint,
                    QUADRANTS)
from .rectangles import (CaseProfile, EigenRect, MarkedRect, RectOrbitRep,
                         StringDescriptor, build_string, case_profile,
                         census_records, enumerate_primitive, is_primitive,
                         lattice_widths, marked_rect, rect_meets,
                         string_element)
from .game import (DEFAULT_BUDGET, Crossing, DominationAnalysis,
                   DominationHypothesisError, DominationInterval, GameConfig,
                   GameError, GameOutcome, domination_threshold,
                   game_trace_records, play_game)
from .staircase import (StairStep, Staircase, StaircaseError, build_staircase,
                        containment_check, incompleteness_threshold,
                        staircase_records)
from .classify import (STATUSES, SurgeryProblem, Verdict, classify,
                       quadrant_report, verdict_records)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
