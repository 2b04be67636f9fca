"""Deterministic SVG 1.1 figures for censuses, staircases, and game traces.

All drawing happens in eigen (s, u) coordinates: the stable direction is
horizontal, the unstable one vertical (flipped for screen y).  Exact values
are converted to floats for display only; numbers are formatted with a fixed
precision and elements are emitted in insertion order, so identical input
produces byte-identical output.
"""

from __future__ import annotations

from fractions import Fraction

_STYLE = (
    ".axis{stroke:#999;stroke-width:1;stroke-dasharray:4 3}"
    ".mark-X{fill:#1f4f9f}"
    ".mark-Y{fill:#c03030}"
    ".rect-positive{fill:none;stroke:#2a7a2a;stroke-width:1.2}"
    ".rect-negative{fill:none;stroke:#a05a00;stroke-width:1.2}"
    ".step{fill:#f2f2f2;stroke:#444;stroke-width:1}"
    ".zone{fill:#dce8f7;stroke:#7a9cc8;stroke-width:0.8}"
    ".trace{fill:none;stroke:#7a1fa0;stroke-width:1.5}"
    ".diag{stroke:#555;stroke-width:0.8}"
)


def _fmt(v) -> str:
    return f"{float(v):.4f}"


class Figure:
    """An SVG canvas over a data window in (s, u) coordinates."""

    def __init__(self, s_min, s_max, u_min, u_max, width=640, height=640,
                 margin=20):
        self.s_min, self.u_min = float(s_min), float(u_min)
        s_span = max(float(s_max) - self.s_min, 1e-9)
        u_span = max(float(u_max) - self.u_min, 1e-9)
        self.width, self.height, self.margin = width, height, margin
        self._xs = (width - 2 * margin) / s_span
        self._ys = (height - 2 * margin) / u_span
        self._elems: list[str] = []

    def _x(self, s) -> float:
        return self.margin + (float(s) - self.s_min) * self._xs

    def _y(self, u) -> float:
        return self.height - self.margin - (float(u) - self.u_min) * self._ys

    def line(self, s0, u0, s1, u1, cls):
        self._elems.append(
            f'<line class="{cls}" x1="{_fmt(self._x(s0))}" y1="{_fmt(self._y(u0))}"'
            f' x2="{_fmt(self._x(s1))}" y2="{_fmt(self._y(u1))}"/>')

    def rect(self, s0, u0, s1, u1, cls):
        x, y = self._x(s0), self._y(u1)
        w = self._x(s1) - self._x(s0)
        h = self._y(u0) - self._y(u1)
        self._elems.append(
            f'<rect class="{cls}" x="{_fmt(x)}" y="{_fmt(y)}"'
            f' width="{_fmt(w)}" height="{_fmt(h)}"/>')

    def dot(self, s, u, cls, r=3.0):
        self._elems.append(
            f'<circle class="{cls}" cx="{_fmt(self._x(s))}"'
            f' cy="{_fmt(self._y(u))}" r="{_fmt(r)}"/>')

    def polyline(self, points, cls):
        pts = " ".join(f"{_fmt(self._x(s))},{_fmt(self._y(u))}"
                       for s, u in points)
        self._elems.append(f'<polyline class="{cls}" points="{pts}"/>')

    def render(self) -> str:
        body = "\n".join(self._elems)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
            f"<style>{_STYLE}</style>\n{body}\n</svg>\n")


def _axes(fig: Figure):
    fig.line(fig.s_min, 0, fig.s_min + 10**9, 0, "axis")
    fig.line(0, fig.u_min, 0, fig.u_min + 10**9, "axis")


def _marks(fig: Figure, view, sets, s_lo, s_hi, u_lo, u_hi):
    for mset in sets:
        if mset.is_empty():
            continue
        cls = "mark-Y" if mset.role == "Y" else "mark-X"
        for h in view.hits(mset, s_lo, s_hi, u_lo, u_hi):
            fig.dot(h.s, h.u, cls)


def census_figure(frame, reps, sets) -> str:
    """All census rectangles overlaid, with the marked lifts they span."""
    rects = [rep.rect for rep in reps]
    if rects:
        s_lo = min(float(r.rect.s0) for r in rects)
        s_hi = max(float(r.rect.s1) for r in rects)
        u_lo = min(float(r.rect.u0) for r in rects)
        u_hi = max(float(r.rect.u1) for r in rects)
    else:
        s_lo = u_lo = -1.0
        s_hi = u_hi = 1.0
    pad_s, pad_u = 0.05 * (s_hi - s_lo) + 0.1, 0.05 * (u_hi - u_lo) + 0.1
    fig = Figure(s_lo - pad_s, s_hi + pad_s, u_lo - pad_u, u_hi + pad_u)
    _axes(fig)
    from .torus import FrameView
    view = FrameView(frame)
    _marks(fig, view, sets,
           Fraction(s_lo - pad_s), Fraction(s_hi + pad_s),
           Fraction(u_lo - pad_u), Fraction(u_hi + pad_u))
    for mr in rects:
        r = mr.rect
        fig.rect(r.s0, r.u0, r.s1, r.u1, f"rect-{mr.sign}")
        fig.line(mr.origin.s, mr.origin.u, mr.endpoint.s, mr.endpoint.u, "diag")
    return fig.render()


def staircase_figure(st) -> str:
    """The stored staircase levels, their safety zones, and the marked lifts."""
    view = st.view
    s0, u0 = view.s(st.origin), view.u(st.origin)
    s_hi = max(float(s.Ls + s.safety) for s in st.steps)
    u_hi = float(st.axis_height)
    fig = Figure(-0.05 * s_hi, 1.05 * s_hi, -0.05 * u_hi, 1.1 * u_hi)
    for s in st.steps:
        fig.rect(s.Ls, s.q_lo, s.Ls + s.safety, s.q_hi, "zone")
        fig.rect(0, s.q_lo, s.Ls, s.q_hi, "step")
        o = (view.s(s.delta_origin) - s0, view.u(s.delta_origin) - u0)
        e = (view.s(s.delta_endpoint) - s0, view.u(s.delta_endpoint) - u0)
        fig.line(o[0], o[1], e[0], e[1], "diag")
    fig.line(-0.05 * s_hi, u_hi, 1.05 * s_hi, u_hi, "axis")
    for mset in (st.X, st.avoid):
        cls = "mark-Y" if mset.role == "Y" else "mark-X"
        for h in view.hits(mset,
                           s0 - Fraction(0.05 * s_hi), s0 + Fraction(1.05 * s_hi),
                           u0 - Fraction(0.05 * u_hi), u0 + Fraction(1.1 * u_hi)):
            fig.dot(h.s - s0, h.u - u0, cls)
    return fig.render()


def game_figure(outcome, t0, r, y_points=()) -> str:
    """The game's offset-versus-height path with one dot per crossing."""
    y_points = set(y_points)
    ts = [float(t0)] + [float(c.t_after) for c in outcome.trace]
    hs = [0.0] + [float(c.height) for c in outcome.trace]
    t_hi, h_hi = max(ts + [1.0]), max(hs + [float(r)])
    fig = Figure(-0.05 * t_hi, 1.05 * t_hi, -0.05 * h_hi, 1.05 * h_hi)
    _axes(fig)
    path = [(float(t0), 0.0)]
    for c in outcome.trace:
        path.append((float(c.t_before), float(c.height)))
        path.append((float(c.t_after), float(c.height)))
    fig.polyline(path, "trace")
    for c in outcome.trace:
        cls = "mark-Y" if c.hit.base in y_points else "mark-X"
        fig.dot(float(c.offset), float(c.height), cls, r=2.5)
    fig.line(-0.05 * t_hi, float(r), 1.05 * t_hi, float(r), "axis")
    return fig.render()
