"""Hyperbolic matrices, eigenframes, marked orbits, and the exact
enumeration of marked lifts in (s, u) boxes, cross-checked against the
brute-force oracle."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anosurg import (GroupElement, InvariantError, QUADRANTS, QuadNum,
                     UnsupportedMatrixError, eigenframe, enumerate_hits,
                     fixing_lift, hits_in_box, marked_set, mod1, orbit_of,
                     point, quadrant_contracting, quadrant_view)
from anosurg.torus import HyperbolicMatrix, FrameView

from conftest import A2, A3, B2, C3, HALF, half_orbit_set, zero_orbit_set
from oracles import oracle_hits

coords = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def hit_keys(hits):
    return [(h.base, h.lattice, h.s, h.u, h.twist) for h in hits]


class TestMatricesAndFrames:
    def test_a2_frame(self, frame_a2):
        assert frame_a2.D == 5
        assert frame_a2.lam == QuadNum(Fraction(3, 2), Fraction(1, 2), 5)
        assert frame_a2.lam * frame_a2.lam_inv == QuadNum(1, 0, 5)

    def test_c3_frame(self, frame_c3):
        assert frame_c3.D == 32
        assert frame_c3.lam == QuadNum(3, Fraction(1, 2), 32)

    def test_rejections(self):
        with pytest.raises(UnsupportedMatrixError):
            HyperbolicMatrix(1, 1, 0, 1)          # parabolic
        with pytest.raises(UnsupportedMatrixError):
            HyperbolicMatrix(-2, -1, -1, -1)      # negative trace
        with pytest.raises(UnsupportedMatrixError):
            HyperbolicMatrix(2, 0, 0, 3)          # determinant != 1

    @given(coords, coords)
    def test_eigen_round_trip(self, x, y):
        frame = eigenframe(A2)
        p = (x, y)
        assert frame.from_eigen(frame.to_eigen(p)) == p

    @given(coords, coords)
    def test_diagonal_action(self, x, y):
        frame = eigenframe(C3)
        p = (x, y)
        ap = C3.apply(p)
        assert frame.s(ap) == frame.lam_inv * frame.s(p)
        assert frame.u(ap) == frame.lam * frame.u(p)


class TestOrbits:
    def test_half_orbit_periods(self):
        assert orbit_of(A2, point(HALF, HALF))[1] == 3
        assert orbit_of(A3, point(HALF, HALF))[1] == 2
        assert orbit_of(A2, point(0, 0))[1] == 1

    def test_orbit_closure(self):
        pts, period = orbit_of(A2, point(HALF, HALF))
        assert set(pts) == {(HALF, HALF), (HALF, Fraction(0)),
                            (Fraction(0), HALF)}
        for p in pts:
            assert A2.apply_mod1(p) in pts

    def test_twist_is_char_times_period(self):
        mset = marked_set(A2, [(point(HALF, HALF), 2)], "Y")
        assert mset.twist_of(point(HALF, 0)) == 6
        assert mset.common_period() == 3

    def test_overlapping_seeds_rejected(self):
        with pytest.raises(InvariantError):
            marked_set(A2, [(point(HALF, HALF), 1), (point(HALF, 0), 1)])

    def test_with_chars(self):
        mset = half_orbit_set(A2, 1)
        other = mset.with_chars([5])
        assert other.twist_of(point(0, HALF)) == 15
        assert other.points == mset.points


class TestHits:
    def test_unit_square_corners(self, frame_a2):
        X = zero_orbit_set(A2)
        corners = [(0, 0), (1, 0), (0, 1), (1, 1)]
        ss = [frame_a2.s(c) for c in corners]
        us = [frame_a2.u(c) for c in corners]
        closed = enumerate_hits(frame_a2, X, (min(ss), max(ss)),
                                (min(us), max(us)), "closed")
        lattices = {h.lattice for h in closed}
        assert {(0, 0), (1, 0), (0, 1), (1, 1)} <= lattices
        interior = enumerate_hits(frame_a2, X, (min(ss), max(ss)),
                                  (min(us), max(us)), "open")
        assert {(0, 0), (1, 1)} & {h.lattice for h in interior} == set()

    def test_matches_oracle_on_random_boxes(self, frame_a2):
        X = zero_orbit_set(A2, 1, "X")
        Y = half_orbit_set(A2, -2, "Y")
        rng = random.Random(20260823)
        for trial in range(25):
            vals = sorted(Fraction(rng.randint(-21, 21), 7) for _ in range(2))
            uvals = sorted(Fraction(rng.randint(-21, 21), 7) for _ in range(2))
            if vals[0] == vals[1] or uvals[0] == uvals[1]:
                continue
            include = tuple(rng.choice([True, False]) for _ in range(4))
            for mset in (X, Y):
                got = hit_keys(hits_in_box(frame_a2, mset, vals[0], vals[1],
                                           uvals[0], uvals[1], include))
                want = oracle_hits(frame_a2, mset, vals[0], vals[1],
                                   uvals[0], uvals[1], include)
                assert got == want

    def test_translation_equivariance(self, frame_a2):
        Y = half_orbit_set(A2)
        box = (Fraction(-2), Fraction(2), Fraction(-1), Fraction(3))
        base_hits = hits_in_box(frame_a2, Y, *box)
        ds, du = frame_a2.s((2, -1)), frame_a2.u((2, -1))
        moved = hits_in_box(frame_a2, Y, box[0] + ds, box[1] + ds,
                            box[2] + du, box[3] + du)
        assert [(h.base, h.lattice) for h in moved] == \
            [(h.base, (h.lattice[0] + 2, h.lattice[1] - 1))
             for h in base_hits]

    def test_renormalized_thin_box_matches_square_box(self, frame_a2):
        # the lifts in an extreme-aspect box are the A^6-images of the lifts
        # in its renormalized square partner, so the scan must agree exactly
        Y = half_orbit_set(A2)
        lam6 = frame_a2.lam ** 6
        box = (Fraction(-1), Fraction(1), Fraction(-1), Fraction(1))
        square = hits_in_box(frame_a2, Y, *box)
        thin = hits_in_box(frame_a2, Y, box[0] / lam6, box[1] / lam6,
                           box[2] * lam6, box[3] * lam6)
        mapped = []
        for h in square:
            img = tuple(c for c in
                        HyperbolicMatrix.from_rows(A2.power_rows(6)).apply(h.lift))
            mapped.append((mod1(img),
                           (img[0] - mod1(img)[0], img[1] - mod1(img)[1])))
        assert sorted((h.base, h.lattice) for h in thin) == \
            sorted((b, (int(k[0]), int(k[1]))) for b, k in mapped)

    def test_empty_set_and_bad_range(self, frame_a2):
        empty = marked_set(A2, [], "Y")
        assert hits_in_box(frame_a2, empty, Fraction(-9), Fraction(9),
                           Fraction(-9), Fraction(9)) == []
        with pytest.raises(ValueError):
            enumerate_hits(frame_a2, zero_orbit_set(A2), (1, 0), (0, 1))


class TestGroupAndViews:
    def test_group_algebra(self):
        g = GroupElement(A2, 2, (1, -1))
        h = GroupElement(A2, -1, (0, 3))
        p = (Fraction(1, 3), Fraction(2, 7))
        assert g.compose(h).apply(p) == g.apply(h.apply(p))
        assert g.inverse().apply(g.apply(p)) == p
        assert g.power(3).apply(p) == g.apply(g.apply(g.apply(p)))
        assert g.power(0).apply(p) == p

    def test_fixing_lift(self):
        z = point(HALF, HALF)
        g = fixing_lift(A2, z, 3)
        assert g.apply(z) == z
        with pytest.raises(InvariantError):
            fixing_lift(A2, z, 2)

    def test_quadrant_views(self, frame_a2):
        p = (Fraction(1, 3), Fraction(2, 5))
        s, u = frame_a2.s(p), frame_a2.u(p)
        signs = {"++": (1, 1), "--": (-1, -1), "+-": (1, -1), "-+": (-1, 1)}
        for q in QUADRANTS:
            view = quadrant_view(frame_a2, q)
            es, eu = signs[q]
            assert view.s(p) == es * s and view.u(p) == eu * u
        assert quadrant_contracting("++") and quadrant_contracting("--")
        assert not quadrant_contracting("+-")
        with pytest.raises(ValueError):
            quadrant_view(frame_a2, "xx")

    def test_view_hits_match_mirrored_raw_hits(self, frame_a2):
        Y = half_orbit_set(A2)
        view = FrameView(frame_a2, flip_s=True, flip_u=False)
        got = view.hits(Y, Fraction(0), Fraction(2), Fraction(-1), Fraction(1))
        raw = hits_in_box(frame_a2, Y, Fraction(-2), Fraction(0),
                          Fraction(-1), Fraction(1))
        assert sorted((h.base, h.lattice) for h in got) == \
            sorted((h.base, h.lattice) for h in raw)
        for h in got:
            assert h.s == -frame_a2.s(h.lift)
