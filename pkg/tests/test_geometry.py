import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biharmfm import geometry as g


def test_builtin_disk():
    assert g.builtin_shape("disk", radius=0.5) == g.Disk(0.5, (0.0, 0.0))


def test_star_first_boundary_point():
    s = g.builtin_shape("star")
    assert np.allclose(s.points[0], (0.175 * 2.3, 0.0), atol=1e-15)


def test_kite_first_boundary_point():
    k = g.builtin_shape("kite")
    assert np.allclose(k.points[0], (0.5 * (0.75 + 0.3), 0.0), atol=1e-15)


def test_two_disks():
    u = g.builtin_shape("two_disks")
    assert u.parts == (g.Disk(0.5, (-0.5, 0.5)), g.Disk(0.5, (1.0, 1.5)))


@pytest.mark.parametrize("name", ["star", "kite"])
def test_boundaries_closed(name):
    pts = g.builtin_shape(name).points
    assert np.abs(pts[0] - pts[-1]).max() <= 1e-12
    assert len(pts) == g.DEFAULT_SAMPLES


def test_sample_count_configurable():
    assert len(g.builtin_shape("star", samples=300).points) == 300


def test_unknown_shape():
    with pytest.raises(g.ShapeError, match="unknown shape"):
        g.builtin_shape("ellipse")


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan])
def test_bad_disk_radius(bad):
    with pytest.raises(ValueError):
        g.Disk(bad)


def test_radial_curve_needs_positive_radii():
    with pytest.raises(ValueError):
        g.RadialCurve(np.array([1.0, 0.0, 1.0, 1.0]))


def test_self_intersecting_polyline_rejected():
    bowtie = [(0, 0), (1, 1), (1, 0), (0, 1), (0, 0)]
    with pytest.raises(g.ShapeError):
        g.ParametricCurve(bowtie)


def test_overlapping_union_rejected():
    with pytest.raises(g.ShapeError):
        g.Union((g.Disk(0.5), g.Disk(0.5, (0.6, 0.0))))


def test_contains_examples():
    assert g.contains(g.Disk(0.5), (0.3, 0.0))
    star = g.builtin_shape("star")
    assert not g.contains(star, (0.41, 0.0))
    assert g.contains(star, (0.40, 0.0))
    assert g.contains(g.builtin_shape("two_disks"), (1.0, 1.5))
    assert not g.contains(g.builtin_shape("two_disks"), (0.25, 1.0))


def test_boundary_band_counts_inside():
    assert g.contains(g.Disk(1.0), (1.0 + 5e-13, 0.0))
    sq = g.ParametricCurve([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
    assert g.contains(sq, (1.0, 0.5))
    assert g.contains(sq, (0.5, 0.0))


def test_radial_curve_membership():
    t = 2 * np.pi * np.arange(360) / 360
    rc = g.RadialCurve(0.175 * (0.3 * np.cos(5 * t) + 2), center=(0.2, -0.1))
    assert g.contains(rc, (0.2 + 0.40, -0.1))
    assert not g.contains(rc, (0.2 + 0.41, -0.1))


pts = st.tuples(st.floats(-2, 2), st.floats(-2, 2))
STAR = g.builtin_shape("star")
TWO = g.builtin_shape("two_disks")


@settings(max_examples=200, deadline=None)
@given(pts)
def test_union_is_disjunction(p):
    assert g.contains(TWO, p) == any(g.contains(q, p) for q in TWO.parts)


@settings(max_examples=200, deadline=None)
@given(pts)
def test_star_polyline_agrees_with_radial_bound(p):
    r = math.hypot(*p)
    if r < 1e-9:
        return
    t = math.atan2(p[1], p[0])
    rho = 0.175 * (0.3 * math.cos(5 * t) + 2)
    # polyline chords sit inside the true curve by O(h^2); skip a thin band
    if abs(r - rho) < 1e-5:
        return
    assert g.contains(STAR, p) == (r < rho)


def test_grid_mask_matches_pointwise():
    xs = np.linspace(-1, 1, 41)
    ys = np.linspace(-0.8, 1.2, 37)
    for name in ("star", "kite", "two_disks", "disk"):
        s = g.builtin_shape(name)
        m = g.grid_mask(s, xs, ys)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        ref = g.contains_points(s, np.column_stack([X.ravel(), Y.ravel()])).reshape(m.shape)
        assert m.shape == (41, 37)
        assert np.array_equal(m, ref), name


def test_shifted_moves_membership():
    s = g.builtin_shape("kite")
    t = g.shifted(s, (-0.5, 0.5))
    assert g.contains(t, (-0.5, 0.5)) == g.contains(s, (0.0, 0.0))


def test_disk_quadrature_weight():
    q = g.quadrature_nodes(g.Disk(0.5), 0.5 / 200)
    assert abs(q.total_weight - math.pi * 0.25) <= 0.005 * math.pi * 0.25
    assert q.weight == pytest.approx((0.5 / 200) ** 2)


def test_two_disks_quadrature_weight():
    q = g.quadrature_nodes(g.builtin_shape("two_disks"), 1 / 200)
    assert abs(q.total_weight - 2 * math.pi * 0.25) <= 0.005 * 2 * math.pi * 0.25


def test_quadrature_nodes_inside_and_bounded():
    s = g.builtin_shape("kite")
    q = g.quadrature_nodes(s, 0.02)
    assert g.contains_points(s, q.nodes).all()
    x0, x1, y0, y1 = g.bounding_box(s)
    assert q.total_weight <= (x1 - x0) * (y1 - y0)


def test_disk_quadrature_refinement():
    # midpoint counting error is erratic in h, so compare over a decade
    errs = [abs(g.quadrature_nodes(g.Disk(0.5), h).total_weight - math.pi / 4)
            for h in (0.5 / 25, 0.5 / 50, 0.5 / 100, 0.5 / 200, 0.5 / 400)]
    assert errs[-1] < errs[0] / 4
    assert max(errs[2:]) < errs[0]


def test_quadrature_h_limits():
    with pytest.raises(ValueError):
        g.quadrature_nodes(g.Disk(0.5), 0.2)
    with pytest.raises(ValueError):
        g.quadrature_nodes(g.Disk(0.5), 0.0)


def test_default_born_h():
    assert g.default_born_h(g.Disk(0.5)) == pytest.approx(1.0 / 400)


def test_polygon_area():
    sq = g.ParametricCurve([(0, 0), (2, 0), (2, 1), (0, 1), (0, 0)])
    assert g.area(sq) == pytest.approx(2.0)
    assert g.diameter(sq) == pytest.approx(math.sqrt(5))
