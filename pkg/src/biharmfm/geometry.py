"""Scatterer shapes, point membership and midpoint quadrature nodes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union as _U

import numpy as np

BOUNDARY_TOL = 1e-12
DEFAULT_SAMPLES = 2048


class ShapeError(ValueError):
    pass


def _vec2(p) -> tuple[float, float]:
    x, y = (float(v) for v in p)
    return (x, y)


@dataclass(frozen=True)
class Disk:
    radius: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", _vec2(self.center))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ShapeError(f"disk radius must be positive, got {self.radius}")

    def boundary(self, samples: int = DEFAULT_SAMPLES) -> np.ndarray:
        t = np.linspace(0.0, 2 * np.pi, samples)
        pts = np.column_stack([np.cos(t), np.sin(t)]) * self.radius + self.center
        pts[-1] = pts[0]
        return pts


@dataclass(frozen=True)
class RadialCurve:
    """Star-shaped region r < rho(angle) about ``center``.

    ``radii`` tabulates rho at angles 2*pi*k/len(radii); values in between are
    linearly interpolated (periodically).
    """

    radii: tuple[float, ...]
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", _vec2(self.center))
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if len(radii) < 3:
            raise ShapeError("radial curve needs at least 3 tabulated radii")
        if min(radii) <= 0:
            raise ShapeError("radial curve radii must be strictly positive")

    def rho(self, angle) -> np.ndarray:
        r = np.asarray(self.radii + (self.radii[0],))
        grid = np.linspace(0.0, 2 * np.pi, len(r))
        return np.interp(np.mod(angle, 2 * np.pi), grid, r)

    def boundary(self, samples: int = DEFAULT_SAMPLES) -> np.ndarray:
        t = np.linspace(0.0, 2 * np.pi, samples)
        rho = self.rho(t)
        pts = np.column_stack([rho * np.cos(t), rho * np.sin(t)]) + self.center
        pts[-1] = pts[0]
        return pts


@dataclass(frozen=True)
class ParametricCurve:
    """Region enclosed by a closed polyline (first sample == last sample)."""

    points: np.ndarray = field(repr=False)
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
            raise ShapeError("polyline must be an (m, 2) array with m >= 4")
        if not np.all(np.isfinite(pts)):
            raise ShapeError("polyline has non-finite samples")
        if np.max(np.abs(pts[0] - pts[-1])) > 1e-12:
            raise ShapeError("polyline is not closed (first and last samples differ)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.validate and _self_intersects(pts):
            raise ShapeError("polyline self-intersects")

    def __eq__(self, other):
        return isinstance(other, ParametricCurve) and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())

    def boundary(self, samples: int | None = None) -> np.ndarray:
        return np.array(self.points)


@dataclass(frozen=True)
class Union:
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) < 1:
            raise ShapeError("union needs at least one part")
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if not _disjoint(parts[i], parts[j]):
                    raise ShapeError(f"union parts {i} and {j} overlap")

    def boundary(self, samples: int = DEFAULT_SAMPLES) -> list[np.ndarray]:
        return [p.boundary(samples) for p in self.parts]


Shape = _U[Disk, RadialCurve, ParametricCurve, Union]


# --------------------------------------------------------------------------
# builtins
# --------------------------------------------------------------------------

def star_boundary(samples: int = DEFAULT_SAMPLES, center=(0.0, 0.0)) -> np.ndarray:
    """0.175 (0.3 cos 5t + 2)(cos t, sin t) shifted by ``center``."""
    t = np.linspace(0.0, 2 * np.pi, samples)
    r = 0.175 * (0.3 * np.cos(5 * t) + 2.0)
    pts = np.column_stack([r * np.cos(t), r * np.sin(t)]) + _vec2(center)
    pts[-1] = pts[0]
    return pts


def kite_boundary(samples: int = DEFAULT_SAMPLES, center=(0.0, 0.0)) -> np.ndarray:
    """0.5 (0.75 cos t + 0.3 cos 2t, sin t) shifted by ``center``."""
    t = np.linspace(0.0, 2 * np.pi, samples)
    pts = 0.5 * np.column_stack([0.75 * np.cos(t) + 0.3 * np.cos(2 * t), np.sin(t)])
    pts = pts + _vec2(center)
    pts[-1] = pts[0]
    return pts


BUILTIN_SHAPES = ("disk", "star", "kite", "two_disks")


def builtin_shape(name: str, radius: float = 0.5, center=(0.0, 0.0),
                  samples: int = DEFAULT_SAMPLES) -> Shape:
    """Return one of the reference geometries.

    ``center`` shifts the whole shape (for ``two_disks`` it is added to both
    disk centers).  ``radius`` only applies to ``disk``.
    """
    if samples < 16:
        raise ShapeError("samples must be >= 16")
    if name == "disk":
        return Disk(radius, center)
    if name == "star":
        return ParametricCurve(star_boundary(samples, center))
    if name == "kite":
        return ParametricCurve(kite_boundary(samples, center))
    if name == "two_disks":
        cx, cy = _vec2(center)
        return Union((Disk(0.5, (-0.5 + cx, 0.5 + cy)), Disk(0.5, (1.0 + cx, 1.5 + cy))))
    raise ShapeError(f"unknown shape {name!r}; expected one of {', '.join(BUILTIN_SHAPES)}")


def shifted(shape: Shape, offset) -> Shape:
    dx, dy = _vec2(offset)
    if isinstance(shape, Disk):
        return Disk(shape.radius, (shape.center[0] + dx, shape.center[1] + dy))
    if isinstance(shape, RadialCurve):
        return RadialCurve(shape.radii, (shape.center[0] + dx, shape.center[1] + dy))
    if isinstance(shape, ParametricCurve):
        return ParametricCurve(shape.points + (dx, dy), validate=False)
    if isinstance(shape, Union):
        return Union(tuple(shifted(p, offset) for p in shape.parts))
    raise TypeError(type(shape))


# --------------------------------------------------------------------------
# membership
# --------------------------------------------------------------------------

def _polyline_contains(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Even-odd ray casting (ray towards +x), boundary band counted inside."""
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    near = np.zeros(len(pts), dtype=bool)
    x0, y0 = poly[:-1, 0], poly[:-1, 1]
    x1, y1 = poly[1:, 0], poly[1:, 1]
    for k in range(len(x0)):
        ax, ay, bx, by = x0[k], y0[k], x1[k], y1[k]
        crosses = (ay > y) != (by > y)
        if crosses.any():
            xc = ax + (y - ay) * (bx - ax) / np.where(by != ay, by - ay, 1.0)
            inside ^= crosses & (x < xc)
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        t = np.clip(((x - ax) * dx + (y - ay) * dy) / seg2, 0.0, 1.0) if seg2 > 0 else 0.0
        px, py = ax + t * dx - x, ay + t * dy - y
        near |= px * px + py * py <= BOUNDARY_TOL**2
    return inside | near


def contains_points(shape: Shape, pts) -> np.ndarray:
    """Vectorised membership test for an (m, 2) array of points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if isinstance(shape, Disk):
        d = np.hypot(pts[:, 0] - shape.center[0], pts[:, 1] - shape.center[1])
        return d <= shape.radius + BOUNDARY_TOL
    if isinstance(shape, RadialCurve):
        dx, dy = pts[:, 0] - shape.center[0], pts[:, 1] - shape.center[1]
        return np.hypot(dx, dy) <= shape.rho(np.arctan2(dy, dx)) + BOUNDARY_TOL
    if isinstance(shape, ParametricCurve):
        return _polyline_contains(shape.points, pts)
    if isinstance(shape, Union):
        out = np.zeros(len(pts), dtype=bool)
        for part in shape.parts:
            out |= contains_points(part, pts)
        return out
    raise TypeError(type(shape))


def contains(shape: Shape, p) -> bool:
    return bool(contains_points(shape, np.asarray(p, dtype=float).reshape(1, 2))[0])


def grid_mask(shape: Shape, xs, ys) -> np.ndarray:
    """Membership on the tensor grid, shape (len(xs), len(ys)).

    Polylines are filled scanline by scanline (the even-odd rule along each
    grid line y = const), which is much cheaper than per-point ray casting.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if isinstance(shape, ParametricCurve):
        return _scanline_fill(shape.points, xs, ys)
    if isinstance(shape, Union):
        out = np.zeros((len(xs), len(ys)), dtype=bool)
        for part in shape.parts:
            out |= grid_mask(part, xs, ys)
        return out
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return contains_points(shape, np.column_stack([X.ravel(), Y.ravel()])).reshape(X.shape)


def _scanline_fill(poly: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    a, b = poly[:-1], poly[1:]
    out = np.zeros((len(xs), len(ys)), dtype=bool)
    for j, y in enumerate(ys):
        crosses = (a[:, 1] > y) != (b[:, 1] > y)
        if not crosses.any():
            continue
        aa, bb = a[crosses], b[crosses]
        xc = np.sort(aa[:, 0] + (y - aa[:, 1]) * (bb[:, 0] - aa[:, 0]) / (bb[:, 1] - aa[:, 1]))
        # even-odd: x < xc crossed an odd number of times
        count = len(xc) - np.searchsorted(xc, xs, side="right")
        col = (count % 2) == 1
        # boundary band
        idx = np.searchsorted(xc, xs)
        lo = np.abs(xs - xc[np.clip(idx - 1, 0, len(xc) - 1)])
        hi = np.abs(xs - xc[np.clip(idx, 0, len(xc) - 1)])
        col |= np.minimum(lo, hi) <= BOUNDARY_TOL
        out[:, j] = col
    return out


# --------------------------------------------------------------------------
# geometry helpers
# --------------------------------------------------------------------------

def bounding_box(shape: Shape) -> tuple[float, float, float, float]:
    """(xmin, xmax, ymin, ymax)."""
    if isinstance(shape, Disk):
        (cx, cy), r = shape.center, shape.radius
        return (cx - r, cx + r, cy - r, cy + r)
    if isinstance(shape, RadialCurve):
        rmax = max(shape.radii)
        cx, cy = shape.center
        return (cx - rmax, cx + rmax, cy - rmax, cy + rmax)
    if isinstance(shape, ParametricCurve):
        p = shape.points
        return (p[:, 0].min(), p[:, 0].max(), p[:, 1].min(), p[:, 1].max())
    if isinstance(shape, Union):
        boxes = np.array([bounding_box(s) for s in shape.parts])
        return (boxes[:, 0].min(), boxes[:, 1].max(), boxes[:, 2].min(), boxes[:, 3].max())
    raise TypeError(type(shape))


def _outline(shape: Shape) -> np.ndarray:
    if isinstance(shape, Union):
        return np.vstack([_outline(p) for p in shape.parts])
    return shape.boundary(DEFAULT_SAMPLES)


def diameter(shape: Shape) -> float:
    if isinstance(shape, Disk):
        return 2.0 * shape.radius
    pts = _outline(shape)
    # convex-hull-free O(m^2) in blocks; m is a few thousand at most
    best = 0.0
    for start in range(0, len(pts), 512):
        blk = pts[start:start + 512]
        d = np.hypot(blk[:, None, 0] - pts[None, :, 0], blk[:, None, 1] - pts[None, :, 1])
        best = max(best, float(d.max()))
    return best


def area(shape: Shape) -> float:
    """Exact area for disks, shoelace formula on the outline otherwise."""
    if isinstance(shape, Disk):
        return math.pi * shape.radius**2
    if isinstance(shape, Union):
        return sum(area(p) for p in shape.parts)
    p = shape.boundary(DEFAULT_SAMPLES)
    return 0.5 * abs(float(np.dot(p[:-1, 0], p[1:, 1]) - np.dot(p[1:, 0], p[:-1, 1])))


def _disjoint(s1: Shape, s2: Shape) -> bool:
    if isinstance(s1, Disk) and isinstance(s2, Disk):
        d = math.dist(s1.center, s2.center)
        return d > s1.radius + s2.radius
    b1, b2 = bounding_box(s1), bounding_box(s2)
    if b1[1] < b2[0] or b2[1] < b1[0] or b1[3] < b2[2] or b2[3] < b1[2]:
        return True
    o1, o2 = _outline(s1), _outline(s2)
    return not (contains_points(s2, o1).any() or contains_points(s1, o2).any())


def _self_intersects(pts: np.ndarray) -> bool:
    a, b = pts[:-1], pts[1:]
    m = len(a)

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (
            q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    for i in range(m - 2):
        j = np.arange(i + 2, m if i > 0 else m - 1)
        if len(j) == 0:
            continue
        p, q = a[i], b[i]
        r, s = a[j], b[j]
        d1 = orient(p, q, r)
        d2 = orient(p, q, s)
        d3 = orient(r, s, p[None, :])
        d4 = orient(r, s, q[None, :])
        if np.any((d1 * d2 < 0) & (d3 * d4 < 0)):
            return True
    return False


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSet:
    nodes: np.ndarray = field(repr=False)
    weight: float
    h: float

    @property
    def total_weight(self) -> float:
        return self.weight * len(self.nodes)

    def __len__(self):
        return len(self.nodes)


def quadrature_nodes(shape: Shape, h: float) -> QuadratureSet:
    """Midpoint rule: centres of the h-grid over the bounding box inside ``shape``."""
    diam = diameter(shape)
    if not (h > 0) or h > diam / 8 * (1 + 1e-12):
        raise ShapeError(f"quadrature cell size must satisfy 0 < h <= diameter/8 = {diam / 8:.6g}")
    xmin, xmax, ymin, ymax = bounding_box(shape)
    nx = max(1, int(math.ceil((xmax - xmin) / h - 1e-9)))
    ny = max(1, int(math.ceil((ymax - ymin) / h - 1e-9)))
    xs = xmin + h * (np.arange(nx) + 0.5)
    ys = ymin + h * (np.arange(ny) + 0.5)
    mask = grid_mask(shape, xs, ys)
    ix, iy = np.nonzero(mask)
    if len(ix) == 0:
        raise ShapeError("no quadrature node falls inside the shape; reduce h")
    nodes = np.column_stack([xs[ix], ys[iy]])
    nodes.setflags(write=False)
    return QuadratureSet(nodes=nodes, weight=h * h, h=h)


def default_born_h(shape: Shape) -> float:
    return diameter(shape) / 400.0
