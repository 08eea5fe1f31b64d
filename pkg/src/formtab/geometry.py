"""Planar geometry for tabletop scenes.

The canonical table frame has its origin at the front-left corner, x
pointing right and y pointing from the front edge toward the back edge.
Working coordinates are normalized: x is divided by table length, y by
table width, so the tabletop is the unit square. Angles are radians,
wrapped to (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Two edges closer than this are considered touching, not overlapping.
CONTACT_EPS = 1e-9


def wrap_angle(theta: float) -> float:
    """Wrap an angle in radians to the interval (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class TableFrame:
    """Rectangular tabletop, dimensions in meters (length along x)."""

    length: float
    width: float

    def __post_init__(self) -> None:
        if self.length <= 0.0 or self.width <= 0.0:
            raise ValueError("table dimensions must be positive, got %gx%g"
                             % (self.length, self.width))

    def normalize(self, x: float, y: float) -> tuple[float, float]:
        """Map a point in meters to normalized table coordinates."""
        return x / self.length, y / self.width

    def denormalize(self, x: float, y: float) -> tuple[float, float]:
        """Map a normalized point back to meters."""
        return x * self.length, y * self.width


@dataclass(frozen=True)
class ObjectShape:
    """Axis-aligned footprint of an object at theta = 0.

    length is the x extent, width the y extent. Units are whatever the
    surrounding code uses consistently (meters for scene files,
    normalized units inside samplers).
    """

    length: float
    width: float

    def __post_init__(self) -> None:
        if self.length <= 0.0 or self.width <= 0.0:
            raise ValueError("object dimensions must be positive, got %gx%g"
                             % (self.length, self.width))

    @property
    def area(self) -> float:
        return self.length * self.width

    def normalized(self, table: TableFrame) -> "ObjectShape":
        """Shape with dimensions divided by the table dimensions."""
        return ObjectShape(self.length / table.length, self.width / table.width)


@dataclass(frozen=True)
class Pose:
    """Object pose: centroid position plus rotation, theta in (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x, self.y, self.theta)):
            raise ValueError("pose components must be finite, got (%r, %r, %r)"
                             % (self.x, self.y, self.theta))
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.theta], dtype=float)


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned bounding box: left/right bound x, bottom/top bound y."""

    left: float
    right: float
    bottom: float
    top: float

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.top - self.bottom

    def intersects(self, other: "Aabb", eps: float = CONTACT_EPS) -> bool:
        return (self.right > other.left + eps and other.right > self.left + eps
                and self.top > other.bottom + eps and other.top > self.bottom + eps)


@dataclass(frozen=True)
class OrientedBox:
    """Rectangle with center (cx, cy), half extents (hx, hy), rotation theta."""

    cx: float
    cy: float
    hx: float
    hy: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.hx <= 0.0 or self.hy <= 0.0:
            raise ValueError("half extents must be positive, got %gx%g"
                             % (self.hx, self.hy))
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def area(self) -> float:
        return 4.0 * self.hx * self.hy

    def corners(self) -> np.ndarray:
        """The four corner points, shape (4, 2)."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        sx = np.array([-1.0, 1.0, 1.0, -1.0]) * self.hx
        sy = np.array([-1.0, -1.0, 1.0, 1.0]) * self.hy
        xs = self.cx + c * sx - s * sy
        ys = self.cy + s * sx + c * sy
        return np.stack([xs, ys], axis=1)

    def contains_point(self, x: float, y: float, tol: float = CONTACT_EPS) -> bool:
        """True if (x, y) lies inside the box, boundary inclusive within tol."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx, dy = x - self.cx, y - self.cy
        u = c * dx + s * dy
        v = -s * dx + c * dy
        return abs(u) <= self.hx + tol and abs(v) <= self.hy + tol


def to_oriented_box(shape: ObjectShape, pose: Pose, table: TableFrame | None = None) -> OrientedBox:
    """Build the object's oriented box in normalized table coordinates.

    The pose is already normalized. When a table is given, the shape is in
    meters and its dimensions are divided by the table dimensions first;
    the resulting normalized footprint is then rotated as a rigid body.
    Without a table the shape is taken to be normalized already.
    """
    dims = shape.normalized(table) if table is not None else shape
    return OrientedBox(pose.x, pose.y, dims.length / 2.0, dims.width / 2.0, pose.theta)


def aabb_of(box: OrientedBox) -> Aabb:
    """Axis-aligned bounding box of an oriented box."""
    pts = box.corners()
    return Aabb(float(pts[:, 0].min()), float(pts[:, 0].max()),
                float(pts[:, 1].min()), float(pts[:, 1].max()))


def _projection_separated(corners_a: np.ndarray, corners_b: np.ndarray,
                          axes: np.ndarray, eps: float) -> bool:
    for ax in axes:
        pa = corners_a @ ax
        pb = corners_b @ ax
        if pa.max() <= pb.min() + eps or pb.max() <= pa.min() + eps:
            return True
    return False


def overlap(a: OrientedBox, b: OrientedBox, eps: float = CONTACT_EPS) -> bool:
    """True if the two rectangles share interior area.

    Uses the separating axis test on the four edge normals. Boxes that
    merely touch along an edge or corner (within eps) do not overlap.
    """
    ca, cb = a.corners(), b.corners()
    def normals(theta: float) -> np.ndarray:
        c, s = math.cos(theta), math.sin(theta)
        return np.array([[c, s], [-s, c]])
    axes = np.vstack([normals(a.theta), normals(b.theta)])
    return not _projection_separated(ca, cb, axes, eps)
