"""Constructive samplers of classifier-positive arrangements.

Each relation has a direct geometric construction that places objects in
a satisfying configuration with randomized free coordinates; every draw
is verified with the classifier before it is emitted, and a uniform
rejection fallback covers shapes the construction cannot handle. Samples
serve as training data for learned factors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsatisfiableSampleError, ValidationError
from .factors.energies import grid_shape
from .geometry import ObjectShape, Pose, TableFrame
from .relations import (DEFAULT_THRESHOLDS, GroundAtom, REGISTRY, Scene,
                        SceneObject, Thresholds, resolve_relation)

_CONSTRUCTIVE_TRIES = 200
_MAX_TRIES = 10_000


@dataclass(frozen=True)
class ShapeDistribution:
    """Uniform object-footprint distribution in normalized units.

    Lengths and widths draw independently from their ranges; the width is
    then jittered by a relative fraction to vary aspect ratios.
    """

    length_range: tuple[float, float] = (0.05, 0.22)
    width_range: tuple[float, float] = (0.05, 0.22)
    aspect_jitter: float = 0.1

    def __post_init__(self) -> None:
        for lo, hi in (self.length_range, self.width_range):
            if not 0.0 < lo <= hi < 1.0:
                raise ValidationError("shape ranges need 0 < min <= max < 1")
        if not 0.0 <= self.aspect_jitter < 1.0:
            raise ValidationError("aspect_jitter must be in [0, 1)")

    def draw(self, rng: np.random.Generator, count: int,
             max_extent: float | None = None) -> np.ndarray:
        """Draws (count, 2) footprints, optionally capped per dimension."""
        lo_l, hi_l = self.length_range
        lo_w, hi_w = self.width_range
        if max_extent is not None:
            hi_l = max(lo_l, min(hi_l, max_extent))
            hi_w = max(lo_w, min(hi_w, max_extent))
        lengths = rng.uniform(lo_l, hi_l, count)
        widths = rng.uniform(lo_w, hi_w, count)
        if self.aspect_jitter > 0.0:
            widths = widths * rng.uniform(1.0 - self.aspect_jitter,
                                          1.0 + self.aspect_jitter, count)
            widths = np.clip(widths, lo_w, hi_w)
        return np.column_stack([lengths, widths])


@dataclass(frozen=True)
class RelationSample:
    """One classifier-positive arrangement: footprints plus poses."""

    relation: str
    shapes: np.ndarray
    poses: np.ndarray

    def pose_objects(self) -> list[Pose]:
        return [Pose(*row) for row in self.poses]


def _theta(rng: np.random.Generator, th: Thresholds) -> float:
    """Mostly axis-aligned rotations with occasional small jitter."""
    if rng.random() < 0.8:
        return 0.0
    return rng.uniform(-th.angle_tol, th.angle_tol)


def _extents(shapes: np.ndarray, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned half extents of rotated footprints."""
    c = np.abs(np.cos(thetas))
    s = np.abs(np.sin(thetas))
    hx = 0.5 * (shapes[:, 0] * c + shapes[:, 1] * s)
    hy = 0.5 * (shapes[:, 0] * s + shapes[:, 1] * c)
    return hx, hy


def _uniform(rng: np.random.Generator, lo: float, hi: float) -> float | None:
    if hi < lo:
        return None
    return rng.uniform(lo, hi)


def _disk(rng: np.random.Generator, radius: float) -> tuple[float, float]:
    r = radius * math.sqrt(rng.random())
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return r * math.cos(phi), r * math.sin(phi)


def _pack_line(rng: np.random.Generator, extents: np.ndarray,
               spread_tol: float) -> np.ndarray | None:
    """Equally spaced centers along [0,1] with non-overlapping extents."""
    k = len(extents)
    step_min = max(extents[i] + extents[i + 1] for i in range(k - 1)) + 0.005
    span_slack = 1.0 - extents[0] - extents[-1] - (k - 1) * step_min
    if span_slack < 0.0:
        return None
    step = step_min + rng.uniform(0.0, span_slack / (k - 1))
    start = _uniform(rng, extents[0],
                     1.0 - extents[-1] - (k - 1) * step)
    if start is None:
        return None
    centers = start + step * np.arange(k)
    centers += rng.uniform(-spread_tol / 4.0, spread_tol / 4.0, k)
    return centers


def _construct(relation: str, shapes: np.ndarray, rng: np.random.Generator,
               th: Thresholds) -> np.ndarray | None:
    """One constructive draw of poses [k, 3], or None if the draw failed."""
    k = len(shapes)
    thetas = np.array([_theta(rng, th) for _ in range(k)])
    aligned = relation in ("horizontally_aligned", "vertically_aligned",
                           "aligned_in_horizontal_line",
                           "aligned_in_vertical_line", "regular_grid",
                           "sorted", "on_top_of")
    if aligned:
        thetas[:] = thetas[0]
    hx, hy = _extents(shapes, thetas)
    poses = np.zeros((k, 3))
    poses[:, 2] = thetas

    def free_x(i: int) -> float | None:
        return _uniform(rng, hx[i], 1.0 - hx[i])

    def free_y(i: int) -> float | None:
        return _uniform(rng, hy[i], 1.0 - hy[i])

    if relation in ("central_column", "central_row"):
        band = relation == "central_column"
        lo = max(0.5 - 0.25, (hx if band else hy)[0])
        hi = min(0.5 + 0.25, 1.0 - (hx if band else hy)[0])
        main = _uniform(rng, lo, hi)
        other = free_y(0) if band else free_x(0)
        if main is None or other is None:
            return None
        poses[0, :2] = (main, other) if band else (other, main)
        return poses

    if relation == "centered_table":
        dx, dy = _disk(rng, 0.95 * th.center_tol)
        poses[0, :2] = (0.5 + dx, 0.5 + dy)
        return poses

    if relation in ("left_half", "right_half", "front_half", "back_half"):
        x_axis = relation in ("left_half", "right_half")
        h = (hx if x_axis else hy)[0]
        if relation in ("left_half", "front_half"):
            main = _uniform(rng, h, 0.5 - h)
        else:
            main = _uniform(rng, 0.5 + h, 1.0 - h)
        other = free_y(0) if x_axis else free_x(0)
        if main is None or other is None:
            return None
        poses[0, :2] = (main, other) if x_axis else (other, main)
        return poses

    if relation in ("near_left_edge", "near_right_edge",
                    "near_front_edge", "near_back_edge"):
        x_axis = relation in ("near_left_edge", "near_right_edge")
        h = (hx if x_axis else hy)[0]
        inset = rng.uniform(0.0, th.edge_near)
        if relation in ("near_left_edge", "near_front_edge"):
            main = inset + h
        else:
            main = 1.0 - inset - h
        other = free_y(0) if x_axis else free_x(0)
        if other is None or not h <= main <= 1.0 - h:
            return None
        poses[0, :2] = (main, other) if x_axis else (other, main)
        return poses

    if relation in ("horizontally_aligned", "vertically_aligned"):
        horiz = relation == "horizontally_aligned"
        for i in range(k):
            x, y = free_x(i), free_y(i)
            if x is None or y is None:
                return None
            poses[i, :2] = (x, y)
        if horiz:
            bottom = poses[0, 1] - hy[0]
            poses[1, 1] = bottom + rng.uniform(-th.align_tol, th.align_tol) + hy[1]
            if abs(poses[0, 0] - poses[1, 0]) < hx[0] + hx[1]:
                return None
        else:
            poses[1, 0] = poses[0, 0] + rng.uniform(-th.align_tol, th.align_tol)
            if abs(poses[0, 1] - poses[1, 1]) < hy[0] + hy[1]:
                return None
        return poses

    if relation in ("left_of", "right_of"):
        i, j = (0, 1) if relation == "left_of" else (1, 0)
        gap = rng.uniform(0.0, th.align_tol)
        xi = _uniform(rng, hx[i], 1.0 - hx[i] - gap - 2.0 * hx[j])
        yi = free_y(i)
        if xi is None or yi is None:
            return None
        slack = hy[i] + hy[j] - 2.0 * th.overlap_frac * min(hy[i], hy[j])
        dy = rng.uniform(-0.95 * slack, 0.95 * slack)
        yj = yi + dy
        if not hy[j] <= yj <= 1.0 - hy[j]:
            return None
        poses[i, :2] = (xi, yi)
        poses[j, :2] = (xi + hx[i] + gap + hx[j], yj)
        return poses

    if relation == "on_top_of":
        mx = 0.5 * (shapes[1, 0] - shapes[0, 0])
        my = 0.5 * (shapes[1, 1] - shapes[0, 1])
        if mx < 0.0 or my < 0.0:
            return None
        xj, yj = free_x(1), free_y(1)
        if xj is None or yj is None:
            return None
        u = rng.uniform(-0.9 * mx, 0.9 * mx)
        v = rng.uniform(-0.9 * my, 0.9 * my)
        cth, sth = math.cos(thetas[1]), math.sin(thetas[1])
        poses[1, :2] = (xj, yj)
        poses[0, :2] = (xj + cth * u - sth * v, yj + sth * u + cth * v)
        return poses

    if relation == "centered":
        xj, yj = free_x(1), free_y(1)
        if xj is None or yj is None:
            return None
        dx, dy = _disk(rng, 0.95 * th.center_tol)
        poses[1, :2] = (xj, yj)
        poses[0, :2] = (xj + dx, yj + dy)
        return poses

    if relation in ("vertical_symmetry_on_table", "horizontal_symmetry_on_table"):
        vert = relation == "vertical_symmetry_on_table"
        h_main = hx if vert else hy
        h_side = hy if vert else hx
        main_j = _uniform(rng, h_main[1], 0.5 - h_main[1] - h_main[0] - 0.01)
        side_j = _uniform(rng, h_side[1], 1.0 - h_side[1])
        if main_j is None or side_j is None:
            return None
        dx, dy = _disk(rng, 0.95 * th.center_tol)
        main_i = 1.0 - main_j + dx
        side_i = side_j + dy
        poses[1, :2] = (main_j, side_j) if vert else (side_j, main_j)
        poses[0, :2] = (main_i, side_i) if vert else (side_i, main_i)
        poses[0, 2] = -thetas[1]
        return poses

    if relation in ("vertical_line_symmetry", "horizontal_line_symmetry"):
        vert = relation == "vertical_line_symmetry"
        h_main = hx if vert else hy
        h_side = hy if vert else hx
        margin = h_main[0] + max(h_main[1], h_main[2]) + 0.01
        main_a = _uniform(rng, margin + h_main[1], 1.0 - margin - h_main[2])
        side_a = _uniform(rng, h_side[0], 1.0 - h_side[0])
        if main_a is None or side_a is None:
            return None
        off = rng.uniform(margin, min(main_a - h_main[1],
                                      1.0 - main_a - h_main[2]))
        side_j = _uniform(rng, h_side[2], 1.0 - h_side[2])
        if side_j is None:
            return None
        dx, dy = _disk(rng, 0.95 * th.center_tol)
        main_i, main_j = main_a - off + dx, main_a + off
        side_i = side_j + dy
        poses[0, :2] = (main_a, side_a) if vert else (side_a, main_a)
        poses[1, :2] = (main_i, side_i) if vert else (side_i, main_i)
        poses[2, :2] = (main_j, side_j) if vert else (side_j, main_j)
        poses[1, 2] = -thetas[2]
        return poses

    if relation in ("aligned_in_horizontal_line", "aligned_in_vertical_line"):
        horiz = relation == "aligned_in_horizontal_line"
        along_h = hx if horiz else hy
        cross_h = hy if horiz else hx
        centers = _pack_line(rng, along_h, th.spacing_tol)
        if centers is None:
            return None
        base = _uniform(rng, cross_h.max(), 1.0 - cross_h.max())
        if base is None:
            return None
        if horiz:
            # shared bottom line, tight jitter to keep pairwise diffs in tol
            bottom = base - cross_h.max()
            offs = rng.uniform(0.0, th.align_tol / 2.0, k)
            poses[:, 0] = centers
            poses[:, 1] = bottom + offs + cross_h
        else:
            offs = rng.uniform(-th.align_tol / 2.0, th.align_tol / 2.0, k)
            poses[:, 0] = base + offs
            poses[:, 1] = centers
        return poses

    if relation == "regular_grid":
        pairs = [(r, count // r) for count in (k,)
                 for r in range(2, k) if k % r == 0 and k // r >= 2]
        if not pairs:
            return None
        r, c = pairs[rng.integers(len(pairs))]
        row_idx = np.arange(k).reshape(r, c)
        ys = _pack_line(rng, np.full(r, hy.max()), th.spacing_tol)
        xs = _pack_line(rng, np.full(c, hx.max()), th.spacing_tol)
        if ys is None or xs is None:
            return None
        jit = min(th.align_tol, th.spacing_tol) / 4.0
        for ri in range(r):
            for ci in range(c):
                idx = row_idx[ri, ci]
                poses[idx, 0] = xs[ci] + rng.uniform(-jit, jit)
                poses[idx, 1] = ys[ri] + rng.uniform(-jit, jit)
        return poses

    if relation == "sorted":
        widths = shapes[:, 1]
        if np.any(widths[1:] > widths[:-1] + 1e-12):
            return None
        # Gap and baseline jitters stay at half the classifier band so that
        # factors trained on these samples keep their mass inside tolerance.
        gaps = rng.uniform(0.0, 0.5 * th.align_tol, k - 1)
        span = 2.0 * hx.sum() + gaps.sum()
        start = _uniform(rng, hx[0], 1.0 - (span - hx[0]))
        if start is None:
            return None
        bottom = _uniform(rng, 0.0, 1.0 - 2.0 * hy.max())
        if bottom is None:
            return None
        x = start
        for i in range(k):
            poses[i, 0] = x
            poses[i, 1] = bottom + hy[i] + rng.uniform(0.0, 0.25 * th.align_tol)
            if i + 1 < k:
                x += hx[i] + gaps[i] + hx[i + 1]
        return poses

    raise ValidationError("no construction for relation %r" % (relation,))


def _verify(relation: str, shapes: np.ndarray, poses: np.ndarray,
            th: Thresholds) -> bool:
    if np.any(poses[:, :2] < 0.0) or np.any(poses[:, :2] > 1.0):
        return False
    objs = [SceneObject("o%d" % i, ObjectShape(*shapes[i]), Pose(*poses[i]))
            for i in range(len(shapes))]
    scene = Scene(TableFrame(1.0, 1.0), objs)
    atom = GroundAtom(relation, tuple(o.name for o in objs))
    from .relations import classify
    return classify(atom, scene, th)


def sample_relation(relation: str, shapes, seed,
                    thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Draws poses [k, 3] satisfying the relation over the given footprints.

    Tries the relation's geometric construction first, then falls back to
    uniform rejection sampling; raises UnsatisfiableSampleError when the
    attempt cap runs out (e.g. footprints that physically cannot satisfy
    the relation).
    """
    relation = resolve_relation(relation)
    shapes = np.asarray(shapes, dtype=float)
    spec = REGISTRY[relation]
    if spec.arity is not None and len(shapes) != spec.arity:
        raise ValidationError("relation %r expects %d shapes, got %d"
                              % (relation, spec.arity, len(shapes)))
    rng = seed if isinstance(seed, np.random.Generator) \
        else np.random.default_rng(seed)
    k = len(shapes)
    for attempt in range(_MAX_TRIES):
        if attempt < _CONSTRUCTIVE_TRIES:
            poses = _construct(relation, shapes, rng, thresholds)
        else:
            poses = np.column_stack([
                rng.uniform(0.0, 1.0, k), rng.uniform(0.0, 1.0, k),
                np.array([_theta(rng, thresholds) for _ in range(k)])])
        if poses is not None and _verify(relation, shapes, poses, thresholds):
            return poses
    raise UnsatisfiableSampleError(
        "could not satisfy %r with the given footprints" % (relation,))


def _feasible_sizes(relation: str, arity_range: tuple[int, int]) -> list[int]:
    lo, hi = arity_range
    if not 3 <= lo <= hi:
        raise ValidationError("arity_range must satisfy 3 <= min <= max")
    sizes = list(range(lo, hi + 1))
    if relation == "regular_grid":
        sizes = [m for m in sizes if grid_shape(m) is not None]
        if not sizes:
            raise ValidationError("no grid-compatible size in arity_range")
    return sizes


def gen_dataset(relation: str, n: int,
                dist: ShapeDistribution = ShapeDistribution(),
                arity_range: tuple[int, int] = (3, 5), seed: int = 0,
                thresholds: Thresholds = DEFAULT_THRESHOLDS) -> list[RelationSample]:
    """Generates n verified samples with per-index PRNG streams."""
    relation = resolve_relation(relation)
    if n < 1:
        raise ValidationError("n must be >= 1")
    spec = REGISTRY[relation]
    sizes = None if spec.arity is not None \
        else _feasible_sizes(relation, arity_range)
    out = []
    for index in range(n):
        rng = np.random.default_rng([seed, index])
        if spec.arity is not None:
            k = spec.arity
        else:
            k = int(sizes[rng.integers(len(sizes))])
        # keep groups physically packable along a unit line
        cap = None if k <= 2 else max(0.9 / k, 0.06)
        shapes = dist.draw(rng, k, max_extent=cap)
        if relation == "on_top_of":
            shapes[0] = shapes[1] * rng.uniform(0.35, 0.8, 2)
        elif relation == "sorted":
            shapes = shapes[np.argsort(-shapes[:, 1], kind="stable")]
        poses = sample_relation(relation, shapes, rng, thresholds)
        out.append(RelationSample(relation, shapes, poses))
    return out


def save_dataset(path: str, samples: list[RelationSample]) -> None:
    """Writes samples as one JSON record per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in samples:
            rec = {"relation": s.relation,
                   "shapes": [list(row) for row in s.shapes.tolist()],
                   "poses": [list(row) for row in s.poses.tolist()]}
            fh.write(json.dumps(rec) + "\n")


def load_dataset(path: str) -> list[RelationSample]:
    """Reads a dataset written by save_dataset."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                out.append(RelationSample(
                    resolve_relation(rec["relation"]),
                    np.asarray(rec["shapes"], dtype=float),
                    np.asarray(rec["poses"], dtype=float)))
            except (KeyError, TypeError, json.JSONDecodeError) as exc:
                raise ValidationError("bad dataset record: %s" % (exc,))
    if not out:
        raise ValidationError("dataset %r is empty" % (path,))
    return out
