"""Spatial relation library over tabletop scenes.

Relations are predicates over object poses in the normalized table frame
(unit square, x right, y front to back). Each relation has a rule-based
classifier driven by a small set of thresholds. `annotate` extracts every
true atom from a scene; `check_conflicts` and `check_completeness` vet
proposed relation graphs before sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ArityError, UnsupportedRelationError, ValidationError
from .geometry import (ObjectShape, Pose, TableFrame, to_oriented_box,
                       wrap_angle)

# Central row/column bands cover half the normalized span each way.
CENTRAL_BAND = 0.25
# Small slack for boundary comparisons (corner containment, width order).
_EPS = 1e-9


@dataclass(frozen=True)
class Thresholds:
    """Classifier tolerances, all in normalized units except angle_tol.

    edge_near: max distance from a bounding box to an edge to count as near.
    align_tol: tolerance for alignment and adjacency comparisons.
    angle_tol: rotation agreement tolerance, radians.
    center_tol: centroid distance tolerance for centering and symmetry.
    overlap_frac: required side overlap for left_of/right_of, as a fraction
        of the smaller extent.
    spacing_tol: allowed spread between adjacent gaps in line and grid groups.
    """

    edge_near: float = 0.10
    align_tol: float = 0.03
    angle_tol: float = 0.10
    center_tol: float = 0.05
    overlap_frac: float = 0.5
    spacing_tol: float = 0.03

    def __post_init__(self) -> None:
        for name in ("edge_near", "align_tol", "angle_tol", "center_tol",
                     "spacing_tol"):
            if getattr(self, name) <= 0.0:
                raise ValidationError("threshold %s must be positive" % name)
        if not 0.0 < self.overlap_frac <= 1.0:
            raise ValidationError("overlap_frac must be in (0, 1]")


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class RelationSpec:
    """Registry entry: canonical name, arity (None means 3+), arg order."""

    name: str
    arity: int | None
    order_sensitive: bool
    doc: str


_SPECS = [
    RelationSpec("central_column", 1, False,
                 "centroid within the vertical band of half the table span "
                 "around the x midline"),
    RelationSpec("central_row", 1, False,
                 "centroid within the horizontal band of half the table span "
                 "around the y midline"),
    RelationSpec("centered_table", 1, False,
                 "centroid within center_tol of the table center"),
    RelationSpec("left_half", 1, False,
                 "bounding box entirely left of the vertical midline"),
    RelationSpec("right_half", 1, False,
                 "bounding box entirely right of the vertical midline"),
    RelationSpec("front_half", 1, False,
                 "bounding box entirely on the front side of the horizontal "
                 "midline"),
    RelationSpec("back_half", 1, False,
                 "bounding box entirely on the back side of the horizontal "
                 "midline"),
    RelationSpec("near_left_edge", 1, False,
                 "bounding box within edge_near of the left table edge"),
    RelationSpec("near_right_edge", 1, False,
                 "bounding box within edge_near of the right table edge"),
    RelationSpec("near_front_edge", 1, False,
                 "bounding box within edge_near of the front table edge"),
    RelationSpec("near_back_edge", 1, False,
                 "bounding box within edge_near of the back table edge"),
    RelationSpec("horizontally_aligned", 2, False,
                 "bounding box bottoms level within align_tol and rotations "
                 "within angle_tol"),
    RelationSpec("vertically_aligned", 2, False,
                 "centroid x equal within align_tol and rotations within "
                 "angle_tol"),
    RelationSpec("left_of", 2, True,
                 "first object immediately left of the second: right edge to "
                 "left edge within align_tol, substantial y overlap"),
    RelationSpec("right_of", 2, True,
                 "first object immediately right of the second: left edge to "
                 "right edge within align_tol, substantial y overlap"),
    RelationSpec("on_top_of", 2, True,
                 "first object's box contained in the second's, which has "
                 "equal or larger area"),
    RelationSpec("centered", 2, False,
                 "centroids within center_tol of each other"),
    RelationSpec("vertical_symmetry_on_table", 2, False,
                 "centroids mirror images across the table's vertical "
                 "midline within center_tol"),
    RelationSpec("horizontal_symmetry_on_table", 2, False,
                 "centroids mirror images across the table's horizontal "
                 "midline within center_tol"),
    RelationSpec("vertical_line_symmetry", 3, True,
                 "last two objects mirror images across the vertical line "
                 "through the first (axis) object's centroid"),
    RelationSpec("horizontal_line_symmetry", 3, True,
                 "last two objects mirror images across the horizontal line "
                 "through the first (axis) object's centroid"),
    RelationSpec("aligned_in_horizontal_line", None, False,
                 "three or more objects with level bottoms, matching "
                 "rotations and equal spacing along x"),
    RelationSpec("aligned_in_vertical_line", None, False,
                 "three or more objects with equal centroid x, matching "
                 "rotations and equal spacing along y"),
    RelationSpec("regular_grid", None, False,
                 "objects occupy a full r x c lattice (r, c >= 2) with "
                 "aligned rows and columns and constant row/column spacing"),
    RelationSpec("sorted", None, True,
                 "three or more objects chained left to right by left_of in "
                 "non-increasing width order, pairwise horizontally aligned"),
]

REGISTRY: dict[str, RelationSpec] = {s.name: s for s in _SPECS}
RELATIONS: tuple[str, ...] = tuple(REGISTRY)
CORE_RELATIONS: tuple[str, ...] = tuple(n for n in RELATIONS if n != "sorted")
UNARY_RELATIONS = tuple(n for n, s in REGISTRY.items() if s.arity == 1)
BINARY_RELATIONS = tuple(n for n, s in REGISTRY.items() if s.arity == 2)
TERNARY_RELATIONS = tuple(n for n, s in REGISTRY.items() if s.arity == 3)
VARIABLE_RELATIONS = tuple(n for n, s in REGISTRY.items() if s.arity is None)

# Accepted spellings seen in instructions and older graph files.
ALIASES = {
    "central_table": "centered_table",
    "vertical_symmetry_about_axis_obj": "vertical_line_symmetry",
    "horizontal_symmetry_about_axis_obj": "horizontal_line_symmetry",
}

RELATION_DOCS = {name: spec.doc for name, spec in REGISTRY.items()}


def resolve_relation(name: str) -> str:
    """Canonical relation name, accepting known aliases."""
    canonical = ALIASES.get(name, name)
    if canonical not in REGISTRY:
        raise UnsupportedRelationError("unknown relation %r" % (name,))
    return canonical


def relation_arity(name: str) -> int | None:
    return REGISTRY[resolve_relation(name)].arity


@dataclass(frozen=True)
class GroundAtom:
    """A relation applied to named scene objects."""

    relation: str
    args: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "relation", resolve_relation(self.relation))
        object.__setattr__(self, "args", tuple(self.args))
        spec = REGISTRY[self.relation]
        if not self.args or any(not isinstance(a, str) or not a for a in self.args):
            raise ArityError("atom arguments must be non-empty names")
        if len(set(self.args)) != len(self.args):
            raise ArityError("atom arguments must be distinct: %r" % (self.args,))
        if spec.arity is not None:
            if len(self.args) != spec.arity:
                raise ArityError("%s takes %d arguments, got %d"
                                 % (self.relation, spec.arity, len(self.args)))
        elif len(self.args) < 3:
            raise ArityError("%s takes at least 3 arguments, got %d"
                             % (self.relation, len(self.args)))

    def key(self) -> tuple:
        """Canonical hashable identity; symmetric relations ignore arg order."""
        spec = REGISTRY[self.relation]
        if not spec.order_sensitive:
            return (self.relation, tuple(sorted(self.args)))
        if spec.arity == 3:
            # axis argument is positional, the mirrored pair is not
            return (self.relation, self.args[0], tuple(sorted(self.args[1:])))
        return (self.relation, self.args)

    def to_record(self) -> dict:
        return {"relation": self.relation, "args": list(self.args)}

    @staticmethod
    def from_record(record: dict) -> "GroundAtom":
        if not isinstance(record, dict) or "relation" not in record or "args" not in record:
            raise ValidationError("atom record needs 'relation' and 'args'")
        return GroundAtom(str(record["relation"]), tuple(str(a) for a in record["args"]))


@dataclass
class GroundGraph:
    """A set of ground atoms over one scene's objects."""

    atoms: list[GroundAtom] = field(default_factory=list)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def objects(self) -> set[str]:
        return {name for atom in self.atoms for name in atom.args}

    def contains(self, atom: GroundAtom) -> bool:
        key = atom.key()
        return any(a.key() == key for a in self.atoms)

    def deduplicated(self) -> "GroundGraph":
        seen: set[tuple] = set()
        out = []
        for atom in self.atoms:
            key = atom.key()
            if key not in seen:
                seen.add(key)
                out.append(atom)
        return GroundGraph(out)

    def to_records(self) -> list[dict]:
        return [a.to_record() for a in self.atoms]

    @staticmethod
    def from_records(records) -> "GroundGraph":
        return GroundGraph([GroundAtom.from_record(r) for r in records])


@dataclass
class SceneObject:
    """Named object: footprint in meters, optional normalized pose."""

    name: str
    shape: ObjectShape
    pose: Pose | None = None
    category: str | None = None


@dataclass
class Scene:
    """A tabletop with named objects."""

    table: TableFrame
    objects: list[SceneObject]

    def __post_init__(self) -> None:
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate object names in scene")
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def names(self) -> list[str]:
        return [o.name for o in self.objects]

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError("unknown object %r" % (name,)) from None

    def shapes_normalized(self) -> np.ndarray:
        """(n, 2) array of object dims divided by table dims."""
        return np.array([[o.shape.length / self.table.length,
                          o.shape.width / self.table.width]
                         for o in self.objects], dtype=float)

    def poses_array(self) -> np.ndarray:
        """(n, 3) array of normalized poses; error if any pose is missing."""
        rows = []
        for o in self.objects:
            if o.pose is None:
                raise ValidationError("object %r has no pose" % (o.name,))
            rows.append([o.pose.x, o.pose.y, o.pose.theta])
        return np.array(rows, dtype=float)

    def with_poses(self, poses: np.ndarray) -> "Scene":
        poses = np.asarray(poses, dtype=float)
        if poses.shape != (len(self.objects), 3):
            raise ValidationError("pose array shape %s does not match scene"
                                  % (poses.shape,))
        objs = [replace(o, pose=Pose(float(p[0]), float(p[1]), float(p[2])))
                for o, p in zip(self.objects, poses)]
        return Scene(self.table, objs)


class _Geom:
    """Precomputed per-object geometry for fast repeated classification."""

    __slots__ = ("n", "cx", "cy", "th", "hx", "hy", "left", "right", "bottom",
                 "top", "height", "width", "area", "corners", "cos", "sin",
                 "shape_w")

    @staticmethod
    def from_scene(scene: Scene) -> "_Geom":
        g = _Geom()
        n = len(scene.objects)
        shapes = scene.shapes_normalized()
        poses = scene.poses_array()
        g.n = n
        cx, cy, th = poses[:, 0], poses[:, 1], poses[:, 2]
        hx, hy = shapes[:, 0] / 2.0, shapes[:, 1] / 2.0
        cos, sin = np.cos(th), np.sin(th)
        # corner offsets for sign pairs (-,-), (+,-), (+,+), (-,+)
        sx = np.array([-1.0, 1.0, 1.0, -1.0])
        sy = np.array([-1.0, -1.0, 1.0, 1.0])
        px = cx[:, None] + cos[:, None] * sx * hx[:, None] - sin[:, None] * sy * hy[:, None]
        py = cy[:, None] + sin[:, None] * sx * hx[:, None] + cos[:, None] * sy * hy[:, None]
        g.corners = np.stack([px, py], axis=2)
        g.cx, g.cy, g.th = cx.tolist(), cy.tolist(), th.tolist()
        g.hx, g.hy = hx.tolist(), hy.tolist()
        g.cos, g.sin = cos.tolist(), sin.tolist()
        g.left = px.min(axis=1).tolist()
        g.right = px.max(axis=1).tolist()
        g.bottom = py.min(axis=1).tolist()
        g.top = py.max(axis=1).tolist()
        g.height = [t - b for t, b in zip(g.top, g.bottom)]
        g.width = [r - l for r, l in zip(g.right, g.left)]
        g.area = [4.0 * a * b for a, b in zip(hx.tolist(), hy.tolist())]
        g.shape_w = shapes[:, 1].tolist()
        return g

    def y_overlap(self, i: int, j: int) -> float:
        return min(self.top[i], self.top[j]) - max(self.bottom[i], self.bottom[j])

    def contains(self, j: int, i: int) -> bool:
        """All corners of box i inside box j (boundary inclusive)."""
        c, s = self.cos[j], self.sin[j]
        hx, hy = self.hx[j] + _EPS, self.hy[j] + _EPS
        for px, py in self.corners[i]:
            dx, dy = px - self.cx[j], py - self.cy[j]
            u = c * dx + s * dy
            v = -s * dx + c * dy
            if abs(u) > hx or abs(v) > hy:
                return False
        return True


def _angle_close(a: float, b: float, tol: float) -> bool:
    return abs(wrap_angle(a - b)) <= tol


def _angle_diam_ok(geom: _Geom, idxs, tol: float) -> bool:
    return all(_angle_close(geom.th[i], geom.th[j], tol)
               for k, i in enumerate(idxs) for j in idxs[k + 1:])


def _gap_spread_ok(values: list[float], tol: float) -> bool:
    gaps = [b - a for a, b in zip(values, values[1:])]
    return max(gaps) - min(gaps) <= tol


def _check_left_of(geom: _Geom, i: int, j: int, th: Thresholds) -> bool:
    if abs(geom.right[i] - geom.left[j]) > th.align_tol:
        return False
    need = th.overlap_frac * min(geom.height[i], geom.height[j])
    return geom.y_overlap(i, j) >= need - _EPS


def _check_horizontally_aligned(geom: _Geom, i: int, j: int, th: Thresholds) -> bool:
    return (abs(geom.bottom[i] - geom.bottom[j]) <= th.align_tol
            and _angle_close(geom.th[i], geom.th[j], th.angle_tol))


def _check_line(geom: _Geom, idxs, th: Thresholds, horizontal: bool) -> bool:
    if len(idxs) < 3:
        return False
    if not _angle_diam_ok(geom, idxs, th.angle_tol):
        return False
    if horizontal:
        keys = [geom.bottom[i] for i in idxs]
        along = sorted(geom.cx[i] for i in idxs)
    else:
        keys = [geom.cx[i] for i in idxs]
        along = sorted(geom.cy[i] for i in idxs)
    if max(keys) - min(keys) > th.align_tol:
        return False
    if along[-1] - along[0] <= th.align_tol:
        return False  # needs real extent along the line
    return _gap_spread_ok(along, th.spacing_tol)


def _cluster_1d(values: list[float], tol: float) -> list[list[int]]:
    """Greedy diameter clustering: indices grouped so max-min <= tol."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    clusters: list[list[int]] = []
    start = 0
    while start < len(order):
        base = values[order[start]]
        group = [order[start]]
        nxt = start + 1
        while nxt < len(order) and values[order[nxt]] - base <= tol:
            group.append(order[nxt])
            nxt += 1
        clusters.append(group)
        start = nxt
    return clusters


def _grid_structure(geom: _Geom, idxs, th: Thresholds):
    """Row/column lattice structure of the index set, or None."""
    cy = [geom.cy[i] for i in idxs]
    cx = [geom.cx[i] for i in idxs]
    rows = _cluster_1d(cy, th.align_tol)
    cols = _cluster_1d(cx, th.align_tol)
    r, c = len(rows), len(cols)
    if r < 2 or c < 2 or r * c != len(idxs):
        return None
    if any(len(row) != c for row in rows) or any(len(col) != r for col in cols):
        return None
    col_of = {}
    for ci, col in enumerate(cols):
        for k in col:
            col_of[k] = ci
    lattice = []
    for row in rows:
        seen_cols = sorted(col_of[k] for k in row)
        if seen_cols != list(range(c)):
            return None
        lattice.append(sorted(row, key=lambda k: col_of[k]))
    row_anchor = sorted(sum(cy[k] for k in row) / c for row in rows)
    col_anchor = sorted(sum(cx[k] for k in col) / r for col in cols)
    if not _gap_spread_ok(row_anchor, th.spacing_tol):
        return None
    if not _gap_spread_ok(col_anchor, th.spacing_tol):
        return None
    return lattice


def _check_sorted(geom: _Geom, idxs, th: Thresholds) -> bool:
    if len(idxs) < 3:
        return False
    widths = [geom.shape_w[i] for i in idxs]
    if any(b > a + _EPS for a, b in zip(widths, widths[1:])):
        return False
    if not all(_check_left_of(geom, i, j, th) for i, j in zip(idxs, idxs[1:])):
        return False
    return all(_check_horizontally_aligned(geom, i, j, th)
               for k, i in enumerate(idxs) for j in idxs[k + 1:])


def _check(geom: _Geom, relation: str, idxs, th: Thresholds) -> bool:
    if relation == "central_column":
        return abs(geom.cx[idxs[0]] - 0.5) <= CENTRAL_BAND
    if relation == "central_row":
        return abs(geom.cy[idxs[0]] - 0.5) <= CENTRAL_BAND
    if relation == "centered_table":
        i = idxs[0]
        return math.hypot(geom.cx[i] - 0.5, geom.cy[i] - 0.5) <= th.center_tol
    if relation == "left_half":
        return geom.right[idxs[0]] <= 0.5
    if relation == "right_half":
        return geom.left[idxs[0]] >= 0.5
    if relation == "front_half":
        return geom.top[idxs[0]] <= 0.5
    if relation == "back_half":
        return geom.bottom[idxs[0]] >= 0.5
    if relation == "near_left_edge":
        return geom.left[idxs[0]] <= th.edge_near
    if relation == "near_right_edge":
        return 1.0 - geom.right[idxs[0]] <= th.edge_near
    if relation == "near_front_edge":
        return geom.bottom[idxs[0]] <= th.edge_near
    if relation == "near_back_edge":
        return 1.0 - geom.top[idxs[0]] <= th.edge_near
    if relation == "horizontally_aligned":
        return _check_horizontally_aligned(geom, idxs[0], idxs[1], th)
    if relation == "vertically_aligned":
        i, j = idxs
        return (abs(geom.cx[i] - geom.cx[j]) <= th.align_tol
                and _angle_close(geom.th[i], geom.th[j], th.angle_tol))
    if relation == "left_of":
        return _check_left_of(geom, idxs[0], idxs[1], th)
    if relation == "right_of":
        return _check_left_of(geom, idxs[1], idxs[0], th)
    if relation == "on_top_of":
        i, j = idxs
        return geom.area[j] >= geom.area[i] - _EPS and geom.contains(j, i)
    if relation == "centered":
        i, j = idxs
        return math.hypot(geom.cx[i] - geom.cx[j],
                          geom.cy[i] - geom.cy[j]) <= th.center_tol
    if relation == "vertical_symmetry_on_table":
        i, j = idxs
        return math.hypot(geom.cx[i] - (1.0 - geom.cx[j]),
                          geom.cy[i] - geom.cy[j]) <= th.center_tol
    if relation == "horizontal_symmetry_on_table":
        i, j = idxs
        return math.hypot(geom.cx[i] - geom.cx[j],
                          geom.cy[i] - (1.0 - geom.cy[j])) <= th.center_tol
    if relation == "vertical_line_symmetry":
        a, i, j = idxs
        return math.hypot(geom.cx[i] - (2.0 * geom.cx[a] - geom.cx[j]),
                          geom.cy[i] - geom.cy[j]) <= th.center_tol
    if relation == "horizontal_line_symmetry":
        a, i, j = idxs
        return math.hypot(geom.cx[i] - geom.cx[j],
                          geom.cy[i] - (2.0 * geom.cy[a] - geom.cy[j])) <= th.center_tol
    if relation == "aligned_in_horizontal_line":
        return _check_line(geom, idxs, th, horizontal=True)
    if relation == "aligned_in_vertical_line":
        return _check_line(geom, idxs, th, horizontal=False)
    if relation == "regular_grid":
        return len(idxs) >= 3 and _grid_structure(geom, idxs, th) is not None
    if relation == "sorted":
        return _check_sorted(geom, idxs, th)
    raise UnsupportedRelationError("unknown relation %r" % (relation,))


def classify(atom: GroundAtom, scene: Scene,
             thresholds: Thresholds = DEFAULT_THRESHOLDS) -> bool:
    """Evaluate one ground atom against a fully posed scene."""
    geom = _Geom.from_scene(scene)
    idxs = [scene.index_of(a) for a in atom.args]
    return _check(geom, atom.relation, idxs, thresholds)


def _variable_groups(geom: _Geom, relation: str, th: Thresholds) -> list[list[int]]:
    """Maximal groups (>=3) satisfying a variable-arity relation."""
    n = geom.n
    if n < 3:
        return []
    groups: list[list[int]] = []

    def emit_runs(cluster: list[int], along_key, check) -> None:
        members = sorted(cluster, key=along_key)
        emitted: list[tuple[int, int]] = []
        for start in range(len(members) - 2):
            end = start + 1
            best = None
            while end < len(members):
                window = members[start:end + 1]
                if check(window):
                    best = end
                elif best is not None and end > best + 1:
                    break
                end += 1
            if best is not None and best - start + 1 >= 3:
                if not any(a <= start and best <= b for a, b in emitted):
                    emitted.append((start, best))
                    groups.append(members[start:best + 1])

    if relation in ("aligned_in_horizontal_line", "sorted"):
        key = geom.bottom
        clusters = _cluster_1d(key, th.align_tol)
        for cluster in clusters:
            if len(cluster) < 3:
                continue
            if relation == "aligned_in_horizontal_line":
                emit_runs(cluster, lambda i: geom.cx[i],
                          lambda w: _check_line(geom, w, th, horizontal=True))
            else:
                emit_runs(cluster, lambda i: geom.cx[i],
                          lambda w: _check_sorted(geom, w, th))
    elif relation == "aligned_in_vertical_line":
        clusters = _cluster_1d(geom.cx, th.align_tol)
        for cluster in clusters:
            if len(cluster) < 3:
                continue
            emit_runs(cluster, lambda i: geom.cy[i],
                      lambda w: _check_line(geom, w, th, horizontal=False))
    elif relation == "regular_grid":
        rows = _cluster_1d(geom.cy, th.align_tol)
        rows = [r for r in rows if len(r) >= 2]
        for start in range(len(rows)):
            for end in range(len(rows) - 1, start, -1):
                block = [i for row in rows[start:end + 1] for i in row]
                lattice = _grid_structure(geom, block, th)
                if lattice is not None:
                    flat = [i for row in lattice for i in row]
                    if not any(set(flat) <= set(g) for g in groups):
                        groups.append(flat)
                    break
    return groups


def annotate(scene: Scene, thresholds: Thresholds = DEFAULT_THRESHOLDS,
             relations: tuple[str, ...] = RELATIONS) -> GroundGraph:
    """All true atoms in the scene.

    Unary atoms are checked per object, binary per ordered pair, ternary per
    (axis, unordered pair); variable-arity relations report maximal groups of
    at least three objects, with group order following the detected line,
    lattice or chain.
    """
    geom = _Geom.from_scene(scene)
    names = scene.names
    n = geom.n
    atoms: list[GroundAtom] = []
    for relation in relations:
        spec = REGISTRY[resolve_relation(relation)]
        if spec.arity == 1:
            for i in range(n):
                if _check(geom, spec.name, (i,), thresholds):
                    atoms.append(GroundAtom(spec.name, (names[i],)))
        elif spec.arity == 2:
            for i in range(n):
                for j in range(n):
                    if i != j and _check(geom, spec.name, (i, j), thresholds):
                        atoms.append(GroundAtom(spec.name, (names[i], names[j])))
        elif spec.arity == 3:
            for a in range(n):
                for i in range(n):
                    if i == a:
                        continue
                    for j in range(i + 1, n):
                        if j == a:
                            continue
                        if _check(geom, spec.name, (a, i, j), thresholds):
                            atoms.append(GroundAtom(
                                spec.name, (names[a], names[i], names[j])))
        else:
            for group in _variable_groups(geom, spec.name, thresholds):
                if _check(geom, spec.name, group, thresholds):
                    atoms.append(GroundAtom(
                        spec.name, tuple(names[i] for i in group)))
    return GroundGraph(atoms)


# Pairs of unary relations that cannot hold for the same object.
_UNARY_EXCLUSIONS = [
    ("left_half", "right_half"),
    ("front_half", "back_half"),
    ("near_left_edge", "near_right_edge"),
    ("near_front_edge", "near_back_edge"),
]


def check_conflicts(graph: GroundGraph) -> list[tuple[GroundAtom, GroundAtom]]:
    """Mutually exclusive atom pairs present in the graph.

    Covers contradictory unary placements for one object, opposing
    left_of/right_of claims over a pair (in either spelling), and circular
    on_top_of claims.
    """
    conflicts: list[tuple[GroundAtom, GroundAtom]] = []
    unary_by_obj: dict[str, dict[str, GroundAtom]] = {}
    leftish: dict[tuple[str, str], GroundAtom] = {}
    on_top: dict[tuple[str, str], GroundAtom] = {}
    for atom in graph.atoms:
        if REGISTRY[atom.relation].arity == 1:
            unary_by_obj.setdefault(atom.args[0], {})[atom.relation] = atom
        elif atom.relation in ("left_of", "right_of"):
            # normalize right_of(a, b) to left_of(b, a); opposing claims clash
            pair = atom.args if atom.relation == "left_of" else (atom.args[1], atom.args[0])
            rev = (pair[1], pair[0])
            if rev in leftish:
                conflicts.append((leftish[rev], atom))
            leftish.setdefault(pair, atom)
        elif atom.relation == "on_top_of":
            rev = (atom.args[1], atom.args[0])
            if rev in on_top:
                conflicts.append((on_top[rev], atom))
            on_top.setdefault(tuple(atom.args), atom)
    for _, present in unary_by_obj.items():
        for a, b in _UNARY_EXCLUSIONS:
            if a in present and b in present:
                conflicts.append((present[a], present[b]))
    return conflicts


def check_completeness(graph: GroundGraph, scene: Scene) -> list[str]:
    """Scene object names that appear in no atom, in scene order."""
    covered = graph.objects()
    return [name for name in scene.names if name not in covered]
