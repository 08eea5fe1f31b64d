"""Arrangement scoring: collision feasibility and relation satisfaction.

Feasibility is the fraction of objects that are physically placeable:
their oriented box overlaps no other object's box and keeps at least
some area on the table. Objects pushed fully off the unit square count
as infeasible even though they collide with nothing; otherwise expelling
an object would trivially raise the score.

Functionality scores a layout against a reference graph, satisfaction
against the proposed graph; both are the fraction of atoms whose
classifier fires on the posed scene.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ValidationError
from .geometry import OrientedBox, overlap, to_oriented_box
from .relations import (DEFAULT_THRESHOLDS, GroundAtom, GroundGraph, Scene,
                        Thresholds, classify)

log = logging.getLogger(__name__)

_TABLE_BOX = OrientedBox(0.5, 0.5, 0.5, 0.5, 0.0)


@dataclass(frozen=True)
class EvalReport:
    """Scores plus the per-item evidence behind them.

    per_atom lists (atom, ok) for the proposed graph when one was given,
    otherwise for the reference graph; per_reference_atom always holds
    the reference results. Fractions equal the mean of their lists.
    """

    feasibility: float
    functionality: float | None
    satisfaction: float | None
    per_atom: list = field(default_factory=list)
    colliding_pairs: list = field(default_factory=list)
    per_reference_atom: list = field(default_factory=list)
    off_table: list = field(default_factory=list)


def _posed_boxes(scene: Scene) -> list[OrientedBox]:
    boxes = []
    for obj in scene.objects:
        if obj.pose is None:
            raise ValidationError("object %r has no pose" % (obj.name,))
        boxes.append(to_oriented_box(obj.shape, obj.pose, scene.table))
    return boxes


def colliding_pairs(scene: Scene) -> list[tuple[str, str]]:
    """All unordered object pairs whose oriented boxes share area."""
    boxes = _posed_boxes(scene)
    names = scene.names
    out = []
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if overlap(boxes[i], boxes[j]):
                out.append((names[i], names[j]))
    return out


def off_table_objects(scene: Scene) -> list[str]:
    """Objects whose box lies entirely outside the unit table square."""
    boxes = _posed_boxes(scene)
    return [name for name, box in zip(scene.names, boxes)
            if not overlap(box, _TABLE_BOX)]


def feasibility(scene: Scene) -> float:
    """Fraction of objects free of collisions and not fully off-table."""
    if not scene.objects:
        return 1.0
    bad = set(off_table_objects(scene))
    for a, b in colliding_pairs(scene):
        bad.update((a, b))
    return 1.0 - len(bad) / len(scene.objects)


def _graph_fraction(scene: Scene, graph: GroundGraph,
                    thresholds: Thresholds) -> tuple[float, list]:
    per_atom = [(atom, bool(classify(atom, scene, thresholds)))
                for atom in graph.atoms]
    if not per_atom:
        log.warning("empty relation graph scores 1.0 vacuously")
        return 1.0, per_atom
    return sum(ok for _, ok in per_atom) / len(per_atom), per_atom


def functionality(scene: Scene, reference: GroundGraph,
                  thresholds: Thresholds = DEFAULT_THRESHOLDS) -> float:
    """Fraction of reference atoms active in the posed scene."""
    return _graph_fraction(scene, reference, thresholds)[0]


def satisfaction(scene: Scene, proposed: GroundGraph,
                 thresholds: Thresholds = DEFAULT_THRESHOLDS) -> float:
    """Fraction of proposed atoms active in the posed scene."""
    return _graph_fraction(scene, proposed, thresholds)[0]


def evaluate(scene: Scene, proposed: GroundGraph | None = None,
             reference: GroundGraph | None = None,
             thresholds: Thresholds = DEFAULT_THRESHOLDS) -> EvalReport:
    """Full report for one posed scene."""
    pairs = colliding_pairs(scene)
    off = off_table_objects(scene)
    bad = set(off)
    for a, b in pairs:
        bad.update((a, b))
    feas = 1.0 if not scene.objects else 1.0 - len(bad) / len(scene.objects)
    func = None
    per_ref: list = []
    if reference is not None:
        func, per_ref = _graph_fraction(scene, reference, thresholds)
    sat = None
    per_prop: list = []
    if proposed is not None:
        sat, per_prop = _graph_fraction(scene, proposed, thresholds)
    per_atom = per_prop if proposed is not None else per_ref
    return EvalReport(feasibility=feas, functionality=func, satisfaction=sat,
                      per_atom=per_atom, colliding_pairs=pairs,
                      per_reference_atom=per_ref, off_table=off)
