"""File formats: scene JSON, graph records, and solve results.

A scene file is one UTF-8 JSON document holding the table dimensions,
the object list (dims in meters, optional normalized pose), and optional
instruction, family, and reference graph. Graph and result files are
JSON-lines: one atom record or one sample record per line. Every format
round-trips exactly through its save/load pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import ObjectShape, Pose, TableFrame
from .relations import GroundGraph, Scene, SceneObject

_POSE_KEYS = ("x", "y", "theta")


@dataclass
class SceneBundle:
    """A scene file's contents: the scene plus its task annotations."""

    scene: Scene
    instruction: str = ""
    family: str | None = None
    reference: GroundGraph | None = None


def _object_from_record(rec: dict) -> SceneObject:
    if not isinstance(rec, dict):
        raise ValidationError("object record must be a mapping")
    for key in ("name", "length", "width"):
        if key not in rec:
            raise ValidationError("object record is missing %r" % (key,))
    pose = None
    if "pose" in rec and rec["pose"] is not None:
        praw = rec["pose"]
        if not isinstance(praw, dict) or set(praw) != set(_POSE_KEYS):
            raise ValidationError(
                "pose for %r must have exactly x, y, theta" % (rec["name"],))
        pose = Pose(float(praw["x"]), float(praw["y"]), float(praw["theta"]))
    category = rec.get("category")
    return SceneObject(str(rec["name"]),
                       ObjectShape(float(rec["length"]), float(rec["width"])),
                       pose=pose,
                       category=None if category is None else str(category))


def bundle_from_doc(doc: dict, source: str = "<scene>") -> SceneBundle:
    """Builds and validates a bundle from a parsed scene document."""
    if not isinstance(doc, dict) or "table" not in doc or "objects" not in doc:
        raise ValidationError("scene file needs 'table' and 'objects'")
    table_rec = doc["table"]
    if not isinstance(table_rec, dict) or \
            set(table_rec) != {"length", "width"}:
        raise ValidationError("table must have exactly length and width")
    try:
        table = TableFrame(float(table_rec["length"]),
                           float(table_rec["width"]))
        objects = [_object_from_record(r) for r in doc["objects"]]
        scene = Scene(table, objects)
    except (TypeError, ValueError) as exc:
        raise ValidationError("bad scene file %r: %s" % (source, exc))
    reference = None
    if doc.get("reference_graph") is not None:
        reference = GroundGraph.from_records(doc["reference_graph"])
        unknown = reference.objects() - set(scene.names)
        if unknown:
            raise ValidationError("reference graph names unknown objects: %s"
                                  % ", ".join(sorted(unknown)))
    family = doc.get("family")
    return SceneBundle(scene=scene,
                       instruction=str(doc.get("instruction", "")),
                       family=None if family is None else str(family),
                       reference=reference)


def bundle_to_doc(bundle: SceneBundle) -> dict:
    """The JSON-ready document for a scene bundle."""
    objects = []
    for obj in bundle.scene.objects:
        rec: dict = {"name": obj.name, "length": obj.shape.length,
                     "width": obj.shape.width}
        if obj.category is not None:
            rec["category"] = obj.category
        if obj.pose is not None:
            rec["pose"] = {"x": obj.pose.x, "y": obj.pose.y,
                           "theta": obj.pose.theta}
        objects.append(rec)
    doc: dict = {"table": {"length": bundle.scene.table.length,
                           "width": bundle.scene.table.width},
                 "objects": objects}
    if bundle.instruction:
        doc["instruction"] = bundle.instruction
    if bundle.family is not None:
        doc["family"] = bundle.family
    if bundle.reference is not None:
        doc["reference_graph"] = bundle.reference.to_records()
    return doc


def load_scene(path: str) -> SceneBundle:
    """Parses and validates a scene file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError("cannot read scene file: %s" % (exc,))
    except json.JSONDecodeError as exc:
        raise ValidationError("scene file %r is not valid JSON: %s"
                              % (path, exc))
    return bundle_from_doc(doc, source=path)


def save_scene(path: str, bundle: SceneBundle) -> None:
    """Writes a scene bundle as a stable, human-diffable JSON document."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(bundle_to_doc(bundle), fh, indent=2)
        fh.write("\n")


def save_graph(path: str, graph: GroundGraph) -> None:
    """Writes one atom record per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in graph.to_records():
            fh.write(json.dumps(rec) + "\n")


def load_graph(path: str) -> GroundGraph:
    """Reads a graph written by save_graph."""
    records = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
    except OSError as exc:
        raise ValidationError("cannot read graph file: %s" % (exc,))
    except json.JSONDecodeError as exc:
        raise ValidationError("graph file %r is not valid: %s" % (path, exc))
    return GroundGraph.from_records(records)


@dataclass
class SolveRecord:
    """One sampled arrangement with its scores."""

    poses: np.ndarray
    feasibility: float
    satisfaction: float
    best: bool = False

    def __post_init__(self) -> None:
        self.poses = np.asarray(self.poses, dtype=float)
        if self.poses.ndim != 2 or self.poses.shape[1] != 3:
            raise ValidationError("poses must be [k, 3]")


def save_results(path: str, records: list[SolveRecord]) -> None:
    """Writes one sample record per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps({"poses": rec.poses.tolist(),
                                 "feasibility": rec.feasibility,
                                 "satisfaction": rec.satisfaction,
                                 "best": rec.best}) + "\n")


def load_results(path: str) -> list[SolveRecord]:
    """Reads records written by save_results."""
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                out.append(SolveRecord(np.asarray(rec["poses"], dtype=float),
                                       float(rec["feasibility"]),
                                       float(rec["satisfaction"]),
                                       bool(rec.get("best", False))))
    except OSError as exc:
        raise ValidationError("cannot read result file: %s" % (exc,))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError("bad result file %r: %s" % (path, exc))
    if not out:
        raise ValidationError("result file %r is empty" % (path,))
    return out
