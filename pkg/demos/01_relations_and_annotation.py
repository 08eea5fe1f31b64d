#!/usr/bin/env python3
"""Spatial relation vocabulary on a hand-posed breakfast scene.

Builds a small tabletop scene with explicit poses, checks individual
ground atoms against the classifier, then asks the annotator for every
relation that holds. Run: python3 demos/01_relations_and_annotation.py
"""

from formtab.geometry import ObjectShape, Pose, TableFrame
from formtab.relations import GroundAtom, Scene, SceneObject, annotate, classify

scene = Scene(
    TableFrame(1.6, 0.9),
    [
        SceneObject("plate", ObjectShape(0.26, 0.26), Pose(0.50, 0.22, 0.0)),
        SceneObject("fork", ObjectShape(0.05, 0.20), Pose(0.40, 0.22, 0.0)),
        SceneObject("knife", ObjectShape(0.05, 0.20), Pose(0.60, 0.22, 0.0)),
        SceneObject("mug", ObjectShape(0.09, 0.09), Pose(0.72, 0.38, 0.0)),
    ],
)

def fmt(atom):
    return "%s(%s)" % (atom.relation, ", ".join(atom.args))


print("scene: %d objects on a %.1f x %.1f m table" %
      (len(scene.objects), scene.table.length, scene.table.width))

print("\nspot checks:")
for atom in [
    GroundAtom("left_of", ("fork", "plate")),
    GroundAtom("right_of", ("knife", "plate")),
    GroundAtom("near_front_edge", ("plate",)),
    GroundAtom("centered_table", ("plate",)),
    GroundAtom("horizontally_aligned", ("fork", "knife")),
]:
    verdict = classify(atom, scene)
    print("  %-40s %s" % (fmt(atom), "holds" if verdict else "does not hold"))

graph = annotate(scene)
print("\nannotate() finds %d true atoms:" % len(graph.atoms))
for atom in graph.atoms:
    print("  %s" % fmt(atom))
