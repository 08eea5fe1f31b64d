"""formtab: functional tabletop arrangement.

Grounds under-specified arrangement instructions into object poses by
proposing abstract spatial relations and sampling poses from a product of
per-relation diffusion factors.
"""

from .geometry import (Aabb, ObjectShape, OrientedBox, Pose, TableFrame,
                       aabb_of, overlap, to_oriented_box, wrap_angle)
from .relations import (DEFAULT_THRESHOLDS, RELATIONS, GroundAtom, GroundGraph,
                        Scene, SceneObject, Thresholds, annotate,
                        check_completeness, check_conflicts, classify)

__version__ = "0.1.0"

__all__ = [
    "Aabb", "ObjectShape", "OrientedBox", "Pose", "TableFrame",
    "aabb_of", "overlap", "to_oriented_box", "wrap_angle",
    "DEFAULT_THRESHOLDS", "RELATIONS", "GroundAtom", "GroundGraph",
    "Scene", "SceneObject", "Thresholds", "annotate",
    "check_completeness", "check_conflicts", "classify",
    "__version__",
]
