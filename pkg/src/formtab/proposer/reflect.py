"""Self-reflection loop: detect and repair graph conflicts/incompleteness.

The loop alternates checking with repairing, at most ``max_iters`` times.
The program backend repairs mechanically: the later-emitted atom of each
conflicting pair is dropped, and unconstrained objects receive
central_row + central_column anchors. The llm backend instead re-prompts
the service with a conflict report; that path is injected as a callable
so this module stays network-free.

Residual issues are reported on the result, never raised.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from ..errors import FormtabError
from ..relations import (GroundAtom, GroundGraph, Scene, check_completeness,
                         check_conflicts)

log = logging.getLogger(__name__)

RepairFn = Callable[[GroundGraph, list, list], GroundGraph]


@dataclass(frozen=True)
class ReflectionResult:
    """Final graph plus what the loop saw and whether issues remain."""

    graph: GroundGraph
    iterations: int
    conflicts: list = field(default_factory=list)
    unconstrained: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.conflicts and not self.unconstrained


def program_repair(graph: GroundGraph, conflicts: list,
                   unconstrained: list) -> GroundGraph:
    """Drop the later atom of each conflict; anchor uncovered objects."""
    drop = {later.key() for _, later in conflicts}
    atoms = [a for a in graph.atoms if a.key() not in drop]
    for name in unconstrained:
        atoms.append(GroundAtom("central_row", (name,)))
        atoms.append(GroundAtom("central_column", (name,)))
    return GroundGraph(atoms).deduplicated()


def self_reflect(graph: GroundGraph, scene: Scene, max_iters: int = 3,
                 repair: RepairFn | None = None) -> ReflectionResult:
    """Iterate check-and-repair until clean or the iteration cap."""
    if max_iters < 0:
        max_iters = 0
    if repair is None:
        repair = program_repair
    conflicts = check_conflicts(graph)
    missing = check_completeness(graph, scene)
    iterations = 0
    while (conflicts or missing) and iterations < max_iters:
        try:
            graph = repair(graph, conflicts, missing)
        except FormtabError as exc:
            log.warning("reflection repair failed, keeping last graph: %s", exc)
            break
        iterations += 1
        conflicts = check_conflicts(graph)
        missing = check_completeness(graph, scene)
    if conflicts or missing:
        log.warning("reflection left %d conflicts, %d unconstrained objects",
                    len(conflicts), len(missing))
    return ReflectionResult(graph=graph, iterations=iterations,
                            conflicts=list(conflicts),
                            unconstrained=list(missing))
