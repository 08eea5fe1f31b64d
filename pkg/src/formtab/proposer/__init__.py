"""Relation-graph proposal from an instruction and a scene.

Two interchangeable backends produce a GroundGraph: deterministic
per-family program interpreters, and a client for an external
text-generation service. Both feed the same self-reflection loop that
repairs conflicts and incompleteness before the graph reaches the
sampler.
"""

from ..errors import ValidationError
from ..relations import GroundGraph, Scene
from .categorize import base_name, categorize_objects, dining_subtag
from .llm import (ENV_KEY, ENV_URL, PROGRAM_BACKEND, ProposerBackend,
                  conflict_report, parse_reply, propose_llm,
                  request_completion)
from .parsing import (DEFAULT_ACTIVITY, FAMILIES, TaskContext,
                      parse_instruction, seat_plan)
from .programs import propose_program
from .prompts import build_prompt, relation_library_text
from .reflect import ReflectionResult, program_repair, self_reflect

__all__ = [
    "DEFAULT_ACTIVITY", "ENV_KEY", "ENV_URL", "FAMILIES",
    "PROGRAM_BACKEND", "ProposerBackend", "ReflectionResult", "TaskContext",
    "base_name", "build_prompt", "categorize_objects", "conflict_report",
    "dining_subtag", "parse_instruction", "parse_reply", "program_repair",
    "propose", "propose_llm", "propose_program", "relation_library_text",
    "request_completion", "seat_plan", "self_reflect",
]


def propose(scene: Scene, instruction: str, family: str,
            backend: ProposerBackend = PROGRAM_BACKEND) -> ReflectionResult:
    """Full pipeline: parse, categorize, propose, then self-reflect."""
    context = parse_instruction(instruction, family)
    categorize_objects(scene, family, context)
    if backend.kind == "program":
        graph = propose_program(scene, family, context)
        return self_reflect(graph, scene, max_iters=backend.max_reflect)
    if backend.kind != "llm":
        raise ValidationError("unknown proposer backend %r" % (backend.kind,))
    graph = propose_llm(scene, instruction, family, backend)

    def reprompt(g: GroundGraph, conflicts: list, missing: list) -> GroundGraph:
        previous = "\n".join('[["%s"]]' % '", "'.join((a.relation,) + a.args)
                             for a in g.atoms)
        extra = ("Previous proposal:\n" + previous + "\n"
                 + conflict_report(conflicts, missing))
        return propose_llm(scene, instruction, family, backend,
                           extra_user_message=extra)

    return self_reflect(graph, scene, max_iters=backend.max_reflect,
                        repair=reprompt)
