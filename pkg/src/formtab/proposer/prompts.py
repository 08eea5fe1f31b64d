"""Prompt assembly for the external text-generation backend.

Every request is built from four parts: a task prompt carrying the
relation library, few-shot examples produced by annotating posed bundled
scenes, the family's program sketch, and an output-format prompt. The
reply grammar the output prompt demands is what ``llm.parse_reply``
accepts: one bracketed relation list per entry, relation name first.
"""

from __future__ import annotations

from ..relations import REGISTRY, annotate
from .parsing import FAMILIES

TASK_PROMPT = """\
You arrange objects on a tabletop by proposing abstract spatial relations.
The table spans x in [0, 1] (left to right) and y in [0, 1] (front to
back, front being where the primary user sits). Propose relations only
from the library below, naming only objects present in the scene.

Relation library (name/arity: meaning):
{library}"""

OUTPUT_PROMPT = """\
Extract all proposed relationships into a list. Write one entry per line,
each a bracketed list whose first element is the relation name and the
rest are object names, for example:
[["near_front_edge", "serving_plate_1"]]
[["left_of", "fork_1", "serving_plate_1"]]
Directions are table-frame: left_of/right_of and the front/back edges are
seen from the primary seat. For a diner seated at the opposite (back)
edge these directions are inverted; instead of "right_of(knife, plate)"
it should be "left_of(knife, plate)" for that diner's setting. Output
only the bracketed list, nothing else."""

SKETCHES = {
    "study_desk": """\
Program sketch for a study desk:
1. Extract the main activity from the instruction (default: work).
2. Categorize devices based on their function: output devices (monitor),
   input devices (keyboard, mouse), IO devices (laptop).
3. Place output devices near the back edge in the central column, side by
   side if there are several. For IO_devices, placed them at the center
   toward the front when they are the only main device.
4. Input devices go in front of the screens: keyboard centered near the
   user, mouse immediately beside it on the dominant-hand side.
5. Books stack or line up along the left edge; the lamp takes the back
   corner opposite the books; a drink sits by the dominant hand near the
   front; stationery rests along the right edge midway.
6. Remaining objects go to free corners.""",
    "coffee_table": """\
Program sketch for a coffee table:
1. Extract the main activity (the default is "storage&decoration").
2. extract_storage_and_decoration_objects: trays, keys, remotes and
   coasters are storage; vases, candles and plants are decoration.
3. Center the tray on the table; small storage items (keys) go on top of
   the tray; remotes immediately right of it, coasters immediately left.
4. Decoration lines the back: a single vase centered against the back
   edge, pairs mirrored across the table's vertical midline.
5. Reading material stacks front and center, largest at the bottom.
6. Drinks sit on the front-right quarter; remaining objects go to free
   corners.""",
    "dining_table": """\
Program sketch for a dining table:
1. Infer the number of diners from the instruction, plus side-by-side or
   left-handed seating notes.
2. Seat the diners: one diner sits at the front center; two diners face
   each other across the table (front center and back center) unless
   side by side; more diners fill left and right columns of both edges.
3. categorize_objects_based_on_ownership: each diner owns one setting of
   individual items (plate, fork, knife, spoon, chopsticks, napkin,
   cup). Shared dishes are for communal use.
4. Observing dining etiquette, build each setting in the diner's frame:
   the plate near the diner's edge in the seat's column, fork to the
   diner's left of the plate, knife and spoon to the diner's right,
   napkin outside the fork, bowls on top of the plate. A left-handed
   diner's setting is mirrored.
5. Shared dishes go to the table center; two shared dishes mirror across
   the vertical midline along the central row.
6. Seasonings line up near the back edge; remaining objects go to free
   corners.""",
}


def relation_library_text() -> str:
    lines = []
    for name, spec in REGISTRY.items():
        arity = "3+" if spec.arity is None else str(spec.arity)
        lines.append("- %s/%s: %s" % (name, arity, spec.doc))
    return "\n".join(lines)


def scene_text(scene, instruction: str) -> str:
    lines = ["Table: %.2f x %.2f." % (scene.table.length, scene.table.width),
             "Objects (name, length x width in meters):"]
    for obj in scene.objects:
        lines.append("- %s: %.2f x %.2f" % (obj.name, obj.shape.length,
                                            obj.shape.width))
    lines.append("Instruction: %s" % (instruction or "(none)"))
    return "\n".join(lines)


def example_text(scene) -> str:
    """One few-shot block: a posed scene and its active relations."""
    atoms = annotate(scene).atoms
    body = "\n".join('[["%s"]]' % '", "'.join((a.relation,) + a.args)
                     for a in atoms)
    return scene_text(scene, "(example scene with known-good poses)") + \
        "\nActive relationships:\n" + (body or "(none)")


def build_prompt(scene, instruction: str, family: str,
                 examples: list | None = None) -> list[dict]:
    """The chat messages for one proposal request."""
    if family not in FAMILIES:
        from ..errors import ValidationError
        raise ValidationError("unknown task family %r" % (family,))
    if examples is None:
        from ..fixtures import training_scenes
        examples = [s for s in training_scenes(family)[:2]]
    parts = []
    for ex in examples:
        parts.append(example_text(ex))
    parts.append(SKETCHES[family])
    parts.append(scene_text(scene, instruction))
    parts.append(OUTPUT_PROMPT)
    system = TASK_PROMPT.format(library=relation_library_text())
    return [{"role": "system", "content": system},
            {"role": "user", "content": "\n\n".join(parts)}]
