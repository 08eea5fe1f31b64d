"""Deterministic layout programs for the three table families.

Each family interpreter walks the categorized object groups and emits
ground atoms. Emission is conflict-free by construction: every object
receives either placement atoms naming compatible regions (corners pair
an x-edge with a y-edge, never two opposing edges) or a chain of
adjacency atoms hanging off an anchor object.

Dining place settings are written once in the diner's local frame and
mapped through the seat's transform; for a diner seated at the back
edge the local left/right swaps, which realizes the mirrored setting
without per-relation cases.
"""

from __future__ import annotations

from ..errors import ValidationError
from ..relations import GroundAtom, GroundGraph, Scene
from .categorize import base_name, categorize_objects, dining_subtag
from .parsing import TaskContext, parse_instruction

# fallback placement slots for uncategorized objects, cycled in order
_CORNER_SLOTS = [
    ("near_back_edge", "near_left_edge"),
    ("near_front_edge", "near_right_edge"),
    ("near_front_edge", "near_left_edge"),
    ("near_back_edge", "near_right_edge"),
]

_COLUMN_ATOM = {"center": "central_column", "left": "left_half",
                "right": "right_half"}


def propose_program(scene: Scene, family: str,
                    context: TaskContext | None = None) -> GroundGraph:
    """Emit a complete, conflict-free relation graph for the scene."""
    if context is None:
        context = parse_instruction("", family)
    groups = context.groupings or categorize_objects(scene, family, context)
    if family == "dining_table":
        atoms = _dining(scene, groups, context)
    elif family == "study_desk":
        atoms = _study(scene, groups, context)
    elif family == "coffee_table":
        atoms = _coffee(scene, groups, context)
    else:
        raise ValidationError("unknown task family %r" % (family,))
    return GroundGraph(atoms).deduplicated()


def _others_to_corners(atoms: list[GroundAtom], names: list[str]) -> None:
    for i, name in enumerate(names):
        a, b = _CORNER_SLOTS[i % len(_CORNER_SLOTS)]
        atoms.append(GroundAtom(a, (name,)))
        atoms.append(GroundAtom(b, (name,)))


def _row_group(atoms: list[GroundAtom], names: list[str], row_atom: str) -> None:
    """Anchor a group of >= 1 objects as a horizontal row."""
    if len(names) >= 3:
        atoms.append(GroundAtom("aligned_in_horizontal_line", tuple(names)))
        atoms.append(GroundAtom(row_atom, (names[0],)))
    elif len(names) == 2:
        atoms.append(GroundAtom("vertical_symmetry_on_table", tuple(names)))
        atoms.append(GroundAtom("horizontally_aligned", tuple(names)))
        if row_atom != "central_row":
            atoms.append(GroundAtom(row_atom, (names[0],)))
            atoms.append(GroundAtom(row_atom, (names[1],)))
    else:
        atoms.append(GroundAtom(row_atom, (names[0],)))
        atoms.append(GroundAtom("central_column", (names[0],)))


# ---------------------------------------------------------------------------
# dining


class _Seat:
    """One diner's seat: table edge plus column, with the local frame."""

    def __init__(self, tag: str):
        edge, _, column = tag.partition(":")
        self.front = edge == "front"
        self.column = column

    def edge_atom(self, name: str) -> GroundAtom:
        rel = "near_front_edge" if self.front else "near_back_edge"
        return GroundAtom(rel, (name,))

    def column_atom(self, name: str) -> GroundAtom:
        return GroundAtom(_COLUMN_ATOM[self.column], (name,))

    def beside(self, local_left: bool, a: str, b: str) -> GroundAtom:
        """a immediately to the diner's left/right of b, in table frame."""
        left = local_left if self.front else not local_left
        return GroundAtom("left_of" if left else "right_of", (a, b))


def _per_diner_items(groups: dict[str, list[str]], count: int) -> list[dict]:
    """Distribute individual items over diners by position in scene order."""
    diners: list[dict[str, list[str]]] = [dict() for _ in range(count)]
    for name in groups.get("individual", []):
        base = base_name(name)
        placed = min(range(count),
                     key=lambda d: (len(diners[d].get(base, [])), d))
        diners[placed].setdefault(base, []).append(name)
    return diners


_ANCHOR_ORDER = ("serving_plate", "plate", "rice_bowl", "bowl", "cup")
_LEFT_ITEMS = ("fork",)
_RIGHT_ITEMS = ("knife", "spoon", "chopsticks", "cup", "glass")


def _dining(scene: Scene, groups: dict[str, list[str]],
            ctx: TaskContext) -> list[GroundAtom]:
    atoms: list[GroundAtom] = []
    diners = _per_diner_items(groups, max(1, ctx.count))
    for d, (tag, items) in enumerate(zip(ctx.seating, diners)):
        seat = _Seat(tag)
        mirror = ctx.left_handed and d == 0
        anchor = None
        for base in _ANCHOR_ORDER:
            if items.get(base):
                anchor = items[base][0]
                break
        if anchor is None:
            flat = [n for lst in items.values() for n in lst]
            if not flat:
                continue
            anchor = flat[0]
        atoms.append(seat.edge_atom(anchor))
        atoms.append(seat.column_atom(anchor))
        stacked = items.get("rice_bowl", []) + items.get("bowl", [])
        left_chain, right_chain = anchor, anchor
        for base, lst in items.items():
            for name in lst:
                if name == anchor:
                    continue
                if name in stacked and base_name(anchor) in ("serving_plate", "plate"):
                    atoms.append(GroundAtom("on_top_of", (name, anchor)))
                elif (base in _LEFT_ITEMS) != mirror:
                    atoms.append(seat.beside(True, name, left_chain))
                    left_chain = name
                elif base in _RIGHT_ITEMS or base in _LEFT_ITEMS:
                    atoms.append(seat.beside(False, name, right_chain))
                    right_chain = name
                elif base == "napkin":
                    atoms.append(seat.beside(not mirror, name, left_chain
                                             if not mirror else right_chain))
                    if not mirror:
                        left_chain = name
                    else:
                        right_chain = name
                else:
                    atoms.append(seat.beside(False, name, right_chain))
                    right_chain = name
    shared = groups.get("shared", [])
    if len(shared) == 1:
        atoms.append(GroundAtom("centered_table", (shared[0],)))
    elif shared:
        _row_group(atoms, shared, "central_row")
    others = groups.get("others", [])
    seasonings = [n for n in others if dining_subtag(n) == "seasoning"]
    decorations = [n for n in others if dining_subtag(n) == "decoration"]
    plain = [n for n in others if dining_subtag(n) == "plain"]
    if len(seasonings) >= 3:
        atoms.append(GroundAtom("aligned_in_horizontal_line", tuple(seasonings)))
        atoms.append(GroundAtom("near_back_edge", (seasonings[0],)))
    elif len(seasonings) == 2:
        atoms.append(GroundAtom("horizontally_aligned", tuple(seasonings)))
        atoms.append(GroundAtom("near_back_edge", (seasonings[0],)))
    elif seasonings:
        atoms.append(GroundAtom("near_back_edge", (seasonings[0],)))
    if decorations:
        _row_group(atoms, decorations, "central_row")
    _others_to_corners(atoms, plain)
    return atoms


# ---------------------------------------------------------------------------
# study desk


def _study(scene: Scene, groups: dict[str, list[str]],
           ctx: TaskContext) -> list[GroundAtom]:
    atoms: list[GroundAtom] = []
    outputs = list(groups.get("output", []))
    inputs = list(groups.get("input", []))
    io = list(groups.get("io", []))
    if io and (outputs or inputs):
        outputs.extend(io)  # a laptop beside real devices acts as a screen
        io = []
    if outputs:
        atoms.append(GroundAtom("near_back_edge", (outputs[0],)))
        atoms.append(GroundAtom("central_column", (outputs[0],)))
        for prev, name in zip(outputs, outputs[1:]):
            atoms.append(GroundAtom("right_of", (name, prev)))
    for name in io:
        atoms.append(GroundAtom("central_column", (name,)))
        atoms.append(GroundAtom("front_half", (name,)))
    keyboards = [n for n in inputs if base_name(n) != "mouse"]
    mice = [n for n in inputs if base_name(n) == "mouse"]
    if keyboards:
        atoms.append(GroundAtom("central_column", (keyboards[0],)))
        atoms.append(GroundAtom("front_half", (keyboards[0],)))
        for prev, name in zip(keyboards, keyboards[1:]):
            atoms.append(GroundAtom("right_of", (name, prev)))
    pointer_anchor = keyboards[0] if keyboards else None
    for i, name in enumerate(mice):
        if pointer_anchor is None:
            atoms.append(GroundAtom("central_column", (name,)))
            atoms.append(GroundAtom("front_half", (name,)))
            pointer_anchor = name
            continue
        rel = "left_of" if ctx.left_handed else "right_of"
        atoms.append(GroundAtom(rel, (name, pointer_anchor)))
        pointer_anchor = name
    books = groups.get("book", [])
    if len(books) >= 3:
        atoms.append(GroundAtom("aligned_in_vertical_line", tuple(books)))
        atoms.append(GroundAtom("near_left_edge", (books[0],)))
    else:
        halves = ("back_half", "front_half")
        for i, name in enumerate(books):
            atoms.append(GroundAtom("near_left_edge", (name,)))
            atoms.append(GroundAtom(halves[i % 2], (name,)))
    for name in groups.get("lamp", []):
        atoms.append(GroundAtom("near_back_edge", (name,)))
        atoms.append(GroundAtom("near_right_edge", (name,)))
    drink_edge = "near_left_edge" if ctx.left_handed else "near_right_edge"
    for name in groups.get("drink", []):
        atoms.append(GroundAtom(drink_edge, (name,)))
        atoms.append(GroundAtom("front_half", (name,)))
    for name in groups.get("stationery", []):
        atoms.append(GroundAtom("central_row", (name,)))
        atoms.append(GroundAtom("near_right_edge", (name,)))
    _others_to_corners(atoms, groups.get("others", []))
    return atoms


# ---------------------------------------------------------------------------
# coffee table


def _coffee(scene: Scene, groups: dict[str, list[str]],
            ctx: TaskContext) -> list[GroundAtom]:
    atoms: list[GroundAtom] = []
    storage = groups.get("storage", [])
    trays = [n for n in storage if base_name(n) == "tray"]
    rest = [n for n in storage if base_name(n) != "tray"]
    hub = None
    if trays:
        hub = trays[0]
        atoms.append(GroundAtom("centered_table", (hub,)))
        for name in trays[1:]:
            atoms.append(GroundAtom("left_of", (name, hub)))
    right_chain = hub
    left_chain = hub
    for name in rest:
        if hub is None:
            atoms.append(GroundAtom("centered_table", (name,)))
            hub = right_chain = left_chain = name
        elif base_name(name) in ("keys", "key"):
            atoms.append(GroundAtom("on_top_of", (name, hub)))
        elif base_name(name) == "coaster":
            atoms.append(GroundAtom("left_of", (name, left_chain)))
            left_chain = name
        else:
            atoms.append(GroundAtom("right_of", (name, right_chain)))
            right_chain = name
    decorations = groups.get("decoration", [])
    if len(decorations) == 1:
        atoms.append(GroundAtom("near_back_edge", (decorations[0],)))
        atoms.append(GroundAtom("central_column", (decorations[0],)))
    elif len(decorations) >= 3:
        # line the back edge, clear of anything centered on the table
        atoms.append(GroundAtom("aligned_in_horizontal_line",
                                tuple(decorations)))
        atoms.append(GroundAtom("near_back_edge", (decorations[0],)))
    elif decorations:
        _row_group(atoms, decorations, "back_half")
    reading = sorted(groups.get("reading", []),
                     key=lambda n: -scene.objects[scene.index_of(n)].shape.area)
    if reading:
        if hub is not None:
            # a centered hub leaves no front-center room on shallow tables
            atoms.append(GroundAtom("left_of", (reading[0], left_chain)))
            left_chain = reading[0]
        else:
            atoms.append(GroundAtom("central_column", (reading[0],)))
            atoms.append(GroundAtom("front_half", (reading[0],)))
        for below, name in zip(reading, reading[1:]):
            atoms.append(GroundAtom("on_top_of", (name, below)))
    drinks = groups.get("drink", [])
    if drinks:
        atoms.append(GroundAtom("right_half", (drinks[0],)))
        atoms.append(GroundAtom("front_half", (drinks[0],)))
        for prev, name in zip(drinks, drinks[1:]):
            atoms.append(GroundAtom("left_of", (name, prev)))
    _others_to_corners(atoms, groups.get("others", []))
    return atoms
