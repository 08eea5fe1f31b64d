"""Deterministic object grouping by name-prefix tables.

An object's base name is its name with any trailing _<digits> counter
removed; each family maps base names to a category. Unknown names fall
into "others" (never an error).
"""

from __future__ import annotations

import re

from ..relations import Scene

# category tables per family: base name -> group
_DINING = {
    "serving_plate": "individual", "plate": "individual", "fork": "individual",
    "knife": "individual", "spoon": "individual", "chopsticks": "individual",
    "napkin": "individual", "cup": "individual", "glass": "individual",
    "rice_bowl": "individual", "bowl": "individual",
    "medium_plate": "shared", "large_plate": "shared", "salad_bowl": "shared",
    "serving_bowl": "shared", "soup_pot": "shared", "pitcher": "shared",
    "bread_basket": "shared",
}
_DINING_OTHERS = {
    # sub-tags inside "others", used by the dining template
    "seasoning": "seasoning", "salt": "seasoning", "pepper": "seasoning",
    "sauce": "seasoning", "candle": "decoration", "vase": "decoration",
}

_STUDY = {
    "monitor": "output", "screen": "output",
    "keyboard": "input", "mouse": "input", "trackpad": "input",
    "laptop": "io",
    "book": "book", "notebook": "book", "textbook": "book",
    "lamp": "lamp",
    "mug": "drink", "cup": "drink", "bottle": "drink",
    "pen": "stationery", "pencil": "stationery", "pen_holder": "stationery",
}

_COFFEE = {
    "tray": "storage", "keys": "storage", "key": "storage",
    "remote": "storage", "remote_control": "storage", "coaster": "storage",
    "bowl": "storage",
    "vase": "decoration", "candle": "decoration", "flower": "decoration",
    "plant": "decoration", "sculpture": "decoration",
    "book": "reading", "magazine": "reading",
    "mug": "drink", "cup": "drink", "teapot": "drink",
}

_TABLES = {
    "dining_table": _DINING,
    "study_desk": _STUDY,
    "coffee_table": _COFFEE,
}


def base_name(name: str) -> str:
    """Object name with a trailing _<digits> counter stripped."""
    return re.sub(r"_\d+$", "", name)


def categorize_objects(scene: Scene, family: str, context=None) -> dict[str, list[str]]:
    """Group scene object names by the family's category table.

    Returns a dict whose keys are the categories present (plus "others"
    whenever at least one name matched no table entry); each value keeps
    scene order. The result is also stored on context.groupings when a
    context is given.
    """
    if family not in _TABLES:
        from ..errors import ValidationError
        raise ValidationError("unknown task family %r" % (family,))
    table = _TABLES[family]
    groups: dict[str, list[str]] = {}
    for name in scene.names:
        cat = table.get(base_name(name), "others")
        groups.setdefault(cat, []).append(name)
    if context is not None:
        context.groupings = groups
    return groups


def dining_subtag(name: str) -> str:
    """Finer tag for dining 'others': seasoning, decoration, or plain."""
    return _DINING_OTHERS.get(base_name(name), "plain")
