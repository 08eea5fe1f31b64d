"""Keyword-based instruction parsing into a task context.

All trigger phrases live in the tables below; parsing is deterministic
and never fails (unmatched fields keep their documented defaults).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

FAMILIES = ("study_desk", "coffee_table", "dining_table")

DEFAULT_ACTIVITY = {
    "study_desk": "work",
    "coffee_table": "storage&decoration",
    "dining_table": "dining",
}

_NUMBER_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "1": 1, "2": 2, "3": 3, "4": 4, "5": 5,
    "6": 6, "7": 7, "8": 8,
}

_PARTY_NOUNS = r"(?:people|persons?|diners?|guests?|eaters?|users?)"

# searched in order; first hit wins
_COUNT_PATTERNS = [
    r"\bfor\s+(\w+)\s+" + _PARTY_NOUNS,
    r"\bfor\s+(\w+)\b",
    r"\b(\w+)\s+" + _PARTY_NOUNS,
]

_SIDE_BY_SIDE = ("side by side", "side-by-side", "next to each other",
                 "same side")
_LEFT_HANDED = ("left-handed", "left handed")

_ACTIVITY_KEYWORDS = {
    "study_desk": [
        ("writing", ("writing", "write", "handwriting", "journaling")),
        ("reading", ("reading", "read a book", "books")),
        ("computer", ("computer", "typing", "coding", "monitor", "laptop")),
    ],
    "coffee_table": [
        ("tea", ("tea", "coffee time", "drinks", "beverage")),
        ("snack", ("snack", "snacks", "treats")),
        ("reading", ("reading", "magazines", "browse")),
        ("clear", ("clear", "tidy", "clean up", "declutter")),
    ],
    "dining_table": [
        ("dining", ("dinner", "lunch", "breakfast", "meal", "dining")),
    ],
}


@dataclass
class TaskContext:
    """Structured facts a program template needs to emit a layout graph."""

    count: int = 1
    seating: list[str] = field(default_factory=list)
    side_by_side: bool = False
    left_handed: bool = False
    activity: str = ""
    groupings: dict[str, list[str]] = field(default_factory=dict)


def _match_count(text: str) -> int | None:
    for pattern in _COUNT_PATTERNS:
        m = re.search(pattern, text)
        if m and m.group(1) in _NUMBER_WORDS:
            return _NUMBER_WORDS[m.group(1)]
    return None


def parse_instruction(text: str, family: str) -> TaskContext:
    """Extract party size, seating flags, and activity from free text.

    Unmatched fields default to: count 1, facing seating, activity per
    family (coffee tables default to storage&decoration).
    """
    if family not in FAMILIES:
        from ..errors import ValidationError
        raise ValidationError("unknown task family %r" % (family,))
    low = (text or "").lower()
    ctx = TaskContext(activity=DEFAULT_ACTIVITY[family])
    count = _match_count(low)
    if count is not None:
        ctx.count = count
    ctx.side_by_side = any(k in low for k in _SIDE_BY_SIDE)
    ctx.left_handed = any(k in low for k in _LEFT_HANDED)
    for name, keys in _ACTIVITY_KEYWORDS[family]:
        if any(k in low for k in keys):
            ctx.activity = name
            break
    ctx.seating = seat_plan(ctx.count, ctx.side_by_side)
    return ctx


def seat_plan(count: int, side_by_side: bool) -> list[str]:
    """Region tags for each diner: '<edge>:<column>' around the table."""
    if count <= 1:
        return ["front:center"]
    if count == 2:
        if side_by_side:
            return ["front:left", "front:right"]
        return ["front:center", "back:center"]
    slots = ["front:left", "back:left", "front:right", "back:right",
             "front:center", "back:center"]
    return [slots[i % len(slots)] for i in range(count)]
