"""Bundled example scenes for the three table families.

Each family ships five training fixtures and ten test fixtures.
Training fixtures carry a reference relation graph plus authored poses
that satisfy it (feasibility and functionality both 1.0 by
construction); test fixtures carry only objects and an instruction.
Files are JSON scene documents named ``<family>_<kind>_<index>.json``
and regenerated by ``tools/make_fixtures.py``.
"""

from __future__ import annotations

import json
from importlib import resources

from ..errors import ValidationError
from ..relations import Scene
from ..sceneio import SceneBundle, bundle_from_doc

_FAMILIES = ("study_desk", "coffee_table", "dining_table")


def fixture_names() -> list[str]:
    """Sorted stems of every bundled scene file."""
    root = resources.files(__package__)
    return sorted(p.name[:-5] for p in root.iterdir()
                  if p.name.endswith(".json"))


def load_fixture(name: str) -> SceneBundle:
    """One bundle by stem, e.g. ``dining_table_train_1``."""
    root = resources.files(__package__)
    path = root.joinpath(name + ".json")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValidationError("no bundled fixture named %r" % (name,))
    return bundle_from_doc(doc, source=name)


def _bundles(kind: str, family: str | None) -> list[SceneBundle]:
    if family is not None and family not in _FAMILIES:
        raise ValidationError("unknown task family %r" % (family,))
    marker = "_" + kind + "_"
    out = []
    for stem in fixture_names():
        if marker not in stem:
            continue
        fam = stem[:stem.rindex(marker)]
        if family is not None and fam != family:
            continue
        out.append(load_fixture(stem))
    return out


def training_bundles(family: str | None = None) -> list[SceneBundle]:
    """Training fixtures (posed, with reference graphs)."""
    return _bundles("train", family)


def test_bundles(family: str | None = None) -> list[SceneBundle]:
    """Test fixtures (instruction only)."""
    return _bundles("test", family)


def training_scenes(family: str) -> list[Scene]:
    """Posed training scenes, used as few-shot prompt examples."""
    return [b.scene for b in training_bundles(family)]
