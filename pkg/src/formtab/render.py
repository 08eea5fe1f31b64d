"""Deterministic SVG rendering of a posed scene.

The table maps to a fixed-width canvas preserving aspect ratio; the y
axis is flipped so the table's front edge sits at the bottom of the
image. Each object is a rectangle rotated about its centroid with an
SVG transform whose angle is the pose theta in degrees (negated for the
flipped axis). Objects that collide or sit fully off the table get a
thick dashed red outline. Output depends only on the inputs, so renders
are byte-stable.
"""

from __future__ import annotations

import math

from .evaluate import colliding_pairs, off_table_objects
from .relations import Scene

CANVAS_W = 640.0
MARGIN = 40.0

_PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2",
            "#edc948", "#ff9da7", "#9c755f")


def _fmt(value: float) -> str:
    """Fixed-precision numbers keep the byte stream stable."""
    text = "%.3f" % (value,)
    return "-0.000" if text == "-0.000" else text


def render_svg(scene: Scene) -> str:
    """The scene as an SVG document string."""
    table = scene.table
    scale = (CANVAS_W - 2.0 * MARGIN) / table.length
    width = CANVAS_W
    height = table.width * scale + 2.0 * MARGIN

    def sx(x: float) -> float:
        return MARGIN + x * table.length * scale

    def sy(y: float) -> float:
        return height - MARGIN - y * table.width * scale

    flagged = set(off_table_objects(scene)) if scene.objects else set()
    for a, b in (colliding_pairs(scene) if scene.objects else []):
        flagged.update((a, b))

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" '
        'viewBox="0 0 %s %s">' % (_fmt(width), _fmt(height),
                                  _fmt(width), _fmt(height)),
        '  <rect x="%s" y="%s" width="%s" height="%s" fill="#f5efe0" '
        'stroke="#333333" stroke-width="2"/>'
        % (_fmt(MARGIN), _fmt(MARGIN), _fmt(width - 2 * MARGIN),
           _fmt(height - 2 * MARGIN)),
    ]
    for i, obj in enumerate(scene.objects):
        if obj.pose is None:
            continue
        w = obj.shape.length * scale
        h = obj.shape.width * scale
        cx, cy = sx(obj.pose.x), sy(obj.pose.y)
        deg = -math.degrees(obj.pose.theta)
        color = _PALETTE[i % len(_PALETTE)]
        stroke = ('stroke="#cc0000" stroke-width="3" stroke-dasharray="6,3"'
                  if obj.name in flagged else
                  'stroke="#222222" stroke-width="1"')
        lines.append(
            '  <g transform="translate(%s,%s) rotate(%s)">'
            % (_fmt(cx), _fmt(cy), _fmt(deg)))
        lines.append(
            '    <rect x="%s" y="%s" width="%s" height="%s" fill="%s" '
            'fill-opacity="0.75" %s/>'
            % (_fmt(-w / 2.0), _fmt(-h / 2.0), _fmt(w), _fmt(h), color,
               stroke))
        lines.append('    <text x="0" y="0" font-size="11" '
                     'font-family="sans-serif" text-anchor="middle" '
                     'dominant-baseline="middle" transform="rotate(%s)">'
                     '%s</text>' % (_fmt(-deg), obj.name))
        lines.append('  </g>')
    lines.append('</svg>')
    return "\n".join(lines) + "\n"


def render_to_file(path: str, scene: Scene) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(scene))
