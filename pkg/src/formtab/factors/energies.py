"""Relation energies with hand-derived gradients, vectorized over a batch.

Each relation maps to a smooth non-negative energy built from squared
hinges on the same geometric quantities its classifier thresholds. The
energy is zero only on configurations the classifier accepts (for some
relations the zero set is deliberately tighter, e.g. adjacency bands
exclude interior overlap). Every relation also carries containment
hinges that keep bounding boxes on the table, so zero energy implies an
on-table, classifier-true arrangement. Poses are given in units of the table span
(span = 1 for normalized table coordinates); shapes stay normalized and
are scaled internally. Gradients are exact almost everywhere; ties in
min/max branches follow numpy's first-occurrence convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ArityError, UnsupportedRelationError
from ..relations import (CENTRAL_BAND, DEFAULT_THRESHOLDS, REGISTRY,
                         Thresholds, resolve_relation)

_SX = np.array([-1.0, 1.0, 1.0, -1.0])
_SY = np.array([-1.0, -1.0, 1.0, 1.0])
_W_ANGLE = 4.0
_KAPPA_ANGLE = 0.0025


@dataclass
class _Tols:
    """Thresholds scaled to span units (angles are never scaled).

    margin < 1 shrinks every acceptance band so the zero-energy set sits
    strictly inside the classifier's: upper-bound tolerances multiply by
    margin, the lower-bound overlap fraction divides by it. Geometric
    boundaries (table midline, table sides) are never moved.
    """

    edge: float
    align: float
    angle: float
    center: float
    spacing: float
    frac: float
    band: float
    mid: float
    span: float
    margin: float


def _scaled(th: Thresholds, span: float, margin: float = 1.0) -> _Tols:
    return _Tols(edge=th.edge_near * span * margin,
                 align=th.align_tol * span * margin,
                 angle=th.angle_tol * margin,
                 center=th.center_tol * span * margin,
                 spacing=th.spacing_tol * span * margin,
                 frac=min(0.95, th.overlap_frac / margin),
                 band=CENTRAL_BAND * span * margin,
                 mid=0.5 * span, span=span, margin=margin)


class _BatchGeom:
    """Oriented box quantities and their theta-derivatives, batched."""

    def __init__(self, poses: np.ndarray, shapes: np.ndarray, span: float):
        self.B, self.k = poses.shape[0], poses.shape[1]
        self.cx = poses[:, :, 0]
        self.cy = poses[:, :, 1]
        self.th = poses[:, :, 2]
        self.hx = shapes[:, 0] * span / 2.0
        self.hy = shapes[:, 1] * span / 2.0
        self.len_x = shapes[:, 0] * span
        self.len_y = shapes[:, 1] * span
        self.area = self.len_x * self.len_y
        cos, sin = np.cos(self.th), np.sin(self.th)
        self.cos, self.sin = cos, sin
        ox = _SX[None, :] * self.hx[:, None]
        oy = _SY[None, :] * self.hy[:, None]
        self.cornx = self.cx[:, :, None] + cos[:, :, None] * ox - sin[:, :, None] * oy
        self.corny = self.cy[:, :, None] + sin[:, :, None] * ox + cos[:, :, None] * oy
        self.dcornx = -sin[:, :, None] * ox - cos[:, :, None] * oy
        self.dcorny = cos[:, :, None] * ox - sin[:, :, None] * oy

        def pick(values, dvalues, idx):
            sel = np.take_along_axis(values, idx[:, :, None], axis=2)[:, :, 0]
            dsel = np.take_along_axis(dvalues, idx[:, :, None], axis=2)[:, :, 0]
            return sel, dsel

        self.left, self.dleft = pick(self.cornx, self.dcornx, self.cornx.argmin(2))
        self.right, self.dright = pick(self.cornx, self.dcornx, self.cornx.argmax(2))
        self.bottom, self.dbottom = pick(self.corny, self.dcorny, self.corny.argmin(2))
        self.top, self.dtop = pick(self.corny, self.dcorny, self.corny.argmax(2))
        self.height = self.top - self.bottom
        self.dheight = self.dtop - self.dbottom


def _relu(u: np.ndarray) -> np.ndarray:
    return np.maximum(u, 0.0)


def _wrap(diff: np.ndarray) -> np.ndarray:
    return np.mod(diff + math.pi, 2.0 * math.pi) - math.pi


# Every _e_* function accumulates into E [B] and G [B, k, 3] in place.
# Argument indices are positions inside the atom's own sub-scene.

def _side_hinge(E, G, g, i, kind, limit, t):
    """Hinge on one AABB side against a scalar limit.

    kind encodes quantity and direction: (side, sign) with energy
    relu(sign * (side - limit))^2.
    """
    side, sign = kind
    if side == "left":
        q, dq, axis = g.left[:, i], g.dleft[:, i], 0
    elif side == "right":
        q, dq, axis = g.right[:, i], g.dright[:, i], 0
    elif side == "bottom":
        q, dq, axis = g.bottom[:, i], g.dbottom[:, i], 1
    else:
        q, dq, axis = g.top[:, i], g.dtop[:, i], 1
    m = _relu(sign * (q - limit))
    E += m * m
    w = 2.0 * m * sign
    G[:, i, axis] += w
    G[:, i, 2] += w * dq


def _e_near_front_edge(g, t, E, G):
    _side_hinge(E, G, g, 0, ("bottom", 1.0), t.edge, t)


def _e_near_back_edge(g, t, E, G):
    _side_hinge(E, G, g, 0, ("top", -1.0), t.span - t.edge, t)


def _e_near_left_edge(g, t, E, G):
    _side_hinge(E, G, g, 0, ("left", 1.0), t.edge, t)


def _e_near_right_edge(g, t, E, G):
    _side_hinge(E, G, g, 0, ("right", -1.0), t.span - t.edge, t)


def _half_pad(t) -> float:
    """Inward shift of the midline target under margin < 1.

    The half-table boundary itself is geometric and never moves; the
    energy just aims a little inside it so boundary jitter stays legal.
    """
    return (1.0 - t.margin) * 0.05 * t.span


def _e_left_half(g, t, E, G):
    _side_hinge(E, G, g, 0, ("right", 1.0), t.mid - _half_pad(t), t)


def _e_right_half(g, t, E, G):
    _side_hinge(E, G, g, 0, ("left", -1.0), t.mid + _half_pad(t), t)


def _e_front_half(g, t, E, G):
    _side_hinge(E, G, g, 0, ("top", 1.0), t.mid - _half_pad(t), t)


def _e_back_half(g, t, E, G):
    _side_hinge(E, G, g, 0, ("bottom", -1.0), t.mid + _half_pad(t), t)


def _e_contain(g, t, E, G):
    """Keeps boxes inside the table and headings in (-pi, pi].

    Added to all relations. The heading hinge is zero on the principal
    branch, so it never charges a naturally parameterized pose; it only
    stops unconstrained angle coordinates from drifting without bound.
    """
    for i in range(g.k):
        _side_hinge(E, G, g, i, ("left", -1.0), 0.0, t)
        _side_hinge(E, G, g, i, ("right", 1.0), t.span, t)
        _side_hinge(E, G, g, i, ("bottom", -1.0), 0.0, t)
        _side_hinge(E, G, g, i, ("top", 1.0), t.span, t)
        th = g.th[:, i]
        m = _relu(np.abs(th) - math.pi)
        E += m * m
        G[:, i, 2] += 2.0 * m * np.sign(th)


def _band_hinge(E, G, value, tol, grads):
    """Hinge on |value| - tol; grads is [(i, axis, coef)] for d value."""
    m = _relu(np.abs(value) - tol)
    E += m * m
    w = 2.0 * m * np.sign(value)
    for i, axis, coef, extra in grads:
        contrib = w * coef if extra is None else w * coef * extra
        G[:, i, axis] += contrib


def _e_central_column(g, t, E, G):
    _band_hinge(E, G, g.cx[:, 0] - t.mid, t.band, [(0, 0, 1.0, None)])


def _e_central_row(g, t, E, G):
    _band_hinge(E, G, g.cy[:, 0] - t.mid, t.band, [(0, 1, 1.0, None)])


def _dist_hinge(E, G, dx, dy, tol, gx, gy):
    """Hinge on euclidean length of (dx, dy) minus tol.

    gx/gy list (index, coefficient) pairs for the partials of dx and dy.
    """
    d = np.sqrt(dx * dx + dy * dy)
    m = _relu(d - tol)
    E += m * m
    safe = np.where(d > 1e-12, d, 1.0)
    wx = 2.0 * m * dx / safe
    wy = 2.0 * m * dy / safe
    for i, coef in gx:
        G[:, i, 0] += coef * wx
    for i, coef in gy:
        G[:, i, 1] += coef * wy


def _e_centered_table(g, t, E, G):
    _dist_hinge(E, G, g.cx[:, 0] - t.mid, g.cy[:, 0] - t.mid, t.center,
                [(0, 1.0)], [(0, 1.0)])


def _e_centered(g, t, E, G):
    _dist_hinge(E, G, g.cx[:, 0] - g.cx[:, 1], g.cy[:, 0] - g.cy[:, 1],
                t.center, [(0, 1.0), (1, -1.0)], [(0, 1.0), (1, -1.0)])


def _e_vertical_symmetry_on_table(g, t, E, G):
    _dist_hinge(E, G, g.cx[:, 0] + g.cx[:, 1] - t.span, g.cy[:, 0] - g.cy[:, 1],
                t.center, [(0, 1.0), (1, 1.0)], [(0, 1.0), (1, -1.0)])


def _e_horizontal_symmetry_on_table(g, t, E, G):
    _dist_hinge(E, G, g.cx[:, 0] - g.cx[:, 1], g.cy[:, 0] + g.cy[:, 1] - t.span,
                t.center, [(0, 1.0), (1, -1.0)], [(0, 1.0), (1, 1.0)])


def _e_vertical_line_symmetry(g, t, E, G):
    # args: axis, a, b; mirror across the vertical line through the axis
    _dist_hinge(E, G, g.cx[:, 1] + g.cx[:, 2] - 2.0 * g.cx[:, 0],
                g.cy[:, 1] - g.cy[:, 2], t.center,
                [(1, 1.0), (2, 1.0), (0, -2.0)], [(1, 1.0), (2, -1.0)])


def _e_horizontal_line_symmetry(g, t, E, G):
    _dist_hinge(E, G, g.cx[:, 1] - g.cx[:, 2],
                g.cy[:, 1] + g.cy[:, 2] - 2.0 * g.cy[:, 0], t.center,
                [(1, 1.0), (2, -1.0)], [(1, 1.0), (2, 1.0), (0, -2.0)])


def _angle_pair(E, G, g, i, j, tol):
    # heading mismatch enters through a saturating well: curvature
    # _W_ANGLE near the band (headings are pinned by this term alone, so
    # they need more stiffness than the positional hinges), but the pull
    # saturates at 2 * _W_ANGLE * sqrt(_KAPPA_ANGLE) so a heading far
    # around the circle is nudged, never slingshot past the target
    v = _wrap(g.th[:, i] - g.th[:, j])
    m = _relu(np.abs(v) - tol)
    q = m / math.sqrt(_KAPPA_ANGLE)
    E += 2.0 * _W_ANGLE * _KAPPA_ANGLE * (q - np.log1p(q))
    w = 2.0 * _W_ANGLE * m / (1.0 + q) * np.sign(v)
    G[:, i, 2] += w
    G[:, j, 2] -= w


def _bottom_pair(E, G, g, i, j, tol):
    u = g.bottom[:, i] - g.bottom[:, j]
    m = _relu(np.abs(u) - tol)
    E += m * m
    w = 2.0 * m * np.sign(u)
    G[:, i, 1] += w
    G[:, i, 2] += w * g.dbottom[:, i]
    G[:, j, 1] -= w
    G[:, j, 2] -= w * g.dbottom[:, j]


def _e_horizontally_aligned(g, t, E, G, i=0, j=1):
    _bottom_pair(E, G, g, i, j, t.align)
    _angle_pair(E, G, g, i, j, t.angle)


def _e_vertically_aligned(g, t, E, G):
    u = g.cx[:, 0] - g.cx[:, 1]
    m = _relu(np.abs(u) - t.align)
    E += m * m
    w = 2.0 * m * np.sign(u)
    G[:, 0, 0] += w
    G[:, 1, 0] -= w
    _angle_pair(E, G, g, 0, 1, t.angle)


def _left_of_pair(E, G, g, i, j, t):
    """Object i immediately left of object j.

    The zero band keeps the gap in [0, align], so zero-energy layouts touch
    at most and never overlap; with substantial y-overlap required.
    """
    gap = g.left[:, j] - g.right[:, i]
    m_neg = _relu(-gap)
    m_pos = _relu(gap - t.align)
    E += m_neg * m_neg + m_pos * m_pos
    w = 2.0 * m_pos - 2.0 * m_neg
    G[:, j, 0] += w
    G[:, j, 2] += w * g.dleft[:, j]
    G[:, i, 0] -= w
    G[:, i, 2] -= w * g.dright[:, i]

    top_i, top_j = g.top[:, i], g.top[:, j]
    bot_i, bot_j = g.bottom[:, i], g.bottom[:, j]
    ov = np.minimum(top_i, top_j) - np.maximum(bot_i, bot_j)
    need = t.frac * np.minimum(g.height[:, i], g.height[:, j])
    m = _relu(need - ov)
    E += m * m
    w = 2.0 * m  # dE/d(need) = w, dE/d(ov) = -w
    i_top_min = top_i <= top_j
    i_bot_max = bot_i >= bot_j
    # d ov / d top_min = 1, d ov / d bot_max = -1
    G[:, i, 1] += np.where(i_top_min, -w, 0.0) + np.where(i_bot_max, w, 0.0)
    G[:, i, 2] += (np.where(i_top_min, -w * g.dtop[:, i], 0.0)
                   + np.where(i_bot_max, w * g.dbottom[:, i], 0.0))
    G[:, j, 1] += np.where(~i_top_min, -w, 0.0) + np.where(~i_bot_max, w, 0.0)
    G[:, j, 2] += (np.where(~i_top_min, -w * g.dtop[:, j], 0.0)
                   + np.where(~i_bot_max, w * g.dbottom[:, j], 0.0))
    # need depends on theta through the smaller height
    i_h_min = g.height[:, i] <= g.height[:, j]
    G[:, i, 2] += np.where(i_h_min, w * t.frac * g.dheight[:, i], 0.0)
    G[:, j, 2] += np.where(~i_h_min, w * t.frac * g.dheight[:, j], 0.0)


def _e_left_of(g, t, E, G):
    _left_of_pair(E, G, g, 0, 1, t)


def _e_right_of(g, t, E, G):
    _left_of_pair(E, G, g, 1, 0, t)


def _e_on_top_of(g, t, E, G):
    # corners of object 0 expressed in object 1's frame; with margin < 1
    # the target box shrinks by part of the co-oriented slack so corners
    # settle strictly inside rather than on the boundary
    cos1, sin1 = g.cos[:, 1], g.sin[:, 1]
    dx = g.cornx[:, 0, :] - g.cx[:, 1, None]
    dy = g.corny[:, 0, :] - g.cy[:, 1, None]
    u = cos1[:, None] * dx + sin1[:, None] * dy
    v = -sin1[:, None] * dx + cos1[:, None] * dy
    pad_x = (1.0 - t.margin) * max(g.hx[1] - g.hx[0], 0.0)
    pad_y = (1.0 - t.margin) * max(g.hy[1] - g.hy[0], 0.0)
    mu = _relu(np.abs(u) - (g.hx[1] - pad_x))
    mv = _relu(np.abs(v) - (g.hy[1] - pad_y))
    E += (mu * mu + mv * mv).sum(axis=1)
    wu = 2.0 * mu * np.sign(u)
    wv = 2.0 * mv * np.sign(v)
    # partials via the corner point (per corner, then summed)
    G[:, 0, 0] += (wu * cos1[:, None] - wv * sin1[:, None]).sum(1)
    G[:, 0, 1] += (wu * sin1[:, None] + wv * cos1[:, None]).sum(1)
    dpx = g.dcornx[:, 0, :]
    dpy = g.dcorny[:, 0, :]
    G[:, 0, 2] += (wu * (cos1[:, None] * dpx + sin1[:, None] * dpy)
                   + wv * (-sin1[:, None] * dpx + cos1[:, None] * dpy)).sum(1)
    G[:, 1, 0] += (-wu * cos1[:, None] + wv * sin1[:, None]).sum(1)
    G[:, 1, 1] += (-wu * sin1[:, None] - wv * cos1[:, None]).sum(1)
    G[:, 1, 2] += (wu * v - wv * u).sum(1)
    # area ordering is shape-determined: constant, no gradient
    E += max(0.0, g.area[0] - g.area[1]) ** 2


def _sorted_positions(values: np.ndarray):
    order = np.argsort(values, axis=1, kind="stable")
    return order, np.take_along_axis(values, order, axis=1)


def _gap_terms(E, G, g, idx_sorted, gaps, floors, t, axis):
    """Separation floors plus equal-spacing spread for sorted positions.

    idx_sorted [B, m] maps sorted slot to object index; gaps [B, m-1];
    floors [m-1] or [B, m-1] minimum allowed gap per slot pair.
    """
    B = gaps.shape[0]
    rows = np.arange(B)
    m_floor = _relu(floors - gaps)
    E += (m_floor * m_floor).sum(1)
    wg = -2.0 * m_floor  # dE/d gap
    for a in range(gaps.shape[1]):
        np.add.at(G, (rows, idx_sorted[:, a + 1], axis), wg[:, a])
        np.add.at(G, (rows, idx_sorted[:, a], axis), -wg[:, a])
    if gaps.shape[1] >= 2:
        amax = gaps.argmax(1)
        amin = gaps.argmin(1)
        spread = gaps[rows, amax] - gaps[rows, amin]
        m_s = _relu(spread - t.spacing)
        E += m_s * m_s
        w = 2.0 * m_s
        np.add.at(G, (rows, idx_sorted[rows, amax + 1], axis), w)
        np.add.at(G, (rows, idx_sorted[rows, amax], axis), -w)
        np.add.at(G, (rows, idx_sorted[rows, amin + 1], axis), -w)
        np.add.at(G, (rows, idx_sorted[rows, amin], axis), w)


def _e_line(g, t, E, G, horizontal: bool):
    k = g.k
    for i in range(k):
        for j in range(i + 1, k):
            _angle_pair(E, G, g, i, j, t.angle)
            if horizontal:
                _bottom_pair(E, G, g, i, j, t.align)
            else:
                u = g.cx[:, i] - g.cx[:, j]
                m = _relu(np.abs(u) - t.align)
                E += m * m
                w = 2.0 * m * np.sign(u)
                G[:, i, 0] += w
                G[:, j, 0] -= w
    if horizontal:
        order, sorted_vals = _sorted_positions(g.cx)
        extents = g.len_x
        axis = 0
    else:
        order, sorted_vals = _sorted_positions(g.cy)
        extents = g.len_y
        axis = 1
    gaps = np.diff(sorted_vals, axis=1)
    ext_sorted = extents[order]
    floors = np.maximum(t.align, 0.5 * (ext_sorted[:, :-1] + ext_sorted[:, 1:]))
    _gap_terms(E, G, g, order, gaps, floors, t, axis)


def _e_aligned_in_horizontal_line(g, t, E, G):
    _e_line(g, t, E, G, horizontal=True)


def _e_aligned_in_vertical_line(g, t, E, G):
    _e_line(g, t, E, G, horizontal=False)


def grid_shape(count: int) -> tuple[int, int] | None:
    """Canonical (rows, cols) lattice for a group size, rows <= cols."""
    best = None
    for r in range(2, int(math.isqrt(count)) + 1):
        if count % r == 0 and count // r >= 2:
            best = (r, count // r)
    return best


def _e_regular_grid(g, t, E, G):
    shape = grid_shape(g.k)
    if shape is None:
        E += 1.0  # no lattice exists for this count; unsatisfiable
        return
    r, c = shape
    B = g.B
    rows_idx = np.argsort(g.cy, axis=1, kind="stable").reshape(B, r, c)
    cx_rows = np.take_along_axis(g.cx, rows_idx.reshape(B, -1), axis=1).reshape(B, r, c)
    inner = np.argsort(cx_rows, axis=2, kind="stable")
    lattice = np.take_along_axis(rows_idx, inner, axis=2)  # [B, r, c]
    flat = lattice.reshape(B, -1)
    cxL = np.take_along_axis(g.cx, flat, axis=1).reshape(B, r, c)
    cyL = np.take_along_axis(g.cy, flat, axis=1).reshape(B, r, c)
    rows = np.arange(B)
    tight = 0.5 * t.align

    for a in range(c):
        for b in range(a + 1, c):
            u = cyL[:, :, a] - cyL[:, :, b]  # [B, r]
            m = _relu(np.abs(u) - tight)
            E += (m * m).sum(1)
            w = 2.0 * m * np.sign(u)
            for ri in range(r):
                np.add.at(G, (rows, lattice[:, ri, a], 1), w[:, ri])
                np.add.at(G, (rows, lattice[:, ri, b], 1), -w[:, ri])
    for a in range(r):
        for b in range(a + 1, r):
            u = cxL[:, a, :] - cxL[:, b, :]  # [B, c]
            m = _relu(np.abs(u) - tight)
            E += (m * m).sum(1)
            w = 2.0 * m * np.sign(u)
            for ci in range(c):
                np.add.at(G, (rows, lattice[:, a, ci], 0), w[:, ci])
                np.add.at(G, (rows, lattice[:, b, ci], 0), -w[:, ci])

    # anchors: mean positions per row/column; separation floors from shape
    # extents keep clusters apart (and are pose-independent constants)
    y_ext = np.take_along_axis(np.broadcast_to(g.len_y, (B, g.k)), flat, 1).reshape(B, r, c)
    x_ext = np.take_along_axis(np.broadcast_to(g.len_x, (B, g.k)), flat, 1).reshape(B, r, c)
    row_anchor = cyL.mean(axis=2)  # [B, r] ascending by construction
    row_gaps = np.diff(row_anchor, axis=1)
    row_h = y_ext.max(axis=2)
    row_floor = np.maximum(3.0 * t.align, 0.5 * (row_h[:, :-1] + row_h[:, 1:]))
    m = _relu(row_floor - row_gaps)
    E += (m * m).sum(1)
    wg = -2.0 * m
    for a in range(r - 1):
        for ci in range(c):
            np.add.at(G, (rows, lattice[:, a + 1, ci], 1), wg[:, a] / c)
            np.add.at(G, (rows, lattice[:, a, ci], 1), -wg[:, a] / c)
    if r >= 3:
        _spread_on_anchors(E, G, row_gaps, lattice, rows, t, axis=1, per=c,
                           arrangement="rows")
    col_anchor = cxL.mean(axis=1)  # [B, c]
    perm = np.argsort(col_anchor, axis=1, kind="stable")
    col_sorted = np.take_along_axis(col_anchor, perm, axis=1)
    col_gaps = np.diff(col_sorted, axis=1)
    col_w = np.take_along_axis(x_ext.max(axis=1), perm, axis=1)
    col_floor = np.maximum(3.0 * t.align, 0.5 * (col_w[:, :-1] + col_w[:, 1:]))
    m = _relu(col_floor - col_gaps)
    E += (m * m).sum(1)
    wg = -2.0 * m
    lattice_perm = np.take_along_axis(lattice, perm[:, None, :].repeat(r, 1), axis=2)
    for a in range(c - 1):
        for ri in range(r):
            np.add.at(G, (rows, lattice_perm[:, ri, a + 1], 0), wg[:, a] / r)
            np.add.at(G, (rows, lattice_perm[:, ri, a], 0), -wg[:, a] / r)
    if c >= 3:
        _spread_on_anchors(E, G, col_gaps, lattice_perm, rows, t, axis=0, per=r,
                           arrangement="cols")


def _spread_on_anchors(E, G, gaps, lattice, rows, t, axis, per, arrangement):
    amax = gaps.argmax(1)
    amin = gaps.argmin(1)
    spread = gaps[rows, amax] - gaps[rows, amin]
    m_s = _relu(spread - t.spacing)
    E += m_s * m_s
    w = m_s * 2.0 / per
    for sign, pos in ((1.0, amax + 1), (-1.0, amax), (-1.0, amin + 1), (1.0, amin)):
        for member in range(per):
            if arrangement == "rows":
                target = lattice[rows, pos, member]
            else:
                target = lattice[rows, member, pos]
            np.add.at(G, (rows, target, axis), sign * w)


def _e_sorted(g, t, E, G):
    k = g.k
    for i in range(k - 1):
        _left_of_pair(E, G, g, i, i + 1, t)
    for i in range(k):
        for j in range(i + 1, k):
            _e_horizontally_aligned(g, t, E, G, i, j)
    widths = g.len_y
    for i in range(k - 1):
        E += max(0.0, widths[i + 1] - widths[i]) ** 2  # shape order, constant


_DISPATCH = {
    "central_column": _e_central_column,
    "central_row": _e_central_row,
    "centered_table": _e_centered_table,
    "left_half": _e_left_half,
    "right_half": _e_right_half,
    "front_half": _e_front_half,
    "back_half": _e_back_half,
    "near_left_edge": _e_near_left_edge,
    "near_right_edge": _e_near_right_edge,
    "near_front_edge": _e_near_front_edge,
    "near_back_edge": _e_near_back_edge,
    "horizontally_aligned": _e_horizontally_aligned,
    "vertically_aligned": _e_vertically_aligned,
    "left_of": _e_left_of,
    "right_of": _e_right_of,
    "on_top_of": _e_on_top_of,
    "centered": _e_centered,
    "vertical_symmetry_on_table": _e_vertical_symmetry_on_table,
    "horizontal_symmetry_on_table": _e_horizontal_symmetry_on_table,
    "vertical_line_symmetry": _e_vertical_line_symmetry,
    "horizontal_line_symmetry": _e_horizontal_line_symmetry,
    "aligned_in_horizontal_line": _e_aligned_in_horizontal_line,
    "aligned_in_vertical_line": _e_aligned_in_vertical_line,
    "regular_grid": _e_regular_grid,
    "sorted": _e_sorted,
}


def _validate(relation: str, poses: np.ndarray, shapes: np.ndarray):
    relation = resolve_relation(relation)
    spec = REGISTRY[relation]
    k = poses.shape[-2]
    if shapes.shape != (k, 2):
        raise ArityError("shapes must be (%d, 2), got %s" % (k, shapes.shape))
    if spec.arity is not None and k != spec.arity:
        raise ArityError("%s takes %d objects, got %d" % (relation, spec.arity, k))
    if spec.arity is None and k < 3:
        raise ArityError("%s takes at least 3 objects, got %d" % (relation, k))
    return relation


def energy_and_grad(relation: str, poses: np.ndarray, shapes: np.ndarray,
                    thresholds: Thresholds = DEFAULT_THRESHOLDS,
                    span: float = 1.0,
                    margin: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Energy [B] and pose gradient [B, k, 3] for one relation.

    poses: [B, k, 3] (or [k, 3]) in span units; shapes: [k, 2] normalized.
    margin < 1 shrinks the acceptance bands (see _Tols).
    """
    poses = np.asarray(poses, dtype=float)
    shapes = np.asarray(shapes, dtype=float)
    squeeze = poses.ndim == 2
    if squeeze:
        poses = poses[None]
    if relation not in _DISPATCH:
        relation = _validate(relation, poses, shapes)
    else:
        _validate(relation, poses, shapes)
    g = _BatchGeom(poses, shapes, span)
    t = _scaled(thresholds, span, margin)
    E = np.zeros(g.B)
    G = np.zeros((g.B, g.k, 3))
    _DISPATCH[relation](g, t, E, G)
    _e_contain(g, t, E, G)
    if squeeze:
        return E[0], G[0]
    return E, G


def energy(relation: str, poses: np.ndarray, shapes: np.ndarray,
           thresholds: Thresholds = DEFAULT_THRESHOLDS,
           span: float = 1.0, margin: float = 1.0) -> np.ndarray:
    """Energy only; see energy_and_grad."""
    return energy_and_grad(relation, poses, shapes, thresholds, span, margin)[0]
