"""Analytic (training-free) factors built on the relation energies.

The sampling potential is a warped version of the relation energy
evaluated on span-6 (model-coordinate) geometry: phi = rho(E) with
rho'(E) = GAIN / (1 + sqrt(E / KAPPA)). Near the zero set the warp
behaves like GAIN * E, which pins the stationary spread of the annealed
chain well inside the classifier tolerances; far from it the gradient
magnitude saturates, which keeps the high-noise levels stable. The
potential also shrinks the acceptance bands by SAMPLING_MARGIN so its
zero set sits strictly inside the classifier's, leaving headroom for
the chain's residual jitter. The predicted noise is sqrt(1 - abar_t)
times the exact gradient of phi.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from ..relations import DEFAULT_THRESHOLDS, RELATIONS, Thresholds, resolve_relation
from ..sampler import MODEL_HALF_RANGE, MODEL_SCALE, NoiseSchedule
from . import energies

# Curvature of the sampling potential at the zero set and the energy
# scale beyond which its gradient saturates.
GAIN = 600.0
KAPPA = 0.01
# Fraction of each classifier tolerance the sampling potential targets.
SAMPLING_MARGIN = 0.6


def analytic_energy(relation: str, poses: np.ndarray, shapes: np.ndarray,
                    thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Relation energy in normalized table coordinates, unit hinge weights."""
    return energies.energy(relation, poses, shapes, thresholds, span=1.0)


def _span_energy(relation, poses, shapes, thresholds, want_grad):
    span_poses = np.asarray(poses, dtype=float).copy()
    span_poses[..., :2] += MODEL_HALF_RANGE
    if want_grad:
        return energies.energy_and_grad(relation, span_poses, shapes,
                                        thresholds, span=MODEL_SCALE,
                                        margin=SAMPLING_MARGIN)
    return energies.energy(relation, span_poses, shapes, thresholds,
                           span=MODEL_SCALE, margin=SAMPLING_MARGIN), None


def potential(relation: str, poses: np.ndarray, shapes: np.ndarray,
              thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Scalar sampling potential of model-space poses (see module doc)."""
    E, _ = _span_energy(relation, poses, shapes, thresholds, want_grad=False)
    root = np.sqrt(E / KAPPA)
    return GAIN * 2.0 * KAPPA * (root - np.log1p(root))


def analytic_eps(relation: str, shapes: np.ndarray, poses: np.ndarray, t: int,
                 schedule: NoiseSchedule,
                 thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Predicted-noise vector sqrt(1 - abar_t) * grad of the potential.

    poses are model-space coordinates; the gradient is exact, so a
    zero-energy configuration yields a zero vector and the output at two
    timesteps differs exactly by the ratio of sqrt(1 - abar).
    """
    E, grad = _span_energy(relation, poses, shapes, thresholds, want_grad=True)
    warp = GAIN / (1.0 + np.sqrt(E / KAPPA))
    if grad.ndim == 3:
        warp = warp[:, None, None]
    scale = np.sqrt(1.0 - schedule.abar(t))
    return scale * warp * grad


class AnalyticFactor:
    """Factor model deriving eps from a relation's analytic energy."""

    def __init__(self, relation: str, schedule: NoiseSchedule,
                 thresholds: Thresholds = DEFAULT_THRESHOLDS):
        self.relation = resolve_relation(relation)
        self.schedule = schedule
        self.thresholds = thresholds

    def eps(self, poses: np.ndarray, shapes: np.ndarray, t: int) -> np.ndarray:
        return analytic_eps(self.relation, shapes, poses, t, self.schedule,
                            self.thresholds)


def analytic_backend(schedule: NoiseSchedule,
                     thresholds: Thresholds = DEFAULT_THRESHOLDS,
                     relations: Iterable[str] = RELATIONS) -> dict[str, AnalyticFactor]:
    """One analytic factor per relation name."""
    return {name: AnalyticFactor(name, schedule, thresholds)
            for name in relations}
