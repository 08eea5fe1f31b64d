"""Denoising diffusion schedule and annealed composite sampling.

Chains run in centered model coordinates where the prior is a standard
normal; table coordinates are recovered at the end through the affine map
u = (c + 3) / 6 on x and y (theta passes through and is wrapped). Timesteps
are conceptual: t = 0 is clean data, t = T is full noise, and schedule
arrays store steps 1..T at indices 0..T-1, so the step below t = 1 has
alpha_bar exactly 1 and the final reverse step is noiseless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedRelationError, ValidationError

MODEL_HALF_RANGE = 3.0
MODEL_SCALE = 6.0

POSTERIOR_MODES = ("beta_tilde", "beta")


def poses_to_model(poses: np.ndarray) -> np.ndarray:
    """Map normalized table poses [..., 3] to centered model coordinates."""
    poses = np.asarray(poses, dtype=float)
    out = poses.copy()
    out[..., :2] = poses[..., :2] * MODEL_SCALE - MODEL_HALF_RANGE
    return out


def poses_to_table(poses: np.ndarray, clamp: bool = True) -> np.ndarray:
    """Map model coordinates back to table coordinates, wrapping theta."""
    poses = np.asarray(poses, dtype=float)
    out = poses.copy()
    out[..., :2] = (poses[..., :2] + MODEL_HALF_RANGE) / MODEL_SCALE
    if clamp:
        out[..., :2] = np.clip(out[..., :2], 0.0, 1.0)
    theta = np.mod(out[..., 2] + math.pi, 2.0 * math.pi)
    theta = np.where(theta <= 0.0, theta + 2.0 * math.pi, theta)
    out[..., 2] = theta - math.pi
    return out


@dataclass(frozen=True)
class NoiseSchedule:
    """Forward-process constants for steps 1..T (stored at indices 0..T-1)."""

    betas: np.ndarray
    alphas: np.ndarray
    alpha_bars: np.ndarray
    beta_tildes: np.ndarray

    @property
    def T(self) -> int:
        return len(self.betas)

    def abar(self, t: int) -> float:
        """Cumulative alpha at conceptual step t; abar(0) is exactly 1."""
        if t == 0:
            return 1.0
        return float(self.alpha_bars[t - 1])

    def _index(self, t: int) -> int:
        if not 0 < t < self.T:
            raise ValidationError("timestep %d outside (0, %d)" % (t, self.T))
        return t - 1

    def coefficients(self, t: int, posterior_variance: str = "beta_tilde"
                     ) -> tuple[float, float, float]:
        """(B, C, D) for the reverse update p' = B (p - C eps + D xi).

        B rescales by 1/sqrt(alpha_t), C converts predicted noise into the
        posterior-mean correction, and D carries the posterior noise such
        that the std after rescaling is sqrt(beta_tilde_t) (or sqrt(beta_t)).
        The t = 1 step adds no noise in either mode.
        """
        if posterior_variance not in POSTERIOR_MODES:
            raise ValidationError("posterior_variance must be one of %s"
                                  % (POSTERIOR_MODES,))
        i = self._index(t)
        beta = float(self.betas[i])
        alpha = float(self.alphas[i])
        abar = float(self.alpha_bars[i])
        b_coef = 1.0 / math.sqrt(alpha)
        c_coef = beta / math.sqrt(1.0 - abar)
        if t == 1:
            var = 0.0
        elif posterior_variance == "beta_tilde":
            var = float(self.beta_tildes[i])
        else:
            var = beta
        d_coef = math.sqrt(var) * math.sqrt(alpha)
        return b_coef, c_coef, d_coef


def cosine_schedule(T: int, s: float = 0.008, max_beta: float = 0.999) -> NoiseSchedule:
    """Squared-cosine noise schedule with betas clipped to max_beta."""
    if T < 2:
        raise ValidationError("schedule needs at least 2 steps, got %d" % T)
    steps = np.arange(T + 1, dtype=float)
    f = np.cos(((steps / T + s) / (1.0 + s)) * (math.pi / 2.0)) ** 2
    abar_target = f / f[0]
    betas = 1.0 - abar_target[1:] / abar_target[:-1]
    betas = np.clip(betas, 1e-12, max_beta)
    alphas = 1.0 - betas
    alpha_bars = np.cumprod(alphas)
    prev = np.concatenate([[1.0], alpha_bars[:-1]])
    beta_tildes = betas * (1.0 - prev) / (1.0 - alpha_bars)
    return NoiseSchedule(betas, alphas, alpha_bars, beta_tildes)


def forward_noise(p0: np.ndarray, t: int, eps: np.ndarray,
                  schedule: NoiseSchedule) -> np.ndarray:
    """Noise clean poses to level t: sqrt(abar_t) p0 + sqrt(1-abar_t) eps."""
    if not 0 <= t < schedule.T:
        raise ValidationError("timestep %d outside [0, %d)" % (t, schedule.T))
    abar = schedule.abar(t)
    return math.sqrt(abar) * np.asarray(p0, float) + math.sqrt(1.0 - abar) * np.asarray(eps, float)


def reverse_step(p: np.ndarray, t: int, eps_hat: np.ndarray, noise: np.ndarray,
                 schedule: NoiseSchedule, posterior_variance: str = "beta_tilde",
                 noise_scale: float = 1.0) -> np.ndarray:
    """One reverse transition from level t to t-1."""
    b_coef, c_coef, d_coef = schedule.coefficients(t, posterior_variance)
    return b_coef * (np.asarray(p, float) - c_coef * np.asarray(eps_hat, float)
                     + (noise_scale * d_coef) * np.asarray(noise, float))


def ula_step(p: np.ndarray, t: int, eps_hat: np.ndarray, noise: np.ndarray,
             schedule: NoiseSchedule, scale: float = math.sqrt(2.0),
             posterior_variance: str = "beta_tilde") -> np.ndarray:
    """One unadjusted Langevin step at fixed noise level t.

    Identical to the reverse update with the 1/sqrt(alpha) rescale removed
    and the noise std multiplied by `scale`; with scale = sqrt(2) this is
    the Langevin reading of the fixed-level reverse step with doubled noise
    variance.
    """
    _, c_coef, d_coef = schedule.coefficients(t, posterior_variance)
    return (np.asarray(p, float) - c_coef * np.asarray(eps_hat, float)
            + (scale * d_coef) * np.asarray(noise, float))


@dataclass
class SamplerConfig:
    """Knobs for annealed composite sampling."""

    num_samples: int = 1
    seed: int = 0
    steps_per_level: int = 5
    ula_noise_scale: float = math.sqrt(2.0)
    posterior_variance: str = "beta_tilde"
    clamp_to_unit: bool = True
    degree_normalize: bool = True

    def __post_init__(self) -> None:
        if self.num_samples < 1:
            raise ValidationError("num_samples must be >= 1")
        if self.steps_per_level < 1:
            raise ValidationError("steps_per_level must be >= 1")
        if self.posterior_variance not in POSTERIOR_MODES:
            raise ValidationError("posterior_variance must be one of %s"
                                  % (POSTERIOR_MODES,))


@dataclass
class _Factor:
    model: object
    idxs: np.ndarray
    shapes: np.ndarray


class CompositeDrift:
    """Sums per-factor predicted noise into the scene-wide pose vector."""

    def __init__(self, graph, scene, models: dict, degree_normalize: bool = True):
        shapes = scene.shapes_normalized()
        self.n = len(scene.objects)
        self.factors: list[_Factor] = []
        degree = np.zeros(self.n)
        for atom in graph:
            if atom.relation not in models:
                raise UnsupportedRelationError(
                    "no factor model for relation %r" % (atom.relation,))
            idxs = np.array([scene.index_of(a) for a in atom.args])
            degree[idxs] += 1.0
            self.factors.append(_Factor(models[atom.relation], idxs, shapes[idxs]))
        self.degree = np.maximum(degree, 1.0)
        self.degree_normalize = degree_normalize

    def __call__(self, poses: np.ndarray, t: int) -> np.ndarray:
        """Composite eps for model-space poses [S, n, 3]."""
        out = np.zeros_like(poses)
        for factor in self.factors:
            sub = poses[:, factor.idxs, :]
            eps = factor.model.eps(sub, factor.shapes, t)
            np.add.at(out, (slice(None), factor.idxs), eps)
        if self.degree_normalize:
            out /= self.degree[None, :, None]
        return out


def sample_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent per-sample streams keyed by (seed, sample index)."""
    return [np.random.default_rng([seed, i]) for i in range(count)]


def sample(graph, scene, models: dict, schedule: NoiseSchedule,
           cfg: SamplerConfig = SamplerConfig()) -> np.ndarray:
    """Draw poses for every scene object from the product of graph factors.

    Runs cfg.num_samples independent annealed chains: init from the unit
    normal at the top noise level, then per level run steps_per_level - 1
    Langevin steps followed by one reverse transition (steps_per_level = 1
    is plain reverse diffusion). Returns normalized table poses with shape
    (num_samples, n_objects, 3).
    """
    drift = CompositeDrift(graph, scene, models, cfg.degree_normalize)
    n = drift.n
    rngs = sample_rngs(cfg.seed, cfg.num_samples)

    def draw() -> np.ndarray:
        return np.stack([rng.standard_normal((n, 3)) for rng in rngs])

    p = draw()
    for t in range(schedule.T - 1, 0, -1):
        for _ in range(cfg.steps_per_level - 1):
            eps = drift(p, t)
            p = ula_step(p, t, eps, draw(), schedule, cfg.ula_noise_scale,
                         cfg.posterior_variance)
        eps = drift(p, t)
        noise = draw() if t > 1 else np.zeros_like(p)
        p = reverse_step(p, t, eps, noise, schedule, cfg.posterior_variance)
    return poses_to_table(p, clamp=cfg.clamp_to_unit)
