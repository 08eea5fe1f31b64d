"""Denoising-loss training for learned factors.

Training draws a timestep and a unit-Gaussian noise vector per sample,
noises the clean poses with the forward process, and regresses the
model's prediction onto the injected noise. Poses are converted to
centered model coordinates before noising so checkpoints match the
sampler's coordinate convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ArityError, ValidationError
from ..relations import resolve_relation, REGISTRY
from ..sampler import cosine_schedule, poses_to_model
from .mlp import MlpDenoiser
from .set_transformer import SetDenoiser


@dataclass
class TrainConfig:
    """Hyperparameters for a training run.

    Attributes:
        epochs: passes over the dataset.
        batch_size: samples per gradient step (capped at the dataset size).
        learning_rate: step size.
        seed: PRNG seed for init, shuffling, noise, and timesteps.
        momentum: SGD momentum coefficient.
        optimizer: "sgd" (momentum SGD) or "adam".
        timesteps: diffusion steps T of the schedule to train against.
    """

    epochs: int = 2000
    batch_size: int = 128
    learning_rate: float = 1e-3
    seed: int = 0
    momentum: float = 0.9
    optimizer: str = "adam"
    timesteps: int = 300

    def __post_init__(self) -> None:
        if self.epochs < 1 or self.batch_size < 1:
            raise ValidationError("epochs and batch_size must be positive")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.timesteps < 2:
            raise ValidationError("timesteps must be >= 2")
        if self.optimizer not in ("sgd", "adam"):
            raise ValidationError("optimizer must be 'sgd' or 'adam'")


@dataclass
class TrainingSummary:
    """Loss trace of a training run."""

    initial_loss: float
    final_loss: float
    epoch_losses: list[float] = field(default_factory=list)


class SgdMomentum:
    """Stochastic gradient descent with classical momentum."""

    def __init__(self, params, lr: float, momentum: float = 0.9):
        self.params = list(params)
        self.lr = lr
        self.momentum = momentum
        self.velocity = [np.zeros_like(p.value) for p in self.params]

    def step(self) -> None:
        for p, v in zip(self.params, self.velocity):
            v *= self.momentum
            v -= self.lr * p.grad
            p.value += v

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()


class Adam:
    """Adam optimizer with bias correction."""

    def __init__(self, params, lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = [np.zeros_like(p.value) for p in self.params]
        self.v = [np.zeros_like(p.value) for p in self.params]
        self.t = 0

    def step(self) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for p, m, v in zip(self.params, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * p.grad
            v *= self.beta2
            v += (1.0 - self.beta2) * p.grad * p.grad
            p.value -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()


def _canon_items(relation: str, dataset) -> list[tuple[np.ndarray, np.ndarray]]:
    if len(dataset) == 0:
        raise ValidationError("training dataset is empty")
    items = []
    for sample in dataset:
        if hasattr(sample, "shapes") and hasattr(sample, "poses"):
            rel = getattr(sample, "relation", relation)
            if resolve_relation(rel) != relation:
                raise ValidationError(
                    "dataset mixes relation %r into %r" % (rel, relation))
            shapes, poses = sample.shapes, sample.poses
        else:
            shapes, poses = sample
        shapes = np.asarray(shapes, dtype=float)
        poses = np.asarray(poses, dtype=float)
        if shapes.shape != (len(poses), 2) or poses.shape[1] != 3:
            raise ValidationError("sample arrays must be [k,2] shapes and [k,3] poses")
        items.append((shapes, poses_to_model(poses)))
    return items


def _batch_loss(model, poses0, shapes, mask, schedule, rng, grad: bool):
    """One denoising-loss evaluation; optionally backpropagates."""
    batch = poses0.shape[0]
    t = rng.integers(1, schedule.T + 1, size=batch)
    eps = rng.standard_normal(poses0.shape)
    abar = schedule.alpha_bars[t - 1][:, None, None]
    noised = np.sqrt(abar) * poses0 + np.sqrt(1.0 - abar) * eps
    if isinstance(model, SetDenoiser):
        pred = model.forward(noised, shapes, t, mask)
    else:
        pred = model.forward(noised, shapes, t)
    diff = pred - eps
    if mask is not None:
        diff = diff * mask[:, :, None]
        denom = 3.0 * mask.sum()
    else:
        denom = float(diff.size)
    loss = float((diff * diff).sum() / denom)
    if grad:
        model.backward(2.0 * diff / denom)
    return loss


def evaluate_loss(model, poses0, shapes, mask, schedule, seed: int,
                  batch_size: int = 256, repeats: int = 8) -> float:
    """Mean denoising loss over a dataset with a fixed evaluation stream.

    Averages repeats independent timestep and noise draws per sample to
    keep the estimate's variance low on small datasets.
    """
    rng = np.random.default_rng([seed, 1])
    total = 0.0
    count = 0
    for _ in range(repeats):
        for lo in range(0, len(poses0), batch_size):
            sl = slice(lo, lo + batch_size)
            m = None if mask is None else mask[sl]
            n = len(poses0[sl])
            total += n * _batch_loss(model, poses0[sl], shapes[sl], m,
                                     schedule, rng, grad=False)
            count += n
    return total / count


def train(relation: str, dataset, config: TrainConfig = TrainConfig()):
    """Fits a learned denoiser to classifier-positive samples.

    Fixed-arity relations get an MlpDenoiser; variable-arity relations get
    a SetDenoiser trained with padding masks. Returns (model, summary).
    """
    relation = resolve_relation(relation)
    items = _canon_items(relation, dataset)
    arity = REGISTRY[relation].arity
    schedule = cosine_schedule(config.timesteps)
    if arity is not None:
        for shapes, _ in items:
            if len(shapes) != arity:
                raise ArityError("relation %r expects %d objects, sample has %d"
                                 % (relation, arity, len(shapes)))
        model = MlpDenoiser(arity, seed=config.seed)
        shapes_all = np.stack([s for s, _ in items])
        poses_all = np.stack([p for _, p in items])
        mask_all = None
    else:
        model = SetDenoiser(seed=config.seed)
        sizes = [len(s) for s, _ in items]
        cap = max(sizes)
        if cap > model.capacity:
            raise ArityError("group of %d exceeds capacity %d"
                             % (cap, model.capacity))
        n = len(items)
        shapes_all = np.zeros((n, cap, 2))
        poses_all = np.zeros((n, cap, 3))
        mask_all = np.zeros((n, cap), dtype=bool)
        for i, (shapes, poses) in enumerate(items):
            k = len(shapes)
            shapes_all[i, :k] = shapes
            poses_all[i, :k] = poses
            mask_all[i, :k] = True

    if config.optimizer == "adam":
        opt = Adam(model.params(), config.learning_rate)
    else:
        opt = SgdMomentum(model.params(), config.learning_rate, config.momentum)
    initial = evaluate_loss(model, poses_all, shapes_all, mask_all,
                            schedule, config.seed)
    rng = np.random.default_rng([config.seed, 0])
    n = len(items)
    # Tiny datasets still get full-width gradient batches: every sample
    # appears each epoch, repeated with independent noise and timestep
    # draws. Without this, memorization-regime runs stall on batch noise.
    tile = max(1, config.batch_size // n)
    batch = min(config.batch_size, n * tile)
    epoch_losses = []
    for _ in range(config.epochs):
        perm = np.tile(rng.permutation(n), tile)
        losses = []
        for lo in range(0, n * tile, batch):
            idx = perm[lo:lo + batch]
            m = None if mask_all is None else mask_all[idx]
            opt.zero_grad()
            losses.append(_batch_loss(model, poses_all[idx], shapes_all[idx],
                                      m, schedule, rng, grad=True))
            opt.step()
        epoch_losses.append(float(np.mean(losses)))
    final = evaluate_loss(model, poses_all, shapes_all, mask_all,
                          schedule, config.seed)
    return model, TrainingSummary(initial, final, epoch_losses)
