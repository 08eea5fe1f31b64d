"""Fixed-arity learned denoiser.

Encodes object shapes, noised poses, and the timestep separately, then
predicts the injected noise from the concatenated features. Poses are in
centered model coordinates; shapes stay in normalized table units.
"""

from __future__ import annotations

import numpy as np

from ..errors import ArityError
from . import nn


class MlpDenoiser:
    """Per-relation noise predictor over a fixed number of objects.

    Args:
        arity: number of objects the relation binds.
        hidden: feature width shared by the encoders and backbone.
        depth: number of backbone layers.
        seed: weight-initialization seed.
    """

    kind = 0

    def __init__(self, arity: int, hidden: int = 256, depth: int = 3,
                 seed: int = 0):
        if arity < 1:
            raise ArityError("arity must be >= 1")
        self.arity = arity
        self.hidden = hidden
        self.depth = depth
        rng = np.random.default_rng(seed)
        half = hidden // 2
        self.shape_enc = nn.Sequential(
            nn.Linear(2 * arity, half, rng), nn.SiLU(),
            nn.Linear(half, hidden, rng), nn.SiLU())
        self.pose_enc = nn.Sequential(
            nn.Linear(3 * arity, half, rng), nn.SiLU(),
            nn.Linear(half, hidden, rng), nn.SiLU())
        self.time_enc = nn.Sequential(
            nn.Linear(hidden, 4 * hidden, rng), nn.Mish(),
            nn.Linear(4 * hidden, hidden, rng))
        backbone = [nn.Linear(3 * hidden, hidden, rng), nn.SiLU()]
        for _ in range(depth - 1):
            backbone += [nn.Linear(hidden, hidden, rng), nn.SiLU()]
        self.backbone = nn.Sequential(*backbone)
        self.decoder = nn.Linear(hidden, 3 * arity, rng, zero_init=True)

    def named_params(self) -> list[tuple[str, nn.Parameter]]:
        out = []
        for tag, part in (("shape_enc", self.shape_enc),
                          ("pose_enc", self.pose_enc),
                          ("time_enc", self.time_enc),
                          ("backbone", self.backbone),
                          ("decoder", self.decoder)):
            out.extend(nn.named_parameters(tag, part))
        return out

    def params(self) -> list[nn.Parameter]:
        return [p for _, p in self.named_params()]

    def forward(self, poses: np.ndarray, shapes: np.ndarray,
                t: np.ndarray | int) -> np.ndarray:
        """Predicts noise for poses [B, k, 3]; returns [B, k, 3]."""
        poses = np.asarray(poses, dtype=float)
        batch = poses.shape[0]
        k = self.arity
        if poses.shape[1] != k:
            raise ArityError("expected %d objects, got %d" % (k, poses.shape[1]))
        shapes = np.asarray(shapes, dtype=float)
        if shapes.ndim == 2:
            shapes = np.broadcast_to(shapes, (batch, k, 2))
        t_arr = np.broadcast_to(np.atleast_1d(np.asarray(t, dtype=float)), (batch,))
        hs = self.shape_enc.forward(shapes.reshape(batch, 2 * k))
        hp = self.pose_enc.forward(poses.reshape(batch, 3 * k))
        ht = self.time_enc.forward(nn.sinusoidal_embedding(t_arr, self.hidden))
        h = np.concatenate([hs, hp, ht], axis=1)
        out = self.decoder.forward(self.backbone.forward(h))
        return out.reshape(batch, k, 3)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        """Backpropagates loss gradient [B, k, 3]; returns grad w.r.t. poses."""
        batch = grad.shape[0]
        g = self.decoder.backward(grad.reshape(batch, -1))
        g = self.backbone.backward(g)
        hid = self.hidden
        self.shape_enc.backward(g[:, :hid])
        gp = self.pose_enc.backward(g[:, hid:2 * hid])
        self.time_enc.backward(g[:, 2 * hid:])
        return gp.reshape(grad.shape)

    def eps(self, poses: np.ndarray, shapes: np.ndarray, t: int) -> np.ndarray:
        """Sampler-facing noise prediction; accepts [k, 3] or [S, k, 3]."""
        poses = np.asarray(poses, dtype=float)
        single = poses.ndim == 2
        if single:
            poses = poses[None]
        out = self.forward(poses, shapes, t)
        return out[0] if single else out

    def config_array(self, relation_index: int) -> np.ndarray:
        return np.array([self.kind, relation_index, self.arity,
                         self.hidden, self.depth], dtype=float)

    @classmethod
    def from_config(cls, cfg: np.ndarray) -> "MlpDenoiser":
        return cls(arity=int(round(cfg[2])), hidden=int(round(cfg[3])),
                   depth=int(round(cfg[4])), seed=0)
