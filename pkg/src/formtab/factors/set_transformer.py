"""Variable-arity learned denoiser.

Each object becomes one token built from its shape and pose embeddings;
pre-norm self-attention blocks mix the tokens, and a per-token decoder
reads out the predicted noise. There is no positional encoding and the
attention mask hides padding, so the module is permutation-equivariant
and handles groups of any size up to its capacity.

Shape tokens carry width-order context alongside the raw footprint: the
object's normalized rank by width, the width mass of wider objects, and
the group's total width. These are functions of the shape multiset, so
equivariance is preserved, and they keep relative geometry learnable at
group sizes never seen in training.
"""

from __future__ import annotations

import numpy as np

from ..errors import ArityError
from . import nn


def width_order_features(shapes: np.ndarray,
                         mask: np.ndarray | None) -> np.ndarray:
    """Per-object [rank, wider-width mass, total width], padding-aware.

    Rank counts strictly wider real objects, normalized by group size
    minus one; the mass term is their summed width over the group total.
    """
    batch, n, _ = shapes.shape
    m = np.ones((batch, n), dtype=bool) if mask is None else mask
    w = np.where(m, shapes[..., 1], 0.0)
    total = w.sum(axis=1, keepdims=True)
    safe_total = np.maximum(total, 1e-12)
    wider = (w[:, :, None] < w[:, None, :]) & m[:, None, :]
    count = m.sum(axis=1, keepdims=True)
    rank = wider.sum(axis=2) / np.maximum(count - 1, 1)
    prefix = (w[:, None, :] * wider).sum(axis=2) / safe_total
    feats = np.stack([rank, prefix, np.broadcast_to(total, (batch, n))],
                     axis=2)
    return np.where(m[:, :, None], feats, 0.0)


class _Block:
    """Pre-norm residual block: attention then a feed-forward layer."""

    def __init__(self, dim: int, heads: int, ffn_hidden: int,
                 rng: np.random.Generator):
        self.ln1 = nn.LayerNorm(dim)
        self.attn = nn.SelfAttention(dim, heads, rng)
        self.ln2 = nn.LayerNorm(dim)
        self.ffn = nn.Sequential(
            nn.Linear(dim, ffn_hidden, rng), nn.SiLU(),
            nn.Linear(ffn_hidden, dim, rng))

    def forward(self, x: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
        x = x + self.attn.forward(self.ln1.forward(x), mask)
        return x + self.ffn.forward(self.ln2.forward(x))

    def backward(self, grad: np.ndarray) -> np.ndarray:
        grad = grad + self.ln2.backward(self.ffn.backward(grad))
        return grad + self.ln1.backward(self.attn.backward(grad))

    def named_params(self, prefix: str) -> list[tuple[str, nn.Parameter]]:
        out = []
        for tag, part in (("ln1", self.ln1), ("attn", self.attn),
                          ("ln2", self.ln2), ("ffn", self.ffn)):
            out.extend(nn.named_parameters(prefix + "." + tag, part))
        return out


class SetDenoiser:
    """Noise predictor over object sets of varying size.

    Args:
        dim: token width.
        heads: attention heads per block.
        blocks: number of attention blocks.
        ffn_hidden: feed-forward inner width.
        capacity: maximum number of objects per group.
        seed: weight-initialization seed.
    """

    kind = 1

    def __init__(self, dim: int = 128, heads: int = 4, blocks: int = 2,
                 ffn_hidden: int = 256, capacity: int = 16, seed: int = 0):
        self.dim = dim
        self.heads = heads
        self.n_blocks = blocks
        self.ffn_hidden = ffn_hidden
        self.capacity = capacity
        rng = np.random.default_rng(seed)
        half = dim // 2
        self.shape_tok = nn.Sequential(
            nn.Linear(5, half, rng), nn.SiLU(),
            nn.Linear(half, half, rng), nn.SiLU())
        self.pose_tok = nn.Sequential(
            nn.Linear(3, half, rng), nn.SiLU(),
            nn.Linear(half, half, rng), nn.SiLU())
        self.time_enc = nn.Sequential(
            nn.Linear(dim, 4 * dim, rng), nn.Mish(),
            nn.Linear(4 * dim, dim, rng))
        self.blocks = [_Block(dim, heads, ffn_hidden, rng)
                       for _ in range(blocks)]
        self.ln_f = nn.LayerNorm(dim)
        self.decoder = nn.Linear(dim, 3, rng, zero_init=True)

    def named_params(self) -> list[tuple[str, nn.Parameter]]:
        out = []
        for tag, part in (("shape_tok", self.shape_tok),
                          ("pose_tok", self.pose_tok),
                          ("time_enc", self.time_enc)):
            out.extend(nn.named_parameters(tag, part))
        for i, block in enumerate(self.blocks):
            out.extend(block.named_params("block%d" % i))
        out.extend(nn.named_parameters("ln_f", self.ln_f))
        out.extend(nn.named_parameters("decoder", self.decoder))
        return out

    def params(self) -> list[nn.Parameter]:
        return [p for _, p in self.named_params()]

    def forward(self, poses: np.ndarray, shapes: np.ndarray,
                t: np.ndarray | int,
                mask: np.ndarray | None = None) -> np.ndarray:
        """Predicts noise for poses [B, N, 3]; mask False marks padding."""
        poses = np.asarray(poses, dtype=float)
        batch, n, _ = poses.shape
        if n > self.capacity:
            raise ArityError("group of %d exceeds capacity %d" % (n, self.capacity))
        shapes = np.asarray(shapes, dtype=float)
        if shapes.ndim == 2:
            shapes = np.broadcast_to(shapes, (batch, n, 2))
        t_arr = np.broadcast_to(np.atleast_1d(np.asarray(t, dtype=float)), (batch,))
        shape_in = np.concatenate(
            [shapes, width_order_features(shapes, mask)], axis=2)
        tok = np.concatenate([self.shape_tok.forward(shape_in),
                              self.pose_tok.forward(poses)], axis=2)
        temb = self.time_enc.forward(nn.sinusoidal_embedding(t_arr, self.dim))
        x = tok + temb[:, None, :]
        self._mask = mask
        for block in self.blocks:
            x = block.forward(x, mask)
        return self.decoder.forward(self.ln_f.forward(x))

    def backward(self, grad: np.ndarray) -> np.ndarray:
        """Backpropagates loss gradient [B, N, 3]; returns grad w.r.t. poses."""
        if self._mask is not None:
            grad = grad * self._mask[:, :, None]
        g = self.ln_f.backward(self.decoder.backward(grad))
        for block in reversed(self.blocks):
            g = block.backward(g)
        self.time_enc.backward(g.sum(axis=1))
        half = self.dim // 2
        self.shape_tok.backward(g[:, :, :half])
        return self.pose_tok.backward(g[:, :, half:])

    def eps(self, poses: np.ndarray, shapes: np.ndarray, t: int) -> np.ndarray:
        """Sampler-facing noise prediction; accepts [N, 3] or [S, N, 3]."""
        poses = np.asarray(poses, dtype=float)
        single = poses.ndim == 2
        if single:
            poses = poses[None]
        out = self.forward(poses, shapes, t, mask=None)
        return out[0] if single else out

    def config_array(self, relation_index: int) -> np.ndarray:
        return np.array([self.kind, relation_index, self.dim, self.heads,
                         self.n_blocks, self.ffn_hidden, self.capacity],
                        dtype=float)

    @classmethod
    def from_config(cls, cfg: np.ndarray) -> "SetDenoiser":
        return cls(dim=int(round(cfg[2])), heads=int(round(cfg[3])),
                   blocks=int(round(cfg[4])), ffn_hidden=int(round(cfg[5])),
                   capacity=int(round(cfg[6])), seed=0)
