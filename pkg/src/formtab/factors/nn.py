"""Minimal neural-network layers with explicit backward passes.

Every layer caches what its backward pass needs during forward, so the
calling model runs layers in order and then calls backward in reverse
order. Parameters accumulate gradients in-place; optimizers live in
training.py.
"""

from __future__ import annotations

import math

import numpy as np


class Parameter:
    """A weight array paired with its gradient accumulator."""

    __slots__ = ("value", "grad")

    def __init__(self, value: np.ndarray):
        self.value = np.asarray(value, dtype=float)
        self.grad = np.zeros_like(self.value)

    def zero_grad(self) -> None:
        self.grad[...] = 0.0


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class Linear:
    """Affine map y = x @ w + b over the last axis."""

    def __init__(self, din: int, dout: int, rng: np.random.Generator,
                 zero_init: bool = False):
        self.din = din
        self.dout = dout
        if zero_init:
            w = np.zeros((din, dout))
        else:
            w = rng.normal(0.0, math.sqrt(2.0 / din), size=(din, dout))
        self.w = Parameter(w)
        self.b = Parameter(np.zeros(dout))
        self._x: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        return x @ self.w.value + self.b.value

    def backward(self, grad: np.ndarray) -> np.ndarray:
        flat_x = self._x.reshape(-1, self.din)
        flat_g = grad.reshape(-1, self.dout)
        self.w.grad += flat_x.T @ flat_g
        self.b.grad += flat_g.sum(axis=0)
        return grad @ self.w.value.T

    def params(self) -> list[Parameter]:
        return [self.w, self.b]


class SiLU:
    """Sigmoid-weighted linear unit y = x * sigmoid(x)."""

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        self._s = _sigmoid(x)
        return x * self._s

    def backward(self, grad: np.ndarray) -> np.ndarray:
        s = self._s
        return grad * (s * (1.0 + self._x * (1.0 - s)))

    def params(self) -> list[Parameter]:
        return []


class Mish:
    """Smooth tanh-based unit y = x * tanh(softplus(x))."""

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        self._t = np.tanh(np.logaddexp(0.0, x))
        self._s = _sigmoid(x)
        return x * self._t

    def backward(self, grad: np.ndarray) -> np.ndarray:
        t = self._t
        return grad * (t + self._x * (1.0 - t * t) * self._s)

    def params(self) -> list[Parameter]:
        return []


class LayerNorm:
    """Normalizes the last axis to zero mean and unit variance."""

    def __init__(self, dim: int, eps: float = 1e-5):
        self.dim = dim
        self.eps = eps
        self.gamma = Parameter(np.ones(dim))
        self.beta = Parameter(np.zeros(dim))

    def forward(self, x: np.ndarray) -> np.ndarray:
        mu = x.mean(axis=-1, keepdims=True)
        xc = x - mu
        var = (xc * xc).mean(axis=-1, keepdims=True)
        self._inv = 1.0 / np.sqrt(var + self.eps)
        self._xhat = xc * self._inv
        return self.gamma.value * self._xhat + self.beta.value

    def backward(self, grad: np.ndarray) -> np.ndarray:
        xhat = self._xhat
        axes = tuple(range(grad.ndim - 1))
        self.gamma.grad += (grad * xhat).sum(axis=axes)
        self.beta.grad += grad.sum(axis=axes)
        gh = grad * self.gamma.value
        mean_gh = gh.mean(axis=-1, keepdims=True)
        mean_ghx = (gh * xhat).mean(axis=-1, keepdims=True)
        return self._inv * (gh - mean_gh - xhat * mean_ghx)

    def params(self) -> list[Parameter]:
        return [self.gamma, self.beta]


class SelfAttention:
    """Multi-head self-attention over token sets with a key padding mask."""

    def __init__(self, dim: int, heads: int, rng: np.random.Generator):
        if dim % heads != 0:
            raise ValueError("dim must be divisible by heads")
        self.dim = dim
        self.heads = heads
        self.dh = dim // heads
        self.wq = Linear(dim, dim, rng)
        self.wk = Linear(dim, dim, rng)
        self.wv = Linear(dim, dim, rng)
        self.wo = Linear(dim, dim, rng)

    def _split(self, x: np.ndarray) -> np.ndarray:
        b, n, _ = x.shape
        return x.reshape(b, n, self.heads, self.dh).transpose(0, 2, 1, 3)

    def _merge(self, x: np.ndarray) -> np.ndarray:
        b, h, n, dh = x.shape
        return x.transpose(0, 2, 1, 3).reshape(b, n, h * dh)

    def forward(self, x: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        """x: [B, N, D]; mask: [B, N] booleans, False marks padding."""
        q = self._split(self.wq.forward(x))
        k = self._split(self.wk.forward(x))
        v = self._split(self.wv.forward(x))
        logits = q @ k.transpose(0, 1, 3, 2) / math.sqrt(self.dh)
        if mask is not None:
            logits = logits + np.where(mask[:, None, None, :], 0.0, -1e9)
        logits -= logits.max(axis=-1, keepdims=True)
        expl = np.exp(logits)
        attn = expl / expl.sum(axis=-1, keepdims=True)
        self._q, self._k, self._v, self._attn = q, k, v, attn
        ctx = attn @ v
        return self.wo.forward(self._merge(ctx))

    def backward(self, grad: np.ndarray) -> np.ndarray:
        gctx = self._split(self.wo.backward(grad))
        attn, q, k, v = self._attn, self._q, self._k, self._v
        gattn = gctx @ v.transpose(0, 1, 3, 2)
        gv = attn.transpose(0, 1, 3, 2) @ gctx
        glog = attn * (gattn - (gattn * attn).sum(axis=-1, keepdims=True))
        glog /= math.sqrt(self.dh)
        gq = glog @ k
        gk = glog.transpose(0, 1, 3, 2) @ q
        gx = self.wq.backward(self._merge(gq))
        gx += self.wk.backward(self._merge(gk))
        gx += self.wv.backward(self._merge(gv))
        return gx

    def params(self) -> list[Parameter]:
        return self.wq.params() + self.wk.params() + self.wv.params() + self.wo.params()


def sinusoidal_embedding(t: np.ndarray, dim: int) -> np.ndarray:
    """Transformer-style timestep features: [B] integers -> [B, dim]."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    half = dim // 2
    freqs = np.exp(-math.log(10000.0) * np.arange(half) / (half - 1))
    ang = t[:, None] * freqs[None, :]
    return np.concatenate([np.sin(ang), np.cos(ang)], axis=1)


def named_parameters(prefix: str, obj) -> list[tuple[str, Parameter]]:
    """Flattens a layer tree into (dotted-name, Parameter) pairs."""
    if isinstance(obj, Linear):
        return [(prefix + ".w", obj.w), (prefix + ".b", obj.b)]
    if isinstance(obj, LayerNorm):
        return [(prefix + ".gamma", obj.gamma), (prefix + ".beta", obj.beta)]
    if isinstance(obj, SelfAttention):
        out = []
        for tag, lin in (("wq", obj.wq), ("wk", obj.wk),
                         ("wv", obj.wv), ("wo", obj.wo)):
            out.extend(named_parameters(prefix + "." + tag, lin))
        return out
    if isinstance(obj, Sequential):
        out = []
        for i, layer in enumerate(obj.layers):
            out.extend(named_parameters("%s.%d" % (prefix, i), layer))
        return out
    return []


class Sequential:
    """Runs layers in order; backward replays them in reverse."""

    def __init__(self, *layers):
        self.layers = list(layers)

    def forward(self, x: np.ndarray) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, grad: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad

    def params(self) -> list[Parameter]:
        out: list[Parameter] = []
        for layer in self.layers:
            out.extend(layer.params())
        return out
