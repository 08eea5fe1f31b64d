"""Score backends behind the shared denoiser contract eps(poses, shapes, t)."""

from .analytic import AnalyticFactor, analytic_backend, analytic_energy, analytic_eps
from .checkpoint import load_checkpoint, load_model, save_checkpoint, save_model
from .mlp import MlpDenoiser
from .set_transformer import SetDenoiser
from .training import Adam, SgdMomentum, TrainConfig, TrainingSummary, train

__all__ = [
    "Adam",
    "AnalyticFactor",
    "MlpDenoiser",
    "SetDenoiser",
    "SgdMomentum",
    "TrainConfig",
    "TrainingSummary",
    "analytic_backend",
    "analytic_energy",
    "analytic_eps",
    "load_checkpoint",
    "load_model",
    "save_checkpoint",
    "save_model",
    "train",
]
