"""Run configuration: a flat, sectioned key = value file.

Sections and keys mirror the library's tunables:

    [thresholds] edge_near, align_tol, angle_tol, center_tol,
                 overlap_frac, spacing_tol
    [schedule]   timesteps, posterior_variance
    [sampler]    samples, seed, steps_per_level, ula_noise_scale
    [training]   epochs, batch_size, learning_rate, optimizer, momentum,
                 seed
    [llm]        endpoint, model, api_key, timeout, attempts, retry_wait,
                 max_reflect

Unknown sections or keys are rejected so typos cannot silently fall back
to defaults. Every value is validated by the dataclass it configures.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .factors.training import TrainConfig
from .proposer.llm import ProposerBackend
from .relations import Thresholds
from .sampler import SamplerConfig

_FLOAT_KEYS = {"edge_near", "align_tol", "angle_tol", "center_tol",
               "overlap_frac", "spacing_tol", "ula_noise_scale",
               "learning_rate", "momentum", "timeout", "retry_wait"}
_INT_KEYS = {"timesteps", "samples", "seed", "steps_per_level", "epochs",
             "batch_size", "attempts", "max_reflect"}

_SECTIONS = {
    "thresholds": {"edge_near", "align_tol", "angle_tol", "center_tol",
                   "overlap_frac", "spacing_tol"},
    "schedule": {"timesteps", "posterior_variance"},
    "sampler": {"samples", "seed", "steps_per_level", "ula_noise_scale"},
    "training": {"epochs", "batch_size", "learning_rate", "optimizer",
                 "momentum", "seed"},
    "llm": {"endpoint", "model", "api_key", "timeout", "attempts",
            "retry_wait", "max_reflect"},
}


@dataclass(frozen=True)
class RunConfig:
    """All tunables a command run may need, with library defaults."""

    thresholds: Thresholds = Thresholds()
    timesteps: int = 300
    posterior_variance: str = "beta_tilde"
    samples: int = 1
    seed: int = 0
    steps_per_level: int = 5
    ula_noise_scale: float = math.sqrt(2.0)
    training: TrainConfig = field(default_factory=TrainConfig)
    backend: ProposerBackend = ProposerBackend()

    def sampler_config(self, samples: int | None = None,
                       seed: int | None = None) -> SamplerConfig:
        return SamplerConfig(
            num_samples=self.samples if samples is None else samples,
            seed=self.seed if seed is None else seed,
            steps_per_level=self.steps_per_level,
            ula_noise_scale=self.ula_noise_scale,
            posterior_variance=self.posterior_variance)


def _convert(section: str, key: str, raw: str):
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ValidationError("[%s] %s must be a number, got %r"
                                  % (section, key, raw))
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ValidationError("[%s] %s must be an integer, got %r"
                                  % (section, key, raw))
    return raw


def load_config(path: str | None) -> RunConfig:
    """Parses a config file; None means library defaults."""
    if path is None:
        return RunConfig()
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ValidationError("cannot read config file: %s" % (exc,))
    except configparser.Error as exc:
        raise ValidationError("bad config file %r: %s" % (path, exc))
    values: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ValidationError("unknown config section [%s]" % (section,))
        allowed = _SECTIONS[section]
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ValidationError("unknown key %r in section [%s]"
                                      % (key, section))
            values[section][key] = _convert(section, key, raw)

    try:
        thresholds = Thresholds(**values.get("thresholds", {}))
        training = TrainConfig(**{"timesteps": values.get("schedule", {})
                                  .get("timesteps", 300),
                                  **values.get("training", {})})
        llm = values.get("llm", {})
        backend = ProposerBackend(kind="llm" if llm else "program", **llm)
        sched = values.get("schedule", {})
        samp = values.get("sampler", {})
        config = RunConfig(
            thresholds=thresholds,
            timesteps=int(sched.get("timesteps", 300)),
            posterior_variance=str(sched.get("posterior_variance",
                                             "beta_tilde")),
            samples=int(samp.get("samples", 1)),
            seed=int(samp.get("seed", 0)),
            steps_per_level=int(samp.get("steps_per_level", 5)),
            ula_noise_scale=float(samp.get("ula_noise_scale",
                                           math.sqrt(2.0))),
            training=training,
            backend=backend)
    except TypeError as exc:
        raise ValidationError("bad config file %r: %s" % (path, exc))
    config.sampler_config()  # validate sampler fields eagerly
    if config.timesteps < 2:
        raise ValidationError("[schedule] timesteps must be >= 2")
    return config
