#!/usr/bin/env python3
"""Training a learned denoising factor and sampling from it.

Generates a left_of dataset, trains the MLP denoiser briefly (enough to
see the loss fall and draws improve; the test-suite settings train
longer), round-trips the checkpoint format, and samples from the loaded
model. Run: python3 demos/04_train_learned_factor.py
"""

import os
import tempfile
import time

from formtab.factors.checkpoint import load_model, save_model
from formtab.factors.training import TrainConfig, train
from formtab.geometry import ObjectShape, TableFrame
from formtab.relations import GroundAtom, GroundGraph, Scene, SceneObject, classify
from formtab.sampler import SamplerConfig, cosine_schedule, sample
from formtab.synthgen import gen_dataset

dataset = gen_dataset("left_of", 1000, seed=0)
print("dataset: %d classifier-positive left_of pairs" % len(dataset))

t0 = time.time()
config = TrainConfig(epochs=150, seed=0)
model, summary = train("left_of", dataset, config)
print("trained %d epochs in %.0f s: loss %.3f -> %.3f"
      % (config.epochs, time.time() - t0,
         summary.initial_loss, summary.final_loss))

path = os.path.join(tempfile.mkdtemp(), "left_of.ckpt")
save_model(path, "left_of", model)
relation, loaded = load_model(path)
print("checkpoint round trip: relation=%s file=%s" % (relation, path))

schedule = cosine_schedule(300)
hits = 0
trials = 20
for i in range(trials):
    sample_set = dataset[i]
    objs = [SceneObject("o%d" % j, ObjectShape(*sample_set.shapes[j]))
            for j in range(len(sample_set.shapes))]
    scene = Scene(TableFrame(1.0, 1.0), objs)
    atom = GroundAtom("left_of", tuple(scene.names))
    poses = sample(GroundGraph([atom]), scene, {"left_of": loaded},
                   schedule, SamplerConfig(num_samples=1, seed=i))
    hits += classify(atom, scene.with_poses(poses[0]))
print("draws from the loaded model satisfy left_of in %d/%d trials"
      % (hits, trials))
print("(the acceptance settings, 600 epochs, reach 95+/100)")
