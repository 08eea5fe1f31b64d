"""Command-line interface.

Subcommands cover the full pipeline: gen-data (synthetic datasets),
train (learned factors), propose (instruction to relation graph), solve
(graph to poses), eval (scores), and render (SVG). Every command that
takes --seed is bit-deterministic. Exit codes: 0 success, 1 runtime
failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .config import RunConfig, load_config
from .errors import FormtabError, ValidationError
from .evaluate import evaluate
from .factors.analytic import analytic_backend
from .factors.checkpoint import load_model, save_model
from .factors.training import train as train_model
from .geometry import ObjectShape, TableFrame
from .proposer import propose
from .relations import GroundAtom, Scene, SceneObject, classify
from .render import render_to_file
from .sampler import SamplerConfig, cosine_schedule, sample
from .sceneio import (SolveRecord, load_graph, load_results, load_scene,
                      save_graph, save_results)
from .synthgen import gen_dataset, load_dataset, save_dataset


def _sample_scene(shapes: np.ndarray, poses: np.ndarray) -> Scene:
    """A throwaway unit-table scene for classifying dataset records."""
    objects = [SceneObject("o%d" % i, ObjectShape(*shapes[i]))
               for i in range(len(shapes))]
    return Scene(TableFrame(1.0, 1.0), objects).with_poses(poses)


def _cmd_gen_data(args, config: RunConfig) -> int:
    samples = gen_dataset(args.relation, args.n, seed=args.seed,
                          thresholds=config.thresholds)
    save_dataset(args.out, samples)
    positive = 0
    for s in samples:
        scene = _sample_scene(s.shapes, s.poses)
        atom = GroundAtom(s.relation, tuple(scene.names))
        positive += bool(classify(atom, scene, config.thresholds))
    rate = 100.0 * positive / len(samples)
    print("wrote %d records to %s" % (len(samples), args.out))
    print("classifier-positive rate: %.1f%%" % rate)
    return 0


def _cmd_train(args, config: RunConfig) -> int:
    dataset = load_dataset(args.data)
    training = config.training
    if args.epochs is not None:
        training = replace(training, epochs=args.epochs)
    if args.seed is not None:
        training = replace(training, seed=args.seed)
    model, summary = train_model(args.relation, dataset, training)
    save_model(args.out, args.relation, model)
    print("initial loss: %.4f" % summary.initial_loss)
    print("final loss: %.4f" % summary.final_loss)
    print("wrote checkpoint %s" % args.out)
    return 0


def _cmd_propose(args, config: RunConfig) -> int:
    bundle = load_scene(args.scene)
    if bundle.family is None:
        raise ValidationError("scene file has no 'family' entry")
    backend = replace(config.backend, kind=args.backend)
    result = propose(bundle.scene, bundle.instruction, bundle.family,
                     backend)
    save_graph(args.out, result.graph)
    print("wrote %d atoms to %s" % (len(result.graph.atoms), args.out))
    print("conflicts: %d  unconstrained: %d  iterations: %d  clean: %s"
          % (len(result.conflicts), len(result.unconstrained),
             result.iterations, "yes" if result.clean else "no"))
    return 0


def _cmd_solve(args, config: RunConfig) -> int:
    if args.samples < 1:
        raise ValidationError("--samples must be >= 1")
    bundle = load_scene(args.scene)
    graph = load_graph(args.graph)
    unknown = graph.objects() - set(bundle.scene.names)
    if unknown:
        raise ValidationError("graph names objects missing from the scene: %s"
                              % ", ".join(sorted(unknown)))
    schedule = cosine_schedule(config.timesteps)
    if args.backend == "analytic":
        models = analytic_backend(schedule, config.thresholds)
    else:
        models = {}
        for path in args.checkpoint:
            relation, model = load_model(path)
            models[relation] = model
        needed = {a.relation for a in graph.atoms}
        missing = sorted(needed - set(models))
        if missing:
            raise ValidationError("no checkpoint for relation(s): %s"
                                  % ", ".join(missing))
    cfg = config.sampler_config(samples=args.samples, seed=args.seed)
    poses = sample(graph, bundle.scene, models, schedule, cfg)
    records = []
    for i in range(poses.shape[0]):
        posed = bundle.scene.with_poses(poses[i])
        report = evaluate(posed, proposed=graph)
        records.append(SolveRecord(poses[i], report.feasibility,
                                   report.satisfaction))
    best = max(range(len(records)),
               key=lambda i: (records[i].feasibility,
                              records[i].satisfaction))
    records[best].best = True
    save_results(args.out, records)
    for i, rec in enumerate(records):
        tag = "  <- best" if rec.best else ""
        print("sample %d: feasibility %.3f  satisfaction %.3f%s"
              % (i, rec.feasibility, rec.satisfaction, tag))
    print("wrote %d samples to %s" % (len(records), args.out))
    return 0


def _cmd_eval(args, config: RunConfig) -> int:
    bundle = load_scene(args.scene)
    records = load_results(args.result)
    reference = bundle.reference
    if args.reference is not None:
        reference = load_graph(args.reference)
    n = len(bundle.scene.objects)
    header = "sample  feasibility  satisfaction"
    if reference is not None:
        header += "  functionality"
    print(header)
    for i, rec in enumerate(records):
        if rec.poses.shape[0] != n:
            raise ValidationError(
                "result record %d has %d poses for %d objects"
                % (i, rec.poses.shape[0], n))
        posed = bundle.scene.with_poses(rec.poses)
        report = evaluate(posed, reference=reference)
        row = "%-6d  %11.3f  %12.3f" % (i, report.feasibility,
                                        rec.satisfaction)
        if reference is not None:
            row += "  %13.3f" % report.functionality
        if rec.best:
            row += "  <- best"
        print(row)
    return 0


def _cmd_render(args, config: RunConfig) -> int:
    bundle = load_scene(args.scene)
    scene = bundle.scene
    if args.result is not None:
        records = load_results(args.result)
        chosen = next((r for r in records if r.best), records[0])
        if chosen.poses.shape[0] != len(scene.objects):
            raise ValidationError("result poses do not match the scene")
        scene = scene.with_poses(chosen.poses)
    render_to_file(args.out, scene)
    print("wrote %s" % args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formtab",
        description="Functional tabletop object arrangement: propose "
                    "abstract spatial relations, then ground them with "
                    "compositional diffusion sampling.")
    parser.add_argument("--config", default=None,
                        help="sectioned key = value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset")
    p.add_argument("--relation", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("train", help="train a learned factor")
    p.add_argument("--relation", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("propose", help="propose a relation graph")
    p.add_argument("--scene", required=True)
    p.add_argument("--backend", choices=("program", "llm"),
                   default="program")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_propose)

    p = sub.add_parser("solve", help="sample poses satisfying a graph")
    p.add_argument("--scene", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--backend", choices=("analytic", "learned"),
                   default="analytic")
    p.add_argument("--checkpoint", action="append", default=[],
                   help="learned-factor checkpoint (repeatable)")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("eval", help="score a solve result")
    p.add_argument("--scene", required=True)
    p.add_argument("--result", required=True)
    p.add_argument("--reference", default=None,
                   help="graph file overriding the scene's reference")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("render", help="render an arrangement as SVG")
    p.add_argument("--scene", required=True)
    p.add_argument("--result", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except ValidationError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    except FormtabError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
