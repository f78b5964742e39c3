"""Task-bundle I/O and the three run entry points: learn, eval, sweep.

A task bundle on disk is a directory containing `bias.pl`, an `exs` file of
pos/neg atoms, and one probabilistic-facts file per example id under `facts/`.
Learn results are written as canonical JSON (sorted keys) so identical runs
produce byte-identical files; wall time is reported on the diagnostic stream
only, never in the result file.
"""

from __future__ import annotations

import json
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .logic import Program
from .parsing import (
    ExampleRecord,
    ParseError,
    parse_bias,
    parse_examples,
    parse_facts,
    parse_program,
    print_program,
)
from .score import bce, confusion, f1, select_threshold
from .search import LearnResult, LearnTask, SearchSettings, TaskTester, learn
from .synth import NOISE_TIERS, SceneConfig, TaskBundle, synth_generate

logger = logging.getLogger(__name__)

BIAS_FILE = "bias.pl"
EXAMPLES_FILE = "exs"
FACTS_DIR = "facts"

# Preset model configurations for sweeps, named by what they switch on.
MODEL_PRESETS = {
    "ns-noisycombo-bce": dict(tester="neurosymbolic", constrainer="noisycombo", cost="bce"),
    "ns-noisycombo-mdl": dict(tester="neurosymbolic", constrainer="noisycombo", cost="mdl"),
    "ns-combo-bce": dict(tester="neurosymbolic", constrainer="combo", cost="bce"),
    "ns-maxsynth-mdl": dict(tester="neurosymbolic", constrainer="maxsynth", cost="mdl"),
    "binary-combo-mdl": dict(tester="binary", constrainer="combo", cost="mdl"),
    "binary-noisycombo-mdl": dict(tester="binary", constrainer="noisycombo", cost="mdl"),
    "binary-maxsynth-mdl": dict(tester="binary", constrainer="maxsynth", cost="mdl"),
}


class TaskError(Exception):
    """A bundle is structurally broken (missing files, empty example set, ...)."""


def save_bundle(bundle: TaskBundle, directory) -> None:
    root = Path(directory)
    (root / FACTS_DIR).mkdir(parents=True, exist_ok=True)
    (root / BIAS_FILE).write_text(bundle.bias_text, encoding="utf-8")
    (root / EXAMPLES_FILE).write_text(bundle.examples_text, encoding="utf-8")
    for ex_id, text in bundle.facts.items():
        (root / FACTS_DIR / ex_id).write_text(text, encoding="utf-8")


def load_bundle(directory) -> TaskBundle:
    root = Path(directory)
    bias_path = root / BIAS_FILE
    exs_path = root / EXAMPLES_FILE
    if not bias_path.is_file():
        raise TaskError(f"missing {BIAS_FILE} in {root}")
    if not exs_path.is_file():
        raise TaskError(f"missing {EXAMPLES_FILE} in {root}")
    examples_text = exs_path.read_text(encoding="utf-8")
    facts = {}
    for ex_id, _ in parse_examples(examples_text):
        facts_path = root / FACTS_DIR / ex_id
        if not facts_path.is_file():
            raise TaskError(f"missing facts file for example {ex_id!r}: {facts_path}")
        facts[ex_id] = facts_path.read_text(encoding="utf-8")
    return TaskBundle(bias_path.read_text(encoding="utf-8"), examples_text, facts)


def task_from_bundle(bundle: TaskBundle) -> LearnTask:
    bias = parse_bias(bundle.bias_text)
    if bias.head_pred[1] != 1:
        raise TaskError("task head predicates must have arity 1 (one entity per example)")
    labeled = parse_examples(bundle.examples_text)
    if not labeled:
        raise TaskError("the example file lists no examples")
    records = []
    for ex_id, label in labeled:
        text = bundle.facts.get(ex_id)
        if text is None:
            raise TaskError(f"no facts provided for example {ex_id!r}")
        records.append(ExampleRecord(ex_id, label, tuple(parse_facts(text))))
    return LearnTask(bias, tuple(records))


def load_task(directory) -> LearnTask:
    return task_from_bundle(load_bundle(directory))


# ---------------------------------------------------------------------------
# Learn
# ---------------------------------------------------------------------------


def result_record(result: LearnResult, settings: SearchSettings) -> dict:
    """Deterministic, JSON-ready summary of a learn run."""
    record = {
        "program": print_program(result.best_program) if result.best_program else None,
        "cost": result.best_cost if result.best_cost != float("inf") else None,
        "threshold": result.threshold,
        "iterations": result.iterations,
        "tested": result.tested,
        "pruned": result.pruned,
        "stop_reason": result.stop_reason,
        "settings": {
            "tester": settings.tester,
            "constrainer": settings.constrainer,
            "cost": settings.cost,
            "noise_level": settings.noise_level,
            "bk_threshold": settings.bk_threshold,
            "top_k": settings.infer.top_k,
            "provenance": settings.infer.provenance,
            "seed": settings.seed,
        },
    }
    if result.best_result is not None:
        tr = result.best_result
        record["metrics"] = {
            "tp": tr.tp,
            "fp": tr.fp,
            "tn": tr.tn,
            "fn": tr.fn,
            "f1": f1((tr.tp, tr.fp, tr.tn, tr.fn)),
            "bce": bce(tr.labeled_probs),
        }
    else:
        record["metrics"] = None
    return record


def dump_record(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def run_learn(task_dir, settings: SearchSettings, out_path) -> int:
    """Learn from a bundle directory and write the result file.

    Exit codes: 0 solution written, 1 no solution within budget, 2 bad input.
    """
    try:
        task = load_task(task_dir)
        result = learn(task, settings)
    except (ParseError, TaskError, ValueError) as exc:
        logger.error("cannot run task %s: %s", task_dir, exc)
        return 2
    record = result_record(result, settings)
    Path(out_path).write_text(dump_record(record), encoding="utf-8")
    if result.best_program is None:
        logger.error("no hypothesis tested within budget (stop reason: %s)", result.stop_reason)
        return 1
    return 0


# ---------------------------------------------------------------------------
# Eval
# ---------------------------------------------------------------------------


def eval_program(
    program: Program,
    task: LearnTask,
    settings: SearchSettings,
    threshold: Optional[float] = None,
) -> dict:
    """Metrics for a fixed program over a task's examples.

    Without an explicit threshold the output threshold is re-selected on these
    examples; pass the training threshold for a held-out evaluation.
    """
    if not task.examples:
        raise TaskError("cannot evaluate on an empty example set")
    tester = TaskTester(task.examples, settings)
    per_example = [(ex.id, ex.label, tester.predict(program, ex)) for ex in task.examples]
    labeled = [(label, p) for _, label, p in per_example]
    if threshold is None:
        threshold = 0.5 if settings.tester == "binary" else select_threshold(labeled)
    counts = confusion(labeled, threshold)
    tp, fp, tn, fn = counts
    return {
        "tp": tp,
        "fp": fp,
        "tn": tn,
        "fn": fn,
        "f1": f1(counts),
        "bce": bce(labeled),
        "threshold": threshold,
        "n_examples": len(per_example),
    }


def run_eval(program_path, task_dir, settings: SearchSettings, threshold: Optional[float] = None) -> dict:
    program = parse_program(Path(program_path).read_text(encoding="utf-8"))
    task = load_task(task_dir)
    return eval_program(program, task, settings, threshold)


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepGrid:
    tiers: tuple = ("easy", "intermediate", "hard")
    train_sizes: tuple = (1, 2, 4, 8)
    models: tuple = ("ns-noisycombo-bce", "binary-combo-mdl")
    repetitions: int = 5
    n_test: int = 25  # per polarity
    seed: int = 0
    scene: SceneConfig = SceneConfig()

    def validate(self) -> None:
        for tier in self.tiers:
            if tier not in NOISE_TIERS:
                raise ValueError(f"unknown noise tier {tier!r}")
        for model in self.models:
            if model not in MODEL_PRESETS:
                raise ValueError(f"unknown model preset {model!r}; choose from {sorted(MODEL_PRESETS)}")
        if self.repetitions < 1 or self.n_test < 1:
            raise ValueError("repetitions and n_test must be >= 1")


def _settings_for(model: str, base: SearchSettings) -> SearchSettings:
    return replace(base, **MODEL_PRESETS[model])


def _run_cell_rep(
    grid: SweepGrid, base: SearchSettings, tier: str, size: int, model: str, rep: int, seed: int
) -> dict:
    scene = grid.scene.with_tier(tier)
    train = synth_generate(replace(scene, seed=seed), size, size)
    test = synth_generate(replace(scene, seed=seed + 1), grid.n_test, grid.n_test)
    settings = replace(_settings_for(model, base), seed=seed)
    result = learn(task_from_bundle(train), settings)
    rep_record = {
        "rep": rep,
        "seed": seed,
        "program": print_program(result.best_program) if result.best_program else None,
        "train_cost": result.best_cost if result.best_cost != float("inf") else None,
        "tested": result.tested,
        "stop_reason": result.stop_reason,
    }
    if result.best_program is None:
        rep_record.update({"f1": 0.0, "threshold": None})
        return rep_record
    metrics = eval_program(
        result.best_program, task_from_bundle(test), settings, threshold=result.threshold
    )
    rep_record.update({"f1": metrics["f1"], "threshold": result.threshold, "test": metrics})
    return rep_record


def run_sweep(grid: SweepGrid, base_settings: SearchSettings, max_workers: int = 4) -> dict:
    """Mean/stddev test F1 per (tier, train size, model) cell over seeded repetitions."""
    grid.validate()
    base_settings.validate()
    cells = [
        (tier, size, model)
        for tier in grid.tiers
        for size in grid.train_sizes
        for model in grid.models
    ]

    def run_cell(args) -> dict:
        _, (tier, size, model) = args
        # Seeds depend on the data cell (tier, size, repetition) but not on the
        # model, so competing models are compared on identical train/test splits.
        data_index = grid.tiers.index(tier) * len(grid.train_sizes) + grid.train_sizes.index(size)
        reps = []
        for rep in range(grid.repetitions):
            seed = grid.seed + data_index * 1000 + rep * 2
            reps.append(_run_cell_rep(grid, base_settings, tier, size, model, rep, seed))
        scores = [r["f1"] for r in reps]
        return {
            "tier": tier,
            "train_size": size,
            "model": model,
            "reps": reps,
            "mean_f1": statistics.mean(scores),
            "std_f1": statistics.pstdev(scores),
        }

    if max_workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run_cell, enumerate(cells)))
    else:
        results = [run_cell(item) for item in enumerate(cells)]
    return {
        "tiers": list(grid.tiers),
        "train_sizes": list(grid.train_sizes),
        "models": list(grid.models),
        "repetitions": grid.repetitions,
        "n_test": grid.n_test,
        "seed": grid.seed,
        "cells": results,
    }


def format_sweep_table(report: dict) -> str:
    """Plain-text table: one row per cell, mean and spread of test F1."""
    header = f"{'tier':<14}{'train':>6}  {'model':<24}{'mean f1':>9}{'std':>7}"
    lines = [header, "-" * len(header)]
    for cell in report["cells"]:
        lines.append(
            f"{cell['tier']:<14}{cell['train_size']:>6}  {cell['model']:<24}"
            f"{cell['mean_f1']:>9.3f}{cell['std_f1']:>7.3f}"
        )
    return "\n".join(lines)
