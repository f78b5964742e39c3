"""Hypothesis quality measures: cross-entropy and description-length costs,
confusion counts, F1, and the 15-point output-threshold selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .logic import Program, program_size
from .parsing import POSITIVE

# Predicted probabilities are clamped away from {0, 1} before taking logs.
BCE_EPSILON = 1e-7

# Candidate output thresholds: 15 points evenly spaced strictly inside (0, 1).
THRESHOLD_GRID = tuple(i / 16 for i in range(1, 16))


@dataclass(frozen=True)
class TestResult:
    """Per-example predictions for one hypothesis plus the derived confusion counts."""

    __test__ = False  # not a pytest class, despite the name

    per_example: tuple  # tuple[(id, label, prob), ...]
    threshold: float
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def labeled_probs(self) -> list:
        return [(label, prob) for _, label, prob in self.per_example]


def confusion(results: Iterable[tuple], threshold: float) -> tuple:
    """(tp, fp, tn, fn) with `predicted positive iff prob >= threshold`."""
    tp = fp = tn = fn = 0
    for label, prob in results:
        predicted_pos = prob >= threshold
        if label == POSITIVE:
            if predicted_pos:
                tp += 1
            else:
                fn += 1
        else:
            if predicted_pos:
                fp += 1
            else:
                tn += 1
    return tp, fp, tn, fn


def make_test_result(per_example: Sequence[tuple], threshold: float) -> TestResult:
    counts = confusion([(label, prob) for _, label, prob in per_example], threshold)
    return TestResult(tuple(per_example), threshold, *counts)


def bce(results: Sequence[tuple]) -> float:
    """Mean binary cross-entropy of (label, prob) pairs; lower is better."""
    if not results:
        raise ValueError("cannot score an empty result list")
    total = 0.0
    for label, prob in results:
        p = min(max(prob, BCE_EPSILON), 1.0 - BCE_EPSILON)
        y = 1.0 if label == POSITIVE else 0.0
        total += y * math.log(p) + (1.0 - y) * math.log(1.0 - p)
    return -total / len(results)


def mdl(h: Program, conf: tuple) -> int:
    """Description-length cost: program literal count plus fn plus fp."""
    tp, fp, tn, fn = conf
    return program_size(h) + fn + fp


def select_threshold(results: Sequence[tuple]) -> float:
    """Grid candidate maximizing tp + tn; ties go to the smallest threshold."""
    if not results:
        raise ValueError("cannot select a threshold from an empty result list")
    best_t = THRESHOLD_GRID[0]
    best_correct = -1
    for t in THRESHOLD_GRID:
        tp, fp, tn, fn = confusion(results, t)
        if tp + tn > best_correct:
            best_correct = tp + tn
            best_t = t
    return best_t


def f1(conf: tuple) -> float:
    """2tp / (2tp + fp + fn), or 0.0 when the denominator vanishes."""
    tp, fp, tn, fn = conf
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0
