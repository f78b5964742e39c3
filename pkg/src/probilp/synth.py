"""Synthetic scene tasks that emulate imperfect object-detector output.

Every example is a scene: a bag of objects with classes and spatial relations.
Positive scenes instantiate the target pattern among their ground-truth
objects; negative scenes carry the same object classes plus structured
near-misses of the pattern (right class on the wrong thing, wrong class on the
right thing, the right pair under the wrong relation) so that nothing short of
the full pattern separates the labels.

A detector pass then perturbs the ground truth into confidence-weighted facts:
surviving objects get a confidence drawn from the true-positive distribution,
objects are dropped at the miss rate, classes are swapped at the label-flip
rate, and spurious low-confidence detections are injected at the
false-detection rate.  Generation is deterministic per seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Optional

from .logic import Atom, Bias, Const, Program
from .parsing import (
    NEGATIVE,
    POSITIVE,
    ExampleRecord,
    ProbFact,
    parse_program,
    serialize_bias,
    serialize_examples,
    serialize_facts,
)
from .infer import evaluate_binary

DEFAULT_TARGET = "f(A) :- has_object(A,B), vehicle(B), is_on(B,C), bridge(C)."

MEMBERSHIP_PRED = "has_object"

# Detector presets for increasingly flawed background knowledge.  Engine
# defaults, tunable per task.  Harder tiers mainly widen the true-positive
# confidence distribution: detections degrade into weak evidence (which a
# fixed fact threshold discards) rather than vanish outright.
NOISE_TIERS = {
    "easy": dict(
        false_detection_rate=0.05, miss_rate=0.02, label_flip_rate=0.0, tp_confidence=(0.9, 0.05)
    ),
    "intermediate": dict(
        false_detection_rate=0.15, miss_rate=0.03, label_flip_rate=0.02, tp_confidence=(0.8, 0.12)
    ),
    "hard": dict(
        false_detection_rate=0.25, miss_rate=0.02, label_flip_rate=0.04, tp_confidence=(0.65, 0.18)
    ),
}


@dataclass(frozen=True)
class SceneConfig:
    object_classes: tuple = ("vehicle", "bridge", "roundabout", "road")
    relation_preds: tuple = ("is_on", "is_close")
    n_objects: tuple = (5, 8)  # inclusive range per scene
    target: str = DEFAULT_TARGET
    tp_confidence: tuple = (0.9, 0.05)  # (mean, spread) for kept true objects
    fp_confidence: tuple = (0.4, 0.15)  # (mean, spread) for spurious detections
    false_detection_rate: float = 0.05
    miss_rate: float = 0.05
    label_flip_rate: float = 0.0
    relation_confidence: str = "certain"  # "certain" (1.0) | "margin" (geometry-like)
    extra_relation_rate: float = 0.15
    # Rate at which a negative scene carries a detached pattern instance: the
    # pattern's first object keeps its class and relations but is dropped from
    # the scene membership list (a post-filtered detection whose relations
    # survived).  Separates membership variants of the target pattern.
    detached_instance_rate: float = 0.0
    bias_body_preds: Optional[tuple] = None  # default: membership + classes + relations
    max_vars: int = 4
    max_body: int = 4
    max_clauses: int = 2
    seed: int = 0

    def validate(self) -> None:
        for name in (
            "false_detection_rate",
            "miss_rate",
            "label_flip_rate",
            "extra_relation_rate",
            "detached_instance_rate",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.relation_confidence not in ("certain", "margin"):
            raise ValueError(f"unknown relation_confidence {self.relation_confidence!r}")
        if len(self.object_classes) < 2:
            raise ValueError("need at least two object classes")

    def with_tier(self, tier: str) -> "SceneConfig":
        if tier not in NOISE_TIERS:
            raise ValueError(f"unknown noise tier {tier!r}; choose from {sorted(NOISE_TIERS)}")
        return replace(self, **NOISE_TIERS[tier])

    def target_program(self) -> Program:
        return parse_program(self.target)

    def bias(self) -> Bias:
        if self.bias_body_preds is not None:
            body = tuple(self.bias_body_preds)
        else:
            body = ((MEMBERSHIP_PRED, 2),)
            body += tuple((c, 1) for c in self.object_classes)
            body += tuple((r, 2) for r in self.relation_preds)
        return Bias(("f", 1), body, self.max_vars, self.max_body, self.max_clauses)


@dataclass(frozen=True)
class TaskBundle:
    """In-memory task: bias text, example labels, one facts file per example."""

    bias_text: str
    examples_text: str
    facts: dict  # id -> facts file text


@dataclass
class _Pattern:
    """The target clause reshaped for instantiation: classes and relations per variable."""

    object_vars: list
    classes: dict  # var -> class name
    relations: list  # (pred, var1, var2)
    member_vars: list  # variables the pattern binds through scene membership


def _extract_pattern(cfg: SceneConfig) -> _Pattern:
    program = cfg.target_program()
    clause = program.clauses[0]
    head_var = clause.head.args[0]
    object_vars: dict = {}
    classes: dict = {}
    relations: list = []
    member_vars: dict = {}
    for atom in clause.body:
        if atom.pred == MEMBERSHIP_PRED:
            if atom.args[0] != head_var:
                raise ValueError(f"{MEMBERSHIP_PRED} must link the scene variable to an object")
            object_vars.setdefault(atom.args[1], None)
            member_vars.setdefault(atom.args[1], None)
        elif atom.arity == 1:
            v = atom.args[0]
            if v == head_var:
                raise ValueError("class predicates must apply to object variables")
            if v in classes:
                raise ValueError("each pattern variable may carry at most one class")
            classes[v] = atom.pred
            object_vars.setdefault(v, None)
        elif atom.arity == 2:
            if head_var in atom.args:
                raise ValueError("relations must hold between object variables")
            relations.append((atom.pred, atom.args[0], atom.args[1]))
            object_vars.setdefault(atom.args[0], None)
            object_vars.setdefault(atom.args[1], None)
        else:
            raise ValueError(f"unsupported pattern atom {atom!r}")
    return _Pattern(list(object_vars), classes, relations, list(member_vars))


@dataclass
class _Scene:
    classes: dict = field(default_factory=dict)  # object id -> class
    relations: list = field(default_factory=list)  # (pred, obj1, obj2)
    detached: set = field(default_factory=set)  # object ids without membership

    def add_object(self, cls: str) -> str:
        oid = f"o{len(self.classes) + 1}"
        self.classes[oid] = cls
        return oid

    def objects_of(self, cls: str) -> list:
        return [o for o, c in self.classes.items() if c == cls and o not in self.detached]

    def relate(self, pred: str, a: str, b: str) -> None:
        if a != b and (pred, a, b) not in self.relations:
            self.relations.append((pred, a, b))


def _ground_truth_record(scene: _Scene, ex_id: str, label: str) -> ExampleRecord:
    facts = [
        ProbFact(1.0, Atom(MEMBERSHIP_PRED, (Const(ex_id), Const(o))))
        for o in scene.classes
        if o not in scene.detached
    ]
    facts += [ProbFact(1.0, Atom(c, (Const(o),))) for o, c in scene.classes.items()]
    facts += [ProbFact(1.0, Atom(p, (Const(a), Const(b)))) for p, a, b in scene.relations]
    return ExampleRecord(ex_id, label, tuple(facts))


def _build_scene(rng: random.Random, cfg: SceneConfig, pattern: _Pattern, positive: bool, ex_id: str) -> _Scene:
    """One ground-truth scene; negatives are rebuilt until they avoid the pattern."""
    target = cfg.target_program()
    for _ in range(64):
        scene = _Scene()
        for cls in cfg.object_classes:
            scene.add_object(cls)
        n_total = rng.randint(*cfg.n_objects)
        while len(scene.classes) < n_total:
            scene.add_object(rng.choice(cfg.object_classes))

        if positive:
            _instantiate_pattern(rng, cfg, pattern, scene)
        elif pattern.member_vars and rng.random() < cfg.detached_instance_rate:
            # Near-instance: the pattern is present except that its
            # membership-bound object fell off the scene's object list, so the
            # pattern itself does not hold.
            assignment = _instantiate_pattern(rng, cfg, pattern, scene, fresh=True)
            scene.detached.add(assignment[pattern.member_vars[0]])

        _add_near_misses(rng, cfg, pattern, scene)
        _add_random_relations(rng, cfg, scene)

        record = _ground_truth_record(scene, ex_id, POSITIVE if positive else NEGATIVE)
        entailed = evaluate_binary(target, record, 0.0)
        if entailed == positive:
            return scene
    raise RuntimeError("could not build a scene consistent with its label; relax the config")


def _instantiate_pattern(
    rng: random.Random, cfg: SceneConfig, pattern: _Pattern, scene: _Scene, fresh: bool = False
) -> dict:
    """Realize the target pattern among scene objects; returns the var assignment."""
    assignment: dict = {}
    for v in pattern.object_vars:
        cls = pattern.classes.get(v) or rng.choice(cfg.object_classes)
        pool = [] if fresh else scene.objects_of(cls)
        obj = rng.choice(pool) if pool else scene.add_object(cls)
        while obj in assignment.values():
            obj = scene.add_object(cls)
        assignment[v] = obj
    for pred, v1, v2 in pattern.relations:
        scene.relate(pred, assignment[v1], assignment[v2])
    return assignment


def _add_near_misses(rng: random.Random, cfg: SceneConfig, pattern: _Pattern, scene: _Scene) -> None:
    """Structured distractors derived from the pattern's relations.

    For each pattern relation rel(B, C): the B-class object is related to some
    wrong-class object, a wrong-class object is related to the C-class object,
    and the right pair is linked under a different relation.  Keeps shortcut
    clauses (drop one literal from the target) from separating the labels.
    """
    other_relations = [r for r in cfg.relation_preds]
    for pred, v1, v2 in pattern.relations:
        cls1 = pattern.classes.get(v1)
        cls2 = pattern.classes.get(v2)
        left = scene.objects_of(cls1) if cls1 else list(scene.classes)
        right = scene.objects_of(cls2) if cls2 else list(scene.classes)
        wrong_right = [o for o in scene.classes if cls2 is None or scene.classes[o] != cls2]
        wrong_left = [o for o in scene.classes if cls1 is None or scene.classes[o] != cls1]
        if left and wrong_right:
            scene.relate(pred, rng.choice(left), rng.choice(wrong_right))
        if wrong_left and right:
            scene.relate(pred, rng.choice(wrong_left), rng.choice(right))
        alternates = [r for r in other_relations if r != pred]
        if alternates and left and right:
            scene.relate(rng.choice(alternates), rng.choice(left), rng.choice(right))


def _add_random_relations(rng: random.Random, cfg: SceneConfig, scene: _Scene) -> None:
    objs = list(scene.classes)
    for pred in cfg.relation_preds:
        for a in objs:
            for b in objs:
                if a != b and rng.random() < cfg.extra_relation_rate:
                    scene.relate(pred, a, b)


def _confidence(rng: random.Random, mean_spread: tuple) -> float:
    mean, spread = mean_spread
    return round(min(1.0, max(0.01, rng.gauss(mean, spread))), 4)


def _detect(rng: random.Random, cfg: SceneConfig, scene: _Scene, ex_id: str) -> list:
    """Run the simulated detector over a ground-truth scene, producing facts."""
    detections: dict = {}  # object id -> (class, confidence)
    for obj, cls in scene.classes.items():
        if rng.random() < cfg.miss_rate:
            continue
        observed = cls
        if rng.random() < cfg.label_flip_rate:
            observed = rng.choice([c for c in cfg.object_classes if c != cls] or [cls])
        detections[obj] = (observed, _confidence(rng, cfg.tp_confidence))

    members = [o for o in detections if o not in scene.detached]

    relations = [(p, a, b) for p, a, b in scene.relations if a in detections and b in detections]

    # Spurious detections, optionally stacked onto surviving objects.
    n_spurious = sum(1 for _ in scene.classes if rng.random() < cfg.false_detection_rate)
    next_id = len(scene.classes) + 1
    for _ in range(n_spurious):
        obj = f"o{next_id}"
        next_id += 1
        detections[obj] = (rng.choice(cfg.object_classes), _confidence(rng, cfg.fp_confidence))
        members.append(obj)
        anchors = [o for o in detections if o != obj]
        if anchors and rng.random() < 0.5:
            relations.append((rng.choice(cfg.relation_preds), obj, rng.choice(anchors)))

    def rel_conf(a: str, b: str) -> float:
        if cfg.relation_confidence == "certain":
            return 1.0
        return _confidence(rng, (0.9, 0.06))

    scene_const = Const(ex_id)
    facts = [
        ProbFact(1.0, Atom(MEMBERSHIP_PRED, (scene_const, Const(o)))) for o in sorted(members)
    ]
    facts += [
        ProbFact(conf, Atom(cls, (Const(o),)))
        for o, (cls, conf) in sorted(detections.items())
    ]
    facts += [
        ProbFact(rel_conf(a, b), Atom(p, (Const(a), Const(b))))
        for p, a, b in sorted(relations)
    ]
    return facts


def synth_generate(cfg: SceneConfig, n_pos: int, n_neg: int) -> TaskBundle:
    """Generate a labeled task bundle of n_pos positive and n_neg negative scenes."""
    cfg.validate()
    if n_pos < 1 or n_neg < 1:
        raise ValueError("n_pos and n_neg must be >= 1")
    pattern = _extract_pattern(cfg)
    rng = random.Random(cfg.seed)
    labels = [POSITIVE] * n_pos + [NEGATIVE] * n_neg
    labeled = []
    facts = {}
    for i, label in enumerate(labels, start=1):
        ex_id = f"img{i:04d}"
        scene = _build_scene(rng, cfg, pattern, label == POSITIVE, ex_id)
        facts[ex_id] = serialize_facts(_detect(rng, cfg, scene, ex_id))
        labeled.append((ex_id, label))
    bias = cfg.bias()
    return TaskBundle(serialize_bias(bias), serialize_examples(labeled, bias.head_pred[0]), facts)
