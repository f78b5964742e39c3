"""The learning loop: size-ordered hypothesis generation under a bias, testing
against the examples, constraint-based pruning of the search space, and the
greedy combiner that unions promising partial programs.

Candidates are enumerated in nondecreasing program size from a pool of
canonical head-connected clauses.  Every tested hypothesis may anchor pruning
constraints: `prune_specializations` removes anything theta-subsumed by the
anchor from the remaining stream, `prune_generalizations` removes anything the
anchor theta-subsumes.  Three constraint policies are provided:

  combo       prune generalizations on any false positive; prune
              specializations on any false negative or a clean negative side.
  noisycombo  tolerate false positives up to noise_level * n_negatives before
              pruning generalizations; prune specializations only when the
              negative side is clean.
  maxsynth    description-length bounds: prune when no specialization
              (resp. later generalization) can beat the best cost seen so far.

Probabilistic outputs are binarized through the threshold grid before any
constraint is generated.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .infer import FactIndex, InferenceConfig, clause_proof_sets, combine_proof_probs, prob_and
from .logic import (
    Atom,
    Bias,
    Clause,
    Const,
    Program,
    Var,
    canonicalize,
    clause_key,
    head_connected,
    make_program,
    program_key,
    program_size,
    program_specializes,
    theta_subsumes,
)
from .parsing import ExampleRecord, POSITIVE, ProbFact, print_program
from .score import TestResult, bce, make_test_result, mdl, select_threshold

logger = logging.getLogger(__name__)

PRUNE_GENERALIZATIONS = "prune_generalizations"
PRUNE_SPECIALIZATIONS = "prune_specializations"

COST_EPSILON = 1e-12


@dataclass(frozen=True)
class ConstraintRecord:
    """A pruning directive anchored at a previously tested hypothesis."""

    kind: str  # PRUNE_GENERALIZATIONS | PRUNE_SPECIALIZATIONS
    anchor: Program


@dataclass(frozen=True)
class SearchSettings:
    constrainer: str = "noisycombo"  # combo | noisycombo | maxsynth
    cost: str = "bce"  # mdl | bce
    tester: str = "neurosymbolic"  # neurosymbolic | binary
    noise_level: float = 0.15
    bk_threshold: float = 0.5
    infer: InferenceConfig = field(default_factory=InferenceConfig)
    budget_seconds: Optional[float] = 600.0
    max_iterations: Optional[int] = None
    stall_iterations: Optional[int] = None
    max_promising: int = 64
    seed: int = 0

    def validate(self) -> None:
        if self.constrainer not in ("combo", "noisycombo", "maxsynth"):
            raise ValueError(f"unknown constrainer {self.constrainer!r}")
        if self.cost not in ("mdl", "bce"):
            raise ValueError(f"unknown cost {self.cost!r}")
        if self.tester not in ("neurosymbolic", "binary"):
            raise ValueError(f"unknown tester {self.tester!r}")
        if not 0.0 <= self.noise_level < 1.0:
            raise ValueError("noise_level must lie in [0, 1)")
        if not 0.0 <= self.bk_threshold <= 1.0:
            raise ValueError("bk_threshold must lie in [0, 1]")
        self.infer.validate()


@dataclass(frozen=True)
class LearnResult:
    best_program: Optional[Program]
    best_cost: float
    threshold: float
    iterations: int
    tested: int
    pruned: int
    best_result: Optional[TestResult] = None
    stop_reason: str = "exhausted"


@dataclass(frozen=True)
class LearnTask:
    bias: Bias
    examples: tuple  # tuple[ExampleRecord, ...]


# ---------------------------------------------------------------------------
# Candidate generation
# ---------------------------------------------------------------------------


def _atom_universe(bias: Bias) -> list:
    variables = [Var(f"V{i}") for i in range(bias.max_vars)]
    atoms = []
    for pred, arity in bias.body_preds:
        _extend_tuples(atoms, pred, arity, variables, ())
    atoms.sort(key=lambda a: (a.pred, tuple(t.name for t in a.args)))
    return atoms


def _extend_tuples(out: list, pred: str, arity: int, variables: list, prefix: tuple) -> None:
    if len(prefix) == arity:
        out.append(Atom(pred, prefix))
        return
    for v in variables:
        _extend_tuples(out, pred, arity, variables, prefix + (v,))


def _var_indexes(atom: Atom) -> frozenset:
    return frozenset(int(t.name[1:]) for t in atom.args if isinstance(t, Var))


def clause_pool(bias: Bias, body_len: int) -> list:
    """All canonical head-connected clauses with exactly `body_len` body literals.

    Bodies are drawn as atom combinations over V0..V{max_vars-1}; combinations
    whose non-head variables do not form a contiguous prefix are pure renamings
    of retained ones and are skipped before the (more expensive) canonical
    deduplication.
    """
    head_name, head_arity = bias.head_pred
    if head_arity > bias.max_vars:
        raise ValueError("max_vars is smaller than the head arity")
    head = Atom(head_name, tuple(Var(f"V{i}") for i in range(head_arity)))
    universe = _atom_universe(bias)
    atom_idx = {a: _var_indexes(a) for a in universe}
    pool = []
    seen = set()
    for combo in combinations(universe, body_len):
        used = frozenset().union(*(atom_idx[a] for a in combo))
        extra = sorted(i for i in used if i >= head_arity)
        if extra != list(range(head_arity, head_arity + len(extra))):
            continue
        clause = Clause(head, combo)
        if not head_connected(clause):
            continue
        canon = canonicalize(clause)
        key = clause_key(canon)
        if key in seen:
            continue
        seen.add(key)
        # Fewer variables first: simpler clauses are tried before busier ones
        # of the same size.
        pool.append(((len(used), key), canon))
    pool.sort(key=lambda kv: kv[0])
    return [c for _, c in pool]


_POOL_CACHE: dict = {}


def _pool(bias: Bias, body_len: int) -> list:
    key = (bias, body_len)
    if key not in _POOL_CACHE:
        _POOL_CACHE[key] = clause_pool(bias, body_len)
    return _POOL_CACHE[key]


def _size_compositions(total: int, n_clauses: int, min_size: int, max_size: int) -> Iterator[tuple]:
    """Nondecreasing clause-size tuples of length n_clauses summing to total."""

    def rec(remaining: int, slots: int, lower: int, acc: tuple) -> Iterator[tuple]:
        if slots == 0:
            if remaining == 0:
                yield acc
            return
        for s in range(lower, min(max_size, remaining) + 1):
            # later slots are each >= s and <= max_size
            if s * (slots - 1) <= remaining - s <= max_size * (slots - 1):
                yield from rec(remaining - s, slots - 1, s, acc + (s,))

    yield from rec(total, n_clauses, min_size, ())


class HypothesisEnumerator:
    """Streams candidate programs in nondecreasing program size.

    Candidates are canonical, head-connected, constant-free, and respect the
    bias limits; programs blocked by the live constraint store are skipped and
    counted in `pruned`.  `generate_next` returns None once the bounded space
    is exhausted.
    """

    def __init__(self, bias: Bias):
        bias.validate()
        self.bias = bias
        self.pruned = 0
        self.yielded = 0
        self._stream = self._programs()
        self.current_size = 0

    def _programs(self) -> Iterator[Program]:
        bias = self.bias
        min_clause = 2
        max_clause = 1 + bias.max_body
        for total in range(min_clause, bias.max_clauses * max_clause + 1):
            self.current_size = total
            for n_clauses in range(1, bias.max_clauses + 1):
                for sizes in _size_compositions(total, n_clauses, min_clause, max_clause):
                    yield from self._programs_of_shape(sizes)

    def _programs_of_shape(self, sizes: tuple) -> Iterator[Program]:
        pools = [_pool(self.bias, s - 1) for s in sizes]

        def rec(slot: int, start: int, acc: tuple) -> Iterator[Program]:
            if slot == len(sizes):
                yield Program(acc)
                return
            pool = pools[slot]
            # Same-size slots take indexes in strictly increasing order so each
            # clause set is produced once.
            begin = start if slot > 0 and sizes[slot] == sizes[slot - 1] else 0
            for i in range(begin, len(pool)):
                yield from rec(slot + 1, i + 1, acc + (pool[i],))

        yield from rec(0, 0, ())

    def generate_next(self, store: "ConstraintStore", should_stop=None) -> Optional[Program]:
        """Next unblocked candidate, or None when exhausted.

        Long skip runs poll `should_stop` so a time budget can interrupt the
        scan; the caller distinguishes that from true exhaustion.
        """
        for candidate in self._stream:
            if store.blocks(candidate):
                self.pruned += 1
                if should_stop is not None and self.pruned % 512 == 0 and should_stop():
                    return None
                continue
            self.yielded += 1
            return candidate
        return None


# ---------------------------------------------------------------------------
# Constraint store
# ---------------------------------------------------------------------------


def prune(candidate: Program, records: Iterable[ConstraintRecord]) -> bool:
    """True when some record eliminates the candidate."""
    for rec in records:
        if rec.kind == PRUNE_SPECIALIZATIONS:
            if program_specializes(candidate, rec.anchor):
                return True
        elif program_specializes(rec.anchor, candidate):
            return True
    return False


def _clause_preds(clause: Clause) -> frozenset:
    return frozenset(a.pred for a in clause.body)


def _may_subsume(gen_preds: frozenset, spec_preds: frozenset) -> bool:
    # Necessary condition for theta-subsumption: every body predicate of the
    # general clause must occur in the specific clause.
    return gen_preds <= spec_preds


class _StoredRecord:
    __slots__ = ("rec", "info", "serial")

    def __init__(self, rec: ConstraintRecord, serial: int):
        self.rec = rec
        self.info = tuple((c, _clause_preds(c)) for c in rec.anchor.clauses)
        self.serial = serial


class ConstraintStore:
    """Deduplicated constraint records with subsumption-based redundancy removal.

    The candidate stream consults the store once per generated program, so
    `blocks` keeps that cheap: body-predicate prefilters before subsumption,
    per-(record, clause) verdict memos (multi-clause candidates keep re-using
    their member clauses), and a move-to-front record order so the anchors
    that kill whole cones of the stream are tried first.
    """

    def __init__(self):
        self._stored: list = []
        self._keys = set()
        self._serial = 0
        # Single-clause generalization anchors ban every candidate containing
        # that exact clause; checked by key before any subsumption work.
        self._banned_clause_keys = set()
        self._below_anchor: dict = {}  # (serial, clause_key) -> bool
        self._covers_anchor: dict = {}  # (serial, j, clause_key) -> bool

    def __len__(self) -> int:
        return len(self._stored)

    @property
    def records(self) -> list:
        return [s.rec for s in self._stored]

    def add(self, rec: ConstraintRecord) -> bool:
        key = (rec.kind, program_key(rec.anchor))
        if key in self._keys:
            return False
        # A new record is redundant when an existing same-kind record already
        # prunes everything it would prune; conversely it may obsolete old ones.
        for stored in self._stored:
            old = stored.rec
            if old.kind != rec.kind:
                continue
            if rec.kind == PRUNE_SPECIALIZATIONS:
                if program_specializes(rec.anchor, old.anchor):
                    return False
            elif program_specializes(old.anchor, rec.anchor):
                return False
        survivors = []
        for stored in self._stored:
            old = stored.rec
            if old.kind == rec.kind:
                if rec.kind == PRUNE_SPECIALIZATIONS and program_specializes(old.anchor, rec.anchor):
                    self._keys.discard((old.kind, program_key(old.anchor)))
                    continue
                if rec.kind == PRUNE_GENERALIZATIONS and program_specializes(rec.anchor, old.anchor):
                    self._keys.discard((old.kind, program_key(old.anchor)))
                    continue
            survivors.append(stored)
        self._serial += 1
        survivors.append(_StoredRecord(rec, self._serial))
        self._stored = survivors
        self._keys.add(key)
        if rec.kind == PRUNE_GENERALIZATIONS and len(rec.anchor.clauses) == 1:
            self._banned_clause_keys.add(clause_key(rec.anchor.clauses[0]))
        return True

    def _clause_below(self, stored: _StoredRecord, clause: Clause, ckey, cpreds) -> bool:
        memo_key = (stored.serial, ckey)
        verdict = self._below_anchor.get(memo_key)
        if verdict is None:
            verdict = any(
                _may_subsume(ap, cpreds) and theta_subsumes(ac, clause)
                for ac, ap in stored.info
            )
            self._below_anchor[memo_key] = verdict
        return verdict

    def _clause_covers(self, stored: _StoredRecord, j: int, clause: Clause, ckey, cpreds) -> bool:
        memo_key = (stored.serial, j, ckey)
        verdict = self._covers_anchor.get(memo_key)
        if verdict is None:
            ac, ap = stored.info[j]
            verdict = _may_subsume(cpreds, ap) and theta_subsumes(clause, ac)
            self._covers_anchor[memo_key] = verdict
        return verdict

    def blocks(self, candidate: Program) -> bool:
        cand = tuple((c, clause_key(c), _clause_preds(c)) for c in candidate.clauses)
        if self._banned_clause_keys and any(
            ckey in self._banned_clause_keys for _, ckey, _ in cand
        ):
            return True
        for i, stored in enumerate(self._stored):
            if stored.rec.kind == PRUNE_SPECIALIZATIONS:
                # candidate specializes anchor: every candidate clause subsumed
                # by some anchor clause
                hit = all(self._clause_below(stored, c, ckey, cp) for c, ckey, cp in cand)
            else:
                # anchor specializes candidate: candidate is a generalization
                hit = all(
                    any(self._clause_covers(stored, j, c, ckey, cp) for c, ckey, cp in cand)
                    for j in range(len(stored.info))
                )
            if hit:
                if i:
                    self._stored.insert(0, self._stored.pop(i))
                return True
        return False


# ---------------------------------------------------------------------------
# Constraint policies
# ---------------------------------------------------------------------------


def constrain_combo(tr: TestResult, h: Program) -> list:
    out = []
    if tr.fp > 0:
        out.append(ConstraintRecord(PRUNE_GENERALIZATIONS, h))
    if tr.fn > 0 or tr.fp == 0:
        out.append(ConstraintRecord(PRUNE_SPECIALIZATIONS, h))
    return out


def constrain_noisycombo(tr: TestResult, h: Program, noise_level: float, n_neg: int) -> list:
    """Relaxed policy: up to noise_level * n_neg false positives are tolerated.

    False negatives never trigger pruning here; partially covering programs are
    kept alive for the combiner.
    """
    out = []
    if tr.fp > noise_level * n_neg:
        out.append(ConstraintRecord(PRUNE_GENERALIZATIONS, h))
    if tr.fp == 0:
        out.append(ConstraintRecord(PRUNE_SPECIALIZATIONS, h))
    return out


def constrain_maxsynth(tr: TestResult, h: Program, best_cost: float) -> list:
    """Admissible description-length bounds against the best cost seen so far.

    A specialization of h has size >= size(h)+1 and misses at least the
    positives h misses, so its cost is at least size(h)+1+fn(h).  Under
    size-ordered enumeration, any generalization still to come has size >=
    size(h), hence cost >= size(h).
    """
    out = []
    size = program_size(h)
    if size + 1 + tr.fn >= best_cost:
        out.append(ConstraintRecord(PRUNE_SPECIALIZATIONS, h))
    if size >= best_cost:
        out.append(ConstraintRecord(PRUNE_GENERALIZATIONS, h))
    return out


# ---------------------------------------------------------------------------
# Testing
# ---------------------------------------------------------------------------


class TaskTester:
    """Evaluates hypotheses over the task's examples with per-clause proof caching.

    Proof fact sets depend only on the clause and the example, so clause results
    are shared between every program containing the clause - in particular the
    combiner's unions re-test almost for free.
    """

    def __init__(self, examples: Iterable[ExampleRecord], settings: SearchSettings):
        self.settings = settings
        self.examples = list(examples)
        self.indexes = {ex.id: FactIndex(ex.facts) for ex in self.examples}
        self.n_pos = sum(1 for ex in self.examples if ex.label == POSITIVE)
        self.n_neg = len(self.examples) - self.n_pos
        self._proofs: dict = {}  # (clause_key, ex_id) -> tuple[(fact_set, prob), ...]
        self._entailed: dict = {}  # (clause_key, ex_id) -> bool
        self._binary_indexes: dict = {}  # ex_id -> FactIndex over thresholded facts

    def _clause_proofs(self, clause: Clause, ex: ExampleRecord) -> tuple:
        key = (clause_key(clause), ex.id)
        cached = self._proofs.get(key)
        if cached is None:
            index = self.indexes[ex.id]
            head_arg = clause.head.args[0]
            entity = Const(ex.id)
            if isinstance(head_arg, Const) and head_arg != entity:
                cached = ()
            else:
                binding = {head_arg: entity} if isinstance(head_arg, Var) else {}
                sets = clause_proof_sets(index, clause.body, binding)
                cached = tuple((fs, prob_and(index.prob[a] for a in fs)) for fs in sets)
            self._proofs[key] = cached
        return cached

    def _binary_index(self, ex: ExampleRecord) -> FactIndex:
        index = self._binary_indexes.get(ex.id)
        if index is None:
            threshold = self.settings.bk_threshold
            kept = [ProbFact(1.0, f.atom) for f in ex.facts if f.prob >= threshold]
            index = self._binary_indexes[ex.id] = FactIndex(kept)
        return index

    def _clause_entailed(self, clause: Clause, ex: ExampleRecord) -> bool:
        key = (clause_key(clause), ex.id)
        cached = self._entailed.get(key)
        if cached is None:
            index = self._binary_index(ex)
            head_arg = clause.head.args[0]
            entity = Const(ex.id)
            if isinstance(head_arg, Const) and head_arg != entity:
                cached = False
            else:
                binding = {head_arg: entity} if isinstance(head_arg, Var) else {}
                cached = bool(clause_proof_sets(index, clause.body, binding, first_only=True))
            self._entailed[key] = cached
        return cached

    def predict(self, h: Program, ex: ExampleRecord) -> float:
        if self.settings.tester == "binary":
            return 1.0 if any(self._clause_entailed(c, ex) for c in h.clauses) else 0.0
        merged: dict = {}
        for clause in h.clauses:
            for fact_set, prob in self._clause_proofs(clause, ex):
                merged[fact_set] = prob
        if not merged:
            return 0.0
        return combine_proof_probs(merged.values(), self.settings.infer)

    def test(self, h: Program) -> TestResult:
        per_example = [(ex.id, ex.label, self.predict(h, ex)) for ex in self.examples]
        if self.settings.tester == "binary":
            threshold = 0.5  # predictions are already 0/1
        else:
            threshold = select_threshold([(label, p) for _, label, p in per_example])
        return make_test_result(per_example, threshold)


def hypothesis_cost(settings: SearchSettings, h: Program, tr: TestResult) -> float:
    if settings.cost == "mdl":
        return float(mdl(h, (tr.tp, tr.fp, tr.tn, tr.fn)))
    return bce(tr.labeled_probs)


def _order_key(h: Program, cost: float) -> tuple:
    return (cost, program_size(h), print_program(h))


# ---------------------------------------------------------------------------
# Combiner
# ---------------------------------------------------------------------------


def combine(
    promising: list,
    settings: SearchSettings,
    tester: TaskTester,
    max_clauses: Optional[int] = None,
) -> tuple:
    """Greedy cover: repeatedly union in the program that most reduces the cost.

    `promising` holds (program, test_result, cost) triples.  Returns the best
    union found as a (program, test_result, cost) triple; the union is re-tested
    through the tester at every step.
    """
    if not promising:
        raise ValueError("combine needs at least one promising program")
    ordered = sorted(promising, key=lambda item: _order_key(item[0], item[2]))
    current: Optional[Program] = None
    current_tr: Optional[TestResult] = None
    current_cost = float("inf")
    used = set()
    while True:
        best_step = None
        for prog, _, _ in ordered:
            key = program_key(prog)
            if key in used:
                continue
            if current is None:
                union = prog
            else:
                merged = make_program(current.clauses + prog.clauses)
                if max_clauses is not None and len(merged.clauses) > max_clauses:
                    continue
                union = merged
            tr = tester.test(union)
            cost = hypothesis_cost(settings, union, tr)
            if cost < current_cost - COST_EPSILON:
                step_key = _order_key(union, cost)
                if best_step is None or step_key < best_step[0]:
                    best_step = (step_key, key, union, tr, cost)
        if best_step is None:
            break
        _, key, current, current_tr, current_cost = best_step
        used.add(key)
    return current, current_tr, current_cost


# ---------------------------------------------------------------------------
# The loop
# ---------------------------------------------------------------------------


def _emit_constraints(
    settings: SearchSettings, tr: TestResult, h: Program, n_neg: int, best_mdl: float
) -> list:
    if settings.constrainer == "combo":
        return constrain_combo(tr, h)
    if settings.constrainer == "noisycombo":
        return constrain_noisycombo(tr, h, settings.noise_level, n_neg)
    return constrain_maxsynth(tr, h, best_mdl)


def _admit(settings: SearchSettings, tr: TestResult, n_neg: int) -> bool:
    """Does this hypothesis qualify for the combiner pool?"""
    if tr.tp < 1:
        return False
    if settings.constrainer == "combo":
        return tr.fp == 0
    if settings.constrainer == "noisycombo":
        return tr.fp <= settings.noise_level * n_neg
    return True


def learn(task: LearnTask, settings: SearchSettings = SearchSettings()) -> LearnResult:
    """Run generate-test-constrain-combine until an exit condition fires.

    Deterministic for fixed task and settings (time budgets aside: a run that
    terminates through `budget_seconds` may cut at a different candidate).
    Exit conditions: space exhausted; perfect fit under the combo policy; the
    description-length bound proves no future candidate can win (mdl cost);
    stall window exceeded; iteration or time budget reached.
    """
    settings.validate()
    examples = list(task.examples)
    if not examples:
        raise ValueError("cannot learn from an empty example set")
    if settings.constrainer == "maxsynth" and len(examples) < 3:
        logger.warning(
            "maxsynth cost bounds are uninformative with fewer than 3 examples; "
            "the result will simply be the best tested hypothesis"
        )
    tester = TaskTester(examples, settings)
    enumerator = HypothesisEnumerator(task.bias)
    store = ConstraintStore()

    best: Optional[tuple] = None  # (order_key, program, tr, cost)
    best_mdl = float("inf")
    promising: list = []  # (program, tr, cost)
    promising_keys = set()
    tested = 0
    since_improvement = 0
    stop_reason = "exhausted"
    deadline = None
    if settings.budget_seconds is not None:
        deadline = time.monotonic() + settings.budget_seconds

    def over_budget() -> bool:
        return deadline is not None and time.monotonic() > deadline

    def consider(prog: Program, tr: TestResult, cost: float) -> bool:
        nonlocal best, since_improvement
        key = _order_key(prog, cost)
        if best is None or key < best[0]:
            best = (key, prog, tr, cost)
            since_improvement = 0
            return True
        return False

    while True:
        if over_budget():
            stop_reason = "budget"
            break
        if settings.max_iterations is not None and tested >= settings.max_iterations:
            stop_reason = "iterations"
            break
        candidate = enumerator.generate_next(store, over_budget)
        if candidate is None:
            stop_reason = "budget" if over_budget() else "exhausted"
            break

        tr = tester.test(candidate)
        tested += 1
        since_improvement += 1
        cost = hypothesis_cost(settings, candidate, tr)
        candidate_mdl = mdl(candidate, (tr.tp, tr.fp, tr.tn, tr.fn))
        best_mdl = min(best_mdl, candidate_mdl)
        consider(candidate, tr, cost)

        for rec in _emit_constraints(settings, tr, candidate, tester.n_neg, best_mdl):
            store.add(rec)

        if _admit(settings, tr, tester.n_neg):
            key = program_key(candidate)
            if key not in promising_keys:
                promising.append((candidate, tr, cost))
                promising_keys.add(key)
                if len(promising) > settings.max_promising:
                    worst = max(promising, key=lambda item: _order_key(item[0], item[2]))
                    promising.remove(worst)
                    promising_keys.discard(program_key(worst[0]))
                union, union_tr, union_cost = combine(
                    promising, settings, tester, task.bias.max_clauses
                )
                if union is not None:
                    union_mdl = mdl(union, (union_tr.tp, union_tr.fp, union_tr.tn, union_tr.fn))
                    best_mdl = min(best_mdl, union_mdl)
                    consider(union, union_tr, union_cost)

        if best is not None:
            _, _, best_tr, best_cost = best
            if settings.constrainer == "combo" and best_tr.fp == 0 and best_tr.fn == 0:
                stop_reason = "optimal"
                break
            if settings.cost == "mdl" and best_cost <= enumerator.current_size:
                stop_reason = "bounded"
                break
        if (
            settings.stall_iterations is not None
            and since_improvement >= settings.stall_iterations
        ):
            stop_reason = "stalled"
            break

    iterations = tested + enumerator.pruned
    if best is None:
        return LearnResult(None, float("inf"), 0.5, iterations, tested, enumerator.pruned, None, stop_reason)
    _, prog, tr, cost = best
    return LearnResult(prog, cost, tr.threshold, iterations, tested, enumerator.pruned, tr, stop_reason)
