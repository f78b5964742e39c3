"""Probabilistic proof enumeration over one example's confidence-weighted facts.

A hypothesis is grounded against the example's fact base; each satisfying
substitution yields a proof, identified by the set of ground facts it uses
(a fact used twice counts once).  Proofs with identical fact sets are merged,
the survivors are ranked by probability, truncated to the top k, and combined
with the disjunction operator of the chosen provenance:

    AND(x, y) = x * y          OR_basic(x, y) = min(1, x + y)
    NOT(x)    = 1 - x          OR_noisy(x, y) = 1 - (1 - x) * (1 - y)

Padding literals (`always_true`) hold for every constant with probability
exactly 1.0 and never enter a proof's fact set, which keeps the rewrite pass
evaluation-neutral.  The grounding domain is closed per example: constants are
the ones appearing in its fact file, and absent facts have probability 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .logic import ALWAYS_TRUE, Atom, Clause, Const, Program
from .parsing import ExampleRecord, ProbFact
from .rewrite import normalize


@dataclass(frozen=True)
class InferenceConfig:
    """Top-k truncation bound (None = unlimited) and disjunction flavor."""

    top_k: Optional[int] = 3
    provenance: str = "basic"  # "basic" | "noisy_or"

    def validate(self) -> None:
        if self.top_k is not None and self.top_k < 1:
            raise ValueError("top_k must be >= 1 or None")
        if self.provenance not in ("basic", "noisy_or"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class Proof:
    """One way of satisfying a clause body: the ground facts used and their product."""

    facts: frozenset  # frozenset[Atom]
    prob: float


def prob_and(xs: Iterable[float]) -> float:
    """Conjunction: product of the inputs; empty conjunction is true (1.0)."""
    out = 1.0
    for x in xs:
        out *= x
    return out


def prob_or(xs: Iterable[float], provenance: str = "basic") -> float:
    """Disjunction: clipped sum (basic) or complement product (noisy_or); empty is 0.0."""
    xs = list(xs)
    if provenance == "noisy_or":
        return 1.0 - prob_and(1.0 - x for x in xs)
    return min(1.0, math.fsum(xs))


def prob_not(x: float) -> float:
    return 1.0 - x


class FactIndex:
    """Per-example lookup structures: facts by predicate, probabilities by atom."""

    def __init__(self, facts: Iterable[ProbFact]):
        probs: dict = {}
        for f in facts:
            # Re-stated atoms overwrite earlier entries (file order wins).
            probs[f.atom] = f.prob
        self.prob = {a: p for a, p in probs.items() if p > 0.0}
        self.by_pred: dict = {}
        for atom in self.prob:
            self.by_pred.setdefault(atom.pred, []).append(atom)
        for atoms in self.by_pred.values():
            atoms.sort(key=lambda a: tuple(t.name for t in a.args))
        consts = set()
        for atom in self.prob:
            consts.update(t.name for t in atom.args)
        self.constants = tuple(sorted(consts))


def _candidates(index: FactIndex, literal: Atom, theta: dict) -> list:
    out = []
    for fact in index.by_pred.get(literal.pred, ()):
        if fact.arity != literal.arity:
            continue
        binding = {}
        ok = True
        for want, got in zip(literal.args, fact.args):
            if isinstance(want, Const):
                if want != got:
                    ok = False
                    break
            else:
                bound = theta.get(want, binding.get(want))
                if bound is None:
                    binding[want] = got
                elif bound != got:
                    ok = False
                    break
        if ok:
            out.append((fact, binding))
    return out


def _boundness(literal: Atom, theta: dict) -> int:
    return sum(1 for t in literal.args if isinstance(t, Const) or t in theta)


def clause_proof_sets(index: FactIndex, body: Iterable[Atom], binding: dict, first_only: bool = False):
    """Fact sets of all proofs of `body` under an initial binding.

    Literals are matched most-bound-first; padding literals are satisfied
    unconditionally and contribute no facts.
    """
    literals = [a for a in body if a.pred != ALWAYS_TRUE]
    results = set()

    def search(remaining: list, theta: dict, used: frozenset) -> bool:
        if not remaining:
            results.add(used)
            return first_only
        lit = max(remaining, key=lambda a: _boundness(a, theta))
        rest = [a for a in remaining if a is not lit]
        for fact, extra in _candidates(index, lit, theta):
            if search(rest, {**theta, **extra}, used | {fact}):
                return True
        return False

    search(literals, dict(binding), frozenset())
    return results


def _query_binding(clause: Clause, entity: Const) -> Optional[dict]:
    """Bind the clause's head argument to the queried entity; None if impossible."""
    if clause.head.arity != 1:
        raise ValueError("queries bind a single head argument; head arity must be 1")
    arg = clause.head.args[0]
    if isinstance(arg, Const):
        return {} if arg == entity else None
    return {arg: entity}


def enumerate_proofs(clause: Clause, ex: ExampleRecord, query_binding: Const) -> list:
    """All proofs of one clause for the example entity, best probability first."""
    index = FactIndex(ex.facts)
    theta = _query_binding(clause, query_binding)
    if theta is None:
        return []
    proofs = []
    for fact_set in clause_proof_sets(index, clause.body, theta):
        prob = prob_and(index.prob[a] for a in fact_set)
        proofs.append(Proof(fact_set, prob))
    proofs.sort(key=lambda p: (-p.prob, sorted(repr(a) for a in p.facts)))
    return proofs


def combine_proof_probs(probs: Iterable[float], cfg: InferenceConfig) -> float:
    """Rank descending, truncate to the top k, then apply the disjunction."""
    ranked = sorted(probs, reverse=True)
    if cfg.top_k is not None:
        ranked = ranked[: cfg.top_k]
    return prob_or(ranked, cfg.provenance)


def evaluate(h: Program, ex: ExampleRecord, cfg: InferenceConfig = InferenceConfig()) -> float:
    """Confidence that the example entity satisfies the program.

    The program is normalized first; proofs are collected per clause, merged by
    fact set across clauses, and combined under top-k truncation.  No proofs
    means 0.0.
    """
    cfg.validate()
    index = FactIndex(ex.facts)
    entity = Const(ex.id)
    norm = normalize(h)
    fact_sets = set()
    for source_clause, norm_clause in zip(h.clauses, norm.clauses):
        theta = _query_binding(source_clause, entity)
        if theta is None:
            continue
        fact_sets |= clause_proof_sets(index, norm_clause.body, theta)
    if not fact_sets:
        return 0.0
    probs = [prob_and(index.prob[a] for a in fs) for fs in fact_sets]
    return combine_proof_probs(probs, cfg)


def evaluate_binary(h: Program, ex: ExampleRecord, bk_threshold: float = 0.5) -> bool:
    """Classical entailment after thresholding: facts with prob >= bk_threshold
    become true, the rest are discarded."""
    if not 0.0 <= bk_threshold <= 1.0:
        raise ValueError("bk_threshold must lie in [0, 1]")
    kept = [ProbFact(1.0, f.atom) for f in ex.facts if f.prob >= bk_threshold]
    index = FactIndex(kept)
    entity = Const(ex.id)
    for clause in h.clauses:
        theta = _query_binding(clause, entity)
        if theta is None:
            continue
        if clause_proof_sets(index, clause.body, theta, first_only=True):
            return True
    return False
