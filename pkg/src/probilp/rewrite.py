"""Normalizes a multi-clause program so every clause ranges over one shared argument set.

Multi-clause programs read as a disjunction, but each clause may use its own
variables.  The normalization unifies the per-clause variable sets by appending
an `always_true(X)` padding literal for every unified variable a clause does not
mention.  Padding literals are virtual: they hold with probability exactly 1.0
for every constant and are never recorded in proofs, so the normalized program
evaluates to the same probability as the source program.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .logic import ALWAYS_TRUE, Atom, Clause, Program, Var, atom_vars, clause_vars


@dataclass(frozen=True)
class NormalizedProgram:
    """Disjunction of same-signature clauses, plus the program it came from."""

    unified_vars: tuple  # tuple[Var, ...]
    clauses: tuple  # tuple[Clause, ...]: heads <alias>0..<alias>n over unified_vars
    source: Program
    alias: str = "g"


def bodies(h: Program) -> list:
    """Per-clause body literal lists, clause order preserved."""
    return [list(c.body) for c in h.clauses]


def var_sets(h: Program) -> list:
    """Per-clause variable sets (head and body), clause order preserved."""
    return [set(clause_vars(c)) for c in h.clauses]


def unified_variables(h: Program) -> tuple:
    """Union of all clause variable sets.

    Ordered rarest-first: ascending number of clauses a variable occurs in,
    ties broken by first textual appearance.  Clause-specific variables (the
    ones that will need padding elsewhere) therefore come before the shared
    ones.  Any fixed order is evaluation-equivalent.
    """
    counts: dict = {}
    first_idx: dict = {}
    idx = 0
    for clause in h.clauses:
        for v in clause_vars(clause):
            counts[v] = counts.get(v, 0) + 1
            if v not in first_idx:
                first_idx[v] = idx
            idx += 1
    return tuple(sorted(counts, key=lambda v: (counts[v], first_idx[v])))


def extend(body: Sequence[Atom], target_vars: Sequence[Var]) -> tuple:
    """Pad a body with one always_true(X) literal per target variable it lacks.

    Original literal order is preserved; padding is appended in target order.
    """
    used = set()
    for atom in body:
        used.update(atom_vars(atom))
    if not used.issubset(set(target_vars)):
        stray = sorted(v.name for v in used - set(target_vars))
        raise ValueError(f"body mentions variables outside the target set: {', '.join(stray)}")
    padding = tuple(Atom(ALWAYS_TRUE, (v,)) for v in target_vars if v not in used)
    return tuple(body) + padding


def normalize(h: Program, alias: str = "g") -> NormalizedProgram:
    """Rewrite h so all clauses share the unified variable set.

    Clause count is preserved; each clause keeps its body and gains padding for
    the unified variables it mentions neither in its body nor its head.
    """
    unified = unified_variables(h)
    out = []
    for i, clause in enumerate(h.clauses):
        mentioned = set(clause_vars(clause))
        missing = [v for v in unified if v not in mentioned]
        extended = tuple(clause.body) + tuple(Atom(ALWAYS_TRUE, (v,)) for v in missing)
        out.append(Clause(Atom(f"{alias}{i}", unified), extended))
    return NormalizedProgram(unified, tuple(out), h, alias)


def render_normalized(norm: NormalizedProgram) -> str:
    """Readable form of the rewrite: one line per clause and a final disjunction."""

    def fmt(atom: Atom) -> str:
        return f"{atom.pred}({', '.join(t.name for t in atom.args)})"

    head_args = ", ".join(v.name for v in norm.unified_vars)
    lines = [
        f"{clause.head.pred}({head_args}) = {', '.join(fmt(a) for a in clause.body)}"
        for clause in norm.clauses
    ]
    disjuncts = " or ".join(f"{c.head.pred}({head_args})" for c in norm.clauses)
    lines.append(f"{norm.alias}({head_args}) = {disjuncts}")
    return "\n".join(lines)
