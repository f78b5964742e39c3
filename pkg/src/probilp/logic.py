"""Terms, atoms, clauses and hypothesis programs, plus the generality order used for pruning.

Variables are uppercase-initial symbols and constants lowercase-initial, mirroring
the surface syntax of the task files.  Clauses are definite: one head atom over a
conjunction of positive body atoms.  A hypothesis program is a set of clauses with
a common head predicate; programs are compared and deduplicated through canonical
forms, and ordered by theta-subsumption lifted pointwise to clause sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Optional, Sequence, Union

# Reserved padding predicate inserted by the rewrite pass.  User programs and
# fact files may not declare it.
ALWAYS_TRUE = "always_true"


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __repr__(self) -> str:
        return self.name


Term = Union[Var, Const]


def make_term(name: str) -> Term:
    """Uppercase-initial names are variables, anything else is a constant."""
    return Var(name) if name[:1].isupper() else Const(name)


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple

    def __repr__(self) -> str:
        return f"{self.pred}({','.join(repr(a) for a in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return all(isinstance(t, Const) for t in self.args)


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple  # tuple[Atom, ...], non-empty

    def __repr__(self) -> str:
        return f"{self.head!r} :- {', '.join(repr(a) for a in self.body)}"


@dataclass(frozen=True)
class Program:
    """A set of clauses sharing one head predicate.

    Clauses are kept in construction order (the rewrite pass and pretty-printer
    preserve it); identity and deduplication go through `program_key`.
    """

    clauses: tuple  # tuple[Clause, ...]

    def __repr__(self) -> str:
        return "; ".join(repr(c) for c in self.clauses)


@dataclass(frozen=True)
class Bias:
    """Search-space declaration: head predicate, body vocabulary and size caps."""

    head_pred: tuple  # (name, arity)
    body_preds: tuple  # tuple[(name, arity), ...]
    max_vars: int = 4
    max_body: int = 4
    max_clauses: int = 2

    def validate(self) -> None:
        name, arity = self.head_pred
        if arity < 1:
            raise ValueError("head predicate arity must be >= 1")
        if not self.body_preds:
            raise ValueError("at least one body predicate is required")
        if any(a < 1 for _, a in self.body_preds):
            raise ValueError("body predicate arities must be >= 1")
        if any(p == name for p, _ in self.body_preds):
            raise ValueError(f"head predicate {name!r} may not appear among body predicates")
        if min(self.max_vars, self.max_body, self.max_clauses) < 1:
            raise ValueError("bias limits must be >= 1")


def atom_vars(atom: Atom) -> Iterator[Var]:
    for t in atom.args:
        if isinstance(t, Var):
            yield t


def clause_vars(clause: Clause) -> list:
    """All variables of a clause, head first, in first-occurrence order."""
    seen: dict = {}
    for atom in (clause.head, *clause.body):
        for v in atom_vars(atom):
            seen.setdefault(v, None)
    return list(seen)


def head_connected(clause: Clause) -> bool:
    """True when every body atom reaches a head variable via shared-variable chains."""
    linked = set(atom_vars(clause.head))
    pending = list(clause.body)
    while pending:
        hooked = [a for a in pending if any(v in linked for v in atom_vars(a))]
        if not hooked:
            return False
        for a in hooked:
            linked.update(atom_vars(a))
            pending.remove(a)
    return True


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------
#
# The canonical form renames variables to V0, V1, ... by first occurrence and
# picks the body ordering with the least signature.  Atoms are grouped by
# predicate name (the least signature is always predicate-sorted), so only
# permutations within same-predicate groups need to be tried.  Two clauses are
# alpha-equivalent exactly when their canonical forms are identical.


def _signature(head: Atom, body: Sequence[Atom]) -> tuple:
    codes: dict = {}

    def code(t: Term):
        if isinstance(t, Const):
            return ("c", t.name)
        if t not in codes:
            codes[t] = len(codes)
        return ("v", codes[t])

    return tuple((a.pred, tuple(code(t) for t in a.args)) for a in (head, *body))


def _group_orderings(body: Sequence[Atom]) -> Iterator[tuple]:
    groups: dict = {}
    for a in body:
        groups.setdefault(a.pred, []).append(a)
    pools = [permutations(groups[p]) for p in sorted(groups)]
    for combo in product(*pools):
        yield tuple(a for grp in combo for a in grp)


@lru_cache(maxsize=None)
def canonicalize(clause: Clause) -> Clause:
    """Canonical variant of a clause: deduplicated body, least ordering, V0/V1/... names."""
    body = tuple(dict.fromkeys(clause.body))
    best_sig = None
    best_body: Optional[tuple] = None
    for ordering in _group_orderings(body):
        sig = _signature(clause.head, ordering)
        if best_sig is None or sig < best_sig:
            best_sig, best_body = sig, ordering
    names: dict = {}

    def rename(t: Term) -> Term:
        if isinstance(t, Const):
            return t
        if t not in names:
            names[t] = Var(f"V{len(names)}")
        return names[t]

    def rebuild(a: Atom) -> Atom:
        return Atom(a.pred, tuple(rename(t) for t in a.args))

    return Clause(rebuild(clause.head), tuple(rebuild(a) for a in best_body))


@lru_cache(maxsize=None)
def clause_key(clause: Clause) -> tuple:
    """Hashable identity of a clause's alpha-equivalence class."""
    c = canonicalize(clause)
    return _signature(c.head, c.body)


def make_program(clauses: Iterable[Clause]) -> Program:
    """Build a program, dropping alpha-equivalent duplicates, preserving order."""
    out: list = []
    seen = set()
    head_sig = None
    for c in clauses:
        if not c.body:
            raise ValueError("clauses must have a non-empty body")
        sig = (c.head.pred, c.head.arity)
        if head_sig is None:
            head_sig = sig
        elif sig != head_sig:
            raise ValueError(f"all clauses must share the head predicate, got {sig} vs {head_sig}")
        k = clause_key(c)
        if k not in seen:
            seen.add(k)
            out.append(c)
    if not out:
        raise ValueError("a program needs at least one clause")
    return Program(tuple(out))


def program_key(h: Program) -> tuple:
    return tuple(sorted(clause_key(c) for c in h.clauses))


def alpha_equivalent(h1: Program, h2: Program) -> bool:
    return program_key(h1) == program_key(h2)


def program_size(h: Program) -> int:
    """Total literal count: heads plus body atoms."""
    return sum(1 + len(c.body) for c in h.clauses)


# ---------------------------------------------------------------------------
# Theta-subsumption
# ---------------------------------------------------------------------------


def _bind(gen_args: tuple, spec_args: tuple, theta: dict) -> Optional[dict]:
    theta = dict(theta)
    for g, s in zip(gen_args, spec_args):
        if isinstance(g, Const):
            if g != s:
                return None
        else:
            bound = theta.get(g)
            if bound is None:
                theta[g] = s
            elif bound != s:
                return None
    return theta


def _cover(gen_body: tuple, spec_body: tuple, theta: dict) -> bool:
    if not gen_body:
        return True
    first, rest = gen_body[0], gen_body[1:]
    for atom in spec_body:
        if atom.pred != first.pred or atom.arity != first.arity:
            continue
        extended = _bind(first.args, atom.args, theta)
        if extended is not None and _cover(rest, spec_body, extended):
            return True
    return False


def theta_subsumes(general: Clause, specific: Clause) -> bool:
    """True when a substitution maps general's head onto specific's head and its
    body into specific's body (set inclusion after substitution)."""
    gh, sh = general.head, specific.head
    if gh.pred != sh.pred or gh.arity != sh.arity:
        return False
    theta = _bind(gh.args, sh.args, {})
    if theta is None:
        return False
    gen_body = tuple(dict.fromkeys(general.body))
    return _cover(gen_body, specific.body, theta)


def program_specializes(h2: Program, h1: Program) -> bool:
    """True when h2 is a specialization of h1: every clause of h2 is
    theta-subsumed by some clause of h1.  Adding body literals specializes,
    adding clauses generalizes."""
    return all(any(theta_subsumes(c1, c2) for c1 in h1.clauses) for c2 in h2.clauses)
