"""Parsing and pretty-printing for the textual task format.

Four file kinds share one lexical layer: hypothesis programs (`head :- body.`),
probabilistic fact files (`0.7 :: vehicle(o1).` with implicit probability 1.0),
example label files (`pos(f(img1)).` / `neg(f(img1)).`) and bias declarations
(`head_pred(f,1).` etc.).  `%` starts a line comment; statements end with `.`;
encoding is UTF-8 and whitespace is insignificant.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Iterable, Optional

from .logic import (
    ALWAYS_TRUE,
    Atom,
    Bias,
    Clause,
    Const,
    Program,
    Var,
    canonicalize,
    clause_vars,
    make_program,
    make_term,
)

POSITIVE = "pos"
NEGATIVE = "neg"


class ParseError(Exception):
    """Syntax or consistency error, carrying the offending position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class ProbFact:
    """A ground atom annotated with a confidence in [0, 1]."""

    prob: float
    atom: Atom

    def __repr__(self) -> str:
        return f"{self.prob} :: {self.atom!r}"


@dataclass(frozen=True)
class ExampleRecord:
    """One labeled example together with its own fact base."""

    id: str
    label: str  # POSITIVE or NEGATIVE
    facts: tuple  # tuple[ProbFact, ...]


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<number>\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<punct>:-|::|[(),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "name" | "punct" | "end"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return self.advance()

    def at_end(self) -> bool:
        return self.peek().kind == "end"

    def fail(self, message: str) -> None:
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    def parse_atom(self) -> Atom:
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a predicate name")
        self.advance()
        self.expect("(")
        args = [self.parse_term()]
        while self.peek().text == ",":
            self.advance()
            args.append(self.parse_term())
        self.expect(")")
        return Atom(tok.text, tuple(args))

    def parse_term(self):
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a term")
        self.advance()
        return make_term(tok.text)


def _check_arity(atom: Atom, arities: dict, tok_line: int, tok_col: int) -> None:
    known = arities.get(atom.pred)
    if known is None:
        arities[atom.pred] = atom.arity
    elif known != atom.arity:
        raise ParseError(
            f"predicate {atom.pred!r} used with arity {atom.arity}, previously {known}",
            tok_line,
            tok_col,
        )


# ---------------------------------------------------------------------------
# Programs
# ---------------------------------------------------------------------------


def parse_program(text: str) -> Program:
    """Parse `head :- body.` clauses into a program in canonical form."""
    p = _Parser(text)
    clauses = []
    arities: dict = {}
    while not p.at_end():
        start = p.peek()
        head = p.parse_atom()
        _check_arity(head, arities, start.line, start.col)
        p.expect(":-")
        if p.peek().text == ".":
            p.fail("clause body may not be empty")
        body = []
        while True:
            atom_tok = p.peek()
            atom = p.parse_atom()
            if atom.pred == ALWAYS_TRUE:
                raise ParseError(
                    f"{ALWAYS_TRUE!r} is reserved for internal rewriting",
                    atom_tok.line,
                    atom_tok.col,
                )
            _check_arity(atom, arities, atom_tok.line, atom_tok.col)
            body.append(atom)
            if p.peek().text == ",":
                p.advance()
                continue
            break
        p.expect(".")
        clauses.append(canonicalize(Clause(head, tuple(body))))
    if not clauses:
        raise ParseError("no clauses found", 1, 1)
    try:
        return make_program(clauses)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc


# ---------------------------------------------------------------------------
# Facts
# ---------------------------------------------------------------------------


def parse_facts(text: str) -> list:
    """Parse `P :: atom.` / `atom.` lines into ProbFacts, in file order."""
    p = _Parser(text)
    facts = []
    arities: dict = {}
    while not p.at_end():
        tok = p.peek()
        prob = 1.0
        if tok.kind == "number":
            p.advance()
            prob = float(tok.text)
            if not 0.0 <= prob <= 1.0:
                raise ParseError(f"probability {tok.text} outside [0, 1]", tok.line, tok.col)
            p.expect("::")
        atom_tok = p.peek()
        atom = p.parse_atom()
        if atom.pred == ALWAYS_TRUE:
            raise ParseError(
                f"{ALWAYS_TRUE!r} is reserved for internal rewriting", atom_tok.line, atom_tok.col
            )
        if not atom.is_ground():
            raise ParseError(f"fact {atom!r} is not ground", atom_tok.line, atom_tok.col)
        _check_arity(atom, arities, atom_tok.line, atom_tok.col)
        p.expect(".")
        facts.append(ProbFact(prob, atom))
    return facts


# ---------------------------------------------------------------------------
# Example labels
# ---------------------------------------------------------------------------


def parse_examples(text: str) -> list:
    """Parse `pos(f(id)).` / `neg(f(id)).` lines into an ordered (id, label) list."""
    p = _Parser(text)
    out = []
    seen = set()
    while not p.at_end():
        tok = p.peek()
        if tok.kind != "name" or tok.text not in (POSITIVE, NEGATIVE):
            shown = tok.text or "end of input"
            raise ParseError(f"expected 'pos' or 'neg' wrapper, found {shown!r}", tok.line, tok.col)
        label = tok.text
        p.advance()
        p.expect("(")
        inner = p.parse_atom()
        if len(inner.args) != 1 or not isinstance(inner.args[0], Const):
            raise ParseError(
                "example atom must carry exactly one constant identifier", tok.line, tok.col
            )
        p.expect(")")
        p.expect(".")
        ex_id = inner.args[0].name
        if ex_id in seen:
            raise ParseError(f"duplicate example id {ex_id!r}", tok.line, tok.col)
        seen.add(ex_id)
        out.append((ex_id, label))
    return out


# ---------------------------------------------------------------------------
# Bias declarations
# ---------------------------------------------------------------------------

_BIAS_DEFAULTS = {"max_vars": 4, "max_body": 4, "max_clauses": 2}


def parse_bias(text: str) -> Bias:
    """Parse head_pred/body_pred/max_* declarations; missing max_* get defaults."""
    p = _Parser(text)
    head: Optional[tuple] = None
    body_preds: list = []
    limits = dict(_BIAS_DEFAULTS)
    while not p.at_end():
        tok = p.peek()
        if tok.kind != "name":
            p.fail("expected a declaration")
        name = tok.text
        p.advance()
        p.expect("(")
        if name in ("head_pred", "body_pred"):
            pred_tok = p.peek()
            if pred_tok.kind != "name":
                p.fail("expected a predicate name")
            p.advance()
            p.expect(",")
            arity_tok = p.peek()
            if arity_tok.kind != "number" or not arity_tok.text.isdigit():
                p.fail("expected an integer arity")
            p.advance()
            declared = (pred_tok.text, int(arity_tok.text))
            if name == "head_pred":
                if head is not None:
                    raise ParseError("duplicate head_pred declaration", tok.line, tok.col)
                head = declared
            else:
                body_preds.append(declared)
        elif name in _BIAS_DEFAULTS:
            num_tok = p.peek()
            if num_tok.kind != "number" or not num_tok.text.isdigit():
                p.fail("expected an integer limit")
            p.advance()
            limits[name] = int(num_tok.text)
        else:
            raise ParseError(f"unknown bias declaration {name!r}", tok.line, tok.col)
        p.expect(")")
        p.expect(".")
    if head is None:
        raise ParseError("missing head_pred declaration", 1, 1)
    if not body_preds:
        raise ParseError("no body_pred declared", 1, 1)
    bias = Bias(
        head_pred=head,
        body_preds=tuple(dict.fromkeys(body_preds)),
        max_vars=limits["max_vars"],
        max_body=limits["max_body"],
        max_clauses=limits["max_clauses"],
    )
    try:
        bias.validate()
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc
    return bias


# ---------------------------------------------------------------------------
# Pretty-printing and serialization
# ---------------------------------------------------------------------------


def _display_letter(i: int) -> str:
    return string.ascii_uppercase[i] if i < 26 else f"V{i}"


def format_clause(clause: Clause) -> str:
    """One-line rendering with variables shown as A, B, C, ... per clause."""
    names: dict = {}
    for v in clause_vars(clause):
        names[v] = _display_letter(len(names))

    def fmt(atom: Atom) -> str:
        args = ",".join(names[t] if isinstance(t, Var) else t.name for t in atom.args)
        return f"{atom.pred}({args})"

    return f"{fmt(clause.head)} :- {', '.join(fmt(a) for a in clause.body)}."


def print_program(h: Program) -> str:
    """Round-trippable text: one clause per line, parse(print(h)) is alpha-equivalent to h."""
    return "\n".join(format_clause(c) for c in h.clauses)


def format_fact(fact: ProbFact) -> str:
    atom = f"{fact.atom.pred}({','.join(t.name for t in fact.atom.args)})"
    if fact.prob == 1.0:
        return f"{atom}."
    return f"{fact.prob!r} :: {atom}."


def serialize_facts(facts: Iterable[ProbFact]) -> str:
    return "".join(format_fact(f) + "\n" for f in facts)


def serialize_examples(labeled: Iterable[tuple], head_pred: str) -> str:
    return "".join(f"{label}({head_pred}({ex_id})).\n" for ex_id, label in labeled)


def serialize_bias(bias: Bias) -> str:
    lines = [f"head_pred({bias.head_pred[0]},{bias.head_pred[1]})."]
    lines += [f"body_pred({p},{a})." for p, a in bias.body_preds]
    lines += [
        f"max_vars({bias.max_vars}).",
        f"max_body({bias.max_body}).",
        f"max_clauses({bias.max_clauses}).",
    ]
    return "".join(line + "\n" for line in lines)
