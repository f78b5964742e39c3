import random

import pytest

from probilp.logic import (
    Atom,
    Clause,
    Var,
    alpha_equivalent,
    canonicalize,
    clause_key,
    head_connected,
    make_program,
    program_size,
    program_specializes,
    theta_subsumes,
)
from probilp.parsing import parse_program

from oracles import brute_program_specializes, brute_subsumes, random_clause, random_program

A, B, C = Var("A"), Var("B"), Var("C")


def clause(head, *body):
    return Clause(head, tuple(body))


class TestCanonicalize:
    def test_sorts_body_and_renames_by_first_occurrence(self):
        c = clause(Atom("f", (A,)), Atom("vehicle", (B,)), Atom("has_object", (A, B)))
        canon = canonicalize(c)
        assert canon == clause(
            Atom("f", (Var("V0"),)),
            Atom("has_object", (Var("V0"), Var("V1"))),
            Atom("vehicle", (Var("V1"),)),
        )

    def test_already_canonical_up_to_names(self):
        c = clause(Atom("f", (A,)), Atom("has_object", (A, B)))
        canon = canonicalize(c)
        assert canon == clause(
            Atom("f", (Var("V0"),)), Atom("has_object", (Var("V0"), Var("V1")))
        )

    def test_idempotent_on_random_clauses(self):
        rng = random.Random(1)
        for _ in range(100):
            c = random_clause(rng)
            once = canonicalize(c)
            assert canonicalize(once) == once

    def test_duplicate_literals_collapse(self):
        c = clause(Atom("f", (A,)), Atom("q", (A,)), Atom("q", (A,)))
        assert len(canonicalize(c).body) == 1

    def test_alpha_equivalence_iff_same_canonical_form(self):
        rng = random.Random(2)
        for _ in range(100):
            c = random_clause(rng)
            # rename variables arbitrarily: same class, same key
            mapping = {}

            def ren(t):
                if isinstance(t, Var):
                    return mapping.setdefault(t, Var(f"X{len(mapping)}"))
                return t

            renamed = Clause(
                Atom(c.head.pred, tuple(ren(t) for t in c.head.args)),
                tuple(Atom(a.pred, tuple(ren(t) for t in a.args)) for a in c.body),
            )
            assert clause_key(c) == clause_key(renamed)


class TestThetaSubsumes:
    def test_subset_body_subsumes(self):
        general = parse_program("f(A) :- vehicle(B).").clauses[0]
        specific = parse_program("f(A) :- vehicle(B), bridge(C).").clauses[0]
        assert theta_subsumes(general, specific)

    def test_shared_variable_blocks_subsumption(self):
        general = parse_program("f(A) :- vehicle(B), bridge(B).").clauses[0]
        specific = parse_program("f(A) :- vehicle(B), bridge(C).").clauses[0]
        assert brute_subsumes(general, specific) is False
        assert theta_subsumes(general, specific) is False

    def test_reflexive(self):
        rng = random.Random(3)
        for _ in range(50):
            c = random_clause(rng)
            assert theta_subsumes(c, c)

    def test_matches_substitution_enumeration_oracle(self):
        rng = random.Random(4)
        agree = 0
        for _ in range(300):
            c1 = random_clause(rng, max_vars=3, max_body=3)
            c2 = random_clause(rng, max_vars=3, max_body=3)
            assert theta_subsumes(c1, c2) == brute_subsumes(c1, c2)
            agree += 1
        assert agree == 300

    def test_transitive_on_random_triples(self):
        rng = random.Random(5)
        found = 0
        for _ in range(2000):
            c1 = random_clause(rng, max_vars=3, max_body=2)
            c2 = random_clause(rng, max_vars=3, max_body=3)
            c3 = random_clause(rng, max_vars=3, max_body=4)
            if theta_subsumes(c1, c2) and theta_subsumes(c2, c3):
                found += 1
                assert theta_subsumes(c1, c3)
        assert found > 0

    def test_canonicalize_preserves_subsumption(self):
        rng = random.Random(6)
        for _ in range(200):
            c1 = random_clause(rng, max_vars=3, max_body=3)
            c2 = random_clause(rng, max_vars=3, max_body=3)
            assert theta_subsumes(c1, c2) == theta_subsumes(canonicalize(c1), canonicalize(c2))


class TestProgramOrder:
    def test_extra_literal_is_specialization(self):
        h2 = parse_program("f(A) :- vehicle(B), bridge(C).")
        h1 = parse_program("f(A) :- vehicle(B).")
        assert program_specializes(h2, h1)

    def test_reflexive(self):
        h = parse_program("f(A) :- vehicle(B).")
        assert program_specializes(h, h)

    def test_unrelated_clauses(self):
        h2 = parse_program("f(A) :- vehicle(B).")
        h1 = parse_program("f(A) :- bridge(B).")
        assert brute_program_specializes(h2, h1) is False
        assert program_specializes(h2, h1) is False

    def test_dropping_a_clause_specializes(self):
        h1 = parse_program("f(A) :- vehicle(A).\nf(A) :- bridge(A).")
        h2 = parse_program("f(A) :- vehicle(A).")
        assert program_specializes(h2, h1)
        assert not program_specializes(h1, h2)

    def test_matches_oracle_on_random_programs(self):
        rng = random.Random(7)
        for _ in range(100):
            h1 = random_program(rng, max_vars=3, max_body=2)
            h2 = random_program(rng, max_vars=3, max_body=2)
            assert program_specializes(h2, h1) == brute_program_specializes(h2, h1)

    def test_specialization_implies_coverage_subset(self):
        # under binary semantics, everything a specialization entails, the
        # generalization entails too
        from probilp.infer import evaluate_binary
        from oracles import random_example

        rng = random.Random(8)
        found = 0
        for _ in range(400):
            h1 = random_program(rng, max_vars=3, max_body=3)
            h2 = random_program(rng, max_vars=3, max_body=3)
            if not program_specializes(h2, h1):
                continue
            found += 1
            for _ in range(5):
                ex = random_example(rng, binary=True)
                if evaluate_binary(h2, ex, 0.5):
                    assert evaluate_binary(h1, ex, 0.5)
        assert found > 10


class TestProgramSize:
    def test_single_clause(self):
        assert program_size(parse_program("f(A) :- has_object(A,B), vehicle(B).")) == 3

    def test_two_clause_program(self):
        h = parse_program(
            "f(A) :- has_object(A,B), vehicle(B).\n"
            "f(A) :- has_object(A,B), bridge(C), is_on(B,C)."
        )
        assert program_size(h) == 7

    def test_minimum_program_size_is_two(self):
        assert program_size(parse_program("f(A) :- vehicle(A).")) == 2


class TestProgramConstruction:
    def test_make_program_deduplicates_alpha_variants(self):
        c1 = parse_program("f(A) :- vehicle(B).").clauses[0]
        c2 = parse_program("f(X) :- vehicle(Y).").clauses[0]
        assert len(make_program([c1, c2]).clauses) == 1

    def test_mixed_heads_rejected(self):
        c1 = parse_program("f(A) :- vehicle(B).").clauses[0]
        c2 = parse_program("g(A) :- vehicle(B).").clauses[0]
        with pytest.raises(ValueError):
            make_program([c1, c2])

    def test_alpha_equivalent_programs(self):
        h1 = parse_program("f(A) :- vehicle(B), has_object(A,B).")
        h2 = parse_program("f(X) :- has_object(X,Q), vehicle(Q).")
        assert alpha_equivalent(h1, h2)


def test_head_connected():
    good = Clause(Atom("f", (A,)), (Atom("has_object", (A, B)), Atom("vehicle", (B,))))
    assert head_connected(good)
    bad = Clause(Atom("f", (A,)), (Atom("vehicle", (B,)),))
    assert not head_connected(bad)
    chained = Clause(
        Atom("f", (A,)),
        (Atom("vehicle", (C,)), Atom("is_on", (B, C)), Atom("has_object", (A, B))),
    )
    assert head_connected(chained)
