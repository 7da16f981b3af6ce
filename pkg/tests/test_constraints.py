"""CNF machinery, the bundled instance, encodings, and DIMACS round trips."""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from zenopt.constraints import (
    CardinalityConstraint,
    Clause,
    ClauseFalsified,
    CnfFormula,
    bundled_instance_path,
    cardinality_forbidden_patterns,
    count_satisfying,
    domain_wall_clauses,
    domain_wall_valid_strings,
    load_bundled_instance,
    parse_dimacs,
    planted_generator,
    read_dimacs,
    satisfies,
    substitute_bits,
    to_dimacs,
    unsatisfiable_variant,
    write_dimacs,
)
from zenopt.hilbert import SpaceSpec


def test_clause_validation():
    with pytest.raises(ValueError):
        Clause((), ())
    with pytest.raises(ValueError):
        Clause((0, 0), (False, True))
    with pytest.raises(ValueError):
        Clause((0, 1), (False,))
    with pytest.raises(ValueError):
        Clause((-1,), (False,))


def test_clause_forbidden_pattern_and_violation():
    c = Clause((0, 2), (False, True))
    assert c.forbidden_pattern() == (0, 1)
    assert c.violated_by((0, 1, 1))
    assert not c.violated_by((1, 0, 1))
    assert not c.violated_by((0, 0, 0))
    # an undefined digit on a clause variable never violates
    assert not c.violated_by((2, 0, 1))


def test_formula_validation():
    c = Clause((0, 1), (False, False))
    with pytest.raises(ValueError):
        CnfFormula(1, (c,))
    with pytest.raises(ValueError):
        CnfFormula(2, (c,), planted=(0, 0))  # violates the clause
    ok = CnfFormula(2, (c,), planted=(0, 1))
    assert ok.planted == (0, 1)


def test_satisfies_counts_undefined_as_unviolated():
    f = CnfFormula(2, (Clause((0, 1), (False, False)),))
    assert satisfies(f, (1, 0))
    assert not satisfies(f, (0, 0))
    assert satisfies(f, (2, 2))
    with pytest.raises(ValueError):
        satisfies(f, (0,))


def test_bundled_instance_shape_and_planting():
    f = load_bundled_instance()
    assert f.n_vars == 5
    assert len(f.clauses) == 45
    assert f.planted == (0, 0, 0, 0, 0)
    assert satisfies(f, f.planted)
    # every clause carries at least one negation, so all-zeros satisfies
    assert all(any(c.negated) for c in f.clauses)
    assert count_satisfying(f) == 1


def test_unsatisfiable_variant_has_no_solutions():
    v = unsatisfiable_variant()
    assert len(v.clauses) == 46
    assert v.planted is None
    assert count_satisfying(v) == 0


def test_bundled_dimacs_file_matches_compiled_instance():
    path = bundled_instance_path()
    parsed = parse_dimacs(path.read_text())
    assert parsed == load_bundled_instance()


def test_dimacs_round_trip(tmp_path):
    f = load_bundled_instance()
    text = to_dimacs(f)
    assert text.startswith("c planted 00000\np cnf 5 45\n")
    assert parse_dimacs(text) == f
    target = tmp_path / "roundtrip.cnf"
    write_dimacs(f, target)
    assert read_dimacs(target) == f


def test_parse_dimacs_rejects_malformed_input():
    with pytest.raises(ValueError):
        parse_dimacs("p cnf x 2\n1 0\n")
    with pytest.raises(ValueError):
        parse_dimacs("1 2 0\n")
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 1\n1 2\n")
    with pytest.raises(ValueError):
        parse_dimacs("c comment only\n")


def test_planted_generator_properties():
    rng = np.random.default_rng(11)
    f = planted_generator(4, rng)
    assert f.planted == (0, 0, 0, 0)
    assert count_satisfying(f) == 1
    assert all(len(c.variables) == 3 for c in f.clauses)
    assert all(any(c.negated) for c in f.clauses)
    literal_sets = [c.literals() for c in f.clauses]
    assert len(set(literal_sets)) == len(literal_sets)
    # deterministic under a fixed seed
    again = planted_generator(4, np.random.default_rng(11))
    assert again == f
    with pytest.raises(ValueError):
        planted_generator(2, rng)


def test_domain_wall_encoding():
    f = domain_wall_clauses(5)
    assert f.n_vars == 4
    assert len(f.clauses) == 3
    valid = domain_wall_valid_strings(5)
    assert len(valid) == 5
    satisfying = [
        bits for bits in product((0, 1), repeat=4) if satisfies(f, bits)
    ]
    assert sorted(satisfying) == sorted(valid)


def test_cardinality_constraint_infeasibility():
    exactly = CardinalityConstraint("exactly", 1)
    assert exactly.infeasible((1, 1, 0, 0, 0))
    assert not exactly.infeasible((1, 0, 0, 0, 0))
    assert not exactly.infeasible((0, 2, 0, 0, 0))  # undefined can become the 1
    assert exactly.infeasible((0, 0, 0, 0, 0))

    at_most_zeros = CardinalityConstraint("at_most_zeros", 2)
    assert at_most_zeros.infeasible((0, 0, 0, 1, 1))
    assert not at_most_zeros.infeasible((0, 0, 2, 2, 2))

    with pytest.raises(ValueError):
        CardinalityConstraint("at_least", 1)
    with pytest.raises(ValueError):
        CardinalityConstraint("exactly", -1)


def test_cardinality_forbidden_patterns_match_predicate():
    spec = SpaceSpec(3)
    constraint = CardinalityConstraint("exactly", 1)
    patterns = cardinality_forbidden_patterns(constraint, spec)
    assert all(constraint.infeasible(p) for p in patterns)
    expected = sum(
        constraint.infeasible(d, 2) for d in product(range(3), repeat=3)
    )
    assert len(patterns) == expected


def test_substitute_bits_reduces_and_reindexes():
    f = CnfFormula(
        3,
        (Clause((0, 1), (False, False)), Clause((1, 2), (True, False))),
    )
    reduced, kept = substitute_bits(f, {1: 0})
    assert kept == (0, 2)
    assert reduced.n_vars == 2
    # x1=0 strips x1 from the first clause and satisfies the second
    assert reduced.clauses == (Clause((0,), (False,)),)
    # x1=1 satisfies the first clause and strips not-x1 from the second,
    # leaving (x2) with variable 2 reindexed to 1
    reduced2, _ = substitute_bits(f, {1: 1})
    assert reduced2.clauses == (Clause((1,), (False,)),)
    with pytest.raises(ClauseFalsified):
        substitute_bits(f, {0: 0, 1: 0})
    with pytest.raises(ValueError):
        substitute_bits(f, {5: 0})
    with pytest.raises(ValueError):
        substitute_bits(f, {0: 2})
