"""Clause and cardinality constraints, and their forbidden-pattern encodings.

A clause over three-valued units is violated only when every variable in its
scope holds the defined value that falsifies its literal; a unit in |u> never
falsifies anything.  Each clause therefore maps to exactly one forbidden
local pattern (0 for a positive literal, 1 for a negated one) on its scope.
Cardinality constraints are compiled to the set of full digit strings that no
assignment of the undefined units can repair.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from .hilbert import SpaceSpec


class ClauseFalsified(Exception):
    """Raised when substituting fixed bits empties a clause."""


@dataclass(frozen=True)
class Clause:
    variables: tuple
    negated: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(int(v) for v in self.variables))
        object.__setattr__(self, "negated", tuple(bool(g) for g in self.negated))
        if len(self.variables) == 0:
            raise ValueError("empty clause")
        if len(self.variables) != len(self.negated):
            raise ValueError("variables and negation flags differ in length")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"repeated variable in clause {self.variables}")
        if any(v < 0 for v in self.variables):
            raise ValueError("negative variable index")

    def forbidden_pattern(self) -> tuple:
        """Local values that violate the clause (1 under each negation)."""
        return tuple(1 if g else 0 for g in self.negated)

    def violated_by(self, digits) -> bool:
        pattern = self.forbidden_pattern()
        return all(digits[v] == p for v, p in zip(self.variables, pattern))

    def literals(self) -> frozenset:
        return frozenset(zip(self.variables, self.negated))


@dataclass(frozen=True)
class CnfFormula:
    n_vars: int
    clauses: tuple
    planted: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.n_vars < 0:
            raise ValueError("negative variable count")
        for c in self.clauses:
            if max(c.variables) >= self.n_vars:
                raise ValueError(f"clause {c.variables} exceeds n_vars={self.n_vars}")
        if self.planted is not None:
            planted = tuple(int(b) for b in self.planted)
            object.__setattr__(self, "planted", planted)
            if len(planted) != self.n_vars or any(b not in (0, 1) for b in planted):
                raise ValueError("planted assignment malformed")
            if not satisfies(self, planted):
                raise ValueError("planted assignment violates a clause")


def satisfies(formula: CnfFormula, digits) -> bool:
    """True when no clause is violated; undefined digits violate nothing."""
    digits = tuple(int(d) for d in digits)
    if len(digits) != formula.n_vars:
        raise ValueError(f"expected {formula.n_vars} digits, got {len(digits)}")
    return not any(c.violated_by(digits) for c in formula.clauses)


def substitute_bits(formula: CnfFormula, fixed: dict):
    """Fix some variables to bit values and reindex the remainder.

    Returns (reduced formula, kept) where kept[i] is the original index of
    the reduced formula's variable i.  Raises ClauseFalsified if a clause
    loses all its literals.
    """
    for v, b in fixed.items():
        if not 0 <= v < formula.n_vars:
            raise ValueError(f"fixed variable {v} out of range")
        if b not in (0, 1):
            raise ValueError(f"fixed value for variable {v} must be a bit")
    kept = tuple(v for v in range(formula.n_vars) if v not in fixed)
    new_index = {v: i for i, v in enumerate(kept)}
    reduced = []
    for c in formula.clauses:
        vs, negs = [], []
        satisfied = False
        for v, g in zip(c.variables, c.negated):
            if v in fixed:
                if (fixed[v] == 0) == g:  # literal true under the fixed bit
                    satisfied = True
                    break
            else:
                vs.append(new_index[v])
                negs.append(g)
        if satisfied:
            continue
        if not vs:
            raise ClauseFalsified(f"clause {c.variables} falsified by {fixed}")
        reduced.append(Clause(tuple(vs), tuple(negs)))
    return CnfFormula(len(kept), tuple(reduced)), kept


# the instance used by the bundled experiments: 45 clauses over 5 variables,
# unique satisfying assignment 00000
_BUNDLED_VARIABLES = (
    (2, 1, 3), (1, 3, 2), (0, 1, 2), (2, 3, 4), (4, 0, 3), (1, 0, 4),
    (3, 0, 1), (1, 4, 0), (2, 1, 0), (0, 4, 3), (4, 2, 3), (3, 1, 0),
    (1, 2, 0), (3, 2, 0), (4, 1, 3), (1, 0, 4), (3, 2, 4), (3, 2, 4),
    (1, 3, 4), (2, 4, 1), (3, 1, 2), (2, 1, 4), (4, 0, 1), (3, 4, 0),
    (2, 4, 0), (2, 4, 3), (1, 4, 2), (4, 3, 1), (2, 0, 4), (3, 0, 2),
    (4, 3, 2), (0, 2, 4), (0, 4, 2), (1, 4, 0), (4, 2, 1), (2, 3, 4),
    (0, 4, 1), (2, 0, 4), (3, 2, 1), (0, 2, 1), (0, 3, 1), (1, 4, 2),
    (0, 2, 3), (2, 1, 4), (4, 1, 0),
)
_BUNDLED_NEGATIONS = (
    (1, 1, 1), (1, 1, 1), (1, 0, 1), (1, 0, 1), (1, 1, 1), (1, 1, 1),
    (1, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1), (1, 1, 0), (1, 1, 1),
    (1, 1, 0), (1, 1, 0), (1, 0, 1), (1, 0, 1), (1, 0, 0), (1, 0, 1),
    (1, 1, 0), (1, 1, 1), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, 0, 0),
    (1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 0, 1), (1, 0, 1), (1, 1, 0),
    (1, 1, 0), (1, 1, 1), (1, 1, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1),
    (1, 1, 1), (1, 1, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1), (1, 1, 1),
    (1, 0, 0), (1, 1, 0), (1, 0, 0),
)


@lru_cache(maxsize=1)
def load_bundled_instance() -> CnfFormula:
    """The shipped 45-clause, 5-variable instance with planted 00000."""
    clauses = tuple(
        Clause(vs, tuple(bool(g) for g in negs))
        for vs, negs in zip(_BUNDLED_VARIABLES, _BUNDLED_NEGATIONS)
    )
    return CnfFormula(5, clauses, planted=(0, 0, 0, 0, 0))


def unsatisfiable_variant(formula: CnfFormula = None) -> CnfFormula:
    """Append (x0 or x1 or x2), which kills the all-zeros solution."""
    if formula is None:
        formula = load_bundled_instance()
    extra = Clause((0, 1, 2), (False, False, False))
    return CnfFormula(formula.n_vars, formula.clauses + (extra,), planted=None)


def count_satisfying(formula: CnfFormula) -> int:
    if formula.n_vars > 20:
        raise ValueError(f"exhaustive count unsupported for n_vars={formula.n_vars}")
    return sum(satisfies(formula, bits) for bits in product((0, 1), repeat=formula.n_vars))


def planted_generator(n_vars: int, rng) -> CnfFormula:
    """Random 3-SAT instance whose unique solution is all zeros.

    Clauses use three distinct variables and a uniformly random negation
    mask conditioned on at least one negation (so all-zeros always
    satisfies); duplicates up to literal order are rejected.  Clauses are
    added until exhaustive enumeration certifies uniqueness.
    """
    if n_vars < 3:
        raise ValueError("need at least three variables")
    if n_vars > 20:
        raise ValueError(f"exhaustive uniqueness check unsupported for n_vars={n_vars}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    clauses = []
    seen = set()
    while True:
        formula = CnfFormula(n_vars, tuple(clauses), planted=None)
        if clauses and count_satisfying(formula) == 1:
            return CnfFormula(n_vars, tuple(clauses), planted=(0,) * n_vars)
        vs = tuple(int(v) for v in rng.choice(n_vars, size=3, replace=False))
        negs = (False, False, False)
        while not any(negs):
            negs = tuple(bool(b) for b in rng.integers(0, 2, size=3))
        clause = Clause(vs, negs)
        if clause.literals() in seen:
            continue
        seen.add(clause.literals())
        clauses.append(clause)


def domain_wall_clauses(m_states: int) -> CnfFormula:
    """Sorted-ones encoding of an m_states-valued variable on m_states-1 bits.

    Two-literal clauses (x_j or not x_{j+1}) forbid a 01 step, leaving the
    m_states strings whose ones form a prefix.
    """
    if m_states < 2:
        raise ValueError("need at least two states")
    clauses = tuple(
        Clause((j, j + 1), (False, True)) for j in range(m_states - 2)
    )
    return CnfFormula(m_states - 1, clauses, planted=None)


def domain_wall_valid_strings(m_states: int):
    """The ones-prefix bit strings accepted by domain_wall_clauses."""
    n = m_states - 1
    return [tuple(1 if j < k else 0 for j in range(n)) for k in range(m_states)]


@dataclass(frozen=True)
class CardinalityConstraint:
    """Count constraint on defined bit values over the whole chain.

    kind is one of 'exactly', 'at_most_ones', 'at_most_zeros'; bound is the
    count k it refers to.
    """

    kind: str
    bound: int

    def __post_init__(self):
        if self.kind not in ("exactly", "at_most_ones", "at_most_zeros"):
            raise ValueError(f"unknown cardinality kind {self.kind!r}")
        if self.bound < 0:
            raise ValueError("negative bound")

    def infeasible(self, digits, undefined_level: int = 2) -> bool:
        """True when no completion of the undefined digits can satisfy it."""
        ones = sum(1 for d in digits if d == 1)
        zeros = sum(1 for d in digits if d == 0)
        undef = sum(1 for d in digits if d == undefined_level)
        if self.kind == "exactly":
            return ones > self.bound or ones + undef < self.bound
        if self.kind == "at_most_ones":
            return ones > self.bound
        return zeros > self.bound


def cardinality_forbidden_patterns(constraint: CardinalityConstraint, spec: SpaceSpec):
    """All full digit strings the constraint can never be repaired on."""
    out = []
    for digits in product(range(spec.local_dim), repeat=spec.n_units):
        if constraint.infeasible(digits, spec.undefined_level):
            out.append(digits)
    return out


def to_dimacs(formula: CnfFormula) -> str:
    """Standard DIMACS text; the planted assignment rides along as a comment."""
    lines = []
    if formula.planted is not None:
        lines.append("c planted " + "".join(str(b) for b in formula.planted))
    lines.append(f"p cnf {formula.n_vars} {len(formula.clauses)}")
    for c in formula.clauses:
        lits = [-(v + 1) if g else v + 1 for v, g in zip(c.variables, c.negated)]
        lines.append(" ".join(str(x) for x in lits) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    n_vars = None
    planted = None
    clauses = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 3 and parts[1] == "planted":
                planted = tuple(int(ch) for ch in parts[2])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            n_vars = int(parts[2])
            continue
        if n_vars is None:
            raise ValueError("clause before problem line")
        lits = [int(x) for x in line.split()]
        if lits[-1] != 0:
            raise ValueError(f"clause line not zero-terminated: {line!r}")
        lits = lits[:-1]
        clauses.append(
            Clause(tuple(abs(x) - 1 for x in lits), tuple(x < 0 for x in lits))
        )
    if n_vars is None:
        raise ValueError("missing problem line")
    return CnfFormula(n_vars, tuple(clauses), planted=planted)


def write_dimacs(formula: CnfFormula, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_dimacs(formula))


def read_dimacs(path) -> CnfFormula:
    with open(path) as fh:
        return parse_dimacs(fh.read())


def bundled_instance_path():
    """Path of the shipped DIMACS copy of the bundled instance."""
    return importlib.resources.files("zenopt").joinpath("data/bundled_3sat.cnf")
