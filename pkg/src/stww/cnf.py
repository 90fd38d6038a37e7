"""Weighted CNF formulas: DIMACS parsing, assignment weights, satisfaction."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

# An assignment is a total map variable -> {0, 1}.
Assignment = Mapping[int, int]

_ONE = Fraction(1)


class ParseError(ValueError):
    """Malformed input, with the offending 1-based line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class FormulaWarning(UserWarning):
    """Non-fatal input normalization, e.g. a dropped tautological clause."""


def _literal_key(lit: int) -> tuple[int, bool]:
    return (abs(lit), lit < 0)


def _clause_key(clause: frozenset[int]) -> tuple[tuple[int, bool], ...]:
    return tuple(_literal_key(lit) for lit in sorted(clause, key=_literal_key))


@dataclass(frozen=True)
class Formula:
    """A CNF formula over variables 1..num_vars.

    Clauses are frozensets of nonzero literals: the literal v stands for the
    variable v, -v for its negation.  Enforced invariants: every literal's
    variable lies in [1, num_vars], no clause contains a complementary pair,
    and no two clauses are equal as literal sets.  Variables occurring in no
    clause are allowed.
    """

    num_vars: int
    clauses: tuple[frozenset[int], ...] = ()
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(frozenset(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        seen: set[frozenset[int]] = set()
        for idx, clause in enumerate(self.clauses):
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {idx}: literal {lit!r} out of range")
                if -lit in clause:
                    raise ValueError(
                        f"clause {idx}: complementary pair on variable {abs(lit)}"
                    )
            if clause in seen:
                raise ValueError(f"clause {idx}: duplicate clause")
            seen.add(clause)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def variables(self) -> range:
        return range(1, self.num_vars + 1)

    def normalized(self) -> Formula:
        """Copy with clauses in canonical order (sorted literal tuples)."""
        return Formula(self.num_vars, tuple(sorted(self.clauses, key=_clause_key)), self.name)


class WeightFunction:
    """Exact rational weight per literal, defaulting to 1.

    of(v) weighs the variable v being assigned 1, of(-v) weighs it being
    assigned 0.  Values may be zero or negative.
    """

    __slots__ = ("_by_literal",)

    def __init__(self, weights: Mapping[int, Fraction | int | str] | None = None) -> None:
        table: dict[int, Fraction] = {}
        for lit, value in (weights or {}).items():
            lit = int(lit)
            if lit == 0:
                raise ValueError("0 is not a literal")
            table[lit] = Fraction(value)
        self._by_literal = table

    @classmethod
    def unit(cls) -> WeightFunction:
        return cls()

    def of(self, literal: int) -> Fraction:
        return self._by_literal.get(literal, _ONE)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        """Explicitly set (literal, weight) pairs in canonical order."""
        return iter(sorted(self._by_literal.items(), key=lambda kv: _literal_key(kv[0])))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightFunction):
            return NotImplemented
        keys = set(self._by_literal) | set(other._by_literal)
        return all(self.of(key) == other.of(key) for key in keys)

    def __repr__(self) -> str:
        body = ", ".join(f"{lit}: {w}" for lit, w in self.items())
        return f"WeightFunction({{{body}}})"


def ones(assignment: Assignment) -> int:
    """Number of variables the assignment sets to 1."""
    return sum(1 for value in assignment.values() if value)


def assignment_weight(
    formula: Formula, weights: WeightFunction, assignment: Assignment
) -> Fraction:
    """Product of the selected literal weights over all variables."""
    total = _ONE
    for v in formula.variables():
        total *= weights.of(v if assignment[v] else -v)
    return total


def satisfies(formula: Formula, assignment: Assignment) -> bool:
    """True iff every clause contains a literal the assignment makes true."""
    for clause in formula.clauses:
        for lit in clause:
            if (lit > 0) == bool(assignment[abs(lit)]):
                break
        else:
            return False
    return True


def parse_dimacs(text: str | bytes, name: str | None = None) -> tuple[Formula, WeightFunction]:
    """Parse a DIMACS CNF file, with optional ``c p weight <lit> <w> 0`` lines.

    Tautological clauses are dropped and duplicate clauses merged, each with a
    FormulaWarning.  Weights absent from the file default to 1; the weight
    token may be an integer, a fraction like ``2/3``, or a decimal string.

    Returns:
        (formula, weights)

    Raises:
        ParseError: on a malformed header, a bad token, a literal out of
            range, or a clause missing its 0 terminator.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    num_vars: int | None = None
    declared_clauses = 0
    weight_entries: list[tuple[int, Fraction, int]] = []
    raw_clauses: list[tuple[frozenset[int], int]] = []
    pending: list[int] = []
    pending_line = 0
    lineno = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "%":
            # SATLIB-style end marker; ignore anything after it.
            break
        if line.startswith("c"):
            fields = line.split()
            if fields[:3] == ["c", "p", "weight"]:
                if len(fields) != 6 or fields[5] != "0":
                    raise ParseError("expected 'c p weight <lit> <weight> 0'", lineno)
                try:
                    lit = int(fields[3])
                    value = Fraction(fields[4])
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad weight line: {exc}", lineno) from None
                if lit == 0:
                    raise ParseError("weight for literal 0", lineno)
                weight_entries.append((lit, value, lineno))
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError("expected header 'p cnf <vars> <clauses>'", lineno)
            try:
                num_vars = int(fields[2])
                declared_clauses = int(fields[3])
            except ValueError:
                raise ParseError("non-integer counts in header", lineno) from None
            if num_vars < 0 or declared_clauses < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if num_vars is None:
            raise ParseError("clause data before 'p cnf' header", lineno)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError(f"bad token {token!r}", lineno) from None
            if lit == 0:
                raw_clauses.append((frozenset(pending), pending_line or lineno))
                pending = []
                pending_line = 0
            else:
                if abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} out of range", lineno)
                if not pending:
                    pending_line = lineno
                pending.append(lit)

    if num_vars is None:
        raise ParseError("missing 'p cnf' header", max(lineno, 1))
    if pending:
        raise ParseError("clause not terminated by 0", pending_line)
    if len(raw_clauses) != declared_clauses:
        warnings.warn(
            f"header declares {declared_clauses} clauses, file has {len(raw_clauses)}",
            FormulaWarning,
            stacklevel=2,
        )

    clauses: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for clause, line in raw_clauses:
        if any(-lit in clause for lit in clause):
            warnings.warn(
                f"line {line}: tautological clause dropped", FormulaWarning, stacklevel=2
            )
            continue
        if clause in seen:
            warnings.warn(
                f"line {line}: duplicate clause dropped", FormulaWarning, stacklevel=2
            )
            continue
        seen.add(clause)
        clauses.append(clause)

    table: dict[int, Fraction] = {}
    for lit, value, line in weight_entries:
        if abs(lit) > num_vars:
            raise ParseError(f"weight for literal {lit} out of range", line)
        table[lit] = value

    return Formula(num_vars, tuple(clauses), name), WeightFunction(table)


def serialize_dimacs(formula: Formula, weights: WeightFunction | None = None) -> str:
    """Render a formula (and optional weights) as DIMACS text."""
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    if weights is not None:
        for lit, value in weights.items():
            lines.append(f"c p weight {lit} {value} 0")
    for clause in formula.clauses:
        lits = sorted(clause, key=_literal_key)
        lines.append(" ".join(str(lit) for lit in lits) + " 0")
    return "\n".join(lines) + "\n"
