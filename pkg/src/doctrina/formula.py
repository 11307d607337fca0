"""Propositional formulas over named atoms.

Literals and clause sets defined here are the currency of the whole
package: doctrines are sets of clauses, valuations assign degrees of
belief to literals.  The module also provides a small infix parser,
truth-table evaluation, conversion of arbitrary formulas to clause
sets by plain distribution, and brute-force entailment checking.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import CapacityError, DomainMismatchError, FormulaSyntaxError

DEFAULT_CLAUSE_BUDGET = 100_000
DEFAULT_ATOM_CAP = 20


def _validate_atom(name: str) -> None:
    if not name or name.startswith("~") or any(ch.isspace() for ch in name):
        raise ValueError(f"invalid atom name: {name!r}")


@dataclass(frozen=True, slots=True, order=True)
class Literal:
    """An atom or its negation.

    Ordering is (atom, polarity) with the positive literal first, which
    fixes the canonical order used everywhere output must be stable.
    """

    atom: str
    negated: bool = False

    def __post_init__(self) -> None:
        _validate_atom(self.atom)

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.negated)

    def __str__(self) -> str:
        return f"~{self.atom}" if self.negated else self.atom

    @classmethod
    def parse(cls, token: str) -> "Literal":
        token = token.strip()
        if token.startswith("~"):
            return cls(token[1:], True)
        return cls(token)


# A clause is a set of literals read disjunctively.
Clause = frozenset


def lits(*tokens: str) -> Clause:
    """Build a clause from string tokens, e.g. lits("~p", "q")."""
    return frozenset(Literal.parse(t) for t in tokens)


@dataclass(frozen=True, slots=True)
class Lit:
    literal: Literal


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    operands: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.operands:
            raise ValueError("empty conjunction")


@dataclass(frozen=True, slots=True)
class Or:
    operands: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.operands:
            raise ValueError("empty disjunction")


@dataclass(frozen=True, slots=True)
class Implies:
    antecedent: "Formula"
    consequent: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Lit, Not, And, Or, Implies, Iff]


def lit(name: str, negated: bool = False) -> Lit:
    return Lit(Literal(name, negated))


def neg(f: Formula) -> Formula:
    """Negation; on literals it flips polarity instead of stacking a node."""
    if isinstance(f, Lit):
        return Lit(f.literal.negate())
    if isinstance(f, Not):
        return f.operand
    return Not(f)


def conj(*fs: Formula) -> Formula:
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs: Formula) -> Formula:
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


_TOKEN_RE = re.compile(r"<->|->|[~&|()]|[A-Za-z0-9_]+")
_OPERATORS = {"<->", "->", "~", "&", "|", "(", ")"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        tokens.append((m.group(), i))
        i = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], end: int):
        self.tokens = tokens
        self.pos = 0
        self.end = end

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> str | None:
        return None if self.at_end() else self.tokens[self.pos][0]

    def here(self) -> int:
        return self.end if self.at_end() else self.tokens[self.pos][1]

    def accept(self, tok: str) -> bool:
        if not self.at_end() and self.tokens[self.pos][0] == tok:
            self.pos += 1
            return True
        return False

    def expect(self, tok: str) -> None:
        if not self.accept(tok):
            raise FormulaSyntaxError(f"expected {tok!r}", self.here())

    def iff(self) -> Formula:
        left = self.imp()
        if self.accept("<->"):
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.accept("|"):
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        if self.accept("~"):
            return neg(self.unary())
        if self.accept("("):
            f = self.iff()
            self.expect(")")
            return f
        tok = self.peek()
        if tok is None or tok in _OPERATORS:
            raise FormulaSyntaxError("expected an atom, '~', or '('", self.here())
        self.pos += 1
        return Lit(Literal(tok))


def parse_formula(text: str) -> Formula:
    """Parse infix text; ~ binds tightest, then &, |, ->, <->.

    Both arrows associate to the right.  Raises FormulaSyntaxError with
    the character offset of the problem.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty formula", 0)
    parser = _Parser(tokens, len(text))
    f = parser.iff()
    if not parser.at_end():
        raise FormulaSyntaxError(f"unexpected token {parser.peek()!r}", parser.here())
    return f


def atoms(f: Formula) -> frozenset[str]:
    """All atom names occurring in the formula."""
    out: set[str] = set()
    stack: list[Formula] = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Lit):
            out.add(node.literal.atom)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif isinstance(node, (And, Or)):
            stack.extend(node.operands)
        elif isinstance(node, Implies):
            stack.append(node.antecedent)
            stack.append(node.consequent)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(out)


def evaluate(f: Formula, assignment: Mapping[str, int]) -> int:
    """Classical 0/1 evaluation under a total assignment of the atoms."""
    if isinstance(f, Lit):
        name = f.literal.atom
        if name not in assignment:
            raise DomainMismatchError(f"assignment misses atom {name!r}")
        value = 1 if assignment[name] else 0
        return 1 - value if f.literal.negated else value
    if isinstance(f, Not):
        return 1 - evaluate(f.operand, assignment)
    if isinstance(f, And):
        return int(all(evaluate(g, assignment) for g in f.operands))
    if isinstance(f, Or):
        return int(any(evaluate(g, assignment) for g in f.operands))
    if isinstance(f, Implies):
        return int(evaluate(f.antecedent, assignment) <= evaluate(f.consequent, assignment))
    return int(evaluate(f.left, assignment) == evaluate(f.right, assignment))


def is_tautological_clause(clause: Clause) -> bool:
    return any(l.negate() in clause for l in clause)


def _minimal(clauses: Iterable[Clause]) -> set[Clause]:
    # keep only clauses minimal under inclusion
    kept: list[Clause] = []
    for c in sorted(set(clauses), key=len):
        if not any(k <= c for k in kept):
            kept.append(c)
    return set(kept)


def _cross(parts: list[set[Clause]], budget: int) -> set[Clause]:
    result: set[Clause] | None = None
    for part in parts:
        if result is None:
            result = set(part)
            continue
        merged: set[Clause] = set()
        for c1 in result:
            for c2 in part:
                c = c1 | c2
                if is_tautological_clause(c):
                    continue
                merged.add(c)
                if len(merged) > budget:
                    raise CapacityError(f"clause budget {budget} exceeded during distribution")
        result = _minimal(merged)
    assert result is not None
    return result


def _cnf(f: Formula, positive: bool, budget: int) -> set[Clause]:
    if isinstance(f, Lit):
        l = f.literal if positive else f.literal.negate()
        return {frozenset((l,))}
    if isinstance(f, Not):
        return _cnf(f.operand, not positive, budget)
    if isinstance(f, (And, Or)):
        conjunctive = isinstance(f, And) == positive
        parts = [_cnf(g, positive, budget) for g in f.operands]
        if conjunctive:
            merged = set().union(*parts)
            if len(merged) > budget:
                raise CapacityError(f"clause budget {budget} exceeded during distribution")
            return _minimal(merged)
        return _cross(parts, budget)
    if isinstance(f, Implies):
        if positive:
            return _cross([_cnf(f.antecedent, False, budget), _cnf(f.consequent, True, budget)], budget)
        merged = _cnf(f.antecedent, True, budget) | _cnf(f.consequent, False, budget)
        return _minimal(merged)
    if isinstance(f, Iff):
        if positive:
            halves = _cnf(Implies(f.left, f.right), True, budget) | _cnf(Implies(f.right, f.left), True, budget)
        else:
            halves = _cross([_cnf(f.left, True, budget), _cnf(f.right, True, budget)], budget) | _cross(
                [_cnf(f.left, False, budget), _cnf(f.right, False, budget)], budget
            )
        return _minimal(halves)
    raise TypeError(f"not a formula: {f!r}")


def to_clause_set(f: Formula, *, clause_budget: int = DEFAULT_CLAUSE_BUDGET) -> frozenset[Clause]:
    """Equivalent clause set via arrow elimination, negation pushing, and
    distribution of disjunction over conjunction.

    No auxiliary atoms are introduced, so the result is over exactly the
    atoms of the input.  Tautological clauses are dropped and subsumed
    clauses absorbed along the way.  A tautology yields the empty set.
    """
    return frozenset(_minimal(_cnf(f, True, clause_budget)))


def entails(f: Formula, g: Formula, *, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    """Truth-table entailment over the combined atom set."""
    names = sorted(atoms(f) | atoms(g))
    if len(names) > atom_cap:
        raise CapacityError(f"entailment check needs {len(names)} atoms, cap is {atom_cap}")
    for bits in itertools.product((0, 1), repeat=len(names)):
        u = dict(zip(names, bits))
        if evaluate(f, u) == 1 and evaluate(g, u) == 0:
            return False
    return True
