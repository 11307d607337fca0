"""Clause-set doctrines and their structural analysis.

A doctrine is a satisfiable set of clauses over a finite universe of
atoms, kept in a normal form with no unit clauses: entailed units are
recorded as fixed truth values instead, and the excluded-middle clauses
(one per atom) are represented by a flag rather than materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import (
    CapacityError,
    DomainMismatchError,
    PreconditionError,
    UnsatisfiableError,
)
from .formula import DEFAULT_CLAUSE_BUDGET, Clause, Literal, is_tautological_clause

DEFAULT_ENUMERATION_CAP = 20


def literal_key(l: Literal) -> tuple[str, bool]:
    return (l.atom, l.negated)


def clause_key(clause: Clause) -> tuple:
    """Canonical clause order: by size, then lexicographic literals."""
    return (len(clause), tuple(sorted(literal_key(l) for l in clause)))


def clause_satisfied(clause: Clause, assignment: Mapping[str, int]) -> bool:
    for l in clause:
        value = assignment[l.atom]
        if (value == 0) if l.negated else (value == 1):
            return True
    return False


class HornClass(Enum):
    DEFINITE = "definite"
    SIMPLE = "simple"
    NONE = "none"


class UnquestionableStatus(Enum):
    YES = "yes"
    WHEN_ACCEPTED = "when_accepted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Doctrine:
    """A normalized clause set over a universe of atoms.

    proper_clauses hold the constraints; the excluded-middle clause of
    every universe atom is implied by includes_tnd and never stored.
    fixed records truth values forced during normalization; fixed atoms
    are no longer part of the universe.  is_blake marks a clause set
    certified to consist of all prime implicates; it does not take part
    in equality.
    """

    universe: frozenset[str]
    proper_clauses: frozenset[Clause]
    includes_tnd: bool = True
    fixed: Mapping[str, int] = field(default_factory=dict)
    is_blake: bool = field(default=False, compare=False)

    def literals(self) -> list[Literal]:
        """Both polarities of every universe atom, in canonical order."""
        out = []
        for a in sorted(self.universe):
            out.append(Literal(a))
            out.append(Literal(a, True))
        return out

    def sorted_clauses(self) -> list[Clause]:
        return sorted(self.proper_clauses, key=clause_key)


def _propagate_units(work: set[Clause], fixed: dict[str, int]) -> set[Clause]:
    """Unit propagation to a fixpoint; updates fixed in place."""
    while True:
        units = [c for c in work if len(c) == 1]
        if not units:
            return work
        for u in sorted(units, key=clause_key):
            (l,) = tuple(u)
            value = 0 if l.negated else 1
            if fixed.setdefault(l.atom, value) != value:
                raise UnsatisfiableError(f"contradictory unit clauses on atom {l.atom!r}")
        satisfied = {Literal(a, negated=(v == 0)) for a, v in fixed.items()}
        falsified = {l.negate() for l in satisfied}
        reduced: set[Clause] = set()
        for c in work:
            if c & satisfied:
                continue
            c = c - falsified
            if not c:
                raise UnsatisfiableError("unit propagation derived the empty clause")
            reduced.add(c)
        work = reduced


def _clause_falsified(clause: Clause, assignment: dict[str, int]) -> bool:
    for l in clause:
        value = assignment.get(l.atom)
        if value is None:
            return False
        if (value == 0) if l.negated else (value == 1):
            return False
    return True


def _search_satisfiable(clauses: Iterable[Clause], names: list[str]) -> bool:
    clause_list = list(clauses)
    assignment: dict[str, int] = {}

    def dfs(i: int) -> bool:
        if i == len(names):
            return True
        name = names[i]
        for value in (1, 0):
            assignment[name] = value
            if not any(_clause_falsified(c, assignment) for c in clause_list):
                if dfs(i + 1):
                    return True
        del assignment[name]
        return False

    return dfs(0)


def _certify_satisfiable(
    clauses: set[Clause],
    *,
    witness: Mapping[str, int] | None,
    enumeration_cap: int,
) -> None:
    if not clauses:
        return
    names = sorted({l.atom for c in clauses for l in c})
    if witness is not None:
        missing = [a for a in names if a not in witness]
        if missing:
            raise DomainMismatchError(f"witness misses atoms {missing}")
        if all(clause_satisfied(c, witness) for c in clauses):
            return
        raise UnsatisfiableError("the supplied witness does not satisfy the clause set")
    if len(names) > enumeration_cap:
        raise CapacityError(
            f"satisfiability certification needs {len(names)} atoms, cap is "
            f"{enumeration_cap}; pass a witness assignment"
        )
    if not _search_satisfiable(clauses, names):
        raise UnsatisfiableError("the clause set is unsatisfiable")


def normalize(
    clauses: Iterable[Clause],
    universe: Iterable[str] | None = None,
    *,
    witness: Mapping[str, int] | None = None,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> Doctrine:
    """Build a Doctrine from raw clauses.

    Drops tautological clauses, propagates unit clauses into the fixed
    map (removing those atoms from the universe), and certifies
    satisfiability: exhaustively up to enumeration_cap constrained
    atoms, otherwise against a caller-supplied witness.
    """
    given = [frozenset(c) for c in clauses]
    mentioned = {l.atom for c in given for l in c}
    if universe is None:
        universe_set = set(mentioned)
    else:
        universe_set = set(universe)
        stray = mentioned - universe_set
        if stray:
            raise DomainMismatchError(f"clauses mention atoms outside the universe: {sorted(stray)}")
    work = {c for c in given if not is_tautological_clause(c)}
    if any(len(c) == 0 for c in work):
        raise UnsatisfiableError("input contains the empty clause")
    fixed: dict[str, int] = {}
    work = _propagate_units(work, fixed)
    universe_set -= fixed.keys()
    _certify_satisfiable(work, witness=witness, enumeration_cap=enumeration_cap)
    return Doctrine(
        universe=frozenset(universe_set),
        proper_clauses=frozenset(work),
        includes_tnd=True,
        fixed=fixed,
    )


def absorb(clauses: Iterable[Clause]) -> frozenset[Clause]:
    """Remove every clause that contains another one (absorption)."""
    kept: list[Clause] = []
    for c in sorted(set(clauses), key=clause_key):
        if not any(k <= c for k in kept):
            kept.append(c)
    return frozenset(kept)


def resolve(c1: Clause, c2: Clause, pivot: Literal) -> Clause | None:
    """Resolvent of c1 and c2 on pivot, or None when it is tautological."""
    if pivot not in c1 or pivot.negate() not in c2:
        raise PreconditionError(f"pivot {pivot} must occur in the first clause and negated in the second")
    r = (c1 - {pivot}) | (c2 - {pivot.negate()})
    return None if is_tautological_clause(r) else r


def _saturate(clauses: set[Clause], budget: int) -> set[Clause]:
    """Close a clause set under non-tautological resolution and absorption."""
    current = set(absorb(clauses))
    frontier = set(current)
    while frontier:
        if len(current) > budget:
            raise CapacityError(f"clause budget {budget} exceeded during saturation")
        candidates: set[Clause] = set()
        for c1 in sorted(frontier, key=clause_key):
            for c2 in sorted(current, key=clause_key):
                if c1 == c2:
                    continue
                negs = {x.negate() for x in c2}
                for pivot in c1 & negs:
                    r = (c1 - {pivot}) | (c2 - {pivot.negate()})
                    if not is_tautological_clause(r):
                        candidates.add(r)
        new = {r for r in candidates if not any(k <= r for k in current)}
        if not new:
            break
        merged = absorb(current | new)
        if len(merged) > budget:
            raise CapacityError(f"clause budget {budget} exceeded during saturation")
        frontier = set(merged) - current
        current = set(merged)
    return current


def blake_canonical_form(d: Doctrine, *, clause_budget: int = DEFAULT_CLAUSE_BUDGET) -> Doctrine:
    """The doctrine whose proper clauses are all prime implicates of d.

    Computed by saturating under resolution (tautological resolvents
    dropped) and absorption.  If saturation surfaces unit implicates,
    they are folded into the fixed map and the remainder re-normalized,
    mirroring the no-units invariant.
    """
    clauses = set(absorb(d.proper_clauses))
    fixed = dict(d.fixed)
    universe = set(d.universe)
    while True:
        clauses = _saturate(clauses, clause_budget)
        if not any(len(c) == 1 for c in clauses):
            break
        clauses = _propagate_units(clauses, fixed)
    universe -= fixed.keys()
    return Doctrine(
        universe=frozenset(universe),
        proper_clauses=frozenset(clauses),
        includes_tnd=d.includes_tnd,
        fixed=fixed,
        is_blake=True,
    )


def check_prime(d: Doctrine, *, clause_budget: int = DEFAULT_CLAUSE_BUDGET) -> bool:
    """True iff every proper clause of d is a prime implicate of d."""
    bcf = blake_canonical_form(d, clause_budget=clause_budget)
    return d.proper_clauses <= bcf.proper_clauses


def classify_horn(d: Doctrine) -> HornClass:
    """Definite: every clause has exactly one positive literal (vacuously
    true for the empty set).  Simple: at most one, some clause with none.
    """
    counts = [sum(1 for l in c if not l.negated) for c in d.proper_clauses]
    if all(k == 1 for k in counts):
        return HornClass.DEFINITE
    if all(k <= 1 for k in counts):
        return HornClass.SIMPLE
    return HornClass.NONE


def check_autarky(d: Doctrine, sigma: Iterable[Literal]) -> bool:
    """True iff sigma has no complementary pair and every proper clause
    containing the negation of a sigma literal also contains a sigma
    literal."""
    s = frozenset(sigma)
    for l in s:
        if l.atom not in d.universe:
            raise DomainMismatchError(f"literal {l} is not over the doctrine universe")
    if any(l.negate() in s for l in s):
        return False
    negs = {l.negate() for l in s}
    for c in d.proper_clauses:
        if c & negs and not c & s:
            return False
    return True


def check_unquestionable_syntactic(d: Doctrine, p: Literal) -> UnquestionableStatus:
    """Syntactic test for one-step convergence of the revision at p.

    Examines, for every clause E containing p, every side literal q and
    every clause E2 containing ~q, the combined clause (E minus q) union
    (E2 minus ~q).  YES: some clause through p is contained in it every
    time, so revision at p settles after one step regardless of input.
    WHEN_ACCEPTED: the variant with p traded for ~p is covered instead,
    which suffices once p is accepted.  UNKNOWN: neither cover exists
    somewhere.  Excluded-middle clauses count as covers.
    """
    if not d.is_blake:
        raise PreconditionError("the syntactic test is defined on the Blake canonical form")
    if p.atom not in d.universe:
        raise DomainMismatchError(f"literal {p} is not over the doctrine universe")
    np = p.negate()
    containing_p = [c for c in d.proper_clauses if p in c]
    containing_np = [c for c in d.proper_clauses if np in c]
    by_literal: dict[Literal, list[Clause]] = {}
    for c in d.proper_clauses:
        for l in c:
            by_literal.setdefault(l, []).append(c)
    always_covered = True
    for e in containing_p:
        for q in e:
            if q == p:
                continue
            nq = q.negate()
            for e2 in by_literal.get(nq, ()):
                r = (e - {q}) | (e2 - {nq})
                if np in r or any(e1 <= r for e1 in containing_p):
                    continue
                always_covered = False
                r2 = (e - {p, q}) | {np} | (e2 - {nq})
                if p in r2 or any(c2 <= r2 for c2 in containing_np):
                    continue
                return UnquestionableStatus.UNKNOWN
    return UnquestionableStatus.YES if always_covered else UnquestionableStatus.WHEN_ACCEPTED


@lru_cache(maxsize=None)
def _status_values(proper_clauses: frozenset, universe: frozenset) -> frozenset:
    probe = Doctrine(
        universe=universe,
        proper_clauses=proper_clauses,
        includes_tnd=True,
        fixed={},
        is_blake=True,
    )
    return frozenset(
        check_unquestionable_syntactic(probe, l) for l in probe.literals()
    )


def certify_unquestionable(d: Doctrine) -> bool:
    """True iff the syntactic test answers YES for every literal."""
    if not d.is_blake:
        raise PreconditionError("certification is defined on the Blake canonical form")
    statuses = _status_values(d.proper_clauses, d.universe)
    return statuses <= {UnquestionableStatus.YES}


def certify_unquestionable_when_accepted(d: Doctrine) -> bool:
    """True iff every literal gets YES or WHEN_ACCEPTED.

    Weaker than certify_unquestionable: revision at each literal is only
    guaranteed to settle in one step once that literal is accepted.
    """
    if not d.is_blake:
        raise PreconditionError("certification is defined on the Blake canonical form")
    statuses = _status_values(d.proper_clauses, d.universe)
    return UnquestionableStatus.UNKNOWN not in statuses


@dataclass(frozen=True)
class AnalysisReport:
    is_prime: bool
    is_blake: bool
    horn_class: HornClass
    autarkic_certificates: tuple[frozenset, ...]
    unquestionable_atoms: Mapping[Literal, UnquestionableStatus]


def analyze(
    d: Doctrine,
    *,
    autarky_candidates: Iterable[Iterable[Literal]] = (),
    clause_budget: int = DEFAULT_CLAUSE_BUDGET,
) -> AnalysisReport:
    """One-stop structural report; unquestionability is judged on the
    Blake canonical form of d."""
    bcf = blake_canonical_form(d, clause_budget=clause_budget)
    is_prime = d.proper_clauses <= bcf.proper_clauses
    is_blake_now = d.proper_clauses == bcf.proper_clauses and d.universe == bcf.universe
    statuses = {l: check_unquestionable_syntactic(bcf, l) for l in bcf.literals()}
    certificates = tuple(
        frozenset(s) for s in (frozenset(c) for c in autarky_candidates) if check_autarky(d, s)
    )
    return AnalysisReport(
        is_prime=is_prime,
        is_blake=is_blake_now,
        horn_class=classify_horn(d),
        autarkic_certificates=certificates,
        unquestionable_atoms=statuses,
    )
