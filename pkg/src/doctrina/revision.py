"""Belief valuations and their revision to a consistent fixed point.

A valuation assigns an exact rational degree of belief in [0, 1] to
every literal over a doctrine's universe.  The upper one-step transform
raises each literal to the best support its clauses provide (a max of
mins over the other literals' negations); iterating it reaches the
least fixed point above the input.  The lower transform is the mirror
image and is cross-checked against the upper one through duality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .doctrine import (
    Doctrine,
    HornClass,
    certify_unquestionable_when_accepted,
    classify_horn,
    clause_satisfied,
)
from .errors import DomainMismatchError, PreconditionError, UnilateralModeError
from .formula import Literal

RationalLike = Union[Fraction, int, str]

_HALF = Fraction(1, 2)
_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(value: RationalLike) -> Fraction:
    """Exact coercion; floats are rejected to keep arithmetic exact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational (Fraction, int, or string), got {type(value).__name__}")


class Valuation:
    """Exact degrees of belief, one per literal, each in [0, 1]."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[Literal, RationalLike]):
        table: dict[Literal, Fraction] = {}
        for l, raw in values.items():
            x = as_fraction(raw)
            if not _ZERO <= x <= _ONE:
                raise ValueError(f"value for {l} out of [0, 1]: {x}")
            table[l] = x
        self._values = table

    @classmethod
    def _raw(cls, table: dict[Literal, Fraction]) -> "Valuation":
        v = object.__new__(cls)
        v._values = table
        return v

    @classmethod
    def uniform(cls, literals: Iterable[Literal], value: RationalLike = 0) -> "Valuation":
        x = as_fraction(value)
        return cls({l: x for l in literals})

    @classmethod
    def balanced_from_atoms(cls, atom_values: Mapping[str, RationalLike]) -> "Valuation":
        """v over both polarities with v(~p) = 1 - v(p)."""
        table: dict[Literal, Fraction] = {}
        for a, raw in atom_values.items():
            x = as_fraction(raw)
            table[Literal(a)] = x
            table[Literal(a, True)] = 1 - x
        return cls(table)

    def __getitem__(self, literal: Literal) -> Fraction:
        return self._values[literal]

    def __contains__(self, literal: Literal) -> bool:
        return literal in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Valuation):
            return NotImplemented
        return self._values == other._values

    __hash__ = None  # mutable-dict semantics; never used as a key

    def __repr__(self) -> str:
        inner = ", ".join(f"{l}={x}" for l, x in self.items())
        return f"Valuation({inner})"

    def items(self) -> list[tuple[Literal, Fraction]]:
        return sorted(self._values.items())

    @property
    def literals(self) -> frozenset[Literal]:
        return frozenset(self._values)

    def atoms(self) -> frozenset[str]:
        return frozenset(l.atom for l in self._values)

    def image(self) -> frozenset[Fraction]:
        return frozenset(self._values.values())

    def is_balanced(self) -> bool:
        return all(self._values[l] + self._values[l.negate()] == 1 for l in self._values)

    def leq(self, other: "Valuation") -> bool:
        if self.literals != other.literals:
            raise DomainMismatchError("valuations cover different literals")
        return all(x <= other._values[l] for l, x in self._values.items())

    def hat(self) -> "Valuation":
        """The conjugate valuation l -> 1 - v(~l)."""
        return Valuation._raw({l: 1 - self._values[l.negate()] for l in self._values})

    def acceptability(self, atom: str) -> Fraction:
        return self._values[Literal(atom)] - self._values[Literal(atom, True)]

    def distance(self, other: "Valuation") -> Fraction:
        """Max-norm distance; valuations must share their domain."""
        if self.literals != other.literals:
            raise DomainMismatchError("valuations cover different literals")
        return max((abs(x - other._values[l]) for l, x in self._values.items()), default=_ZERO)


class PartialTruthAssignment:
    """Per-atom verdict value: 0 reject, 1/2 undecided, 1 accept."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, RationalLike]):
        table: dict[str, Fraction] = {}
        for a, raw in values.items():
            x = as_fraction(raw)
            if x not in (_ZERO, _HALF, _ONE):
                raise ValueError(f"value for {a} must be 0, 1/2, or 1: {x}")
            table[a] = x
        self._values = table

    @classmethod
    def undecided_over(cls, atoms: Iterable[str]) -> "PartialTruthAssignment":
        return cls({a: _HALF for a in atoms})

    @classmethod
    def from_truth_assignment(cls, u: Mapping[str, int]) -> "PartialTruthAssignment":
        return cls({a: Fraction(1 if v else 0) for a, v in u.items()})

    def __getitem__(self, atom: str) -> Fraction:
        return self._values[atom]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialTruthAssignment):
            return NotImplemented
        return self._values == other._values

    __hash__ = None

    def __repr__(self) -> str:
        inner = ", ".join(f"{a}={x}" for a, x in sorted(self._values.items()))
        return f"PartialTruthAssignment({inner})"

    def atoms(self) -> frozenset[str]:
        return frozenset(self._values)

    def literal_value(self, l: Literal) -> Fraction:
        x = self._values[l.atom]
        return 1 - x if l.negated else x

    def is_total(self) -> bool:
        return all(x != _HALF for x in self._values.values())

    def undecided_atoms(self) -> list[str]:
        return sorted(a for a, x in self._values.items() if x == _HALF)

    def as_valuation(self) -> Valuation:
        table: dict[Literal, Fraction] = {}
        for a, x in self._values.items():
            table[Literal(a)] = x
            table[Literal(a, True)] = 1 - x
        return Valuation._raw(table)

    def as_truth_assignment(self) -> dict[str, int]:
        if not self.is_total():
            raise ValueError("assignment still has undecided atoms")
        return {a: int(x) for a, x in self._values.items()}


class Verdict(Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNDECIDED = "undecided"


class DecisionMode(Enum):
    BILATERAL = "bilateral"
    UNILATERAL = "unilateral"


@dataclass(frozen=True)
class Decision:
    margin: Fraction
    mode: DecisionMode
    verdicts: Mapping[str, Verdict]

    def verdict(self, atom: str) -> Verdict:
        return self.verdicts[atom]

    def accepted(self) -> frozenset[str]:
        return frozenset(a for a, w in self.verdicts.items() if w is Verdict.ACCEPT)

    def rejected(self) -> frozenset[str]:
        return frozenset(a for a, w in self.verdicts.items() if w is Verdict.REJECT)

    def undecided(self) -> frozenset[str]:
        return frozenset(a for a, w in self.verdicts.items() if w is Verdict.UNDECIDED)

    def as_partial(self) -> PartialTruthAssignment:
        table = {}
        for a, w in self.verdicts.items():
            table[a] = _ONE if w is Verdict.ACCEPT else _ZERO if w is Verdict.REJECT else _HALF
        return PartialTruthAssignment(table)


@dataclass(frozen=True)
class FixedPointReport:
    result: Valuation
    iterations: int
    image_certificate: bool
    one_step_equal: bool


def _check_domain(d: Doctrine, v: Valuation) -> None:
    expected = frozenset(d.literals())
    if v.literals != expected:
        missing = sorted(str(l) for l in expected - v.literals)
        extra = sorted(str(l) for l in v.literals - expected)
        raise DomainMismatchError(
            f"valuation domain does not match the doctrine (missing {missing}, extra {extra})"
        )


class _Sweep:
    """Per-literal clause views for repeated one-step applications.

    For the upper direction each row lists, for one clause through the
    literal, the negations of the clause's other literals (the min of
    their values is the clause's support).  For the lower direction each
    row lists the other literals of a clause through the negation.
    """

    __slots__ = ("rows", "upper")

    def __init__(self, d: Doctrine, upper: bool):
        rows: dict[Literal, list[tuple[Literal, ...]]] = {}
        for c in d.proper_clauses:
            for l in c:
                if upper:
                    rows.setdefault(l, []).append(tuple(x.negate() for x in c if x != l))
                else:
                    rows.setdefault(l.negate(), []).append(tuple(x for x in c if x != l))
        self.rows = rows
        self.upper = upper

    def apply(self, values: dict[Literal, Fraction]) -> dict[Literal, Fraction]:
        rows = self.rows
        out: dict[Literal, Fraction] = {}
        if self.upper:
            for l, x in values.items():
                for row in rows.get(l, ()):
                    support = min(values[y] for y in row)
                    if support > x:
                        x = support
                out[l] = x
        else:
            for l, x in values.items():
                for row in rows.get(l, ()):
                    cap = max(values[y] for y in row)
                    if cap < x:
                        x = cap
                out[l] = x
        return out


def _iterate(sweep: _Sweep, start: dict[Literal, Fraction]) -> tuple[dict[Literal, Fraction], int]:
    values = start
    image_size = len(set(values.values()))
    bound = len(values) * max(1, image_size) + 1
    steps = 0
    while True:
        nxt = sweep.apply(values)
        if nxt == values:
            return values, steps
        values = nxt
        steps += 1
        if steps > bound:
            raise RuntimeError("internal error: fixed-point iteration exceeded its bound")


def one_step_upper(d: Doctrine, v: Valuation) -> Valuation:
    """One application of the upper transform.

    Each literal is raised to the largest support among its clauses,
    where a clause supports the literal at the min of the negations of
    its other literals; the literal's own value enters via the
    excluded-middle clause, making the step inflationary.
    """
    _check_domain(d, v)
    sweep = _Sweep(d, upper=True)
    return Valuation._raw(sweep.apply({l: v[l] for l in d.literals()}))


def one_step_lower(d: Doctrine, v: Valuation) -> Valuation:
    """One application of the lower transform (the dual cut)."""
    _check_domain(d, v)
    sweep = _Sweep(d, upper=False)
    return Valuation._raw(sweep.apply({l: v[l] for l in d.literals()}))


def _gate_blake(d: Doctrine, allow_non_blake: bool) -> None:
    if not d.is_blake and not allow_non_blake:
        raise PreconditionError(
            "revision is defined on the Blake canonical form; "
            "pass allow_non_blake=True to run on this clause set anyway"
        )


def revise_upper(d: Doctrine, v: Valuation, *, allow_non_blake: bool = False) -> FixedPointReport:
    """Least fixed point of the upper transform above v.

    Iterates full sweeps, every update reading the previous sweep's
    values, so intermediate valuations match the one-step sequence.
    The report records the number of changing sweeps, that the result's
    values all come from the input's image, and whether a single step
    already reached the fixed point.
    """
    _gate_blake(d, allow_non_blake)
    _check_domain(d, v)
    sweep = _Sweep(d, upper=True)
    start = {l: v[l] for l in d.literals()}
    values, steps = _iterate(sweep, start)
    if any(values[l] < start[l] for l in values):
        raise RuntimeError("internal error: upper revision lowered a value")
    image = set(start.values())
    if not set(values.values()) <= image:
        raise RuntimeError("internal error: revised values left the input image")
    return FixedPointReport(
        result=Valuation._raw(values),
        iterations=steps,
        image_certificate=True,
        one_step_equal=steps <= 1,
    )


def revise_lower(d: Doctrine, v: Valuation, *, allow_non_blake: bool = False) -> FixedPointReport:
    """Greatest fixed point of the lower transform below v.

    Also recomputes the result through the conjugate route (revising
    the hat valuation upward and mirroring back) and insists the two
    agree, as a built-in duality check.
    """
    _gate_blake(d, allow_non_blake)
    _check_domain(d, v)
    sweep = _Sweep(d, upper=False)
    start = {l: v[l] for l in d.literals()}
    values, steps = _iterate(sweep, start)
    if any(values[l] > start[l] for l in values):
        raise RuntimeError("internal error: lower revision raised a value")
    image = set(start.values())
    if not set(values.values()) <= image:
        raise RuntimeError("internal error: revised values left the input image")
    dual_sweep = _Sweep(d, upper=True)
    hat_start = {l: 1 - start[l.negate()] for l in start}
    hat_values, _ = _iterate(dual_sweep, hat_start)
    mirrored = {l: 1 - hat_values[l.negate()] for l in hat_values}
    if mirrored != values:
        raise RuntimeError("internal error: lower revision disagrees with its dual route")
    return FixedPointReport(
        result=Valuation._raw(values),
        iterations=steps,
        image_certificate=True,
        one_step_equal=steps <= 1,
    )


def _verdict_bilateral(vp: Fraction, vn: Fraction, g: Fraction) -> Verdict:
    diff = vp - vn
    if diff > g:
        return Verdict.ACCEPT
    if -diff > g:
        return Verdict.REJECT
    return Verdict.UNDECIDED


def _verdict_unilateral(vp: Fraction, g: Fraction) -> Verdict:
    if vp > g:
        return Verdict.ACCEPT
    if vp < g:
        return Verdict.REJECT
    return Verdict.UNDECIDED


def decide(
    v: Valuation,
    margin: RationalLike = 0,
    mode: DecisionMode | str = DecisionMode.BILATERAL,
    *,
    doctrine: Doctrine | None = None,
) -> Decision:
    """Margin decision on a valuation.

    Bilateral: accept an atom when its value beats its negation's by
    more than the margin, reject symmetrically, undecided otherwise.
    Unilateral compares the positive value against the margin alone and
    is only sound for definite Horn doctrines, so that certification is
    demanded via the doctrine argument.
    """
    g = as_fraction(margin)
    if not _ZERO <= g <= _ONE:
        raise ValueError(f"margin out of [0, 1]: {g}")
    mode = DecisionMode(mode)
    verdicts: dict[str, Verdict] = {}
    if mode is DecisionMode.UNILATERAL:
        if doctrine is None:
            raise UnilateralModeError("unilateral decisions require a definite Horn doctrine")
        if classify_horn(doctrine) is not HornClass.DEFINITE:
            raise UnilateralModeError("unilateral decisions are only defined for definite Horn doctrines")
        if doctrine.universe != v.atoms():
            raise DomainMismatchError("valuation does not cover the doctrine universe")
        for a in sorted(v.atoms()):
            verdicts[a] = _verdict_unilateral(v[Literal(a)], g)
    else:
        for a in sorted(v.atoms()):
            verdicts[a] = _verdict_bilateral(v[Literal(a)], v[Literal(a, True)], g)
    return Decision(margin=g, mode=mode, verdicts=verdicts)


def basic_decision(v: Valuation) -> PartialTruthAssignment:
    """The margin-0 bilateral decision as a partial truth assignment."""
    return decide(v, 0).as_partial()


def check_definitely_consistent(d: Doctrine, u: PartialTruthAssignment) -> bool:
    """True iff every proper clause has an accepted literal or at least
    two undecided ones; such verdicts survive any way of completing
    them forced by the clauses."""
    if u.atoms() != d.universe:
        raise DomainMismatchError("assignment does not cover the doctrine universe")
    for c in d.proper_clauses:
        accepted = False
        undecided = 0
        for l in c:
            x = u.literal_value(l)
            if x == _ONE:
                accepted = True
                break
            if x == _HALF:
                undecided += 1
        if not accepted and undecided < 2:
            return False
    return True


def check_consistent_total(d: Doctrine, u: Mapping[str, int]) -> bool:
    """True iff the total assignment satisfies every proper clause."""
    missing = [a for a in d.universe if a not in u]
    if missing:
        raise DomainMismatchError(f"assignment misses atoms {sorted(missing)}")
    return all(clause_satisfied(c, u) for c in d.proper_clauses)


def check_valuation_consistent(d: Doctrine, v: Valuation) -> bool:
    """True iff v is already a fixed point of the upper transform."""
    return one_step_upper(d, v) == v


def check_one_step(d: Doctrine, v: Valuation) -> bool:
    """True iff one upper step already lands on the fixed point."""
    return revise_upper(d, v).result == one_step_upper(d, v)


def aggregate(components: Iterable[tuple[RationalLike, Valuation]]) -> Valuation:
    """Weighted mixture of valuations over a shared domain.

    Weights must be nonnegative exact rationals summing to exactly 1.
    """
    comps = [(as_fraction(w), val) for w, val in components]
    if not comps:
        raise ValueError("nothing to aggregate")
    if any(w < 0 for w, _ in comps):
        raise ValueError("negative weight")
    total = sum(w for w, _ in comps)
    if total != 1:
        raise DomainMismatchError(f"weights sum to {total}, expected exactly 1")
    domain = comps[0][1].literals
    for _, val in comps[1:]:
        if val.literals != domain:
            raise DomainMismatchError("component valuations cover different literals")
    table = {l: sum((w * val[l] for w, val in comps), start=_ZERO) for l in domain}
    return Valuation._raw(table)


def extend_assignment(
    d: Doctrine,
    u: PartialTruthAssignment,
    pick: Literal | None = None,
) -> dict[str, int]:
    """Complete a definitely consistent assignment to a consistent total one.

    Requires a doctrine whose syntactic one-step certificate is YES or
    WHEN_ACCEPTED on every literal, so revision at a literal settles in
    one step at least once the literal is accepted.  Each round decides
    one more atom, sweeps once, and keeps the basic decision; runtime
    checks verify that settled verdicts survive and definite consistency
    is preserved.  The given pick is decided true first; remaining
    undecided atoms are taken in lexicographic order and accepted.
    """
    if not d.is_blake:
        raise PreconditionError("extension is defined on the Blake canonical form")
    if not certify_unquestionable_when_accepted(d):
        raise PreconditionError("some literal has an inconclusive one-step certificate")
    if u.atoms() != d.universe:
        raise DomainMismatchError("assignment does not cover the doctrine universe")
    if not check_definitely_consistent(d, u):
        raise PreconditionError("the assignment is not definitely consistent")
    undecided = set(u.undecided_atoms())
    if pick is not None and pick.atom not in undecided:
        raise PreconditionError(f"pick {pick} must be an undecided literal")
    sweep = _Sweep(d, upper=True)
    literal_list = d.literals()
    current = u
    while True:
        open_atoms = current.undecided_atoms()
        if not open_atoms:
            break
        if pick is not None:
            chosen, pick = pick, None
        else:
            chosen = Literal(open_atoms[0])
        values = {l: current.literal_value(l) for l in literal_list}
        values[chosen] = _ONE
        values[chosen.negate()] = _ZERO
        revised = sweep.apply(values)
        table: dict[str, Fraction] = {}
        for a in d.universe:
            pa, na = revised[Literal(a)], revised[Literal(a, True)]
            table[a] = _ONE if pa > na else _ZERO if na > pa else _HALF
        nxt = PartialTruthAssignment(table)
        for a in d.universe:
            before = current[a]
            if before != _HALF and nxt[a] != before:
                raise RuntimeError("internal error: extension overturned a settled verdict")
        want = _ZERO if chosen.negated else _ONE
        if nxt[chosen.atom] != want:
            raise RuntimeError("internal error: extension failed to decide the chosen literal")
        if not check_definitely_consistent(d, nxt):
            raise RuntimeError("internal error: extension lost definite consistency")
        current = nxt
    return current.as_truth_assignment()
