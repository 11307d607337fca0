"""Brute-force reference implementations.

Everything here trades efficiency for obviousness: prime implicates by
candidate enumeration against the model set, satisfying assignments by
exhaustive search, and fixed points sampled from above.  These are the
anchors the production algorithms are tested against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

from .doctrine import Doctrine, clause_satisfied
from .errors import CapacityError
from .formula import Clause, Literal
from .revision import Valuation, revise_upper

DEFAULT_PRIME_ATOM_CAP = 10
DEFAULT_ASSIGNMENT_ATOM_CAP = 20


@dataclass(frozen=True)
class PrimeImplicates:
    """All prime implicates, with unit implicates folded into fixed."""

    clauses: frozenset
    fixed: Mapping[str, int]


def prime_implicates(d: Doctrine, *, atom_cap: int = DEFAULT_PRIME_ATOM_CAP) -> PrimeImplicates:
    """Enumerate every clause over the universe and keep the inclusion-
    minimal ones entailed by the doctrine.

    Unit implicates become fixed truth values (merged with the
    doctrine's own fixed map) so the clause part mirrors the no-units
    doctrine normal form.
    """
    names = sorted(d.universe)
    n = len(names)
    if n > atom_cap:
        raise CapacityError(f"prime implicate enumeration needs {n} atoms, cap is {atom_cap}")
    full = (1 << n) - 1
    index = {a: i for i, a in enumerate(names)}

    def masks(clause: Clause) -> tuple[int, int]:
        pos = neg = 0
        for l in clause:
            bit = 1 << index[l.atom]
            if l.negated:
                neg |= bit
            else:
                pos |= bit
        return pos, neg

    clause_masks = [masks(c) for c in d.proper_clauses]
    models = [
        m
        for m in range(1 << n)
        if all((m & pos) or ((m ^ full) & neg) for pos, neg in clause_masks)
    ]
    entailed: list[tuple[int, int, int]] = []
    for signs in product((0, 1, 2), repeat=n):
        pos = neg = 0
        for i, s in enumerate(signs):
            if s == 1:
                pos |= 1 << i
            elif s == 2:
                neg |= 1 << i
        if not pos and not neg:
            continue
        if all((m & pos) or ((m ^ full) & neg) for m in models):
            size = bin(pos | neg).count("1")
            entailed.append((size, pos, neg))
    entailed.sort()
    minimal: list[tuple[int, int]] = []
    for _, pos, neg in entailed:
        if not any(p2 & ~pos == 0 and q2 & ~neg == 0 for p2, q2 in minimal):
            minimal.append((pos, neg))
    clauses: set[Clause] = set()
    fixed = dict(d.fixed)
    for pos, neg in minimal:
        literals = frozenset(
            [Literal(names[i]) for i in range(n) if pos & (1 << i)]
            + [Literal(names[i], True) for i in range(n) if neg & (1 << i)]
        )
        if len(literals) == 1:
            (l,) = tuple(literals)
            fixed[l.atom] = 0 if l.negated else 1
        else:
            clauses.add(literals)
    newly_fixed = set(fixed) - set(d.fixed)
    for c in clauses:
        if any(l.atom in newly_fixed for l in c):
            raise RuntimeError("internal error: a non-unit prime implicate mentions a fixed atom")
    return PrimeImplicates(clauses=frozenset(clauses), fixed=fixed)


def consistent_assignments(
    d: Doctrine, *, atom_cap: int = DEFAULT_ASSIGNMENT_ATOM_CAP
) -> list[dict[str, int]]:
    """All satisfying total assignments, in lexicographic order of the
    value tuple taken over the sorted atom names."""
    names = sorted(d.universe)
    if len(names) > atom_cap:
        raise CapacityError(f"assignment enumeration needs {len(names)} atoms, cap is {atom_cap}")
    out = []
    for bits in product((0, 1), repeat=len(names)):
        u = dict(zip(names, bits))
        if all(clause_satisfied(c, u) for c in d.proper_clauses):
            out.append(u)
    return out


def minimal_invariants_above(
    d: Doctrine,
    v: Valuation,
    samples: int,
    *,
    seed: int = 0,
    denominator: int = 12,
    allow_non_blake: bool = False,
) -> list[Valuation]:
    """Fixed points of the upper transform at or above v.

    The first sample is v itself (so the least fixed point above v is
    always in the list); the rest revise random valuations drawn
    pointwise from [v_l, 1] on an even grid, with a fixed seed for
    reproducibility.
    """
    rng = random.Random(seed)
    literals = d.literals()
    out = []
    for k in range(samples):
        if k == 0:
            u = v
        else:
            table = {}
            for l in literals:
                base = v[l]
                table[l] = base + (1 - base) * Fraction(rng.randrange(denominator + 1), denominator)
            u = Valuation(table)
        out.append(revise_upper(d, u, allow_non_blake=allow_non_blake).result)
    return out
