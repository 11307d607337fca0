"""Built-in doctrine families and their closed-form companions.

Three ready-made doctrines: the conjunction of two premises, equivalence
relations over items (clustering), and total orders over alternatives
(preferential voting).  Path-strength oracles give the revised values in
closed form for the pair domains, and single_link packages the
equivalence engine as a hierarchical clustering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .doctrine import Doctrine
from .errors import CapacityError, DomainMismatchError
from .formula import DEFAULT_CLAUSE_BUDGET, Clause, Literal, lits
from .revision import RationalLike, Valuation, as_fraction, revise_upper

DEFAULT_PATH_ITEM_CAP = 7


class PairAtomMap:
    """Atoms indexed by item pairs.

    Equivalence universes use one atom per unordered pair.  Total-order
    universes use one atom per ordered pair (x, y) with x earlier in the
    item list; the reverse pair is represented by the negative literal
    of the same atom.  Names follow e_xy / p_xy when all items are
    single characters, with an underscore separator otherwise.
    """

    __slots__ = ("items", "ordered", "prefix", "_position", "_atom_names", "_pair_by_atom")

    def __init__(self, items: Iterable[str], *, ordered: bool, prefix: str):
        items = tuple(items)
        if len(items) < 2:
            raise ValueError("need at least two items")
        if len(set(items)) != len(items):
            raise ValueError("duplicate items")
        joiner = "" if all(len(s) == 1 for s in items) else "_"
        self.items = items
        self.ordered = ordered
        self.prefix = prefix
        self._position = {x: i for i, x in enumerate(items)}
        names = []
        pair_by_atom = {}
        for i, x in enumerate(items):
            for y in items[i + 1 :]:
                name = f"{prefix}_{x}{joiner}{y}"
                names.append(name)
                pair_by_atom[name] = (x, y)
        self._atom_names = tuple(names)
        self._pair_by_atom = pair_by_atom

    @classmethod
    def equivalence(cls, items: Iterable[str]) -> "PairAtomMap":
        return cls(items, ordered=False, prefix="e")

    @classmethod
    def total_order(cls, items: Iterable[str]) -> "PairAtomMap":
        return cls(items, ordered=True, prefix="p")

    @property
    def atom_names(self) -> tuple[str, ...]:
        return self._atom_names

    def universe(self) -> frozenset[str]:
        return frozenset(self._atom_names)

    def _canonical(self, x: str, y: str) -> tuple[str, str, bool]:
        if x == y or x not in self._position or y not in self._position:
            raise DomainMismatchError(f"not a pair of distinct items: {x!r}, {y!r}")
        if self._position[x] < self._position[y]:
            return x, y, False
        return y, x, True

    def atom(self, x: str, y: str) -> str:
        a, b, _ = self._canonical(x, y)
        joiner = "" if all(len(s) == 1 for s in self.items) else "_"
        return f"{self.prefix}_{a}{joiner}{b}"

    def literal(self, x: str, y: str) -> Literal:
        """The literal asserting the pair as given.

        For equivalence the order of x and y is immaterial; for total
        orders the reversed pair comes back as the negated atom.
        """
        a, b, swapped = self._canonical(x, y)
        name = self.atom(a, b)
        if self.ordered and swapped:
            return Literal(name, True)
        return Literal(name)

    def pair(self, atom_name: str) -> tuple[str, str]:
        return self._pair_by_atom[atom_name]


def gen_conjunction() -> Doctrine:
    """Two premises and their conjunction as the conclusion: t <-> p & q.

    The three clauses are already all of the prime implicates.
    """
    clauses = frozenset({lits("~p", "~q", "t"), lits("p", "~t"), lits("q", "~t")})
    return Doctrine(
        universe=frozenset({"p", "q", "t"}),
        proper_clauses=clauses,
        includes_tnd=True,
        fixed={},
        is_blake=True,
    )


def _paths(items: Sequence[str], x: str, y: str):
    """All simple paths from x to y, shortest first."""
    others = [z for z in items if z != x and z != y]
    for k in range(len(others) + 1):
        for mids in itertools.permutations(others, k):
            yield (x, *mids, y)


def _links(path: Sequence[str]):
    return zip(path, path[1:])


def gen_equivalence(
    items: Iterable[str],
    with_blake: bool = False,
    *,
    clause_budget: int = DEFAULT_CLAUSE_BUDGET,
) -> Doctrine:
    """The equivalence-relation doctrine over unordered pair atoms.

    Without with_blake: transitivity triangles, three clauses per item
    triple.  With with_blake: the full path clause family, one clause
    per simple path of length at least two, which is the Blake
    canonical form.  The two coincide up to three items.
    """
    pam = PairAtomMap.equivalence(items)
    clauses: set[Clause] = set()
    if with_blake:
        for i, x in enumerate(pam.items):
            for y in pam.items[i + 1 :]:
                conclusion = pam.literal(x, y)
                for path in _paths(pam.items, x, y):
                    if len(path) < 3:
                        continue
                    clause = frozenset(
                        {pam.literal(a, b).negate() for a, b in _links(path)} | {conclusion}
                    )
                    clauses.add(clause)
                    if len(clauses) > clause_budget:
                        raise CapacityError(f"clause budget {clause_budget} exceeded generating path clauses")
    else:
        for x, y, z in itertools.combinations(pam.items, 3):
            for a, b, mid in ((x, y, z), (x, z, y), (y, z, x)):
                clauses.add(
                    frozenset(
                        {
                            pam.literal(a, mid).negate(),
                            pam.literal(mid, b).negate(),
                            pam.literal(a, b),
                        }
                    )
                )
    return Doctrine(
        universe=pam.universe(),
        proper_clauses=frozenset(clauses),
        includes_tnd=True,
        fixed={},
        is_blake=with_blake or len(pam.items) <= 3,
    )


def gen_total_order(
    items: Iterable[str],
    with_blake: bool = False,
    *,
    clause_budget: int = DEFAULT_CLAUSE_BUDGET,
) -> Doctrine:
    """The total-order doctrine over ordered pair atoms.

    Completeness and asymmetry collapse into the excluded middle under
    the reversed-pair identification, leaving transitivity.  Without
    with_blake: one clause per ordered item triple (cyclic rotations
    coincide).  With with_blake: the path clause family, which is the
    Blake canonical form.  The two coincide up to three items.
    """
    pam = PairAtomMap.total_order(items)
    clauses: set[Clause] = set()
    if with_blake:
        for x in pam.items:
            for y in pam.items:
                if x == y:
                    continue
                conclusion = pam.literal(x, y)
                for path in _paths(pam.items, x, y):
                    if len(path) < 3:
                        continue
                    clause = frozenset(
                        {pam.literal(a, b).negate() for a, b in _links(path)} | {conclusion}
                    )
                    clauses.add(clause)
                    if len(clauses) > clause_budget:
                        raise CapacityError(f"clause budget {clause_budget} exceeded generating path clauses")
    else:
        for x, y, z in itertools.permutations(pam.items, 3):
            clauses.add(
                frozenset(
                    {
                        pam.literal(x, y).negate(),
                        pam.literal(y, z).negate(),
                        pam.literal(x, z),
                    }
                )
            )
    return Doctrine(
        universe=pam.universe(),
        proper_clauses=frozenset(clauses),
        includes_tnd=True,
        fixed={},
        is_blake=with_blake or len(pam.items) <= 3,
    )


def _require_small(pam: PairAtomMap, item_cap: int) -> None:
    if len(pam.items) > item_cap:
        raise CapacityError(
            f"path enumeration over {len(pam.items)} items exceeds the cap of {item_cap}; "
            "use the revision engine instead"
        )


def path_strength_eq(
    orv: Valuation,
    pam: PairAtomMap,
    x: str,
    y: str,
    *,
    item_cap: int = DEFAULT_PATH_ITEM_CAP,
) -> Fraction:
    """Closed form for the revised positive pair value: the best path
    from x to y rated by its weakest link."""
    _require_small(pam, item_cap)
    best = None
    for path in _paths(pam.items, x, y):
        strength = min(orv[pam.literal(a, b)] for a, b in _links(path))
        if best is None or strength > best:
            best = strength
    assert best is not None
    return best


def path_strength_neg_eq(
    orv: Valuation,
    pam: PairAtomMap,
    x: str,
    y: str,
    *,
    item_cap: int = DEFAULT_PATH_ITEM_CAP,
) -> Fraction:
    """Closed form for the revised negative pair value: best path from x
    to y with exactly one link read negatively."""
    _require_small(pam, item_cap)
    best = None
    for path in _paths(pam.items, x, y):
        links = list(_links(path))
        for marked in range(len(links)):
            strength = min(
                orv[pam.literal(a, b).negate()] if i == marked else orv[pam.literal(a, b)]
                for i, (a, b) in enumerate(links)
            )
            if best is None or strength > best:
                best = strength
    assert best is not None
    return best


def schulze_strengths(
    orv: Valuation,
    pam: PairAtomMap,
    *,
    item_cap: int = DEFAULT_PATH_ITEM_CAP,
) -> dict[tuple[str, str], Fraction]:
    """Widest-path strength for every ordered pair of alternatives.

    strength(x, y) maximizes, over simple paths from x to y, the
    minimum pairwise value along the path; this matches the revised
    value of the pair literal under the total-order doctrine.
    """
    _require_small(pam, item_cap)
    out: dict[tuple[str, str], Fraction] = {}
    for x in pam.items:
        for y in pam.items:
            if x == y:
                continue
            best = None
            for path in _paths(pam.items, x, y):
                strength = min(orv[pam.literal(a, b)] for a, b in _links(path))
                if best is None or strength > best:
                    best = strength
            assert best is not None
            out[(x, y)] = best
    return out


@dataclass(frozen=True)
class Dendrogram:
    """Single-link clustering output.

    thresholds lists the distinct revised similarities in descending
    order; partitions[i] groups items whose revised similarity is at
    least thresholds[i], so partitions get coarser down the list.
    """

    items: tuple[str, ...]
    thresholds: tuple[Fraction, ...]
    partitions: tuple[tuple[tuple[str, ...], ...], ...]
    similarities: Mapping[tuple[str, str], Fraction]

    def partition_at(self, margin: RationalLike) -> tuple[tuple[str, ...], ...]:
        g = as_fraction(margin)
        return _partition(self.items, self.similarities, g)

    def ultrametric(self, x: str, y: str) -> Fraction:
        if x == y:
            return Fraction(0)
        key = (x, y) if (x, y) in self.similarities else (y, x)
        return 1 - self.similarities[key]


def _partition(
    items: Sequence[str],
    similarities: Mapping[tuple[str, str], Fraction],
    g: Fraction,
) -> tuple[tuple[str, ...], ...]:
    parent = {x: x for x in items}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (x, y), s in similarities.items():
        if s >= g:
            parent[find(x)] = find(y)
    blocks: dict[str, list[str]] = {}
    for x in items:
        blocks.setdefault(find(x), []).append(x)
    order = {x: i for i, x in enumerate(items)}
    return tuple(
        tuple(block) for block in sorted(blocks.values(), key=lambda b: order[b[0]])
    )


def single_link(
    dissimilarity: Sequence[Sequence[RationalLike]],
    labels: Sequence[str] | None = None,
    *,
    clause_budget: int = DEFAULT_CLAUSE_BUDGET,
) -> Dendrogram:
    """Single-link hierarchical clustering via the equivalence engine.

    Pair similarity starts at one minus the dissimilarity; upper
    revision closes it under best-path strength, whose complement is
    the subdominant ultrametric.  Cutting at each distinct revised
    similarity yields the dendrogram levels.
    """
    n = len(dissimilarity)
    if n == 0:
        raise ValueError("empty dissimilarity matrix")
    matrix = [[as_fraction(x) for x in row] for row in dissimilarity]
    if any(len(row) != n for row in matrix):
        raise ValueError("dissimilarity matrix must be square")
    for i in range(n):
        if matrix[i][i] != 0:
            raise ValueError("dissimilarity diagonal must be zero")
        for j in range(n):
            if matrix[i][j] != matrix[j][i]:
                raise ValueError("dissimilarity matrix must be symmetric")
            if not 0 <= matrix[i][j] <= 1:
                raise ValueError("dissimilarities must lie in [0, 1]")
    items = tuple(labels) if labels is not None else tuple(f"x{i}" for i in range(n))
    if len(items) != n:
        raise ValueError("labels do not match the matrix size")
    if n == 1:
        return Dendrogram(
            items=items,
            thresholds=(Fraction(1),),
            partitions=((items,),),
            similarities={},
        )
    pam = PairAtomMap.equivalence(items)
    d = gen_equivalence(items, with_blake=True, clause_budget=clause_budget)
    position = {x: i for i, x in enumerate(items)}
    table: dict[Literal, Fraction] = {}
    for name in pam.atom_names:
        x, y = pam.pair(name)
        dist = matrix[position[x]][position[y]]
        table[Literal(name)] = 1 - dist
        table[Literal(name, True)] = dist
    report = revise_upper(d, Valuation(table))
    similarities = {
        pam.pair(name): report.result[Literal(name)] for name in pam.atom_names
    }
    thresholds = tuple(sorted({*similarities.values()}, reverse=True))
    partitions = tuple(_partition(items, similarities, g) for g in thresholds)
    return Dendrogram(
        items=items,
        thresholds=thresholds,
        partitions=partitions,
        similarities=similarities,
    )
