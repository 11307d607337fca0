"""Brute-force reference implementations and their agreement with the
production algorithms."""

import itertools
import random
from fractions import Fraction

import pytest

import props
from doctrina import (
    CapacityError,
    Literal,
    Valuation,
    blake_canonical_form,
    gen_conjunction,
    gen_total_order,
    normalize,
    one_step_upper,
    revise_upper,
)
from doctrina.doctrine import resolve
from doctrina.formula import lits
from doctrina.oracle import (
    consistent_assignments,
    minimal_invariants_above,
    prime_implicates,
)

F = Fraction


# ------------------------------------------------------- prime implicates


def test_prime_implicates_adds_missing_resolvent():
    d = normalize({lits("~p", "~q", "r"), lits("~p", "~r", "s")})
    pi = prime_implicates(d)
    assert pi.clauses == frozenset(
        {lits("~p", "~q", "r"), lits("~p", "~r", "s"), lits("~p", "~q", "s")}
    )
    assert pi.fixed == {}


def test_prime_implicates_of_prime_set():
    d = gen_conjunction()
    pi = prime_implicates(d)
    assert pi.clauses == d.proper_clauses
    assert pi.fixed == {}


def test_prime_implicates_folds_units():
    d = normalize({lits("p", "q"), lits("p", "~q")})
    pi = prime_implicates(d)
    assert pi.clauses == frozenset()
    assert pi.fixed == {"p": 1}
    # merged with truth values already fixed during normalization
    d2 = normalize({lits("p"), lits("~p", "q"), lits("r", "s"), lits("r", "~s")})
    assert d2.fixed == {"p": 1, "q": 1}
    pi2 = prime_implicates(d2)
    assert pi2.clauses == frozenset()
    assert pi2.fixed == {"p": 1, "q": 1, "r": 1}


def test_prime_implicates_match_canonical_form(pools):
    for d in pools.doctrines + pools.horn:
        b = blake_canonical_form(d)
        pi = prime_implicates(d)
        assert pi.clauses == b.proper_clauses
        assert pi.fixed == b.fixed


def test_resolvent_closure(pools):
    # any non-tautological resolvent of two prime implicates is again an
    # implicate, so it contains a prime one
    for d in pools.doctrines[:30]:
        clauses = sorted(prime_implicates(d).clauses, key=sorted)
        for c1, c2 in itertools.combinations(clauses, 2):
            for l in c1:
                if l.negate() not in c2:
                    continue
                r = resolve(c1, c2, l)
                if r is None:
                    continue
                assert any(pc <= r for pc in clauses)


# -------------------------------------------------- satisfying assignments


def test_consistent_assignments_conjunction():
    assert consistent_assignments(gen_conjunction()) == [
        {"p": 0, "q": 0, "t": 0},
        {"p": 0, "q": 1, "t": 0},
        {"p": 1, "q": 0, "t": 0},
        {"p": 1, "q": 1, "t": 1},
    ]


def test_consistent_assignments_total_order():
    d = gen_total_order(["a", "b", "c"])
    rows = consistent_assignments(d)
    assert sorted(d.universe) == ["p_ab", "p_ac", "p_bc"]
    got = {(r["p_ab"], r["p_ac"], r["p_bc"]) for r in rows}
    want = set()
    for perm in itertools.permutations("abc"):
        rank = {x: i for i, x in enumerate(perm)}
        want.add(
            (
                int(rank["a"] < rank["b"]),
                int(rank["a"] < rank["c"]),
                int(rank["b"] < rank["c"]),
            )
        )
    assert len(rows) == 6 and got == want


def _full_models(d):
    """Model tuples over universe plus fixed atoms, for comparing
    doctrines whose split between the two differs."""
    names = sorted(set(d.universe) | set(d.fixed))
    out = set()
    for row in consistent_assignments(d):
        full = dict(row)
        full.update(d.fixed)
        out.add(tuple(full[a] for a in names))
    return names, out


def test_assignments_agree_with_canonical_form(pools):
    for d in pools.doctrines[:40]:
        b = blake_canonical_form(d)
        assert _full_models(d) == _full_models(b)


# ------------------------------------------------------- sampled fixpoints


def test_minimal_invariants_start_at_the_least_fixpoint(pools):
    rng = random.Random(4401)
    for i, d in enumerate(pools.doctrines[:8]):
        v = props.rand_valuation(rng, d.universe)
        ws = minimal_invariants_above(d, v, samples=5, seed=i)
        star = revise_upper(d, v).result
        assert ws[0] == star
        for w in ws:
            assert one_step_upper(d, w) == w
            for l in d.literals():
                assert w[l] >= v[l]
                assert w[l] >= star[l]


def test_minimal_invariants_bracket_panel_example():
    d = gen_conjunction()
    v = Valuation(
        {
            Literal("p"): F(7, 10),
            Literal("p", True): F(3, 10),
            Literal("q"): F(11, 20),
            Literal("q", True): F(9, 20),
            Literal("t"): F(3, 10),
            Literal("t", True): F(7, 10),
        }
    )
    ws = minimal_invariants_above(d, v, samples=4, seed=11)
    assert ws[0] == Valuation(
        {
            Literal("p"): F(7, 10),
            Literal("p", True): F(11, 20),
            Literal("q"): F(11, 20),
            Literal("q", True): F(7, 10),
            Literal("t"): F(11, 20),
            Literal("t", True): F(7, 10),
        }
    )
    for w in ws[1:]:
        for l in d.literals():
            assert w[l] >= ws[0][l]


# ------------------------------------------------------------------- caps


def test_prime_implicates_atom_cap():
    wide = normalize({frozenset(Literal(f"x{i:02d}") for i in range(11))})
    with pytest.raises(CapacityError, match="cap is 10"):
        prime_implicates(wide)
    with pytest.raises(CapacityError):
        prime_implicates(gen_conjunction(), atom_cap=2)


def test_consistent_assignments_atom_cap():
    names = [f"x{i:02d}" for i in range(21)]
    wide = normalize(
        {frozenset(Literal(a) for a in names)}, witness={a: 1 for a in names}
    )
    with pytest.raises(CapacityError, match="cap is 20"):
        consistent_assignments(wide)
    with pytest.raises(CapacityError):
        consistent_assignments(gen_conjunction(), atom_cap=2)
