"""Formula parsing, evaluation, clause conversion, and entailment."""

import random

import pytest

from doctrina.errors import FormulaSyntaxError
from doctrina.formula import (
    And,
    Iff,
    Implies,
    Lit,
    Literal,
    Not,
    Or,
    atoms,
    conj,
    disj,
    entails,
    evaluate,
    is_tautological_clause,
    lit,
    lits,
    neg,
    parse_formula,
    to_clause_set,
)


def test_literal_parse_and_negate():
    assert Literal.parse("~p") == Literal("p", True)
    assert Literal.parse("p") == Literal("p")
    assert Literal("p", True).negate() == Literal("p")
    assert Literal("p").negate() == Literal("p", True)
    assert str(Literal("p", True)) == "~p"
    assert Literal("e_ab").atom == "e_ab"


def test_literal_parse_rejects_garbage():
    for bad in ("", "~", "~~p", "p q"):
        with pytest.raises(ValueError):
            Literal.parse(bad)


def test_lits_builds_clause():
    assert lits("p", "~q") == frozenset({Literal("p"), Literal("q", True)})


def test_parse_iff_conjunction():
    f = parse_formula("t <-> p & q")
    assert f == Iff(Lit(Literal("t")), And((Lit(Literal("p")), Lit(Literal("q")))))


def test_parse_double_negation_collapses():
    assert parse_formula("~~p") == Lit(Literal("p"))


def test_parse_precedence_and_parens():
    f = parse_formula("p | q & r -> ~s")
    assert f == Implies(
        Or((Lit(Literal("p")), And((Lit(Literal("q")), Lit(Literal("r")))))),
        Lit(Literal("s", True)),
    )
    g = parse_formula("(p | q) & r")
    assert g == And((Or((Lit(Literal("p")), Lit(Literal("q")))), Lit(Literal("r"))))


def test_parse_error_reports_offset():
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula("p &")
    assert err.value.position == 3
    assert "offset 3" in str(err.value)


def test_parse_error_trailing_junk():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("p q")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("")


def test_neg_helper():
    f = Lit(Literal("p"))
    assert neg(f) == Lit(Literal("p", True))
    assert neg(neg(And((f, f)))) == And((f, f))


def test_evaluate_examples():
    f = parse_formula("t <-> p & q")
    assert evaluate(f, {"p": 1, "q": 1, "t": 1}) == 1
    assert evaluate(f, {"p": 1, "q": 0, "t": 1}) == 0
    assert evaluate(parse_formula("p -> q"), {"p": 0, "q": 0}) == 1


def test_atoms():
    assert atoms(parse_formula("t <-> p & q")) == frozenset({"p", "q", "t"})


def test_to_clause_set_iff():
    f = parse_formula("t <-> p & q")
    assert to_clause_set(f) == frozenset(
        {lits("~p", "~q", "t"), lits("p", "~t"), lits("q", "~t")}
    )


def test_to_clause_set_tautology_is_empty():
    assert to_clause_set(parse_formula("p | ~p")) == frozenset()


def test_to_clause_set_absorbs():
    f = parse_formula("(p | q) & (p | q | r)")
    assert to_clause_set(f) == frozenset({lits("p", "q")})


def test_is_tautological_clause():
    assert is_tautological_clause(lits("p", "~p", "q"))
    assert not is_tautological_clause(lits("p", "q"))


def test_entails_examples():
    assert entails(parse_formula("p & q"), parse_formula("p"))
    assert not entails(parse_formula("p | q"), parse_formula("p"))
    assert entails(
        parse_formula("(~p | ~q | r) & (~p | ~r | s)"),
        parse_formula("~p | ~q | s"),
    )


def _rand_formula(rng, names, depth):
    if depth == 0 or rng.random() < 0.3:
        return lit(rng.choice(names), rng.random() < 0.5)
    kind = rng.randrange(5)
    if kind == 0:
        return Not(_rand_formula(rng, names, depth - 1))
    left = _rand_formula(rng, names, depth - 1)
    right = _rand_formula(rng, names, depth - 1)
    if kind == 1:
        return And((left, right))
    if kind == 2:
        return Or((left, right))
    if kind == 3:
        return Implies(left, right)
    return Iff(left, right)


def _clause_value(clause, u):
    return int(any(u[l.atom] == (0 if l.negated else 1) for l in clause))


def test_clause_set_is_truth_equivalent():
    # random formulas: the clause conjunction has the same truth table
    rng = random.Random(2161)
    names = ["a", "b", "c", "d", "e", "f"]
    for _ in range(150):
        f = _rand_formula(rng, names, rng.randint(1, 4))
        cs = to_clause_set(f)
        used = sorted(atoms(f))
        for bits in range(1 << len(used)):
            u = {a: (bits >> i) & 1 for i, a in enumerate(used)}
            want = evaluate(f, u)
            got = int(all(_clause_value(c, u) for c in cs))
            assert got == want


def test_evaluate_negation_flips():
    rng = random.Random(977)
    names = ["a", "b", "c"]
    for _ in range(100):
        f = _rand_formula(rng, names, 3)
        u = {a: rng.randrange(2) for a in names}
        assert evaluate(neg(f), u) == 1 - evaluate(f, u)


def test_entailment_reflexive_and_transitive():
    rng = random.Random(5520)
    names = ["a", "b", "c", "d"]
    for _ in range(60):
        f = _rand_formula(rng, names, 3)
        assert entails(f, f)
        g = _rand_formula(rng, names, 3)
        h = _rand_formula(rng, names, 3)
        if entails(f, g) and entails(g, h):
            assert entails(f, h)


def test_conj_disj_builders():
    p, q = Lit(Literal("p")), Lit(Literal("q"))
    assert conj(p, q) == And((p, q))
    assert disj(p, q) == Or((p, q))
    assert conj(p) == p and disj(p) == p
