"""Doctrine normalization, canonical forms, and structural analysis."""

import itertools
import random
from fractions import Fraction

import pytest

import props
from doctrina import (
    CapacityError,
    DomainMismatchError,
    HornClass,
    Literal,
    PreconditionError,
    UnquestionableStatus,
    UnsatisfiableError,
    Valuation,
    absorb,
    analyze,
    blake_canonical_form,
    certify_unquestionable,
    certify_unquestionable_when_accepted,
    check_autarky,
    check_one_step,
    check_prime,
    check_unquestionable_syntactic,
    classify_horn,
    normalize,
    resolve,
    revise_upper,
)
from doctrina.doctrine import clause_key, clause_satisfied
from doctrina.domains import gen_conjunction, gen_equivalence, gen_total_order
from doctrina.formula import lits


def test_normalize_propagates_units():
    d = normalize({lits("p"), lits("~p", "q")})
    assert d.universe == frozenset()
    assert d.proper_clauses == frozenset()
    assert d.fixed == {"p": 1, "q": 1}


def test_normalize_contradictory_units():
    with pytest.raises(UnsatisfiableError):
        normalize({lits("p"), lits("~p")})


def test_normalize_keeps_proper_clauses():
    d = gen_conjunction()
    again = normalize(d.proper_clauses)
    assert again.universe == d.universe
    assert again.proper_clauses == d.proper_clauses
    assert again.fixed == {}


def test_normalize_drops_tautologies():
    d = normalize({lits("p", "~p", "q"), lits("p", "q")})
    assert d.proper_clauses == frozenset({lits("p", "q")})


def test_normalize_keeps_subsumed_clauses():
    # no absorption at this stage; canonical form is a separate step
    d = normalize({lits("p", "q"), lits("p", "q", "r")})
    assert len(d.proper_clauses) == 2


def test_normalize_universe_argument():
    d = normalize({lits("p", "q")}, universe=["p", "q", "r"])
    assert d.universe == frozenset({"p", "q", "r"})
    with pytest.raises(DomainMismatchError):
        normalize({lits("p", "q")}, universe=["p"])


def test_normalize_unsatisfiable_set():
    with pytest.raises(UnsatisfiableError):
        normalize({lits("p", "q"), lits("p", "~q"), lits("~p", "q"), lits("~p", "~q")})


def test_normalize_rejects_bad_witness():
    with pytest.raises(UnsatisfiableError):
        normalize({lits("p", "q")}, witness={"p": 0, "q": 0})
    d = normalize({lits("p", "q")}, witness={"p": 1, "q": 0})
    assert d.universe == frozenset({"p", "q"})


def test_absorb():
    assert absorb({lits("p", "q"), lits("p", "q", "r")}) == frozenset({lits("p", "q")})
    assert absorb({lits("p", "q"), lits("p", "r")}) == frozenset(
        {lits("p", "q"), lits("p", "r")}
    )
    assert absorb(set()) == frozenset()


def test_resolve():
    assert resolve(lits("p", "q"), lits("~q", "r"), Literal("q")) == lits("p", "r")
    assert resolve(lits("p", "q"), lits("~q", "~p"), Literal("q")) is None
    assert resolve(lits("p", "q"), lits("~q"), Literal("q")) == lits("p")
    with pytest.raises(PreconditionError):
        resolve(lits("p", "q"), lits("r"), Literal("q"))


def test_blake_adds_missing_resolvent():
    d = normalize({lits("~p", "~q", "r"), lits("~p", "~r", "s")})
    b = blake_canonical_form(d)
    assert b.proper_clauses == frozenset(
        {lits("~p", "~q", "r"), lits("~p", "~r", "s"), lits("~p", "~q", "s")}
    )
    assert b.is_blake and b.universe == d.universe


def test_blake_fixed_point_of_prime_set():
    d = gen_conjunction()
    b = blake_canonical_form(d)
    assert b.proper_clauses == d.proper_clauses
    assert b.universe == d.universe and b.fixed == {}


def test_blake_refolds_derived_units():
    d = normalize({lits("p", "q"), lits("p", "~q")})
    b = blake_canonical_form(d)
    assert b.fixed == {"p": 1}
    assert b.universe == frozenset({"q"})
    assert b.proper_clauses == frozenset()


def test_check_prime():
    assert check_prime(gen_conjunction()) is True
    assert check_prime(normalize({lits("p", "q"), lits("p", "q", "r")})) is False
    # primality of each clause does not require completeness of the set
    assert check_prime(normalize({lits("~p", "~q", "r"), lits("~p", "~r", "s")})) is True


def test_classify_horn():
    assert classify_horn(gen_conjunction()) is HornClass.DEFINITE
    assert classify_horn(normalize({lits("p", "q")})) is HornClass.NONE
    assert classify_horn(normalize({lits("~p", "~q"), lits("~q", "r")})) is HornClass.SIMPLE
    assert classify_horn(normalize(set(), universe=["a"])) is HornClass.DEFINITE


def test_check_autarky():
    d = gen_conjunction()
    assert check_autarky(d, [Literal("p"), Literal("q"), Literal("t")]) is True
    assert check_autarky(d, [Literal("p"), Literal("p", True)]) is False
    eq3 = gen_equivalence(["a", "b", "c"])
    assert check_autarky(eq3, [Literal("e_ab", True), Literal("e_ac", True)]) is True
    assert check_autarky(eq3, [Literal("e_ab", True)]) is False
    with pytest.raises(DomainMismatchError):
        check_autarky(d, [Literal("nope")])


def test_unquestionable_statuses_conjunction():
    d = gen_conjunction()
    got = {str(l): check_unquestionable_syntactic(d, l) for l in d.literals()}
    assert got == {
        "p": UnquestionableStatus.YES,
        "~p": UnquestionableStatus.UNKNOWN,
        "q": UnquestionableStatus.YES,
        "~q": UnquestionableStatus.UNKNOWN,
        "t": UnquestionableStatus.YES,
        "~t": UnquestionableStatus.YES,
    }
    assert certify_unquestionable_when_accepted(d) is False


def test_unquestionable_statuses_three_item_equivalence():
    d = gen_equivalence(["a", "b", "c"])
    for l in d.literals():
        want = UnquestionableStatus.WHEN_ACCEPTED if l.negated else UnquestionableStatus.YES
        assert check_unquestionable_syntactic(d, l) is want
    assert certify_unquestionable(d) is False
    assert certify_unquestionable_when_accepted(d) is True


def test_two_sweep_regression_three_item_equivalence():
    # one high link plus one balanced link needs a second sweep: the
    # first raises e_bc to 1/2 through the triangle, the second lets
    # that value flow onward, so the one-step certificate must say no
    d = gen_equivalence(["a", "b", "c"])
    table = {l: Fraction(0) for l in d.literals()}
    table[Literal("e_ab")] = Fraction(9, 10)
    table[Literal("e_ac")] = Fraction(1, 2)
    table[Literal("e_ac", True)] = Fraction(1, 2)
    v = Valuation(table)
    rep = revise_upper(d, v)
    assert rep.iterations == 2 and rep.one_step_equal is False
    assert rep.result[Literal("e_bc")] == Fraction(1, 2)
    assert check_one_step(d, v) is False


def test_unquestionable_statuses_existence_and_uniqueness():
    d = blake_canonical_form(
        normalize(
            {
                lits("p1", "p2", "p3"),
                lits("~p1", "~p2"),
                lits("~p1", "~p3"),
                lits("~p2", "~p3"),
            }
        )
    )
    for l in d.literals():
        want = UnquestionableStatus.YES if l.negated else UnquestionableStatus.WHEN_ACCEPTED
        assert check_unquestionable_syntactic(d, l) is want
    assert certify_unquestionable(d) is False
    assert certify_unquestionable_when_accepted(d) is True


def test_unquestionable_total_order():
    d = gen_total_order(["a", "b", "c"])
    assert certify_unquestionable(d) is True
    assert certify_unquestionable_when_accepted(d) is True


def test_unquestionable_double_opposition():
    d = blake_canonical_form(normalize({lits("p", "q", "r"), lits("~q", "~r")}))
    assert check_unquestionable_syntactic(d, Literal("p")) is UnquestionableStatus.UNKNOWN


def test_unquestionable_requires_blake():
    d = normalize({lits("p", "q", "r"), lits("~q", "~r")})
    with pytest.raises(PreconditionError):
        check_unquestionable_syntactic(d, Literal("p"))
    with pytest.raises(PreconditionError):
        certify_unquestionable(d)


def test_analyze_conjunction():
    d = gen_conjunction()
    sigma = [Literal("p"), Literal("q"), Literal("t")]
    report = analyze(d, autarky_candidates=[sigma, [Literal("t", True)]])
    assert report.is_prime and report.is_blake
    assert report.horn_class is HornClass.DEFINITE
    assert report.autarkic_certificates == (frozenset(sigma),)
    assert set(report.unquestionable_atoms) == set(d.literals())


def test_analyze_subsumed_is_not_prime():
    report = analyze(normalize({lits("p", "q"), lits("p", "q", "r")}))
    assert not report.is_prime and not report.is_blake


def test_analyze_prime_but_incomplete():
    report = analyze(normalize({lits("~p", "~q", "r"), lits("~p", "~r", "s")}))
    assert report.is_prime and not report.is_blake


def test_blake_budget():
    with pytest.raises(CapacityError):
        blake_canonical_form(
            normalize({lits("~p", "~q", "r"), lits("~p", "~r", "s")}), clause_budget=2
        )


def _models(clauses, names):
    out = []
    for bits in itertools.product((0, 1), repeat=len(names)):
        u = dict(zip(names, bits))
        if all(clause_satisfied(c, u) for c in clauses):
            out.append(u)
    return out


def test_blake_preserves_models():
    # canonical form and original agree on every total assignment, with
    # refolded fixed atoms acting as forced values
    rng = random.Random(1203)
    for _ in range(120):
        d = props.rand_raw_doctrine(rng, max_atoms=5, max_clauses=6)
        b = blake_canonical_form(d)
        names = sorted(d.universe)
        for u in itertools.product((0, 1), repeat=len(names)):
            u = dict(zip(names, u))
            orig = all(clause_satisfied(c, u) for c in d.proper_clauses)
            fold = all(u[a] == v for a, v in b.fixed.items() if a in u) and all(
                clause_satisfied(c, u) for c in b.proper_clauses
            )
            assert orig == fold


def test_blake_idempotent():
    rng = random.Random(88)
    for _ in range(60):
        b = props.rand_bcf(rng, max_atoms=5, max_clauses=6)
        again = blake_canonical_form(b)
        assert again.proper_clauses == b.proper_clauses
        assert again.universe == b.universe and again.fixed == b.fixed


def test_blake_deterministic_output_order():
    clauses = [lits("~p", "~q", "r"), lits("~p", "~r", "s"), lits("s", "q", "~p")]
    one = blake_canonical_form(normalize(clauses))
    other = blake_canonical_form(normalize(list(reversed(clauses))))
    assert one.sorted_clauses() == other.sorted_clauses()
    keys = [clause_key(c) for c in one.sorted_clauses()]
    assert keys == sorted(keys)


def test_definite_horn_survives_canonical_form():
    # definite resolvents keep exactly one positive literal and are
    # never units, so the class and the universe both survive
    rng = random.Random(417)
    for _ in range(80):
        b = props.rand_horn_bcf(rng, max_atoms=5, max_clauses=6)
        assert classify_horn(b) is HornClass.DEFINITE


def test_autarky_survives_canonical_form():
    rng = random.Random(5150)
    checked = 0
    while checked < 60:
        d = props.rand_raw_doctrine(rng, max_atoms=5, max_clauses=6)
        models = _models(d.proper_clauses, sorted(d.universe))
        if not models:
            continue
        u = models[rng.randrange(len(models))]
        sigma = frozenset(Literal(a, u[a] == 0) for a in d.universe)
        assert check_autarky(d, sigma)
        b = blake_canonical_form(d)
        if not all(l.atom in b.universe for l in sigma):
            continue
        assert check_autarky(b, sigma)
        checked += 1
