"""Command-line front end.

Text formats:

Doctrine files hold `atoms`, `clause`, `formula`, and `fixed` lines
(`#` starts a comment).  Every literal must use a declared atom.
Valuation files hold `<literal> <value>` lines with decimal or `a/b`
values; omitted literals default to 0 with a warning.  Assignment
files hold `<atom> <value>` lines with values 0, 1/2, or 1.  Weights
files hold `<weight> <valuation-path>` lines, paths relative to the
weights file.

All output is canonical and deterministic: atoms in declaration order,
clauses sorted by size then literals, values printed as decimals when
nine digits suffice and as fractions otherwise.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .doctrine import (
    Doctrine,
    blake_canonical_form,
    check_autarky,
    check_prime,
    check_unquestionable_syntactic,
    classify_horn,
    clause_key,
    literal_key,
    normalize,
    HornClass,
    UnquestionableStatus,
)
from .domains import gen_conjunction, gen_equivalence, gen_total_order
from .errors import (
    CapacityError,
    DoctrinaError,
    DomainMismatchError,
    FileFormatError,
    FormulaSyntaxError,
    UnilateralModeError,
    UnsatisfiableError,
)
from .formula import DEFAULT_CLAUSE_BUDGET, Clause, Literal, atoms as formula_atoms, parse_formula, to_clause_set
from .revision import (
    Decision,
    DecisionMode,
    PartialTruthAssignment,
    Valuation,
    Verdict,
    aggregate,
    check_definitely_consistent,
    check_valuation_consistent,
    decide,
    revise_lower,
    revise_upper,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNSAT = 3
EXIT_BUDGET = 4
EXIT_DOMAIN = 5
EXIT_UNILATERAL = 6

BUDGET_ENV_VAR = "DOCTRINA_CLAUSE_BUDGET"

# metadata keys a revise run appends after the literal lines
RESERVED_VALUATION_KEYS = ("iterations", "one_step_equal")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def format_value(x: Fraction) -> str:
    """Decimal when at most nine digits represent it exactly, else a/b."""
    if x.denominator == 1:
        return str(x.numerator)
    if 1_000_000_000 % x.denominator == 0:
        scaled = x.numerator * (1_000_000_000 // x.denominator)
        whole, frac = divmod(scaled, 1_000_000_000)
        return f"{whole}.{frac:09d}".rstrip("0")
    return f"{x.numerator}/{x.denominator}"


def _parse_value(token: str, where: str) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FileFormatError(f"{where}: not a rational value: {token!r}") from None
    return value


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


@dataclass(frozen=True)
class ParsedDoctrine:
    doctrine: Doctrine
    declared: tuple[str, ...]


def parse_doctrine_text(text: str, *, clause_budget: int, source: str = "<doctrine>") -> ParsedDoctrine:
    declared: list[str] = []
    seen: set[str] = set()
    clauses: list[Clause] = []
    constrained = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        where = f"{source}:{lineno}"
        parts = line.split()
        key = parts[0]
        if key == "atoms":
            if len(parts) == 1:
                raise FileFormatError(f"{where}: empty atoms line")
            for name in parts[1:]:
                try:
                    Literal(name)
                except ValueError:
                    raise FileFormatError(f"{where}: invalid atom name {name!r}") from None
                if name in seen:
                    raise FileFormatError(f"{where}: atom {name!r} declared twice")
                seen.add(name)
                declared.append(name)
        elif key == "clause":
            if len(parts) == 1:
                raise FileFormatError(f"{where}: empty clause line")
            clause = set()
            for token in parts[1:]:
                try:
                    l = Literal.parse(token)
                except ValueError:
                    raise FileFormatError(f"{where}: invalid literal {token!r}") from None
                if l.atom not in seen:
                    raise FileFormatError(f"{where}: literal {token!r} uses an undeclared atom")
                clause.add(l)
            clauses.append(frozenset(clause))
            constrained = True
        elif key == "fixed":
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise FileFormatError(f"{where}: expected 'fixed <atom> <0|1>'")
            name = parts[1]
            if name not in seen:
                raise FileFormatError(f"{where}: fixed line uses an undeclared atom {name!r}")
            clauses.append(frozenset({Literal(name, negated=(parts[2] == "0"))}))
            constrained = True
        elif key == "formula":
            expr = _strip(raw)[len("formula") :].strip()
            if not expr:
                raise FileFormatError(f"{where}: empty formula line")
            try:
                f = parse_formula(expr)
            except FormulaSyntaxError as exc:
                raise FileFormatError(f"{where}: {exc}") from None
            stray = formula_atoms(f) - seen
            if stray:
                raise FileFormatError(f"{where}: formula uses undeclared atoms {sorted(stray)}")
            clauses.extend(to_clause_set(f, clause_budget=clause_budget))
            constrained = True
        else:
            raise FileFormatError(f"{where}: unknown directive {key!r}")
    if not declared:
        raise FileFormatError(f"{source}: no atoms declared")
    if not constrained:
        raise FileFormatError(f"{source}: no clause or formula lines")
    d = normalize(clauses, universe=declared)
    return ParsedDoctrine(doctrine=d, declared=tuple(declared))


def parse_valuation_text(text: str, *, source: str = "<valuation>") -> tuple[dict[Literal, Fraction], list[str]]:
    values: dict[Literal, Fraction] = {}
    order: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        where = f"{source}:{lineno}"
        parts = line.split()
        if parts[0] in RESERVED_VALUATION_KEYS:
            continue
        if len(parts) != 2:
            raise FileFormatError(f"{where}: expected '<literal> <value>'")
        try:
            l = Literal.parse(parts[0])
        except ValueError:
            raise FileFormatError(f"{where}: invalid literal {parts[0]!r}") from None
        x = _parse_value(parts[1], where)
        if not 0 <= x <= 1:
            raise FileFormatError(f"{where}: value out of [0, 1]: {parts[1]}")
        if l in values:
            raise FileFormatError(f"{where}: duplicate value for literal {l}")
        values[l] = x
        if l.atom not in order:
            order.append(l.atom)
    return values, order


def parse_assignment_text(text: str, *, source: str = "<assignment>") -> dict[str, Fraction]:
    half = Fraction(1, 2)
    values: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        where = f"{source}:{lineno}"
        parts = line.split()
        if len(parts) != 2:
            raise FileFormatError(f"{where}: expected '<atom> <value>'")
        name = parts[0]
        try:
            Literal(name)
        except ValueError:
            raise FileFormatError(f"{where}: invalid atom name {name!r}") from None
        x = _parse_value(parts[1], where)
        if x not in (Fraction(0), half, Fraction(1)):
            raise FileFormatError(f"{where}: assignment values must be 0, 1/2, or 1")
        if name in values:
            raise FileFormatError(f"{where}: duplicate value for atom {name!r}")
        values[name] = x
    return values


def _valuation_for(parsed_values: dict[Literal, Fraction], d: Doctrine, *, source: str) -> Valuation:
    table: dict[Literal, Fraction] = {}
    for l, x in parsed_values.items():
        if l.atom in d.universe:
            table[l] = x
        elif l.atom in d.fixed:
            _warn(f"{source}: ignoring value for fixed atom {l.atom!r}")
        else:
            raise DomainMismatchError(f"{source}: valuation mentions unknown atom {l.atom!r}")
    for a in sorted(d.universe):
        for l in (Literal(a), Literal(a, True)):
            if l not in table:
                _warn(f"{source}: literal {l} missing, defaulting to 0")
                table[l] = Fraction(0)
    return Valuation(table)


def _assignment_for(values: dict[str, Fraction], d: Doctrine, *, source: str) -> PartialTruthAssignment:
    half = Fraction(1, 2)
    table: dict[str, Fraction] = {}
    for name, x in values.items():
        if name in d.universe:
            table[name] = x
        elif name in d.fixed:
            _warn(f"{source}: ignoring value for fixed atom {name!r}")
        else:
            raise DomainMismatchError(f"{source}: assignment mentions unknown atom {name!r}")
    for a in sorted(d.universe):
        if a not in table:
            _warn(f"{source}: atom {a!r} missing, defaulting to 1/2")
            table[a] = half
    return PartialTruthAssignment(table)


def format_doctrine(d: Doctrine, declared: Sequence[str]) -> str:
    lines = ["atoms " + " ".join(declared)]
    for a in sorted(d.fixed):
        lines.append(f"fixed {a} {d.fixed[a]}")
    for c in sorted(d.proper_clauses, key=clause_key):
        lines.append("clause " + " ".join(str(l) for l in sorted(c, key=literal_key)))
    if not d.fixed and not d.proper_clauses and d.universe:
        # a constraint-free doctrine still needs one clause line to parse
        # back; the excluded middle of the first atom is a no-op
        first = min(d.universe)
        lines.append(f"clause {first} ~{first}")
    return "\n".join(lines) + "\n"


def format_valuation(v: Valuation, atom_order: Sequence[str]) -> str:
    lines = []
    for a in atom_order:
        for l in (Literal(a), Literal(a, True)):
            if l in v:
                lines.append(f"{l} {format_value(v[l])}")
    return "\n".join(lines) + ("\n" if lines else "")


def _fixed_verdict(value: int, g: Fraction, mode: DecisionMode) -> Verdict:
    vp = Fraction(value)
    if mode is DecisionMode.UNILATERAL:
        if vp > g:
            return Verdict.ACCEPT
        if vp < g:
            return Verdict.REJECT
        return Verdict.UNDECIDED
    diff = vp - (1 - vp)
    if diff > g:
        return Verdict.ACCEPT
    if -diff > g:
        return Verdict.REJECT
    return Verdict.UNDECIDED


def _load_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_doctrine(path: str, budget: int) -> ParsedDoctrine:
    return parse_doctrine_text(_load_text(path), clause_budget=budget, source=path)


def cmd_bcf(args: argparse.Namespace, budget: int) -> int:
    parsed = _load_doctrine(args.doctrine, budget)
    bcf = blake_canonical_form(parsed.doctrine, clause_budget=budget)
    sys.stdout.write(format_doctrine(bcf, parsed.declared))
    return EXIT_OK


def cmd_revise(args: argparse.Namespace, budget: int) -> int:
    parsed = _load_doctrine(args.doctrine, budget)
    bcf = blake_canonical_form(parsed.doctrine, clause_budget=budget)
    raw_values, _ = parse_valuation_text(_load_text(args.valuation), source=args.valuation)
    v = _valuation_for(raw_values, bcf, source=args.valuation)
    report = (revise_lower if args.lower else revise_upper)(bcf, v)
    atom_order = [a for a in parsed.declared if a in bcf.universe]
    sys.stdout.write(format_valuation(report.result, atom_order))
    sys.stdout.write(f"iterations {report.iterations}\n")
    sys.stdout.write(f"one_step_equal {'true' if report.one_step_equal else 'false'}\n")
    return EXIT_OK


def cmd_decide(args: argparse.Namespace, budget: int) -> int:
    if args.unilateral and args.lower:
        raise FileFormatError("--unilateral only applies to the upper revision")
    parsed = _load_doctrine(args.doctrine, budget)
    bcf = blake_canonical_form(parsed.doctrine, clause_budget=budget)
    raw_values, _ = parse_valuation_text(_load_text(args.valuation), source=args.valuation)
    v = _valuation_for(raw_values, bcf, source=args.valuation)
    margin = _parse_value(args.margin, "--margin")
    if not 0 <= margin <= 1:
        raise FileFormatError(f"--margin out of [0, 1]: {args.margin}")
    mode = DecisionMode.UNILATERAL if args.unilateral else DecisionMode.BILATERAL
    if args.unilateral and classify_horn(bcf) is not HornClass.DEFINITE:
        raise UnilateralModeError("unilateral decisions are only defined for definite Horn doctrines")
    report = (revise_lower if args.lower else revise_upper)(bcf, v)
    decision = decide(report.result, margin, mode, doctrine=bcf if args.unilateral else None)
    print(f"margin {format_value(margin)}")
    print(f"mode {mode.value}")
    for a in parsed.declared:
        if a in bcf.universe:
            verdict = decision.verdict(a)
        else:
            verdict = _fixed_verdict(bcf.fixed[a], margin, mode)
        print(f"{verdict.value} {a}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace, budget: int) -> int:
    requested = any(
        (args.prime, args.horn, args.autarky is not None, args.consistent is not None,
         args.definite is not None, args.unquestionable, args.oracle)
    )
    if not requested:
        raise FileFormatError("no checks requested; pass --prime, --horn, --autarky, "
                              "--consistent, --definite, --unquestionable, or --oracle")
    parsed = _load_doctrine(args.doctrine, budget)
    d = parsed.doctrine
    bcf = None

    def need_bcf() -> Doctrine:
        nonlocal bcf
        if bcf is None:
            bcf = blake_canonical_form(d, clause_budget=budget)
        return bcf

    if args.prime:
        print(f"prime {'true' if check_prime(d, clause_budget=budget) else 'false'}")
    if args.horn:
        print(f"horn {classify_horn(d).value}")
    if args.autarky is not None:
        sigma = []
        for token in args.autarky.split(","):
            token = token.strip()
            if not token:
                continue
            try:
                l = Literal.parse(token)
            except ValueError:
                raise FileFormatError(f"--autarky: invalid literal {token!r}") from None
            if l.atom not in d.universe:
                raise DomainMismatchError(f"--autarky: literal {token!r} is not over the universe")
            sigma.append(l)
        if not sigma:
            raise FileFormatError("--autarky: no literals given")
        print(f"autarky {'true' if check_autarky(d, sigma) else 'false'}")
    if args.consistent is not None:
        raw_values, _ = parse_valuation_text(_load_text(args.consistent), source=args.consistent)
        v = _valuation_for(raw_values, need_bcf(), source=args.consistent)
        print(f"consistent {'true' if check_valuation_consistent(need_bcf(), v) else 'false'}")
    if args.definite is not None:
        values = parse_assignment_text(_load_text(args.definite), source=args.definite)
        u = _assignment_for(values, need_bcf(), source=args.definite)
        print(f"definite {'true' if check_definitely_consistent(need_bcf(), u) else 'false'}")
    if args.unquestionable:
        statuses = {
            l: check_unquestionable_syntactic(need_bcf(), l) for l in need_bcf().literals()
        }
        if all(s is UnquestionableStatus.YES for s in statuses.values()):
            overall = "yes"
        elif all(s is not UnquestionableStatus.UNKNOWN for s in statuses.values()):
            overall = "when_accepted"
        else:
            overall = "unknown"
        print(f"unquestionable {overall}")
    if args.oracle:
        from .oracle import prime_implicates

        pi = prime_implicates(d)
        b = need_bcf()
        agrees = pi.clauses == b.proper_clauses and dict(pi.fixed) == dict(b.fixed)
        print(f"oracle {'true' if agrees else 'false'}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, budget: int) -> int:
    if args.kind == "conjunction":
        d = gen_conjunction()
        declared = ("p", "q", "t")
    else:
        if not args.items:
            raise FileFormatError(f"gen {args.kind} requires --items")
        items = [s.strip() for s in args.items.split(",") if s.strip()]
        if len(items) < 2:
            raise FileFormatError("--items needs at least two comma-separated names")
        for item in items:
            try:
                Literal(item)
            except ValueError:
                raise FileFormatError(f"invalid item name {item!r}") from None
        if args.kind == "equivalence":
            d = gen_equivalence(items, args.blake, clause_budget=budget)
        else:
            d = gen_total_order(items, args.blake, clause_budget=budget)
        from .domains import PairAtomMap

        pam = (PairAtomMap.equivalence if args.kind == "equivalence" else PairAtomMap.total_order)(items)
        declared = pam.atom_names
    sys.stdout.write(format_doctrine(d, declared))
    return EXIT_OK


def cmd_aggregate(args: argparse.Namespace, budget: int) -> int:
    base = Path(args.weights).parent
    components: list[tuple[Fraction, dict[Literal, Fraction], str]] = []
    text = _load_text(args.weights)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        where = f"{args.weights}:{lineno}"
        parts = line.split()
        if len(parts) != 2:
            raise FileFormatError(f"{where}: expected '<weight> <valuation-path>'")
        weight = _parse_value(parts[0], where)
        if weight < 0:
            raise FileFormatError(f"{where}: negative weight")
        path = str(base / parts[1])
        values, _ = parse_valuation_text(_load_text(path), source=path)
        components.append((weight, values, path))
    if not components:
        raise FileFormatError(f"{args.weights}: no components")
    atom_order: list[str] = []
    for _, values, _ in components:
        for l in values:
            if l.atom not in atom_order:
                atom_order.append(l.atom)
    domain = [Literal(a, neg) for a in atom_order for neg in (False, True)]
    filled = []
    for weight, values, path in components:
        table = {}
        for l in domain:
            if l in values:
                table[l] = values[l]
            else:
                _warn(f"{path}: literal {l} missing, defaulting to 0")
                table[l] = Fraction(0)
        filled.append((weight, Valuation(table)))
    result = aggregate(filled)
    sys.stdout.write(format_valuation(result, atom_order))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doctrina",
        description="Decide logically constrained issues: normalize doctrines, "
        "revise belief valuations to consistency, and read off decisions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bcf = sub.add_parser("bcf", help="print the Blake canonical form of a doctrine")
    p_bcf.add_argument("doctrine")
    p_bcf.set_defaults(handler=cmd_bcf)

    p_rev = sub.add_parser("revise", help="revise a valuation to its consistent fixed point")
    p_rev.add_argument("doctrine")
    p_rev.add_argument("valuation")
    p_rev.add_argument("--lower", action="store_true", help="use the lower (cautious) revision")
    p_rev.set_defaults(handler=cmd_revise)

    p_dec = sub.add_parser("decide", help="revise and decide at a margin")
    p_dec.add_argument("doctrine")
    p_dec.add_argument("valuation")
    p_dec.add_argument("--margin", default="0", help="acceptance margin in [0, 1], default 0")
    p_dec.add_argument("--unilateral", action="store_true",
                       help="threshold positive values only (definite Horn doctrines)")
    p_dec.add_argument("--lower", action="store_true", help="use the lower revision")
    p_dec.set_defaults(handler=cmd_decide)

    p_chk = sub.add_parser("check", help="structural and consistency checks")
    p_chk.add_argument("doctrine")
    p_chk.add_argument("--prime", action="store_true", help="is every clause a prime implicate")
    p_chk.add_argument("--horn", action="store_true", help="report the Horn class")
    p_chk.add_argument("--autarky", metavar="LITERALS", help="comma-separated literal set to test")
    p_chk.add_argument("--consistent", metavar="VALUATION", help="is the valuation a fixed point")
    p_chk.add_argument("--definite", metavar="ASSIGNMENT", help="is the partial assignment definitely consistent")
    p_chk.add_argument("--oracle", action="store_true",
                       help="cross-check the Blake form against exhaustive prime implicates (small inputs)")
    p_chk.add_argument("--unquestionable", action="store_true",
                       help="syntactic one-step convergence status of the doctrine")
    p_chk.set_defaults(handler=cmd_check)

    p_gen = sub.add_parser("gen", help="emit a built-in doctrine")
    p_gen.add_argument("kind", choices=("conjunction", "equivalence", "order"))
    p_gen.add_argument("--items", help="comma-separated item names (equivalence, order)")
    p_gen.add_argument("--blake", action="store_true", help="emit the Blake canonical form directly")
    p_gen.set_defaults(handler=cmd_gen)

    p_agg = sub.add_parser("aggregate", help="weighted mixture of valuations")
    p_agg.add_argument("weights", help="file of '<weight> <valuation-path>' lines")
    p_agg.set_defaults(handler=cmd_aggregate)

    return parser


def _clause_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_CLAUSE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise FileFormatError(f"{BUDGET_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise FileFormatError(f"{BUDGET_ENV_VAR} must be a positive integer, got {raw!r}")
    return value


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        budget = _clause_budget()
        return args.handler(args, budget)
    except FileNotFoundError as exc:
        _error(f"cannot read file: {exc.filename}")
        return EXIT_PARSE
    except (FormulaSyntaxError, FileFormatError) as exc:
        _error(str(exc))
        return EXIT_PARSE
    except UnsatisfiableError as exc:
        _error(str(exc))
        return EXIT_UNSAT
    except CapacityError as exc:
        _error(str(exc))
        return EXIT_BUDGET
    except UnilateralModeError as exc:
        _error(str(exc))
        return EXIT_UNILATERAL
    except DomainMismatchError as exc:
        _error(str(exc))
        return EXIT_DOMAIN
    except DoctrinaError as exc:
        _error(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
