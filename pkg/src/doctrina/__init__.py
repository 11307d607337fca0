"""Judgment aggregation under logical constraints.

Doctrines (clause sets over issues), exact-rational belief valuations,
max-min revision to consistent fixed points, and margin decisions, with
ready-made doctrines for clustering and preferential voting.
"""

from .doctrine import (
    AnalysisReport,
    Doctrine,
    HornClass,
    UnquestionableStatus,
    absorb,
    analyze,
    blake_canonical_form,
    certify_unquestionable,
    certify_unquestionable_when_accepted,
    check_autarky,
    check_prime,
    check_unquestionable_syntactic,
    classify_horn,
    normalize,
    resolve,
)
from .domains import (
    Dendrogram,
    PairAtomMap,
    gen_conjunction,
    gen_equivalence,
    gen_total_order,
    path_strength_eq,
    path_strength_neg_eq,
    schulze_strengths,
    single_link,
)
from .errors import (
    CapacityError,
    DoctrinaError,
    DomainMismatchError,
    FileFormatError,
    FormulaSyntaxError,
    PreconditionError,
    UnilateralModeError,
    UnsatisfiableError,
)
from .formula import (
    Clause,
    Formula,
    Literal,
    atoms,
    entails,
    evaluate,
    lits,
    parse_formula,
    to_clause_set,
)
from .revision import (
    Decision,
    DecisionMode,
    FixedPointReport,
    PartialTruthAssignment,
    Valuation,
    Verdict,
    aggregate,
    basic_decision,
    check_consistent_total,
    check_definitely_consistent,
    check_one_step,
    check_valuation_consistent,
    decide,
    extend_assignment,
    one_step_lower,
    one_step_upper,
    revise_lower,
    revise_upper,
)

__version__ = "0.1.0"
