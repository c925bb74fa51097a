"""logiclab: a prove-or-refute workbench for classical logic.

Students construct natural-deduction proofs with forward/backward
commands or refute conjectures with justified countermodels; sessions
are replayable event logs, and exercises come from a handcrafted corpus
or a seeded SAT-backed generator.
"""

from .checker import Verdict, check_tree
from .definitions import Definition, check_definition_set, fold, unfold
from .exercises import ExerciseSpec, exercise_from_json, pack_dumps, pack_loads
from .generator import GeneratorConfig, classify, generate
from .kernel import (
    Goal,
    ProofState,
    RuleInstance,
    Sequent,
    apply_rule,
    init_proof,
    instantiate_unknown,
    list_applicable,
    make_sequent,
    state_digest,
)
from .models import (
    FiniteStructure,
    Step,
    Valuation,
    check_refutation,
    evaluate,
    parse_model,
)
from .oracle import CNF, dpll, find_countermodel, fo_countermodel_search, to_cnf, truth_table_valid
from .parser import parse_formula, parse_term
from .sessions import SessionStore
from .syntax import Formula, Signature, Term, alpha_equal, free_symbols, print_formula, substitute
from .tactics import (
    AutomationPolicy,
    ScriptRunner,
    auto,
    hint,
    parse_command,
    parse_script,
    rewrite_definition,
    step,
)
from .tree import extract_tree, tree_to_json, tree_to_text

__version__ = "0.1.0"
