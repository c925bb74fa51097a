"""Property-based checks over randomly grown formulas."""
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from logiclab.models import Valuation, check_refutation, evaluate, verify_trace
from logiclab.oracle import dpll, to_cnf, truth_table_valid, find_countermodel
from logiclab.generator import sample_formula
from logiclab.kernel import make_sequent
from logiclab.parser import parse_formula
from logiclab.syntax import Constant, alpha_equal, free_symbols, print_formula, substitute

from conftest import FO_SIG, random_fo_formula

WEIGHTS = {"and": 1, "or": 1, "implies": 1, "iff": 1, "not": 1}


def _formula(seed: int, depth: int):
    return random_fo_formula(random.Random(seed), depth)


@given(st.integers(0, 2**32), st.integers(0, 4))
@settings(max_examples=200, deadline=None)
def test_print_parse_round_trip(seed, depth):
    f = _formula(seed, depth)
    assert alpha_equal(parse_formula(print_formula(f), FO_SIG), f)


@given(st.integers(0, 2**32), st.integers(0, 3), st.sampled_from(["x", "y", "z"]))
@settings(max_examples=200, deadline=None)
def test_substitution_removes_the_target(seed, depth, base):
    from logiclab.syntax import Parameter

    f = _formula(seed, depth)
    target = Parameter(base, 1)
    params, _ = free_symbols(substitute(f, target, Constant("c")))
    assert target not in params


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4))
@settings(max_examples=150, deadline=None)
def test_oracle_countermodels_self_certify(seed, hyp_depth, concl_depth):
    rng = random.Random(seed)
    seq = make_sequent(
        [sample_formula(rng, ("p", "q", "r"), WEIGHTS, hyp_depth)],
        sample_formula(rng, ("p", "q", "r"), WEIGHTS, concl_depth),
    )
    model = find_countermodel(seq)
    assert (model is None) == truth_table_valid(seq)
    if model is not None:
        assert check_refutation(seq, model).refutes


@given(st.integers(0, 2**32), st.integers(1, 4))
@settings(max_examples=150, deadline=None)
def test_traces_replay(seed, depth):
    rng = random.Random(seed)
    f = sample_formula(rng, ("p", "q"), WEIGHTS, depth)
    model = Valuation({"p": rng.random() < 0.5, "q": rng.random() < 0.5})
    _, step = evaluate(f, model)
    assert verify_trace(step, model)
