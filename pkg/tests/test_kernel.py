"""Proof-state transitions: rule applications in both directions."""
import pytest

from logiclab.errors import (
    EigenvariableViolation,
    MalformedSequent,
    NoSuchGoal,
    NoSuchHypothesis,
    ProofIncomplete,
    RuleShapeMismatch,
    UnknownsPresent,
)
from logiclab.kernel import (
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
from logiclab.parser import parse_formula, parse_term
from logiclab.syntax import Parameter, Signature, Unknown, prop_signature
from logiclab.tree import extract_tree

PQ = prop_signature("p", "q")
BIN = Signature(predicates={"P": 2})
MONO = Signature(predicates={"P": 1, "Q": 1})


def shift_sequent() -> Sequent:
    return Sequent(
        (("h1", parse_formula("(forall x)(forall y) P(x, y)", BIN)),),
        parse_formula("(forall y)(forall x) P(x, y)", BIN),
    )


class TestInitProof:
    def test_single_goal(self):
        st = init_proof(make_sequent([], parse_formula("p -> p", PQ)), PQ)
        assert st.open_goals == (0,)
        assert not st.refinements

    def test_quantifier_shift_goal(self):
        st = init_proof(shift_sequent(), BIN)
        assert st.goals[0].sequent == shift_sequent()

    def test_undeclared_symbol(self):
        sig = prop_signature("p")
        bad = make_sequent([], parse_formula("p -> q", PQ))
        with pytest.raises(MalformedSequent):
            init_proof(bad, sig)

    def test_initial_unknowns_rejected(self):
        bad = make_sequent([], parse_formula("Q(?1)", MONO))
        with pytest.raises(MalformedSequent):
            init_proof(bad, MONO)


class TestBackwardRules:
    def test_and_intro_two_goals(self):
        st = init_proof(make_sequent([], parse_formula("p /\\ q", PQ)), PQ)
        st = apply_rule(st, 0, RuleInstance("AndI"))
        assert len(st.open_goals) == 2
        left, right = (st.goals[g].sequent.conclusion for g in st.open_goals)
        assert (left, right) == (parse_formula("p", PQ), parse_formula("q", PQ))

    def test_imp_intro_discharges(self):
        st = init_proof(make_sequent([], parse_formula("p -> q", PQ)), PQ)
        st = apply_rule(st, 0, RuleInstance("ImpI"))
        goal = st.goals[st.open_goals[0]]
        assert goal.sequent.hypotheses[-1][1] == parse_formula("p", PQ)
        assert st.refinements[0].discharged

    def test_shape_mismatch(self):
        st = init_proof(make_sequent([], parse_formula("p -> q", PQ)), PQ)
        with pytest.raises(RuleShapeMismatch):
            apply_rule(st, 0, RuleInstance("AndI"))

    def test_no_such_goal(self):
        st = init_proof(make_sequent([], parse_formula("p -> q", PQ)), PQ)
        with pytest.raises(NoSuchGoal):
            apply_rule(st, 99, RuleInstance("ImpI"))


class TestQuantifierShift:
    def test_correct_order_closes(self):
        st = init_proof(shift_sequent(), BIN)
        st = apply_rule(st, 0, RuleInstance("ForallI"))
        st = apply_rule(st, st.open_goals[0], RuleInstance("ForallI"))
        st = apply_rule(
            st, st.open_goals[0],
            RuleInstance("ForallE", "forward", hyp="h1", witness=parse_term("x1", BIN)),
        )
        st = apply_rule(
            st, st.open_goals[0],
            RuleInstance("ForallE", "forward", hyp="h2", witness=parse_term("y1", BIN)),
        )
        st = apply_rule(st, st.open_goals[0], RuleInstance("Assumption"))
        assert st.complete
        assert extract_tree(st).size() == 5

    def test_wrong_order_eigenvariable(self):
        st = init_proof(shift_sequent(), BIN)
        st = apply_rule(
            st, 0, RuleInstance("ForallE", "forward", hyp="h1", witness=parse_term("c", BIN))
        )
        st = apply_rule(
            st, st.open_goals[0],
            RuleInstance("ForallE", "forward", hyp="h2", witness=parse_term("c", BIN)),
        )
        with pytest.raises(EigenvariableViolation):
            apply_rule(st, st.open_goals[0], RuleInstance("ForallI", fresh="c"))

    def test_fresh_parameters_never_repeat(self):
        st = init_proof(shift_sequent(), BIN)
        st = apply_rule(st, 0, RuleInstance("ForallI"))
        st = apply_rule(st, st.open_goals[0], RuleInstance("ForallI"))
        minted = [r.witness for r in st.refinements.values() if r.rule == "ForallI"]
        assert len(minted) == len(set(minted)) == 2


class TestForwardRules:
    def test_forall_elim_adds_instance(self):
        st = init_proof(shift_sequent(), BIN)
        st = apply_rule(
            st, 0, RuleInstance("ForallE", "forward", hyp="h1", witness=parse_term("c", BIN))
        )
        goal = st.goals[st.open_goals[0]]
        assert goal.sequent.hypotheses[-1][1] == parse_formula("(forall y) P(c, y)", BIN)

    def test_imp_elim_side_goal(self):
        seq = Sequent(
            (("h1", parse_formula("p -> q", PQ)),), parse_formula("q", PQ)
        )
        st = init_proof(seq, PQ)
        st = apply_rule(st, 0, RuleInstance("ImpE", "forward", hyp="h1"))
        assert len(st.open_goals) == 2
        continuation, side = st.open_goals
        assert st.goals[side].sequent.conclusion == parse_formula("p", PQ)
        assert st.goals[continuation].sequent.hypotheses[-1][1] == parse_formula("q", PQ)

    def test_missing_hypothesis(self):
        st = init_proof(make_sequent([], parse_formula("p", PQ)), PQ)
        with pytest.raises(NoSuchHypothesis):
            apply_rule(st, 0, RuleInstance("AndE1", "forward", hyp="h9"))

    def test_exists_elim_blocked_by_unknowns(self):
        seq = Sequent(
            (("h1", parse_formula("(exists x) P(x)", MONO)),),
            parse_formula("(exists x) Q(x)", MONO),
        )
        st = init_proof(seq, MONO)
        st = apply_rule(
            st, 0, RuleInstance("ExistsI", witness=Unknown(1))
        )
        with pytest.raises(EigenvariableViolation):
            apply_rule(st, st.open_goals[0], RuleInstance("ExistsE", "forward", hyp="h1"))


class TestUnknowns:
    def test_instantiate_then_close(self):
        seq = Sequent(
            (("h1", parse_formula("P(c)", Signature(predicates={"P": 1}, constants={"c"}))),),
            parse_formula(
                "(exists x) P(x)", Signature(predicates={"P": 1}, constants={"c"})
            ),
        )
        sig = Signature(predicates={"P": 1}, constants={"c"})
        st = init_proof(seq, sig)
        st = apply_rule(st, 0, RuleInstance("ExistsI", witness=Unknown(1)))
        goal = st.goals[st.open_goals[0]]
        assert goal.pending_unknowns == {Unknown(1)}
        with pytest.raises(UnknownsPresent):
            apply_rule(st, st.open_goals[0], RuleInstance("Assumption", hyp="h1"))
        st = instantiate_unknown(st, Unknown(1), parse_term("c", sig))
        st = apply_rule(st, st.open_goals[0], RuleInstance("Assumption"))
        assert st.complete

    def test_forall_intro_blocked_by_unknowns(self):
        sig = Signature(predicates={"P": 1, "Q": 1})
        seq = make_sequent(
            [], parse_formula("(exists y)(forall x)(P(x) \\/ Q(y))", sig)
        )
        st = init_proof(seq, sig)
        st = apply_rule(st, 0, RuleInstance("ExistsI", witness=Unknown(1)))
        with pytest.raises(EigenvariableViolation):
            apply_rule(st, st.open_goals[0], RuleInstance("ForallI"))


class TestListApplicable:
    def test_conjunction_goal(self):
        seq = Sequent(
            (("h1", parse_formula("p /\\ q", PQ)),), parse_formula("p /\\ q", PQ)
        )
        st = init_proof(seq, PQ)
        schemas = list_applicable(st, 0)
        rules = {(s["rule"], s["direction"]) for s in schemas}
        assert ("AndI", "backward") in rules
        assert ("AndE1", "forward") in rules and ("AndE2", "forward") in rules
        assert ("Assumption", "backward") in rules

    def test_forall_hypothesis(self):
        st = init_proof(shift_sequent(), BIN)
        schemas = list_applicable(st, 0)
        forall_e = [s for s in schemas if s["rule"] == "ForallE"]
        assert forall_e and forall_e[0]["hyp"] == "h1" and "witness" in forall_e[0]["args"]

    def test_bottom_goal_has_no_intro(self):
        st = init_proof(make_sequent([], parse_formula("false", PQ)), PQ)
        schemas = list_applicable(st, 0)
        assert {s["rule"] for s in schemas} == {"RAA"}

    def test_listed_schemas_apply_cleanly(self):
        seq = Sequent(
            (("h1", parse_formula("p /\\ q", PQ)), ("h2", parse_formula("p -> q", PQ))),
            parse_formula("q \\/ p", PQ),
        )
        st = init_proof(seq, PQ)
        for schema in list_applicable(st, 0):
            inst = RuleInstance(schema["rule"], schema["direction"], hyp=schema["hyp"])
            if schema["args"]:
                continue  # argument-taking schemas exercised elsewhere
            apply_rule(st, 0, inst)  # must not raise RuleShapeMismatch


class TestExtraction:
    def test_incomplete_state(self):
        st = init_proof(make_sequent([], parse_formula("p -> p", PQ)), PQ)
        with pytest.raises(ProofIncomplete):
            extract_tree(st)

    def test_imp_identity_tree(self):
        st = init_proof(make_sequent([], parse_formula("p -> p", PQ)), PQ)
        st = apply_rule(st, 0, RuleInstance("ImpI"))
        st = apply_rule(st, st.open_goals[0], RuleInstance("Assumption"))
        tree = extract_tree(st)
        assert tree.rule == "ImpI" and tree.discharged
        assert tree.children[0].rule == "supposition"


class TestDeterminism:
    def test_replayable_transitions(self):
        def build():
            st = init_proof(shift_sequent(), BIN)
            st = apply_rule(st, 0, RuleInstance("ForallI"))
            st = apply_rule(st, st.open_goals[0], RuleInstance("ForallI"))
            return st

        assert state_digest(build()) == state_digest(build())

    def test_undo_and_reapply_same_digest(self):
        st0 = init_proof(shift_sequent(), BIN)
        st1 = apply_rule(st0, 0, RuleInstance("ForallI"))
        st2 = apply_rule(st0, 0, RuleInstance("ForallI"))
        assert state_digest(st1) == state_digest(st2)
