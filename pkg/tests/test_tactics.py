"""Command layer: scripts, stepping, automation tiers, hints."""
import pytest

from logiclab.corpus import CORPUS_SCRIPTS, corpus_exercises
from logiclab.checker import check_tree
from logiclab.errors import (
    ArgumentMissing,
    AutomationCapExceeded,
    NothingToUndo,
    NotValid,
    ParseError,
    ProofIncomplete,
    QuantifiersPresent,
    RefutationOfProvable,
    SessionClosed,
)
from logiclab.kernel import RuleInstance, Sequent, init_proof, make_sequent, state_digest
from logiclab.parser import parse_formula
from logiclab.syntax import Signature, prop_signature
from logiclab.tactics import (
    AutoCmd,
    AutomationPolicy,
    QedCmd,
    RefuteCmd,
    RuleCmd,
    ScriptRunner,
    UndoCmd,
    UnfoldCmd,
    auto,
    hint,
    parse_command,
    parse_script,
    step,
)
from logiclab.tree import extract_tree

PQ = prop_signature("p", "q")
PQR = prop_signature("p", "q", "r")
MONO = Signature(predicates={"P": 1, "Q": 1})


class TestParsing:
    def test_rule_commands(self, prop_sig):
        cmd = parse_command("backward impl_intro", prop_sig)
        assert isinstance(cmd, RuleCmd) and cmd.instance.rule == "ImpI"
        cmd = parse_command("forward h1 forall_elim c", Signature(predicates={"P": 1}, constants={"c"}))
        assert cmd.instance.direction == "forward" and cmd.instance.hyp == "h1"

    def test_bare_assumption(self, prop_sig):
        cmd = parse_command("assumption h2", prop_sig)
        assert cmd.instance.rule == "Assumption" and cmd.instance.hyp == "h2"

    def test_unfold_grammar(self, prop_sig):
        cmd = parse_command("unfold union_member at h1 root", prop_sig)
        assert isinstance(cmd, UnfoldCmd)
        assert cmd.target == "h1" and cmd.position == ()
        cmd = parse_command("unfold diff_member at goal 0.1", prop_sig)
        assert cmd.target is None and cmd.position == (0, 1)

    def test_refute_takes_rest_of_line(self, prop_sig):
        cmd = parse_command("refute with p=1, q=0", prop_sig)
        assert isinstance(cmd, RefuteCmd) and cmd.model_text == "p=1, q=0"

    def test_instantiate(self, fo_sig):
        cmd = parse_command("instantiate ?1 := f(c)", fo_sig)
        assert cmd.unknown.ordinal == 1

    def test_bad_commands(self, prop_sig):
        for text in ["flurb", "backward", "forward h1", "auto x", "unfold d at"]:
            with pytest.raises((ParseError, ArgumentMissing)):
                parse_command(text, prop_sig)

    def test_script_skips_comments(self, prop_sig):
        script = parse_script("# intro\nbackward impl_intro\n\nassumption\nqed\n", prop_sig)
        assert len(script.commands) == 3


class TestStep:
    def test_prove_refute_qed_cycle(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        runner = ScriptRunner(seq, PQ)
        runner.run_text("backward impl_intro")
        runner.run_text("assumption")
        report = runner.run_text("qed")
        assert report.status == "proved"
        with pytest.raises(SessionClosed):
            runner.run_text("undo")

    def test_refute_accepted(self):
        seq = make_sequent([parse_formula("p -> q", PQ)], parse_formula("q -> p", PQ))
        runner = ScriptRunner(seq, PQ)
        report = runner.run_text("refute with p=0, q=1")
        assert report.status == "refuted"
        assert report.refutation is not None and report.refutation.refutes

    def test_refutation_of_provable(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        runner = ScriptRunner(seq, PQ)
        with pytest.raises(RefutationOfProvable):
            runner.run_text("refute with p=1")

    def test_qed_with_open_goals(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        runner = ScriptRunner(seq, PQ)
        with pytest.raises(ProofIncomplete):
            runner.run_text("qed")

    def test_undo_restores_previous_frame(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        runner = ScriptRunner(seq, PQ)
        before = state_digest(runner.state)
        runner.run_text("backward impl_intro")
        runner.run_text("undo")
        assert state_digest(runner.state) == before
        with pytest.raises(NothingToUndo):
            runner.run_text("undo")

    def test_auto_cap(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        runner = ScriptRunner(seq, PQ, policy=AutomationPolicy(max_level=1, budget=8))
        with pytest.raises(AutomationCapExceeded):
            runner.run_text("auto 2")


class TestAuto:
    def test_level0_noop(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        st = init_proof(seq, PQ)
        new_state, applied = auto(st, 0, 0, 64)
        assert new_state is st and applied == ()

    def test_level1_fixed_order(self):
        seq = Sequent(
            (("h1", parse_formula("p", PQ)), ("h2", parse_formula("q", PQ))),
            parse_formula("p /\\ q", PQ),
        )
        st = init_proof(seq, PQ)
        closed, applied = auto(st, 0, 1, 64)
        assert closed.complete
        assert [a.rule for a in applied] == ["AndI", "Assumption", "Assumption"]

    def test_level1_respects_budget(self):
        seq = Sequent(
            (("h1", parse_formula("p", PQ)), ("h2", parse_formula("q", PQ))),
            parse_formula("p /\\ q", PQ),
        )
        st = init_proof(seq, PQ)
        partial, applied = auto(st, 0, 1, 1)
        assert len(applied) == 1 and not partial.complete

    def test_level2_modus_ponens(self):
        seq = make_sequent([], parse_formula("((p -> q) /\\ p) -> q", PQ))
        st = init_proof(seq, PQ)
        closed, applied = auto(st, 0, 2, 10_000)
        assert closed.complete
        tree = extract_tree(closed)
        assert check_tree(tree, seq).ok

    def test_level2_not_valid_leaves_state(self):
        seq = make_sequent([], parse_formula("p -> q", PQ))
        st = init_proof(seq, PQ)
        with pytest.raises(NotValid):
            auto(st, 0, 2, 10_000)
        assert st.open_goals == (0,)

    def test_level2_rejects_quantifiers(self):
        seq = make_sequent([], parse_formula("(forall x) P(x)", MONO))
        st = init_proof(seq, MONO)
        with pytest.raises(QuantifiersPresent):
            auto(st, 0, 2, 10_000)

    def test_level_monotonicity(self):
        samples = [
            make_sequent([], parse_formula("p -> p", PQ)),
            Sequent(
                (("h1", parse_formula("p", PQ)), ("h2", parse_formula("q", PQ))),
                parse_formula("p /\\ q", PQ),
            ),
            Sequent((("h1", parse_formula("p /\\ q", PQ)),), parse_formula("q", PQ)),
        ]
        for seq in samples:
            st = init_proof(seq, PQ)
            by_level1, _ = auto(st, 0, 1, 10_000)
            if by_level1.complete:
                by_level2, _ = auto(st, 0, 2, 10_000)
                assert by_level2.complete

    def test_script_determinism(self):
        ex = next(e for e in corpus_exercises() if e.id == "union-of-intersection")
        script = parse_script(CORPUS_SCRIPTS[ex.id], ex.signature)

        def final_digest():
            runner = ScriptRunner(ex.sequent, ex.signature, ex.definitions, ex.automation_cap)
            for cmd in script.commands:
                runner.run(cmd)
            return state_digest(runner.state)

        assert final_digest() == final_digest()

    def test_automation_transparency(self):
        seq = make_sequent([], parse_formula("((p -> q) -> p) -> p", PQ))
        st = init_proof(seq, PQ)
        closed, applied = auto(st, 0, 2, 50_000)
        tree = extract_tree(closed)
        verdict = check_tree(tree, seq)
        assert verdict.ok, verdict.reason
        assert len(applied) == len(closed.refinements)


class TestHints:
    def test_forall_goal(self):
        sig = Signature(predicates={"P": 2})
        seq = Sequent(
            (("h1", parse_formula("(forall x)(forall y) P(x, y)", sig)),),
            parse_formula("(forall y)(forall x) P(x, y)", sig),
        )
        st = init_proof(seq, sig)
        assert hint(st, 0).rule_family == "ForallI"

    def test_exists_hypothesis_has_priority(self):
        sig = MONO
        seq = Sequent(
            (("h1", parse_formula("(exists x)(P(x) /\\ Q(x))", sig)),),
            parse_formula("(exists x) P(x)", sig),
        )
        st = init_proof(seq, sig)
        # forward elimination is recommended before the backward witness
        assert hint(st, 0).rule_family == "ExistsE"

    def test_assumption_first(self):
        seq = Sequent((("h1", parse_formula("p", PQ)),), parse_formula("p", PQ))
        st = init_proof(seq, PQ)
        assert hint(st, 0).rule_family == "Assumption"

    def test_hint_never_reveals_witnesses(self):
        sigc = Signature(predicates={"P": 1})
        seq = Sequent(
            (("h1", parse_formula("(forall x) P(x)", sigc)),),
            parse_formula("(exists x) P(x)", sigc),
        )
        st = init_proof(seq, sigc)
        h = hint(st, 0)
        assert "c1" not in h.text and "x1" not in h.text
