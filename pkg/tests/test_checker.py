"""The independent tree auditor: agreement with the kernel, totality on
garbage, and sensitivity to single-point mutations."""
import random

import pytest

from logiclab.checker import check_tree
from logiclab.corpus import CORPUS_SCRIPTS, corpus_exercises
from logiclab.kernel import RuleInstance, Sequent, apply_rule, init_proof, make_sequent
from logiclab.parser import parse_formula
from logiclab.syntax import Not, Parameter, PredApp, Signature, prop_signature
from logiclab.tactics import ScriptRunner, parse_script
from logiclab.tree import TreeNode, extract_tree

PQ = prop_signature("p", "q")
MONO = Signature(predicates={"P": 1, "Q": 1})


def proved_corpus_trees():
    out = []
    for ex in corpus_exercises():
        runner = ScriptRunner(ex.sequent, ex.signature, ex.definitions, ex.automation_cap)
        for cmd in parse_script(CORPUS_SCRIPTS[ex.id], ex.signature).commands:
            runner.run(cmd)
        if runner.status == "proved":
            out.append((ex, extract_tree(runner.state)))
    return out


def mutate(tree: TreeNode, path: tuple[int, ...], kind: str) -> TreeNode:
    """One-point mutation of the node at path: rule name, formula, or
    discharge set."""
    if not path:
        if kind == "rule":
            if tree.rule in ("assumption", "supposition"):
                flipped = "supposition" if tree.rule == "assumption" else "assumption"
                return TreeNode(tree.formula, flipped, (), (), tree.label)
            new_rule = "AndI" if tree.rule != "AndI" else "ImpE"
            return TreeNode(tree.formula, new_rule, tree.children, tree.discharged, tree.label)
        if kind == "formula":
            return TreeNode(Not(tree.formula), tree.rule, tree.children, tree.discharged, tree.label)
        new_discharge = () if tree.discharged else ("zz99",)
        if tree.rule in ("assumption", "supposition"):
            new_discharge = ("zz99",)
        return TreeNode(tree.formula, tree.rule, tree.children, new_discharge, tree.label)
    i, rest = path[0], path[1:]
    kids = list(tree.children)
    kids[i] = mutate(kids[i], rest, kind)
    return TreeNode(tree.formula, tree.rule, tuple(kids), tree.discharged, tree.label)


def all_paths(tree: TreeNode, prefix=()):
    yield prefix
    for i, kid in enumerate(tree.children):
        yield from all_paths(kid, prefix + (i,))


class TestAgreement:
    def test_corpus_trees_check(self):
        trees = proved_corpus_trees()
        assert len(trees) >= 10
        for ex, tree in trees:
            verdict = check_tree(tree, ex.sequent, ex.definitions)
            assert verdict.ok, f"{ex.id}: {verdict.reason}"

    def test_root_mismatch(self):
        st = init_proof(make_sequent([], parse_formula("p -> p", PQ)), PQ)
        st = apply_rule(st, 0, RuleInstance("ImpI"))
        st = apply_rule(st, st.open_goals[0], RuleInstance("Assumption"))
        tree = extract_tree(st)
        other = make_sequent([], parse_formula("q -> q", PQ))
        assert not check_tree(tree, other).ok


class TestTotality:
    def test_garbage_tree(self):
        junk = TreeNode(parse_formula("p", PQ), "NoSuchRule")
        verdict = check_tree(junk, make_sequent([], parse_formula("p", PQ)))
        assert not verdict.ok and "unknown rule" in verdict.reason

    def test_leaf_without_label(self):
        junk = TreeNode(parse_formula("p", PQ), "assumption")
        assert not check_tree(junk, make_sequent([], parse_formula("p", PQ))).ok

    def test_undischarged_supposition(self):
        leaf = TreeNode(parse_formula("p", PQ), "supposition", label="h5")
        verdict = check_tree(leaf, make_sequent([], parse_formula("p", PQ)))
        assert not verdict.ok and "never discharged" in verdict.reason

    def test_unknowns_rejected(self):
        f = PredApp("Q", (__import__("logiclab.syntax", fromlist=["Unknown"]).Unknown(1),))
        junk = TreeNode(f, "assumption", label="h1")
        claimed = Sequent((("h1", parse_formula("Q(c)", Signature(predicates={"Q": 1}, constants={"c"}))),),
                          parse_formula("Q(c)", Signature(predicates={"Q": 1}, constants={"c"})))
        assert not check_tree(junk, claimed).ok


class TestEigenvariables:
    def test_generalizing_an_open_parameter(self):
        # P(x1) |- (forall x) P(x) must not check: x1 occurs in the hypothesis
        sig = MONO
        hyp = parse_formula("P(x1)", sig)
        claimed = Sequent((("h1", hyp),), parse_formula("(forall x) P(x)", sig))
        bad = TreeNode(
            claimed.conclusion,
            "ForallI",
            (TreeNode(hyp, "assumption", label="h1"),),
        )
        verdict = check_tree(bad, claimed)
        assert not verdict.ok and "eigenvariable" in verdict.reason.lower()

    def test_existse_witness_in_conclusion(self):
        sig = MONO
        exists_hyp = parse_formula("(exists x) P(x)", sig)
        concl = parse_formula("P(x1)", sig)
        claimed = Sequent((("h1", exists_hyp),), concl)
        bad = TreeNode(
            concl, "ExistsE",
            (
                TreeNode(exists_hyp, "assumption", label="h1"),
                TreeNode(concl, "supposition", label="h2"),
            ),
            discharged=("h2",),
        )
        assert not check_tree(bad, claimed).ok


class TestSensitivity:
    def test_single_point_mutations_rejected(self):
        rng = random.Random(5)
        trees = proved_corpus_trees()
        for ex, tree in trees[:6]:
            paths = list(all_paths(tree))
            for path in paths:
                for kind in ("rule", "formula", "discharge"):
                    mutated = mutate(tree, path, kind)
                    if mutated == tree:
                        continue
                    verdict = check_tree(mutated, ex.sequent, ex.definitions)
                    assert not verdict.ok, (
                        f"{ex.id}: mutation {kind} at {path} survived the checker"
                    )
