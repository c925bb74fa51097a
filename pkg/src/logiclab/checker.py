"""Independent audit of derivation trees.

check_tree never trusts the kernel: it re-derives every node's
correctness from the tree alone, in one bottom-up pass (time linear in
tree size, with formula-local work per node). It is total on arbitrary
trees; a bad tree yields a verdict carrying the first violation found in
pre-order rather than an exception.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .definitions import Definition, definition_matches
from .kernel import Sequent
from .syntax import (
    And,
    Bottom,
    Equality,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Parameter,
    all_positions,
    alpha_equal,
    free_symbols,
    match_instantiation,
    node_at,
    parameters_of,
    replace_at,
    unknowns_of,
)
from .tree import ASSUMPTION, SUPPOSITION, TreeNode


@dataclass(frozen=True)
class Verdict:
    ok: bool
    path: Optional[tuple[int, ...]] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


_OK = Verdict(True)


class _Violation(Exception):
    def __init__(self, path: tuple[int, ...], reason: str):
        self.path = path
        self.reason = reason


def check_tree(tree: TreeNode, claimed: Sequent, defs: tuple[Definition, ...] = ()) -> Verdict:
    """ok iff tree is a correct derivation of claimed (defs in scope)."""
    try:
        claimed_hyps = dict(claimed.hypotheses)
    except Exception:
        return Verdict(False, (), "claimed sequent is malformed")
    try:
        open_leaves = _check(tree, (), claimed_hyps, defs)
        for label, (formula, path, kind) in sorted(open_leaves.items()):
            if kind == SUPPOSITION:
                raise _Violation(path, f"supposition {label} is never discharged")
        if not alpha_equal(tree.formula, claimed.conclusion):
            raise _Violation((), "root formula differs from the claimed conclusion")
    except _Violation as v:
        return Verdict(False, v.path, v.reason)
    return _OK


def _check(node: TreeNode, path, claimed_hyps, defs) -> dict:
    """Validate the subtree at node; return its open (undischarged) leaves
    as {label: (formula, path, kind)}. Raises _Violation on the first defect.

    Open exercise assumptions ride along so eigenvariable conditions can
    see every hypothesis a subtree depends on."""
    if not isinstance(node, TreeNode) or not isinstance(node.rule, str):
        raise _Violation(path, "not a derivation node")
    if unknowns_of(node.formula):
        raise _Violation(path, "formula contains unresolved unknowns")

    if node.rule == ASSUMPTION:
        _leaf_shape(node, path)
        if node.label not in claimed_hyps:
            raise _Violation(path, f"assumption label {node.label!r} is not a hypothesis")
        if not alpha_equal(node.formula, claimed_hyps[node.label]):
            raise _Violation(path, f"assumption {node.label} differs from the hypothesis")
        return {node.label: (node.formula, path, ASSUMPTION)}
    if node.rule == SUPPOSITION:
        _leaf_shape(node, path)
        if node.label in claimed_hyps:
            raise _Violation(path, f"supposition reuses hypothesis label {node.label!r}")
        return {node.label: (node.formula, path, SUPPOSITION)}

    child_open = [_check(c, path + (i,), claimed_hyps, defs) for i, c in enumerate(node.children)]
    for label in node.discharged:
        if label in claimed_hyps:
            raise _Violation(path, f"cannot discharge exercise hypothesis {label}")
    _check_rule(node, path, defs, child_open)

    merged: dict = {}
    discharged = set(node.discharged)
    for opens in child_open:
        for label, (formula, leaf_path, kind) in opens.items():
            if label in discharged:
                continue
            if label in merged and not alpha_equal(merged[label][0], formula):
                raise _Violation(leaf_path, f"label {label} names two different suppositions")
            merged[label] = (formula, leaf_path, kind)
    return merged


def _leaf_shape(node: TreeNode, path):
    if node.children:
        raise _Violation(path, "leaves cannot have premises")
    if node.discharged:
        raise _Violation(path, "leaves cannot discharge")
    if not node.label:
        raise _Violation(path, "leaf carries no label")


def _arity(node: TreeNode, path, n: int):
    if len(node.children) != n:
        raise _Violation(path, f"{node.rule} takes {n} premise(s), found {len(node.children)}")


def _no_discharge(node: TreeNode, path):
    if node.discharged:
        raise _Violation(path, f"{node.rule} does not discharge")


def _discharge_count(node: TreeNode, path, n: int):
    if len(node.discharged) != n:
        raise _Violation(path, f"{node.rule} must discharge exactly {n} label(s)")


def _supposition_formula(node: TreeNode, path, label: str, expected: Formula,
                         child_open: dict, child_index: int, others: list[dict]):
    """The discharged label must live only under the given child and match."""
    for j, opens in enumerate(others):
        if label in opens:
            raise _Violation(path, f"discharged label {label} leaks into premise {j}")
    if label in child_open:
        found = child_open[label][0]
        if not alpha_equal(found, expected):
            raise _Violation(path, f"discharged supposition {label} has the wrong formula")


def _open_parameters(opens: dict, exclude: frozenset[str] = frozenset()) -> frozenset[Parameter]:
    out: frozenset[Parameter] = frozenset()
    for label, (formula, _, _) in opens.items():
        if label in exclude:
            continue
        out |= parameters_of(formula)
    return out


def _check_rule(node: TreeNode, path, defs, child_open: list[dict]):
    f = node.formula
    kids = node.children
    rule = node.rule

    def kid(i: int) -> Formula:
        return kids[i].formula

    match rule:
        case "AndI":
            _arity(node, path, 2)
            _no_discharge(node, path)
            if not isinstance(f, And) or not (
                alpha_equal(kid(0), f.left) and alpha_equal(kid(1), f.right)
            ):
                raise _Violation(path, "conclusion is not the conjunction of the premises")
        case "AndE1" | "AndE2":
            _arity(node, path, 1)
            _no_discharge(node, path)
            premise = kid(0)
            if not isinstance(premise, And):
                raise _Violation(path, "premise is not a conjunction")
            part = premise.left if rule == "AndE1" else premise.right
            if not alpha_equal(f, part):
                raise _Violation(path, "conclusion is not the stated conjunct")
        case "OrI1" | "OrI2":
            _arity(node, path, 1)
            _no_discharge(node, path)
            if not isinstance(f, Or):
                raise _Violation(path, "conclusion is not a disjunction")
            side = f.left if rule == "OrI1" else f.right
            if not alpha_equal(kid(0), side):
                raise _Violation(path, "premise is not the stated disjunct")
        case "OrE":
            _arity(node, path, 3)
            _discharge_count(node, path, 2)
            disj = kid(0)
            if not isinstance(disj, Or):
                raise _Violation(path, "first premise is not a disjunction")
            la, lb = node.discharged
            if la == lb:
                raise _Violation(path, "case labels must differ")
            if not (alpha_equal(kid(1), f) and alpha_equal(kid(2), f)):
                raise _Violation(path, "case premises must conclude the node formula")
            _supposition_formula(node, path, la, disj.left, child_open[1], 1,
                                 [child_open[0], child_open[2]])
            _supposition_formula(node, path, lb, disj.right, child_open[2], 2,
                                 [child_open[0], child_open[1]])
        case "ImpI":
            _arity(node, path, 1)
            _discharge_count(node, path, 1)
            if not isinstance(f, Implies):
                raise _Violation(path, "conclusion is not a conditional")
            if not alpha_equal(kid(0), f.right):
                raise _Violation(path, "premise is not the consequent")
            _supposition_formula(node, path, node.discharged[0], f.left, child_open[0], 0, [])
        case "ImpE":
            _arity(node, path, 2)
            _no_discharge(node, path)
            major = kid(0)
            if not isinstance(major, Implies):
                raise _Violation(path, "first premise is not a conditional")
            if not alpha_equal(kid(1), major.left):
                raise _Violation(path, "second premise is not the antecedent")
            if not alpha_equal(f, major.right):
                raise _Violation(path, "conclusion is not the consequent")
        case "IffI":
            _arity(node, path, 2)
            _no_discharge(node, path)
            if not isinstance(f, Iff):
                raise _Violation(path, "conclusion is not a biconditional")
            if not (
                alpha_equal(kid(0), Implies(f.left, f.right))
                and alpha_equal(kid(1), Implies(f.right, f.left))
            ):
                raise _Violation(path, "premises are not the two conditionals")
        case "IffE1" | "IffE2":
            _arity(node, path, 2)
            _no_discharge(node, path)
            major = kid(0)
            if not isinstance(major, Iff):
                raise _Violation(path, "first premise is not a biconditional")
            premise, result = (
                (major.left, major.right) if rule == "IffE1" else (major.right, major.left)
            )
            if not alpha_equal(kid(1), premise):
                raise _Violation(path, "second premise does not match the biconditional")
            if not alpha_equal(f, result):
                raise _Violation(path, "conclusion does not match the biconditional")
        case "NotI":
            _arity(node, path, 1)
            _discharge_count(node, path, 1)
            if not isinstance(f, Not):
                raise _Violation(path, "conclusion is not a negation")
            if not isinstance(kid(0), Bottom):
                raise _Violation(path, "premise must be falsum")
            _supposition_formula(node, path, node.discharged[0], f.body, child_open[0], 0, [])
        case "NotE":
            _arity(node, path, 2)
            _no_discharge(node, path)
            major = kid(0)
            if not isinstance(major, Not):
                raise _Violation(path, "first premise is not a negation")
            if not alpha_equal(kid(1), major.body):
                raise _Violation(path, "second premise is not the negated formula")
            if not isinstance(f, Bottom):
                raise _Violation(path, "conclusion must be falsum")
        case "BottomE":
            _arity(node, path, 1)
            _no_discharge(node, path)
            if not isinstance(kid(0), Bottom):
                raise _Violation(path, "premise must be falsum")
        case "RAA":
            _arity(node, path, 1)
            _discharge_count(node, path, 1)
            if not isinstance(kid(0), Bottom):
                raise _Violation(path, "premise must be falsum")
            _supposition_formula(node, path, node.discharged[0], Not(f), child_open[0], 0, [])
        case "ForallI":
            _arity(node, path, 1)
            _no_discharge(node, path)
            if not isinstance(f, Forall):
                raise _Violation(path, "conclusion is not universally quantified")
            matched, witness = match_instantiation(f.body, f.var, kid(0))
            if not matched:
                raise _Violation(path, "premise is not an instance of the quantified body")
            if witness is not None:
                if not isinstance(witness, Parameter):
                    raise _Violation(path, "only a parameter can be generalized")
                if witness in parameters_of(f):
                    raise _Violation(path, "eigenvariable occurs in the conclusion")
                if witness in _open_parameters(child_open[0]):
                    raise _Violation(
                        path, "eigenvariable occurs in an undischarged hypothesis"
                    )
        case "ForallE":
            _arity(node, path, 1)
            _no_discharge(node, path)
            major = kid(0)
            if not isinstance(major, Forall):
                raise _Violation(path, "premise is not universally quantified")
            matched, _ = match_instantiation(major.body, major.var, f)
            if not matched:
                raise _Violation(path, "conclusion is not an instance of the premise")
        case "ExistsI":
            _arity(node, path, 1)
            _no_discharge(node, path)
            if not isinstance(f, Exists):
                raise _Violation(path, "conclusion is not existentially quantified")
            matched, _ = match_instantiation(f.body, f.var, kid(0))
            if not matched:
                raise _Violation(path, "premise is not an instance of the conclusion")
        case "ExistsE":
            _arity(node, path, 2)
            _discharge_count(node, path, 1)
            major = kid(0)
            if not isinstance(major, Exists):
                raise _Violation(path, "first premise is not existentially quantified")
            if not alpha_equal(kid(1), f):
                raise _Violation(path, "second premise must conclude the node formula")
            label = node.discharged[0]
            if label in child_open[0]:
                raise _Violation(path, f"discharged label {label} leaks into the first premise")
            if label not in child_open[1]:
                # vacuous witness use: still require the eigenvariable story to
                # be tellable, which a vacuous discharge trivially is
                return
            supposition = child_open[1][label][0]
            matched, witness = match_instantiation(major.body, major.var, supposition)
            if not matched:
                raise _Violation(path, "discharged supposition does not instantiate the premise")
            if witness is None:
                return
            if not isinstance(witness, Parameter):
                raise _Violation(path, "existential witness must be a parameter")
            if witness in parameters_of(f):
                raise _Violation(path, "witness parameter occurs in the conclusion")
            if witness in parameters_of(major):
                raise _Violation(path, "witness parameter occurs in the existential premise")
            if witness in _open_parameters(child_open[1], exclude=frozenset({label})):
                raise _Violation(path, "witness parameter occurs in an undischarged hypothesis")
        case "EqualityRefl":
            _arity(node, path, 0)
            _no_discharge(node, path)
            if not isinstance(f, Equality) or f.lhs != f.rhs:
                raise _Violation(path, "conclusion is not a reflexive equality")
        case "EqualityRewrite":
            _arity(node, path, 2)
            _no_discharge(node, path)
            eq = kid(0)
            if not isinstance(eq, Equality):
                raise _Violation(path, "first premise is not an equality")
            if not _rewrites_to(kid(1), f, eq):
                raise _Violation(path, "conclusion is not a one-position rewrite of the premise")
        case "Definition":
            _arity(node, path, 1)
            _no_discharge(node, path)
            if not _definition_rewrites_to(kid(0), f, defs):
                raise _Violation(path, "no registered definition relates premise and conclusion")
        case _:
            raise _Violation(path, f"unknown rule {rule!r}")


def _rewrites_to(source: Formula, target: Formula, eq: Equality) -> bool:
    """target is source with one addressed term flipped along eq (or equal,
    for a degenerate rewrite with identical sides)."""
    if eq.lhs == eq.rhs:
        return alpha_equal(source, target)
    for path in all_positions(source):
        try:
            sub = node_at(source, path)
        except IndexError:
            continue
        if sub == eq.lhs and replace_at(source, path, eq.rhs) == target:
            return True
        if sub == eq.rhs and replace_at(source, path, eq.lhs) == target:
            return True
    return False


def _definition_rewrites_to(source: Formula, target: Formula, defs) -> bool:
    for d in defs:
        for path in all_positions(source, formulas_only=True):
            sub = node_at(source, path)
            for rewritten in definition_matches(d, sub):
                if alpha_equal(replace_at(source, path, rewritten), target):
                    return True
    return False
