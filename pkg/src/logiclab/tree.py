"""Derivation trees: the static, checkable record of a finished proof.

Extraction unravels the kernel's refinement graph into a finite tree:
shared forward derivations are duplicated wherever they are used, so a
hypothesis consumed at two leaves appears as two copies of its little
derivation. Leaves are exercise assumptions or suppositions discharged
further up; every other node names a catalog rule.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import ProofIncomplete
from .kernel import DerivedHyp, ExerciseHyp, Goal, ProofState, SuppositionHyp
from .syntax import Formula, Signature, print_formula, unknowns_of

ASSUMPTION = "assumption"
SUPPOSITION = "supposition"


@dataclass(frozen=True)
class TreeNode:
    formula: Formula
    rule: str
    children: tuple["TreeNode", ...] = ()
    discharged: tuple[str, ...] = ()
    label: Optional[str] = None  # leaves only

    @property
    def is_leaf(self) -> bool:
        return self.rule in (ASSUMPTION, SUPPOSITION)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def extract_tree(state: ProofState) -> TreeNode:
    """Unravel a completed state into its derivation tree."""
    if state.open_goals:
        raise ProofIncomplete(state.open_goals)
    unresolved = sorted(
        {u.printed for g in state.goals.values() for u in g.pending_unknowns}
    )
    if unresolved:
        raise ProofIncomplete(detail=f"unresolved unknowns remain: {unresolved}")

    def build(goal_id: int) -> TreeNode:
        goal = state.goals[goal_id]
        r = state.refinements[goal_id]
        concl = goal.sequent.conclusion
        kids = r.children
        if r.rule == "Assumption":
            return resolve(goal, r.hyp)
        if r.rule == "EqualityRefl":
            return TreeNode(concl, "EqualityRefl")
        if r.rule == "BottomE" and r.direction == "forward":
            return TreeNode(concl, "BottomE", (resolve(goal, r.hyp),))
        if r.rule == "OrE":
            if r.direction == "forward":
                premises = (resolve(goal, r.hyp), build(kids[0]), build(kids[1]))
            else:
                premises = (build(kids[0]), build(kids[1]), build(kids[2]))
            return TreeNode(concl, "OrE", premises, discharged=r.discharged)
        if r.rule == "ExistsE":
            return TreeNode(
                concl, "ExistsE", (resolve(goal, r.hyp), build(kids[0])),
                discharged=r.discharged,
            )
        if r.rule == "EqualityRewrite" and r.direction == "backward":
            return TreeNode(concl, "EqualityRewrite", (resolve(goal, r.equation), build(kids[0])))
        if r.direction == "forward":
            # the forward step surfaces where its derived hypothesis is used
            return build(kids[0])
        if r.rule == "Definition":
            return TreeNode(concl, "Definition", (build(kids[0]),))
        return TreeNode(concl, r.rule, tuple(build(k) for k in kids), discharged=r.discharged)

    def resolve(goal: Goal, label: str) -> TreeNode:
        formula = goal.sequent.formula(label)
        origin = goal.origins[label]
        if isinstance(origin, ExerciseHyp):
            return TreeNode(formula, ASSUMPTION, label=label)
        if isinstance(origin, SuppositionHyp):
            return TreeNode(formula, SUPPOSITION, label=label)
        assert isinstance(origin, DerivedHyp)
        premises: list[TreeNode] = []
        if origin.rule == "EqualityRewrite":
            premises.append(resolve(goal, origin.equation))
        premises.append(resolve(goal, origin.principal))
        premises.extend(build(m) for m in origin.minors)
        return TreeNode(formula, origin.rule, tuple(premises))

    return build(0)


# ---------------------------------------------------------------- export


def tree_to_json(node: TreeNode) -> dict:
    out: dict = {
        "formula": print_formula(node.formula),
        "rule": node.rule,
        "children": [tree_to_json(c) for c in node.children],
        "discharged": list(node.discharged),
    }
    if node.label is not None:
        out["label"] = node.label
    return out


def tree_from_json(data: dict, signature: Signature) -> TreeNode:
    from .parser import parse_formula

    return TreeNode(
        formula=parse_formula(data["formula"], signature),
        rule=data["rule"],
        children=tuple(tree_from_json(c, signature) for c in data.get("children", ())),
        discharged=tuple(data.get("discharged", ())),
        label=data.get("label"),
    )


def tree_to_text(node: TreeNode, indent: int = 0) -> str:
    """Line-oriented form: root first, children indented two spaces."""
    pad = "  " * indent
    if node.is_leaf:
        line = f"{pad}{print_formula(node.formula)}   [{node.rule} {node.label}]"
    else:
        mark = f" discharging {', '.join(node.discharged)}" if node.discharged else ""
        line = f"{pad}{print_formula(node.formula)}   [{node.rule}{mark}]"
    lines = [line]
    lines.extend(tree_to_text(c, indent + 1) for c in node.children)
    return "\n".join(lines)


def tree_dumps(node: TreeNode) -> str:
    return json.dumps(tree_to_json(node), indent=2, sort_keys=True) + "\n"
