"""Natural-deduction proof states and rule applications.

A proof is driven by refining goals: backward steps decompose a goal's
conclusion, forward steps decompose a named hypothesis into new
hypotheses on successor goals. Every application is recorded, so a
completed state unravels into a checkable derivation tree (see tree.py
and checker.py).

ProofState is a value: apply_rule returns a new state and never mutates
its input, which is what makes session frames replayable.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from .errors import (
    ArgumentMissing,
    EigenvariableViolation,
    MalformedSequent,
    NoMatchAtPosition,
    NoSuchGoal,
    NoSuchHypothesis,
    ProofIncomplete,
    RuleShapeMismatch,
    UnknownsPresent,
)
from .syntax import (
    And,
    Bottom,
    Equality,
    Exists,
    Forall,
    Formula,
    FunctionApp,
    Iff,
    Implies,
    Not,
    Or,
    Parameter,
    Signature,
    Term,
    Unknown,
    alpha_equal,
    free_symbols,
    free_symbols_term,
    instantiate_binder,
    make_parameter,
    node_at,
    print_formula,
    replace_at,
    substitute,
    term_str,
    unknowns_of,
    validate_formula,
    validate_term,
)

RULE_NAMES = (
    "AndI", "AndE1", "AndE2", "OrI1", "OrI2", "OrE", "ImpI", "ImpE",
    "IffI", "IffE1", "IffE2", "NotI", "NotE", "BottomE", "RAA",
    "ForallI", "ForallE", "ExistsI", "ExistsE", "Assumption",
    "EqualityRefl", "EqualityRewrite", "Definition",
)

BACKWARD, FORWARD = "backward", "forward"


# ---------------------------------------------------------------- sequents


@dataclass(frozen=True)
class Sequent:
    hypotheses: tuple[tuple[str, Formula], ...]
    conclusion: Formula

    def __post_init__(self):
        labels = [l for l, _ in self.hypotheses]
        if len(labels) != len(set(labels)):
            raise MalformedSequent("duplicate hypothesis labels")

    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.hypotheses)

    def formula(self, label: str) -> Formula:
        for l, f in self.hypotheses:
            if l == label:
                return f
        raise NoSuchHypothesis(label)

    def has(self, label: str) -> bool:
        return any(l == label for l, _ in self.hypotheses)

    def add(self, label: str, f: Formula) -> "Sequent":
        return Sequent(self.hypotheses + ((label, f),), self.conclusion)

    def with_conclusion(self, f: Formula) -> "Sequent":
        return Sequent(self.hypotheses, f)

    def replace_hypothesis(self, label: str, f: Formula) -> "Sequent":
        hyps = tuple((l, f if l == label else g) for l, g in self.hypotheses)
        return Sequent(hyps, self.conclusion)

    def to_json(self) -> dict:
        return {
            "hypotheses": [{"label": l, "formula": print_formula(f)} for l, f in self.hypotheses],
            "conclusion": print_formula(self.conclusion),
        }


def make_sequent(hypotheses: Iterable[Formula], conclusion: Formula) -> Sequent:
    hyps = tuple((f"h{i + 1}", f) for i, f in enumerate(hypotheses))
    return Sequent(hyps, conclusion)


# ---------------------------------------------------------------- origins


@dataclass(frozen=True)
class ExerciseHyp:
    kind: str = "exercise"


@dataclass(frozen=True)
class SuppositionHyp:
    kind: str = "supposition"


@dataclass(frozen=True)
class DerivedHyp:
    """Hypothesis justified by a forward step from earlier hypotheses."""

    rule: str
    principal: str
    minors: tuple[int, ...] = ()  # goal ids proving side premises
    equation: Optional[str] = None  # EqualityRewrite only
    kind: str = "derived"


Origin = ExerciseHyp | SuppositionHyp | DerivedHyp


# ---------------------------------------------------------------- goals


@dataclass(frozen=True)
class Goal:
    id: int
    sequent: Sequent
    origins: Mapping[str, Origin]
    introduced_parameters: frozenset[Parameter] = frozenset()

    @property
    def pending_unknowns(self) -> frozenset[Unknown]:
        out: frozenset[Unknown] = frozenset()
        for _, f in self.sequent.hypotheses:
            out |= unknowns_of(f)
        return out | unknowns_of(self.sequent.conclusion)


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    direction: str = BACKWARD
    hyp: Optional[str] = None           # principal hypothesis / assumption label
    witness: Optional[Term] = None      # ForallE, ExistsI
    fresh: Optional[str] = None         # nominated parameter (ForallI, ExistsE)
    disjunction: Optional[Formula] = None  # backward OrE
    equation: Optional[str] = None      # EqualityRewrite
    position: Optional[tuple[int, ...]] = None
    orientation: str = "lr"

    def describe(self) -> str:
        bits = [self.direction, self.rule]
        if self.hyp:
            bits.append(f"on {self.hyp}")
        if self.witness is not None:
            bits.append(term_str(self.witness))
        if self.fresh:
            bits.append(self.fresh)
        return " ".join(bits)


@dataclass(frozen=True)
class Refinement:
    """How a goal was closed: the rule plus the goals it spawned."""

    rule: str
    direction: str
    children: tuple[int, ...] = ()
    hyp: Optional[str] = None
    discharged: tuple[str, ...] = ()
    witness: Optional[Term] = None
    equation: Optional[str] = None


# ---------------------------------------------------------------- state


@dataclass(frozen=True)
class ProofState:
    exercise: Sequent
    signature: Signature
    goals: Mapping[int, Goal]
    open_goals: tuple[int, ...]
    refinements: Mapping[int, Refinement]
    next_goal: int
    next_label: int
    param_counters: Mapping[str, int]
    used_param_names: frozenset[str]

    def goal(self, goal_id: int) -> Goal:
        if goal_id not in self.open_goals:
            raise NoSuchGoal(goal_id)
        return self.goals[goal_id]

    @property
    def complete(self) -> bool:
        return not self.open_goals


def init_proof(exercise: Sequent, signature: Signature) -> ProofState:
    """Fresh state with a single goal equal to the exercise sequent."""
    seen = set()
    for label, f in exercise.hypotheses:
        if label in seen:
            raise MalformedSequent(f"duplicate hypothesis label {label!r}")
        seen.add(label)
    for f in [g for _, g in exercise.hypotheses] + [exercise.conclusion]:
        try:
            validate_formula(f, signature)
        except Exception as exc:
            raise MalformedSequent(str(exc)) from exc
        params, unknowns = free_symbols(f)
        if params:
            raise MalformedSequent(
                f"exercise mentions parameters {sorted(p.printed for p in params)}; "
                "declare such names as constants"
            )
        if unknowns:
            raise MalformedSequent("exercise mentions unresolved unknowns")
    goal = Goal(0, exercise, {l: ExerciseHyp() for l in exercise.labels()})
    label_ordinals = [int(m.group(1)) for l in exercise.labels() if (m := re.match(r"^h(\d+)$", l))]
    return ProofState(
        exercise=exercise,
        signature=signature,
        goals={0: goal},
        open_goals=(0,),
        refinements={},
        next_goal=1,
        next_label=max(label_ordinals, default=0) + 1,
        param_counters={},
        used_param_names=frozenset(),
    )


# ---------------------------------------------------------------- helpers


class _Builder:
    """Accumulates one apply_rule transition on top of an immutable state."""

    def __init__(self, state: ProofState, goal: Goal):
        self.state = state
        self.goal = goal
        self.goals = dict(state.goals)
        self.refinements = dict(state.refinements)
        self.next_goal = state.next_goal
        self.next_label = state.next_label
        self.param_counters = dict(state.param_counters)
        self.used_param_names = set(state.used_param_names)
        self.new_children: list[int] = []

    def fresh_label(self) -> str:
        label = f"h{self.next_label}"
        self.next_label += 1
        return label

    def taken_names(self) -> set[str]:
        sig = self.state.signature
        taken = set(self.used_param_names)
        taken |= set(sig.constants) | set(sig.functions) | set(sig.predicates)
        for g in self.goals.values():
            for _, f in g.sequent.hypotheses:
                taken |= {p.printed for p in free_symbols(f)[0]}
            taken |= {p.printed for p in free_symbols(g.sequent.conclusion)[0]}
        return taken

    def mint_parameter(self, base_hint: str, nominated: Optional[str]) -> Parameter:
        taken = self.taken_names()
        if nominated is not None:
            if nominated in taken:
                raise EigenvariableViolation(
                    f"{nominated!r} is not fresh: it already names an object in this proof"
                )
            param = make_parameter(nominated)
        else:
            base = re.sub(r"\d+$", "", base_hint) or "a"
            n = self.param_counters.get(base, 0) + 1
            while f"{base}{n}" in taken:
                n += 1
            self.param_counters[base] = n
            param = Parameter(base, n)
        self.used_param_names.add(param.printed)
        return param

    def child(self, sequent: Sequent, origins: Mapping[str, Origin],
              introduced: frozenset[Parameter] = frozenset()) -> int:
        gid = self.next_goal
        self.next_goal += 1
        self.goals[gid] = Goal(gid, sequent, dict(origins), introduced)
        self.new_children.append(gid)
        return gid

    def finish(self, refinement: Refinement) -> ProofState:
        self.refinements[self.goal.id] = refinement
        pos = self.state.open_goals.index(self.goal.id)
        open_goals = (
            self.state.open_goals[:pos]
            + tuple(self.new_children)
            + self.state.open_goals[pos + 1 :]
        )
        return ProofState(
            exercise=self.state.exercise,
            signature=self.state.signature,
            goals=self.goals,
            open_goals=open_goals,
            refinements=self.refinements,
            next_goal=self.next_goal,
            next_label=self.next_label,
            param_counters=self.param_counters,
            used_param_names=frozenset(self.used_param_names),
        )


def _require(value, what: str):
    if value is None:
        raise ArgumentMissing(f"rule requires {what}")
    return value


def _closure_guard(goal: Goal):
    if goal.pending_unknowns:
        pending = sorted(u.printed for u in goal.pending_unknowns)
        raise UnknownsPresent(f"instantiate {', '.join(pending)} before closing this goal")


# ---------------------------------------------------------------- apply_rule


def apply_rule(state: ProofState, goal_id: int, inst: RuleInstance) -> ProofState:
    """Apply one rule instance to an open goal, returning the new state."""
    goal = state.goal(goal_id)
    b = _Builder(state, goal)
    seq = goal.sequent
    concl = seq.conclusion

    if inst.direction not in (BACKWARD, FORWARD):
        raise ArgumentMissing(f"unknown direction {inst.direction!r}")

    if inst.direction == BACKWARD:
        return _apply_backward(b, seq, concl, inst)
    return _apply_forward(b, seq, concl, inst)


def _apply_backward(b: _Builder, seq: Sequent, concl: Formula, inst: RuleInstance) -> ProofState:
    goal = b.goal
    rule = inst.rule

    if rule == "Assumption":
        _closure_guard(goal)
        label = inst.hyp
        if label is None:
            label = next(
                (l for l, f in seq.hypotheses if alpha_equal(f, concl)),
                None,
            )
            if label is None:
                raise RuleShapeMismatch("no hypothesis matches the conclusion")
        else:
            if not seq.has(label):
                raise NoSuchHypothesis(label)
            if not alpha_equal(seq.formula(label), concl):
                raise RuleShapeMismatch(f"hypothesis {label} does not match the conclusion")
        return b.finish(Refinement(rule, BACKWARD, hyp=label))

    if rule == "EqualityRefl":
        _closure_guard(goal)
        if not isinstance(concl, Equality) or not alpha_equal_terms(concl.lhs, concl.rhs):
            raise RuleShapeMismatch("conclusion is not an equality between identical terms")
        return b.finish(Refinement(rule, BACKWARD))

    if rule == "AndI":
        if not isinstance(concl, And):
            raise RuleShapeMismatch("conclusion is not a conjunction")
        b.child(seq.with_conclusion(concl.left), goal.origins)
        b.child(seq.with_conclusion(concl.right), goal.origins)
        return b.finish(Refinement(rule, BACKWARD, children=tuple(b.new_children)))

    if rule in ("OrI1", "OrI2"):
        if not isinstance(concl, Or):
            raise RuleShapeMismatch("conclusion is not a disjunction")
        side = concl.left if rule == "OrI1" else concl.right
        b.child(seq.with_conclusion(side), goal.origins)
        return b.finish(Refinement(rule, BACKWARD, children=tuple(b.new_children)))

    if rule == "ImpI":
        if not isinstance(concl, Implies):
            raise RuleShapeMismatch("conclusion is not a conditional")
        label = b.fresh_label()
        origins = {**goal.origins, label: SuppositionHyp()}
        b.child(seq.add(label, concl.left).with_conclusion(concl.right), origins)
        return b.finish(
            Refinement(rule, BACKWARD, children=tuple(b.new_children), discharged=(label,))
        )

    if rule == "IffI":
        if not isinstance(concl, Iff):
            raise RuleShapeMismatch("conclusion is not a biconditional")
        b.child(seq.with_conclusion(Implies(concl.left, concl.right)), goal.origins)
        b.child(seq.with_conclusion(Implies(concl.right, concl.left)), goal.origins)
        return b.finish(Refinement(rule, BACKWARD, children=tuple(b.new_children)))

    if rule == "NotI":
        if not isinstance(concl, Not):
            raise RuleShapeMismatch("conclusion is not a negation")
        label = b.fresh_label()
        origins = {**goal.origins, label: SuppositionHyp()}
        b.child(seq.add(label, concl.body).with_conclusion(Bottom()), origins)
        return b.finish(
            Refinement(rule, BACKWARD, children=tuple(b.new_children), discharged=(label,))
        )

    if rule == "RAA":
        label = b.fresh_label()
        origins = {**goal.origins, label: SuppositionHyp()}
        b.child(seq.add(label, Not(concl)).with_conclusion(Bottom()), origins)
        return b.finish(
            Refinement(rule, BACKWARD, children=tuple(b.new_children), discharged=(label,))
        )

    if rule == "ForallI":
        if not isinstance(concl, Forall):
            raise RuleShapeMismatch("conclusion is not universally quantified")
        if goal.pending_unknowns:
            pending = sorted(u.printed for u in goal.pending_unknowns)
            raise EigenvariableViolation(
                f"cannot generalize while unknowns {', '.join(pending)} are unresolved"
            )
        param = b.mint_parameter(concl.var, inst.fresh)
        b.child(
            seq.with_conclusion(instantiate_binder(concl, param)),
            goal.origins,
            introduced=frozenset({param}),
        )
        return b.finish(
            Refinement(rule, BACKWARD, children=tuple(b.new_children), witness=param)
        )

    if rule == "ExistsI":
        if not isinstance(concl, Exists):
            raise RuleShapeMismatch("conclusion is not existentially quantified")
        witness = _require(inst.witness, "a witness term")
        validate_term(witness, b.state.signature, set())
        b.child(seq.with_conclusion(instantiate_binder(concl, witness)), goal.origins)
        return b.finish(
            Refinement(rule, BACKWARD, children=tuple(b.new_children), witness=witness)
        )

    if rule == "OrE":
        # General (cut-style) elimination: prove a chosen disjunction as a
        # side goal, then the conclusion from each disjunct.
        disj = _require(inst.disjunction, "the disjunction to reason by cases on")
        if not isinstance(disj, Or):
            raise RuleShapeMismatch("case split requires a disjunction")
        validate_formula(disj, b.state.signature)
        la, lb = b.fresh_label(), b.fresh_label()
        b.child(seq.with_conclusion(disj), goal.origins)
        b.child(seq.add(la, disj.left), {**goal.origins, la: SuppositionHyp()})
        b.child(seq.add(lb, disj.right), {**goal.origins, lb: SuppositionHyp()})
        return b.finish(
            Refinement(rule, BACKWARD, children=tuple(b.new_children), discharged=(la, lb))
        )

    if rule == "EqualityRewrite":
        eq_label = _require(inst.equation, "an equality hypothesis")
        if not seq.has(eq_label):
            raise NoSuchHypothesis(eq_label)
        eq = seq.formula(eq_label)
        if not isinstance(eq, Equality):
            raise RuleShapeMismatch(f"hypothesis {eq_label} is not an equality")
        path = _require(inst.position, "a position path")
        rewritten = _rewrite_with_equation(concl, path, eq, inst.orientation)
        b.child(seq.with_conclusion(rewritten), goal.origins)
        return b.finish(
            Refinement(
                rule, BACKWARD, children=tuple(b.new_children),
                hyp=eq_label, equation=eq_label,
            )
        )

    if rule in ("AndE1", "AndE2", "ImpE", "IffE1", "IffE2", "NotE", "BottomE",
                "ForallE", "ExistsE"):
        raise RuleShapeMismatch(f"{rule} is a forward rule; use direction forward")
    raise RuleShapeMismatch(f"unknown backward rule {inst.rule!r}")


def _apply_forward(b: _Builder, seq: Sequent, concl: Formula, inst: RuleInstance) -> ProofState:
    goal = b.goal
    rule = inst.rule
    label = _require(inst.hyp, "a hypothesis label")
    if not seq.has(label):
        raise NoSuchHypothesis(label)
    hyp = seq.formula(label)

    def derived(new_formula: Formula, minors: tuple[int, ...] = (),
                equation: Optional[str] = None) -> tuple[str, Mapping[str, Origin]]:
        new_label = b.fresh_label()
        origin = DerivedHyp(rule, label, minors, equation)
        return new_label, {**goal.origins, new_label: origin}

    if rule in ("AndE1", "AndE2"):
        if not isinstance(hyp, And):
            raise RuleShapeMismatch(f"hypothesis {label} is not a conjunction")
        part = hyp.left if rule == "AndE1" else hyp.right
        new_label, origins = derived(part)
        b.child(seq.add(new_label, part), origins)
        return b.finish(Refinement(rule, FORWARD, children=tuple(b.new_children), hyp=label))

    if rule == "ImpE":
        if not isinstance(hyp, Implies):
            raise RuleShapeMismatch(f"hypothesis {label} is not a conditional")
        side_gid = b.next_goal + 1  # continuation is created first
        new_label, origins = derived(hyp.right, minors=(side_gid,))
        b.child(seq.add(new_label, hyp.right), origins)
        b.child(seq.with_conclusion(hyp.left), goal.origins)
        return b.finish(Refinement(rule, FORWARD, children=tuple(b.new_children), hyp=label))

    if rule in ("IffE1", "IffE2"):
        if not isinstance(hyp, Iff):
            raise RuleShapeMismatch(f"hypothesis {label} is not a biconditional")
        premise, result = (
            (hyp.left, hyp.right) if rule == "IffE1" else (hyp.right, hyp.left)
        )
        side_gid = b.next_goal + 1
        new_label, origins = derived(result, minors=(side_gid,))
        b.child(seq.add(new_label, result), origins)
        b.child(seq.with_conclusion(premise), goal.origins)
        return b.finish(Refinement(rule, FORWARD, children=tuple(b.new_children), hyp=label))

    if rule == "NotE":
        if not isinstance(hyp, Not):
            raise RuleShapeMismatch(f"hypothesis {label} is not a negation")
        side_gid = b.next_goal + 1
        new_label, origins = derived(Bottom(), minors=(side_gid,))
        b.child(seq.add(new_label, Bottom()), origins)
        b.child(seq.with_conclusion(hyp.body), goal.origins)
        return b.finish(Refinement(rule, FORWARD, children=tuple(b.new_children), hyp=label))

    if rule == "BottomE":
        if not isinstance(hyp, Bottom):
            raise RuleShapeMismatch(f"hypothesis {label} is not falsum")
        _closure_guard(goal)
        return b.finish(Refinement(rule, FORWARD, hyp=label))

    if rule == "ForallE":
        if not isinstance(hyp, Forall):
            raise RuleShapeMismatch(f"hypothesis {label} is not universally quantified")
        witness = _require(inst.witness, "a witness term")
        validate_term(witness, b.state.signature, set())
        instance = instantiate_binder(hyp, witness)
        new_label, origins = derived(instance)
        b.child(seq.add(new_label, instance), origins)
        return b.finish(
            Refinement(rule, FORWARD, children=tuple(b.new_children), hyp=label, witness=witness)
        )

    if rule == "ExistsE":
        if not isinstance(hyp, Exists):
            raise RuleShapeMismatch(f"hypothesis {label} is not existentially quantified")
        if goal.pending_unknowns:
            pending = sorted(u.printed for u in goal.pending_unknowns)
            raise EigenvariableViolation(
                f"cannot pick a fresh witness while unknowns {', '.join(pending)} are unresolved"
            )
        param = b.mint_parameter(hyp.var, inst.fresh)
        sup_label = b.fresh_label()
        origins = {**goal.origins, sup_label: SuppositionHyp()}
        b.child(
            seq.add(sup_label, instantiate_binder(hyp, param)),
            origins,
            introduced=frozenset({param}),
        )
        return b.finish(
            Refinement(
                rule, FORWARD, children=tuple(b.new_children),
                hyp=label, discharged=(sup_label,), witness=param,
            )
        )

    if rule == "OrE":
        if not isinstance(hyp, Or):
            raise RuleShapeMismatch(f"hypothesis {label} is not a disjunction")
        la, lb = b.fresh_label(), b.fresh_label()
        b.child(seq.add(la, hyp.left), {**goal.origins, la: SuppositionHyp()})
        b.child(seq.add(lb, hyp.right), {**goal.origins, lb: SuppositionHyp()})
        return b.finish(
            Refinement(
                rule, FORWARD, children=tuple(b.new_children),
                hyp=label, discharged=(la, lb),
            )
        )

    if rule == "EqualityRewrite":
        eq_label = _require(inst.equation, "an equality hypothesis")
        if not seq.has(eq_label):
            raise NoSuchHypothesis(eq_label)
        eq = seq.formula(eq_label)
        if not isinstance(eq, Equality):
            raise RuleShapeMismatch(f"hypothesis {eq_label} is not an equality")
        path = _require(inst.position, "a position path")
        rewritten = _rewrite_with_equation(hyp, path, eq, inst.orientation)
        new_label, origins = derived(rewritten, equation=eq_label)
        b.child(seq.add(new_label, rewritten), origins)
        return b.finish(
            Refinement(
                rule, FORWARD, children=tuple(b.new_children),
                hyp=label, equation=eq_label,
            )
        )

    raise RuleShapeMismatch(f"unknown forward rule {inst.rule!r}")


def alpha_equal_terms(s: Term, t: Term) -> bool:
    return s == t  # terms contain no binders, so syntactic equality suffices


def _rewrite_with_equation(f: Formula, path: tuple[int, ...], eq: Equality,
                           orientation: str) -> Formula:
    if orientation not in ("lr", "rl"):
        raise ArgumentMissing("orientation must be 'lr' or 'rl'")
    source, target = (eq.lhs, eq.rhs) if orientation == "lr" else (eq.rhs, eq.lhs)
    try:
        node = node_at(f, path)
    except IndexError as exc:
        raise NoMatchAtPosition(str(exc)) from exc
    if node != source:
        raise NoMatchAtPosition(
            f"term at position {'.'.join(map(str, path)) or 'root'} is not {term_str(source)}"
        )
    return replace_at(f, path, target)


# ---------------------------------------------------------------- definitions


def apply_definition_step(
    state: ProofState,
    goal_id: int,
    target: Optional[str],
    new_formula: Formula,
) -> ProofState:
    """Record a definitional rewrite computed by the tactic layer.

    target None rewrites the conclusion (one child goal); a hypothesis
    label adds the rewritten formula as a derived hypothesis.
    """
    goal = state.goal(goal_id)
    b = _Builder(state, goal)
    seq = goal.sequent
    if target is None:
        b.child(seq.with_conclusion(new_formula), goal.origins)
        return b.finish(Refinement("Definition", BACKWARD, children=tuple(b.new_children)))
    if not seq.has(target):
        raise NoSuchHypothesis(target)
    new_label = b.fresh_label()
    origins = {**goal.origins, new_label: DerivedHyp("Definition", target)}
    b.child(seq.add(new_label, new_formula), origins)
    return b.finish(
        Refinement("Definition", FORWARD, children=tuple(b.new_children), hyp=target)
    )


# ---------------------------------------------------------------- unknowns


def instantiate_unknown(state: ProofState, unknown: Unknown, term: Term) -> ProofState:
    """Replace one unknown by a term everywhere in the state."""
    validate_term(term, state.signature, set())
    occurs = any(
        unknown in g.pending_unknowns for g in (state.goals[i] for i in state.open_goals)
    )
    if not occurs:
        raise ArgumentMissing(f"{unknown.printed} does not occur in any open goal")

    def fix_formula(f: Formula) -> Formula:
        return substitute(f, unknown, term)

    def fix_term(t: Optional[Term]) -> Optional[Term]:
        return None if t is None else _subst_in_term(t, unknown, term)

    goals = {
        gid: replace(
            g,
            sequent=Sequent(
                tuple((l, fix_formula(f)) for l, f in g.sequent.hypotheses),
                fix_formula(g.sequent.conclusion),
            ),
        )
        for gid, g in state.goals.items()
    }
    refinements = {
        gid: replace(r, witness=fix_term(r.witness)) for gid, r in state.refinements.items()
    }
    used = state.used_param_names | {p.printed for p in free_symbols_term(term)[0]}
    return replace(state, goals=goals, refinements=refinements, used_param_names=used)


def _subst_in_term(t: Term, unknown: Unknown, term: Term) -> Term:
    if t == unknown:
        return term
    if isinstance(t, FunctionApp):
        return FunctionApp(t.symbol, tuple(_subst_in_term(a, unknown, term) for a in t.args))
    return t


# ---------------------------------------------------------------- palette


def list_applicable(state: ProofState, goal_id: int) -> tuple[dict, ...]:
    """Rule schemas whose shape matches the goal, with argument placeholders."""
    goal = state.goal(goal_id)
    seq = goal.sequent
    concl = seq.conclusion
    out: list[dict] = []

    def schema(rule: str, direction: str, hyp: Optional[str] = None, args: tuple[str, ...] = ()):
        out.append({"rule": rule, "direction": direction, "hyp": hyp, "args": list(args)})

    match concl:
        case And():
            schema("AndI", BACKWARD)
        case Or():
            schema("OrI1", BACKWARD)
            schema("OrI2", BACKWARD)
        case Implies():
            schema("ImpI", BACKWARD)
        case Iff():
            schema("IffI", BACKWARD)
        case Not():
            schema("NotI", BACKWARD)
        case Forall():
            schema("ForallI", BACKWARD, args=("fresh?",))
        case Exists():
            schema("ExistsI", BACKWARD, args=("witness",))
        case Equality(lhs, rhs) if lhs == rhs:
            schema("EqualityRefl", BACKWARD)
        case _:
            pass
    schema("RAA", BACKWARD)
    if any(alpha_equal(f, concl) for _, f in seq.hypotheses):
        schema("Assumption", BACKWARD)
    if any(isinstance(f, Equality) for _, f in seq.hypotheses):
        schema("EqualityRewrite", BACKWARD, args=("equation", "position", "orientation?"))

    for label, f in seq.hypotheses:
        match f:
            case And():
                schema("AndE1", FORWARD, label)
                schema("AndE2", FORWARD, label)
            case Or():
                schema("OrE", FORWARD, label)
            case Implies():
                schema("ImpE", FORWARD, label)
            case Iff():
                schema("IffE1", FORWARD, label)
                schema("IffE2", FORWARD, label)
            case Not():
                schema("NotE", FORWARD, label)
            case Bottom():
                schema("BottomE", FORWARD, label)
            case Forall():
                schema("ForallE", FORWARD, label, args=("witness",))
            case Exists():
                schema("ExistsE", FORWARD, label, args=("fresh?",))
            case Equality():
                schema("EqualityRewrite", FORWARD, label, args=("equation", "position", "orientation?"))
            case _:
                pass
    return tuple(out)


# ---------------------------------------------------------------- projection


def goal_to_json(goal: Goal) -> dict:
    return {
        "id": goal.id,
        "hypotheses": [
            {"label": l, "formula": print_formula(f)} for l, f in goal.sequent.hypotheses
        ],
        "conclusion": print_formula(goal.sequent.conclusion),
        "introduced_parameters": sorted(p.printed for p in goal.introduced_parameters),
        "pending_unknowns": sorted(u.printed for u in goal.pending_unknowns),
    }


def state_to_json(state: ProofState) -> dict:
    """Deterministic projection of the whole state (used for frame hashes)."""
    return {
        "open_goals": [goal_to_json(state.goals[g]) for g in state.open_goals],
        "closed": [
            {
                "goal": goal_to_json(state.goals[gid]),
                "rule": r.rule,
                "direction": r.direction,
                "children": list(r.children),
                "hyp": r.hyp,
                "discharged": list(r.discharged),
                "witness": term_str(r.witness) if r.witness is not None else None,
            }
            for gid, r in sorted(state.refinements.items())
        ],
        "counters": {
            "goal": state.next_goal,
            "label": state.next_label,
            "params": dict(sorted(state.param_counters.items())),
        },
    }


def state_digest(state: ProofState) -> str:
    payload = json.dumps(state_to_json(state), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()
