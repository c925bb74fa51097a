"""The scriptable command layer on top of the kernel.

Scripts are one command per line (``#`` starts a comment):

    backward <rule> [args]
    forward <hyplabel> <rule> [args]
    assumption [hyplabel]
    unfold <def> at <target> <path>      # target: goal | hyp label; path: root | 0.1
    fold <def> at <target> <path>
    auto <level>
    instantiate ?<n> := <term>
    refute with <model-text>
    undo
    qed

The same command strings travel over the HTTP API. Execution is
deterministic; automation applies rules in a fixed documented order and
records every step as an ordinary derivation node.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

from .definitions import Definition, fold, unfold
from .errors import (
    ArgumentMissing,
    AutomationCapExceeded,
    LogicError,
    NoMatchAtPosition,
    NoSuchGoal,
    NotValid,
    NothingToUndo,
    ParseError,
    ProofIncomplete,
    QuantifiersPresent,
    RefutationOfProvable,
    SessionClosed,
    UnknownDefinition,
)
from .kernel import (
    ProofState,
    RuleInstance,
    Sequent,
    apply_definition_step,
    apply_rule,
    init_proof,
    instantiate_unknown,
)
from .models import RefutationVerdict, check_refutation, parse_model
from .oracle import truth_table_valid
from .parser import parse_formula, parse_term
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
    PredApp,
    Signature,
    Unknown,
    alpha_equal,
    is_propositional,
    prop_symbols,
)

# ---------------------------------------------------------------- commands


@dataclass(frozen=True)
class RuleCmd:
    instance: RuleInstance


@dataclass(frozen=True)
class UnfoldCmd:
    defname: str
    target: Optional[str]  # None rewrites the conclusion
    position: tuple[int, ...]


@dataclass(frozen=True)
class FoldCmd:
    defname: str
    target: Optional[str]
    position: tuple[int, ...]


@dataclass(frozen=True)
class AutoCmd:
    level: int


@dataclass(frozen=True)
class InstantiateCmd:
    unknown: Unknown
    term: object


@dataclass(frozen=True)
class RefuteCmd:
    model_text: str


@dataclass(frozen=True)
class UndoCmd:
    pass


@dataclass(frozen=True)
class QedCmd:
    pass


Command = Union[RuleCmd, UnfoldCmd, FoldCmd, AutoCmd, InstantiateCmd, RefuteCmd, UndoCmd, QedCmd]


@dataclass(frozen=True)
class AutomationPolicy:
    max_level: int = 1
    budget: int = 64

    def __post_init__(self):
        if self.max_level not in (0, 1, 2):
            raise ValueError("automation level must be 0, 1, or 2")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")

    def to_json(self) -> dict:
        return {"max_level": self.max_level, "budget": self.budget}

    @staticmethod
    def from_json(data: dict) -> "AutomationPolicy":
        return AutomationPolicy(data.get("max_level", 1), data.get("budget", 64))


# ---------------------------------------------------------------- script parsing

SCRIPT_RULE_NAMES = {
    "and_intro": "AndI",
    "and_elim1": "AndE1",
    "and_elim2": "AndE2",
    "or_intro1": "OrI1",
    "or_intro2": "OrI2",
    "or_elim": "OrE",
    "impl_intro": "ImpI",
    "impl_elim": "ImpE",
    "iff_intro": "IffI",
    "iff_elim1": "IffE1",
    "iff_elim2": "IffE2",
    "not_intro": "NotI",
    "not_elim": "NotE",
    "bottom_elim": "BottomE",
    "raa": "RAA",
    "forall_intro": "ForallI",
    "forall_elim": "ForallE",
    "exists_intro": "ExistsI",
    "exists_elim": "ExistsE",
    "assumption": "Assumption",
    "eq_refl": "EqualityRefl",
    "eq_rewrite": "EqualityRewrite",
}


def _parse_path(text: str) -> tuple[int, ...]:
    if text == "root":
        return ()
    try:
        return tuple(int(part) for part in text.split("."))
    except ValueError:
        raise ParseError(1, "a position path like 'root' or '0.1'", text) from None


def _split_words(rest: str, n: int) -> tuple[list[str], str]:
    """First n whitespace words plus the remaining text."""
    words = []
    remaining = rest.strip()
    for _ in range(n):
        if not remaining:
            return words, ""
        parts = remaining.split(None, 1)
        words.append(parts[0])
        remaining = parts[1] if len(parts) > 1 else ""
    return words, remaining


def parse_command(line: str, sig: Signature) -> Command:
    """One script-grammar line into a Command."""
    text = line.strip()
    if not text or text.startswith("#"):
        raise ParseError(1, "a command", "blank line")
    words = text.split(None, 1)
    head = words[0]
    rest = words[1] if len(words) > 1 else ""

    if head == "undo":
        _no_trailing(rest)
        return UndoCmd()
    if head == "qed":
        _no_trailing(rest)
        return QedCmd()
    if head == "auto":
        try:
            level = int(rest.strip())
        except ValueError:
            raise ParseError(1, "an automation level 0..2", rest.strip()) from None
        return AutoCmd(level)
    if head == "assumption":
        label = rest.strip() or None
        return RuleCmd(RuleInstance("Assumption", "backward", hyp=label))
    if head == "refute":
        sub, model_text = _split_words(rest, 1)
        if not sub or sub[0] != "with" or not model_text:
            raise ParseError(1, "refute with <model-text>", text)
        return RefuteCmd(model_text)
    if head == "instantiate":
        if ":=" not in rest:
            raise ParseError(1, "instantiate ?<n> := <term>", text)
        lhs, rhs = rest.split(":=", 1)
        lhs = lhs.strip()
        if not lhs.startswith("?") or not lhs[1:].isdigit():
            raise ParseError(1, "an unknown like ?1", lhs)
        return InstantiateCmd(Unknown(int(lhs[1:])), parse_term(rhs.strip(), sig))
    if head in ("unfold", "fold"):
        parts = rest.split()
        if len(parts) != 4 or parts[1] != "at":
            raise ParseError(1, f"{head} <def> at <target> <path>", text)
        defname, _, target, path = parts
        cmd_cls = UnfoldCmd if head == "unfold" else FoldCmd
        return cmd_cls(defname, None if target == "goal" else target, _parse_path(path))
    if head == "backward":
        picked, args = _split_words(rest, 1)
        if len(picked) != 1:
            raise ParseError(1, "backward <rule> [args]", text)
        return RuleCmd(_backward_instance(picked[0], args, sig))
    if head == "forward":
        picked, args = _split_words(rest, 2)
        if len(picked) != 2:
            raise ParseError(1, "forward <hyplabel> <rule> [args]", text)
        label, name = picked
        return RuleCmd(_forward_instance(name, label, args, sig))
    raise ParseError(1, "a command", head)


def _no_trailing(rest: str):
    if rest.strip():
        raise ParseError(1, "end of command", rest.strip())


def _rule_name(name: str) -> str:
    if name not in SCRIPT_RULE_NAMES:
        raise ParseError(1, "a rule name", name)
    return SCRIPT_RULE_NAMES[name]


def _backward_instance(name: str, args: str, sig: Signature) -> RuleInstance:
    rule = _rule_name(name)
    args = args.strip()
    if rule == "ExistsI":
        if not args:
            raise ArgumentMissing("exists_intro requires a witness term")
        return RuleInstance(rule, "backward", witness=parse_term(args, sig))
    if rule == "ForallI":
        return RuleInstance(rule, "backward", fresh=args or None)
    if rule == "OrE":
        if not args:
            raise ArgumentMissing("backward or_elim requires a disjunction formula")
        return RuleInstance(rule, "backward", disjunction=parse_formula(args, sig))
    if rule == "Assumption":
        return RuleInstance(rule, "backward", hyp=args or None)
    if rule == "EqualityRewrite":
        parts = args.split()
        if len(parts) not in (2, 3):
            raise ArgumentMissing("eq_rewrite requires <eqlabel> <path> [lr|rl]")
        orientation = parts[2] if len(parts) == 3 else "lr"
        return RuleInstance(
            rule, "backward", equation=parts[0],
            position=_parse_path(parts[1]), orientation=orientation,
        )
    _no_trailing(args)
    return RuleInstance(rule, "backward")


def _forward_instance(name: str, label: str, args: str, sig: Signature) -> RuleInstance:
    rule = _rule_name(name)
    args = args.strip()
    if rule == "ForallE":
        if not args:
            raise ArgumentMissing("forall_elim requires a witness term")
        return RuleInstance(rule, "forward", hyp=label, witness=parse_term(args, sig))
    if rule == "ExistsE":
        return RuleInstance(rule, "forward", hyp=label, fresh=args or None)
    if rule == "EqualityRewrite":
        parts = args.split()
        if len(parts) not in (2, 3):
            raise ArgumentMissing("eq_rewrite requires <eqlabel> <path> [lr|rl]")
        orientation = parts[2] if len(parts) == 3 else "lr"
        return RuleInstance(
            rule, "forward", hyp=label, equation=parts[0],
            position=_parse_path(parts[1]), orientation=orientation,
        )
    _no_trailing(args)
    return RuleInstance(rule, "forward", hyp=label)


@dataclass(frozen=True)
class Script:
    commands: tuple[Command, ...]
    lines: tuple[str, ...]


def parse_script(text: str, sig: Signature) -> Script:
    commands: list[Command] = []
    lines: list[str] = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        commands.append(parse_command(stripped, sig))
        lines.append(stripped)
    return Script(tuple(commands), tuple(lines))


# ---------------------------------------------------------------- rewriting


def rewrite_definition(
    state: ProofState,
    goal_id: int,
    target: Optional[str],
    defname: str,
    direction: str,
    position: tuple[int, ...],
    defs: Sequence[Definition],
) -> ProofState:
    """Unfold or fold one addressed subformula of the goal conclusion
    (target None) or of a hypothesis (adds the rewritten hypothesis)."""
    defn = next((d for d in defs if d.name == defname), None)
    if defn is None:
        raise UnknownDefinition(defname)
    goal = state.goal(goal_id)
    formula = goal.sequent.conclusion if target is None else goal.sequent.formula(target)
    from .syntax import node_at, replace_at

    try:
        sub = node_at(formula, position)
    except IndexError as exc:
        raise NoMatchAtPosition(str(exc)) from exc
    if not _is_formula(sub):
        raise NoMatchAtPosition("position addresses a term, not a subformula")
    rewritten = unfold(defn, sub) if direction == "unfold" else fold(defn, sub)
    new_formula = replace_at(formula, position, rewritten)
    return apply_definition_step(state, goal_id, target, new_formula)


def _is_formula(node) -> bool:
    from .syntax import BoundVar, Constant, FunctionApp, Parameter
    from .syntax import Unknown as UnknownTerm

    return not isinstance(node, (BoundVar, Constant, FunctionApp, Parameter, UnknownTerm))


# ---------------------------------------------------------------- automation


def auto(
    state: ProofState,
    goal_id: int,
    level: int,
    budget: int,
    defs: Sequence[Definition] = (),
) -> tuple[ProofState, tuple[RuleInstance, ...]]:
    """Tiered automation on one goal (and the goals it spawns).

    Level 0 is a no-op. Level 1 deterministically applies only safe,
    invertible steps (Assumption, backward AndI/ImpI/IffI/ForallI,
    forward AndE), backward before forward, goals in id order, at most
    ``budget`` applications. Level 2 decides propositional goals with the
    truth-table oracle, then builds a complete proof (RAA wrapper,
    invertible saturation, case splits on atoms in sorted order); an
    invalid goal reports NotValid without touching the state.
    """
    if level not in (0, 1, 2):
        raise ArgumentMissing("automation level must be 0, 1, or 2")
    state.goal(goal_id)  # raises NoSuchGoal when not open
    if level == 0:
        return state, ()
    runner = _AutoRun(state, budget)
    if level == 1:
        runner.safe_saturate({goal_id}, strict_budget=False)
        return runner.state, tuple(runner.applied)
    goal = state.goals[goal_id]
    formulas = [f for _, f in goal.sequent.hypotheses] + [goal.sequent.conclusion]
    if not all(is_propositional(f) for f in formulas):
        raise QuantifiersPresent("level 2 automation handles propositional goals only")
    if not truth_table_valid(goal.sequent):
        raise NotValid("the goal is not valid; refute it instead")
    runner.prove(goal_id)
    return runner.state, tuple(runner.applied)


class _AutoRun:
    """Mutable cursor over successive states during one automation call."""

    def __init__(self, state: ProofState, budget: int):
        self.state = state
        self.budget = budget
        self.applied: list[RuleInstance] = []

    def _apply(self, goal_id: int, inst: RuleInstance) -> tuple[int, ...]:
        if self.budget <= 0:
            raise AutomationCapExceeded("automation budget exhausted")
        self.budget -= 1
        self.state = apply_rule(self.state, goal_id, inst)
        self.applied.append(inst)
        return self.state.refinements[goal_id].children

    # ---- level 1

    def safe_saturate(self, roots: set[int], strict_budget: bool) -> None:
        active = set(roots)
        while True:
            open_active = [g for g in self.state.open_goals if g in active]
            step = self._first_safe_step(open_active)
            if step is None:
                return
            goal_id, inst = step
            if self.budget <= 0:
                if strict_budget:
                    raise AutomationCapExceeded("automation budget exhausted")
                return
            children = self._apply(goal_id, inst)
            active.update(children)

    def _first_safe_step(self, goal_ids) -> Optional[tuple[int, RuleInstance]]:
        for gid in goal_ids:
            goal = self.state.goals[gid]
            seq = goal.sequent
            concl = seq.conclusion
            if not goal.pending_unknowns and any(
                alpha_equal(f, concl) for _, f in seq.hypotheses
            ):
                return gid, RuleInstance("Assumption", "backward")
            if isinstance(concl, And):
                return gid, RuleInstance("AndI", "backward")
            if isinstance(concl, Implies):
                return gid, RuleInstance("ImpI", "backward")
            if isinstance(concl, Iff):
                return gid, RuleInstance("IffI", "backward")
            if isinstance(concl, Forall) and not goal.pending_unknowns:
                return gid, RuleInstance("ForallI", "backward")
            for label, f in seq.hypotheses:
                if isinstance(f, And):
                    for rule, part in (("AndE1", f.left), ("AndE2", f.right)):
                        if not any(alpha_equal(g, part) for _, g in seq.hypotheses):
                            return gid, RuleInstance(rule, "forward", hyp=label)
        return None

    # ---- level 2

    def prove(self, goal_id: int) -> None:
        goal = self.state.goals[goal_id]
        seq = goal.sequent
        concl = seq.conclusion
        if any(alpha_equal(f, concl) for _, f in seq.hypotheses):
            self._apply(goal_id, RuleInstance("Assumption", "backward"))
            return
        match concl:
            case And():
                a, b = self._apply(goal_id, RuleInstance("AndI", "backward"))
                self.prove(a)
                self.prove(b)
            case Implies():
                (child,) = self._apply(goal_id, RuleInstance("ImpI", "backward"))
                self.prove(child)
            case Iff():
                a, b = self._apply(goal_id, RuleInstance("IffI", "backward"))
                self.prove(a)
                self.prove(b)
            case Not():
                (child,) = self._apply(goal_id, RuleInstance("NotI", "backward"))
                self.refute(child)
            case Bottom():
                self.refute(goal_id)
            case Or(l, r):
                if truth_table_valid(seq.with_conclusion(l)):
                    (child,) = self._apply(goal_id, RuleInstance("OrI1", "backward"))
                    self.prove(child)
                elif truth_table_valid(seq.with_conclusion(r)):
                    (child,) = self._apply(goal_id, RuleInstance("OrI2", "backward"))
                    self.prove(child)
                else:
                    (child,) = self._apply(goal_id, RuleInstance("RAA", "backward"))
                    self.refute(child)
            case _:
                (child,) = self._apply(goal_id, RuleInstance("RAA", "backward"))
                self.refute(child)

    def refute(self, goal_id: int) -> None:
        """Close a goal whose conclusion is falsum and whose hypotheses are
        jointly unsatisfiable."""
        goal = self.state.goals[goal_id]
        seq = goal.sequent
        hyps = list(seq.hypotheses)

        for label, f in hyps:
            if isinstance(f, Bottom):
                self._apply(goal_id, RuleInstance("Assumption", "backward", hyp=label))
                return
        for label, f in hyps:
            if isinstance(f, Not):
                mate = next(
                    (l2 for l2, g in hyps if alpha_equal(g, f.body)), None
                )
                if mate is not None:
                    self._close_by_contradiction(goal_id, label, mate)
                    return
        for label, f in hyps:
            if isinstance(f, And):
                for rule, part in (("AndE1", f.left), ("AndE2", f.right)):
                    if not any(alpha_equal(g, part) for _, g in hyps):
                        (child,) = self._apply(
                            goal_id, RuleInstance(rule, "forward", hyp=label)
                        )
                        self.refute(child)
                        return

        atoms = set()
        for _, f in hyps:
            atoms |= prop_symbols(f)
        decided: dict[str, bool] = {}
        for _, f in hyps:
            if isinstance(f, PredApp):
                decided[f.symbol] = True
            elif isinstance(f, Not) and isinstance(f.body, PredApp):
                decided.setdefault(f.body.symbol, False)
        undecided = sorted(a for a in atoms if a not in decided)
        if undecided:
            atom = PredApp(undecided[0], ())
            lem = Or(atom, Not(atom))
            side, case_true, case_false = self._apply(
                goal_id, RuleInstance("OrE", "backward", disjunction=lem)
            )
            self._prove_excluded_middle(side, atom)
            self.refute(case_true)
            self.refute(case_false)
            return

        # every atom is decided: some hypothesis must be false in that row
        for label, f in hyps:
            if isinstance(f, (PredApp, Bottom)):
                continue
            if isinstance(f, Not) and isinstance(f.body, PredApp):
                continue
            if not _eval_row(f, decided):
                self.kalmar_refute(goal_id, label, decided)
                return
        raise AssertionError("refute() called on a satisfiable hypothesis set")

    def _close_by_contradiction(self, goal_id: int, neg_label: str, pos_label: str) -> None:
        cont, side = self._apply(
            goal_id, RuleInstance("NotE", "forward", hyp=neg_label)
        )
        self._apply(cont, RuleInstance("Assumption", "backward"))
        self._apply(side, RuleInstance("Assumption", "backward", hyp=pos_label))

    def _prove_excluded_middle(self, goal_id: int, atom: Formula) -> None:
        (raa_goal,) = self._apply(goal_id, RuleInstance("RAA", "backward"))
        neg_label = self.state.refinements[goal_id].discharged[0]
        cont, side = self._apply(raa_goal, RuleInstance("NotE", "forward", hyp=neg_label))
        self._apply(cont, RuleInstance("Assumption", "backward"))
        (not_goal,) = self._apply(side, RuleInstance("OrI2", "backward"))
        (bot_goal,) = self._apply(not_goal, RuleInstance("NotI", "backward"))
        atom_label = self.state.refinements[not_goal].discharged[0]
        cont2, side2 = self._apply(bot_goal, RuleInstance("NotE", "forward", hyp=neg_label))
        self._apply(cont2, RuleInstance("Assumption", "backward"))
        (atom_goal,) = self._apply(side2, RuleInstance("OrI1", "backward"))
        self._apply(atom_goal, RuleInstance("Assumption", "backward", hyp=atom_label))

    def kalmar_refute(self, goal_id: int, label: str, row: dict[str, bool]) -> None:
        """Derive falsum from the hypothesis at label, false in the row
        fixed by the goal's literal hypotheses."""
        goal = self.state.goals[goal_id]
        seq = goal.sequent
        f = seq.formula(label)
        match f:
            case Bottom():
                self._apply(goal_id, RuleInstance("Assumption", "backward", hyp=label))
            case PredApp(symbol, ()):
                neg = next(
                    l for l, g in seq.hypotheses
                    if isinstance(g, Not) and alpha_equal(g.body, f)
                )
                self._close_by_contradiction(goal_id, neg, label)
            case Not(body):
                cont, side = self._apply(
                    goal_id, RuleInstance("NotE", "forward", hyp=label)
                )
                self._apply(cont, RuleInstance("Assumption", "backward"))
                self.kalmar_prove(side, row)
            case And(l, r):
                rule = "AndE1" if not _eval_row(l, row) else "AndE2"
                (child,) = self._apply(goal_id, RuleInstance(rule, "forward", hyp=label))
                new_label = self.state.goals[child].sequent.hypotheses[-1][0]
                self.kalmar_refute(child, new_label, row)
            case Or():
                case_a, case_b = self._apply(
                    goal_id, RuleInstance("OrE", "forward", hyp=label)
                )
                for child in (case_a, case_b):
                    new_label = self.state.goals[child].sequent.hypotheses[-1][0]
                    self.kalmar_refute(child, new_label, row)
            case Implies(l, r):
                cont, side = self._apply(
                    goal_id, RuleInstance("ImpE", "forward", hyp=label)
                )
                new_label = self.state.goals[cont].sequent.hypotheses[-1][0]
                self.kalmar_refute(cont, new_label, row)
                self.kalmar_prove(side, row)
            case Iff(l, r):
                rule = "IffE1" if _eval_row(l, row) else "IffE2"
                cont, side = self._apply(goal_id, RuleInstance(rule, "forward", hyp=label))
                new_label = self.state.goals[cont].sequent.hypotheses[-1][0]
                self.kalmar_refute(cont, new_label, row)
                self.kalmar_prove(side, row)
            case _:
                raise AssertionError(f"kalmar_refute on unexpected formula {f!r}")

    def kalmar_prove(self, goal_id: int, row: dict[str, bool]) -> None:
        """Prove a goal whose conclusion is true in the fixed row."""
        goal = self.state.goals[goal_id]
        seq = goal.sequent
        concl = seq.conclusion
        if any(alpha_equal(g, concl) for _, g in seq.hypotheses):
            self._apply(goal_id, RuleInstance("Assumption", "backward"))
            return
        match concl:
            case Not(body):
                (child,) = self._apply(goal_id, RuleInstance("NotI", "backward"))
                new_label = self.state.goals[child].sequent.hypotheses[-1][0]
                self.kalmar_refute(child, new_label, row)
            case And():
                a, b = self._apply(goal_id, RuleInstance("AndI", "backward"))
                self.kalmar_prove(a, row)
                self.kalmar_prove(b, row)
            case Or(l, r):
                rule = "OrI1" if _eval_row(l, row) else "OrI2"
                (child,) = self._apply(goal_id, RuleInstance(rule, "backward"))
                self.kalmar_prove(child, row)
            case Implies(l, r):
                (child,) = self._apply(goal_id, RuleInstance("ImpI", "backward"))
                if _eval_row(r, row):
                    self.kalmar_prove(child, row)
                else:
                    (raa_child,) = self._apply(child, RuleInstance("RAA", "backward"))
                    antecedent_label = self.state.goals[child].sequent.hypotheses[-1][0]
                    self.kalmar_refute(raa_child, antecedent_label, row)
            case Iff(l, r):
                a, b = self._apply(goal_id, RuleInstance("IffI", "backward"))
                self.kalmar_prove(a, row)
                self.kalmar_prove(b, row)
            case PredApp():
                raise AssertionError("true atom without a matching literal hypothesis")
            case _:
                raise AssertionError(f"kalmar_prove on unexpected formula {concl!r}")


def _eval_row(f: Formula, row: dict[str, bool]) -> bool:
    match f:
        case PredApp(symbol, ()):
            return row[symbol]
        case Bottom():
            return False
        case Not(body):
            return not _eval_row(body, row)
        case And(l, r):
            return _eval_row(l, row) and _eval_row(r, row)
        case Or(l, r):
            return _eval_row(l, row) or _eval_row(r, row)
        case Implies(l, r):
            return (not _eval_row(l, row)) or _eval_row(r, row)
        case Iff(l, r):
            return _eval_row(l, row) == _eval_row(r, row)
    raise AssertionError(f"not propositional: {f!r}")


# ---------------------------------------------------------------- hints


@dataclass(frozen=True)
class StrategyHint:
    rule_family: str
    text: str

    def to_json(self) -> dict:
        return {"rule_family": self.rule_family, "text": self.text}


def hint(state: ProofState, goal_id: int) -> StrategyHint:
    """A strategy suggestion from the fixed table keyed on the goal's
    principal connective and hypothesis shapes. Never reveals witnesses."""
    goal = state.goal(goal_id)
    seq = goal.sequent
    concl = seq.conclusion
    if any(alpha_equal(f, concl) for _, f in seq.hypotheses):
        return StrategyHint("Assumption", "the conclusion is already a hypothesis: close the goal")
    if any(isinstance(f, Bottom) for _, f in seq.hypotheses):
        return StrategyHint("BottomE", "a hypothesis is absurd: everything follows from falsum")
    if any(isinstance(f, Exists) for _, f in seq.hypotheses):
        return StrategyHint(
            "ExistsE",
            "eliminate the existential hypothesis forward (fix an arbitrary witness) "
            "before introducing backward",
        )
    match concl:
        case Forall():
            return StrategyHint(
                "ForallI", "start by fixing an arbitrary parameter: apply ForallI backward"
            )
        case Exists():
            return StrategyHint("ExistsI", "find a witness term, then apply ExistsI backward")
        case And():
            return StrategyHint("AndI", "prove the two conjuncts separately")
        case Implies():
            return StrategyHint("ImpI", "suppose the antecedent and derive the consequent")
        case Not():
            return StrategyHint("NotI", "suppose the negated formula and derive falsum")
        case Iff():
            return StrategyHint("IffI", "prove the conditional in each direction")
        case Or():
            return StrategyHint(
                "OrI", "commit to one disjunct, or reason by cases on a hypothesis disjunction"
            )
        case _:
            pass
    for _, f in seq.hypotheses:
        match f:
            case Or():
                return StrategyHint("OrE", "reason by cases on the disjunctive hypothesis")
            case And():
                return StrategyHint("AndE", "split the conjunctive hypothesis forward")
            case Implies():
                return StrategyHint("ImpE", "use the conditional hypothesis: derive its antecedent")
            case Iff():
                return StrategyHint("IffE", "use the biconditional hypothesis in one direction")
            case Forall():
                return StrategyHint(
                    "ForallE", "instantiate the universal hypothesis with an object already in play"
                )
            case Not():
                return StrategyHint("NotE", "derive the formula your negative hypothesis denies")
            case _:
                continue
    return StrategyHint("RAA", "no structure left to exploit: try reductio ad absurdum")


# ---------------------------------------------------------------- stepping


@dataclass(frozen=True)
class StepReport:
    command: str
    status: str  # open | proved | refuted
    new_goals: tuple[int, ...] = ()
    open_goals: tuple[int, ...] = ()
    message: str = ""
    applied: tuple[str, ...] = ()
    frame_changed: bool = False
    refutation: Optional[RefutationVerdict] = None

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "status": self.status,
            "new_goals": list(self.new_goals),
            "open_goals": list(self.open_goals),
            "message": self.message,
            "applied": list(self.applied),
            "frame_changed": self.frame_changed,
        }
        if self.refutation is not None:
            out["refutation"] = self.refutation.to_json()
        return out


@dataclass(frozen=True)
class StepResult:
    state: ProofState
    report: StepReport


def _first_goal(state: ProofState) -> int:
    if not state.open_goals:
        raise NoSuchGoal("none")
    return state.open_goals[0]


def step(
    state: ProofState,
    cmd: Command,
    policy: AutomationPolicy,
    defs: Sequence[Definition] = (),
    history: Sequence[ProofState] = (),
) -> StepResult:
    """Execute one command against the first open goal.

    UndoCmd needs the caller's frame history; ScriptRunner supplies it.
    """
    text = command_text(cmd)
    match cmd:
        case RuleCmd(instance):
            gid = _first_goal(state)
            new_state = apply_rule(state, gid, instance)
            children = new_state.refinements[gid].children
            return StepResult(
                new_state,
                StepReport(
                    text, "open", children, new_state.open_goals,
                    message=f"applied {instance.rule}", frame_changed=True,
                ),
            )
        case UnfoldCmd(defname, target, position) | FoldCmd(defname, target, position):
            direction = "unfold" if isinstance(cmd, UnfoldCmd) else "fold"
            gid = _first_goal(state)
            new_state = rewrite_definition(
                state, gid, target, defname, direction, position, defs
            )
            children = new_state.refinements[gid].children
            return StepResult(
                new_state,
                StepReport(
                    text, "open", children, new_state.open_goals,
                    message=f"{direction}ed {defname}", frame_changed=True,
                ),
            )
        case AutoCmd(level):
            if level > policy.max_level:
                raise AutomationCapExceeded(
                    f"auto {level} exceeds this exercise's cap of {policy.max_level}"
                )
            new_state = state
            applied: list[str] = []
            budget = policy.budget
            for gid in tuple(state.open_goals):
                if gid not in new_state.open_goals:
                    continue
                new_state, steps = auto(new_state, gid, level, budget)
                applied.extend(i.describe() for i in steps)
                budget -= len(steps)
            return StepResult(
                new_state,
                StepReport(
                    text, "open", (), new_state.open_goals,
                    message=f"auto {level}: {len(applied)} step(s)",
                    applied=tuple(applied), frame_changed=bool(applied),
                ),
            )
        case InstantiateCmd(unknown, term):
            new_state = instantiate_unknown(state, unknown, term)
            return StepResult(
                new_state,
                StepReport(
                    text, "open", (), new_state.open_goals,
                    message=f"instantiated {unknown.printed}", frame_changed=True,
                ),
            )
        case RefuteCmd(model_text):
            model = parse_model(model_text, state.signature)
            broken = _violated_definition(defs, model)
            if broken is not None:
                raise RefutationOfProvable(
                    f"the model does not satisfy the definition {broken!r}"
                )
            verdict = check_refutation(state.exercise, model)
            if not verdict.refutes:
                raise RefutationOfProvable(verdict.reason)
            return StepResult(
                state,
                StepReport(
                    text, "refuted", (), state.open_goals,
                    message="countermodel accepted", refutation=verdict,
                ),
            )
        case UndoCmd():
            if not history:
                raise NothingToUndo("no earlier frame to return to")
            return StepResult(
                history[-1],
                StepReport(
                    text, "open", (), history[-1].open_goals,
                    message="restored the previous frame", frame_changed=True,
                ),
            )
        case QedCmd():
            if state.open_goals:
                raise ProofIncomplete(state.open_goals)
            return StepResult(
                state,
                StepReport(text, "proved", (), (), message="proof complete"),
            )
    raise ArgumentMissing(f"unsupported command {cmd!r}")


def _violated_definition(defs: Sequence[Definition], model) -> Optional[str]:
    """Name of the first definition the model fails to satisfy, or None.

    A countermodel for an exercise with definitions in scope must treat
    definiendum and definiens alike at every instantiation; otherwise a
    sequent provable by unfolding could also be 'refuted'."""
    from itertools import product

    from .models import FiniteStructure, evaluate

    for defn in defs:
        params = sorted(defn.params, key=lambda p: p.printed)
        if isinstance(model, FiniteStructure):
            for elements in product(model.domain, repeat=len(params)):
                env = {p.printed: e for p, e in zip(params, elements)}
                lhs, _ = evaluate(defn.definiendum, model, env)
                rhs, _ = evaluate(defn.definiens, model, env)
                if lhs != rhs:
                    return defn.name
        elif not params:
            lhs, _ = evaluate(defn.definiendum, model)
            rhs, _ = evaluate(defn.definiens, model)
            if lhs != rhs:
                return defn.name
    return None


def command_text(cmd: Command) -> str:
    match cmd:
        case RuleCmd(instance):
            return instance.describe()
        case UnfoldCmd(defname, target, position):
            path = ".".join(map(str, position)) if position else "root"
            return f"unfold {defname} at {target or 'goal'} {path}"
        case FoldCmd(defname, target, position):
            path = ".".join(map(str, position)) if position else "root"
            return f"fold {defname} at {target or 'goal'} {path}"
        case AutoCmd(level):
            return f"auto {level}"
        case InstantiateCmd(unknown, term):
            from .syntax import term_str

            return f"instantiate {unknown.printed} := {term_str(term)}"
        case RefuteCmd(model_text):
            return f"refute with {model_text}"
        case UndoCmd():
            return "undo"
        case QedCmd():
            return "qed"
    return repr(cmd)


# ---------------------------------------------------------------- runner


class ScriptRunner:
    """Executes commands against a growing frame history.

    The runner is the single mutable object in the tactic layer; each
    frame it stores is itself immutable.
    """

    def __init__(
        self,
        sequent: Sequent,
        signature: Signature,
        definitions: Sequence[Definition] = (),
        policy: AutomationPolicy = AutomationPolicy(),
    ):
        self.signature = signature
        self.definitions = tuple(definitions)
        self.policy = policy
        self.frames: list[ProofState] = [init_proof(sequent, signature)]
        self.status = "open"
        self.refutation: Optional[RefutationVerdict] = None

    @property
    def state(self) -> ProofState:
        return self.frames[-1]

    def run_text(self, command_line: str) -> StepReport:
        return self.run(parse_command(command_line, self.signature))

    def run(self, cmd: Command) -> StepReport:
        if self.status != "open":
            raise SessionClosed(f"session already {self.status}")
        if isinstance(cmd, UndoCmd):
            if len(self.frames) < 2:
                raise NothingToUndo("no earlier frame to return to")
            self.frames.pop()
            return StepReport(
                "undo", "open", (), self.state.open_goals,
                message="restored the previous frame", frame_changed=True,
            )
        result = step(self.state, cmd, self.policy, self.definitions)
        if result.report.frame_changed:
            self.frames.append(result.state)
        if result.report.status in ("proved", "refuted"):
            self.status = result.report.status
            self.refutation = result.report.refutation
        return result.report

    def run_script(self, script: Script) -> list[StepReport]:
        return [self.run(cmd) for cmd in script.commands]
