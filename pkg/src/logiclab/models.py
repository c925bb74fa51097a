"""Countermodels and step-by-step satisfaction traces.

Two model flavors: a Valuation (truth assignment for propositional work)
and a FiniteStructure (enumerable first-order interpretation). Evaluation
returns both the verdict and a full justification tree whose quantifier
steps enumerate the whole domain, one child per element.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import IncompleteModel, ParseError, UnknownsPresent
from .kernel import Sequent
from .syntax import (
    And,
    Bottom,
    BoundVar,
    Constant,
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
    PredApp,
    Signature,
    Term,
    Unknown,
    print_formula,
    unknowns_of,
)


@dataclass(frozen=True)
class Valuation:
    assignment: Mapping[str, bool]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def to_text(self) -> str:
        return ", ".join(f"{s}={1 if v else 0}" for s, v in sorted(self.assignment.items()))


@dataclass(frozen=True)
class FiniteStructure:
    domain: tuple[str, ...]
    predicates: Mapping[str, frozenset[tuple[str, ...]]] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple[str, ...], str]] = field(default_factory=dict)
    constants: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise ValueError("domain must be non-empty")
        object.__setattr__(
            self, "predicates",
            {k: frozenset(tuple(t) for t in v) for k, v in self.predicates.items()},
        )
        object.__setattr__(
            self, "functions",
            {k: dict(v) for k, v in self.functions.items()},
        )
        object.__setattr__(self, "constants", dict(self.constants))

    def to_text(self) -> str:
        parts = ["domain = {" + ", ".join(self.domain) + "}"]
        for name, tuples in sorted(self.predicates.items()):
            items = ", ".join("(" + ", ".join(t) + ")" for t in sorted(tuples))
            parts.append(f"{name} = {{{items}}}")
        for name, table in sorted(self.functions.items()):
            items = ", ".join(
                "(" + ", ".join(args) + f") -> {val}" for args, val in sorted(table.items())
            )
            parts.append(f"{name} = {{{items}}}")
        for name, elem in sorted(self.constants.items()):
            parts.append(f"{name} = {elem}")
        return "; ".join(parts)


Model = Union[Valuation, FiniteStructure]


@dataclass(frozen=True)
class Step:
    """One node of a satisfaction trace."""

    formula: Formula
    environment: tuple[tuple[str, str], ...]
    value: bool
    clause: str
    children: tuple["Step", ...] = ()

    def to_json(self) -> dict:
        return {
            "formula": print_formula(self.formula),
            "environment": {k: v for k, v in self.environment},
            "value": self.value,
            "clause": self.clause,
            "children": [c.to_json() for c in self.children],
        }


# ---------------------------------------------------------------- evaluation


def evaluate(f: Formula, model: Model, env: Optional[Mapping[str, str]] = None) -> tuple[bool, Step]:
    """Classical satisfaction value plus its clause-by-clause justification."""
    if unknowns_of(f):
        pending = sorted(u.printed for u in unknowns_of(f))
        raise UnknownsPresent(f"cannot evaluate with unknowns {', '.join(pending)}")
    env = dict(env or {})
    if isinstance(model, Valuation):
        step = _eval_valuation(f, model)
    else:
        step = _eval_structure(f, model, env)
    return step.value, step


def _eval_valuation(f: Formula, model: Valuation) -> Step:
    def walk(g: Formula) -> Step:
        match g:
            case PredApp(symbol, ()):
                if symbol not in model.assignment:
                    raise IncompleteModel(symbol)
                return Step(g, (), model.assignment[symbol], "atom")
            case Bottom():
                return Step(g, (), False, "bottom")
            case Not(body):
                b = walk(body)
                return Step(g, (), not b.value, "negation", (b,))
            case And(l, r):
                a, b = walk(l), walk(r)
                return Step(g, (), a.value and b.value, "conjunction", (a, b))
            case Or(l, r):
                a, b = walk(l), walk(r)
                return Step(g, (), a.value or b.value, "disjunction", (a, b))
            case Implies(l, r):
                a, b = walk(l), walk(r)
                clause = "implication" if a.value else "vacuous-antecedent"
                return Step(g, (), (not a.value) or b.value, clause, (a, b))
            case Iff(l, r):
                a, b = walk(l), walk(r)
                return Step(g, (), a.value == b.value, "biconditional", (a, b))
            case _:
                raise IncompleteModel("domain")

    return walk(f)


def _eval_term(t: Term, model: FiniteStructure, env: Mapping[str, str]) -> str:
    match t:
        case BoundVar(name):
            if name in env:
                return env[name]
            raise IncompleteModel(name)
        case Parameter():
            name = t.printed
            if name in env:
                return env[name]
            if name in model.constants:
                return model.constants[name]
            raise IncompleteModel(name)
        case Constant(symbol):
            if symbol in model.constants:
                return model.constants[symbol]
            raise IncompleteModel(symbol)
        case FunctionApp(symbol, args):
            if symbol not in model.functions:
                raise IncompleteModel(symbol)
            point = tuple(_eval_term(a, model, env) for a in args)
            table = model.functions[symbol]
            if point not in table:
                raise IncompleteModel(f"{symbol}({', '.join(point)})")
            return table[point]
    raise IncompleteModel(str(t))


def _eval_structure(f: Formula, model: FiniteStructure, env: dict[str, str]) -> Step:
    snapshot = tuple(sorted(env.items()))
    match f:
        case PredApp(symbol, args):
            if symbol not in model.predicates:
                raise IncompleteModel(symbol)
            point = tuple(_eval_term(a, model, env) for a in args)
            return Step(f, snapshot, point in model.predicates[symbol], "atom")
        case Equality(lhs, rhs):
            return Step(
                f, snapshot,
                _eval_term(lhs, model, env) == _eval_term(rhs, model, env),
                "equality",
            )
        case Bottom():
            return Step(f, snapshot, False, "bottom")
        case Not(body):
            b = _eval_structure(body, model, env)
            return Step(f, snapshot, not b.value, "negation", (b,))
        case And(l, r):
            a, b = _eval_structure(l, model, env), _eval_structure(r, model, env)
            return Step(f, snapshot, a.value and b.value, "conjunction", (a, b))
        case Or(l, r):
            a, b = _eval_structure(l, model, env), _eval_structure(r, model, env)
            return Step(f, snapshot, a.value or b.value, "disjunction", (a, b))
        case Implies(l, r):
            a, b = _eval_structure(l, model, env), _eval_structure(r, model, env)
            clause = "implication" if a.value else "vacuous-antecedent"
            return Step(f, snapshot, (not a.value) or b.value, clause, (a, b))
        case Iff(l, r):
            a, b = _eval_structure(l, model, env), _eval_structure(r, model, env)
            return Step(f, snapshot, a.value == b.value, "biconditional", (a, b))
        case Forall(var, body) | Exists(var, body):
            kids = []
            for elem in model.domain:
                child_env = dict(env)
                child_env[var] = elem
                kids.append(_eval_structure(body, model, child_env))
            if isinstance(f, Forall):
                return Step(f, snapshot, all(k.value for k in kids), "universal", tuple(kids))
            return Step(f, snapshot, any(k.value for k in kids), "existential", tuple(kids))
    raise IncompleteModel(str(f))


def verify_trace(step: Step, model: Optional[Model] = None) -> bool:
    """Recompute each step's verdict from its children per its clause."""
    kids = step.children
    ok_children = all(verify_trace(k, model) for k in kids)
    if not ok_children:
        return False
    match step.clause:
        case "atom" | "equality":
            if model is None:
                return True
            env = dict(step.environment)
            value, _ = evaluate(step.formula, model, env)
            return value == step.value
        case "bottom":
            return step.value is False
        case "negation":
            return len(kids) == 1 and step.value == (not kids[0].value)
        case "conjunction":
            return len(kids) == 2 and step.value == (kids[0].value and kids[1].value)
        case "disjunction":
            return len(kids) == 2 and step.value == (kids[0].value or kids[1].value)
        case "implication" | "vacuous-antecedent":
            if len(kids) != 2:
                return False
            if step.clause == "vacuous-antecedent" and kids[0].value:
                return False
            return step.value == ((not kids[0].value) or kids[1].value)
        case "biconditional":
            return len(kids) == 2 and step.value == (kids[0].value == kids[1].value)
        case "universal":
            if isinstance(model, FiniteStructure) and len(kids) != len(model.domain):
                return False
            return step.value == all(k.value for k in kids)
        case "existential":
            if isinstance(model, FiniteStructure) and len(kids) != len(model.domain):
                return False
            return step.value == any(k.value for k in kids)
        case _:
            return False


# ---------------------------------------------------------------- refutation


@dataclass(frozen=True)
class RefutationVerdict:
    refutes: bool
    reason: Optional[str]
    traces: tuple[tuple[str, Step], ...]

    def __bool__(self) -> bool:
        return self.refutes

    def to_json(self) -> dict:
        return {
            "refutes": self.refutes,
            "reason": self.reason,
            "traces": [{"role": role, "trace": step.to_json()} for role, step in self.traces],
        }


def check_refutation(claimed: Sequent, model: Model) -> RefutationVerdict:
    """refutes iff every hypothesis is true and the conclusion false."""
    traces: list[tuple[str, Step]] = []
    failure: Optional[str] = None
    for label, f in claimed.hypotheses:
        value, step = evaluate(f, model)
        traces.append((label, step))
        if not value and failure is None:
            failure = f"hypothesis {label} is false in the model"
    value, step = evaluate(claimed.conclusion, model)
    traces.append(("conclusion", step))
    if value and failure is None:
        failure = "the conclusion is true in the model"
    return RefutationVerdict(failure is None, failure, tuple(traces))


# ---------------------------------------------------------------- model text

_TOKEN = re.compile(r"\s*(->|[{}(),;=]|[A-Za-z_][A-Za-z0-9_]*|\d+)")


def _tokenize_model(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(i + 1, "a model token", text[i])
        tokens.append((m.group(1), m.start(1) + 1))
        i = m.end()
    tokens.append(("", len(text) + 1))
    return tokens


class _ModelParser:
    def __init__(self, text: str, sig: Signature):
        self.tokens = _tokenize_model(text)
        self.sig = sig
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def next(self) -> str:
        tok, _ = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, tok: str):
        got, pos = self.tokens[self.i]
        if got != tok:
            raise ParseError(pos, f"{tok!r}", got or "end of input")
        self.i += 1

    def element(self) -> str:
        got, pos = self.tokens[self.i]
        if not got or got in "{}(),;=" or got == "->":
            raise ParseError(pos, "a domain element", got or "end of input")
        self.i += 1
        return got

    def tuple_of_elements(self) -> tuple[str, ...]:
        if self.peek() == "(":
            self.next()
            items: list[str] = []
            if self.peek() != ")":
                items.append(self.element())
                while self.peek() == ",":
                    self.next()
                    items.append(self.element())
            self.expect(")")
            return tuple(items)
        return (self.element(),)

    def parse_structure(self) -> FiniteStructure:
        self.expect("domain")
        self.expect("=")
        self.expect("{")
        domain = [self.element()]
        while self.peek() == ",":
            self.next()
            domain.append(self.element())
        self.expect("}")
        predicates: dict[str, set[tuple[str, ...]]] = {}
        functions: dict[str, dict[tuple[str, ...], str]] = {}
        constants: dict[str, str] = {}
        while self.peek() == ";":
            self.next()
            if not self.peek():
                break
            name = self.next()
            self.expect("=")
            if self.peek() == "{":
                self.next()
                if name in self.sig.functions:
                    table: dict[tuple[str, ...], str] = {}
                    while self.peek() != "}":
                        args = self.tuple_of_elements()
                        self.expect("->")
                        table[args] = self.element()
                        if self.peek() == ",":
                            self.next()
                    self.expect("}")
                    functions[name] = table
                else:
                    rows: set[tuple[str, ...]] = set()
                    while self.peek() != "}":
                        rows.add(self.tuple_of_elements())
                        if self.peek() == ",":
                            self.next()
                    self.expect("}")
                    predicates[name] = rows
            else:
                constants[name] = self.element()
        got, pos = self.tokens[self.i]
        if got:
            raise ParseError(pos, "';' or end of input", got)
        return FiniteStructure(tuple(domain), predicates, functions, constants)

    def parse_valuation(self) -> Valuation:
        assignment: dict[str, bool] = {}
        while True:
            name = self.next()
            if not name:
                raise ParseError(self.tokens[self.i - 1][1], "a propositional symbol")
            self.expect("=")
            got, pos = self.tokens[self.i]
            truthy = {"1": True, "true": True, "0": False, "false": False}
            if got not in truthy:
                raise ParseError(pos, "0, 1, true, or false", got or "end of input")
            self.i += 1
            assignment[name] = truthy[got]
            if self.peek() == ",":
                self.next()
                continue
            got, pos = self.tokens[self.i]
            if got:
                raise ParseError(pos, "',' or end of input", got)
            return Valuation(assignment)


def parse_model(text: str, sig: Signature) -> Model:
    """Parse model text: a finite structure when it opens with ``domain``,
    else the ``p=1, q=0`` valuation shorthand."""
    parser = _ModelParser(text, sig)
    if parser.peek() == "domain":
        structure = parser.parse_structure()
        _validate_structure(structure, sig)
        return structure
    return parser.parse_valuation()


def _validate_structure(structure: FiniteStructure, sig: Signature):
    dom = set(structure.domain)
    for name, rows in structure.predicates.items():
        arity = sig.predicates.get(name)
        for row in rows:
            if arity is not None and len(row) != arity:
                raise IncompleteModel(f"{name} row of wrong arity")
            if not set(row) <= dom:
                raise IncompleteModel(f"{name} uses elements outside the domain")
    for name, table in structure.functions.items():
        arity = sig.functions.get(name)
        for args, val in table.items():
            if arity is not None and len(args) != arity:
                raise IncompleteModel(f"{name} entry of wrong arity")
            if not set(args) <= dom or val not in dom:
                raise IncompleteModel(f"{name} uses elements outside the domain")
    for name, val in structure.constants.items():
        if val not in dom:
            raise IncompleteModel(f"{name} assigned outside the domain")


def model_to_text(model: Model) -> str:
    return model.to_text()
