"""Abstract syntax of first-order formulas and terms.

Terms distinguish three variable-like kinds: bound variables (meaningful
only under a binder), parameters (rigid names for specific-but-arbitrary
objects, printed like ``x1``), and unknowns (placeholders ``?1`` to be
instantiated later). Parameters and unknowns are never captured by
binders; the capture-avoidance machinery below renames binders whenever a
printed name would collide.

All values are immutable and hashable; they can be shared freely.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import ArityMismatch, MalformedSequent, UnknownSymbol

# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class BoundVar:
    name: str


@dataclass(frozen=True)
class Parameter:
    name: str
    ordinal: Optional[int] = None

    def __post_init__(self):
        # A trailing digit in the base name would make printing ambiguous
        # with the name+ordinal form; require make_parameter for raw text.
        if self.ordinal is None and self.name and self.name[-1].isdigit():
            raise ValueError(
                f"parameter base name {self.name!r} ends in a digit; "
                "use make_parameter() to split the ordinal"
            )

    @property
    def printed(self) -> str:
        return self.name if self.ordinal is None else f"{self.name}{self.ordinal}"


@dataclass(frozen=True)
class Unknown:
    ordinal: int

    @property
    def printed(self) -> str:
        return f"?{self.ordinal}"


@dataclass(frozen=True)
class Constant:
    symbol: str


@dataclass(frozen=True)
class FunctionApp:
    symbol: str
    args: tuple["Term", ...]


Term = Union[BoundVar, Parameter, Unknown, Constant, FunctionApp]

_TRAILING_DIGITS = re.compile(r"^(.*?)(\d+)$")


def make_parameter(printed: str) -> Parameter:
    """Build a Parameter from its printed form, splitting a trailing ordinal."""
    m = _TRAILING_DIGITS.match(printed)
    if m and m.group(1):
        return Parameter(m.group(1), int(m.group(2)))
    return Parameter(printed)


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class PredApp:
    symbol: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Equality:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[PredApp, Equality, Bottom, Not, And, Or, Implies, Iff, Forall, Exists]

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)


# ---------------------------------------------------------------- signature


@dataclass(frozen=True)
class Signature:
    """Declared vocabulary: predicate/function arities plus constants."""

    predicates: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "predicates", dict(self.predicates))
        object.__setattr__(self, "functions", dict(self.functions))
        object.__setattr__(self, "constants", frozenset(self.constants))
        groups = [set(self.predicates), set(self.functions), set(self.constants)]
        for i in range(3):
            for j in range(i + 1, 3):
                shared = groups[i] & groups[j]
                if shared:
                    raise ValueError(f"symbols declared twice: {sorted(shared)}")

    def merged(self, other: "Signature") -> "Signature":
        return Signature(
            {**self.predicates, **other.predicates},
            {**self.functions, **other.functions},
            self.constants | other.constants,
        )

    def to_json(self) -> dict:
        return {
            "predicates": dict(sorted(self.predicates.items())),
            "functions": dict(sorted(self.functions.items())),
            "constants": sorted(self.constants),
        }

    @staticmethod
    def from_json(data: dict) -> "Signature":
        return Signature(
            data.get("predicates", {}),
            data.get("functions", {}),
            frozenset(data.get("constants", ())),
        )


PROP = Signature  # a purely propositional signature is just 0-ary predicates


def prop_signature(*symbols: str) -> Signature:
    return Signature(predicates={s: 0 for s in symbols})


# ---------------------------------------------------------------- printing

# Precedence levels mirror the grammar: iff < implies < or < and < not < atom.
_LEVEL_IFF, _LEVEL_IMP, _LEVEL_OR, _LEVEL_AND, _LEVEL_NOT, _LEVEL_ATOM = range(6)


def term_str(t: Term) -> str:
    match t:
        case BoundVar(name):
            return name
        case Parameter():
            return t.printed
        case Unknown():
            return t.printed
        case Constant(symbol):
            return symbol
        case FunctionApp(symbol, args):
            return f"{symbol}({', '.join(term_str(a) for a in args)})"
    raise TypeError(f"not a term: {t!r}")


def _is_atom(f: Formula) -> bool:
    return isinstance(f, (PredApp, Equality, Bottom, Forall, Exists))


def print_formula(f: Formula) -> str:
    """Render with minimal parentheses; output re-parses alpha-equal."""
    return _pp(f, _LEVEL_IFF)


def _pp(f: Formula, level: int) -> str:
    match f:
        case PredApp(symbol, args):
            s = symbol if not args else f"{symbol}({', '.join(term_str(a) for a in args)})"
        case Equality(lhs, rhs):
            s = f"{term_str(lhs)} = {term_str(rhs)}"
        case Bottom():
            s = "false"
        case Forall(var, body) | Exists(var, body):
            q = "forall" if isinstance(f, Forall) else "exists"
            scope = _pp(body, _LEVEL_ATOM) if _is_atom(body) else f"({_pp(body, _LEVEL_IFF)})"
            s = f"({q} {var}) {scope}"
        case Not(body):
            inner = _pp(body, _LEVEL_NOT)
            s = f"~{inner}"
            return s if level <= _LEVEL_NOT else f"({s})"
        case And(left, right):
            s = f"{_pp(left, _LEVEL_AND)} /\\ {_pp(right, _LEVEL_NOT)}"
            return s if level <= _LEVEL_AND else f"({s})"
        case Or(left, right):
            s = f"{_pp(left, _LEVEL_OR)} \\/ {_pp(right, _LEVEL_AND)}"
            return s if level <= _LEVEL_OR else f"({s})"
        case Implies(left, right):
            s = f"{_pp(left, _LEVEL_OR)} -> {_pp(right, _LEVEL_IMP)}"
            return s if level <= _LEVEL_IMP else f"({s})"
        case Iff(left, right):
            s = f"{_pp(left, _LEVEL_IMP)} <-> {_pp(right, _LEVEL_IFF)}"
            return s if level <= _LEVEL_IFF else f"({s})"
        case _:
            raise TypeError(f"not a formula: {f!r}")
    return s


# ---------------------------------------------------------------- traversal


def formula_children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Not(body):
            return (body,)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return (l, r)
        case Forall(_, body) | Exists(_, body):
            return (body,)
        case _:
            return ()


def node_children(node) -> tuple:
    """Children in the mixed formula/term tree used for position paths."""
    match node:
        case PredApp(_, args):
            return args
        case Equality(lhs, rhs):
            return (lhs, rhs)
        case FunctionApp(_, args):
            return args
        case _ if isinstance(node, (BoundVar, Parameter, Unknown, Constant, Bottom)):
            return ()
        case _:
            return formula_children(node)


def node_at(f: Formula, path: tuple[int, ...]):
    node = f
    for i in path:
        kids = node_children(node)
        if not 0 <= i < len(kids):
            raise IndexError(f"no child {i} at {node!r}")
        node = kids[i]
    return node


def replace_at(f, path: tuple[int, ...], replacement):
    if not path:
        return replacement
    i, rest = path[0], path[1:]
    kids = node_children(f)
    if not 0 <= i < len(kids):
        raise IndexError(f"no child {i} at {f!r}")
    new_kid = replace_at(kids[i], rest, replacement)
    match f:
        case PredApp(symbol, args):
            return PredApp(symbol, args[:i] + (new_kid,) + args[i + 1 :])
        case FunctionApp(symbol, args):
            return FunctionApp(symbol, args[:i] + (new_kid,) + args[i + 1 :])
        case Equality(lhs, rhs):
            return Equality(new_kid if i == 0 else lhs, new_kid if i == 1 else rhs)
        case Not(_):
            return Not(new_kid)
        case And(l, r):
            return And(new_kid if i == 0 else l, new_kid if i == 1 else r)
        case Or(l, r):
            return Or(new_kid if i == 0 else l, new_kid if i == 1 else r)
        case Implies(l, r):
            return Implies(new_kid if i == 0 else l, new_kid if i == 1 else r)
        case Iff(l, r):
            return Iff(new_kid if i == 0 else l, new_kid if i == 1 else r)
        case Forall(var, _):
            return Forall(var, new_kid)
        case Exists(var, _):
            return Exists(var, new_kid)
    raise TypeError(f"cannot replace inside {f!r}")


def all_positions(f: Formula, formulas_only: bool = False) -> list[tuple[int, ...]]:
    """All paths into f, pre-order. With formulas_only, term positions are skipped."""
    out: list[tuple[int, ...]] = []

    def walk(node, path):
        is_formula = not isinstance(node, (BoundVar, Parameter, Unknown, Constant, FunctionApp))
        if is_formula or not formulas_only:
            out.append(path)
        if formulas_only and not is_formula:
            return
        for i, kid in enumerate(node_children(node)):
            walk(kid, path + (i,))

    walk(f, ())
    return out


# ---------------------------------------------------------------- free names


def free_symbols_term(t: Term) -> tuple[frozenset[Parameter], frozenset[Unknown]]:
    params: set[Parameter] = set()
    unknowns: set[Unknown] = set()

    def walk(u: Term):
        match u:
            case Parameter():
                params.add(u)
            case Unknown():
                unknowns.add(u)
            case FunctionApp(_, args):
                for a in args:
                    walk(a)
            case _:
                pass

    walk(t)
    return frozenset(params), frozenset(unknowns)


def free_symbols(f: Formula) -> tuple[frozenset[Parameter], frozenset[Unknown]]:
    """Parameters and unknowns occurring in f (they are never binder-bound)."""
    params: set[Parameter] = set()
    unknowns: set[Unknown] = set()

    def walk(g: Formula):
        match g:
            case PredApp(_, args):
                for a in args:
                    p, u = free_symbols_term(a)
                    params.update(p)
                    unknowns.update(u)
            case Equality(lhs, rhs):
                for a in (lhs, rhs):
                    p, u = free_symbols_term(a)
                    params.update(p)
                    unknowns.update(u)
            case _:
                for kid in formula_children(g):
                    walk(kid)

    walk(f)
    return frozenset(params), frozenset(unknowns)


def parameters_of(f: Formula) -> frozenset[Parameter]:
    return free_symbols(f)[0]


def unknowns_of(f: Formula) -> frozenset[Unknown]:
    return free_symbols(f)[1]


def surface_names(*nodes) -> set[str]:
    """Every identifier that could collide with a binder name when printed."""
    names: set[str] = set()

    def walk(node):
        match node:
            case BoundVar(name):
                names.add(name)
            case Parameter():
                names.add(node.printed)
            case Constant(symbol):
                names.add(symbol)
            case FunctionApp(symbol, args):
                names.add(symbol)
                for a in args:
                    walk(a)
            case Unknown():
                pass
            case PredApp(_, args):
                for a in args:
                    walk(a)
            case Equality(lhs, rhs):
                walk(lhs)
                walk(rhs)
            case Forall(var, body) | Exists(var, body):
                names.add(var)
                walk(body)
            case _ if isinstance(node, Bottom):
                pass
            case _:
                for kid in formula_children(node):
                    walk(kid)

    for n in nodes:
        walk(n)
    return names


def fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    stem = _TRAILING_DIGITS.match(base)
    stem = stem.group(1) if stem and stem.group(1) else base
    n = 1
    while f"{stem}{n}" in taken:
        n += 1
    return f"{stem}{n}"


# ---------------------------------------------------------------- substitution


def _subst_term(t: Term, mapping: dict) -> Term:
    """mapping keys are BoundVar/Parameter/Unknown values."""
    if t in mapping:
        return mapping[t]
    if isinstance(t, FunctionApp):
        return FunctionApp(t.symbol, tuple(_subst_term(a, mapping) for a in t.args))
    return t


def substitute(f: Formula, target: Term, replacement: Term) -> Formula:
    """Capture-avoiding replacement of every free occurrence of target.

    target may be a BoundVar (substitution under its binder having been
    stripped), a Parameter, or an Unknown. Binders shadowing a BoundVar
    target stop the substitution; binders whose name collides with a name
    appearing in the replacement are renamed first.
    """
    if not isinstance(target, (BoundVar, Parameter, Unknown)):
        raise TypeError(f"cannot substitute for {target!r}")
    replacement_names = surface_names(replacement)

    def walk(g: Formula) -> Formula:
        match g:
            case PredApp(symbol, args):
                return PredApp(symbol, tuple(_subst_term(a, {target: replacement}) for a in args))
            case Equality(lhs, rhs):
                return Equality(
                    _subst_term(lhs, {target: replacement}),
                    _subst_term(rhs, {target: replacement}),
                )
            case Forall(var, body) | Exists(var, body):
                cls = type(g)
                if isinstance(target, BoundVar) and target.name == var:
                    return g  # shadowed: inner occurrences are a different variable
                if var in replacement_names:
                    taken = surface_names(body) | replacement_names | {var}
                    if isinstance(target, BoundVar):
                        taken.add(target.name)
                    new_var = fresh_name(var, taken)
                    body = substitute(body, BoundVar(var), BoundVar(new_var))
                    var = new_var
                return cls(var, walk(body))
            case Not(body):
                return Not(walk(body))
            case And(l, r):
                return And(walk(l), walk(r))
            case Or(l, r):
                return Or(walk(l), walk(r))
            case Implies(l, r):
                return Implies(walk(l), walk(r))
            case Iff(l, r):
                return Iff(walk(l), walk(r))
            case _:
                return g

    return walk(f)


def instantiate_binder(f: Formula, witness: Term) -> Formula:
    """Body of a quantified formula with its bound variable replaced by witness."""
    if not isinstance(f, QUANTIFIERS):
        raise TypeError(f"not a quantified formula: {f!r}")
    return substitute(f.body, BoundVar(f.var), witness)


# ---------------------------------------------------------------- alpha


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""

    def walk(a: Formula, b: Formula, env: dict[str, str], rng: set[str]) -> bool:
        if type(a) is not type(b):
            return False
        match a:
            case PredApp(symbol, args):
                return (
                    symbol == b.symbol
                    and len(args) == len(b.args)
                    and all(_alpha_term_env(x, y, env, rng) for x, y in zip(args, b.args))
                )
            case Equality(lhs, rhs):
                return _alpha_term_env(lhs, b.lhs, env, rng) and _alpha_term_env(rhs, b.rhs, env, rng)
            case Bottom():
                return True
            case Forall(var, body) | Exists(var, body):
                new_env = dict(env)
                new_env[var] = b.var
                return walk(body, b.body, new_env, rng | {b.var})
            case Not(body):
                return walk(body, b.body, env, rng)
            case _:
                return walk(a.left, b.left, env, rng) and walk(a.right, b.right, env, rng)

    def _alpha_term_env(s: Term, t: Term, env: dict[str, str], rng: set[str]) -> bool:
        match (s, t):
            case (BoundVar(x), BoundVar(y)):
                if x in env:
                    return env[x] == y
                return x == y and y not in rng
            case (FunctionApp(fa, xs), FunctionApp(fb, ys)):
                return (
                    fa == fb
                    and len(xs) == len(ys)
                    and all(_alpha_term_env(p, q, env, rng) for p, q in zip(xs, ys))
                )
            case _:
                return s == t

    return walk(f, g, {}, set())


# ---------------------------------------------------------------- matching


def match_schema(
    pattern: Formula,
    instance: Formula,
    flexible: frozenset[Parameter],
) -> Optional[dict[Parameter, Term]]:
    """Match instance against pattern whose flexible parameters may bind terms.

    Binding a term that mentions a variable bound locally on the instance
    side (capture) fails, as does an inconsistent repeated binding. Bound
    variables are compared up to renaming. Returns the binding map, or
    None when there is no match.
    """
    bindings: dict[Parameter, Term] = {}

    def term(p: Term, i: Term, env: dict[str, str], local: set[str]) -> bool:
        if isinstance(p, Parameter) and p in flexible:
            p_names = {v for v in _bound_names_in_term(i)}
            if p_names & local:
                return False  # would capture an instance-side local binder
            if p in bindings:
                return i == bindings[p]
            bindings[p] = i
            return True
        match (p, i):
            case (BoundVar(x), BoundVar(y)):
                return env.get(x, x) == y
            case (FunctionApp(fa, xs), FunctionApp(fb, ys)):
                return fa == fb and len(xs) == len(ys) and all(
                    term(a, b, env, local) for a, b in zip(xs, ys)
                )
            case _:
                return p == i

    def walk(p: Formula, i: Formula, env: dict[str, str], local: set[str]) -> bool:
        if type(p) is not type(i):
            return False
        match p:
            case PredApp(symbol, args):
                return symbol == i.symbol and len(args) == len(i.args) and all(
                    term(a, b, env, local) for a, b in zip(args, i.args)
                )
            case Equality(lhs, rhs):
                return term(lhs, i.lhs, env, local) and term(rhs, i.rhs, env, local)
            case Bottom():
                return True
            case Forall(var, body) | Exists(var, body):
                new_env = dict(env)
                new_env[var] = i.var
                return walk(body, i.body, new_env, local | {i.var})
            case Not(body):
                return walk(body, i.body, env, local)
            case _:
                return walk(p.left, i.left, env, local) and walk(p.right, i.right, env, local)

    def _bound_names_in_term(t: Term) -> set[str]:
        match t:
            case BoundVar(name):
                return {name}
            case FunctionApp(_, args):
                out: set[str] = set()
                for a in args:
                    out |= _bound_names_in_term(a)
                return out
            case _:
                return set()

    return bindings if walk(pattern, instance, {}, set()) else None


def match_instantiation(body: Formula, var: str, instance: Formula):
    """Find t such that body[var := t] is alpha-equal to instance.

    Returns (True, t) on a match (t is None when var does not occur in
    body, i.e. the instantiation is vacuous), or (False, None).
    """
    taken = surface_names(body, instance)
    n = 0
    while f"slot{n}" in taken:
        n += 1
    slot = Parameter("slot", n)
    pattern = substitute(body, BoundVar(var), slot)
    bindings = match_schema(pattern, instance, frozenset({slot}))
    if bindings is None:
        return False, None
    return True, bindings.get(slot)


def instantiate_schema(schema: Formula, bindings: dict[Parameter, Term]) -> Formula:
    out = schema
    for param, term in bindings.items():
        out = substitute(out, param, term)
    return out


# ---------------------------------------------------------------- validation


def validate_term(t: Term, sig: Signature, bound: set[str]):
    match t:
        case BoundVar(name):
            if name not in bound:
                raise MalformedSequent(f"dangling bound variable {name!r}")
        case Constant(symbol):
            if symbol not in sig.constants:
                raise UnknownSymbol(symbol)
        case FunctionApp(symbol, args):
            if symbol not in sig.functions:
                raise UnknownSymbol(symbol)
            if sig.functions[symbol] != len(args):
                raise ArityMismatch(symbol, sig.functions[symbol], len(args))
            for a in args:
                validate_term(a, sig, bound)
        case _:
            pass


def validate_formula(f: Formula, sig: Signature, bound: Optional[set[str]] = None):
    """Raise if f uses undeclared symbols, wrong arities, or dangling bound vars."""
    bound = set() if bound is None else bound
    match f:
        case PredApp(symbol, args):
            if symbol not in sig.predicates:
                raise UnknownSymbol(symbol)
            if sig.predicates[symbol] != len(args):
                raise ArityMismatch(symbol, sig.predicates[symbol], len(args))
            for a in args:
                validate_term(a, sig, bound)
        case Equality(lhs, rhs):
            validate_term(lhs, sig, bound)
            validate_term(rhs, sig, bound)
        case Forall(var, body) | Exists(var, body):
            validate_formula(body, sig, bound | {var})
        case _:
            for kid in formula_children(f):
                validate_formula(kid, sig, bound)


def is_propositional(f: Formula) -> bool:
    """True when f contains no quantifiers, no equality, and only 0-ary atoms."""
    match f:
        case PredApp(_, args):
            return not args
        case Equality() | Forall() | Exists():
            return False
        case _:
            return all(is_propositional(k) for k in formula_children(f))


def prop_symbols(f: Formula) -> frozenset[str]:
    match f:
        case PredApp(symbol, ()):
            return frozenset({symbol})
        case _:
            out: frozenset[str] = frozenset()
            for kid in formula_children(f):
                out |= prop_symbols(kid)
            return out
