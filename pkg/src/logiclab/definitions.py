"""Definitions as two-way rewrite rules.

A definition pairs a definiendum schema with a definiens schema over the
same schematic arguments; unfolding replaces an instance of the former by
the matching instance of the latter, folding goes the other way. The
registered set must be acyclic so students cannot smuggle in circular
reasoning.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import NoMatchAtPosition
from .syntax import (
    Formula,
    Parameter,
    free_symbols,
    instantiate_schema,
    match_schema,
    print_formula,
)


@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple[Parameter, ...]
    definiendum: Formula
    definiens: Formula

    def __post_init__(self):
        lhs_params, _ = free_symbols(self.definiendum)
        rhs_params, _ = free_symbols(self.definiens)
        schema = set(self.params)
        if lhs_params != schema:
            raise ValueError(
                f"definiendum of {self.name} must use exactly the schematic arguments"
            )
        if not rhs_params <= schema:
            stray = sorted(p.printed for p in rhs_params - schema)
            raise ValueError(f"definiens of {self.name} uses undeclared arguments {stray}")

    @property
    def head(self) -> str:
        """The symbol this definition introduces: the first symbol of the
        definiendum that the definiens does not mention."""
        lhs_symbols = _symbols_of(self.definiendum)
        rhs_symbols = set(_symbols_of(self.definiens))
        for s in lhs_symbols:
            if s not in rhs_symbols:
                return s
        return lhs_symbols[0] if lhs_symbols else self.name

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": [p.printed for p in self.params],
            "definiendum": print_formula(self.definiendum),
            "definiens": print_formula(self.definiens),
        }


def _symbols_of(f: Formula) -> list[str]:
    """Predicate/function/constant symbols in pre-order, first occurrence only."""
    from .syntax import Constant, Equality, FunctionApp, PredApp, formula_children

    out: list[str] = []

    def add(s: str):
        if s not in out:
            out.append(s)

    def walk_term(t):
        if isinstance(t, Constant):
            add(t.symbol)
        elif isinstance(t, FunctionApp):
            add(t.symbol)
            for a in t.args:
                walk_term(a)

    def walk(g: Formula):
        if isinstance(g, PredApp):
            add(g.symbol)
            for a in g.args:
                walk_term(a)
        elif isinstance(g, Equality):
            walk_term(g.lhs)
            walk_term(g.rhs)
        else:
            for kid in formula_children(g):
                walk(kid)

    walk(f)
    return out


# ---------------------------------------------------------------- rewriting


def unfold(defn: Definition, subformula: Formula) -> Formula:
    """The definiens instance matching subformula, or NoMatchAtPosition."""
    bindings = match_schema(defn.definiendum, subformula, frozenset(defn.params))
    if bindings is None:
        raise NoMatchAtPosition(
            f"{print_formula(subformula)} does not match the definiendum of {defn.name}"
        )
    return instantiate_schema(defn.definiens, bindings)


def fold(defn: Definition, subformula: Formula) -> Formula:
    """The definiendum instance matching subformula, or NoMatchAtPosition."""
    bindings = match_schema(defn.definiens, subformula, frozenset(defn.params))
    if bindings is None:
        raise NoMatchAtPosition(
            f"{print_formula(subformula)} does not match the definiens of {defn.name}"
        )
    return instantiate_schema(defn.definiendum, bindings)


def definition_matches(defn: Definition, subformula: Formula) -> Iterator[Formula]:
    """All one-step rewrites of subformula under defn, in either direction."""
    for direction in (unfold, fold):
        try:
            yield direction(defn, subformula)
        except NoMatchAtPosition:
            continue


# ---------------------------------------------------------------- circularity


@dataclass(frozen=True)
class DefinitionSetVerdict:
    ok: bool
    cycle: tuple[str, ...] = ()


def check_definition_set(defs: Iterable[Definition]) -> DefinitionSetVerdict:
    """ok iff no definition's definiens reaches its own head through the
    dependency graph (edge d1 -> d2 when d2's head occurs in d1's definiens)."""
    defs = tuple(defs)
    heads = {d.name: d.head for d in defs}
    by_head: dict[str, list[str]] = {}
    for d in defs:
        by_head.setdefault(d.head, []).append(d.name)
    edges: dict[str, list[str]] = {d.name: [] for d in defs}
    for d in defs:
        mentioned = set(_symbols_of(d.definiens))
        for head, names in sorted(by_head.items()):
            if head in mentioned:
                edges[d.name].extend(n for n in names)

    # iterative DFS with an explicit stack to report the cycle found
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in edges}
    for start in sorted(edges):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        trail = [start]
        color[start] = GRAY
        while stack:
            name, idx = stack[-1]
            if idx < len(edges[name]):
                stack[-1] = (name, idx + 1)
                nxt = edges[name][idx]
                if color[nxt] == GRAY:
                    cycle = trail[trail.index(nxt):] + [nxt]
                    return DefinitionSetVerdict(False, tuple(cycle))
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
                    trail.append(nxt)
            else:
                color[name] = BLACK
                stack.pop()
                trail.pop()
    return DefinitionSetVerdict(True)


def definition_from_json(data: dict, signature) -> Definition:
    from .parser import parse_formula

    from .syntax import make_parameter

    return Definition(
        name=data["name"],
        params=tuple(make_parameter(p) for p in data["params"]),
        definiendum=parse_formula(data["definiendum"], signature),
        definiens=parse_formula(data["definiens"], signature),
    )
