"""Shared test fixtures: signatures and a seeded random formula sampler
covering the full first-order syntax (binders, parameters, unknowns,
functions, equality)."""
from __future__ import annotations

import random

import pytest

from logiclab.syntax import (
    And,
    Bottom,
    BoundVar,
    Constant,
    Equality,
    Exists,
    Forall,
    FunctionApp,
    Iff,
    Implies,
    Not,
    Or,
    Parameter,
    PredApp,
    Signature,
    Unknown,
    prop_signature,
)

FO_SIG = Signature(
    predicates={"P": 2, "Q": 1, "R": 0},
    functions={"f": 1, "g": 2},
    constants={"c", "d"},
)

PROP_SIG = prop_signature("p", "q", "r", "s")


@pytest.fixture
def fo_sig() -> Signature:
    return FO_SIG


@pytest.fixture
def prop_sig() -> Signature:
    return PROP_SIG


def random_term(rng: random.Random, bound: tuple[str, ...], depth: int = 0):
    options = ["param", "const", "unknown"]
    if bound:
        options.append("bound")
    if depth < 2:
        options += ["f", "g"]
    kind = rng.choice(options)
    if kind == "bound":
        return BoundVar(rng.choice(bound))
    if kind == "param":
        base = rng.choice(["x", "y", "z"])
        ordinal = rng.choice([None, 1, 2])
        return Parameter(base, ordinal)
    if kind == "const":
        return Constant(rng.choice(["c", "d"]))
    if kind == "unknown":
        return Unknown(rng.randint(1, 3))
    if kind == "f":
        return FunctionApp("f", (random_term(rng, bound, depth + 1),))
    return FunctionApp(
        "g", (random_term(rng, bound, depth + 1), random_term(rng, bound, depth + 1))
    )


def random_fo_formula(rng: random.Random, depth: int, bound: tuple[str, ...] = ()):
    if depth <= 0:
        kind = rng.choice(["P", "Q", "R", "eq", "bottom"])
        if kind == "P":
            return PredApp("P", (random_term(rng, bound), random_term(rng, bound)))
        if kind == "Q":
            return PredApp("Q", (random_term(rng, bound),))
        if kind == "R":
            return PredApp("R")
        if kind == "eq":
            return Equality(random_term(rng, bound), random_term(rng, bound))
        return Bottom()
    kind = rng.choice(["not", "and", "or", "implies", "iff", "forall", "exists", "atom"])
    if kind == "atom":
        return random_fo_formula(rng, 0, bound)
    if kind == "not":
        return Not(random_fo_formula(rng, depth - 1, bound))
    if kind in ("forall", "exists"):
        var = rng.choice(["a", "b", "w"] + list(bound))  # shadowing on purpose
        body = random_fo_formula(rng, depth - 1, bound + (var,))
        return (Forall if kind == "forall" else Exists)(var, body)
    cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
    return cls(
        random_fo_formula(rng, depth - 1, bound),
        random_fo_formula(rng, depth - 1, bound),
    )
