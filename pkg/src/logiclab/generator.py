"""Seeded conjecture generation with oracle-backed classification.

Formulas are sampled by weighted recursive descent; candidate sequents
are classified with the truth-table oracle and resampled (advancing the
same stream) until a sequent of the requested class appears. Everything
is a pure function of (seed, config).
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import GenerationExhausted, Undecided
from .exercises import MODES, MYSTERY, PROVE, REFUTE, ExerciseSpec
from .kernel import Sequent, init_proof, make_sequent
from .models import FiniteStructure, Model, Valuation
from .oracle import find_countermodel, fo_countermodel_search, truth_table_valid
from .syntax import (
    And,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    PredApp,
    Signature,
    is_propositional,
    prop_signature,
    prop_symbols,
)
from .tactics import AutomationPolicy, auto

SYMBOL_POOL = ("p", "q", "r", "s", "t", "u", "v", "w")
CONNECTIVES = ("and", "or", "implies", "iff", "not")
DEFAULT_WEIGHTS = {"and": 1.0, "or": 1.0, "implies": 1.0, "iff": 0.5, "not": 1.0}


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    num_symbols: int = 3
    max_depth: int = 4
    connective_weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    num_hypotheses: int = 1
    mode: str = PROVE
    max_attempts: int = 500

    def __post_init__(self):
        object.__setattr__(self, "connective_weights", dict(self.connective_weights))
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.num_symbols <= 8:
            raise ValueError("num_symbols must be in 1..8")
        if not 1 <= self.max_depth <= 6:
            raise ValueError("max_depth must be in 1..6")
        if not 0 <= self.num_hypotheses <= 4:
            raise ValueError("num_hypotheses must be in 0..4")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        unknown = set(self.connective_weights) - set(CONNECTIVES)
        if unknown:
            raise ValueError(f"unknown connectives {sorted(unknown)}")
        if any(w < 0 for w in self.connective_weights.values()):
            raise ValueError("weights must be non-negative")
        if not any(w > 0 for w in self.connective_weights.values()):
            raise ValueError("at least one connective weight must be positive")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")

    def digest(self) -> str:
        payload = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "num_symbols": self.num_symbols,
            "max_depth": self.max_depth,
            "connective_weights": dict(sorted(self.connective_weights.items())),
            "num_hypotheses": self.num_hypotheses,
            "mode": self.mode,
            "max_attempts": self.max_attempts,
        }

    @staticmethod
    def from_json(data: dict) -> "GeneratorConfig":
        return GeneratorConfig(
            seed=data["seed"],
            num_symbols=data.get("num_symbols", 3),
            max_depth=data.get("max_depth", 4),
            connective_weights=data.get("connective_weights", dict(DEFAULT_WEIGHTS)),
            num_hypotheses=data.get("num_hypotheses", 1),
            mode=data.get("mode", PROVE),
            max_attempts=data.get("max_attempts", 500),
        )


# ---------------------------------------------------------------- sampling


def sample_formula(rng: random.Random, symbols: tuple[str, ...],
                   weights: Mapping[str, float], max_depth: int, depth: int = 0) -> Formula:
    """Weighted recursive descent. The chance of stopping at an atom grows
    linearly with depth and is certain at max_depth."""
    if depth >= max_depth:
        return PredApp(rng.choice(symbols))
    options = [(name, weights.get(name, 0.0)) for name in CONNECTIVES]
    options = [(name, w) for name, w in options if w > 0]
    total = sum(w for _, w in options)
    atom_weight = total * depth / max_depth
    pick = rng.random() * (total + atom_weight)
    for name, w in options:
        if pick < w:
            left = sample_formula(rng, symbols, weights, max_depth, depth + 1)
            if name == "not":
                return Not(left)
            right = sample_formula(rng, symbols, weights, max_depth, depth + 1)
            cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[name]
            return cls(left, right)
        pick -= w
    return PredApp(rng.choice(symbols))


# ---------------------------------------------------------------- classify


def classify(s: Sequent, max_domain: int = 4) -> tuple[str, Optional[Model]]:
    """("provable", None) for oracle-valid sequents, ("refutable", model)
    with a verified countermodel otherwise. First-order sequents with no
    countermodel up to max_domain raise Undecided."""
    formulas = [f for _, f in s.hypotheses] + [s.conclusion]
    if all(is_propositional(f) for f in formulas):
        model = find_countermodel(s)
        if model is None:
            return "provable", None
        return "refutable", model
    structure = fo_countermodel_search(s, max_domain)
    if structure is not None:
        return "refutable", structure
    raise Undecided(
        "no countermodel up to the domain bound and no first-order validity oracle"
    )


# ---------------------------------------------------------------- generate


def generate(config: GeneratorConfig) -> ExerciseSpec:
    """Deterministic in (seed, config); resamples until the requested class
    appears or max_attempts is exhausted."""
    rng = random.Random(config.seed)
    symbols = SYMBOL_POOL[: config.num_symbols]
    signature = prop_signature(*symbols)
    for _ in range(config.max_attempts):
        hyps = [
            sample_formula(rng, symbols, config.connective_weights, config.max_depth)
            for _ in range(config.num_hypotheses)
        ]
        conclusion = sample_formula(rng, symbols, config.connective_weights, config.max_depth)
        sequent = make_sequent(hyps, conclusion)
        status, certificate = classify(sequent)
        if config.mode == PROVE and status != "provable":
            continue
        if config.mode == REFUTE and status != "refutable":
            continue
        return _build_spec(config, signature, sequent, status, certificate)
    raise GenerationExhausted(
        f"no {config.mode} sequent found in {config.max_attempts} attempts"
    )


def _build_spec(config, signature, sequent, status, certificate) -> ExerciseSpec:
    difficulty = score_difficulty(sequent, signature)
    digest = config.digest()
    hidden = status if config.mode == MYSTERY else None
    kept_certificate = certificate if config.mode in (REFUTE, MYSTERY) else None
    return ExerciseSpec(
        id=f"gen-{config.seed}-{digest[:8]}",
        title=f"generated {config.mode} exercise (seed {config.seed})",
        sequent=sequent,
        signature=signature,
        mode=config.mode,
        automation_cap=AutomationPolicy(max_level=1, budget=64),
        definitions=(),
        difficulty=difficulty,
        hidden_status=hidden,
        certificate=kept_certificate,
        provenance={"seed": config.seed, "config_digest": digest},
    )


def score_difficulty(sequent: Sequent, signature: Signature) -> int:
    """Connective count, plus twice the distinct symbols, plus 3 when
    level-1 automation (budget 64) cannot finish the proof alone."""
    connectives = sum(_count_connectives(f) for _, f in sequent.hypotheses)
    connectives += _count_connectives(sequent.conclusion)
    symbols: frozenset[str] = prop_symbols(sequent.conclusion)
    for _, f in sequent.hypotheses:
        symbols |= prop_symbols(f)
    score = connectives + 2 * len(symbols)
    state = init_proof(sequent, signature)
    closed, _ = auto(state, 0, 1, 64)
    if closed.open_goals:
        score += 3
    return score


def _count_connectives(f: Formula) -> int:
    from .syntax import Bottom, Equality, formula_children

    own = 0 if isinstance(f, (PredApp, Equality, Bottom)) else 1
    return own + sum(_count_connectives(k) for k in formula_children(f))
