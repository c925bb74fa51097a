"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line (run with -s to watch).
Runtime budgets are asserted where the criterion states one.
"""
import json
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from logiclab.checker import check_tree
from logiclab.corpus import (
    CORPUS_SCRIPTS,
    QUANTIFIER_SHIFT_WRONG_SCRIPT,
    corpus_exercises,
)
from logiclab.errors import EigenvariableViolation
from logiclab.generator import GeneratorConfig, generate, sample_formula
from logiclab.kernel import make_sequent, state_digest
from logiclab.models import check_refutation
from logiclab.oracle import find_countermodel, truth_table_valid
from logiclab.parser import parse_formula
from logiclab.sessions import SessionStore
from logiclab.syntax import alpha_equal, print_formula
from logiclab.tactics import ScriptRunner, UnfoldCmd, auto, parse_script
from logiclab.tree import TreeNode, extract_tree

from conftest import FO_SIG, random_fo_formula
from test_checker import all_paths, mutate


@contextmanager
def criterion(name: str, budget_seconds=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}", flush=True)
        raise
    elapsed = time.perf_counter() - start
    print(f"PASS  {name}  ({elapsed:.2f}s)", flush=True)
    if budget_seconds is not None:
        assert elapsed < budget_seconds, f"{name}: {elapsed:.2f}s over the {budget_seconds}s budget"


WEIGHTS = {"and": 1, "or": 1, "implies": 1, "iff": 0.5, "not": 1}


def _seeded_sequents(count: int, max_symbols: int = 8, max_depth: int = 5):
    rng = random.Random(0xACCE97)
    symbols = tuple("pqrstuvw")
    out = []
    for _ in range(count):
        n = rng.randint(1, max_symbols)
        depth = rng.randint(1, max_depth)
        hyps = [
            sample_formula(rng, symbols[:n], WEIGHTS, depth)
            for _ in range(rng.randint(0, 2))
        ]
        concl = sample_formula(rng, symbols[:n], WEIGHTS, depth)
        out.append(make_sequent(hyps, concl))
    return out


def test_01_oracle_soundness_suite():
    with criterion("oracle soundness: 1000 sequents, DPLL vs truth tables", 10):
        for seq in _seeded_sequents(1000):
            valid = truth_table_valid(seq)
            model = find_countermodel(seq)
            assert (model is None) == valid
            if model is not None:
                assert check_refutation(seq, model).refutes


def test_02_kernel_oracle_agreement():
    with criterion("kernel/oracle agreement: 500 prove + 200 refute exercises", 60):
        for seed in range(500):
            spec = generate(GeneratorConfig(
                seed=seed, mode="prove", num_symbols=3, max_depth=3, num_hypotheses=1,
            ))
            from logiclab.kernel import init_proof

            state = init_proof(spec.sequent, spec.signature)
            closed, _ = auto(state, 0, 2, 100_000)
            assert closed.complete, f"auto 2 left goals open on seed {seed}"
            tree = extract_tree(closed)
            verdict = check_tree(tree, spec.sequent, spec.definitions)
            assert verdict.ok, f"seed {seed}: {verdict.reason}"
        for seed in range(200):
            spec = generate(GeneratorConfig(
                seed=seed, mode="refute", num_symbols=4, max_depth=4, num_hypotheses=1,
            ))
            assert spec.certificate is not None
            assert check_refutation(spec.sequent, spec.certificate).refutes


def test_03_quantifier_shift_pair():
    with criterion("quantifier-shift pair: proof shape and eigenvariable trap"):
        ex = next(e for e in corpus_exercises() if e.id == "quantifier-shift")

        runner = ScriptRunner(ex.sequent, ex.signature, ex.definitions, ex.automation_cap)
        for cmd in parse_script(CORPUS_SCRIPTS[ex.id], ex.signature).commands:
            runner.run(cmd)
        assert runner.status == "proved"
        tree = extract_tree(runner.state)
        assert tree.size() == 5, f"expected a 5-inference tree, got {tree.size()}"
        assert check_tree(tree, ex.sequent).ok

        wrong = ScriptRunner(ex.sequent, ex.signature, ex.definitions, ex.automation_cap)
        commands = parse_script(QUANTIFIER_SHIFT_WRONG_SCRIPT, ex.signature).commands
        wrong.run(commands[0])
        wrong.run(commands[1])
        with pytest.raises(EigenvariableViolation):
            wrong.run(commands[2])  # the ForallI step


def test_04_corpus_definitional_scripts():
    with criterion("corpus scripts: union-of-intersection and complement exercises"):
        union = next(e for e in corpus_exercises() if e.id == "union-of-intersection")
        script = parse_script(CORPUS_SCRIPTS[union.id], union.signature)
        assert len(script.commands) <= 8
        unfolds = [c for c in script.commands if isinstance(c, UnfoldCmd)]
        assert len(unfolds) == 2
        runner = ScriptRunner(union.sequent, union.signature, union.definitions, union.automation_cap)
        for cmd in script.commands:
            runner.run(cmd)
        assert runner.status == "proved"

        diff = next(e for e in corpus_exercises() if e.id == "complement-conditional")
        script = parse_script(CORPUS_SCRIPTS[diff.id], diff.signature)
        unfolds = [c for c in script.commands if isinstance(c, UnfoldCmd)]
        assert len(unfolds) == 1
        runner = ScriptRunner(diff.sequent, diff.signature, diff.definitions, diff.automation_cap)
        for cmd in script.commands:
            runner.run(cmd)
        assert runner.status == "proved"


def _fifty_trees():
    trees = []
    for ex in corpus_exercises():
        runner = ScriptRunner(ex.sequent, ex.signature, ex.definitions, ex.automation_cap)
        for cmd in parse_script(CORPUS_SCRIPTS[ex.id], ex.signature).commands:
            runner.run(cmd)
        if runner.status == "proved":
            trees.append((ex.sequent, ex.definitions, extract_tree(runner.state)))
    seed = 0
    while len(trees) < 50:
        spec = generate(GeneratorConfig(
            seed=seed, mode="prove", num_symbols=2, max_depth=2, num_hypotheses=1,
        ))
        from logiclab.kernel import init_proof

        state = init_proof(spec.sequent, spec.signature)
        closed, _ = auto(state, 0, 2, 100_000)
        trees.append((spec.sequent, spec.definitions, extract_tree(closed)))
        seed += 1
    return trees[:50]


def test_05_checker_sensitivity():
    with criterion("checker sensitivity: single-point mutations on 50 trees", 30):
        trees = _fifty_trees()
        assert len(trees) == 50
        total = 0
        for claimed, defs, tree in trees:
            assert check_tree(tree, claimed, defs).ok
            for path in all_paths(tree):
                for kind in ("rule", "formula", "discharge"):
                    mutated = mutate(tree, path, kind)
                    if mutated == tree:
                        continue
                    total += 1
                    assert not check_tree(mutated, claimed, defs).ok, (
                        f"mutation {kind} at {path} survived"
                    )
        assert total > 1000


COMMAND_POOL = [
    "backward impl_intro", "backward and_intro", "backward iff_intro",
    "backward raa", "backward or_intro1", "backward or_intro2",
    "assumption", "auto 1", "undo", "qed",
    "forward h1 and_elim1", "forward h1 and_elim2", "forward h1 impl_elim",
    "forward h1 not_elim", "forward h1 or_elim",
    "this is not a command", "backward bogus_rule", "refute with p=0",
]


def test_06_replay_determinism(tmp_path):
    with criterion("replay determinism: 100 seeded random sessions"):
        store = SessionStore(tmp_path)
        store.add_exercises(corpus_exercises(), "corpus")
        prove_ids = [e.id for e in store.exercises() if e.mode == "prove"]
        rng = random.Random(0xF1B)
        for i in range(100):
            session = store.create_session(rng.choice(prove_ids), f"s{i}")
            for _ in range(rng.randint(2, 12)):
                store.apply_command(session.id, rng.choice(COMMAND_POOL))
                if store.get_session(session.id).status != "open":
                    break
            first = store.replay(session.id)
            second = store.replay(session.id)
            assert first.digests == second.digests
            live = state_digest(store.get_session(session.id).runner.state)
            assert first.digests[-1] == live


def test_07_generator_reproducibility(tmp_path):
    with criterion("generator reproducibility: byte-identical packs across processes"):
        outputs = []
        for run, hash_seed in ((1, "4021"), (2, "977")):
            out = tmp_path / f"pack{run}.json"
            env = dict(os.environ, PYTHONHASHSEED=hash_seed)
            subprocess.run(
                [
                    sys.executable, "-m", "logiclab.cli", "gen",
                    "--seed", "31337", "--mode", "mystery", "--count", "5",
                    "--out", str(out),
                ],
                check=True, env=env, capture_output=True,
            )
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]


def test_08_round_trips(tmp_path):
    with criterion("round trips: parse/print alpha-equality and script re-runs"):
        from logiclab.parser import parse_formula as parse

        rng = random.Random(0x50)
        for _ in range(1000):
            f = random_fo_formula(rng, depth=rng.randint(0, 4))
            assert alpha_equal(parse(print_formula(f), FO_SIG), f)

        store = SessionStore(tmp_path)
        store.add_exercises(corpus_exercises(), "corpus")
        for ex in corpus_exercises():
            if ex.mode != "prove":
                continue
            session = store.create_session(ex.id, "acceptance")
            for line in CORPUS_SCRIPTS[ex.id].strip().splitlines():
                store.apply_command(session.id, line)
            assert store.get_session(session.id).status == "proved"
            script_text = store.export(session.id, "script")
            rerun = ScriptRunner(ex.sequent, ex.signature, ex.definitions, ex.automation_cap)
            for cmd in parse_script(script_text, ex.signature).commands:
                rerun.run(cmd)
            assert rerun.status == "proved"
