"""Conjecture generation: classification, determinism, label soundness."""
import json

import pytest

from logiclab.errors import GenerationExhausted, Undecided
from logiclab.exercises import exercise_from_json, pack_dumps, pack_loads
from logiclab.generator import GeneratorConfig, classify, generate, score_difficulty
from logiclab.kernel import make_sequent
from logiclab.models import check_refutation
from logiclab.oracle import truth_table_valid
from logiclab.parser import parse_formula
from logiclab.syntax import Signature, prop_signature

PQ = prop_signature("p", "q")
MONO = Signature(predicates={"P": 1, "Q": 1})


class TestClassify:
    def test_identity_provable(self):
        seq = make_sequent([parse_formula("p", PQ)], parse_formula("p", PQ))
        assert classify(seq) == ("provable", None)

    def test_distinct_atoms_refutable(self):
        seq = make_sequent([parse_formula("p", PQ)], parse_formula("q", PQ))
        status, model = classify(seq)
        assert status == "refutable"
        assert model.assignment == {"p": True, "q": False}
        assert check_refutation(seq, model).refutes

    def test_peirce_provable(self):
        seq = make_sequent([], parse_formula("((p -> q) -> p) -> p", PQ))
        assert classify(seq)[0] == "provable"

    def test_first_order_refutable(self):
        seq = make_sequent(
            [parse_formula("(forall x) P(x)", MONO)],
            parse_formula("(exists x) Q(x)", MONO),
        )
        status, model = classify(seq)
        assert status == "refutable" and check_refutation(seq, model).refutes

    def test_first_order_undecided(self):
        sig = Signature(predicates={"P": 2})
        seq = make_sequent(
            [parse_formula("(forall x)(forall y) P(x, y)", sig)],
            parse_formula("(forall y)(forall x) P(x, y)", sig),
        )
        with pytest.raises(Undecided):
            classify(seq, max_domain=2)


class TestGenerate:
    def test_deterministic(self):
        cfg = GeneratorConfig(seed=2024, mode="prove")
        assert generate(cfg) == generate(cfg)

    def test_byte_identical_packs(self):
        cfg = GeneratorConfig(seed=11, mode="mystery")
        a = pack_dumps([generate(cfg)], "instructor")
        b = pack_dumps([generate(GeneratorConfig.from_json(json.loads(json.dumps(cfg.to_json()))))],
                       "instructor")
        assert a == b

    def test_refute_certificates_verified(self):
        for seed in range(30):
            spec = generate(GeneratorConfig(seed=seed, mode="refute"))
            assert spec.certificate is not None
            assert check_refutation(spec.sequent, spec.certificate).refutes

    def test_prove_exercises_valid(self):
        for seed in range(30):
            spec = generate(GeneratorConfig(seed=seed, mode="prove"))
            assert truth_table_valid(spec.sequent)

    def test_mystery_secrecy(self):
        spec = generate(GeneratorConfig(seed=3, mode="mystery"))
        student = spec.to_student_json()
        assert "hidden_status" not in student and "certificate" not in student
        assert "provenance" not in student
        instructor = spec.to_instructor_json()
        assert instructor["hidden_status"] in ("provable", "refutable")
        round_tripped = exercise_from_json(instructor)
        assert round_tripped.hidden_status == spec.hidden_status

    def test_exhaustion(self):
        # one symbol, pure disjunction, depth 1: every conclusion is p \/ p,
        # which is never valid, so prove generation must give up
        cfg = GeneratorConfig(
            seed=1, mode="prove", num_symbols=1, max_depth=1,
            connective_weights={"or": 1.0}, num_hypotheses=0, max_attempts=5,
        )
        with pytest.raises(GenerationExhausted):
            generate(cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=-1)
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, num_symbols=9)
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, connective_weights={"and": 0.0})
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, mode="ponder")


class TestDifficulty:
    def test_score_components(self):
        seq = make_sequent([], parse_formula("p -> p", PQ))
        # 1 connective + 2*1 symbol, level-1 closable: no +3
        assert score_difficulty(seq, PQ) == 3

    def test_harder_when_automation_fails(self):
        seq = make_sequent([], parse_formula("((p -> q) -> p) -> p", PQ))
        # 3 connectives + 2*2 symbols + 3 (level 1 cannot finish)
        assert score_difficulty(seq, PQ) == 10
