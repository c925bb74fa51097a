"""The handcrafted exercise corpus and its reference scripts.

Covers the three exercise classes (prove, refute, mystery), the
set-theoretic definitional exercises, the quantifier-shift pair, and the
classical-logic staples. Reference scripts are instructor material; they
never appear in student-facing payloads.
"""
from __future__ import annotations

from .definitions import Definition
from .exercises import MYSTERY, PROVE, REFUTE, ExerciseSpec
from .kernel import Sequent
from .models import parse_model
from .parser import parse_formula
from .syntax import Signature, make_parameter, prop_signature
from .tactics import AutomationPolicy

SET_SIGNATURE = Signature(
    predicates={"In": 2},
    functions={"Union": 1, "Inter": 2, "Diff": 2},
    constants={"x", "F", "G", "a", "b", "c"},
)


def set_theory_definitions() -> tuple[Definition, ...]:
    e, s, u, v = (make_parameter(n) for n in ("e", "S", "u", "v"))
    return (
        Definition(
            "union_member", (e, s),
            parse_formula("In(e, Union(S))", SET_SIGNATURE),
            parse_formula("(exists y)(In(y, S) /\\ In(e, y))", SET_SIGNATURE),
        ),
        Definition(
            "inter_member", (e, u, v),
            parse_formula("In(e, Inter(u, v))", SET_SIGNATURE),
            parse_formula("In(e, u) /\\ In(e, v)", SET_SIGNATURE),
        ),
        Definition(
            "diff_member", (e, u, v),
            parse_formula("In(e, Diff(u, v))", SET_SIGNATURE),
            parse_formula("In(e, u) /\\ ~In(e, v)", SET_SIGNATURE),
        ),
    )


def _sequent(sig: Signature, hypotheses: list[str], conclusion: str) -> Sequent:
    hyps = tuple(
        (f"h{i + 1}", parse_formula(h, sig)) for i, h in enumerate(hypotheses)
    )
    return Sequent(hyps, parse_formula(conclusion, sig))


def corpus_exercises() -> tuple[ExerciseSpec, ...]:
    pq = prop_signature("p", "q")
    pqr = prop_signature("p", "q", "r")
    mono = Signature(predicates={"P": 1, "Q": 1})
    binary = Signature(predicates={"P": 2})
    eqsig = Signature(predicates={"P": 1}, constants={"a", "b"})
    set_defs = set_theory_definitions()

    light = AutomationPolicy(max_level=1, budget=32)
    blast = AutomationPolicy(max_level=2, budget=50_000)

    return (
        ExerciseSpec(
            id="imp-identity", title="the identity conditional",
            sequent=_sequent(pq, [], "p -> p"),
            signature=pq, mode=PROVE, automation_cap=light, difficulty=3,
        ),
        ExerciseSpec(
            id="and-commutes", title="conjunction commutes",
            sequent=_sequent(pq, ["p /\\ q"], "q /\\ p"),
            signature=pq, mode=PROVE, automation_cap=light, difficulty=6,
        ),
        ExerciseSpec(
            id="or-commutes", title="disjunction commutes",
            sequent=_sequent(pq, ["p \\/ q"], "q \\/ p"),
            signature=pq, mode=PROVE, automation_cap=light, difficulty=9,
        ),
        ExerciseSpec(
            id="double-negation", title="double negation elimination",
            sequent=_sequent(pq, ["~~p"], "p"),
            signature=pq, mode=PROVE, automation_cap=light, difficulty=7,
        ),
        ExerciseSpec(
            id="peirce", title="Peirce's law",
            sequent=_sequent(pq, [], "((p -> q) -> p) -> p"),
            signature=pq, mode=PROVE, automation_cap=blast, difficulty=10,
        ),
        ExerciseSpec(
            id="iff-primitive", title="the biconditional as two conditionals",
            sequent=_sequent(pq, [], "(p <-> q) <-> ((p -> q) /\\ (q -> p))"),
            signature=pq, mode=PROVE, automation_cap=blast, difficulty=12,
        ),
        ExerciseSpec(
            id="quantifier-shift", title="commuting universal quantifiers",
            sequent=_sequent(
                binary, ["(forall x)(forall y) P(x, y)"], "(forall y)(forall x) P(x, y)"
            ),
            signature=binary, mode=PROVE, automation_cap=light, difficulty=9,
        ),
        ExerciseSpec(
            id="exists-pair", title="weakening under an existential",
            sequent=_sequent(mono, ["(exists x)(P(x) /\\ Q(x))"], "(exists x) P(x)"),
            signature=mono, mode=PROVE, automation_cap=light, difficulty=8,
        ),
        ExerciseSpec(
            id="union-of-intersection", title="members of a union of intersections",
            sequent=_sequent(
                SET_SIGNATURE,
                [
                    "In(x, Union(Inter(F, G)))",
                    "(forall s)(In(s, Inter(F, G)) -> In(s, F))",
                ],
                "In(x, Union(F))",
            ),
            signature=SET_SIGNATURE, mode=PROVE, automation_cap=light,
            definitions=set_defs, difficulty=14,
        ),
        ExerciseSpec(
            id="complement-conditional", title="what a complement hypothesis says",
            sequent=_sequent(
                SET_SIGNATURE, ["~In(c, Diff(a, b))"], "In(c, a) -> In(c, b)"
            ),
            signature=SET_SIGNATURE, mode=PROVE, automation_cap=light,
            definitions=set_defs, difficulty=11,
        ),
        ExerciseSpec(
            id="equality-transport", title="rewriting along an equality",
            sequent=_sequent(eqsig, ["a = b", "P(a)"], "P(b)"),
            signature=eqsig, mode=PROVE, automation_cap=light, difficulty=5,
        ),
        ExerciseSpec(
            id="converse-fallacy", title="the converse is not the conditional",
            sequent=_sequent(pq, ["p -> q"], "q -> p"),
            signature=pq, mode=REFUTE, automation_cap=light, difficulty=6,
            certificate=parse_model("p=0, q=1", pq),
        ),
        ExerciseSpec(
            id="affirming-consequent", title="affirming the consequent",
            sequent=_sequent(pq, ["p -> q", "q"], "p"),
            signature=pq, mode=REFUTE, automation_cap=light, difficulty=7,
            certificate=parse_model("p=0, q=1", pq),
        ),
        ExerciseSpec(
            id="universal-to-existential", title="different predicates, different claims",
            sequent=_sequent(mono, ["(forall x) P(x)"], "(exists x) Q(x)"),
            signature=mono, mode=REFUTE, automation_cap=light, difficulty=8,
            certificate=parse_model("domain = {0}; P = {(0)}; Q = {}", mono),
        ),
        ExerciseSpec(
            id="mystery-demorgan", title="a De Morgan mystery",
            sequent=_sequent(pq, [], "~(p /\\ q) <-> (~p \\/ ~q)"),
            signature=pq, mode=MYSTERY, automation_cap=blast, difficulty=12,
            hidden_status="provable",
        ),
        ExerciseSpec(
            id="mystery-weakening", title="from either to both?",
            sequent=_sequent(pq, ["p \\/ q"], "p /\\ q"),
            signature=pq, mode=MYSTERY, automation_cap=light, difficulty=7,
            hidden_status="refutable",
            certificate=parse_model("p=1, q=0", pq),
        ),
    )


# Reference solutions, keyed by exercise id. Instructor material.
CORPUS_SCRIPTS: dict[str, str] = {
    "imp-identity": """\
backward impl_intro
assumption
qed
""",
    "and-commutes": """\
auto 1
qed
""",
    "or-commutes": """\
forward h1 or_elim
backward or_intro2
assumption
backward or_intro1
assumption
qed
""",
    "double-negation": """\
backward raa
forward h1 not_elim
assumption
assumption
qed
""",
    "peirce": """\
auto 2
qed
""",
    "iff-primitive": """\
auto 2
qed
""",
    "quantifier-shift": """\
backward forall_intro
backward forall_intro
forward h1 forall_elim x1
forward h2 forall_elim y1
assumption
qed
""",
    "exists-pair": """\
forward h1 exists_elim w
backward exists_intro w
auto 1
qed
""",
    "union-of-intersection": """\
unfold union_member at h1 root
unfold union_member at goal root
forward h3 exists_elim z
backward exists_intro z
forward h2 forall_elim z
forward h5 impl_elim
auto 1
qed
""",
    "complement-conditional": """\
unfold diff_member at h1 0
backward impl_intro
backward raa
forward h2 not_elim
auto 1
qed
""",
    "equality-transport": """\
backward eq_rewrite h1 0 rl
assumption
qed
""",
    "converse-fallacy": """\
refute with p=0, q=1
""",
    "affirming-consequent": """\
refute with p=0, q=1
""",
    "universal-to-existential": """\
refute with domain = {0}; P = {(0)}; Q = {}
""",
    "mystery-demorgan": """\
auto 2
qed
""",
    "mystery-weakening": """\
refute with p=1, q=0
""",
}

# The failing attempt from the quantifier-shift discussion: eliminating
# with a specific object first and then trying to generalize over it.
QUANTIFIER_SHIFT_WRONG_SCRIPT = """\
forward h1 forall_elim c
forward h2 forall_elim c
backward forall_intro c
"""


def corpus_exercise(exercise_id: str) -> ExerciseSpec:
    for e in corpus_exercises():
        if e.id == exercise_id:
            return e
    raise KeyError(exercise_id)
