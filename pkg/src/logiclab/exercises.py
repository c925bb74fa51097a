"""Exercise specifications and pack serialization.

Packs come in two variants: the instructor form carries everything, the
student form omits whatever would spoil the exercise (a Mystery's hidden
status, any certificate, and generator provenance). Serialization is
canonical, so identical inputs produce byte-identical packs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .definitions import Definition, definition_from_json
from .kernel import Sequent
from .models import Model, model_to_text, parse_model
from .parser import parse_formula
from .syntax import Signature, print_formula
from .tactics import AutomationPolicy

PACK_FORMAT = "logiclab-pack/1"

PROVE, REFUTE, MYSTERY = "prove", "refute", "mystery"
MODES = (PROVE, REFUTE, MYSTERY)


@dataclass(frozen=True)
class ExerciseSpec:
    id: str
    title: str
    sequent: Sequent
    signature: Signature
    mode: str
    automation_cap: AutomationPolicy = AutomationPolicy()
    definitions: tuple[Definition, ...] = ()
    difficulty: int = 0
    hidden_status: Optional[str] = None  # mystery only: "provable" | "refutable"
    certificate: Optional[Model] = None
    provenance: Union[str, dict] = "handcrafted"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode == MYSTERY and self.hidden_status not in ("provable", "refutable"):
            raise ValueError("mystery exercises need a hidden status")

    def to_student_json(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "sequent": self.sequent.to_json(),
            "signature": self.signature.to_json(),
            "mode": self.mode,
            "automation_cap": self.automation_cap.to_json(),
            "definitions": [d.to_json() for d in self.definitions],
            "difficulty": self.difficulty,
        }

    def to_instructor_json(self) -> dict:
        out = self.to_student_json()
        out["hidden_status"] = self.hidden_status
        out["certificate"] = model_to_text(self.certificate) if self.certificate else None
        out["provenance"] = self.provenance
        return out


def exercise_from_json(data: dict) -> ExerciseSpec:
    signature = Signature.from_json(data["signature"])
    hyps = tuple(
        (h["label"], parse_formula(h["formula"], signature))
        for h in data["sequent"]["hypotheses"]
    )
    sequent = Sequent(hyps, parse_formula(data["sequent"]["conclusion"], signature))
    certificate = None
    if data.get("certificate"):
        certificate = parse_model(data["certificate"], signature)
    return ExerciseSpec(
        id=data["id"],
        title=data.get("title", data["id"]),
        sequent=sequent,
        signature=signature,
        mode=data["mode"],
        automation_cap=AutomationPolicy.from_json(data.get("automation_cap", {})),
        definitions=tuple(
            definition_from_json(d, signature) for d in data.get("definitions", ())
        ),
        difficulty=data.get("difficulty", 0),
        hidden_status=data.get("hidden_status"),
        certificate=certificate,
        provenance=data.get("provenance", "handcrafted"),
    )


# ---------------------------------------------------------------- packs


def pack_dumps(exercises: Sequence[ExerciseSpec], kind: str = "instructor") -> str:
    if kind not in ("instructor", "student"):
        raise ValueError("pack kind must be 'instructor' or 'student'")
    payload = {
        "format": PACK_FORMAT,
        "kind": kind,
        "exercises": [
            e.to_instructor_json() if kind == "instructor" else e.to_student_json()
            for e in exercises
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def pack_loads(text: str) -> list[ExerciseSpec]:
    payload = json.loads(text)
    if payload.get("format") != PACK_FORMAT:
        raise ValueError(f"not a {PACK_FORMAT} pack")
    return [exercise_from_json(e) for e in payload["exercises"]]
