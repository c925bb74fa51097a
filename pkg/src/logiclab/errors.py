"""Exception types shared across the workbench.

Every error the library raises deliberately derives from LogicError, so
callers (the session service in particular) can record failures uniformly.
The class name doubles as the error code in serialized events.
"""
from __future__ import annotations


class LogicError(Exception):
    """Base class for all deliberate workbench errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# ---------------------------------------------------------------- syntax

class ParseError(LogicError):
    """Malformed surface text. Position is a 1-based character offset."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        detail = f", found {found!r}" if found else ""
        super().__init__(f"at position {position}: expected {expected}{detail}")


class UnknownSymbol(LogicError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"symbol {name!r} is not declared in the signature")


class ArityMismatch(LogicError):
    def __init__(self, symbol: str, expected: int, got: int):
        self.symbol = symbol
        self.expected = expected
        self.got = got
        super().__init__(f"{symbol!r} expects {expected} argument(s), got {got}")


# ---------------------------------------------------------------- kernel

class MalformedSequent(LogicError):
    pass


class NoSuchGoal(LogicError):
    def __init__(self, goal_id):
        self.goal_id = goal_id
        super().__init__(f"no open goal with id {goal_id}")


class NoSuchHypothesis(LogicError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"no hypothesis labeled {label!r}")


class RuleShapeMismatch(LogicError):
    pass


class ArgumentMissing(LogicError):
    pass


class EigenvariableViolation(LogicError):
    pass


class ProofIncomplete(LogicError):
    def __init__(self, open_goal_ids=(), detail: str = ""):
        self.open_goal_ids = tuple(open_goal_ids)
        msg = detail or f"open goals remain: {list(self.open_goal_ids)}"
        super().__init__(msg)


class UnknownsPresent(LogicError):
    pass


# ---------------------------------------------------------------- models

class IncompleteModel(LogicError):
    def __init__(self, missing: str):
        self.missing = missing
        super().__init__(f"model does not interpret {missing!r}")


# ---------------------------------------------------------------- tactics

class NoMatchAtPosition(LogicError):
    pass


class UnknownDefinition(LogicError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no definition named {name!r}")


class AutomationCapExceeded(LogicError):
    pass


class NotValid(LogicError):
    pass


class QuantifiersPresent(LogicError):
    pass


class RefutationOfProvable(LogicError):
    pass


class NothingToUndo(LogicError):
    pass


# ---------------------------------------------------------------- oracle

class TooManySymbols(LogicError):
    pass


class SignatureTooLarge(LogicError):
    pass


# ---------------------------------------------------------------- generator

class GenerationExhausted(LogicError):
    pass


class Undecided(LogicError):
    pass


# ---------------------------------------------------------------- sessions

class NoSuchExercise(LogicError):
    def __init__(self, exercise_id: str):
        self.exercise_id = exercise_id
        super().__init__(f"no exercise with id {exercise_id!r}")


class NoSuchSession(LogicError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"no session with id {session_id!r}")


class SessionClosed(LogicError):
    pass


class CorruptLog(LogicError):
    def __init__(self, ordinal: int, detail: str = ""):
        self.ordinal = ordinal
        super().__init__(f"event log inconsistent at ordinal {ordinal}: {detail}")
