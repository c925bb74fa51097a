"""Brute-force and SAT-based classical semantics.

truth_table_valid is the ground truth for everything propositional; the
DPLL solver backs countermodel search for generated exercises, and the
finite-model enumerator handles the small first-order refutations. All
procedures are deterministic: symbols are processed in sorted order and
DPLL splits on the lowest such symbol, trying false first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import QuantifiersPresent, SignatureTooLarge, TooManySymbols
from .kernel import Sequent
from .models import FiniteStructure, Valuation, check_refutation
from .syntax import (
    And,
    Bottom,
    Equality,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Parameter,
    PredApp,
    Signature,
    free_symbols,
    is_propositional,
    prop_symbols,
)

MAX_TT_SYMBOLS = 20
NAIVE_CNF_LITERAL_BOUND = 64
FO_ENUMERATION_BOUND = 100_000

Literal = tuple[str, bool]
Clause = tuple[Literal, ...]


@dataclass(frozen=True)
class CNF:
    clauses: tuple[Clause, ...]

    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted({s for clause in self.clauses for s, _ in clause}))


# ---------------------------------------------------------------- truth tables


def _require_propositional(fs: list[Formula]):
    for f in fs:
        if not is_propositional(f):
            raise QuantifiersPresent("operation is defined for propositional formulas only")


def _eval_prop(f: Formula, row: dict[str, bool]) -> bool:
    match f:
        case PredApp(symbol, ()):
            return row[symbol]
        case Bottom():
            return False
        case Not(body):
            return not _eval_prop(body, row)
        case And(l, r):
            return _eval_prop(l, row) and _eval_prop(r, row)
        case Or(l, r):
            return _eval_prop(l, row) or _eval_prop(r, row)
        case Implies(l, r):
            return (not _eval_prop(l, row)) or _eval_prop(r, row)
        case Iff(l, r):
            return _eval_prop(l, row) == _eval_prop(r, row)
    raise QuantifiersPresent("not a propositional formula")


def sequent_symbols(s: Sequent) -> tuple[str, ...]:
    syms: frozenset[str] = prop_symbols(s.conclusion)
    for _, f in s.hypotheses:
        syms |= prop_symbols(f)
    return tuple(sorted(syms))


def truth_table_valid(s: Sequent) -> bool:
    """Exhaustive check that every row satisfying the hypotheses satisfies
    the conclusion."""
    formulas = [f for _, f in s.hypotheses] + [s.conclusion]
    _require_propositional(formulas)
    symbols = sequent_symbols(s)
    if len(symbols) > MAX_TT_SYMBOLS:
        raise TooManySymbols(f"{len(symbols)} symbols exceeds the {MAX_TT_SYMBOLS}-symbol bound")
    for values in itertools.product((False, True), repeat=len(symbols)):
        row = dict(zip(symbols, values))
        if all(_eval_prop(f, row) for _, f in s.hypotheses) and not _eval_prop(s.conclusion, row):
            return False
    return True


# ---------------------------------------------------------------- CNF


def _nnf(f: Formula, polarity: bool) -> Formula:
    match f:
        case PredApp():
            return f if polarity else Not(f)
        case Bottom():
            return f if polarity else Not(f)
        case Not(body):
            return _nnf(body, not polarity)
        case And(l, r):
            cls = And if polarity else Or
            return cls(_nnf(l, polarity), _nnf(r, polarity))
        case Or(l, r):
            cls = Or if polarity else And
            return cls(_nnf(l, polarity), _nnf(r, polarity))
        case Implies(l, r):
            if polarity:
                return Or(_nnf(l, False), _nnf(r, True))
            return And(_nnf(l, True), _nnf(r, False))
        case Iff(l, r):
            if polarity:
                return And(
                    Or(_nnf(l, False), _nnf(r, True)),
                    Or(_nnf(r, False), _nnf(l, True)),
                )
            return Or(
                And(_nnf(l, True), _nnf(r, False)),
                And(_nnf(r, True), _nnf(l, False)),
            )
    raise QuantifiersPresent("not a propositional formula")


class _TooWide(Exception):
    pass


def _distribute(f: Formula, budget: int) -> list[list[Literal]]:
    """Clause list of an NNF formula; raises _TooWide past the literal budget."""

    def lits(clauses: list[list[Literal]]) -> int:
        return sum(len(c) for c in clauses)

    match f:
        case PredApp(symbol, ()):
            return [[(symbol, True)]]
        case Not(PredApp(symbol, ())):
            return [[(symbol, False)]]
        case Bottom():
            return [[]]
        case Not(Bottom()):
            return []
        case And(l, r):
            out = _distribute(l, budget) + _distribute(r, budget)
            if lits(out) > budget:
                raise _TooWide()
            return out
        case Or(l, r):
            left, right = _distribute(l, budget), _distribute(r, budget)
            out = [lc + rc for lc in left for rc in right]
            if lits(out) > budget:
                raise _TooWide()
            return out
    raise QuantifiersPresent("not in negation normal form")


def _tseitin(f: Formula, taken: set[str]) -> tuple[list[Clause], set[str]]:
    """Definitional transformation with biconditional clauses per subformula,
    so satisfying assignments project onto the original symbols."""
    aux: set[str] = set()
    clauses: list[Clause] = []
    counter = itertools.count(1)

    def fresh() -> str:
        while True:
            name = f"_t{next(counter)}"
            if name not in taken and name not in aux:
                aux.add(name)
                return name

    def lit(name: str, pol: bool) -> Literal:
        return (name, pol)

    def encode(g: Formula) -> Literal:
        match g:
            case PredApp(symbol, ()):
                return lit(symbol, True)
            case Bottom():
                name = fresh()
                clauses.append((lit(name, False),))
                return lit(name, True)
            case Not(body):
                s, p = encode(body)
                return lit(s, not p)
            case And(l, r):
                a, b = encode(l), encode(r)
                name = fresh()
                v = lit(name, True)
                clauses.append((_neg(v), a))
                clauses.append((_neg(v), b))
                clauses.append((v, _neg(a), _neg(b)))
                return v
            case Or(l, r):
                a, b = encode(l), encode(r)
                name = fresh()
                v = lit(name, True)
                clauses.append((_neg(v), a, b))
                clauses.append((v, _neg(a)))
                clauses.append((v, _neg(b)))
                return v
            case Implies(l, r):
                return encode(Or(Not(l), r))
            case Iff(l, r):
                a, b = encode(l), encode(r)
                name = fresh()
                v = lit(name, True)
                clauses.append((_neg(v), _neg(a), b))
                clauses.append((_neg(v), _neg(b), a))
                clauses.append((v, a, b))
                clauses.append((v, _neg(a), _neg(b)))
                return v
        raise QuantifiersPresent("not a propositional formula")

    root = encode(f)
    clauses.append((root,))
    return clauses, aux


def _neg(l: Literal) -> Literal:
    return (l[0], not l[1])


def to_cnf(f: Formula) -> tuple[CNF, frozenset[str]]:
    """Equisatisfiable CNF. Naive distribution while it stays under the
    documented literal bound, definitional (Tseitin) form past it."""
    _require_propositional([f])
    try:
        clauses = _distribute(_nnf(f, True), NAIVE_CNF_LITERAL_BOUND)
        return CNF(tuple(tuple(c) for c in clauses)), frozenset()
    except _TooWide:
        pass
    clauses, aux = _tseitin(f, set(prop_symbols(f)))
    return CNF(tuple(clauses)), frozenset(aux)


def cnf_to_dimacs(cnf: CNF) -> str:
    """DIMACS text; symbol-number mapping recorded in leading comments."""
    symbols = cnf.symbols()
    index = {s: i + 1 for i, s in enumerate(symbols)}
    lines = [f"c {i + 1} {s}" for i, s in enumerate(symbols)]
    lines.append(f"p cnf {len(symbols)} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        nums = [index[s] if pol else -index[s] for s, pol in clause]
        lines.append(" ".join(str(n) for n in nums + [0]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- DPLL


def dpll(cnf: CNF) -> Optional[dict[str, bool]]:
    """Sat assignment (total over the CNF's symbols) or None.

    Unit propagation, then pure-literal elimination, then a split on the
    lowest unassigned symbol in sorted order, false branch first.
    """
    symbols = cnf.symbols()
    result = _dpll(list(cnf.clauses), {})
    if result is None:
        return None
    for s in symbols:
        result.setdefault(s, False)
    return result


def _simplify(clauses: list[Clause], assignment: dict[str, bool]) -> Optional[list[Clause]]:
    out: list[Clause] = []
    for clause in clauses:
        keep: list[Literal] = []
        satisfied = False
        for s, pol in clause:
            if s in assignment:
                if assignment[s] == pol:
                    satisfied = True
                    break
            else:
                keep.append((s, pol))
        if satisfied:
            continue
        if not keep:
            return None  # empty clause: conflict
        out.append(tuple(keep))
    return out


def _dpll(clauses: list[Clause], assignment: dict[str, bool]) -> Optional[dict[str, bool]]:
    clauses = _simplify(clauses, assignment)
    if clauses is None:
        return None
    assignment = dict(assignment)

    changed = True
    while changed:
        changed = False
        # unit propagation
        units = [c[0] for c in clauses if len(c) == 1]
        if units:
            for s, pol in units:
                if s in assignment and assignment[s] != pol:
                    return None
                assignment[s] = pol
            clauses = _simplify(clauses, assignment)
            if clauses is None:
                return None
            changed = True
            continue
        # pure-literal elimination
        polarity: dict[str, set[bool]] = {}
        for clause in clauses:
            for s, pol in clause:
                polarity.setdefault(s, set()).add(pol)
        pures = sorted((s, pols.pop()) for s, pols in polarity.items() if len(pols) == 1)
        if pures:
            for s, pol in pures:
                assignment[s] = pol
            clauses = _simplify(clauses, assignment)
            if clauses is None:
                return None
            changed = True

    if not clauses:
        return assignment
    split = min(s for clause in clauses for s, _ in clause)
    for value in (False, True):
        trial = dict(assignment)
        trial[split] = value
        result = _dpll(clauses, trial)
        if result is not None:
            return result
    return None


# ---------------------------------------------------------------- countermodels


def find_countermodel(s: Sequent) -> Optional[Valuation]:
    """A valuation refuting s, or None exactly when s is valid."""
    formulas = [f for _, f in s.hypotheses] + [s.conclusion]
    _require_propositional(formulas)
    query: Formula = Not(s.conclusion)
    for _, f in s.hypotheses:
        query = And(f, query)
    cnf, aux = to_cnf(query)
    assignment = dpll(cnf)
    if assignment is None:
        return None
    projected = {sym: assignment.get(sym, False) for sym in sequent_symbols(s)}
    valuation = Valuation(projected)
    verdict = check_refutation(s, valuation)
    if not verdict.refutes:  # pragma: no cover - self-certification guard
        raise AssertionError("DPLL produced a model that does not refute the sequent")
    return valuation


# ---------------------------------------------------------------- finite models


def _sequent_vocabulary(s: Sequent, sig: Signature):
    """Symbols actually occurring in the sequent, plus free parameters
    (interpreted like constants during model search)."""
    preds: set[str] = set()
    funcs: set[str] = set()
    consts: set[str] = set()
    params: set[str] = set()

    def walk_term(t):
        from .syntax import BoundVar, Constant, FunctionApp, Unknown

        match t:
            case Constant(symbol):
                consts.add(symbol)
            case FunctionApp(symbol, args):
                funcs.add(symbol)
                for a in args:
                    walk_term(a)
            case Parameter():
                params.add(t.printed)
            case _:
                pass

    def walk(f: Formula):
        from .syntax import formula_children

        match f:
            case PredApp(symbol, args):
                preds.add(symbol)
                for a in args:
                    walk_term(a)
            case Equality(lhs, rhs):
                walk_term(lhs)
                walk_term(rhs)
            case _:
                for kid in formula_children(f):
                    walk(kid)

    for _, f in s.hypotheses:
        walk(f)
    walk(s.conclusion)
    return (
        sorted(preds),
        sorted(funcs),
        sorted(consts | params),
        {p: sig.predicates.get(p) for p in preds},
        {f: sig.functions.get(f) for f in funcs},
    )


def _arity_of(f: Formula, symbol: str, kind: str) -> Optional[int]:
    found: list[int] = []

    def walk_term(t):
        from .syntax import FunctionApp

        if isinstance(t, FunctionApp):
            if kind == "function" and t.symbol == symbol:
                found.append(len(t.args))
            for a in t.args:
                walk_term(a)

    def walk(g: Formula):
        from .syntax import formula_children

        match g:
            case PredApp(sym, args):
                if kind == "predicate" and sym == symbol:
                    found.append(len(args))
                for a in args:
                    walk_term(a)
            case Equality(lhs, rhs):
                walk_term(lhs)
                walk_term(rhs)
            case _:
                for kid in formula_children(g):
                    walk(kid)

    walk(f)
    return found[0] if found else None


def fo_countermodel_search(s: Sequent, max_domain: int) -> Optional[FiniteStructure]:
    """First refuting structure over domains of size 1..max_domain, or None.

    Enumeration is canonical in the interpreted element slots: the
    constants (in sorted order) may only use an element one past the
    largest element already used, which prunes structures isomorphic
    under a renaming of domain elements.
    """
    max_domain = min(max_domain, 8)
    preds, funcs, consts, pred_arity, func_arity = _sequent_vocabulary(
        s, Signature()
    )
    # fill arities from occurrences when the signature does not declare them
    for p in preds:
        if pred_arity[p] is None:
            for _, f in list(s.hypotheses) + [("", s.conclusion)]:
                a = _arity_of(f, p, "predicate")
                if a is not None:
                    pred_arity[p] = a
                    break
    for fn in funcs:
        if func_arity[fn] is None:
            for _, f in list(s.hypotheses) + [("", s.conclusion)]:
                a = _arity_of(f, fn, "function")
                if a is not None:
                    func_arity[fn] = a
                    break

    for size in range(1, max_domain + 1):
        domain = tuple(str(i) for i in range(size))
        total = 1.0
        for p in preds:
            total *= 2 ** (size ** pred_arity[p])
        for fn in funcs:
            total *= size ** (size ** func_arity[fn])
        # canonical constants: roughly min(size, k)! fewer, still bounded by
        total *= size ** len(consts)
        if total > FO_ENUMERATION_BOUND:
            raise SignatureTooLarge(
                f"domain size {size}: {int(total)} candidate structures exceeds "
                f"the {FO_ENUMERATION_BOUND} bound"
            )
        for structure in _structures(domain, preds, funcs, consts, pred_arity, func_arity):
            if check_refutation(s, structure).refutes:
                return structure
    return None


def _structures(domain, preds, funcs, consts, pred_arity, func_arity) -> Iterator[FiniteStructure]:
    size = len(domain)

    def const_assignments() -> Iterator[dict[str, str]]:
        # canonical growth: each constant may use at most one fresh element
        def go(i: int, used: int, acc: dict[str, str]) -> Iterator[dict[str, str]]:
            if i == len(consts):
                yield dict(acc)
                return
            limit = min(used + 1, size)
            for e in range(limit):
                acc[consts[i]] = domain[e]
                yield from go(i + 1, max(used, e + 1), acc)
            del acc[consts[i]]

        yield from go(0, 0, {})

    def pred_tables() -> Iterator[dict[str, frozenset[tuple[str, ...]]]]:
        spaces = []
        for p in preds:
            points = list(itertools.product(domain, repeat=pred_arity[p]))
            spaces.append([frozenset(c) for r in range(len(points) + 1)
                           for c in itertools.combinations(points, r)])
        for combo in itertools.product(*spaces):
            yield dict(zip(preds, combo))

    def func_tables() -> Iterator[dict[str, dict[tuple[str, ...], str]]]:
        spaces = []
        for fn in funcs:
            points = list(itertools.product(domain, repeat=func_arity[fn]))
            tables = [
                dict(zip(points, values))
                for values in itertools.product(domain, repeat=len(points))
            ]
            spaces.append(tables)
        for combo in itertools.product(*spaces):
            yield dict(zip(funcs, combo))

    for constants in const_assignments():
        for functions in func_tables():
            for predicates in pred_tables():
                yield FiniteStructure(domain, predicates, functions, constants)
