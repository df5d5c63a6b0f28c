"""Decision procedures: satisfiability, validity, and entailment.

Temporal layer: complete finite-trace satisfiability by formula
progression. A search state is the set of alternative obligation sets
(a disjunction of conjunctions of subformulas) still owed to the rest of
the trace; consuming a letter progresses every obligation, with strong
next failing and weak next succeeding when the trace is about to end.
Breadth-first search over states, trying letters smallest-set-first then
alphabetically, returns the length-minimal, lexicographically least
witness trace.

Relational layer: bounded model search over domains of growing size under
a deterministic enumeration order. Searching up to
qr * 2^|predicates| * prod(|range|) elements is complete for this
monadic language (see docs/completeness.md), so an un-capped run may
report plain unsat; anything cut short is reported as *_up_to_bound.

Both procedures re-check every witness through the evaluator before
returning it and report budget exhaustion as an explicit ResourceLimit,
never as a verdict.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import prod
from typing import Callable, Optional, Union

from . import _kernel
from .errors import FormulaError, LayerMismatch, ResourceLimit
from .evaluate import eval_fo, eval_ltlf
from .formula import (And, Atom, Eventually, FalseF, Formula, Globally,
                      Implies, Next, Not, Or, Release, TrueF, Until, WeakNext,
                      atom_names, free_variables, layer_of, quantifier_rank)
from .signature import RELATIONAL, TEMPORAL, Signature
from .structures import StructureModel, Trace
from .transform import expand_macros, nnf

SAT = "sat"
UNSAT = "unsat"
UNSAT_UP_TO_BOUND = "unsat_up_to_bound"
VALID = "valid"
INVALID = "invalid_with_counterexample"
VALID_UP_TO_BOUND = "valid_up_to_bound"

NEGATIVE_STATUSES = frozenset({UNSAT, UNSAT_UP_TO_BOUND, INVALID})


@dataclass(frozen=True)
class EngineConfig:
    """Budgets and caps; exhaustion raises ResourceLimit, never lies."""

    domain_cap: int = 12                  # cap on the completeness bound
    candidate_budget: int = 10_000_000    # models examined per query
    state_budget: int = 1 << 20           # distinct progression states
    scan_chunk: int = 65_536              # candidates per kernel call
    cancel: Optional[Callable[[], bool]] = None

    def check_cancel(self) -> None:
        if self.cancel is not None and self.cancel():
            raise ResourceLimit("query cancelled")


DEFAULT_CONFIG = EngineConfig()


@dataclass(frozen=True)
class DecisionResult:
    status: str
    witness: Union[StructureModel, Trace, None] = None
    bound_used: Optional[int] = None

    def to_json(self) -> dict:
        from .structures import structure_to_json, trace_to_json
        witness = None
        if isinstance(self.witness, StructureModel):
            witness = {"kind": "structure", **structure_to_json(self.witness)}
        elif isinstance(self.witness, Trace):
            witness = {"kind": "trace", **trace_to_json(self.witness)}
        return {"status": self.status, "witness": witness,
                "boundUsed": self.bound_used}


# --- temporal layer ---

_TRUE = TrueF()
_FALSE = FalseF()


def _and(a: Formula, b: Formula) -> Formula:
    if isinstance(a, FalseF) or isinstance(b, FalseF):
        return _FALSE
    if isinstance(a, TrueF):
        return b
    if isinstance(b, TrueF):
        return a
    return And(a, b)


def _or(a: Formula, b: Formula) -> Formula:
    if isinstance(a, TrueF) or isinstance(b, TrueF):
        return _TRUE
    if isinstance(a, FalseF):
        return b
    if isinstance(b, FalseF):
        return a
    return Or(a, b)


def _progress(f: Formula, letter: frozenset[str], last: bool,
              cache: dict) -> Formula:
    """Obligation left for the rest of the trace after reading one letter;
    with last=True the result folds to a truth constant. Input is in NNF."""
    key = (f, letter, last)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if isinstance(f, (TrueF, FalseF)):
        out = f
    elif isinstance(f, Atom):
        out = _TRUE if f.name in letter else _FALSE
    elif isinstance(f, Not):  # NNF: negation sits on an atom
        out = _FALSE if f.child.name in letter else _TRUE
    elif isinstance(f, And):
        out = _and(_progress(f.left, letter, last, cache),
                   _progress(f.right, letter, last, cache))
    elif isinstance(f, Or):
        out = _or(_progress(f.left, letter, last, cache),
                  _progress(f.right, letter, last, cache))
    elif isinstance(f, Next):
        out = _FALSE if last else f.child
    elif isinstance(f, WeakNext):
        out = _TRUE if last else f.child
    elif isinstance(f, Until):
        out = _or(_progress(f.right, letter, last, cache),
                  _and(_progress(f.left, letter, last, cache),
                       _FALSE if last else f))
    elif isinstance(f, Release):
        out = _and(_progress(f.right, letter, last, cache),
                   _or(_progress(f.left, letter, last, cache),
                       _TRUE if last else f))
    elif isinstance(f, Eventually):
        out = _or(_progress(f.child, letter, last, cache),
                  _FALSE if last else f)
    elif isinstance(f, Globally):
        out = _and(_progress(f.child, letter, last, cache),
                   _TRUE if last else f)
    else:
        raise FormulaError(f"not a temporal NNF node: {type(f).__name__}")
    cache[key] = out
    return out


State = frozenset  # of frozensets of Formula (disjunction of obligation sets)


def _to_dnf(f: Formula) -> set[frozenset[Formula]]:
    if isinstance(f, FalseF):
        return set()
    if isinstance(f, TrueF):
        return {frozenset()}
    if isinstance(f, Or):
        return _to_dnf(f.left) | _to_dnf(f.right)
    if isinstance(f, And):
        left = _to_dnf(f.left)
        right = _to_dnf(f.right)
        return {a | b for a in left for b in right}
    return {frozenset((f,))}


def _prune(disjuncts: set[frozenset[Formula]]) -> State:
    """Drop disjuncts subsumed by a strictly smaller one."""
    keep = [s for s in disjuncts
            if not any(t < s for t in disjuncts)]
    return frozenset(keep)


def _successor(state: State, letter: frozenset[str], cache: dict) -> State:
    disjuncts: set[frozenset[Formula]] = set()
    for obligations in state:
        residual: Formula = _TRUE
        for m in obligations:
            residual = _and(residual, _progress(m, letter, False, cache))
            if isinstance(residual, FalseF):
                break
        disjuncts |= _to_dnf(residual)
    return _prune(disjuncts)


def _accepts(state: State, letter: frozenset[str], cache: dict) -> bool:
    return any(
        all(isinstance(_progress(m, letter, True, cache), TrueF)
            for m in obligations)
        for obligations in state)


def _letters(atoms: list[str]) -> list[frozenset[str]]:
    out = []
    for size in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, size):
            out.append(frozenset(combo))
    return out


def sat_ltlf(f: Formula, config: EngineConfig = DEFAULT_CONFIG) -> DecisionResult:
    """Complete finite-trace satisfiability with a shortest witness trace;
    ties broken by trying smaller states first, then alphabetically."""
    if layer_of(f) == RELATIONAL:
        raise LayerMismatch("sat_ltlf needs a temporal sentence")
    g = nnf(f)
    atoms = sorted(atom_names(g))
    letters = _letters(atoms)
    cache: dict = {}
    initial: State = _prune(_to_dnf(g))
    if not initial:
        return DecisionResult(UNSAT)
    visited: set[State] = {initial}
    parent: dict[State, tuple[State, frozenset[str]] | None] = {initial: None}
    queue: deque[State] = deque([initial])
    while queue:
        config.check_cancel()
        state = queue.popleft()
        for letter in letters:
            if _accepts(state, letter, cache):
                witness = _reconstruct(parent, state) + [letter]
                trace = Trace(tuple(witness))
                if not eval_ltlf(trace, 0, f):  # witness self-validation
                    raise RuntimeError("satisfiability witness failed re-check")
                return DecisionResult(SAT, witness=trace)
            nxt = _successor(state, letter, cache)
            if not nxt or nxt in visited:
                continue
            visited.add(nxt)
            if len(visited) > config.state_budget:
                raise ResourceLimit("progression state budget exhausted",
                                    states=len(visited))
            parent[nxt] = (state, letter)
            queue.append(nxt)
    return DecisionResult(UNSAT)


def _reconstruct(parent: dict, state: State) -> list[frozenset[str]]:
    letters: list[frozenset[str]] = []
    entry = parent[state]
    while entry is not None:
        prev, letter = entry
        letters.append(letter)
        entry = parent[prev]
    letters.reverse()
    return letters


def valid_ltlf(f: Formula, config: EngineConfig = DEFAULT_CONFIG) -> DecisionResult:
    """Validity over all finite nonempty traces, via unsatisfiability of
    the negation; counterexamples carry the negation's witness."""
    result = sat_ltlf(Not(f), config)
    if result.status == UNSAT:
        return DecisionResult(VALID)
    return DecisionResult(INVALID, witness=result.witness)


# --- relational layer ---

def completeness_bound(f: Formula, sig: Signature) -> int:
    """Domain size beyond which no new satisfaction behavior can appear:
    quantifier rank times the number of element types (predicate profile
    times function-value profile). See docs/completeness.md."""
    types = (2 ** len(sig.predicates)) * prod(
        hi - lo + 1 for _, lo, hi in sig.functions)
    return max(1, quantifier_rank(f)) * types


def sat_fo_bounded(f: Formula, sig: Signature,
                   bound: Optional[int] = None,
                   config: EngineConfig = DEFAULT_CONFIG) -> DecisionResult:
    """Search domains of size 1, 2, ... for a model of f.

    With no explicit bound, runs to the completeness bound (capped at
    config.domain_cap); the verdict is plain unsat only when the search
    provably covered every size that matters.
    """
    if sig.kind != RELATIONAL:
        raise LayerMismatch("sat_fo_bounded needs a relational signature")
    if layer_of(f) == TEMPORAL:
        raise LayerMismatch("sat_fo_bounded needs a relational sentence")
    if free_variables(f):
        raise FormulaError("satisfiability asks about sentences")
    if bound is not None and bound < 1:
        raise ValueError("bound must be positive")

    expanded = expand_macros(f, sig)
    program = _kernel.compile_relational_orders(
        expanded, sig.predicates, sig.function_names)
    b_star = completeness_bound(expanded, sig)
    if bound is not None:
        search_to = min(bound, b_star)
    else:
        search_to = min(b_star, config.domain_cap)
    complete = search_to >= b_star

    n_preds = len(sig.predicates)
    func_los = [lo for _, lo, _ in sig.functions]
    scanned_total = 0
    for size in range(1, search_to + 1):
        radii = _kernel.encode.candidate_radii(sig, size)
        ext, digits = _kernel.encode.first_candidate(size, len(func_los))
        while True:
            config.check_cancel()
            room = config.candidate_budget - scanned_total
            if room <= 0:
                raise ResourceLimit("candidate budget exhausted",
                                    candidates=scanned_total)
            status, ext, digits, scanned = _kernel.fo_scan(
                program, size, n_preds, func_los, radii, ext, digits,
                min(config.scan_chunk, room))
            scanned_total += scanned
            if status == _kernel.HIT:
                model = _kernel.encode.candidate_model(sig, size, ext, digits)
                if not eval_fo(model, expanded, {}):  # witness self-validation
                    raise RuntimeError("model witness failed re-check")
                return DecisionResult(SAT, witness=model, bound_used=size)
            if status == _kernel.EXHAUSTED:
                break
    return DecisionResult(UNSAT if complete else UNSAT_UP_TO_BOUND,
                          bound_used=search_to)


# --- layer dispatch ---

def _pick_layer(formulas: list[Formula], sig: Optional[Signature]) -> str:
    layers = {layer_of(f) for f in formulas} - {None}
    if len(layers) > 1:
        raise LayerMismatch("formulas mix the relational and temporal layers")
    if layers:
        layer = layers.pop()
        if sig is not None and sig.kind != layer:
            raise LayerMismatch(f"{layer} formula with a {sig.kind} signature")
        return layer
    if sig is not None:
        return sig.kind
    return TEMPORAL  # layer-neutral formulas decide over traces


def implies(phi: Formula, psi: Formula, sig: Optional[Signature] = None,
            bound: Optional[int] = None,
            config: EngineConfig = DEFAULT_CONFIG) -> DecisionResult:
    """Does phi necessarily entail psi: validity of phi -> psi.

    Relational counterexamples are full case files; temporal ones are
    traces.
    """
    layer = _pick_layer([phi, psi], sig)
    if layer == TEMPORAL:
        return valid_ltlf(Implies(phi, psi), config)
    if sig is None:
        raise ValueError("relational implication needs a signature")
    result = sat_fo_bounded(And(phi, Not(psi)), sig, bound, config)
    if result.status == SAT:
        return DecisionResult(INVALID, witness=result.witness,
                              bound_used=result.bound_used)
    if result.status == UNSAT:
        return DecisionResult(VALID, bound_used=result.bound_used)
    return DecisionResult(VALID_UP_TO_BOUND, bound_used=result.bound_used)


def consistent(phi: Formula, sig: Optional[Signature] = None,
               bound: Optional[int] = None,
               config: EngineConfig = DEFAULT_CONFIG) -> DecisionResult:
    """Is there any situation at all that abides by phi."""
    layer = _pick_layer([phi], sig)
    if layer == TEMPORAL:
        return sat_ltlf(phi, config)
    if sig is None:
        raise ValueError("relational consistency needs a signature")
    return sat_fo_bounded(phi, sig, bound, config)
