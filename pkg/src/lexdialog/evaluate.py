"""Model checking proper: does a case satisfy a law, with a witness.

eval_fo is Tarskian truth over a finite structure; eval_ltlf is finite-trace
temporal truth, table-driven so the cost stays linear in trace length times
formula size. check() wraps both and extracts a re-checkable witness:
the first falsifying assignment for a failed universal prefix, the first
satisfying assignment for a satisfied existential prefix, or the earliest
violating position for a failed top-level G.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from . import _kernel
from .errors import FormulaError, LayerMismatch
from .formula import (Exists, Forall, Formula, Globally, atom_names,
                      contains_macro, free_variables, layer_of)
from .signature import RELATIONAL, TEMPORAL
from .structures import StructureModel, Trace
from .transform import expand_macros_over

Environment = dict[str, str]


@dataclass(frozen=True)
class Assignment:
    """Variable bindings witnessing a quantified verdict."""

    bindings: tuple[tuple[str, str], ...]

    def as_dict(self) -> Environment:
        return dict(self.bindings)

    def to_json(self) -> dict:
        return {"kind": "assignment", "bindings": dict(self.bindings)}


@dataclass(frozen=True)
class TracePosition:
    """Earliest trace position at which a temporal law breaks."""

    index: int

    def to_json(self) -> dict:
        return {"kind": "position", "index": self.index}


Witness = Union[Assignment, TracePosition]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[Witness] = None

    @property
    def outcome(self) -> str:
        return "holds" if self.holds else "fails"

    def to_json(self) -> dict:
        return {"outcome": self.outcome,
                "witness": self.witness.to_json() if self.witness else None}


@lru_cache(maxsize=4096)
def _relational_program(f: Formula, pred_order: tuple[str, ...],
                        func_order: tuple[str, ...]):
    return _kernel.compile_relational_orders(f, pred_order, func_order)


@lru_cache(maxsize=4096)
def _temporal_program(f: Formula, atom_order: tuple[str, ...]):
    return _kernel.compile_temporal(f, atom_order)


def eval_fo(m: StructureModel, f: Formula, env: Environment | None = None) -> bool:
    """Truth of a macro-free relational formula in m under env; quantifiers
    range over m's domain in its declared order."""
    if contains_macro(f):
        raise FormulaError("expand macros before evaluation")
    env = env or {}
    pred_order = tuple(m.predicates)
    func_order = tuple(m.functions)
    program = _relational_program(f, pred_order, func_order)
    index = {ind: i for i, ind in enumerate(m.domain)}
    slots = [0] * max(program.n_slots, 1)
    for name, slot in program.free_slots.items():
        if name not in env:
            raise FormulaError(f"no binding for free variable {name!r}")
        ind = env[name]
        if ind not in index:
            raise FormulaError(f"individual {ind!r} is not in the domain")
        slots[slot] = index[ind]
    masks, vals = _kernel.encode_structure(m, pred_order, func_order)
    return _kernel.fo_eval(program, len(m.domain), masks, vals, slots)


def eval_ltlf(t: Trace, i: int, f: Formula) -> bool:
    """Finite-trace truth of a temporal formula at position i of t."""
    if not 0 <= i < len(t):
        raise IndexError(f"position {i} outside trace of length {len(t)}")
    table, n_nodes = _evaluation_table(t, f)
    n = len(t)
    return table[(n_nodes - 1) * n + i] == 1


def _evaluation_table(t: Trace, f: Formula) -> tuple[bytes, int]:
    order = tuple(sorted(atom_names(f)))
    program = _temporal_program(f, order)
    masks = _kernel.encode_trace(t, order)
    return _kernel.ltlf_table(program, masks), program.n_nodes


def check(case: StructureModel | Trace, law: Formula) -> Verdict:
    """Decide case |= law and attach a witness where one is defined."""
    layer = layer_of(law)
    if isinstance(case, StructureModel):
        if layer == TEMPORAL:
            raise LayerMismatch("temporal law checked against a case structure")
        return _check_structure(case, law)
    if isinstance(case, Trace):
        if layer == RELATIONAL:
            raise LayerMismatch("relational law checked against a trace")
        return _check_trace(case, law)
    raise TypeError(f"not a case: {case!r}")


def _check_structure(m: StructureModel, law: Formula) -> Verdict:
    if free_variables(law):
        raise FormulaError("laws must be sentences")
    expanded = expand_macros_over(law, tuple(m.predicates), tuple(m.functions))
    holds = eval_fo(m, expanded, {})
    if not holds:
        prefix, matrix = _peel_prefix(expanded, Forall)
        if prefix:
            env = _first_assignment(m, prefix, matrix, want=False)
            return Verdict(False, env)
        return Verdict(False, None)
    prefix, matrix = _peel_prefix(expanded, Exists)
    if prefix:
        env = _first_assignment(m, prefix, matrix, want=True)
        return Verdict(True, env)
    return Verdict(True, None)


def _peel_prefix(f: Formula, node: type) -> tuple[list[str], Formula]:
    prefix: list[str] = []
    while isinstance(f, node):
        prefix.append(f.var)
        f = f.body
    return prefix, f


def _first_assignment(m: StructureModel, prefix: list[str], matrix: Formula,
                      *, want: bool) -> Optional[Assignment]:
    """First tuple, lexicographic in domain order, making matrix evaluate to
    ``want``. Later duplicates of a shadowed variable name win, matching
    quantifier scoping."""
    for combo in itertools.product(m.domain, repeat=len(prefix)):
        env = dict(zip(prefix, combo))
        if eval_fo(m, matrix, env) == want:
            return Assignment(tuple(env.items()))
    return None


def _check_trace(t: Trace, law: Formula) -> Verdict:
    holds = eval_ltlf(t, 0, law)
    if holds or not isinstance(law, Globally):
        return Verdict(holds, None)
    table, n_nodes = _evaluation_table(t, law.child)
    n = len(t)
    root = n_nodes - 1
    for i in range(n):
        if table[root * n + i] == 0:
            return Verdict(False, TracePosition(i))
    raise RuntimeError("G failed but its body holds everywhere")  # unreachable


def recheck(case: StructureModel | Trace, law: Formula, verdict: Verdict) -> bool:
    """Re-derive a verdict's witness claim independently of check()."""
    if isinstance(verdict.witness, Assignment):
        if isinstance(case, StructureModel):
            node = Forall if not verdict.holds else Exists
            expanded = expand_macros_over(law, tuple(case.predicates),
                                          tuple(case.functions))
            prefix, matrix = _peel_prefix(expanded, node)
            env = verdict.witness.as_dict()
            if set(prefix) - set(env):
                return False
            return eval_fo(case, matrix, env) == verdict.holds
        return False
    if isinstance(verdict.witness, TracePosition):
        if isinstance(case, Trace) and isinstance(law, Globally):
            return not eval_ltlf(case, verdict.witness.index, law.child)
        return False
    if isinstance(case, StructureModel):
        expanded = expand_macros_over(law, tuple(case.predicates),
                                      tuple(case.functions))
        return eval_fo(case, expanded, {}) == verdict.holds
    return eval_ltlf(case, 0, law) == verdict.holds
