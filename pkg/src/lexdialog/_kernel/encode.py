"""Flat instruction encoding for the evaluation kernels.

Formulas compile to a post-order array of fixed-width nodes (stride 8:
opcode plus seven operand slots) shared verbatim by the pure-Python and the
compiled backend, so both evaluate exactly the same program.

Candidate models for the bounded search are counters over the same layout:
predicate extensions are one binary counter whose bit positions follow
(individual, predicate) in declared order with the first pair most
significant, and function tables are a mixed-radix odometer over
(function, individual) pairs counting each value up from the range minimum.
The odometer is the fast-moving part; the extension counter is the slow one.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from ..errors import FormulaError
from ..formula import (And, Atom, Cmp, Eventually, Exists, FalseF, Forall,
                       Formula, FuncApp, Globally, Iff, Implies, IntLit, Next,
                       Not, Or, Pred, Release, TrueF, Until, Var, WeakNext)
from ..signature import Signature
from ..structures import StructureModel, Trace

STRIDE = 8

(OP_TRUE, OP_FALSE, OP_NOT, OP_AND, OP_OR, OP_IMPLIES, OP_IFF, OP_ATOM,
 OP_NEXT, OP_WNEXT, OP_UNTIL, OP_RELEASE, OP_EVENTUALLY, OP_GLOBALLY,
 OP_PRED, OP_CMP_IND, OP_CMP_INT, OP_FORALL, OP_EXISTS) = range(19)

CMP_CODE = {"=": 0, "!=": 1, "<": 2, "<=": 3, ">": 4, ">=": 5}

SRC_LITERAL = 0
SRC_FUNC = 1

_BOOL_BINARY = {And: OP_AND, Or: OP_OR, Implies: OP_IMPLIES, Iff: OP_IFF}
_TEMPORAL_UNARY = {Next: OP_NEXT, WeakNext: OP_WNEXT,
                   Eventually: OP_EVENTUALLY, Globally: OP_GLOBALLY}
_TEMPORAL_BINARY = {Until: OP_UNTIL, Release: OP_RELEASE}


@dataclass
class TemporalProgram:
    code: array  # flat int64 node array, post-order, root last
    n_nodes: int
    atom_order: tuple[str, ...]

    @property
    def root(self) -> int:
        return self.n_nodes - 1


@dataclass
class RelationalProgram:
    code: array
    n_nodes: int
    n_slots: int
    free_slots: dict[str, int]
    pred_order: tuple[str, ...]
    func_order: tuple[str, ...]

    @property
    def root(self) -> int:
        return self.n_nodes - 1


class _Emitter:
    """Accumulates deduplicated post-order nodes."""

    def __init__(self) -> None:
        self.flat: list[int] = []
        self.index: dict[tuple, int] = {}

    def emit(self, *fields: int) -> int:
        assert len(fields) <= STRIDE
        key = tuple(fields)
        found = self.index.get(key)
        if found is not None:
            return found
        idx = len(self.flat) // STRIDE
        self.flat.extend(fields)
        self.flat.extend([0] * (STRIDE - len(fields)))
        self.index[key] = idx
        return idx

    def program(self) -> array:
        return array("q", self.flat)


def compile_temporal(f: Formula, atom_order: tuple[str, ...]) -> TemporalProgram:
    atom_bit = {name: i for i, name in enumerate(atom_order)}
    out = _Emitter()

    def go(g: Formula) -> int:
        if isinstance(g, TrueF):
            return out.emit(OP_TRUE)
        if isinstance(g, FalseF):
            return out.emit(OP_FALSE)
        if isinstance(g, Atom):
            return out.emit(OP_ATOM, atom_bit[g.name])
        if isinstance(g, Not):
            return out.emit(OP_NOT, go(g.child))
        if isinstance(g, tuple(_BOOL_BINARY)):
            return out.emit(_BOOL_BINARY[type(g)], go(g.left), go(g.right))
        if isinstance(g, tuple(_TEMPORAL_UNARY)):
            return out.emit(_TEMPORAL_UNARY[type(g)], go(g.child))
        if isinstance(g, tuple(_TEMPORAL_BINARY)):
            return out.emit(_TEMPORAL_BINARY[type(g)], go(g.left), go(g.right))
        raise FormulaError(f"not a temporal formula node: {type(g).__name__}")

    root = go(f)
    n_nodes = len(out.flat) // STRIDE
    assert root == n_nodes - 1
    return TemporalProgram(out.program(), n_nodes, atom_order)


def compile_relational(f: Formula, sig: Signature) -> RelationalProgram:
    return compile_relational_orders(f, sig.predicates, sig.function_names)


def compile_relational_orders(f: Formula, pred_order: tuple[str, ...],
                              func_order: tuple[str, ...]) -> RelationalProgram:
    pred_bit = {name: i for i, name in enumerate(pred_order)}
    func_idx = {name: i for i, name in enumerate(func_order)}
    out = _Emitter()
    slots: list[int] = [0]  # next free slot
    env: dict[str, list[int]] = {}

    def bind(var: str) -> int:
        slot = slots[0]
        slots[0] += 1
        env.setdefault(var, []).append(slot)
        return slot

    def unbind(var: str) -> None:
        env[var].pop()

    def slot_of(var: str) -> int:
        stack = env.get(var)
        if not stack:
            raise FormulaError(f"unbound variable {var!r}")
        return stack[-1]

    def term_fields(t) -> tuple[int, int, int]:
        if isinstance(t, IntLit):
            return SRC_LITERAL, t.value, 0
        if isinstance(t, FuncApp):
            if t.func not in func_idx:
                raise FormulaError(f"unknown function {t.func!r}")
            return SRC_FUNC, func_idx[t.func], slot_of(t.var)
        raise FormulaError("individual term in an integer comparison")

    def go(g: Formula) -> int:
        if isinstance(g, TrueF):
            return out.emit(OP_TRUE)
        if isinstance(g, FalseF):
            return out.emit(OP_FALSE)
        if isinstance(g, Pred):
            if g.name not in pred_bit:
                raise FormulaError(f"unknown predicate {g.name!r}")
            return out.emit(OP_PRED, pred_bit[g.name], slot_of(g.var))
        if isinstance(g, Cmp):
            if isinstance(g.left, Var) or isinstance(g.right, Var):
                if not (isinstance(g.left, Var) and isinstance(g.right, Var)):
                    raise FormulaError("comparison mixes an individual with an integer")
                return out.emit(OP_CMP_IND, CMP_CODE[g.op],
                                slot_of(g.left.name), slot_of(g.right.name))
            lsrc, la, lb = term_fields(g.left)
            rsrc, ra, rb = term_fields(g.right)
            return out.emit(OP_CMP_INT, CMP_CODE[g.op], lsrc, la, lb, rsrc, ra, rb)
        if isinstance(g, Not):
            return out.emit(OP_NOT, go(g.child))
        if isinstance(g, tuple(_BOOL_BINARY)):
            return out.emit(_BOOL_BINARY[type(g)], go(g.left), go(g.right))
        if isinstance(g, (Forall, Exists)):
            slot = bind(g.var)
            body = go(g.body)
            unbind(g.var)
            op = OP_FORALL if isinstance(g, Forall) else OP_EXISTS
            return out.emit(op, slot, body)
        raise FormulaError(f"not a relational formula node: {type(g).__name__}")

    # free variables get the first slots, in sorted order, so a caller can
    # bind them through free_slots
    from ..formula import free_variables
    free_slots = {}
    for name in sorted(free_variables(f)):
        free_slots[name] = bind(name)

    root = go(f)
    n_nodes = len(out.flat) // STRIDE
    assert root == n_nodes - 1
    return RelationalProgram(out.program(), n_nodes, slots[0], free_slots,
                             tuple(pred_order), tuple(func_order))


def encode_trace(t: Trace, atom_order: tuple[str, ...]) -> list[int]:
    bit = {name: i for i, name in enumerate(atom_order)}
    masks = []
    for state in t.states:
        m = 0
        for atom in state:
            b = bit.get(atom)
            if b is not None:
                m |= 1 << b
        masks.append(m)
    return masks


def encode_structure(m: StructureModel, pred_order: tuple[str, ...],
                     func_order: tuple[str, ...]) -> tuple[list[int], list[int]]:
    """Predicate membership as one bitmask per individual plus a flat
    function-value table in (function, individual) order."""
    n = len(m.domain)
    masks = [0] * n
    for p, name in enumerate(pred_order):
        ext = m.predicates[name]
        for i, ind in enumerate(m.domain):
            if ind in ext:
                masks[i] |= 1 << p
    vals = [0] * (len(func_order) * n)
    for fi, name in enumerate(func_order):
        table = m.functions[name]
        for i, ind in enumerate(m.domain):
            vals[fi * n + i] = table[ind]
    return masks, vals


# --- candidate model enumeration ---

def first_candidate(size: int, n_funcs: int) -> tuple[int, list[int]]:
    return 0, [0] * (n_funcs * size)


def advance_candidate(ext: int, digits: list[int], size: int, n_preds: int,
                      radii: list[int]) -> tuple[int, list[int]] | None:
    """Next candidate in enumeration order, or None when size is exhausted.
    radii[d] is the number of values digit d ranges over."""
    d = len(digits) - 1
    while d >= 0:
        if digits[d] + 1 < radii[d]:
            digits[d] += 1
            return ext, digits
        digits[d] = 0
        d -= 1
    ext += 1
    if ext >= (1 << (size * n_preds)):
        return None
    return ext, digits


def candidate_radii(sig: Signature, size: int) -> list[int]:
    radii = []
    for _, lo, hi in sig.functions:
        radii.extend([hi - lo + 1] * size)
    return radii


def candidate_encoding(ext: int, digits: list[int], size: int,
                       n_preds: int, func_los: list[int]) -> tuple[list[int], list[int]]:
    """Kernel encoding (pred masks, function values) of one candidate."""
    k = size * n_preds
    masks = [0] * size
    for i in range(size):
        for p in range(n_preds):
            q = i * n_preds + p
            if (ext >> (k - 1 - q)) & 1:
                masks[i] |= 1 << p
    vals = [0] * len(digits)
    n_funcs = len(digits) // size if size else 0
    for fi in range(n_funcs):
        lo = func_los[fi]
        for i in range(size):
            vals[fi * size + i] = lo + digits[fi * size + i]
    return masks, vals


def candidate_model(sig: Signature, size: int, ext: int,
                    digits: list[int]) -> StructureModel:
    """The candidate as a real structure, individuals named e1..eN."""
    domain = tuple(f"e{i + 1}" for i in range(size))
    n_preds = len(sig.predicates)
    k = size * n_preds
    predicates: dict[str, frozenset[str]] = {}
    for p, name in enumerate(sig.predicates):
        members = []
        for i in range(size):
            q = i * n_preds + p
            if (ext >> (k - 1 - q)) & 1:
                members.append(domain[i])
        predicates[name] = frozenset(members)
    functions: dict[str, dict[str, int]] = {}
    for fi, (name, lo, _hi) in enumerate(sig.functions):
        functions[name] = {domain[i]: lo + digits[fi * size + i]
                           for i in range(size)}
    return StructureModel(domain, predicates, functions)
