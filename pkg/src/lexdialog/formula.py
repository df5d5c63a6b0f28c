"""Abstract syntax for the two-layer law language.

The relational layer is monadic first-order logic with equality and integer
comparisons over declared unary functions; the temporal layer is
propositional linear temporal logic read over finite, nonempty traces with
distinct strong (X) and weak (N) next operators.

Formulas are immutable values with structural equality; source spans are
carried for error reporting but excluded from equality and hashing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import FormulaError, SourceSpan, UnknownExclusion
from .signature import RELATIONAL, TEMPORAL, Signature

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")
NEGATED_CMP = {"=": "!=", "!=": "=", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}


# --- terms (relational layer only) ---

@dataclass(frozen=True, slots=True)
class Var:
    name: str
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class IntLit:
    value: int
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class FuncApp:
    func: str
    var: str
    span: Optional[SourceSpan] = field(default=None, compare=False)


Term = Var | IntLit | FuncApp


# --- formulas ---

@dataclass(frozen=True, slots=True)
class TrueF:
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class FalseF:
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Not:
    child: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Pred:
    name: str
    var: str
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Cmp:
    left: Term
    op: str
    right: Term
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class SameExcept:
    """Macro: the two individuals agree on every attribute and on every
    function not listed in ``excluded``. Expanded on demand."""

    left_var: str
    right_var: str
    excluded: tuple[str, ...]
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Atom:
    name: str
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Next:
    child: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class WeakNext:
    child: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Until:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Release:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Eventually:
    child: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Globally:
    child: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False)


Formula = (TrueF | FalseF | Not | And | Or | Implies | Iff | Pred | Cmp
           | Forall | Exists | SameExcept | Atom | Next | WeakNext | Until
           | Release | Eventually | Globally)

BINARY = (And, Or, Implies, Iff, Until, Release)
UNARY = (Not, Next, WeakNext, Eventually, Globally)
QUANTIFIERS = (Forall, Exists)
RELATIONAL_ONLY = (Pred, Cmp, Forall, Exists, SameExcept)
TEMPORAL_ONLY = (Atom, Next, WeakNext, Until, Release, Eventually, Globally)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY):
        return (f.child,)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula occurrences of f, including f itself (pre-order)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def free_variables(f: Formula) -> set[str]:
    def go(g: Formula, bound: frozenset[str], out: set[str]) -> None:
        if isinstance(g, Pred):
            if g.var not in bound:
                out.add(g.var)
        elif isinstance(g, Cmp):
            for t in (g.left, g.right):
                v = term_variable(t)
                if v is not None and v not in bound:
                    out.add(v)
        elif isinstance(g, SameExcept):
            for v in (g.left_var, g.right_var):
                if v not in bound:
                    out.add(v)
        elif isinstance(g, QUANTIFIERS):
            go(g.body, bound | {g.var}, out)
        else:
            for c in children(g):
                go(c, bound, out)

    out: set[str] = set()
    go(f, frozenset(), out)
    return out


def term_variable(t: Term) -> Optional[str]:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, FuncApp):
        return t.var
    return None


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, QUANTIFIERS):
        return 1 + quantifier_rank(f.body)
    kids = children(f)
    return max((quantifier_rank(c) for c in kids), default=0)


def contains_macro(f: Formula) -> bool:
    return any(isinstance(g, SameExcept) for g in subformulas(f))


def layer_of(f: Formula) -> Optional[str]:
    """The layer a formula commits to, or None for layer-neutral formulas
    (Boolean combinations of constants)."""
    for g in subformulas(f):
        if isinstance(g, RELATIONAL_ONLY):
            return RELATIONAL
        if isinstance(g, TEMPORAL_ONLY):
            return TEMPORAL
    return None


def atom_names(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def _check_term(t: Term, sig: Signature, bound: frozenset[str]) -> str:
    """Validate a term; returns its type, 'ind' or 'int'."""
    if isinstance(t, Var):
        if t.name not in bound:
            raise FormulaError(f"unbound variable {t.name!r}", t.span)
        return "ind"
    if isinstance(t, IntLit):
        bounds = sig.literal_bounds()
        if bounds is None or not bounds[0] <= t.value <= bounds[1]:
            raise FormulaError(
                f"integer literal {t.value} lies outside every declared "
                f"function range (widened by one)", t.span)
        return "int"
    if not sig.is_function(t.func):
        raise FormulaError(f"unknown function {t.func!r}", t.span)
    if t.var not in bound:
        raise FormulaError(f"unbound variable {t.var!r}", t.span)
    return "int"


def validate(f: Formula, sig: Signature, *, require_sentence: bool = True) -> None:
    """Check a formula against a signature.

    Enforces: declared names only, layer purity matching the signature kind,
    bound variables (when require_sentence), typed comparisons (order
    comparisons need integers on both sides; equality also works between two
    individuals), and in-range integer literals.
    """

    def go(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, RELATIONAL_ONLY) and sig.kind != RELATIONAL:
            raise FormulaError("relational construct in a temporal law", g.span)
        if isinstance(g, TEMPORAL_ONLY) and sig.kind != TEMPORAL:
            raise FormulaError("temporal construct in a relational law", g.span)
        if isinstance(g, Pred):
            if not sig.is_predicate(g.name):
                raise FormulaError(f"unknown predicate {g.name!r}", g.span)
            if g.var not in bound:
                raise FormulaError(f"unbound variable {g.var!r}", g.span)
        elif isinstance(g, Atom):
            if not sig.is_atom(g.name):
                raise FormulaError(f"unknown atom {g.name!r}", g.span)
        elif isinstance(g, Cmp):
            if g.op not in CMP_OPS:
                raise FormulaError(f"unknown comparison operator {g.op!r}", g.span)
            lt = _check_term(g.left, sig, bound)
            rt = _check_term(g.right, sig, bound)
            if lt != rt:
                raise FormulaError(
                    "comparison mixes an individual with an integer", g.span)
            if lt == "ind" and g.op not in ("=", "!="):
                raise FormulaError(
                    f"individuals admit only = and !=, not {g.op!r}", g.span)
        elif isinstance(g, SameExcept):
            for name in g.excluded:
                if not sig.is_function(name):
                    raise UnknownExclusion(
                        f"same/except excludes unknown function {name!r}", g.span)
            for v in (g.left_var, g.right_var):
                if v not in bound:
                    raise FormulaError(f"unbound variable {v!r}", g.span)
        elif isinstance(g, QUANTIFIERS):
            go(g.body, bound | {g.var})
            return
        for c in children(g):
            go(c, bound)

    if require_sentence:
        go(f, frozenset())
    else:
        go(f, frozenset(free_variables(f)))
