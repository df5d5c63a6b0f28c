"""Formula rewrites: macro expansion and negation normal form."""

from __future__ import annotations

from .errors import FormulaError, UnknownExclusion
from .formula import (NEGATED_CMP, And, Atom, Cmp, Eventually, Exists, FalseF,
                      Forall, Formula, FuncApp, Globally, Iff, Implies, Next,
                      Not, Or, Pred, Release, SameExcept, TrueF, Until,
                      WeakNext)
from .signature import Signature


def conjoin(parts: list[Formula]) -> Formula:
    """Left-associated conjunction; the empty conjunction is truth."""
    if not parts:
        return TrueF()
    acc = parts[0]
    for part in parts[1:]:
        acc = And(acc, part)
    return acc


def expand_macros(f: Formula, sig: Signature) -> Formula:
    """Replace every same/except node by its explicit agreement conjunction:
    P(x) <-> P(y) for every declared predicate, plus g(x) = g(y) for every
    declared function g outside the exclusion set."""
    return expand_macros_over(f, sig.predicates, sig.function_names)


def expand_macros_over(f: Formula, predicates: tuple[str, ...],
                       functions: tuple[str, ...]) -> Formula:
    if isinstance(f, SameExcept):
        for name in f.excluded:
            if name not in functions:
                raise UnknownExclusion(
                    f"same/except excludes unknown function {name!r}", f.span)
        x, y = f.left_var, f.right_var
        parts: list[Formula] = [
            Iff(Pred(p, x), Pred(p, y)) for p in predicates
        ]
        parts.extend(
            Cmp(FuncApp(g, x), "=", FuncApp(g, y))
            for g in functions if g not in f.excluded
        )
        return conjoin(parts)
    if isinstance(f, Not):
        return Not(expand_macros_over(f.child, predicates, functions), span=f.span)
    if isinstance(f, (And, Or, Implies, Iff, Until, Release)):
        return type(f)(expand_macros_over(f.left, predicates, functions),
                       expand_macros_over(f.right, predicates, functions),
                       span=f.span)
    if isinstance(f, (Next, WeakNext, Eventually, Globally)):
        return type(f)(expand_macros_over(f.child, predicates, functions),
                       span=f.span)
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, expand_macros_over(f.body, predicates, functions),
                       span=f.span)
    return f


def nnf(f: Formula) -> Formula:
    """Negation normal form: negation only on predicates and atoms,
    implications and equivalences eliminated, temporal and quantifier
    dualities applied. Requires macro-free input."""
    return _pos(f)


def _reject_macro(f: Formula) -> None:
    raise FormulaError("expand macros before computing negation normal form",
                       f.span)


def _pos(f: Formula) -> Formula:
    if isinstance(f, SameExcept):
        _reject_macro(f)
    if isinstance(f, Not):
        return _neg(f.child)
    if isinstance(f, Implies):
        return Or(_neg(f.left), _pos(f.right))
    if isinstance(f, Iff):
        return Or(And(_pos(f.left), _pos(f.right)),
                  And(_neg(f.left), _neg(f.right)))
    if isinstance(f, (And, Or, Until, Release)):
        return type(f)(_pos(f.left), _pos(f.right))
    if isinstance(f, (Next, WeakNext, Eventually, Globally)):
        return type(f)(_pos(f.child))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _pos(f.body))
    return f


def _neg(f: Formula) -> Formula:
    if isinstance(f, SameExcept):
        _reject_macro(f)
    if isinstance(f, TrueF):
        return FalseF()
    if isinstance(f, FalseF):
        return TrueF()
    if isinstance(f, (Pred, Atom)):
        return Not(f)
    if isinstance(f, Cmp):
        return Cmp(f.left, NEGATED_CMP[f.op], f.right)
    if isinstance(f, Not):
        return _pos(f.child)
    if isinstance(f, And):
        return Or(_neg(f.left), _neg(f.right))
    if isinstance(f, Or):
        return And(_neg(f.left), _neg(f.right))
    if isinstance(f, Implies):
        return And(_pos(f.left), _neg(f.right))
    if isinstance(f, Iff):
        return Or(And(_pos(f.left), _neg(f.right)),
                  And(_neg(f.left), _pos(f.right)))
    if isinstance(f, Forall):
        return Exists(f.var, _neg(f.body))
    if isinstance(f, Exists):
        return Forall(f.var, _neg(f.body))
    if isinstance(f, Next):
        return WeakNext(_neg(f.child))
    if isinstance(f, WeakNext):
        return Next(_neg(f.child))
    if isinstance(f, Until):
        return Release(_neg(f.left), _neg(f.right))
    if isinstance(f, Release):
        return Until(_neg(f.left), _neg(f.right))
    if isinstance(f, Eventually):
        return Globally(_neg(f.child))
    if isinstance(f, Globally):
        return Eventually(_neg(f.child))
    raise TypeError(f"not a formula: {f!r}")
