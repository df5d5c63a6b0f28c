"""Canonical concrete syntax for formulas, with minimal parentheses.

render is the inverse of parse up to spans: parse(render(f), sig) is
structurally equal to f for every well-formed f.
"""

from __future__ import annotations

from .formula import (And, Atom, Cmp, Eventually, Exists, FalseF, Forall,
                      Formula, FuncApp, Globally, Iff, Implies, IntLit, Next,
                      Not, Or, Pred, Release, SameExcept, Term, TrueF, Until,
                      Var, WeakNext)

_QUANT, _IFF, _IMPLIES, _OR, _AND, _UNTIL, _UNARY, _ATOM = range(8)

_UNARY_SYMBOL = {Next: "X", WeakNext: "N", Eventually: "F", Globally: "G"}
_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->",
                  Until: "U", Release: "R"}
_LEVEL = {Iff: _IFF, Implies: _IMPLIES, Or: _OR, And: _AND,
          Until: _UNTIL, Release: _UNTIL}


def _prec(f: Formula) -> int:
    if isinstance(f, (Forall, Exists)):
        return _QUANT
    if isinstance(f, tuple(_LEVEL)):
        return _LEVEL[type(f)]
    if isinstance(f, (Not, Next, WeakNext, Eventually, Globally)):
        return _UNARY
    return _ATOM


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, FuncApp):
        return f"{t.func}({t.var})"
    raise TypeError(f"not a term: {t!r}")


def render(f: Formula) -> str:
    return _render(f, _QUANT)


def _render(f: Formula, required: int) -> str:
    text = _render_raw(f)
    if _prec(f) < required:
        return f"({text})"
    return text


def _render_raw(f: Formula) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Pred):
        return f"{f.name}({f.var})"
    if isinstance(f, Cmp):
        return f"{render_term(f.left)} {f.op} {render_term(f.right)}"
    if isinstance(f, SameExcept):
        base = f"same({f.left_var}, {f.right_var})"
        if f.excluded:
            return base + " except " + ", ".join(f.excluded)
        return base
    if isinstance(f, Not):
        return "!" + _render(f.child, _UNARY)
    if isinstance(f, (Next, WeakNext, Eventually, Globally)):
        return f"{_UNARY_SYMBOL[type(f)]} {_render(f.child, _UNARY)}"
    if isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        return f"{word} {f.var}. {_render(f.body, _QUANT)}"
    if isinstance(f, (Until, Release)):
        # right-associative
        left = _render(f.left, _UNTIL + 1)
        right = _render(f.right, _UNTIL)
        return f"{left} {_BINARY_SYMBOL[type(f)]} {right}"
    if isinstance(f, Implies):
        return f"{_render(f.left, _IMPLIES + 1)} -> {_render(f.right, _IMPLIES)}"
    if isinstance(f, (And, Or, Iff)):
        # left-associative
        level = _LEVEL[type(f)]
        left = _render(f.left, level)
        right = _render(f.right, level + 1)
        return f"{left} {_BINARY_SYMBOL[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")
