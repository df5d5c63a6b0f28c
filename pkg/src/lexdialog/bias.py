"""Counterfactual bias audit: equal individuals must score equally.

The template sentence says that any two individuals who differ on a
protected function yet agree on every attribute and every other function
must receive the same score. audit() decides it on a concrete case and,
unlike a bare check, collects every violating ordered pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ProtectedEqualsScore, UnknownFunction
from .evaluate import eval_fo
from .formula import (And, Cmp, Forall, Formula, FuncApp, Implies, SameExcept)
from .printer import render
from .signature import Signature
from .structures import StructureModel
from .transform import expand_macros_over

UNBIASED = "unbiased"
BIASED = "biased"


@dataclass(frozen=True)
class Violation:
    x: str
    y: str
    score_x: int
    score_y: int

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y,
                "scoreX": self.score_x, "scoreY": self.score_y}


@dataclass(frozen=True)
class BiasReport:
    outcome: str
    violations: tuple[Violation, ...]
    formula_used: Formula

    @property
    def biased(self) -> bool:
        return self.outcome == BIASED

    def to_json(self) -> dict:
        return {"outcome": self.outcome,
                "violations": [v.to_json() for v in self.violations],
                "formula": render(self.formula_used)}


def _check_names(functions: tuple[str, ...], protected: str, score: str) -> None:
    for name in (protected, score):
        if name not in functions:
            raise UnknownFunction(f"{name!r} is not a declared function")
    if protected == score:
        raise ProtectedEqualsScore(
            "the protected function and the score function must differ")


def _template(protected: str, score: str) -> Formula:
    premise = And(
        Cmp(FuncApp(protected, "x"), "!=", FuncApp(protected, "y")),
        SameExcept("x", "y", (protected, score)),
    )
    conclusion = Cmp(FuncApp(score, "x"), "=", FuncApp(score, "y"))
    return Forall("x", Forall("y", Implies(premise, conclusion)))


def bias_formula(sig: Signature, protected: str, score: str) -> Formula:
    """forall x, y: differing on the protected function while agreeing on
    everything else (score aside) forces equal scores."""
    _check_names(sig.function_names, protected, score)
    return _template(protected, score)


def audit(m: StructureModel, protected: str, score: str) -> BiasReport:
    """Every ordered pair violating the bias sentence on m, in domain order
    (x-major). Unbiased exactly when the sentence holds on m."""
    functions = tuple(m.functions)
    _check_names(functions, protected, score)
    predicates = tuple(m.predicates)
    others = [g for g in functions if g not in (protected, score)]

    violations: list[Violation] = []
    for x in m.domain:
        for y in m.domain:
            if x == y:
                continue
            if m.value(protected, x) == m.value(protected, y):
                continue
            if any((x in m.predicates[p]) != (y in m.predicates[p])
                   for p in predicates):
                continue
            if any(m.value(g, x) != m.value(g, y) for g in others):
                continue
            sx, sy = m.value(score, x), m.value(score, y)
            if sx != sy:
                violations.append(Violation(x, y, sx, sy))

    outcome = BIASED if violations else UNBIASED
    return BiasReport(outcome, tuple(violations), _template(protected, score))


def audit_agrees_with_evaluator(m: StructureModel, report: BiasReport) -> bool:
    """The report and the generic evaluator must tell the same story."""
    expanded = expand_macros_over(report.formula_used, tuple(m.predicates),
                                  tuple(m.functions))
    return eval_fo(m, expanded, {}) == (report.outcome == UNBIASED)
