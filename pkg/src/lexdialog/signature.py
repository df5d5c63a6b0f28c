"""Signatures: the vocabulary a law is written over.

A signature is either relational (unary predicates plus integer-valued unary
functions with finite ranges) or temporal (propositional atoms). Declared
order matters: it fixes column order in reports and the deterministic
enumeration order of the bounded model search.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import SignatureError

RELATIONAL = "relational"
TEMPORAL = "temporal"

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

# Names that the concrete syntax claims for itself, per layer.
RESERVED_RELATIONAL = frozenset({"forall", "exists", "same", "except", "true", "false"})
RESERVED_TEMPORAL = frozenset({"X", "N", "F", "G", "U", "R", "true", "false"})


@dataclass(frozen=True)
class Signature:
    """Vocabulary of a law: either predicates/functions or atoms, never both."""

    kind: str
    predicates: tuple[str, ...] = ()
    functions: tuple[tuple[str, int, int], ...] = ()  # (name, lo, hi), lo <= hi
    atoms: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (RELATIONAL, TEMPORAL):
            raise SignatureError(f"unknown signature kind {self.kind!r}")
        if self.kind == RELATIONAL and self.atoms:
            raise SignatureError("a relational signature cannot declare atoms")
        if self.kind == TEMPORAL and (self.predicates or self.functions):
            raise SignatureError(
                "a temporal signature cannot declare predicates or functions")
        reserved = RESERVED_RELATIONAL if self.kind == RELATIONAL else RESERVED_TEMPORAL
        seen: set[str] = set()
        for name in self._all_names():
            if not IDENT_RE.match(name):
                raise SignatureError(f"invalid identifier {name!r}")
            if name in reserved:
                raise SignatureError(f"{name!r} is reserved in the {self.kind} layer")
            if name in seen:
                raise SignatureError(f"duplicate declaration of {name!r}")
            seen.add(name)
        for name, lo, hi in self.functions:
            if lo > hi:
                raise SignatureError(f"function {name}: empty range {lo}..{hi}")

    def _all_names(self) -> Iterable[str]:
        yield from self.predicates
        for name, _, _ in self.functions:
            yield name
        yield from self.atoms

    @property
    def function_names(self) -> tuple[str, ...]:
        return tuple(name for name, _, _ in self.functions)

    def function_range(self, name: str) -> tuple[int, int]:
        for fname, lo, hi in self.functions:
            if fname == name:
                return lo, hi
        raise KeyError(name)

    def is_predicate(self, name: str) -> bool:
        return name in self.predicates

    def is_function(self, name: str) -> bool:
        return any(name == fname for fname, _, _ in self.functions)

    def is_atom(self, name: str) -> bool:
        return name in self.atoms

    def literal_bounds(self) -> tuple[int, int] | None:
        """Span of integer literals a formula may mention: the union of all
        declared ranges widened by one sentinel on each side."""
        if not self.functions:
            return None
        lo = min(lo for _, lo, _ in self.functions) - 1
        hi = max(hi for _, _, hi in self.functions) + 1
        return lo, hi


def relational(predicates: Iterable[str] = (),
               functions: Mapping[str, tuple[int, int]] | None = None) -> Signature:
    funcs = tuple((n, lo, hi) for n, (lo, hi) in (functions or {}).items())
    return Signature(RELATIONAL, predicates=tuple(predicates), functions=funcs)


def temporal(atoms: Iterable[str]) -> Signature:
    return Signature(TEMPORAL, atoms=tuple(atoms))


_FUNC_LINE = re.compile(r"func\s+(\S+)\s+(-?\d+)\s*\.\.\s*(-?\d+)\Z")


def parse_signature(text: str) -> Signature:
    """Parse the line-oriented .sig format.

    One declaration per line: ``pred NAME``, ``func NAME lo..hi`` or
    ``atom NAME``. Blank lines and ``#`` comments are ignored. The kind is
    inferred; mixing atom lines with pred/func lines is an error.
    """
    predicates: list[str] = []
    functions: list[tuple[str, int, int]] = []
    atoms: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "pred" and len(parts) == 2:
            predicates.append(parts[1])
        elif parts[0] == "atom" and len(parts) == 2:
            atoms.append(parts[1])
        elif parts[0] == "func":
            m = _FUNC_LINE.match(line)
            if not m:
                raise SignatureError(
                    f"line {lineno}: expected 'func NAME lo..hi', got {raw.strip()!r}")
            functions.append((m.group(1), int(m.group(2)), int(m.group(3))))
        else:
            raise SignatureError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if atoms and (predicates or functions):
        raise SignatureError("cannot mix atom declarations with pred/func declarations")
    if atoms:
        return Signature(TEMPORAL, atoms=tuple(atoms))
    return Signature(RELATIONAL, predicates=tuple(predicates),
                     functions=tuple(functions))


def format_signature(sig: Signature) -> str:
    """Render a signature back into the .sig line format."""
    lines = []
    for name in sig.predicates:
        lines.append(f"pred {name}")
    for name, lo, hi in sig.functions:
        lines.append(f"func {name} {lo}..{hi}")
    for name in sig.atoms:
        lines.append(f"atom {name}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_signature(path: str) -> Signature:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_signature(fh.read())
