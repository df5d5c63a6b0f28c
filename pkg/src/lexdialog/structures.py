"""Case files as finite models: relational structures and finite traces.

A .case file is strict JSON:

    {"individuals": ["a", "b"],
     "predicates": {"Employed": ["a", "b"]},
     "functions": {"Score": {"a": 0, "b": 7}}}

A .trace file is strict JSON: {"trace": [["drive"], ["rest"]]}. Unknown
top-level keys are rejected so typos surface instead of silently vanishing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .errors import DataError, LayerMismatch
from .signature import RELATIONAL, TEMPORAL, Signature


@dataclass(frozen=True)
class StructureModel:
    """One case file as a finite relational structure.

    The domain keeps file order; every declared predicate has an extension
    entry and every declared function is total with in-range values.
    """

    domain: tuple[str, ...]
    predicates: dict[str, frozenset[str]]
    functions: dict[str, dict[str, int]]

    def individuals_in(self, predicate: str) -> frozenset[str]:
        return self.predicates[predicate]

    def value(self, function: str, individual: str) -> int:
        return self.functions[function][individual]


@dataclass(frozen=True)
class Trace:
    """A finite, nonempty sequence of states; each state is a set of atoms."""

    states: tuple[frozenset[str], ...]

    def __len__(self) -> int:
        return len(self.states)


def _as_json(data: bytes | str, what: str) -> Any:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise DataError(f"not valid JSON: {exc.msg} (line {exc.lineno})",
                        "") from exc


def _reject_unknown_keys(obj: dict, allowed: set[str]) -> None:
    for key in obj:
        if key not in allowed:
            raise DataError(f"unknown key {key!r}", f"/{key}")


def load_structure(data: bytes | str, sig: Signature) -> StructureModel:
    """Parse and validate a .case file against a relational signature."""
    if sig.kind != RELATIONAL:
        raise LayerMismatch("case files need a relational signature")
    obj = _as_json(data, "case")
    if not isinstance(obj, dict):
        raise DataError("top level must be an object", "")
    _reject_unknown_keys(obj, {"individuals", "predicates", "functions"})

    individuals = obj.get("individuals")
    if not isinstance(individuals, list) or not individuals:
        raise DataError("'individuals' must be a nonempty list", "/individuals")
    seen: set[str] = set()
    for i, ind in enumerate(individuals):
        if not isinstance(ind, str) or not ind:
            raise DataError("individual identifiers must be nonempty strings",
                            f"/individuals/{i}")
        if ind in seen:
            raise DataError(f"duplicate individual {ind!r}", f"/individuals/{i}")
        seen.add(ind)
    domain = tuple(individuals)

    raw_preds = obj.get("predicates", {})
    if not isinstance(raw_preds, dict):
        raise DataError("'predicates' must be an object", "/predicates")
    predicates: dict[str, frozenset[str]] = {}
    for name, members in raw_preds.items():
        if not sig.is_predicate(name):
            raise DataError(f"undeclared predicate {name!r}", f"/predicates/{name}")
        if not isinstance(members, list):
            raise DataError("extension must be a list", f"/predicates/{name}")
        for j, member in enumerate(members):
            if member not in seen:
                raise DataError(f"unknown individual {member!r}",
                                f"/predicates/{name}/{j}")
        predicates[name] = frozenset(members)
    for name in sig.predicates:
        predicates.setdefault(name, frozenset())
    # normalize to declared order
    predicates = {name: predicates[name] for name in sig.predicates}

    raw_funcs = obj.get("functions", {})
    if not isinstance(raw_funcs, dict):
        raise DataError("'functions' must be an object", "/functions")
    for name in raw_funcs:
        if not sig.is_function(name):
            raise DataError(f"undeclared function {name!r}", f"/functions/{name}")
    functions: dict[str, dict[str, int]] = {}
    for name, lo, hi in sig.functions:
        table = raw_funcs.get(name)
        if table is None:
            raise DataError(f"function {name!r} is missing", f"/functions/{name}")
        if not isinstance(table, dict):
            raise DataError("function table must be an object", f"/functions/{name}")
        values: dict[str, int] = {}
        for ind, value in table.items():
            if ind not in seen:
                raise DataError(f"unknown individual {ind!r}",
                                f"/functions/{name}/{ind}")
            if not isinstance(value, int) or isinstance(value, bool):
                raise DataError("function values must be integers",
                                f"/functions/{name}/{ind}")
            if not lo <= value <= hi:
                raise DataError(
                    f"value {value} outside declared range {lo}..{hi}",
                    f"/functions/{name}/{ind}")
            values[ind] = value
        for ind in domain:
            if ind not in values:
                raise DataError(f"no value for individual {ind!r}",
                                f"/functions/{name}/{ind}")
        functions[name] = {ind: values[ind] for ind in domain}

    return StructureModel(domain, predicates, functions)


def save_structure(m: StructureModel) -> str:
    payload = {
        "individuals": list(m.domain),
        "predicates": {name: [i for i in m.domain if i in ext]
                       for name, ext in m.predicates.items()},
        "functions": {name: dict(table) for name, table in m.functions.items()},
    }
    return json.dumps(payload, indent=2) + "\n"


def load_trace(data: bytes | str, sig: Signature) -> Trace:
    """Parse and validate a .trace file against a temporal signature."""
    if sig.kind != TEMPORAL:
        raise LayerMismatch("trace files need a temporal signature")
    obj = _as_json(data, "trace")
    if not isinstance(obj, dict):
        raise DataError("top level must be an object", "")
    _reject_unknown_keys(obj, {"trace"})
    raw = obj.get("trace")
    if not isinstance(raw, list):
        raise DataError("'trace' must be a list of states", "/trace")
    if not raw:
        raise DataError("a trace must contain at least one state", "/trace")
    states: list[frozenset[str]] = []
    for i, state in enumerate(raw):
        if not isinstance(state, list):
            raise DataError("each state must be a list of atoms", f"/trace/{i}")
        for j, atom in enumerate(state):
            if not sig.is_atom(atom):
                raise DataError(f"undeclared atom {atom!r}", f"/trace/{i}/{j}")
        states.append(frozenset(state))
    return Trace(tuple(states))


def save_trace(t: Trace) -> str:
    payload = {"trace": [sorted(state) for state in t.states]}
    return json.dumps(payload, indent=2) + "\n"


def load_structure_file(path: str, sig: Signature) -> StructureModel:
    with open(path, "rb") as fh:
        return load_structure(fh.read(), sig)


def load_trace_file(path: str, sig: Signature) -> Trace:
    with open(path, "rb") as fh:
        return load_trace(fh.read(), sig)


def structure_to_json(m: StructureModel) -> dict:
    return json.loads(save_structure(m))


def trace_to_json(t: Trace) -> dict:
    return json.loads(save_trace(t))
