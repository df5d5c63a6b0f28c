"""Interactive interrogation sessions.

A session is a value: executing a command returns a new session plus a
reply, and the only thing a failing command changes is the history. The
transcript is a deterministic, replayable record; feeding its command
lines into a fresh session reproduces it byte for byte.

Command grammar (one command per line):

    load sig NAME PATH            defsig NAME := pred P; func f 0..3
    load law NAME PATH sig=SIG    deflaw NAME sig=SIG := FORMULA
    load case NAME PATH sig=SIG   defcase NAME sig=SIG := {json}
    list                          show NAME
    check CASE LAW                audit CASE protected=F score=G
    consistent LAW [bound N]      implies LAW PROP [bound N]
    assume [sig=SIG :=] FORMULA   retract K
    why                           transcript
    help

`assume` hypotheses are conjoined onto the antecedent of later
`implies`/`consistent` queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .bias import BiasReport, audit
from .engine import (INVALID, SAT, UNSAT, VALID, DecisionResult, EngineConfig,
                     DEFAULT_CONFIG, consistent, implies)
from .errors import LayerMismatch, LexdialogError, ResourceLimit
from .evaluate import Assignment, TracePosition, check
from .formula import Formula
from .parser import parse
from .printer import render
from .signature import Signature, format_signature, load_signature, parse_signature
from .structures import (StructureModel, Trace, load_structure_file,
                         load_trace_file)
from .transform import conjoin

Case = Union[StructureModel, Trace]


@dataclass(frozen=True)
class LawEntry:
    formula: Formula
    sig_name: str


@dataclass(frozen=True)
class CaseEntry:
    value: Case
    sig_name: str


@dataclass(frozen=True)
class Hypothesis:
    text: str
    formula: Formula
    sig_name: str


@dataclass(frozen=True)
class Reply:
    kind: str  # ok | verdict | decision | bias_report | error
    payload: dict
    human_text: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": self.payload,
                "humanText": self.human_text, "detail": self.detail}

    @property
    def is_error(self) -> bool:
        return self.kind == "error"

    @property
    def error_code(self) -> Optional[str]:
        return self.payload.get("code") if self.is_error else None


@dataclass(frozen=True)
class Session:
    sigs: dict[str, Signature] = field(default_factory=dict)
    laws: dict[str, LawEntry] = field(default_factory=dict)
    cases: dict[str, CaseEntry] = field(default_factory=dict)
    hypotheses: tuple[Hypothesis, ...] = ()
    history: tuple[tuple[str, Reply], ...] = ()
    last_witness: Optional[tuple[str, dict, str]] = None  # kind, payload, detail
    id_counter: int = 0
    config: EngineConfig = DEFAULT_CONFIG

    def same_state(self, other: "Session") -> bool:
        """Equality of everything a command could corrupt, history aside."""
        return (self.sigs == other.sigs and self.laws == other.laws
                and self.cases == other.cases
                and self.hypotheses == other.hypotheses
                and self.last_witness == other.last_witness)


def transcript(s: Session) -> str:
    blocks = []
    for command, reply in s.history:
        lines = [f"> {command}", reply.human_text]
        if reply.detail:
            lines.append(reply.detail)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def replay(commands: list[str], config: EngineConfig = DEFAULT_CONFIG) -> str:
    s = Session(config=config)
    for command in commands:
        s, _ = execute(s, command)
    return transcript(s)


# --- rendering helpers ---

def render_structure_table(m: StructureModel) -> str:
    headers = ["individual"] + list(m.predicates) + list(m.functions)
    rows = []
    for ind in m.domain:
        row = [ind]
        row.extend("yes" if ind in m.predicates[p] else "no"
                   for p in m.predicates)
        row.extend(str(m.functions[f][ind]) for f in m.functions)
        rows.append(row)
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    def fmt(row): return " | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    return "\n".join([fmt(headers)] + [fmt(r) for r in rows])


def render_trace_timeline(t: Trace) -> str:
    lines = []
    for i, state in enumerate(t.states, start=1):
        atoms = ", ".join(sorted(state)) if state else "(empty)"
        lines.append(f"step {i}: {atoms}")
    return "\n".join(lines)


def render_assignment_table(a: Assignment, case: Optional[Case]) -> str:
    lines = [f"{var} = {ind}" for var, ind in a.bindings]
    if isinstance(case, StructureModel):
        bound = []
        for _, ind in a.bindings:
            if ind not in bound:
                bound.append(ind)
        sub = StructureModel(
            tuple(bound),
            {p: frozenset(i for i in bound if i in ext)
             for p, ext in case.predicates.items()},
            {f: {i: tab[i] for i in bound} for f, tab in case.functions.items()})
        lines.append(render_structure_table(sub))
    return "\n".join(lines)


def render_witness_detail(value, case: Optional[Case] = None) -> str:
    if isinstance(value, StructureModel):
        return render_structure_table(value)
    if isinstance(value, Trace):
        return render_trace_timeline(value)
    if isinstance(value, Assignment):
        return render_assignment_table(value, case)
    if isinstance(value, TracePosition) and isinstance(case, Trace):
        state = case.states[value.index]
        atoms = ", ".join(sorted(state)) if state else "(empty)"
        return f"violated at step {value.index + 1}: {atoms}"
    return ""


def _decision_phrase(result: DecisionResult) -> str:
    if result.status == SAT:
        if isinstance(result.witness, Trace):
            return f"sat; witness is a {len(result.witness)}-state trace"
        return (f"sat; witness is a case with "
                f"{len(result.witness.domain)} individual(s)")
    if result.status == UNSAT:
        return "unsat"
    if result.status == VALID:
        return "valid"
    if result.status == INVALID:
        if isinstance(result.witness, Trace):
            return (f"invalid; counterexample is a "
                    f"{len(result.witness)}-state trace")
        return (f"invalid; counterexample is a case with "
                f"{len(result.witness.domain)} individual(s)")
    if result.status == "unsat_up_to_bound":
        return f"unsat up to domain size {result.bound_used}"
    return f"valid up to domain size {result.bound_used}"


# --- command execution ---

def execute(s: Session, command: str) -> tuple[Session, Reply]:
    """Run one dialogue command; history grows by exactly one entry."""
    try:
        next_state, reply = _dispatch(s, command.strip())
    except ResourceLimit as exc:
        next_state, reply = s, _error("resource_limit", str(exc))
    except LexdialogError as exc:
        next_state, reply = s, _error(exc.code, str(exc))
    except ValueError as exc:
        next_state, reply = s, _error("bad_arguments", str(exc))
    next_state = replace(next_state,
                         history=s.history + ((command, reply),),
                         id_counter=s.id_counter + 1)
    return next_state, reply


def _error(code: str, message: str) -> Reply:
    return Reply("error", {"code": code, "message": message},
                 f"error[{code}]: {message}")


def _ok(text: str, payload: Optional[dict] = None, detail: str = "") -> Reply:
    return Reply("ok", payload or {}, text, detail)


def _dispatch(s: Session, command: str) -> tuple[Session, Reply]:
    if not command:
        return s, _error("unknown_command", "empty command")
    tokens = command.split()
    head = tokens[0]
    if head == "load":
        return _cmd_load(s, tokens)
    if head == "defsig":
        return _cmd_defsig(s, command, tokens)
    if head == "deflaw":
        return _cmd_deflaw(s, command, tokens)
    if head == "defcase":
        return _cmd_defcase(s, command, tokens)
    if head == "list":
        return _cmd_list(s)
    if head == "show":
        return _cmd_show(s, tokens)
    if head == "check":
        return _cmd_check(s, tokens)
    if head == "consistent":
        return _cmd_consistent(s, tokens)
    if head == "implies":
        return _cmd_implies(s, tokens)
    if head == "audit":
        return _cmd_audit(s, tokens)
    if head == "assume":
        return _cmd_assume(s, command, tokens)
    if head == "retract":
        return _cmd_retract(s, tokens)
    if head == "why":
        return _cmd_why(s)
    if head == "transcript":
        return s, _ok("transcript follows", detail=transcript(s))
    if head == "help":
        return s, _ok("commands", detail=HELP_TEXT)
    return s, _error("unknown_command", f"unknown command {head!r}")


def _kv(tokens: list[str], key: str) -> Optional[str]:
    prefix = key + "="
    for tok in tokens:
        if tok.startswith(prefix):
            return tok[len(prefix):]
    return None


def _fresh_name(s: Session, namespace: dict, name: str, what: str) -> Optional[Reply]:
    if name in namespace:
        return _error("name_taken", f"{what} {name!r} already defined")
    return None


def _need_sig(s: Session, name: Optional[str]) -> Signature:
    if name is None:
        raise LexdialogError("missing sig=NAME argument")
    sig = s.sigs.get(name)
    if sig is None:
        raise _unknown(f"no signature named {name!r}")
    return sig


def _unknown(message: str) -> LexdialogError:
    err = LexdialogError(message)
    err.code = "unknown_name"
    return err


def _cmd_load(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) < 4:
        return s, _error("bad_arguments", "usage: load sig|law|case NAME PATH [sig=SIG]")
    what, name, path = tokens[1], tokens[2], tokens[3]
    try:
        if what == "sig":
            if (err := _fresh_name(s, s.sigs, name, "signature")):
                return s, err
            sig = load_signature(path)
            return (replace(s, sigs={**s.sigs, name: sig}),
                    _ok(f"loaded signature {name} ({sig.kind})"))
        if what == "law":
            if (err := _fresh_name(s, s.laws, name, "law")):
                return s, err
            sig_name = _kv(tokens, "sig")
            sig = _need_sig(s, sig_name)
            with open(path, "r", encoding="utf-8") as fh:
                formula = parse(fh.read(), sig)
            entry = LawEntry(formula, sig_name)
            return (replace(s, laws={**s.laws, name: entry}),
                    _ok(f"loaded law {name}: {render(formula)}"))
        if what == "case":
            if (err := _fresh_name(s, s.cases, name, "case")):
                return s, err
            sig_name = _kv(tokens, "sig")
            sig = _need_sig(s, sig_name)
            value: Case
            if sig.kind == "temporal":
                value = load_trace_file(path, sig)
                text = f"loaded trace case {name} ({len(value)} states)"
            else:
                value = load_structure_file(path, sig)
                text = f"loaded case {name} ({len(value.domain)} individuals)"
            return (replace(s, cases={**s.cases, name: CaseEntry(value, sig_name)}),
                    _ok(text))
    except OSError as exc:
        return s, _error("io_error", f"cannot read {path!r}: {exc.strerror}")
    return s, _error("bad_arguments", f"cannot load {what!r}")


def _cmd_defsig(s: Session, command: str, tokens: list[str]) -> tuple[Session, Reply]:
    name, body = _split_def(command, tokens, 2)
    if name is None:
        return s, _error("bad_arguments", "usage: defsig NAME := pred P; func f 0..3")
    if (err := _fresh_name(s, s.sigs, name, "signature")):
        return s, err
    sig = parse_signature(body.replace(";", "\n"))
    return (replace(s, sigs={**s.sigs, name: sig}),
            _ok(f"defined signature {name} ({sig.kind})"))


def _split_def(command: str, tokens: list[str], name_pos: int) -> tuple[Optional[str], str]:
    if ":=" not in tokens or len(tokens) < name_pos:
        return None, ""
    name = tokens[1]
    body = command.split(":=", 1)[1].strip()
    return name, body


def _cmd_deflaw(s: Session, command: str, tokens: list[str]) -> tuple[Session, Reply]:
    name, body = _split_def(command, tokens, 2)
    if name is None or not body:
        return s, _error("bad_arguments", "usage: deflaw NAME sig=SIG := FORMULA")
    if (err := _fresh_name(s, s.laws, name, "law")):
        return s, err
    sig_name = _kv(tokens, "sig")
    sig = _need_sig(s, sig_name)
    formula = parse(body, sig)
    return (replace(s, laws={**s.laws, name: LawEntry(formula, sig_name)}),
            _ok(f"defined law {name}: {render(formula)}"))


def _cmd_defcase(s: Session, command: str, tokens: list[str]) -> tuple[Session, Reply]:
    name, body = _split_def(command, tokens, 2)
    if name is None or not body:
        return s, _error("bad_arguments", "usage: defcase NAME sig=SIG := {json}")
    if (err := _fresh_name(s, s.cases, name, "case")):
        return s, err
    sig_name = _kv(tokens, "sig")
    sig = _need_sig(s, sig_name)
    if sig.kind == "temporal":
        from .structures import load_trace
        value: Case = load_trace(body, sig)
        text = f"defined trace case {name} ({len(value)} states)"
    else:
        from .structures import load_structure
        value = load_structure(body, sig)
        text = f"defined case {name} ({len(value.domain)} individuals)"
    return (replace(s, cases={**s.cases, name: CaseEntry(value, sig_name)}), _ok(text))


def _cmd_list(s: Session) -> tuple[Session, Reply]:
    lines = [
        "sigs: " + (", ".join(s.sigs) if s.sigs else "(none)"),
        "laws: " + (", ".join(s.laws) if s.laws else "(none)"),
        "cases: " + (", ".join(s.cases) if s.cases else "(none)"),
    ]
    if s.hypotheses:
        lines.append("hypotheses:")
        lines.extend(f"  {i}. {h.text}" for i, h in enumerate(s.hypotheses, 1))
    else:
        lines.append("hypotheses: (none)")
    text = (f"{len(s.sigs)} sig(s), {len(s.laws)} law(s), "
            f"{len(s.cases)} case(s), {len(s.hypotheses)} hypothesis(es)")
    return s, _ok(text, detail="\n".join(lines))


def _cmd_show(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) != 2:
        return s, _error("bad_arguments", "usage: show NAME")
    name = tokens[1]
    if name in s.laws:
        entry = s.laws[name]
        return s, _ok(f"law {name} over sig {entry.sig_name}",
                      detail=render(entry.formula))
    if name in s.cases:
        entry = s.cases[name]
        detail = (render_trace_timeline(entry.value)
                  if isinstance(entry.value, Trace)
                  else render_structure_table(entry.value))
        return s, _ok(f"case {name} over sig {entry.sig_name}", detail=detail)
    if name in s.sigs:
        return s, _ok(f"signature {name} ({s.sigs[name].kind})",
                      detail=format_signature(s.sigs[name]).rstrip("\n"))
    return s, _error("unknown_name", f"nothing named {name!r}")


def _get_law(s: Session, name: str) -> LawEntry:
    entry = s.laws.get(name)
    if entry is None:
        raise _unknown(f"no law named {name!r}")
    return entry


def _get_case(s: Session, name: str) -> CaseEntry:
    entry = s.cases.get(name)
    if entry is None:
        raise _unknown(f"no case named {name!r}")
    return entry


def _parse_bound(tokens: list[str], after: int) -> Optional[int]:
    rest = tokens[after:]
    if not rest:
        return None
    if len(rest) == 2 and rest[0] == "bound" and rest[1].isdigit():
        return int(rest[1])
    value = _kv(rest, "bound")
    if value is not None and value.isdigit():
        return int(value)
    raise LexdialogError(f"unexpected arguments: {' '.join(rest)}")


def _antecedent(s: Session, law: LawEntry, law_name: str) -> Formula:
    """Conjoin standing hypotheses onto a query's antecedent."""
    if not s.hypotheses:
        return law.formula
    hyp_sig = s.hypotheses[0].sig_name
    if hyp_sig != law.sig_name:
        raise LayerMismatch(
            f"hypotheses are over sig {hyp_sig!r} but law {law_name!r} "
            f"is over sig {law.sig_name!r}")
    return conjoin([h.formula for h in s.hypotheses] + [law.formula])


def _cmd_check(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) != 3:
        return s, _error("bad_arguments", "usage: check CASE LAW")
    case_entry = _get_case(s, tokens[1])
    law_entry = _get_law(s, tokens[2])
    if case_entry.sig_name != law_entry.sig_name:
        return s, _error("signature_mismatch",
                         f"case {tokens[1]!r} and law {tokens[2]!r} "
                         f"use different signatures")
    verdict = check(case_entry.value, law_entry.formula)
    if verdict.holds:
        text = f"{tokens[1]} satisfies {tokens[2]}"
    else:
        text = f"{tokens[1]} violates {tokens[2]}"
    if isinstance(verdict.witness, Assignment):
        bindings = ", ".join(f"{v} = {i}" for v, i in verdict.witness.bindings)
        text += f"; witness {bindings}"
    elif isinstance(verdict.witness, TracePosition):
        text += f"; violated at step {verdict.witness.index + 1}"
    detail = render_witness_detail(verdict.witness, case_entry.value)
    payload = {"case": tokens[1], "law": tokens[2], **verdict.to_json()}
    reply = Reply("verdict", payload, text, detail)
    s = _remember_witness(s, reply)
    return s, reply


def _remember_witness(s: Session, reply: Reply) -> Session:
    if reply.detail or reply.payload.get("witness"):
        return replace(s, last_witness=(reply.kind, reply.payload, reply.detail))
    return s


def _cmd_consistent(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) < 2:
        return s, _error("bad_arguments", "usage: consistent LAW [bound N]")
    law_entry = _get_law(s, tokens[1])
    bound = _parse_bound(tokens, 2)
    sig = s.sigs[law_entry.sig_name]
    formula = _antecedent(s, law_entry, tokens[1])
    result = consistent(formula, sig, bound, s.config)
    text = f"{tokens[1]} is {_decision_phrase(result)}"
    detail = render_witness_detail(result.witness)
    payload = {"law": tokens[1], **result.to_json()}
    reply = Reply("decision", payload, text, detail)
    return _remember_witness(s, reply), reply


def _cmd_implies(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) < 3:
        return s, _error("bad_arguments", "usage: implies LAW PROP [bound N]")
    law_entry = _get_law(s, tokens[1])
    prop_entry = _get_law(s, tokens[2])
    if law_entry.sig_name != prop_entry.sig_name:
        return s, _error("signature_mismatch",
                         f"laws {tokens[1]!r} and {tokens[2]!r} "
                         f"use different signatures")
    bound = _parse_bound(tokens, 3)
    sig = s.sigs[law_entry.sig_name]
    antecedent = _antecedent(s, law_entry, tokens[1])
    result = implies(antecedent, prop_entry.formula, sig, bound, s.config)
    text = f"{tokens[1]} -> {tokens[2]}: {_decision_phrase(result)}"
    detail = render_witness_detail(result.witness)
    payload = {"law": tokens[1], "property": tokens[2], **result.to_json()}
    reply = Reply("decision", payload, text, detail)
    return _remember_witness(s, reply), reply


def _cmd_audit(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) < 4:
        return s, _error("bad_arguments",
                         "usage: audit CASE protected=F score=G")
    case_entry = _get_case(s, tokens[1])
    protected = _kv(tokens, "protected")
    score = _kv(tokens, "score")
    if protected is None or score is None:
        return s, _error("bad_arguments",
                         "usage: audit CASE protected=F score=G")
    if not isinstance(case_entry.value, StructureModel):
        return s, _error("layer_mismatch", "audit needs a case structure")
    report = audit(case_entry.value, protected, score)
    if report.biased:
        text = (f"{tokens[1]} is biased: {len(report.violations)} "
                f"violating ordered pair(s)")
    else:
        text = f"{tokens[1]} is unbiased"
    detail = _render_violations(report)
    payload = {"case": tokens[1], **report.to_json()}
    reply = Reply("bias_report", payload, text, detail)
    return _remember_witness(s, reply), reply


def _render_violations(report: BiasReport) -> str:
    if not report.violations:
        return ""
    headers = ["x", "y", "scoreX", "scoreY"]
    rows = [[v.x, v.y, str(v.score_x), str(v.score_y)]
            for v in report.violations]
    widths = [max(len(h), *(len(r[i]) for r in rows))
              for i, h in enumerate(headers)]
    def fmt(row): return " | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    return "\n".join([fmt(headers)] + [fmt(r) for r in rows])


def _cmd_assume(s: Session, command: str, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) < 2:
        return s, _error("bad_arguments", "usage: assume [sig=SIG :=] FORMULA")
    sig_name = _kv(tokens[1:2], "sig")
    if sig_name is not None:
        _, body = _split_def(command, tokens, 1)
        if not body:
            return s, _error("bad_arguments", "usage: assume sig=SIG := FORMULA")
        text = body
    else:
        text = command.split(None, 1)[1]
        if s.hypotheses:
            sig_name = s.hypotheses[0].sig_name
        elif len(s.sigs) == 1:
            sig_name = next(iter(s.sigs))
        else:
            return s, _error("bad_arguments",
                             "ambiguous signature; use: assume sig=SIG := FORMULA")
    sig = _need_sig(s, sig_name)
    if s.hypotheses and s.hypotheses[0].sig_name != sig_name:
        return s, _error("signature_mismatch",
                         f"hypotheses already use sig {s.hypotheses[0].sig_name!r}")
    formula = parse(text, sig)
    hyp = Hypothesis(render(formula), formula, sig_name)
    return (replace(s, hypotheses=s.hypotheses + (hyp,)),
            _ok(f"assumed ({len(s.hypotheses) + 1}): {hyp.text}"))


def _cmd_retract(s: Session, tokens: list[str]) -> tuple[Session, Reply]:
    if len(tokens) != 2 or not tokens[1].isdigit():
        return s, _error("bad_arguments", "usage: retract K")
    k = int(tokens[1])
    if not 1 <= k <= len(s.hypotheses):
        return s, _error("bad_arguments",
                         f"no hypothesis {k}; have {len(s.hypotheses)}")
    dropped = s.hypotheses[k - 1]
    remaining = s.hypotheses[:k - 1] + s.hypotheses[k:]
    return (replace(s, hypotheses=remaining),
            _ok(f"retracted ({k}): {dropped.text}"))


def _cmd_why(s: Session) -> tuple[Session, Reply]:
    if s.last_witness is None:
        return s, _error("nothing_to_explain",
                         "no witness or counterexample to explain yet")
    kind, payload, detail = s.last_witness
    return s, Reply(kind, payload, "(why) most recent witness follows",
                    detail or "(no tabular form)")


HELP_TEXT = """\
load sig NAME PATH            defsig NAME := pred P; func f 0..3
load law NAME PATH sig=SIG    deflaw NAME sig=SIG := FORMULA
load case NAME PATH sig=SIG   defcase NAME sig=SIG := {json}
list                          show NAME
check CASE LAW                audit CASE protected=F score=G
consistent LAW [bound N]      implies LAW PROP [bound N]
assume [sig=SIG :=] FORMULA   retract K
why                           transcript"""
