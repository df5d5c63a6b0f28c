import json

from lexdialog.session import Session, execute, replay, transcript

SYRI_DEFS = [
    "defsig syri := pred Employed; func NrOfPassports 0..3; func Score 0..10",
    'defcase m1 sig=syri := {"individuals": ["a","b"],'
    ' "predicates": {"Employed": ["a","b"]},'
    ' "functions": {"NrOfPassports": {"a":1,"b":2},'
    ' "Score": {"a":0,"b":7}}}',
    "deflaw toll sig=syri := forall x. forall y. (NrOfPassports(x) !="
    " NrOfPassports(y) & same(x,y) except NrOfPassports, Score)"
    " -> Score(x) = Score(y)",
    "deflaw capped sig=syri := forall x. Score(x) <= 10",
]


def run_all(commands, s=None):
    s = s or Session()
    replies = []
    for command in commands:
        s, reply = execute(s, command)
        replies.append(reply)
    return s, replies


def test_define_check_audit_flow():
    s, replies = run_all(SYRI_DEFS + [
        "check m1 toll",
        "audit m1 protected=NrOfPassports score=Score",
    ])
    assert all(not r.is_error for r in replies)
    verdict = replies[-2]
    assert verdict.kind == "verdict"
    assert verdict.payload["outcome"] == "fails"
    assert verdict.payload["witness"]["bindings"] == {"x": "a", "y": "b"}
    report = replies[-1]
    assert report.kind == "bias_report"
    assert report.payload["outcome"] == "biased"
    assert len(s.history) == 6


def test_implies_reply_and_why():
    s, replies = run_all(SYRI_DEFS + [
        "implies capped toll bound 2",
        "why",
    ])
    decision = replies[-2]
    assert decision.kind == "decision"
    assert decision.payload["status"] == "invalid_with_counterexample"
    witness = decision.payload["witness"]
    assert witness["kind"] == "structure"
    assert len(witness["individuals"]) == 2
    why = replies[-1]
    assert why.kind == "decision"
    assert why.detail == decision.detail
    assert "individual" in why.detail  # tabular form


def test_counterexample_reply_rechecks():
    """End to end: the embedded witness model really violates the property."""
    from lexdialog.parser import parse
    from lexdialog.evaluate import eval_fo
    from lexdialog.signature import parse_signature
    from lexdialog.structures import load_structure

    s, replies = run_all(SYRI_DEFS + ["implies capped toll bound 2"])
    witness = replies[-1].payload["witness"]
    payload = {k: v for k, v in witness.items() if k != "kind"}
    sig = parse_signature(
        "pred Employed\nfunc NrOfPassports 0..3\nfunc Score 0..10")
    model = load_structure(json.dumps(payload), sig)
    from lexdialog.transform import expand_macros
    toll = expand_macros(parse(
        "forall x. forall y. (NrOfPassports(x) != NrOfPassports(y)"
        " & same(x,y) except NrOfPassports, Score) -> Score(x) = Score(y)",
        sig), sig)
    capped = parse("forall x. Score(x) <= 10", sig)
    assert eval_fo(model, capped, {})
    assert not eval_fo(model, toll, {})


def test_error_isolation():
    s, _ = run_all(SYRI_DEFS)
    before = s
    s, reply = execute(s, "check nosuchcase toll")
    assert reply.is_error and reply.error_code == "unknown_name"
    assert s.same_state(before)
    assert len(s.history) == len(before.history) + 1

    s, reply = execute(s, "deflaw broken sig=syri := forall x. Wrong(x)")
    assert reply.is_error and reply.error_code == "parse_error"
    assert s.same_state(before)

    s, reply = execute(s, "frobnicate everything")
    assert reply.is_error and reply.error_code == "unknown_command"
    assert s.same_state(before)


def test_every_reply_has_nonempty_human_text():
    commands = SYRI_DEFS + [
        "list", "show toll", "show m1", "check m1 toll", "why",
        "transcript", "help", "bogus", "retract 9",
    ]
    _, replies = run_all(commands)
    assert all(r.human_text for r in replies)


def test_hypotheses_conjoin_onto_antecedent():
    defs = [
        "defsig pair := pred P; func f 0..1",
        "deflaw somewhere sig=pair := exists x. P(x)",
        "deflaw marked sig=pair := forall x. P(x) -> f(x) = 1",
    ]
    s, _ = run_all(defs)
    s, direct = execute(s, "implies somewhere marked")
    assert direct.payload["status"] == "invalid_with_counterexample"

    s, _ = execute(s, "assume forall x. f(x) = 1")
    s, hyp = execute(s, "implies somewhere marked")
    assert hyp.payload["status"] == "valid"

    # equivalent to deciding the conjoined antecedent with no hypotheses
    s2, _ = run_all(defs + [
        "deflaw conj sig=pair := (forall x. f(x) = 1) & (exists x. P(x))",
    ])
    s2, combined = execute(s2, "implies conj marked")
    assert combined.payload["status"] == hyp.payload["status"]

    s, _ = execute(s, "retract 1")
    s, back = execute(s, "implies somewhere marked")
    assert back.payload["status"] == "invalid_with_counterexample"


def test_assume_requires_unambiguous_signature():
    s, replies = run_all([
        "defsig a := atom p",
        "defsig b := atom q",
        "assume p | !p",
    ])
    assert replies[-1].is_error
    s, reply = execute(s, "assume sig=a := p | !p")
    assert not reply.is_error
    s, reply = execute(s, "assume sig=b := q")
    assert reply.error_code == "signature_mismatch"


def test_consistent_respects_hypotheses():
    s, _ = run_all([
        "defsig t := atom p",
        "deflaw law sig=t := F p",
        "assume G !p",
    ])
    s, reply = execute(s, "consistent law")
    assert reply.payload["status"] == "unsat"


def test_temporal_flow_and_trace_case():
    s, replies = run_all([
        "defsig road := atom drive; atom rest",
        'defcase day sig=road := {"trace": [["drive"], ["rest"]]}',
        "deflaw breaks sig=road := G (drive -> F rest)",
        "check day breaks",
        "consistent breaks",
    ])
    assert replies[-2].payload["outcome"] == "holds"
    assert replies[-1].payload["status"] == "sat"
    assert replies[-1].payload["witness"]["trace"] == [[]]


def test_load_from_files(tmp_path, syri_sig):
    sig_file = tmp_path / "syri.sig"
    sig_file.write_text(
        "pred Employed\nfunc NrOfPassports 0..3\nfunc Score 0..10\n")
    law_file = tmp_path / "toll.law"
    law_file.write_text("# equal scores for equal citizens\n"
                        "forall x. forall y. (NrOfPassports(x) !="
                        " NrOfPassports(y) & same(x, y) except NrOfPassports,"
                        " Score) -> Score(x) = Score(y)\n")
    case_file = tmp_path / "m1.case"
    case_file.write_text(json.dumps({
        "individuals": ["a", "b"],
        "predicates": {"Employed": ["a", "b"]},
        "functions": {"NrOfPassports": {"a": 1, "b": 2},
                      "Score": {"a": 0, "b": 7}},
    }))
    s, replies = run_all([
        f"load sig syri {sig_file}",
        f"load law toll {law_file} sig=syri",
        f"load case m1 {case_file} sig=syri",
        "check m1 toll",
    ])
    assert [r.is_error for r in replies] == [False] * 4
    assert replies[-1].payload["outcome"] == "fails"

    s, reply = execute(s, f"load law toll {law_file} sig=syri")
    assert reply.error_code == "name_taken"
    s, reply = execute(s, f"load law other {tmp_path / 'missing.law'} sig=syri")
    assert reply.error_code == "io_error"
    assert "missing.law" in reply.human_text


def test_transcript_replay_byte_identical():
    commands = SYRI_DEFS + [
        "check m1 toll",
        "audit m1 protected=NrOfPassports score=Score",
        "implies capped toll bound 2",
        "why",
        "check m1 nolaw",
        "list",
    ]
    assert replay(commands) == replay(commands)


def test_transcript_shapes():
    assert transcript(Session()) == ""
    s, _ = run_all(SYRI_DEFS[:1] + ["list", "help"])
    text = transcript(s)
    blocks = [b for b in text.split("\n\n") if b]
    assert len(blocks) == 3
    assert all(block.startswith("> ") for block in blocks)
