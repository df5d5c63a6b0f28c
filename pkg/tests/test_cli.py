import io
import json

import pytest

from lexdialog.cli import run

SIG = "pred Employed\nfunc NrOfPassports 0..3\nfunc Score 0..10\n"
TOLL = ("forall x. forall y. (NrOfPassports(x) != NrOfPassports(y)"
        " & same(x, y) except NrOfPassports, Score)"
        " -> Score(x) = Score(y)\n")
M1 = {
    "individuals": ["a", "b"],
    "predicates": {"Employed": ["a", "b"]},
    "functions": {"NrOfPassports": {"a": 1, "b": 2},
                  "Score": {"a": 0, "b": 7}},
}


@pytest.fixture
def files(tmp_path):
    (tmp_path / "syri.sig").write_text(SIG)
    (tmp_path / "toll.law").write_text(TOLL)
    (tmp_path / "m1.case").write_text(json.dumps(M1))
    fair = dict(M1, functions={"NrOfPassports": {"a": 1, "b": 2},
                               "Score": {"a": 0, "b": 0}})
    (tmp_path / "fair.case").write_text(json.dumps(fair))
    return tmp_path


def invoke(args):
    out, err = io.StringIO(), io.StringIO()
    code = run(args, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_audit_verb(files):
    code, out, err = invoke([
        "audit", str(files / "m1.case"), "--sig", str(files / "syri.sig"),
        "--protected", "NrOfPassports", "--score", "Score"])
    assert code == 0
    assert "biased" in out
    assert "a" in out and "b" in out


def test_audit_strict_exit_code(files):
    code, _, _ = invoke([
        "audit", str(files / "m1.case"), "--sig", str(files / "syri.sig"),
        "--protected", "NrOfPassports", "--score", "Score", "--strict"])
    assert code == 2
    code, _, _ = invoke([
        "audit", str(files / "fair.case"), "--sig", str(files / "syri.sig"),
        "--protected", "NrOfPassports", "--score", "Score", "--strict"])
    assert code == 0


def test_implies_reflexive(files):
    code, out, _ = invoke([
        "implies", str(files / "toll.law"), str(files / "toll.law"),
        "--sig", str(files / "syri.sig"), "--bound", "2"])
    assert code == 0
    assert "valid" in out


def test_check_missing_file_is_usage_error(files):
    code, out, err = invoke([
        "check", str(files / "missing.case"), str(files / "toll.law"),
        "--sig", str(files / "syri.sig")])
    assert code == 1
    assert "missing.case" in err
    assert out == ""


def test_check_json_round_trips(files):
    code, out, _ = invoke([
        "check", str(files / "m1.case"), str(files / "toll.law"),
        "--sig", str(files / "syri.sig"), "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "verdict"
    assert payload["payload"]["outcome"] == "fails"
    assert payload["payload"]["witness"]["bindings"] == {"x": "a", "y": "b"}

    # semantic equality with the in-memory reply
    from lexdialog.session import Session, execute
    s = Session()
    for cmd in [f"load sig s {files / 'syri.sig'}",
                f"load case case {files / 'm1.case'} sig=s",
                f"load law law {files / 'toll.law'} sig=s"]:
        s, reply = execute(s, cmd)
        assert not reply.is_error
    _, reply = execute(s, "check case law")
    assert payload == reply.to_json()


def test_budget_exhaustion_exit_code(files):
    code, _, err = invoke([
        "consistent", str(files / "toll.law"), "--sig",
        str(files / "syri.sig"), "--budget", "1", "--bound", "4"])
    # budget of one candidate model cannot even finish size 1... unless the
    # first candidate satisfies; the bias law holds there, so force a search
    (files / "hard.law").write_text("exists x. Score(x) = 9\n")
    code, _, err = invoke([
        "consistent", str(files / "hard.law"), "--sig",
        str(files / "syri.sig"), "--budget", "3"])
    assert code == 3
    assert "budget" in err


def test_strict_negative_decision(files):
    (files / "no.law").write_text("exists x. Score(x) = 11\n")
    code, out, _ = invoke([
        "consistent", str(files / "no.law"), "--sig", str(files / "syri.sig"),
        "--bound", "2", "--strict"])
    assert code == 2
    assert "unsat" in out


def test_usage_error(files):
    code, _, _ = invoke(["checkk", "x"])
    assert code == 1
    code, _, _ = invoke([])
    assert code == 1


def test_repl_reads_stdin_writes_transcript(files, monkeypatch, capsys):
    script = "\n".join([
        f"load sig syri {files / 'syri.sig'}",
        f"load law toll {files / 'toll.law'} sig=syri",
        f"load case m1 {files / 'm1.case'} sig=syri",
        "check m1 toll",
        "exit",
    ]) + "\n"
    monkeypatch.setattr("sys.stdin", io.StringIO(script))
    transcript_path = files / "session.txt"
    code = run(["repl", "--transcript", str(transcript_path)])
    assert code == 0
    text = transcript_path.read_text()
    assert sum(line.startswith("> ") for line in text.splitlines()) == 4
    assert "violates" in text
    captured = capsys.readouterr()
    assert "violates" in captured.out
