"""Acceptance suite: one test per exit criterion, at the stated sizes,
tolerances and runtime bounds. A summary line per criterion is printed at
the end of the pytest run (see conftest)."""

import json
import random
import time

from gen import random_structure, random_trace, relational_sentence, temporal_formula
from oracles import brute_sat_fo, brute_sat_ltlf, naive_eval_fo, naive_eval_ltlf
from lexdialog.bias import audit, audit_agrees_with_evaluator, bias_formula
from lexdialog.engine import (INVALID, SAT, UNSAT, VALID, implies,
                              sat_fo_bounded, sat_ltlf, valid_ltlf)
from lexdialog.evaluate import check, eval_fo, eval_ltlf, recheck
from lexdialog.formula import Not, atom_names, children
from lexdialog.parser import parse
from lexdialog.printer import render
from lexdialog.session import Session, execute, replay, transcript
from lexdialog.signature import relational, temporal
from lexdialog.structures import Trace, load_structure
from lexdialog.transform import expand_macros, nnf

M1_JSON = json.dumps({
    "individuals": ["a", "b"],
    "predicates": {"Employed": ["a", "b"]},
    "functions": {"NrOfPassports": {"a": 1, "b": 2},
                  "Score": {"a": 0, "b": 7}},
})
M1_FAIR_JSON = M1_JSON.replace('"b": 7', '"b": 0')


def node_count(f) -> int:
    return 1 + sum(node_count(c) for c in children(f))


def temporal_corpus(n=500, seed=20240501):
    rng = random.Random(seed)
    corpus = []
    while len(corpus) < n:
        f = temporal_formula(rng, ["p", "q"], rng.randint(1, 8))
        assert node_count(f) <= 8
        corpus.append(f)
    return corpus


def relational_corpus(n=200, seed=20240502):
    sig = relational(["P", "Q"], {"f": (0, 1)})
    rng = random.Random(seed)
    return sig, [relational_sentence(rng, sig, max_qr=2) for _ in range(n)]


def test_criterion_syri_end_to_end(syri_sig):
    """Bias sentence + fixture audit: biased exactly (a,b) and (b,a);
    equal scores flip the outcome. Under one second."""
    start = time.monotonic()
    m1 = load_structure(M1_JSON, syri_sig)
    law = bias_formula(syri_sig, "NrOfPassports", "Score")

    verdict = check(m1, law)
    assert not verdict.holds

    report = audit(m1, "NrOfPassports", "Score")
    assert report.outcome == "biased"
    assert [(v.x, v.y) for v in report.violations] == [("a", "b"), ("b", "a")]
    assert [(v.score_x, v.score_y) for v in report.violations] == [(0, 7), (7, 0)]
    assert audit_agrees_with_evaluator(m1, report)

    fair = load_structure(M1_FAIR_JSON, syri_sig)
    fair_report = audit(fair, "NrOfPassports", "Score")
    assert fair_report.outcome == "unbiased"
    assert check(fair, law).holds

    elapsed = time.monotonic() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_temporal_oracle_suite():
    """>= 500 formulas, <= 2 atoms, <= 8 nodes: engine agrees with the
    brute-force oracle over all traces up to length 5; every sat witness
    re-checks and is length-minimal. Under 60 seconds."""
    start = time.monotonic()
    disagreements = 0
    witnesses = 0
    for f in temporal_corpus():
        result = sat_ltlf(f)
        oracle = brute_sat_ltlf(f, sorted(atom_names(f)), 5)
        if result.status == SAT:
            witnesses += 1
            # witness re-checks under the evaluator and the oracle semantics
            assert eval_ltlf(result.witness, 0, f)
            assert naive_eval_ltlf(result.witness.states, 0, f)
            if oracle is not None:
                # canonical: length-minimal, and in fact the oracle's first
                if result.witness != oracle:
                    disagreements += 1
            else:
                # only satisfiable beyond the oracle horizon
                if len(result.witness) <= 5:
                    disagreements += 1
        else:
            assert result.status == UNSAT
            if oracle is not None:
                disagreements += 1
    assert disagreements == 0
    assert witnesses > 0
    elapsed = time.monotonic() - start
    assert elapsed < 60.0, f"took {elapsed:.2f}s"


def test_criterion_relational_oracle_suite():
    """>= 200 sentences, <= 2 predicates, one 0..1 function, rank <= 2:
    engine status at bound 3 equals brute-force enumeration at bound 3.
    Under 120 seconds."""
    start = time.monotonic()
    sig, corpus = relational_corpus()
    disagreements = 0
    for f in corpus:
        engine = sat_fo_bounded(f, sig, bound=3)
        oracle = brute_sat_fo(expand_macros(f, sig), sig, 3)
        if engine.status == SAT:
            if oracle is None:
                disagreements += 1
            assert eval_fo(engine.witness, expand_macros(f, sig), {})
            assert naive_eval_fo(engine.witness, expand_macros(f, sig), {})
        else:
            if oracle is not None:
                disagreements += 1
    assert disagreements == 0
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"took {elapsed:.2f}s"


def test_criterion_duality_and_reflexivity():
    """valid(f) iff not sat(not f) across the temporal corpus; implies(f, f)
    valid for 100 random sentences of each layer. Zero failures."""
    for f in temporal_corpus(n=500, seed=20240501):
        assert (valid_ltlf(f).status == VALID) == (
            sat_ltlf(Not(f)).status == UNSAT)

    rng = random.Random(20240503)
    for _ in range(100):
        f = temporal_formula(rng, ["p", "q"], rng.randint(1, 8))
        assert implies(f, f).status == VALID

    # vocabulary kept small enough that the completeness bound (4) is
    # reachable and the reflexive sweep stays complete, hence plain valid
    sig = relational(["P"], {"f": (0, 1)})
    for _ in range(100):
        f = relational_sentence(rng, sig, max_qr=1)
        assert implies(f, f, sig).status == VALID


def test_criterion_curated_validities(pq_sig):
    """The four pinned judgments, every one confirmed by the oracle."""
    gp_fp = parse("G p -> F p", pq_sig)
    assert valid_ltlf(gp_fp).status == VALID
    assert brute_sat_ltlf(Not(gp_fp), ["p"], 5) is None

    fp_gp = parse("F p -> G p", pq_sig)
    result = valid_ltlf(fp_gp)
    assert result.status == INVALID
    expected = Trace((frozenset(), frozenset({"p"})))
    assert result.witness == expected
    assert brute_sat_ltlf(Not(fp_gp), ["p"], 5) == expected

    contradiction = parse("p & !p", pq_sig)
    assert sat_ltlf(contradiction).status == UNSAT
    assert brute_sat_ltlf(contradiction, ["p"], 5) is None

    globally_but_not = parse("G p & F !p", pq_sig)
    assert sat_ltlf(globally_but_not).status == UNSAT
    assert brute_sat_ltlf(globally_but_not, ["p"], 5) is None


def test_criterion_parser_round_trip_and_nnf():
    """1000 render/parse round-trips and 500 nnf-preservation pairs,
    zero failures."""
    from gen import renderable_formula
    rng = random.Random(20240504)
    sigs = [
        relational(["Employed"], {"NrOfPassports": (0, 3), "Score": (0, 10)}),
        relational(["A", "B"], {"g": (-1, 1)}),
        relational([], {"f": (0, 2)}),
        temporal(["p", "q"]),
        temporal(["drive", "rest", "log"]),
    ]
    for k in range(1000):
        sig = sigs[k % len(sigs)]
        f = renderable_formula(rng, sig, max_nodes=12)
        assert parse(render(f), sig) == f

    rsig = relational(["A"], {"g": (0, 2)})
    for k in range(500):
        if k % 2 == 0:
            f = temporal_formula(rng, ["p", "q"], rng.randint(1, 9))
            t = random_trace(rng, ["p", "q"], 5)
            assert eval_ltlf(t, 0, f) == eval_ltlf(t, 0, nnf(f))
        else:
            f = expand_macros(
                relational_sentence(rng, rsig, max_qr=2), rsig)
            m = random_structure(rng, rsig, 3)
            assert eval_fo(m, f, {}) == eval_fo(m, nnf(f), {})


def test_criterion_witness_self_validation(syri_sig):
    """Every witness any procedure emits re-checks under the evaluator."""
    emitted = 0
    rechecked = 0

    for f in temporal_corpus(n=150, seed=20240505):
        r = sat_ltlf(f)
        if r.witness is not None:
            emitted += 1
            rechecked += bool(eval_ltlf(r.witness, 0, f))
        v = valid_ltlf(f)
        if v.witness is not None:
            emitted += 1
            rechecked += bool(not eval_ltlf(v.witness, 0, f))

    sig, corpus = relational_corpus(n=80, seed=20240506)
    for f in corpus:
        r = sat_fo_bounded(f, sig, bound=3)
        if r.witness is not None:
            emitted += 1
            rechecked += bool(eval_fo(r.witness, expand_macros(f, sig), {}))

    rng = random.Random(20240507)
    law = bias_formula(syri_sig, "NrOfPassports", "Score")
    for _ in range(60):
        m = random_structure(rng, syri_sig, 4)
        v = check(m, law)
        if v.witness is not None:
            emitted += 1
            rechecked += bool(recheck(m, law, v))
        report = audit(m, "NrOfPassports", "Score")
        if report.violations:
            emitted += 1
            rechecked += bool(audit_agrees_with_evaluator(m, report))

    assert emitted > 0
    assert rechecked == emitted  # 100 percent


SCRIPTS = [
    [
        "defsig syri := pred Employed; func NrOfPassports 0..3; func Score 0..10",
        f"defcase m1 sig=syri := {M1_JSON}",
        "deflaw toll sig=syri := forall x. forall y. (NrOfPassports(x) != "
        "NrOfPassports(y) & same(x,y) except NrOfPassports, Score) -> "
        "Score(x) = Score(y)",
        "check m1 toll",
        "audit m1 protected=NrOfPassports score=Score",
        "why",
    ],
    [
        "defsig road := atom drive; atom rest",
        'defcase shift sig=road := {"trace": [["drive"], ["drive"], ["rest"]]}',
        "deflaw breaks sig=road := G (drive -> F rest)",
        "deflaw endless sig=road := G drive",
        "check shift breaks",
        "check shift endless",
        "implies breaks endless",
        "why",
    ],
    [
        "defsig t := atom p; atom q",
        "deflaw pq sig=t := p U q",
        "consistent pq",
        "assume G !q",
        "consistent pq",
        "retract 1",
        "consistent pq",
    ],
    [
        "defsig r := pred P; func f 0..1",
        "deflaw somewhere sig=r := exists x. P(x)",
        "deflaw marked sig=r := forall x. P(x) -> f(x) = 1",
        "implies somewhere marked bound 2",
        "why",
        "list",
        "show somewhere",
    ],
    [
        "help",
        "list",
        "defsig ugly := atom a",
        "deflaw bad sig=ugly := a U",       # parse error
        "deflaw ok sig=ugly := a U a",
        "check missing ok",                 # unknown name
        "consistent ok",
        "transcript",
    ],
]


def _scripts20():
    scripts = list(SCRIPTS)
    rng = random.Random(20240508)
    while len(scripts) < 20:
        base = scripts[rng.randrange(len(SCRIPTS))]
        cut = rng.randint(2, len(base))
        scripts.append(base[:cut] + ["list"])
    return scripts


def test_criterion_dialogue_replay():
    """20 scripted sessions replay byte-identically; failing commands
    change nothing but the history."""
    for script in _scripts20():
        assert replay(script) == replay(script)

    s = Session()
    for command in SCRIPTS[0][:3]:
        s, reply = execute(s, command)
        assert not reply.is_error
    snapshot = s
    for bad in ["check nosuchcase toll", "deflaw toll sig=syri := true",
                "audit m1 protected=Ghost score=Score", "retract 5",
                "garbage in", "show nothing"]:
        s, reply = execute(s, bad)
        assert reply.is_error, bad
        assert s.same_state(snapshot)
    assert len(s.history) == len(snapshot.history) + 6
