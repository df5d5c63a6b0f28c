import json

import pytest

from lexdialog import _kernel
from lexdialog.signature import relational, temporal
from lexdialog.structures import load_structure

_CRITERION_PREFIX = "test_criterion_"


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            name = report.nodeid.rsplit("::", 1)[-1]
            if name.startswith(_CRITERION_PREFIX):
                label = name[len(_CRITERION_PREFIX):].replace("_", " ")
                rows.append((label, outcome == "passed"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in rows:
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] {label}")


@pytest.fixture
def syri_sig():
    return relational(["Employed"],
                      {"NrOfPassports": (0, 3), "Score": (0, 10)})


def _case(scores):
    return json.dumps({
        "individuals": ["a", "b"],
        "predicates": {"Employed": ["a", "b"]},
        "functions": {"NrOfPassports": {"a": 1, "b": 2}, "Score": scores},
    })


@pytest.fixture
def m1(syri_sig):
    """Two citizens equal in everything but passports, scored apart."""
    return load_structure(_case({"a": 0, "b": 7}), syri_sig)


@pytest.fixture
def m1_fair(syri_sig):
    return load_structure(_case({"a": 0, "b": 0}), syri_sig)


@pytest.fixture
def pq_sig():
    return temporal(["p", "q"])


@pytest.fixture(params=["pure", "compiled"])
def backend(request):
    """Run a test under each kernel backend that is present."""
    if request.param == "compiled" and not _kernel.compiled_available():
        pytest.skip("compiled kernels not built")
    _kernel.force_pure(request.param == "pure")
    # programs cache results, not backend choices, but clear to be exact
    from lexdialog.evaluate import _relational_program, _temporal_program
    _relational_program.cache_clear()
    _temporal_program.cache_clear()
    yield request.param
    _kernel.force_pure(False)
