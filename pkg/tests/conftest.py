"""Shared fixtures and the acceptance summary printer."""

from __future__ import annotations

import re
from pathlib import Path

import pytest

from wrec import dsl, requirements_from_pairs

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_PATH = REPO_ROOT / "fixtures" / "pc.wrec"

_ACCEPTANCE_PATTERN = re.compile(r"test_acceptance\.py::test_(p\d+)")
_acceptance_results: dict[str, bool] = {}


@pytest.fixture(scope="session")
def fixture_source() -> str:
    return FIXTURE_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def kb(fixture_source):
    return dsl.parse(fixture_source)


@pytest.fixture()
def full_requirements():
    """The six-requirement scenario from the bundled example, entry order."""
    return requirements_from_pairs(
        [
            ("usage", "Scientific"),
            ("eefficiency", "high"),
            ("maxprice", 1700),
            ("country", "Austria"),
            ("mb", "MBSilver"),
            ("cpu", "CPUD"),
        ]
    )


def pytest_runtest_logreport(report):
    match = _ACCEPTANCE_PATTERN.search(report.nodeid)
    if not match:
        return
    criterion = match.group(1).upper()
    if report.when == "call":
        _acceptance_results[criterion] = report.passed
    elif report.when == "setup" and report.failed:
        _acceptance_results[criterion] = False


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_acceptance_results):
        verdict = "PASS" if _acceptance_results[criterion] else "FAIL"
        terminalreporter.write_line(f"{criterion}: {verdict}")
