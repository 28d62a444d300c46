from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]

# (criterion, verdict, detail) in the order the acceptance tests ran
ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append((criterion, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  [{detail}]" if detail else ""))


@pytest.fixture(scope="session")
def root() -> Path:
    return ROOT


@pytest.fixture(scope="session")
def sweep():
    from _sweep import sweep as run

    return run()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
    passed = sum(ok for _, ok, _ in ACCEPTANCE)
    terminalreporter.write_line(f"{passed}/{len(ACCEPTANCE)} criteria pass")
