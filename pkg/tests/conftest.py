"""Shared fixtures and the acceptance-criteria summary section."""
import shutil
import subprocess
import sys
import time

import pytest

from gen3x1 import ORIGINAL_COLLATZ, THREE_X_PLUS_ONE  # noqa: F401  (re-exported for tests)


def pytest_configure(config):
    config._criterion_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def criterion_log(request):
    lines = request.config._criterion_lines

    def log(line: str) -> None:
        lines.append(line)
        print(line)

    return log


_CLI = [shutil.which("gen3x1")] if shutil.which("gen3x1") else [sys.executable, "-m", "gen3x1.cli"]


@pytest.fixture(scope="session")
def cli():
    """Run the installed command line; returns (stdout, stderr, rc, seconds)."""

    def run(*args: str):
        t0 = time.perf_counter()
        proc = subprocess.run([*_CLI, *args], capture_output=True, text=True)
        return proc.stdout, proc.stderr, proc.returncode, time.perf_counter() - t0

    return run


def md_data_rows(text: str):
    """Data rows of a pipe table as cell-string lists (header/rule rows dropped)."""
    rows = []
    for line in text.splitlines():
        if not line.startswith("|"):
            continue
        cells = [c.strip() for c in line.strip().strip("|").split("|")]
        first = cells[0].replace(",", "").replace("-", "").replace(".", "")
        if first.isdigit():
            rows.append(cells)
    return rows
