"""Shared fixtures and the acceptance-summary hook."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from hypotree import DecisionTable

UCI_DIR = Path(__file__).resolve().parent.parent / "data" / "uci"

T0_CSV = """\
f1,f2,f3,decision
0,0,0,1
0,1,1,1
1,0,1,2
1,1,0,2
"""


def make_t0() -> DecisionTable:
    """Four binary rows over f1..f3; decisions 1,1,2,2."""
    return DecisionTable(
        ("f1", "f2", "f3"),
        np.array([(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]),
        np.array([1, 1, 2, 2]),
    )


def make_xor() -> DecisionTable:
    return DecisionTable(
        ("f1", "f2"),
        np.array([(0, 0), (0, 1), (1, 0), (1, 1)]),
        np.array([0, 1, 1, 0]),
    )


@pytest.fixture
def t0() -> DecisionTable:
    return make_t0()


@pytest.fixture
def xor() -> DecisionTable:
    return make_xor()


@pytest.fixture
def t0_csv(tmp_path: Path) -> Path:
    path = tmp_path / "t0.csv"
    path.write_text(T0_CSV, encoding="utf-8")
    return path


def uci_table(name: str):
    """Load a fetched UCI table, or skip the test when the file is absent."""
    from hypotree import load_table

    path = UCI_DIR / f"{name}.csv"
    if not path.is_file():
        pytest.skip(f"{path} missing; run scripts/fetch_uci.py first")
    return load_table(path)


# --- acceptance criterion summary -----------------------------------------

_RESULTS: list[tuple[str, str, str]] = []


def record_criterion(number: int, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"criterion {number}: {status}" + (f" — {detail}" if detail else "")
    _RESULTS.append((f"{number:02d}", status, line))
    print(line)
    assert ok, line


def record_skip(number: int, reason: str) -> None:
    _RESULTS.append((f"{number:02d}", "SKIP", f"criterion {number}: SKIP — {reason}"))
    pytest.skip(reason)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, _, line in sorted(_RESULTS):
        terminalreporter.write_line(line)
