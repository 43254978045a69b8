"""Shared fixtures: one cached run of every bundled config, plus a
terminal-summary hook that echoes the acceptance-criterion verdict lines
collected by tests/test_acceptance.py."""

import time

import pytest

from ldmd.harness import (ExperimentConfig, bundled_config_dir,
                          run_experiment)

# (criterion name, passed, detail) tuples appended by test_acceptance.py
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def bundled_reports(tmp_path_factory):
    """Run every bundled config once; returns {name: (report, seconds)}."""
    out_root = tmp_path_factory.mktemp("bundled_runs")
    reports = {}
    for path in sorted(bundled_config_dir().glob("*.json")):
        cfg = ExperimentConfig.from_file(path)
        t0 = time.perf_counter()
        rep = run_experiment(cfg, out_root / cfg.name)
        reports[cfg.name] = (rep, time.perf_counter() - t0)
    return reports


@pytest.fixture(scope="session")
def bundled_run_dir(tmp_path_factory, bundled_reports):
    """Directory holding the CSV artifacts of the bundled runs."""
    # bundled_reports already wrote them; recover the tmp root it used.
    root = tmp_path_factory.getbasetemp()
    for cand in root.glob("bundled_runs*"):
        return cand
    raise RuntimeError("bundled run directory missing")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{verdict}: {name} — {detail}")
