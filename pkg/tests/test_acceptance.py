"""Acceptance gate: one PASS/FAIL line per criterion, printed in the terminal summary.

Thresholds come from ``abcoupling.verification`` and are pinned again here so
that loosening them there makes this file fail.
"""

from __future__ import annotations

import subprocess
import sys
import time

import pytest

from abcoupling import verification
from conftest import ACCEPTANCE_LINES

PINNED = {
    "1a": 0.02, "1b": 0.03, "2": 1e-9, "3": 1e-10, "4a": 1.0, "4b": 0.05, "4c": 0.01,
    "5": 1e-8, "6a": 1e-6, "6b": 1e-10, "7": 1e-9, "8a": 1e-10, "8b": 1e-10, "8c": 1e-10, "8d": 1e-12,
}
RUNTIME = {"microwave_scale": 1.0, "normalization": 10.0, "wp_oracle": 10.0, "we_oracle": 60.0}


@pytest.fixture(scope="module")
def outcomes():
    out = {}
    for name, check in verification.CRITERIA.items():
        start = time.perf_counter()
        results = check()
        out[name] = (results, time.perf_counter() - start)
    return out


def _gate(number: int, name: str, outcomes) -> None:
    results, elapsed = outcomes[name]
    budget = RUNTIME.get(name)
    ok = all(r.passed and r.threshold == PINNED[r.key] and r.measured <= PINNED[r.key] for r in results)
    ok = ok and (budget is None or elapsed < budget)
    parts = "; ".join(f"{r.key} {r.measured:.2e} <= {PINNED[r.key]:.0e}" for r in results)
    timing = f" [{elapsed:.1f}s < {budget:g}s]" if budget else ""
    ACCEPTANCE_LINES.append(f"criterion {number} {name:<18} {'PASS' if ok else 'FAIL'}  {parts}{timing}")
    assert ok, parts + timing


def test_criterion_1_microwave_scale(outcomes):
    _gate(1, "microwave_scale", outcomes)


def test_criterion_2_normalization(outcomes):
    _gate(2, "normalization", outcomes)


def test_criterion_3_wp_oracle(outcomes):
    _gate(3, "wp_oracle", outcomes)


def test_criterion_4_small_core(outcomes):
    _gate(4, "small_core", outcomes)


def test_criterion_5_we_oracle(outcomes):
    _gate(5, "we_oracle", outcomes)


def test_criterion_6_l_linearity(outcomes):
    _gate(6, "l_linearity", outcomes)


def test_criterion_7_gauge_invariance(outcomes):
    _gate(7, "gauge_invariance", outcomes)


def test_criterion_8_special_functions(outcomes):
    _gate(8, "special_functions", outcomes)


def _verify(*extra: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "abcoupling.cli", "verify", "--jobs", "4", *extra],
        capture_output=True, check=False,
    )


def test_criterion_9_determinism(tmp_path):
    first = _verify()
    second = _verify()
    # tolerances live in the checks: a loose config tolerance on a coarse mode changes nothing
    tampered = tmp_path / "tampered.ini"
    tampered.write_text("[modes]\nmodes = 1 0 1\n[tolerance]\nrel = 1e-2\nabs = 1e-2\nmax_depth = 1\n")
    third = _verify("--config", str(tampered))
    ok = (
        first.returncode == second.returncode == third.returncode == 0
        and first.stdout == second.stdout == third.stdout
        and b"FAIL" not in first.stdout
    )
    ACCEPTANCE_LINES.append(
        f"criterion 9 {'determinism':<18} {'PASS' if ok else 'FAIL'}  "
        f"{len(first.stdout)}-byte reports identical across two runs and a tampered-tolerance run"
    )
    assert ok, (first.stderr, second.stderr, third.stderr)
