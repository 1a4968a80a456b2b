"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) to print the lines without pytest.
"""

import json
import subprocess
import sys
import time

import pytest

from jintegral.numerics import PrecisionConfig
from jintegral.verify import CRITERIA, run_criteria

PREC = PrecisionConfig()
TIME_LIMITS = {1: 60, 2: 300, 7: 120}


def evaluate(num):
    start = time.perf_counter()
    records, _ = run_criteria([num], PREC)
    elapsed = time.perf_counter() - start
    failures = [f"{r.name}: {r.measured:.3g} >= {r.tolerance:.0e}" for r in records if not r.passed]
    limit = TIME_LIMITS.get(num)
    if limit is not None and elapsed > limit:
        failures.append(f"runtime {elapsed:.1f}s > {limit}s")
    worst = max(
        (r for r in records if r.tolerance), key=lambda r: r.measured / r.tolerance, default=None
    )
    detail = f"{len(records)} checks, worst {worst.name} {worst.measured:.2e} (tol {worst.tolerance:.0e})"
    status = "FAIL" if failures else "PASS"
    line = f"{status} criterion {num} ({CRITERIA[num][0]}): {detail}, {elapsed:.1f}s"
    return line, failures


def cli_verify_report():
    out = subprocess.run(
        [sys.executable, "-m", "jintegral", "verify"], capture_output=True, text=True, check=False
    )
    report = json.loads(out.stdout)
    runtime = report.pop("runtime")
    return out.returncode, json.dumps(report, indent=2, sort_keys=True), runtime, report


def evaluate_determinism():
    code1, body1, _, rep1 = cli_verify_report()
    code2, body2, _, rep2 = cli_verify_report()
    failures = []
    if body1 != body2:
        failures.append("report bodies differ")
    if rep1["meta"]["determinism_hash"] != rep2["meta"]["determinism_hash"]:
        failures.append("determinism hashes differ")
    if code1 != 0 or code2 != 0:
        failures.append(f"verify exit codes {code1}, {code2}")
    status = "FAIL" if failures else "PASS"
    line = (
        f"{status} criterion 9 (deterministic reports): two `verify` runs, "
        f"{len(body1)} bytes each, hash {rep1['meta']['determinism_hash'][:12]}"
    )
    return line, failures


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, acceptance_log):
    line, failures = evaluate(num)
    acceptance_log[num] = line
    print(line)
    assert not failures, failures


def test_criterion_9_determinism(acceptance_log):
    line, failures = evaluate_determinism()
    acceptance_log[9] = line
    print(line)
    assert not failures, failures


if __name__ == "__main__":
    ok = True
    for num in sorted(CRITERIA):
        line, failures = evaluate(num)
        ok &= not failures
        print(line, flush=True)
    line, failures = evaluate_determinism()
    ok &= not failures
    print(line)
    sys.exit(0 if ok else 1)
