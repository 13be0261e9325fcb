"""Acceptance criteria at their stated parameters.

Each test prints a single ``criterion N: PASS/FAIL`` line (with capture
disabled, so it shows without ``-s``).  Running this file as a script does
the same without pytest.
"""
from __future__ import annotations

import sys
import time

import pytest

from degloci import cli

# (number, label, thunks, time budget in seconds)
CRITERIA = [
    (1, "type A det = ratio, lambda in 3x3 box, d=3, m_b=6, cap 10",
     [lambda: cli.suite_typea(3, 6, 10, 3)], 60),
    (2, "raising series = Pfaffian sum, r<=3, |lambda|<=6, k<=2, T=8",
     [lambda: cli.suite_lem4c(3, 2, 8, 6)], 120),
    (3, "pushforward/Segre consistency, e<=4, -e+1<=m<=4",
     [lambda: cli.suite_segre(4, 4, 8), lambda: cli.suite_pushbeta(4, 8)], 10),
    (4, "classical Schur Q limits, |lambda|<=6, n_x=3, cap 8",
     [lambda: cli.suite_k0schurq(6, 3, 8)], 60),
    (5, "k=0, b=0 slice equals symmetrized GP, |lambda|<=5, n_x=3, cap 8",
     [lambda: cli.suite_k0gp(5, 3, 8)], 60),
    (6, "GKM membership for (2,0), (3,0), (3,1) plus mutations",
     [lambda: cli.suite_gkm(2, 0, 8), lambda: cli.suite_gkm(3, 0, 8), lambda: cli.suite_gkm(3, 1, 8)], 120),
    (7, "vanishing and stability for (2,0), (3,1)",
     [lambda: cli.suite_stability(2, 0, 8), lambda: cli.suite_stability(3, 1, 8)], 60),
    (8, "localized generating functions, (3,1), ell in -2..2, cap 8",
     [lambda: cli.suite_locgen(3, 1, 8, 2)], 30),
    (9, "phi route = explicit route, SP^1(3), geometric and functional, cap 8",
     [lambda: cli.suite_schurpf(3, 1, 8, 3)], 120),
]


def run_criterion(thunks) -> tuple[bool, object, float]:
    t0 = time.perf_counter()
    for thunk in thunks:
        ok, witness = thunk()
        if not ok:
            return False, witness, time.perf_counter() - t0
    return True, None, time.perf_counter() - t0


def _line(num, label, ok, witness, elapsed, budget) -> str:
    verdict = "PASS" if ok else "FAIL"
    s = f"criterion {num}: {verdict} ({elapsed:.1f}s, budget {budget}s) {label}"
    if witness is not None:
        s += f" witness={witness}"
    return s


@pytest.mark.parametrize("num,label,thunks,budget", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, label, thunks, budget, capsys):
    ok, witness, elapsed = run_criterion(thunks)
    with capsys.disabled():
        print("\n" + _line(num, label, ok, witness, elapsed, budget))
    assert ok, witness
    assert elapsed < budget, f"took {elapsed:.1f}s"


if __name__ == "__main__":
    failed = 0
    for num, label, thunks, budget in CRITERIA:
        ok, witness, elapsed = run_criterion(thunks)
        ok = ok and elapsed < budget
        failed += not ok
        print(_line(num, label, ok, witness, elapsed, budget), flush=True)
    sys.exit(1 if failed else 0)
