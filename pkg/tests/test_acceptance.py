"""Acceptance criteria, each run cold (memo caches cleared) against its time limit.

Every test prints one ``CRITERION n: PASS|FAIL`` line, visible even under
pytest's output capture.
"""
import random
import time
from collections import Counter
from fractions import Fraction as Fr

import pytest

from conftest import clear_all_caches
from rhombic.algebra import alpha, beta, delta, q, u
from rhombic.asep import (
    ChainSpec, mc_simulate, random_params, stationary_exact, tableaux_distribution,
    verify_ansatz, verify_stationarity_symbolic,
)
from rhombic.moments import cross_check, positive_coefficients
from rhombic.tableaux import (
    all_types, enumerate_tableaux, iter_weights, partition_function, q1_closed_form,
    tableau_count_formula, type_generating_function, weight_degree,
)
from rhombic.transfer import DEFAULT_RANGES, bracket, verify_all

HALF = {"alpha": Fr(1, 2), "beta": Fr(1, 2), "gamma": Fr(1, 2), "delta": Fr(1, 2),
        "q": Fr(1, 3), "u": Fr(1)}


@pytest.fixture
def criterion(capsys):
    """Yield a recorder; the test calls it once with its outcome."""
    clear_all_caches()
    start = time.perf_counter()

    def record(number, ok, limit, detail=""):
        elapsed = time.perf_counter() - start
        timely = limit is None or elapsed < limit
        verdict = "PASS" if ok and timely else "FAIL"
        bound = f" < {limit}s" if limit is not None else ""
        with capsys.disabled():
            print(f"\nCRITERION {number}: {verdict} ({elapsed:.2f}s{bound}) {detail}")
        assert ok, detail
        assert timely, f"took {elapsed:.2f}s, limit {limit}s"

    return record


def test_criterion_01_type_21_weights(criterion):
    got = Counter(t.weight().to_polynomial() for t in enumerate_tableaux((2, 1)))
    want = Counter([alpha * beta * u, alpha * delta * q, alpha * u * q, delta * q ** 2])
    criterion(1, got == want, 1, f"{sum(got.values())} tableaux")


def test_criterion_02_counting(criterion):
    counts = {(n, r): sum(sum(1 for _ in iter_weights(tau)) for tau in all_types(n, r))
              for n in range(1, 7) for r in range(n + 1)}
    bad = [(key, c) for key, c in counts.items() if c != tableau_count_formula(*key)]
    criterion(2, not bad and counts[(6, 0)] == 2_949_120, 60,
              f"{sum(counts.values())} tableaux enumerated, mismatches={bad}")


def test_criterion_03_q1_closed_form(criterion):
    bad = [(n, r) for n in range(1, 6) for r in range(n + 1)
           if partition_function(n, r).substitute({"q": 1, "u": 1}) != q1_closed_form(n, r)]
    criterion(3, not bad, 30, f"mismatches={bad}")


def test_criterion_04_bracket_vs_tableaux(criterion):
    types = [t for n in range(1, 6) for r in range(n + 1) for t in all_types(n, r)]
    bad = [t for t in types if bracket(t) != type_generating_function(t).substitute({"u": 1})]
    criterion(4, not bad and len(types) == sum(3 ** n for n in range(1, 6)), 60,
              f"{len(types)} types, mismatches={bad[:5]}")


def test_criterion_05_ansatz(criterion):
    rep = verify_ansatz(6)
    criterion(5, rep["pass"], 120, f"checked={rep['checked']}, counterexamples={len(rep['counterexamples'])}")


def test_criterion_06_identity_suite(criterion):
    reps = verify_all(DEFAULT_RANGES)
    failed = [r.name for r in reps if not r.passed]
    total = sum(r.checked for r in reps)
    criterion(6, not failed and len(reps) == 12, 120, f"{len(reps)} identities, {total} checks, failed={failed}")


def test_criterion_07_stationary(criterion):
    bad = []
    for n in range(1, 5):
        for r in range(n + 1):
            rng = random.Random(7000 + 10 * n + r)
            for _ in range(3):
                s = ChainSpec(n, r, random_params(rng))
                if stationary_exact(s).as_dict() != tableaux_distribution(s).as_dict():
                    bad.append(("point", n, r, s.params))
    for n in range(1, 4):
        for r in range(n + 1):
            if not verify_stationarity_symbolic(n, r)["pass"]:
                bad.append(("balance", n, r))
    criterion(7, not bad, 60, f"failures={bad}")


def test_criterion_08_moment_routes(criterion):
    reports = {(n, r): cross_check(n, r, trials=5, seed=8000 + 10 * n + r)
               for n, r in [(2, 1), (3, 1), (3, 2), (4, 1)]}
    unequal = {key: sum(not t["equal"] for t in rep["trials"]) for key, rep in reports.items()}
    ok = all(v == 0 for v in unequal.values()) and all(rep["positivity"] for rep in reports.values())
    example = reports[(2, 1)]["trials"][0]
    criterion(8, ok, 60, f"unequal trials per (N,r)={unequal}; e.g. det={example['det']} "
                         f"tableaux={example['tableaux']}")


def test_criterion_09_degree_and_positivity(criterion):
    bad_degree = []
    for n in range(1, 6):
        for r in range(n + 1):
            deg = weight_degree(n, r)
            for tau in all_types(n, r):
                if any(sum(e[:6]) != deg for e in iter_weights(tau)):
                    bad_degree.append(tau)
    bad_pos = [(n, r) for n in range(1, 6) for r in range(n + 1)
               if not positive_coefficients(partition_function(n, r, track_xi=True))]
    criterion(9, not bad_degree and not bad_pos, None, f"degree={bad_degree[:5]}, positivity={bad_pos}")


def test_criterion_10_monte_carlo(criterion):
    tv21 = mc_simulate(ChainSpec(2, 1, HALF), 2_000_000, seed=42)["tv_distance"]
    tv31 = mc_simulate(ChainSpec(3, 1, HALF), 10_000_000, seed=42)["tv_distance"]
    criterion(10, tv21 < 0.02 and tv31 < 0.02, 60, f"tv(2,1)={tv21:.5f}, tv(3,1)={tv31:.5f}")
