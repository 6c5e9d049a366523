"""End-to-end acceptance checks; each prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` (the lines are also
shown without ``-s``).
"""

import math
import time

import numpy as np
import pytest

from bilevel import cli, data_io, dca, oracle, verify
from bilevel.dca import SolverParams
from bilevel.gauges import EuclideanBall, make_gauge

MODEL1_OPT = 1179.76
MODEL2_OPT = 1035.29


@pytest.fixture
def report(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
    return emit


def _restart_runs(model, data, seed=7):
    params = SolverParams(restarts=10, seed=seed, record_trace=False)
    start = time.perf_counter()
    best = dca.solve(model, data, 3, EuclideanBall(2), params, init="kmeans", threads=1)
    return best, time.perf_counter() - start


def test_criterion_1_brute_force(eil76, report, capsys):
    start = time.perf_counter()
    g = EuclideanBall(2)
    r1 = oracle.brute_force(1, eil76.points, 3, g, threads=1)
    r2 = oracle.brute_force(2, eil76.points, 3, g, threads=1)
    elapsed = time.perf_counter() - start
    code = cli.main(["brute", "--model", "1", "--k", "3", "--input", "eil76", "--threads", "1"])
    out = capsys.readouterr().out
    cli_cost = float(out.split("cost=")[1].split()[0])
    ok = (abs(r1.cost - MODEL1_OPT) <= 0.01 and abs(r2.cost - MODEL2_OPT) <= 0.01
          and r1.count == 70_300 and r2.count == 1_282_975 and elapsed < 60
          and code == 0 and abs(cli_cost - MODEL1_OPT) <= 0.01)
    report(1, ok, f"EIL76 brute force model I {r1.cost:.4f} over {r1.count:,} subsets, "
                  f"model II {r2.cost:.4f} over {r2.count:,} subsets ({elapsed:.1f}s)")
    assert ok


def test_criterion_2_model1_quality(eil76, report):
    best, elapsed = _restart_runs(1, eil76.points)
    costs = [r.discrete_cost for r in best.runs]
    per_restart = elapsed / len(costs)
    ok = (len(costs) == 10 and best.discrete_cost <= 1204.35
          and best.discrete_cost <= MODEL1_OPT * 1.021 and min(costs) <= 1195
          and per_restart < 10)
    report(2, ok, f"model I best {best.discrete_cost:.2f} "
                  f"({100 * (best.discrete_cost / MODEL1_OPT - 1):.2f}% above optimum), "
                  f"{sum(c <= 1195 for c in costs)}/10 runs <= 1195, "
                  f"{per_restart:.2f}s per restart")
    assert ok


def test_criterion_3_model2_quality(eil76, report):
    best, elapsed = _restart_runs(2, eil76.points)
    costs = [r.discrete_cost for r in best.runs]
    per_restart = elapsed / len(costs)
    ok = (len(costs) == 10 and best.discrete_cost <= 1119.50
          and best.discrete_cost <= MODEL2_OPT * 1.082 and min(costs) <= 1060
          and per_restart < 10)
    report(3, ok, f"model II best {best.discrete_cost:.2f} "
                  f"({100 * (best.discrete_cost / MODEL2_OPT - 1):.2f}% above optimum), "
                  f"{sum(c <= 1060 for c in costs)}/10 runs <= 1060, "
                  f"{per_restart:.2f}s per restart")
    assert ok


def test_criterion_4_global_convergence(report):
    g = EuclideanBall(2)
    small = dca.convergence_study(1, data_io.eleven_node_layout().points, 2, g)
    # the 15-node study starts three centers: Model II with k = 2
    large = dca.convergence_study(2, data_io.fifteen_node_layout().points, 2, g)
    ok = (small.starts == 55 and small.rate == 1.0
          and large.starts == 455 and large.rate >= 0.80)
    report(4, ok, f"11 nodes: {small.hits}/{small.starts} starts reach the optimum; "
                  f"15 nodes: {large.hits}/{large.starts} ({100 * large.rate:.1f}%, need >= 80%)")
    assert ok


def test_criterion_5_property_suite(report):
    start = time.perf_counter()
    reports = verify.run_suites()
    elapsed = time.perf_counter() - start
    failed = [r.name for r in reports if not r.ok]
    checks = sum(r.checks for r in reports)
    ok = not failed and elapsed < 30
    report(5, ok, f"{len(reports) - len(failed)}/{len(reports)} suites, {checks} checks, "
                  f"{elapsed:.1f}s" + (f"; failing: {failed}" if failed else ""))
    assert ok


def test_criterion_6_oracle_cross_validation(report):
    rng = np.random.default_rng(2024)
    matches = below = 0
    for i in range(50):
        model = 1 + i % 2
        gname = ("l2", "l1")[(i // 2) % 2]
        m, n = int(rng.integers(4, 13)), int(rng.integers(1, 4))
        k = min(int(rng.integers(1, 4)), m - (model == 2))
        data = rng.uniform(0, 100, size=(m, n))
        g = make_gauge(gname, n)
        exact = oracle.brute_force(model, data, k, g).cost
        params = SolverParams(restarts=10, seed=i, record_trace=False)
        found = dca.solve(model, data, k, g, params, init="random", threads=1).discrete_cost
        below += found < exact - 1e-9 * max(1.0, exact)
        matches += found <= exact + 1e-9 * max(1.0, exact)
    ok = below == 0 and matches >= 30
    report(6, ok, f"{matches}/50 instances match brute force, {below} below it")
    assert ok


def test_criterion_7_scale(report):
    ds = data_io.gen_uniform(10000, 2, seed=0)
    g = EuclideanBall(2)
    times = {}
    for model in (1, 2):
        start = time.perf_counter()
        res = dca.solve(model, ds.points, 6, g, SolverParams(record_trace=False), threads=1)
        times[model] = time.perf_counter() - start
        assert math.isfinite(res.discrete_cost)
    ok = all(t < 120 for t in times.values())
    report(7, ok, f"10000 points, k=6: model I {times[1]:.1f}s, model II {times[2]:.1f}s "
                  f"(limit 120s each)")
    assert ok
