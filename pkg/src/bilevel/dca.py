"""DCA inner loop and the penalty/smoothing continuation for both models."""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import model1, model2, oracle
from .gauges import Gauge
from .init import initial_centers


class NonFiniteIterate(FloatingPointError):
    pass


class ModelOps(NamedTuple):
    problem: type
    exact: Callable
    smoothed: Callable
    subgradient: Callable
    conjugate_step: Callable
    total_center: Callable
    parts: Callable


MODELS = {
    1: ModelOps(
        model1.Model1Problem,
        model1.exact_objective,
        model1.smoothed_objective,
        model1.h_mu_subgradient,
        model1.conjugate_step,
        model1.total_center_model1,
        model1.exact_parts,
    ),
    2: ModelOps(
        model2.Model2Problem,
        model2.exact_objective2,
        model2.smoothed_objective2,
        model2.h_mu_subgradient2,
        model2.conjugate_step2,
        model2.total_center_model2,
        model2.exact_parts2,
    ),
}


def model_ops(model: int) -> ModelOps:
    try:
        return MODELS[model]
    except KeyError:
        raise ValueError(f"model must be 1 or 2, got {model!r}")


@dataclass(frozen=True)
class SolverParams:
    mu0: float = 16.0
    lambda0: float = 0.01
    sigma1: float = 160.0
    sigma2: float = 0.5
    mu_min: float = 1e-6
    max_inner: int = 200
    step_tol: float = 1e-6
    restarts: int = 1
    seed: int = 0
    lambda_cap: float = 1e12
    record_trace: bool = True

    def __post_init__(self):
        if not self.sigma1 > 1:
            raise ValueError("sigma1 must exceed 1")
        if not 0 < self.sigma2 < 1:
            raise ValueError("sigma2 must lie in (0, 1)")
        if not self.mu0 > self.mu_min > 0:
            raise ValueError("need mu0 > mu_min > 0")
        if not self.lambda0 > 0:
            raise ValueError("lambda0 must be positive")
        if self.max_inner < 1 or self.restarts < 1:
            raise ValueError("max_inner and restarts must be positive")

    def schedule(self):
        """``(lam, mu)`` for every continuation stage."""
        lam, mu = self.lambda0, self.mu0
        while mu >= self.mu_min:
            yield lam, mu
            lam = min(lam * self.sigma1, self.lambda_cap)
            mu *= self.sigma2


@dataclass
class InnerResult:
    X: np.ndarray
    iterations: int
    trace: list[float]


@dataclass
class StageRecord:
    lam: float
    mu: float
    smoothed: float
    exact: float
    iterations: int
    inner_trace: list[float] = field(default_factory=list)


@dataclass
class SolveResult:
    """``continuous_cost`` is the relaxed objective at the final centers
    without the penalty term (clustering plus total-center link)."""

    model: int
    final_centers: np.ndarray
    snapped_center_indices: list[int]
    total_center_index: int
    continuous_cost: float
    discrete_cost: float
    total_inner_iterations: int
    wall_time: float
    trace: list[StageRecord]
    seed: int | None = None
    runs: list["SolveResult"] = field(default_factory=list)


def dca_inner(model: int, problem, X0, max_inner: int = 200, step_tol: float = 1e-6,
              record_trace: bool = True) -> InnerResult:
    """Plain DCA at fixed ``(lam, mu)``.

    Each step takes ``Y`` in the subdifferential of ``h_mu`` at the current
    centers and solves ``grad g_mu(X) = Y``. Stops once the Frobenius step
    falls below ``step_tol`` or after ``max_inner`` steps.
    """
    ops = model_ops(model)
    X = np.array(X0, dtype=float)
    trace = [ops.smoothed(problem, X)] if record_trace else []
    iterations = 0
    for iterations in range(1, max_inner + 1):
        X_new = ops.conjugate_step(problem, ops.subgradient(problem, X))
        if not np.all(np.isfinite(X_new)):
            raise NonFiniteIterate(
                f"non-finite centers at inner step {iterations} "
                f"(lam={problem.lam:g}, mu={problem.mu:g})"
            )
        step = float(np.linalg.norm(X_new - X))
        X = X_new
        if record_trace:
            trace.append(ops.smoothed(problem, X))
        if step < step_tol:
            break
    return InnerResult(X, iterations, trace)


def snap_to_nodes(X, data, gauge: Gauge) -> list[int]:
    """Map centers to distinct nearest nodes.

    Pairs ``(center, node)`` are visited by increasing gauge distance and a
    pair is taken when neither side is claimed yet; ties go to the smaller
    center index, then the smaller node index.
    """
    X = np.asarray(X, dtype=float)
    data = np.asarray(data, dtype=float)
    dist = gauge.support(X[:, None, :] - data[None, :, :])
    r, m = dist.shape
    order = np.lexsort((np.tile(np.arange(m), r), np.repeat(np.arange(r), m), dist.ravel()))
    chosen = [-1] * r
    taken = set()
    left = r
    for flat in order:
        c, i = divmod(int(flat), m)
        if chosen[c] >= 0 or i in taken:
            continue
        chosen[c] = i
        taken.add(i)
        left -= 1
        if left == 0 or len(taken) == m:
            break
    if left:  # more centers than nodes: fall back to plain nearest
        for c in range(r):
            if chosen[c] < 0:
                chosen[c] = int(dist[c].argmin())
    return chosen


def solve_from(model: int, data, k: int, gauge: Gauge, params: SolverParams, X0,
               seed: int | None = None) -> SolveResult:
    """One continuation run from the given starting centers."""
    ops = model_ops(model)
    data = np.asarray(data, dtype=float)
    start = time.perf_counter()
    problem = ops.problem(data, k, gauge, params.lambda0, params.mu0)
    X = np.array(X0, dtype=float)
    trace = []
    total_iters = 0
    for lam, mu in params.schedule():
        problem = problem.with_params(lam, mu)
        inner = dca_inner(model, problem, X, params.max_inner, params.step_tol,
                          params.record_trace)
        X = inner.X
        total_iters += inner.iterations
        trace.append(StageRecord(
            lam, mu,
            inner.trace[-1] if inner.trace else ops.smoothed(problem, X),
            ops.exact(problem, X),
            inner.iterations,
            inner.trace,
        ))
    snapped = snap_to_nodes(X, data, gauge)
    cost, total = oracle.discrete_cost(model, data, snapped, gauge)
    clustering, link, _ = ops.parts(problem, X)
    return SolveResult(
        model=model,
        final_centers=X,
        snapped_center_indices=snapped,
        total_center_index=total,
        continuous_cost=clustering + link,
        discrete_cost=cost,
        total_inner_iterations=total_iters,
        wall_time=time.perf_counter() - start,
        trace=trace,
        seed=seed,
    )


def _restart(args):
    model, data, k, gauge, params, init, seed = args
    rows = k if model == 1 else k + 1
    X0 = initial_centers(init, data, rows, seed)
    return solve_from(model, data, k, gauge, params, X0, seed=seed)


def solve(model: int, data, k: int, gauge: Gauge, params: SolverParams | None = None,
          init: str = "kmeans", threads: int = 1) -> SolveResult:
    """Multi-start solve; restart ``r`` is seeded with ``params.seed + r``.

    Returns the restart with the lowest discrete cost (earliest restart on
    ties); every restart is kept in ``runs``.
    """
    params = params or SolverParams()
    model_ops(model)
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[0] == 0:
        raise ValueError("empty dataset")
    rows = k if model == 1 else k + 1
    if k < 1 or rows > data.shape[0]:
        raise ValueError(f"k={k} out of range for model {model} with m={data.shape[0]}")
    jobs = [(model, data, k, gauge, params, init, params.seed + r)
            for r in range(params.restarts)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
            runs = list(pool.map(_restart, jobs))
    else:
        runs = [_restart(job) for job in jobs]
    best = min(runs, key=lambda r: (r.discrete_cost, r.seed))
    return SolveResult(**{**best.__dict__, "runs": runs})


def stage_count(params: SolverParams) -> int:
    """Number of continuation stages.

    Equals ``ceil(log(mu0 / mu_min) / log(1 / sigma2))`` unless that ratio is
    an exact power of ``1 / sigma2``, in which case the final stage at
    ``mu == mu_min`` is run as well.
    """
    return sum(1 for _ in params.schedule())


@dataclass
class ConvergenceStudy:
    optimum: oracle.BruteForceResult
    starts: int
    hits: int
    costs: list[float]

    @property
    def rate(self) -> float:
        return self.hits / self.starts if self.starts else 0.0


def convergence_study(model: int, data, k: int, gauge: Gauge,
                      params: SolverParams | None = None, tol: float = 1e-9) -> ConvergenceStudy:
    """Start one run from every subset of nodes and count how many reach
    the brute-force optimum."""
    params = params or SolverParams(record_trace=False)
    data = np.asarray(data, dtype=float)
    best = oracle.brute_force(model, data, k, gauge)
    rows = k if model == 1 else k + 1
    costs = [
        solve_from(model, data, k, gauge, params, data[list(start)]).discrete_cost
        for start in itertools.combinations(range(data.shape[0]), rows)
    ]
    hits = sum(c <= best.cost + tol for c in costs)
    return ConvergenceStudy(best, len(costs), hits, costs)
