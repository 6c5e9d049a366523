"""Seeded numerical property suites for the smoothing, DC and DCA layers.

Every suite draws its own random instances from a seeded generator and
returns a :class:`SuiteReport`. The module functions are looked up at call
time, so a patched (deliberately broken) implementation is caught.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import dca, model1, model2, smoothing
from .gauges import make_gauge

REL_GRAD = 1e-6
REL_DC = 1e-9
INVERSE_TOL = 1e-12
ROUND_TRIP_TOL = 1e-10
TRACE_SLACK = 1e-9


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: int = 0
    worst: float = 0.0
    seconds: float = 0.0
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checks > 0 and self.failures == 0

    def record(self, value: float, limit: float, what: str):
        """Count one check of ``value <= limit``; ``worst`` keeps the max ratio."""
        self.checks += 1
        ratio = value / limit if limit > 0 else value
        self.worst = max(self.worst, float(ratio))
        if not value <= limit:  # also catches NaN
            self.failures += 1
            if len(self.messages) < 5:
                self.messages.append(f"{what}: {value:.3e} > {limit:.3e}")


# ---------------------------------------------------------------- instances

def _problem(rng, model: int, gauge: str, lam=None, mu=None, max_m=8):
    n = int(rng.integers(1, 4))
    m = int(rng.integers(2, max_m + 1))
    k = int(rng.integers(1, min(3, m - (model == 2)) + 1))
    data = rng.uniform(-5.0, 5.0, size=(m, n))
    lam = float(10 ** rng.uniform(-2, 2)) if lam is None else lam
    mu = float(10 ** rng.uniform(-2, 1)) if mu is None else mu
    cls = model1.Model1Problem if model == 1 else model2.Model2Problem
    return cls(data, k, make_gauge(gauge, n), lam, mu)


def _centers(rng, p, spread=6.0):
    """Random centers; sometimes pinned to data rows to exercise ties."""
    if rng.random() < 0.2 and p.rows <= p.m:
        return p.data[rng.choice(p.m, size=p.rows, replace=False)].copy()
    return rng.uniform(-spread, spread, size=(p.rows, p.n))


def _each_instance(rng, count):
    """Yield ``(model, gauge)`` pairs cycling over all four combinations."""
    combos = [(1, "l2"), (1, "l1"), (2, "l2"), (2, "l1")]
    for i in range(count):
        yield combos[i % 4]


def _fd_gradient(f, X, rel_step=1e-6):
    X = np.asarray(X, dtype=float)
    G = np.empty_like(X)
    for idx in np.ndindex(X.shape):
        h = rel_step * max(1.0, abs(X[idx]))
        Xp = X.copy()
        Xm = X.copy()
        Xp[idx] += h
        Xm[idx] -= h
        G[idx] = (f(Xp) - f(Xm)) / (2.0 * h)
    return G


def _grad_error(fd, an):
    return float(np.linalg.norm(fd - an) / max(1.0, np.linalg.norm(an)))


# ------------------------------------------------------------------- suites

def suite_gradients(rng, count=500) -> SuiteReport:
    """Central differences against the analytic gradients of the smooth parts."""
    rep = SuiteReport("gradients")
    for model, gname in _each_instance(rng, count):
        p = _problem(rng, model, gname)
        X = _centers(rng, p)
        if np.any(np.all(np.isclose(X[:, None, :], p.data[None, :, :]), axis=2)):
            X = X + rng.uniform(-0.5, 0.5, size=X.shape)  # keep off the kinks

        x, a = rng.uniform(-5, 5, size=(2, p.n))
        fd = _fd_gradient(lambda v: smoothing.smooth_value(p.gauge, v, a, p.mu), x)
        rep.record(_grad_error(fd, smoothing.smooth_gradient(p.gauge, x, a, p.mu)),
                   REL_GRAD, f"phi_mu gradient ({gname})")

        if model == 1:
            pairs = [
                ("g_mu", model1.g_mu_value, model1.g_mu_gradient),
                ("h1_mu", model1.h1_mu_value, model1.h1_mu_gradient),
            ]
        else:
            pairs = [
                ("g_mu", model2.g_mu_value2, model2.g_mu_gradient2),
                ("h1_mu", model2.h1_mu_value2, model2.h1_mu_gradient2),
                ("h2_mu", model2.h2_mu_value2, model2.h2_mu_gradient2),
            ]
        for label, value, grad in pairs:
            fd = _fd_gradient(lambda V: value(p, V), X)
            rep.record(_grad_error(fd, grad(p, X)), REL_GRAD,
                       f"model {model} {label} gradient ({gname})")
    return rep


def sandwich_constant(p) -> float:
    """``C`` in ``f_mu <= f <= f_mu + C mu`` for either model."""
    F2 = p.gauge.norm_bound ** 2
    if isinstance(p, model1.Model1Problem):
        return p.m * p.k * (1.0 + p.lam / 2.0) * F2
    r = p.rows
    return (p.m * r * (1.0 + p.lam) / 2.0 + r * r / 2.0) * F2


def suite_sandwich(rng, count=1000) -> SuiteReport:
    rep = SuiteReport("sandwich")
    for model, gname in _each_instance(rng, count):
        p = _problem(rng, model, gname)
        X = _centers(rng, p)
        if model == 1:
            f, fmu = model1.exact_objective(p, X), model1.smoothed_objective(p, X)
        else:
            f, fmu = model2.exact_objective2(p, X), model2.smoothed_objective2(p, X)
        tol = 1e-9 * max(1.0, abs(f))
        rep.record(fmu - f, tol, f"model {model} f_mu above f ({gname})")
        rep.record(f - fmu, sandwich_constant(p) * p.mu + tol,
                   f"model {model} f above f_mu + C mu ({gname})")
        # single-term bound for the smoothed gauge distance
        x, a = rng.uniform(-5, 5, size=(2, p.n))
        exact = float(p.gauge.support(x - a))
        smooth = float(smoothing.smooth_value(p.gauge, x, a, p.mu))
        rep.record(smooth - exact, 1e-12 * max(1.0, exact), "phi_mu above sigma")
        rep.record(exact - smooth, smoothing.approximation_bound(p.gauge, p.mu) + 1e-12,
                   "sigma above phi_mu + mu/2 ||F||^2")
    return rep


def suite_dc(rng, count=500) -> SuiteReport:
    """``g0 - h0 = f`` and ``g_mu - h_mu = f_mu`` for both models."""
    rep = SuiteReport("dc")
    for model, gname in _each_instance(rng, count):
        p = _problem(rng, model, gname, mu=float(10 ** rng.uniform(-1, 1)))
        X = _centers(rng, p)
        if model == 1:
            f = model1.exact_objective(p, X)
            g0, h0 = model1.dc_exact_parts(p, X)
            fmu = model1.smoothed_objective(p, X)
            gmu, hmu = model1.g_mu_value(p, X), model1.h_mu_value(p, X)
        else:
            f = model2.exact_objective2(p, X)
            g0, h0 = model2.dc_exact_parts2(p, X)
            fmu = model2.smoothed_objective2(p, X)
            gmu, hmu = model2.g_mu_value2(p, X), model2.h_mu_value2(p, X)
        rep.record(abs(g0 - h0 - f) / max(1.0, abs(f), abs(g0)), REL_DC,
                   f"model {model} g0 - h0 != f ({gname})")
        rep.record(abs(gmu - hmu - fmu) / max(1.0, abs(fmu), abs(gmu)), REL_DC,
                   f"model {model} g_mu - h_mu != f_mu ({gname})")
    return rep


def suite_subgradient(rng, count=500) -> SuiteReport:
    """``h_j(Z) >= h_j(X) + <Y_j, Z - X>`` for every part ``h_j`` of ``h_mu``.

    Half of the ``Z`` are small perturbations of ``X``, where a wrong choice
    of active index shows up; the rest are unrelated points.
    """
    rep = SuiteReport("subgradient")
    for model, gname in _each_instance(rng, count):
        p = _problem(rng, model, gname)
        X = _centers(rng, p)
        if rng.random() < 0.5:
            Z = X + 1e-4 * rng.standard_normal(X.shape)
        else:
            Z = _centers(rng, p)
        if model == 1:
            parts = model1.h_mu_subgradient_parts(p, X)
            hX, hZ = model1.h_mu_part_values(p, X), model1.h_mu_part_values(p, Z)
        else:
            parts = model2.h_mu_subgradient2_parts(p, X)
            hX, hZ = model2.h_mu_part_values2(p, X), model2.h_mu_part_values2(p, Z)
        for j, (Y, vx, vz) in enumerate(zip(parts, hX, hZ), start=1):
            lin = float(np.sum(Y * (Z - X)))
            tol = 1e-9 * (1.0 + abs(vx) + abs(vz) + abs(lin))
            rep.record(vx + lin - vz, tol, f"model {model} h{j} subgradient ({gname})")
    return rep


def suite_inverses(rng, count=500) -> SuiteReport:
    """Closed-form inverses of ``aI + bE``, ``cI + d((k+1)I - E)`` and the
    matrix behind the Model II conjugate step."""
    rep = SuiteReport("inverses")
    for _ in range(count):
        k = int(rng.integers(0, 10))
        size = k + 1
        I, E = np.eye(size), np.ones((size, size))
        a, c = rng.uniform(0.5, 5.0, size=2)
        b, d = rng.uniform(-0.2, 5.0, size=2)
        x, y = model2.invert_aI_plus_bE(a, b, k)
        res = np.abs((a * I + b * E) @ (x * I + y * E) - I).max()
        rep.record(res, INVERSE_TOL, "aI + bE inverse residual")
        al, be = model2.invert_cI_plus_dEtilde(c, d, k)
        res = np.abs((c * I + d * (size * I - E)) @ (al * I + be * E) - I).max()
        rep.record(res, INVERSE_TOL, "cI + d Etilde inverse residual")

        p = _problem(rng, 2, "l2")
        al, be = model2.conjugate_coefficients(p)
        lead = p.m * (1.0 + p.lam) + 2.0 * p.rows
        I, E = np.eye(p.rows), np.ones((p.rows, p.rows))
        M = lead * I - 2.0 * E
        res = np.abs(M @ (al * I + be * E) - I).max()
        rep.record(res, INVERSE_TOL, "conjugate-step coefficients residual")
    return rep


def suite_conjugate(rng, count=500) -> SuiteReport:
    """``grad g_mu(conjugate_step(Y)) = Y`` for realistic and random ``Y``."""
    rep = SuiteReport("conjugate")
    for model, gname in _each_instance(rng, count):
        p = _problem(rng, model, gname)
        if model == 1:
            step, grad, sub = model1.conjugate_step, model1.g_mu_gradient, model1.h_mu_subgradient
        else:
            step, grad, sub = model2.conjugate_step2, model2.g_mu_gradient2, model2.h_mu_subgradient2
        for Y in (sub(p, _centers(rng, p)), grad(p, _centers(rng, p))):
            res = np.linalg.norm(grad(p, step(p, Y)) - Y) / max(1.0, np.linalg.norm(Y))
            rep.record(res, ROUND_TRIP_TOL, f"model {model} round trip ({gname})")
    return rep


def suite_monotone(rng, count=24) -> SuiteReport:
    """Every inner DCA trace of a full continuation run is nonincreasing."""
    rep = SuiteReport("monotone")
    params = dca.SolverParams()
    for model, gname in _each_instance(rng, count):
        p = _problem(rng, model, gname, lam=params.lambda0, mu=params.mu0, max_m=12)
        X0 = _centers(rng, p)
        result = dca.solve_from(model, p.data, p.k, p.gauge, params, X0)
        for stage in result.trace:
            t = np.asarray(stage.inner_trace)
            if t.size < 2:
                continue
            rises = np.diff(t) - TRACE_SLACK * np.maximum(1.0, np.abs(t[:-1]))
            rep.record(float(rises.max()), 0.0,
                       f"model {model} trace increase at lam={stage.lam:g} mu={stage.mu:g}")
    return rep


SUITES = {
    "gradients": suite_gradients,
    "sandwich": suite_sandwich,
    "dc": suite_dc,
    "subgradient": suite_subgradient,
    "inverses": suite_inverses,
    "conjugate": suite_conjugate,
    "monotone": suite_monotone,
}


def run_suites(names=None, seed: int = 0) -> list[SuiteReport]:
    """Run the named suites (all by default), each with its own seeded stream."""
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    reports = []
    for i, name in enumerate(names):
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        start = time.perf_counter()
        try:
            rep = SUITES[name](rng)
        except Exception as exc:  # a crash counts as a failed suite
            rep = SuiteReport(name, checks=1, failures=1,
                              messages=[f"raised {type(exc).__name__}: {exc}"])
        rep.seconds = time.perf_counter() - start
        reports.append(rep)
    return reports
