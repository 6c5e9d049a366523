"""Model II: k + 1 centers, the total center is one of them.

Penalized objective for a ``(k+1) x n`` center matrix::

    f(X) = sum_i min_l s(l, i) + min_l sum_j sigma_F(x^l - x^j)
           + lam * sum_l min_i s(l, i)

Smoothed decomposition ``f_mu = g_mu - h_mu`` with
``g_mu = g1_mu + g2_mu`` (data and linkage quadratics) and
``h_mu = h1_mu + h2_mu + h3 + h4 + h5``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .gauges import Gauge


@dataclass(frozen=True)
class Model2Problem:
    """``k`` is the number of cluster centers; ``X`` has ``k + 1`` rows."""

    data: np.ndarray
    k: int
    gauge: Gauge
    lam: float
    mu: float

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValueError("data must be a non-empty m x n matrix")
        object.__setattr__(self, "data", data)
        if not (self.k >= 0 and self.k + 1 <= data.shape[0]):
            raise ValueError(f"k + 1 = {self.k + 1} centers out of range for m={data.shape[0]}")
        if self.gauge.dim != data.shape[1]:
            raise ValueError("gauge dimension does not match the data")
        if not self.lam > 0 or not self.mu > 0:
            raise ValueError("lam and mu must be positive")

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def rows(self) -> int:
        return self.k + 1

    def with_params(self, lam: float, mu: float) -> "Model2Problem":
        return replace(self, lam=lam, mu=mu)


def _check_X(p: Model2Problem, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape != (p.rows, p.n):
        raise ValueError(f"expected a {p.rows} x {p.n} center matrix, got {X.shape}")
    return X


def _data_diffs(p, X):
    return X[:, None, :] - p.data[None, :, :]


def _link_diffs(X):
    """``L[l, j] = x^l - x^j``."""
    return X[:, None, :] - X[None, :, :]


def exact_objective2(p: Model2Problem, X) -> float:
    X = _check_X(p, X)
    S = p.gauge.support(_data_diffs(p, X))
    link = p.gauge.support(_link_diffs(X))
    return float(
        S.min(axis=0).sum() + link.sum(axis=1).min() + p.lam * S.min(axis=1).sum()
    )


def exact_parts2(p: Model2Problem, X) -> tuple[float, float, float]:
    """``(clustering, linkage, penalty)``; ``f`` is their ``lam``-weighted sum."""
    X = _check_X(p, X)
    S = p.gauge.support(_data_diffs(p, X))
    link = p.gauge.support(_link_diffs(X))
    return float(S.min(axis=0).sum()), float(link.sum(axis=1).min()), float(S.min(axis=1).sum())


def dc_exact_parts2(p: Model2Problem, X) -> tuple[float, float]:
    """Unsmoothed ``(g0, h0)`` with ``f = g0 - h0``."""
    X = _check_X(p, X)
    S = p.gauge.support(_data_diffs(p, X))
    link = p.gauge.support(_link_diffs(X))
    g0 = (1.0 + p.lam) * S.sum() + link.sum()
    return float(g0), float(sum(_nonsmooth_values(p, S, link)))


def invert_aI_plus_bE(a: float, b: float, k: int) -> tuple[float, float]:
    """Inverse of ``a I + b E`` (size ``k + 1``) in the form ``x I + y E``."""
    size = k + 1
    if a == 0 or a + b * size == 0:
        raise ZeroDivisionError(f"a I + b E is singular for a={a}, b={b}, k={k}")
    return 1.0 / a, -b / (a * (a + b * size))


def invert_cI_plus_dEtilde(c: float, d: float, k: int) -> tuple[float, float]:
    """Inverse of ``c I + d ((k+1) I - E)`` in the form ``alpha I + beta E``."""
    size = k + 1
    if c == 0 or c + d * size == 0:
        raise ZeroDivisionError(f"c I + d Etilde is singular for c={c}, d={d}, k={k}")
    return 1.0 / (c + d * size), d / (c * (c + d * size))


def conjugate_coefficients(p: Model2Problem) -> tuple[float, float]:
    """``(alpha, beta)`` of the closed-form conjugate gradient."""
    ml = p.m * (p.lam + 1.0)
    denom = ml + 2.0 * p.rows
    return 1.0 / denom, 2.0 / (ml * denom)


def g_mu_value2(p: Model2Problem, X) -> float:
    X = _check_X(p, X)
    D = _data_diffs(p, X)
    L = _link_diffs(X)
    return float(((1.0 + p.lam) * np.sum(D * D) + np.sum(L * L)) / (2.0 * p.mu))


def g_mu_gradient2(p: Model2Problem, X) -> np.ndarray:
    X = _check_X(p, X)
    EA = p.data.sum(axis=0)[None, :]
    g1 = (1.0 + p.lam) / p.mu * (p.m * X - EA)
    g2 = 2.0 / p.mu * (p.rows * X - X.sum(axis=0)[None, :])
    return g1 + g2


def conjugate_step2(p: Model2Problem, Y) -> np.ndarray:
    """Solve ``grad g_mu(X) = Y`` via ``(alpha I + beta E)((1+lam) E A + mu Y)``."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (p.rows, p.n):
        raise ValueError(f"expected a {p.rows} x {p.n} matrix, got {Y.shape}")
    alpha, beta = conjugate_coefficients(p)
    R = (1.0 + p.lam) * p.data.sum(axis=0)[None, :] + p.mu * Y
    return alpha * R + beta * R.sum(axis=0)[None, :]


def _pair_gradient_rows(G):
    """Gradient w.r.t. each row of ``sum_{l,j} psi(x^l - x^j)`` given ``G[l, j] = psi'(x^l - x^j)``."""
    return G.sum(axis=1) - G.sum(axis=0)


def h1_mu_value2(p: Model2Problem, X) -> float:
    X = _check_X(p, X)
    W = _data_diffs(p, X) / p.mu
    return float((1.0 + p.lam) * p.mu / 2.0 * p.gauge.distance_sq(W).sum())


def h2_mu_value2(p: Model2Problem, X) -> float:
    X = _check_X(p, X)
    W = _link_diffs(X) / p.mu
    return float(p.mu / 2.0 * p.gauge.distance_sq(W).sum())


def h1_mu_gradient2(p: Model2Problem, X) -> np.ndarray:
    X = _check_X(p, X)
    W = _data_diffs(p, X) / p.mu
    return (1.0 + p.lam) * (W - p.gauge.project(W)).sum(axis=1)


def h2_mu_gradient2(p: Model2Problem, X) -> np.ndarray:
    X = _check_X(p, X)
    W = _link_diffs(X) / p.mu
    return _pair_gradient_rows(W - p.gauge.project(W))


def _nonsmooth_values(p, S, link):
    h3 = (S.sum(axis=0) - S.min(axis=0)).sum()
    h4 = p.lam * (S.sum(axis=1) - S.min(axis=1)).sum()
    rows = link.sum(axis=1)
    h5 = rows.sum() - rows.min()
    return h3, h4, h5


def h_mu_value2(p: Model2Problem, X) -> float:
    X = _check_X(p, X)
    S = p.gauge.support(_data_diffs(p, X))
    link = p.gauge.support(_link_diffs(X))
    return h1_mu_value2(p, X) + h2_mu_value2(p, X) + float(sum(_nonsmooth_values(p, S, link)))


def h_mu_part_values2(p: Model2Problem, X) -> tuple[float, ...]:
    """``(h1_mu, h2_mu, h3, h4, h5)``, matching the subgradient parts."""
    X = _check_X(p, X)
    S = p.gauge.support(_data_diffs(p, X))
    link = p.gauge.support(_link_diffs(X))
    rest = tuple(float(v) for v in _nonsmooth_values(p, S, link))
    return (h1_mu_value2(p, X), h2_mu_value2(p, X)) + rest


def smoothed_objective2(p: Model2Problem, X) -> float:
    """``f_mu = g_mu - h_mu`` evaluated as ``f`` minus the smoothing gaps."""
    X = _check_X(p, X)
    D = _data_diffs(p, X)
    L = _link_diffs(X)
    g = p.gauge
    S = g.support(D)
    link = g.support(L)
    data_gap = g.smoothing_gap(D, p.mu).sum()
    link_gap = g.smoothing_gap(L, p.mu).sum()
    return float(
        S.min(axis=0).sum()
        - data_gap
        + link.sum(axis=1).min()
        - link_gap
        + p.lam * (S.min(axis=1).sum() - data_gap)
    )


def h_mu_subgradient2_parts(p: Model2Problem, X):
    """``(Y1, Y2, Y3, Y4, Y5)``; the first two are gradients of the smooth parts.

    For ``h5`` the active row ``t*`` has the smallest linkage sum. Every
    pairwise term ``sigma_F(x^l - x^j)`` with ``l != t*`` contributes its
    subgradient to row ``l`` and the negative to row ``j``.
    """
    X = _check_X(p, X)
    g = p.gauge
    D = _data_diffs(p, X)
    L = _link_diffs(X)

    W = D / p.mu
    Y1 = (1.0 + p.lam) * (W - g.project(W)).sum(axis=1)
    WL = L / p.mu
    Y2 = _pair_gradient_rows(WL - g.project(WL))

    S = g.support(D)
    U = g.select_subgradient(D)
    rowsum = U.sum(axis=1)
    cols = np.arange(p.m)
    t_node = S.argmin(axis=0)
    Y3 = rowsum.copy()
    np.subtract.at(Y3, t_node, U[t_node, cols])

    t_center = S.argmin(axis=1)
    Y4 = p.lam * (rowsum - U[np.arange(p.rows), t_center])

    link = g.support(L)
    t_star = int(link.sum(axis=1).argmin())
    V = g.select_subgradient(L)
    V[t_star] = 0.0
    Y5 = _pair_gradient_rows(V)
    return Y1, Y2, Y3, Y4, Y5


def h_mu_subgradient2(p: Model2Problem, X) -> np.ndarray:
    return sum(h_mu_subgradient2_parts(p, X))


def total_center_model2(p: Model2Problem, X) -> int:
    """Row index with the smallest linkage sum to the other centers."""
    X = _check_X(p, X)
    return int(p.gauge.support(_link_diffs(X)).sum(axis=1).argmin())
