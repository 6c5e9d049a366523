"""Model I: k cluster centers, total center chosen among the data nodes.

Penalized objective for a ``k x n`` center matrix ``X`` and data ``A``::

    f(X) = sum_i min_l s(l, i) + min_i sum_l s(l, i) + lam * sum_l min_i s(l, i)

with ``s(l, i) = sigma_F(x^l - a^i)``. Its DC decomposition is
``f = g0 - h0`` and the smoothed version is ``f_mu = g_mu - h_mu`` with
``g_mu = (2 + lam) / (2 mu) * sum ||x^l - a^i||^2`` and
``h_mu = h1_mu + h2 + h3 + h4``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .gauges import Gauge


@dataclass(frozen=True)
class Model1Problem:
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
        if not 1 <= self.k <= data.shape[0]:
            raise ValueError(f"k={self.k} out of range for m={data.shape[0]}")
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
        return self.k

    def with_params(self, lam: float, mu: float) -> "Model1Problem":
        return replace(self, lam=lam, mu=mu)


def _check_X(p: Model1Problem, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape != (p.k, p.n):
        raise ValueError(f"expected a {p.k} x {p.n} center matrix, got {X.shape}")
    return X


def _diffs(p, X):
    """``D[l, i] = x^l - a^i`` with shape ``(k, m, n)``."""
    return X[:, None, :] - p.data[None, :, :]


def distances(p: Model1Problem, X) -> np.ndarray:
    """Gauge distances ``s(l, i)`` as a ``k x m`` array."""
    X = _check_X(p, X)
    return p.gauge.support(_diffs(p, X))


def _exact_terms(p, S):
    clustering = S.min(axis=0).sum()
    total = S.sum(axis=0).min()
    penalty = S.min(axis=1).sum()
    return clustering, total, penalty


def exact_objective(p: Model1Problem, X) -> float:
    S = distances(p, X)
    clustering, total, penalty = _exact_terms(p, S)
    return float(clustering + total + p.lam * penalty)


def exact_parts(p: Model1Problem, X) -> tuple[float, float, float]:
    """``(clustering, total-center link, penalty)``; ``f`` is their
    ``lam``-weighted sum."""
    return tuple(float(v) for v in _exact_terms(p, distances(p, X)))


def _h_nonsmooth_values(p, S):
    h2 = (S.sum(axis=0) - S.min(axis=0)).sum()
    h3 = p.lam * (S.sum(axis=1) - S.min(axis=1)).sum()
    col = S.sum(axis=0)
    h4 = col.sum() - col.min()
    return h2, h3, h4


def dc_exact_parts(p: Model1Problem, X) -> tuple[float, float]:
    """The unsmoothed decomposition ``(g0, h0)`` with ``f = g0 - h0``."""
    S = distances(p, X)
    g0 = (2.0 + p.lam) * S.sum()
    return float(g0), float(sum(_h_nonsmooth_values(p, S)))


def g_mu_value(p: Model1Problem, X) -> float:
    X = _check_X(p, X)
    D = _diffs(p, X)
    return float((2.0 + p.lam) / (2.0 * p.mu) * np.sum(D * D))


def g_mu_gradient(p: Model1Problem, X) -> np.ndarray:
    X = _check_X(p, X)
    EA = np.broadcast_to(p.data.sum(axis=0), X.shape)
    return (2.0 + p.lam) / p.mu * (p.m * X - EA)


def conjugate_step(p: Model1Problem, Y) -> np.ndarray:
    """Solve ``grad g_mu(X) = Y`` for ``X``."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (p.k, p.n):
        raise ValueError(f"expected a {p.k} x {p.n} matrix, got {Y.shape}")
    EA = p.data.sum(axis=0)[None, :]
    return ((2.0 + p.lam) * EA + p.mu * Y) / ((2.0 + p.lam) * p.m)


def h1_mu_value(p: Model1Problem, X) -> float:
    X = _check_X(p, X)
    W = _diffs(p, X) / p.mu
    return float((2.0 + p.lam) * p.mu / 2.0 * p.gauge.distance_sq(W).sum())


def h1_mu_gradient(p: Model1Problem, X) -> np.ndarray:
    X = _check_X(p, X)
    W = _diffs(p, X) / p.mu
    return (2.0 + p.lam) * (W - p.gauge.project(W)).sum(axis=1)


def h_mu_value(p: Model1Problem, X) -> float:
    S = distances(p, X)
    return h1_mu_value(p, X) + float(sum(_h_nonsmooth_values(p, S)))


def h_mu_part_values(p: Model1Problem, X) -> tuple[float, float, float, float]:
    """``(h1_mu, h2, h3, h4)``, matching the order of the subgradient parts."""
    S = distances(p, X)
    return (h1_mu_value(p, X),) + tuple(float(v) for v in _h_nonsmooth_values(p, S))


def smoothed_objective(p: Model1Problem, X) -> float:
    """``f_mu = g_mu - h_mu``.

    Evaluated as ``f - (2 + lam) * sum(sigma_F - phi_mu)`` so that no
    ``O(1/mu)`` terms cancel.
    """
    X = _check_X(p, X)
    D = _diffs(p, X)
    S = p.gauge.support(D)
    clustering, total, penalty = _exact_terms(p, S)
    gap = p.gauge.smoothing_gap(D, p.mu).sum()
    # group the lam terms before multiplying: lam can be ~1e12
    return float(clustering + total - 2.0 * gap + p.lam * (penalty - gap))


def h_mu_subgradient_parts(p: Model1Problem, X):
    """``(Y1, Y2, Y3, Y4)`` with ``Y1 = grad h1_mu`` and ``Yj`` in ``dh_j``.

    Active indices are the nearest center per node for ``h2``, the nearest
    node per center for ``h3`` and the node with the smallest summed distance
    for ``h4``; ties go to the smallest index.
    """
    X = _check_X(p, X)
    D = _diffs(p, X)
    g = p.gauge
    W = D / p.mu
    Y1 = (2.0 + p.lam) * (W - g.project(W)).sum(axis=1)

    S = g.support(D)
    U = g.select_subgradient(D)  # (k, m, n)
    rowsum = U.sum(axis=1)  # sum_i u_{li}
    cols = np.arange(p.m)

    t_node = S.argmin(axis=0)  # t(i)
    Y2 = rowsum.copy()
    np.subtract.at(Y2, t_node, U[t_node, cols])

    t_center = S.argmin(axis=1)  # t(l)
    Y3 = p.lam * (rowsum - U[np.arange(p.k), t_center])

    t = int(S.sum(axis=0).argmin())
    Y4 = rowsum - U[:, t]
    return Y1, Y2, Y3, Y4


def h_mu_subgradient(p: Model1Problem, X) -> np.ndarray:
    Y1, Y2, Y3, Y4 = h_mu_subgradient_parts(p, X)
    return Y1 + Y2 + Y3 + Y4


def total_center_model1(p: Model1Problem, X) -> int:
    """Node index minimizing the summed gauge distance to all centers."""
    return int(distances(p, X).sum(axis=0).argmin())
