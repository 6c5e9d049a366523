"""Minkowski gauge distances.

A gauge is described by a closed bounded convex set ``F`` with the origin in
its interior. The generalized distance from ``a`` to ``x`` is the support
function ``sigma_F(x - a)``. Every method accepts arrays whose last axis has
length ``dim`` and broadcasts over the leading axes, so the solvers can feed
whole ``(k, m, n)`` difference tensors at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class Gauge:
    """Interface shared by all gauges.

    Subclasses implement the set-specific pieces (``support``, ``project``,
    ``norm_bound`` and ``select_subgradient``). Nothing here may assume that
    ``F`` is symmetric.
    """

    kind: str = "abstract"
    dim: int

    @property
    def norm_bound(self) -> float:
        """``sup{||f|| : f in F}``."""
        raise NotImplementedError

    def support(self, x):
        raise NotImplementedError

    def project(self, z):
        raise NotImplementedError

    def select_subgradient(self, d):
        """One element of the subdifferential of ``sigma_F`` at ``d``."""
        raise NotImplementedError

    def distance_sq(self, z):
        """Squared Euclidean distance from ``z`` to ``F``."""
        z = self._check(z)
        r = z - self.project(z)
        return np.einsum("...i,...i->...", r, r)

    def subgradient(self, x, a):
        """Subgradient of ``x -> sigma_F(x - a)`` at ``x``."""
        x = self._check(x)
        a = self._check(a)
        return self.select_subgradient(x - a)

    def smoothing_gap(self, z, mu):
        """``sigma_F(z) - phi_mu(z)`` where ``phi_mu`` is the smoothed support.

        The generic version subtracts; subclasses override it with a
        cancellation-free closed form.
        """
        z = self._check(z)
        w = z / mu
        smooth = 0.5 * mu * (np.einsum("...i,...i->...", w, w) - self.distance_sq(w))
        return self.support(z) - smooth

    def _check(self, v):
        v = np.asarray(v, dtype=float)
        if v.ndim == 0 or v.shape[-1] != self.dim:
            raise ValueError(
                f"expected vectors of dimension {self.dim}, got shape {v.shape}"
            )
        return v


@dataclass(frozen=True)
class EuclideanBall(Gauge):
    """Closed unit ball; the gauge distance is the Euclidean norm."""

    dim: int
    kind = "l2"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @property
    def norm_bound(self) -> float:
        return 1.0

    def support(self, x):
        x = self._check(x)
        return np.sqrt(np.einsum("...i,...i->...", x, x))

    def project(self, z):
        z = self._check(z)
        nrm = np.sqrt(np.einsum("...i,...i->...", z, z))
        scale = 1.0 / np.maximum(nrm, 1.0)
        return z * scale[..., None]

    def select_subgradient(self, d):
        nrm = np.sqrt(np.einsum("...i,...i->...", d, d))
        # zero vector when d == 0; 0 lies in the unit ball
        safe = np.where(nrm > 0.0, nrm, 1.0)
        return np.where((nrm > 0.0)[..., None], d / safe[..., None], 0.0)

    def smoothing_gap(self, z, mu):
        z = self._check(z)
        nrm = np.sqrt(np.einsum("...i,...i->...", z, z))
        return np.where(nrm >= mu, 0.5 * mu, nrm - nrm * nrm / (2.0 * mu))


@dataclass(frozen=True)
class UnitBox(Gauge):
    """Closed unit box ``[-1, 1]^n``; the gauge distance is the l1 norm."""

    dim: int
    kind = "l1"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @property
    def norm_bound(self) -> float:
        return math.sqrt(self.dim)

    def support(self, x):
        x = self._check(x)
        return np.abs(x).sum(axis=-1)

    def project(self, z):
        z = self._check(z)
        return np.clip(z, -1.0, 1.0)

    def select_subgradient(self, d):
        return np.sign(d)

    def smoothing_gap(self, z, mu):
        z = self._check(z)
        az = np.abs(z)
        per = np.where(az >= mu, 0.5 * mu, az - az * az / (2.0 * mu))
        return per.sum(axis=-1)


GAUGES = {"l2": EuclideanBall, "l1": UnitBox}


def make_gauge(name: str, dim: int) -> Gauge:
    """Build a gauge from its CLI name (``l2`` or ``l1``)."""
    try:
        cls = GAUGES[name]
    except KeyError:
        raise ValueError(f"unknown gauge {name!r}; choose from {sorted(GAUGES)}")
    return cls(dim)


def support_value(g: Gauge, x):
    return g.support(x)


def project(g: Gauge, z):
    return g.project(z)


def distance_sq(g: Gauge, z):
    return g.distance_sq(z)


def subgradient(g: Gauge, x, a):
    return g.subgradient(x, a)
