"""Nesterov smoothing of ``phi(x) = sigma_F(x - a)``.

The smoothed function is

    phi_mu(x) = ||x - a||^2 / (2 mu) - (mu / 2) * d((x - a) / mu; F)^2

with gradient ``P((x - a) / mu; F)``, and it satisfies
``phi_mu <= phi <= phi_mu + (mu / 2) ||F||^2``.
"""

from __future__ import annotations

import numpy as np

from .gauges import Gauge


def _check_mu(mu):
    if not mu > 0:
        raise ValueError(f"smoothing parameter must be positive, got {mu!r}")


def smooth_value(g: Gauge, x, a, mu):
    """Value of the smoothed gauge distance; broadcasts over leading axes."""
    _check_mu(mu)
    z = g._check(x) - g._check(a)
    # sigma - gap equals mu/2 * (|w|^2 - d(w)^2) with w = z / mu, but the
    # latter cancels two O(|z|^2 / mu) terms when mu is small
    return g.support(z) - g.smoothing_gap(z, mu)


def smooth_gradient(g: Gauge, x, a, mu):
    _check_mu(mu)
    return g.project((g._check(x) - g._check(a)) / mu)


def approximation_bound(g: Gauge, mu) -> float:
    """Width ``(mu / 2) ||F||^2`` of the sandwich around the exact distance."""
    _check_mu(mu)
    return 0.5 * mu * g.norm_bound**2
