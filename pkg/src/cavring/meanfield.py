"""Variational mean field of the ring-cavity system.

With a product ansatz of coherent states (cavity amplitude alpha,
condensate amplitudes sqrt((N_A +/- Delta)/M) on the two sublattices)
the energy per realization is

    E(alpha, Delta) = omega |alpha|^2 - 2 g Re(alpha) Delta
                      - 2 J cos(theta) sqrt(N_A^2 - Delta^2).

For the lossy cavity the amplitude is pinned to the stationary value of
the damped field equation, alpha = i g Delta / (kappa + i omega), and
the remaining 1-D problem in Delta is minimized numerically (coarse
grid, then golden-section refinement).  The resulting minimizer is the
analytic oracle for the long-time behaviour of the stochastic dynamics:
below threshold Delta = 0; above it Delta = N_A sqrt(1-(g_crit/g)^4)
and the steady photon number is g^2 Delta^2 / (omega^2 + kappa^2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import critical_coupling

_GRID_POINTS = 1000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MeanFieldPoint:
    """One point of the variational landscape: (Delta, alpha, E)."""

    delta: float
    alpha: complex
    energy: float


def energy(alpha, delta, theta, g, params):
    """Variational energy E(alpha, Delta) at gauge phase theta."""
    n = params.n_atoms
    if abs(delta) > n:
        raise DomainError(
            f"|delta| = {abs(delta)} exceeds the atom number {n}"
        )
    return (
        params.omega * abs(alpha) ** 2
        - 2.0 * g * alpha.real * delta
        - 2.0 * params.hop_j * math.cos(theta) * math.sqrt(n**2 - delta**2)
    )


def stationary_alpha(delta, g, params):
    """Cavity amplitude pinned to the damped stationary value i g Delta/(kappa + i omega)."""
    return 1j * g * delta / (params.kappa + 1j * params.omega)


def _pinned_energy(delta, theta, g, params):
    return energy(stationary_alpha(delta, g, params), delta, theta, g, params)


def _golden_refine(f, lo, hi, tol):
    """Golden-section minimum of a unimodal f on [lo, hi] to width tol."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def minimize_energy(theta, g, params):
    """Global minimizer of the pinned energy over Delta in [0, N_A].

    Returns the Delta >= 0 branch of the two Z2-degenerate minima; the
    exact normal-phase point (0, 0) is returned whenever it is not
    beaten by the refined candidate.
    """
    critical_coupling(params, theta)  # validates cos(theta) >= 0
    n = params.n_atoms
    f = lambda d: _pinned_energy(d, theta, g, params)

    grid = np.linspace(0.0, n, _GRID_POINTS)
    values = [f(d) for d in grid]
    i = int(np.argmin(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, _GRID_POINTS - 1)]
    delta = _golden_refine(f, lo, hi, tol=1e-6 * n)

    # Below (and exactly at) threshold the landscape is monotone in
    # Delta and the true minimum sits on the boundary Delta = 0.
    if f(0.0) <= f(delta):
        return MeanFieldPoint(delta=0.0, alpha=0.0 + 0.0j, energy=f(0.0))
    return MeanFieldPoint(
        delta=delta,
        alpha=stationary_alpha(delta, g, params),
        energy=f(delta),
    )


def predict_photon_number(theta, g, params):
    """Steady intracavity photon number |alpha|^2 of the minimizer."""
    point = minimize_energy(theta, g, params)
    return abs(point.alpha) ** 2
