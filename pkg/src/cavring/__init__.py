"""Semiclassical simulator of a rotation-sensing atom-cavity ring lattice.

A ring of M condensates with gauge-phase-twisted tunnelling couples to
one lossy cavity mode; stochastic (truncated-Wigner) trajectories,
mean-field analytics, phase-diagram sweeps, and time-dependent sensing
protocols with real-time photon readout live in the submodules:

- :mod:`cavring.model`     parameters, units, rotation-to-phase map, threshold
- :mod:`cavring.meanfield` variational energy and its minimizer
- :mod:`cavring.dynamics`  the stochastic trajectory engine
- :mod:`cavring.protocols` control schedules and sensing experiments
- :mod:`cavring.sweep`     phase diagrams over (theta, g/g0crit)
- :mod:`cavring.cli`       the ``cavring`` command-line interface
"""

__version__ = "0.1.0"

from .model import ModelParams  # noqa: F401
