"""Phase-diagram construction over (theta, g/g0crit).

Each grid point runs an independent TWA ensemble at constant controls,
tail-averages the mean photon number, and classifies the point as
superradiant when the steady photon number exceeds the threshold
(default 10).  The analytic boundary sqrt(cos theta) is attached for
overlay.  Points whose tail is not stationary (critical slowing near
the boundary) are reported as unconverged rather than silently
averaged or retried.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import IntegratorConfig, run_ensemble
from .errors import CavringError, ConfigError, NonStationaryError
from .model import boundary_curve, critical_coupling
from .protocols import Schedule

SR_THRESHOLD = 10.0

# Disambiguates sweep-point RNG streams from plain trajectory streams.
_POINT_KEY = 0x50C1E7


@dataclass(frozen=True)
class GridSpec:
    """Axes and per-point run settings of a phase-diagram sweep."""

    theta_values: np.ndarray  # rad, strictly increasing, within [0, pi/2)
    g_rel_values: np.ndarray  # g / g0crit, strictly increasing
    n_traj: int = 100
    t_end: float = 15.0
    tail: tuple = (10.0, 15.0)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "theta_values", np.asarray(self.theta_values, dtype=np.float64))
        object.__setattr__(
            self, "g_rel_values", np.asarray(self.g_rel_values, dtype=np.float64))
        for name, axis in (("theta_values", self.theta_values),
                           ("g_rel_values", self.g_rel_values)):
            if axis.ndim != 1 or axis.size == 0:
                raise ConfigError(f"{name} must be a non-empty 1-D array")
            if axis.size > 1 and not (np.diff(axis) > 0).all():
                raise ConfigError(f"{name} must be strictly increasing")
        lo, hi = self.tail
        if not (0.0 < lo < hi <= self.t_end):
            raise ConfigError(
                f"tail window {self.tail} must lie inside (0, t_end = {self.t_end}]"
            )
        if self.n_traj < 2:
            raise ConfigError(f"n_traj must be >= 2, got {self.n_traj}")


@dataclass
class PhaseDiagram:
    """Steady photon numbers and SR classification on the grid.

    Arrays are indexed [i_theta, i_g]; boundary_analytic holds
    (theta, sqrt(cos theta)) rows for overlay.
    """

    grid: GridSpec
    photon_steady: np.ndarray
    is_sr: np.ndarray
    converged: np.ndarray
    boundary_analytic: np.ndarray


def detect_steady_state(series, tail):
    """Tail-window time average of the ensemble mean photon number.

    Raises NonStationaryError (carrying the average) when the two
    halves of the tail differ by more than 20% relative and more than
    3 combined standard errors -- the run has not settled.
    """
    t_lo, t_hi = tail
    mask = (series.times >= t_lo) & (series.times <= t_hi)
    values = series.mean_photon[mask]
    if values.size < 4:
        raise ConfigError(
            f"tail window {tail} contains only {values.size} samples"
        )
    average = float(values.mean())
    half = values.size // 2
    first, second = values[:half], values[half:]
    m1, m2 = first.mean(), second.mean()
    diff = abs(m2 - m1)
    scale = max(abs(average), 1e-12)
    se = np.hypot(first.std(ddof=1) / np.sqrt(first.size),
                  second.std(ddof=1) / np.sqrt(second.size))
    rel = diff / scale
    n_sigma = diff / se if se > 0 else np.inf
    if rel > 0.20 and n_sigma > 3.0:
        raise NonStationaryError(
            f"tail halves differ by {rel:.1%} ({n_sigma:.1f} sigma); "
            f"the point has not reached a steady state",
            value=average, rel_diff=rel, n_sigma=n_sigma,
        )
    return average


def classify(photon_steady, sr_threshold=SR_THRESHOLD):
    """'SR' if the steady photon number exceeds the threshold, else 'NP'."""
    if photon_steady < 0:
        raise ConfigError(f"photon number must be >= 0, got {photon_steady}")
    return "SR" if photon_steady > sr_threshold else "NP"


def point_seed(master_seed, flat_index):
    """Derive one grid point's ensemble seed from the master seed."""
    ss = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(_POINT_KEY, flat_index))
    lo, hi = ss.generate_state(2, np.uint64)
    return int(lo) | (int(hi) << 64)


def sweep_phase_diagram(grid, params, integ=None, threads=1,
                        sr_threshold=SR_THRESHOLD):
    """Run one ensemble per grid point and assemble the phase diagram.

    g0crit is computed once at theta = 0; per-point seeds derive from
    the grid's master seed and the point index, so the diagram is
    reproducible bit for bit no matter how the points are scheduled
    across threads.  Per-point failures are recorded (NaN, unconverged)
    and the sweep continues.
    """
    if integ is None:
        integ = IntegratorConfig(t_end=grid.t_end)
    else:
        if integ.t_end != grid.t_end:
            raise ConfigError(
                "integrator t_end must match the grid's per-point t_end"
            )
    g0 = critical_coupling(params, 0.0)
    n_theta, n_g = grid.theta_values.size, grid.g_rel_values.size
    photon = np.full((n_theta, n_g), np.nan)
    converged = np.zeros((n_theta, n_g), dtype=bool)
    is_sr = np.zeros((n_theta, n_g), dtype=bool)

    def run_point(point):
        i, j = point
        schedule = Schedule.constant(
            grid.g_rel_values[j] * g0, float(grid.theta_values[i]))
        seed = point_seed(grid.seed, i * n_g + j)
        try:
            series = run_ensemble(schedule, params, integ, grid.n_traj, seed)
            return i, j, detect_steady_state(series, grid.tail), True
        except NonStationaryError as err:
            return i, j, err.value, False
        except CavringError:
            return i, j, np.nan, False

    points = [(i, j) for i in range(n_theta) for j in range(n_g)]
    if threads <= 1:
        results = map(run_point, points)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_point, points))
    for i, j, value, ok in results:
        photon[i, j] = value
        converged[i, j] = ok
        if not np.isnan(value):
            is_sr[i, j] = classify(float(value), sr_threshold) == "SR"

    boundary = np.column_stack([
        grid.theta_values,
        [boundary_curve(t) for t in grid.theta_values],
    ])
    return PhaseDiagram(
        grid=grid, photon_steady=photon, is_sr=is_sr,
        converged=converged, boundary_analytic=boundary,
    )


def empirical_boundary(diagram):
    """Per-theta midpoint of the converged (NP, SR) bracketing pair.

    Returns an array of (theta, g_rel_mid) rows with NaN where the
    column has no converged bracket inside the grid.
    """
    grid = diagram.grid
    rows = []
    for i, theta in enumerate(grid.theta_values):
        ok = diagram.converged[i]
        sr = diagram.is_sr[i]
        mid = np.nan
        idx = np.flatnonzero(ok)
        for a, b in zip(idx[:-1], idx[1:]):
            if not sr[a] and sr[b]:
                mid = 0.5 * (grid.g_rel_values[a] + grid.g_rel_values[b])
                break
        rows.append((theta, mid))
    return np.asarray(rows)
