"""Open truncated-Wigner dynamics of the ring-cavity system.

An ensemble of classical trajectories samples the Wigner distribution
of the initial state (vacuum cavity, coherent condensates with
N_A/M atoms per site) and is propagated by the damped equations of
motion; the cavity dissipation injects the corresponding quantum noise,
Delta xi = sqrt(kappa dt / 2)(eta_a + i eta_b) per step, so that
<xi*(t') xi(t)> = kappa delta(t - t').  The site amplitudes carry no
noise.  Observables are |alpha|^2, the even/odd population imbalance
D = sum_j (-1)^j |b_j|^2, and the total atom number, recorded on a
uniform sample grid and reduced to ensemble mean/std.

Trajectories are independent units of work: each owns a counter-derived
RNG stream keyed by (master seed, trajectory index), so an ensemble is
bit-for-bit reproducible regardless of how many threads execute it.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, NonFiniteError

# Trajectories are integrated in fixed-size batches; the batch size is
# a constant (not tied to the thread count) so chunking can never
# change the numbers.
_BATCH = 128

DEFAULT_DT = 5e-4  # ms
DEFAULT_RECORD_EVERY = 20  # -> one sample every 0.01 ms at the default dt


@dataclass
class SystemState:
    """One phase-space point: cavity amplitude plus M site amplitudes."""

    cavity: complex
    sites: np.ndarray  # (M,) complex128

    def __post_init__(self):
        self.sites = np.asarray(self.sites, dtype=np.complex128)
        if self.sites.ndim != 1 or self.sites.size == 0:
            raise ConfigError("sites must be a non-empty 1-D complex array")

    @property
    def photon(self):
        return abs(self.cavity) ** 2

    @property
    def total_atoms(self):
        return float((self.sites.real**2 + self.sites.imag**2).sum())

    @property
    def imbalance(self):
        n = self.sites.real**2 + self.sites.imag**2
        return float((n * kernels.site_signs(self.sites.size)).sum())


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, recording stride, and duration of one run."""

    dt: float = DEFAULT_DT
    record_every: int = DEFAULT_RECORD_EVERY
    t_end: float = 10.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.record_every < 1:
            raise ConfigError(f"record_every must be >= 1, got {self.record_every}")
        if self.t_end < self.dt:
            raise ConfigError(
                f"t_end = {self.t_end} is shorter than one step dt = {self.dt}; "
                f"the run would record nothing"
            )

    @property
    def n_steps(self):
        return int(round(self.t_end / self.dt))

    @property
    def n_records(self):
        return self.n_steps // self.record_every + 1

    def times(self):
        return np.arange(self.n_records) * (self.record_every * self.dt)

    def validate_rates(self, params, g_max):
        """Stability guard: the fastest drift rate must stay well inside
        one step, dt * max(omega, kappa, g sqrt(N_A), J) < 0.1."""
        fastest = max(
            params.omega, params.kappa, params.hop_j,
            abs(g_max) * np.sqrt(params.n_atoms),
        )
        if self.dt * fastest >= 0.1:
            raise ConfigError(
                f"dt = {self.dt} ms is too coarse for the fastest rate "
                f"{fastest:.3g} rad/ms (dt * rate = {self.dt * fastest:.3g} "
                f">= 0.1); reduce dt"
            )


@dataclass(frozen=True)
class NoiseStream:
    """Identifies one trajectory's RNG stream.

    Streams are derived counter-style from (seed, trajectory_index) via
    numpy's SeedSequence spawn keys, so identical identifiers reproduce
    identical draws independent of thread scheduling.
    """

    seed: int
    trajectory_index: int

    def generator(self):
        ss = np.random.SeedSequence(
            entropy=self.seed, spawn_key=(self.trajectory_index,)
        )
        return np.random.Generator(np.random.PCG64(ss))


@dataclass
class TrajectorySeries:
    """Recorded observables of a single trajectory."""

    times: np.ndarray
    photon: np.ndarray
    imbalance: np.ndarray
    atoms: np.ndarray
    cavity_re: np.ndarray
    theta_trace: np.ndarray
    g_trace: np.ndarray
    final_state: SystemState


@dataclass
class TrajectoryBatch:
    """Per-trajectory recorded observables of a full ensemble, shape (n_rec, n_traj)."""

    times: np.ndarray
    photon: np.ndarray
    imbalance: np.ndarray
    atoms: np.ndarray
    cavity_re: np.ndarray
    theta_trace: np.ndarray
    g_trace: np.ndarray
    atoms_per_traj: np.ndarray


@dataclass
class EnsembleSeries:
    """Time-gridded ensemble statistics of a trajectory ensemble."""

    times: np.ndarray
    mean_photon: np.ndarray
    std_photon: np.ndarray
    mean_imbalance: np.ndarray
    std_imbalance: np.ndarray
    mean_atoms: np.ndarray
    theta_trace: np.ndarray
    g_trace: np.ndarray
    n_traj: int


def drift(state, g, theta, params):
    """Deterministic part of the equations of motion at one instant.

    Returns a SystemState-shaped derivative:
        d alpha/dt = -(kappa + i omega) alpha + i g D
        d b_j/dt   = i g (alpha + alpha*)(-1)^j b_j
                     + i J (e^{i theta} b_{j+1} + e^{-i theta} b_{j-1})
    with periodic site indices.
    """
    hop = params.hop_j * np.exp(1j * theta)
    signs = kernels.site_signs(state.sites.size)
    dcav, dsites = kernels.purepy.drift_arrays(
        np.complex128(state.cavity), state.sites, g, hop,
        params.kappa, params.omega, signs,
    )
    return SystemState(cavity=complex(dcav), sites=dsites)


def sample_initial(params, atoms_this_traj, noise):
    """Draw one initial state from the Wigner distribution.

    Cavity: vacuum, alpha = (eta1 + i eta2)/2.  Sites: coherent state
    with atoms_this_traj/M atoms each, b_j = sqrt(n/M) + (eta + i eta')/2
    (variance 1/4 per quadrature).
    """
    if not atoms_this_traj > 0:
        raise ConfigError(f"atom number must be > 0, got {atoms_this_traj}")
    rng = noise.generator()
    m = params.n_sites
    draws = rng.standard_normal(2 + 2 * m)
    cavity = 0.5 * (draws[0] + 1j * draws[1])
    eta = draws[2:].reshape(m, 2)
    sites = np.sqrt(atoms_this_traj / m) + 0.5 * (eta[:, 0] + 1j * eta[:, 1])
    return SystemState(cavity=cavity, sites=sites)


def deterministic_initial(params, imbalance=0.0):
    """Noise-free initial state with an optional seeded imbalance.

    Sites get real amplitudes sqrt((N_A +/- imbalance)/M) on the two
    sublattices (so the recorded imbalance starts at exactly the given
    value) and the cavity starts empty.  A small nonzero imbalance lets
    the deterministic dynamics reveal the superradiant instability,
    which the symmetric point would mask forever.
    """
    n, m = params.n_atoms, params.n_sites
    if abs(imbalance) >= n:
        raise ConfigError("seed imbalance must be smaller than the atom number")
    even = np.sqrt((n + imbalance) / m)
    odd = np.sqrt((n - imbalance) / m)
    sites = np.where(np.arange(m) % 2 == 0, even, odd).astype(np.complex128)
    return SystemState(cavity=0.0 + 0.0j, sites=sites)


def step(state, t, dt, schedule, params, rng=None):
    """Advance one step: second-order split drift (controls evaluated at
    both sub-step times), then the additive cavity noise increment.
    rng=None integrates the noiseless equations."""
    signs = kernels.site_signs(state.sites.size)
    t1 = t + dt
    g0, g1 = schedule.g(t), schedule.g(t1)
    hop0 = params.hop_j * np.exp(1j * schedule.theta(t))
    hop1 = params.hop_j * np.exp(1j * schedule.theta(t1))
    cav, sites = kernels.purepy.split_step(
        np.complex128(state.cavity), state.sites, g0, g1, hop0, hop1,
        params.kappa, params.omega, dt, signs,
    )
    if rng is not None:
        eta = rng.standard_normal(2)
        cav = cav + np.sqrt(params.kappa * dt / 2.0) * (eta[0] + 1j * eta[1])
    out = SystemState(cavity=complex(cav), sites=sites)
    if not (np.isfinite(out.cavity) and np.isfinite(out.sites).all()):
        raise NonFiniteError(f"state became non-finite at t = {t1:.6g} ms", time=t1)
    return out


def _control_grids(schedule, params, config):
    t_grid = np.arange(config.n_steps + 1) * config.dt
    g_grid = np.asarray(schedule.g(t_grid), dtype=np.float64)
    theta_grid = np.asarray(schedule.theta(t_grid), dtype=np.float64)
    hop_grid = params.hop_j * np.exp(1j * theta_grid)
    return g_grid, hop_grid, theta_grid


def _record_controls(schedule, config):
    times = config.times()
    theta_trace = np.asarray(schedule.theta(times), dtype=np.float64)
    g_trace = np.asarray(schedule.g(times), dtype=np.float64)
    return times, theta_trace, g_trace


def _integrate_block(cav, sites, noise, g_grid, hop_grid, params, config, outs):
    fail = kernels.integrate_batch(
        cav, sites, noise, g_grid, hop_grid, params.kappa, params.omega,
        config.dt, config.record_every, *outs,
    )
    return fail


def integrate_trajectory(schedule, params, config, noise, atoms_this_traj=None):
    """Integrate a single stochastic trajectory and record observables."""
    config.validate_rates(params, schedule.g_final)
    sampler = None
    if atoms_this_traj is not None:
        sampler = lambda idx, rng: atoms_this_traj
    cav, sites, noise_arr, _ = _prepare_batch(
        [noise.trajectory_index], noise.seed, params, config, sampler,
        stream_factory=lambda idx: noise,
    )
    g_grid, hop_grid, _ = _control_grids(schedule, params, config)
    n_rec = config.n_records
    outs = tuple(np.empty((n_rec, 1)) for _ in range(4))
    fail = _integrate_block(cav, sites, noise_arr, g_grid, hop_grid,
                            params, config, outs)
    if fail is not None:
        rec, _ = fail
        t_fail = rec * config.record_every * config.dt
        raise NonFiniteError(
            f"trajectory {noise.trajectory_index} became non-finite "
            f"at t = {t_fail:.6g} ms",
            time=t_fail, trajectory=noise.trajectory_index,
        )
    times, theta_trace, g_trace = _record_controls(schedule, config)
    photon, imbalance, atoms, cav_re = (o[:, 0] for o in outs)
    return TrajectorySeries(
        times=times, photon=photon, imbalance=imbalance, atoms=atoms,
        cavity_re=cav_re, theta_trace=theta_trace, g_trace=g_trace,
        final_state=SystemState(cavity=complex(cav[0]), sites=sites[0]),
    )


def run_deterministic(schedule, params, config, initial_state):
    """Integrate the noiseless equations from an explicit initial state."""
    config.validate_rates(params, schedule.g_final)
    cav = np.array([initial_state.cavity], dtype=np.complex128)
    sites = initial_state.sites[None, :].astype(np.complex128)
    noise_arr = np.zeros((1, config.n_steps, 2))
    g_grid, hop_grid, _ = _control_grids(schedule, params, config)
    n_rec = config.n_records
    outs = tuple(np.empty((n_rec, 1)) for _ in range(4))
    fail = _integrate_block(cav, sites, noise_arr, g_grid, hop_grid,
                            params, config, outs)
    if fail is not None:
        rec, _ = fail
        t_fail = rec * config.record_every * config.dt
        raise NonFiniteError(
            f"deterministic run became non-finite at t = {t_fail:.6g} ms",
            time=t_fail,
        )
    times, theta_trace, g_trace = _record_controls(schedule, config)
    photon, imbalance, atoms, cav_re = (o[:, 0] for o in outs)
    return TrajectorySeries(
        times=times, photon=photon, imbalance=imbalance, atoms=atoms,
        cavity_re=cav_re, theta_trace=theta_trace, g_trace=g_trace,
        final_state=SystemState(cavity=complex(cav[0]), sites=sites[0]),
    )


def _prepare_batch(indices, seed, params, config, atom_sampler, stream_factory):
    """Sample initial states and noise for a contiguous trajectory block."""
    m = params.n_sites
    b = len(indices)
    cav = np.empty(b, dtype=np.complex128)
    sites = np.empty((b, m), dtype=np.complex128)
    noise_arr = np.empty((b, config.n_steps, 2))
    atoms = np.empty(b)
    for row, idx in enumerate(indices):
        stream = stream_factory(idx) if stream_factory else NoiseStream(seed, idx)
        rng = stream.generator()
        atoms[row] = atom_sampler(idx, rng) if atom_sampler else params.n_atoms
        if not atoms[row] > 0:
            raise ConfigError(
                f"atom sampler returned non-positive atom number "
                f"{atoms[row]} for trajectory {idx}"
            )
        draws = rng.standard_normal(2 + 2 * m)
        cav[row] = 0.5 * (draws[0] + 1j * draws[1])
        eta = draws[2:].reshape(m, 2)
        sites[row] = np.sqrt(atoms[row] / m) + 0.5 * (eta[:, 0] + 1j * eta[:, 1])
        noise_arr[row] = rng.standard_normal((config.n_steps, 2))
    return cav, sites, noise_arr, atoms


def run_trajectories(schedule, params, config, n_traj, seed,
                     atom_sampler=None, threads=1, stream_factory=None):
    """Integrate n_traj independent trajectories, keeping per-trajectory series.

    The ensemble is split into fixed-size blocks executed on a thread
    pool (the compiled kernel releases the GIL); block boundaries and
    all RNG streams depend only on (seed, trajectory index), so the
    result is identical for any thread count.
    """
    if n_traj < 2:
        raise ConfigError(f"an ensemble needs n_traj >= 2, got {n_traj}")
    config.validate_rates(params, schedule.g_final)
    g_grid, hop_grid, _ = _control_grids(schedule, params, config)
    n_rec = config.n_records
    photon = np.empty((n_rec, n_traj))
    imbalance = np.empty((n_rec, n_traj))
    atoms = np.empty((n_rec, n_traj))
    cav_re = np.empty((n_rec, n_traj))
    atoms_per_traj = np.empty(n_traj)

    blocks = [range(lo, min(lo + _BATCH, n_traj)) for lo in range(0, n_traj, _BATCH)]

    def run_block(indices):
        cav, sites, noise_arr, atoms_drawn = _prepare_batch(
            indices, seed, params, config, atom_sampler, stream_factory)
        sl = slice(indices[0], indices[-1] + 1)
        atoms_per_traj[sl] = atoms_drawn
        outs = tuple(np.empty((n_rec, len(indices))) for _ in range(4))
        fail = _integrate_block(cav, sites, noise_arr, g_grid, hop_grid,
                                params, config, outs)
        photon[:, sl], imbalance[:, sl], atoms[:, sl], cav_re[:, sl] = outs
        if fail is not None:
            rec, row = fail
            return indices[row], rec * config.record_every * config.dt
        return None

    failures = []
    if threads <= 1 or len(blocks) == 1:
        for block in blocks:
            bad = run_block(block)
            if bad is not None:
                failures.append(bad)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for bad in pool.map(run_block, blocks):
                if bad is not None:
                    failures.append(bad)
    if failures:
        failures.sort()
        idx, t_fail = failures[0]
        raise NonFiniteError(
            f"{len(failures)} trajectory failure(s); first: trajectory {idx} "
            f"non-finite at t = {t_fail:.6g} ms",
            time=t_fail, trajectory=idx,
        )

    times, theta_trace, g_trace = _record_controls(schedule, config)
    return TrajectoryBatch(
        times=times, photon=photon, imbalance=imbalance, atoms=atoms,
        cavity_re=cav_re, theta_trace=theta_trace, g_trace=g_trace,
        atoms_per_traj=atoms_per_traj,
    )


def reduce_ensemble(batch):
    """Collapse per-trajectory series to ensemble mean/std statistics."""
    return EnsembleSeries(
        times=batch.times,
        mean_photon=batch.photon.mean(axis=1),
        std_photon=batch.photon.std(axis=1, ddof=1),
        mean_imbalance=batch.imbalance.mean(axis=1),
        std_imbalance=batch.imbalance.std(axis=1, ddof=1),
        mean_atoms=batch.atoms.mean(axis=1),
        theta_trace=batch.theta_trace,
        g_trace=batch.g_trace,
        n_traj=batch.photon.shape[1],
    )


def run_ensemble(schedule, params, config, n_traj, seed,
                 atom_sampler=None, threads=1, stream_factory=None,
                 return_trajectories=False):
    """Run an ensemble of TWA trajectories and reduce it to statistics."""
    batch = run_trajectories(
        schedule, params, config, n_traj, seed,
        atom_sampler=atom_sampler, threads=threads,
        stream_factory=stream_factory,
    )
    series = reduce_ensemble(batch)
    if return_trajectories:
        return series, batch
    return series
