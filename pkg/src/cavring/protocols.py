"""Time-dependent control schedules and the rotation-sensing protocols.

A sensing run ramps the light-matter coupling from zero to its working
point (just above threshold) within t_ramp, optionally ramps the bias
gauge phase theta_0 alongside it, lets the system relax until t_drive,
and then modulates the phase sinusoidally,

    theta(t) = theta_0 + delta_theta * sin(omega_drive * (t - t_drive)),

mimicking a time-varying rotation.  The readout is the ensemble mean
photon number; its Fourier spectrum distinguishes operation at zero
bias (quadratic response, frequency-doubled signal) from biased
operation (linear response at the drive frequency).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import run_ensemble
from .errors import ConfigError, DomainError
from .model import critical_coupling


@dataclass(frozen=True)
class Schedule:
    """Piecewise control functions g(t) and theta(t).

    g ramps linearly from 0 to g_final over t_ramp and stays constant;
    theta ramps linearly from 0 to theta0 over the same t_ramp, holds,
    and oscillates with amplitude delta_theta at omega_drive after
    t_drive.  t_ramp = 0 means both controls are constant from t = 0.
    """

    g_final: float
    t_ramp: float = 0.0
    theta0: float = 0.0
    delta_theta: float = 0.0
    omega_drive: float = 0.0
    t_drive: float = 0.0

    def __post_init__(self):
        if self.g_final < 0:
            raise ConfigError(f"g_final must be >= 0, got {self.g_final}")
        if self.t_ramp < 0:
            raise ConfigError(f"t_ramp must be >= 0, got {self.t_ramp}")

    @classmethod
    def constant(cls, g, theta):
        return cls(g_final=g, theta0=theta)

    def _ramp(self, t):
        if self.t_ramp == 0.0:
            return np.ones_like(np.asarray(t, dtype=np.float64))
        return np.clip(np.asarray(t, dtype=np.float64) / self.t_ramp, 0.0, 1.0)

    def g(self, t):
        out = self.g_final * self._ramp(t)
        return out if out.ndim else float(out)

    def theta(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = self.theta0 * self._ramp(t)
        if self.delta_theta != 0.0:
            out = out + np.where(
                t >= self.t_drive,
                self.delta_theta * np.sin(self.omega_drive * (t - self.t_drive)),
                0.0,
            )
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SensingConfig:
    """Parameters of one sensing experiment (angles in rad, times in ms)."""

    theta0: float = 0.0
    delta_theta: float = math.pi / 20
    omega_drive: float = math.pi  # 2pi x 0.5 kHz
    g_final_rel: float = 1.09
    t_ramp: float = 1.0
    t0: float = 3.0
    t_end: float = 10.0
    n_traj: int = 1000

    def __post_init__(self):
        if not (self.t_ramp <= self.t0 <= self.t_end):
            raise ConfigError(
                f"need t_ramp <= t0 <= t_end, got "
                f"({self.t_ramp}, {self.t0}, {self.t_end})"
            )
        if self.delta_theta < 0:
            raise ConfigError(f"delta_theta must be >= 0, got {self.delta_theta}")
        if abs(self.theta0) + self.delta_theta >= math.pi / 2:
            raise ConfigError(
                "the drive must keep |theta| below pi/2 "
                "(cos(theta) >= 0 regime); reduce theta0 or delta_theta"
            )


@dataclass(frozen=True)
class FluctuationConfig:
    """Gaussian shot-to-shot particle-number distribution."""

    mean_atoms: float
    sigma_atoms: float = 0.0

    def __post_init__(self):
        if not self.mean_atoms > 0:
            raise ConfigError(f"mean_atoms must be > 0, got {self.mean_atoms}")
        if self.sigma_atoms < 0:
            raise ConfigError(f"sigma_atoms must be >= 0, got {self.sigma_atoms}")

    def sampler(self):
        """Per-trajectory atom-number draw, truncated at 0.1 * mean.

        sigma = 0 consumes no randomness, so such an ensemble is
        bit-identical to one run at the constant mean atom number.
        """
        mean, sigma = self.mean_atoms, self.sigma_atoms
        if sigma == 0.0:
            return lambda idx, rng: mean
        floor = 0.1 * mean

        def draw(idx, rng):
            value = rng.normal(mean, sigma)
            while value < floor:
                value = rng.normal(mean, sigma)
            return value

        return draw


def build_sensing_schedule(cfg, params):
    """Schedule of the sensing protocol; g is calibrated against the
    non-rotating threshold g_crit(theta = 0)."""
    g0crit = critical_coupling(params, 0.0)
    return Schedule(
        g_final=cfg.g_final_rel * g0crit,
        t_ramp=cfg.t_ramp,
        theta0=cfg.theta0,
        delta_theta=cfg.delta_theta,
        omega_drive=cfg.omega_drive,
        t_drive=cfg.t0,
    )


def run_sensing(cfg, params, integ, seed, threads=1, return_trajectories=False):
    """Sensing run at constant atom number."""
    schedule = build_sensing_schedule(cfg, params)
    config = replace(integ, t_end=cfg.t_end)
    return run_ensemble(
        schedule, params, config, cfg.n_traj, seed, threads=threads,
        return_trajectories=return_trajectories,
    )


def run_sensing_with_fluctuations(cfg, fluct, params, integ, seed, threads=1):
    """Sensing run with Gaussian shot-to-shot atom numbers.

    The schedule's threshold calibration uses the nominal mean atom
    number (the apparatus is calibrated once), not per-shot values.
    """
    if params.n_atoms != fluct.mean_atoms:
        raise ConfigError(
            "params.n_atoms must equal fluct.mean_atoms so the threshold "
            "calibration refers to the nominal atom number"
        )
    schedule = build_sensing_schedule(cfg, params)
    config = replace(integ, t_end=cfg.t_end)
    return run_ensemble(
        schedule, params, config, cfg.n_traj, seed,
        atom_sampler=fluct.sampler(), threads=threads,
    )


def response_spectrum(series, window, omega_drive):
    """Fourier magnitude spectrum of the mean photon readout.

    The mean is removed and a Hann taper applied before the transform,
    suppressing leakage from any residual settling transient.  The
    window must contain at least 8 drive periods so the drive frequency
    and its double sit on well-separated bins.

    Returns (frequencies, magnitudes) with frequencies in rad/ms.
    """
    t_lo, t_hi = window
    mask = (series.times >= t_lo) & (series.times <= t_hi)
    n = int(mask.sum())
    if n < 16:
        raise DomainError(f"window contains only {n} samples")
    span = series.times[mask][-1] - series.times[mask][0]
    periods = span * omega_drive / (2.0 * math.pi)
    if periods < 8.0:
        raise DomainError(
            f"window spans {periods:.2f} drive periods; at least 8 are "
            f"needed to resolve the drive frequency and its harmonic"
        )
    x = series.mean_photon[mask]
    x = x - x.mean()
    taper = np.hanning(n)
    spectrum = np.fft.rfft(x * taper)
    dt_sample = series.times[mask][1] - series.times[mask][0]
    freqs = 2.0 * math.pi * np.fft.rfftfreq(n, d=dt_sample)
    return freqs, np.abs(spectrum)


def dominant_frequency(freqs, magnitudes):
    """Frequency of the largest magnitude over strictly positive bins."""
    positive = freqs > 0
    return float(freqs[positive][np.argmax(magnitudes[positive])])


def magnitude_at(freqs, magnitudes, target):
    """Magnitude at the bin closest to the target frequency."""
    return float(magnitudes[np.argmin(np.abs(freqs - target))])
