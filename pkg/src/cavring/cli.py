"""Command-line interface: ``cavring <subcommand>``.

Subcommands
-----------
meanfield   variational minimizer table over (theta, g_rel) -> meanfield.csv
trajectory  one stochastic trajectory at constant controls -> series CSV/JSON
ensemble    TWA ensemble at constant controls -> series CSV/JSON
sweep       phase diagram -> phase_diagram.csv + boundary.csv
sense       sensing protocol -> series CSV + spectrum.csv

Configuration comes from an INI file (``--config``), overridden by
flags; every output embeds the resolved configuration.  Angles are
given as fractions of pi, rates in 2pi x kHz, times in ms.  Exit codes:
0 success, 2 configuration error, 1 numerical/runtime failure; errors
are emitted as one JSON record on stderr.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import meanfield, output, protocols, sweep
from .config import parse_config
from .dynamics import (EnsembleSeries, NoiseStream, integrate_trajectory,
                       run_ensemble)
from .errors import CavringError, ConfigError, DomainError
from .model import critical_coupling
from .protocols import FluctuationConfig, Schedule
from .units import rad_per_ms_to_twopi_khz


def _add_common(sub):
    sub.add_argument("--config", help="INI configuration file")
    sub.add_argument("--outdir", default="cavring_out",
                     help="directory for output files (default: %(default)s)")
    sub.add_argument("--seed", help="master RNG seed")
    sub.add_argument("--threads", help="worker threads, integer or 'auto'")
    sub.add_argument("--format", help="series output format: csv or json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cavring",
        description="Rotation-sensing atom-cavity ring simulator",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("meanfield", help="mean-field minimizer table")
    _add_common(p)
    p.add_argument("--theta", help="comma list of gauge phases (fractions of pi)")
    p.add_argument("--g-rel", help="comma list of couplings g/g0crit")

    for name in ("trajectory", "ensemble"):
        p = commands.add_parser(
            name, help=f"{name} at constant controls")
        _add_common(p)
        p.add_argument("--theta", help="gauge phase (fraction of pi)")
        p.add_argument("--g-rel", help="coupling g/g0crit")
        p.add_argument("--t-end", help="duration in ms")
        if name == "ensemble":
            p.add_argument("--n-traj", help="number of trajectories")

    p = commands.add_parser("sweep", help="phase diagram over (theta, g_rel)")
    _add_common(p)
    p.add_argument("--theta-min", help="theta axis start (fraction of pi)")
    p.add_argument("--theta-max", help="theta axis end (fraction of pi)")
    p.add_argument("--theta-steps", help="theta axis points")
    p.add_argument("--g-rel-min", help="g_rel axis start")
    p.add_argument("--g-rel-max", help="g_rel axis end")
    p.add_argument("--g-rel-steps", help="g_rel axis points")
    p.add_argument("--n-traj", help="trajectories per grid point")
    p.add_argument("--t-end", help="per-point duration in ms")

    p = commands.add_parser("sense", help="time-dependent sensing protocol")
    _add_common(p)
    p.add_argument("--theta0", help="bias phase (fraction of pi)")
    p.add_argument("--delta-theta", help="drive amplitude (fraction of pi)")
    p.add_argument("--omega-drive", help="drive frequency (2pi x kHz)")
    p.add_argument("--g-rel", help="working coupling g/g0crit")
    p.add_argument("--n-traj", help="number of trajectories")
    p.add_argument("--t-ramp", help="coupling ramp duration in ms")
    p.add_argument("--t0", help="drive start time in ms")
    p.add_argument("--t-end", help="duration in ms")
    p.add_argument("--sigma-frac",
                   help="shot-to-shot atom-number sigma as a fraction of N")
    return parser


def _overrides(args):
    over = {}
    direct = {
        "seed": ("run", "seed"),
        "threads": ("run", "threads"),
        "format": ("run", "format"),
    }
    per_command = {
        "meanfield": {"theta": ("meanfield", "theta"),
                      "g_rel": ("meanfield", "g_rel")},
        "trajectory": {"theta": ("ensemble", "theta"),
                       "g_rel": ("ensemble", "g_rel"),
                       "t_end": ("ensemble", "t_end")},
        "ensemble": {"theta": ("ensemble", "theta"),
                     "g_rel": ("ensemble", "g_rel"),
                     "t_end": ("ensemble", "t_end"),
                     "n_traj": ("ensemble", "n_traj")},
        "sweep": {"theta_min": ("sweep", "theta_min"),
                  "theta_max": ("sweep", "theta_max"),
                  "theta_steps": ("sweep", "theta_steps"),
                  "g_rel_min": ("sweep", "g_rel_min"),
                  "g_rel_max": ("sweep", "g_rel_max"),
                  "g_rel_steps": ("sweep", "g_rel_steps"),
                  "n_traj": ("sweep", "n_traj"),
                  "t_end": ("sweep", "t_end")},
        "sense": {"theta0": ("sense", "theta0"),
                  "delta_theta": ("sense", "delta_theta"),
                  "omega_drive": ("sense", "omega_drive"),
                  "g_rel": ("sense", "g_rel"),
                  "n_traj": ("sense", "n_traj"),
                  "t_ramp": ("sense", "t_ramp"),
                  "t0": ("sense", "t0"),
                  "t_end": ("sense", "t_end"),
                  "sigma_frac": ("sense", "sigma_frac")},
    }
    mapping = dict(direct)
    mapping.update(per_command.get(args.command, {}))
    for flag, target in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            over[target] = value
    return over


def _outdir(args):
    path = Path(args.outdir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _series_path(outdir, cfg, stem):
    ext = "json" if cfg.format == "json" else "csv"
    return outdir / f"{stem}.{ext}"


def _write_series(path, cfg, series, g0crit, meta):
    if cfg.format == "json":
        output.write_series_json(path, series, g0crit, meta)
    else:
        output.write_series_csv(path, series, g0crit, meta)


def cmd_meanfield(args, cfg, outdir):
    params = cfg.params
    g0 = critical_coupling(params, 0.0)
    rows = []
    for theta in cfg.raw["meanfield"]["theta"]:
        for g_rel in cfg.raw["meanfield"]["g_rel"]:
            point = meanfield.minimize_energy(theta, g_rel * g0, params)
            rows.append((theta, g_rel, point.delta, point.alpha.real,
                         point.alpha.imag, abs(point.alpha) ** 2))
    path = outdir / "meanfield.csv"
    output.write_meanfield_csv(path, rows, _meta(cfg, "meanfield"))
    print(f"meanfield: wrote {len(rows)} points to {path}")
    return 0


def _meta(cfg, command, **extra):
    meta = cfg.metadata(command)
    meta.update(output.params_metadata(cfg.params))
    meta.update(extra)
    return meta


def cmd_trajectory(args, cfg, outdir):
    params = cfg.params
    section = cfg.raw["ensemble"]
    g0 = critical_coupling(params, 0.0)
    schedule = Schedule.constant(section["g_rel"] * g0, section["theta"])
    integ = cfg.integrator(section["t_end"])
    series = integrate_trajectory(
        schedule, params, integ, NoiseStream(cfg.seed, 0))
    # a single trajectory is serialized in the ensemble schema with
    # zero spread
    zeros = np.zeros_like(series.photon)
    wrapped = EnsembleSeries(
        times=series.times, mean_photon=series.photon, std_photon=zeros,
        mean_imbalance=series.imbalance, std_imbalance=zeros,
        mean_atoms=series.atoms, theta_trace=series.theta_trace,
        g_trace=series.g_trace, n_traj=1,
    )
    path = _series_path(outdir, cfg, "trajectory")
    _write_series(path, cfg, wrapped, g0,
                  _meta(cfg, "trajectory", g0crit_2pikhz=rad_per_ms_to_twopi_khz(g0)))
    print(f"trajectory: final photon number {series.photon[-1]:.6g}, "
          f"wrote {path}")
    return 0


def cmd_ensemble(args, cfg, outdir):
    params = cfg.params
    section = cfg.raw["ensemble"]
    g0 = critical_coupling(params, 0.0)
    schedule = Schedule.constant(section["g_rel"] * g0, section["theta"])
    integ = cfg.integrator(section["t_end"])
    series = run_ensemble(schedule, params, integ, section["n_traj"],
                          cfg.seed, threads=cfg.threads)
    path = _series_path(outdir, cfg, "ensemble")
    _write_series(path, cfg, series, g0,
                  _meta(cfg, "ensemble", g0crit_2pikhz=rad_per_ms_to_twopi_khz(g0)))
    tail = series.mean_photon[-max(1, len(series.mean_photon) // 5):].mean()
    print(f"ensemble: tail mean photon number {tail:.6g}, wrote {path}")
    return 0


def cmd_sweep(args, cfg, outdir):
    params = cfg.params
    grid = cfg.sweep_grid()
    integ = cfg.integrator(grid.t_end)
    diagram = sweep.sweep_phase_diagram(grid, params, integ=integ,
                                        threads=cfg.threads)
    meta = _meta(cfg, "sweep")
    diagram_path = outdir / "phase_diagram.csv"
    boundary_path = outdir / "boundary.csv"
    output.write_phase_diagram_csv(diagram_path, diagram, meta)
    output.write_boundary_csv(boundary_path, diagram, meta)
    n_sr = int(diagram.is_sr.sum())
    n_unconv = int((~diagram.converged).sum())
    first = sweep.empirical_boundary(diagram)[0]
    estimate = (f"boundary estimate at theta={first[0]:.3g}: "
                f"g_rel={first[1]:.3g}" if np.isfinite(first[1])
                else "boundary outside grid")
    print(f"sweep: {n_sr}/{diagram.is_sr.size} SR points, "
          f"{n_unconv} unconverged, {estimate}, "
          f"wrote {diagram_path} and {boundary_path}")
    return 0


def cmd_sense(args, cfg, outdir):
    params = cfg.params
    sense_cfg = cfg.sensing()
    integ = cfg.integrator(sense_cfg.t_end)
    sigma = cfg.sigma_atoms()
    if sigma > 0:
        fluct = FluctuationConfig(mean_atoms=params.n_atoms, sigma_atoms=sigma)
        series = protocols.run_sensing_with_fluctuations(
            sense_cfg, fluct, params, integ, cfg.seed, threads=cfg.threads)
    else:
        series = protocols.run_sensing(sense_cfg, params, integ, cfg.seed,
                                       threads=cfg.threads)
    g0 = critical_coupling(params, 0.0)
    meta = _meta(cfg, "sense", g0crit_2pikhz=rad_per_ms_to_twopi_khz(g0))
    path = _series_path(outdir, cfg, "sense_series")
    if cfg.format == "json":
        output.write_series_json(path, series, g0, meta)
    else:
        output.write_series_csv(path, series, g0, meta)
    try:
        freqs, mags = protocols.response_spectrum(
            series, (sense_cfg.t0, sense_cfg.t_end), sense_cfg.omega_drive)
    except DomainError as err:
        # run too short for a resolved spectrum; the series alone is
        # still a valid artifact
        sys.stderr.write(f"warning: spectrum skipped: {err}\n")
        print(f"sense: wrote {path} (no spectrum)")
        return 0
    spec_path = outdir / "spectrum.csv"
    output.write_spectrum_csv(spec_path, freqs, mags, meta)
    peak = protocols.dominant_frequency(freqs, mags)
    print(f"sense: dominant response at {rad_per_ms_to_twopi_khz(peak):.4g} "
          f"(2pi x kHz), wrote {path} and {spec_path}")
    return 0


_COMMANDS = {
    "meanfield": cmd_meanfield,
    "trajectory": cmd_trajectory,
    "ensemble": cmd_ensemble,
    "sweep": cmd_sweep,
    "sense": cmd_sense,
}


def dispatch(command, cfg, args):
    outdir = _outdir(args)
    return _COMMANDS[command](args, cfg, outdir)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config, _overrides(args))
        return dispatch(args.command, cfg, args)
    except ConfigError as err:
        json.dump({"error_class": "config", "message": str(err)},
                  sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return 2
    except CavringError as err:
        json.dump({"error_class": "runtime", "message": str(err)},
                  sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
