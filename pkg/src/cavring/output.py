"""Serialization of run results to CSV and JSON.

Every file starts with a metadata header (comment lines '# key = value')
echoing the fully resolved configuration and the artifact version, so a
result can always be traced back to its inputs.  Numeric values are
written with 9 significant digits; outputs contain nothing
run-dependent beyond the data (no timestamps), so identical
configurations produce byte-identical files.
"""

import json

import numpy as np

from . import __version__
from .units import rad_per_ms_to_twopi_khz

SERIES_COLUMNS = ("t_ms", "theta_rad", "g_rel", "mean_photon", "std_photon",
                  "mean_imbalance", "std_imbalance", "mean_atoms")
MEANFIELD_COLUMNS = ("theta_rad", "g_rel", "delta_opt", "alpha_re",
                     "alpha_im", "photon")
PHASE_COLUMNS = ("theta_rad", "g_rel", "photon_steady", "is_sr", "converged")
BOUNDARY_COLUMNS = ("theta_rad", "g_rel_crit")
SPECTRUM_COLUMNS = ("freq_2pikHz", "magnitude")


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def metadata_lines(meta):
    lines = [f"# cavring {__version__}"]
    for key, value in meta.items():
        lines.append(f"# {key} = {value}")
    return lines


def params_metadata(params):
    """Model parameters echoed in config units (2pi x kHz)."""
    return {
        "model.omega_2pikhz": _fmt(rad_per_ms_to_twopi_khz(params.omega)),
        "model.kappa_2pikhz": _fmt(rad_per_ms_to_twopi_khz(params.kappa)),
        "model.J_2pikhz": _fmt(rad_per_ms_to_twopi_khz(params.hop_j)),
        "model.N_atoms": _fmt(params.n_atoms),
        "model.M": params.n_sites,
        "model.omega_rec_2pikhz": _fmt(rad_per_ms_to_twopi_khz(params.omega_rec)),
    }


def _write_csv(path, meta, columns, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for line in metadata_lines(meta):
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_series_csv(path, series, g0crit, meta):
    """Time series of ensemble statistics; g is echoed relative to g0crit."""
    g_rel = series.g_trace / g0crit
    rows = zip(series.times, series.theta_trace, g_rel,
               series.mean_photon, series.std_photon,
               series.mean_imbalance, series.std_imbalance,
               series.mean_atoms)
    _write_csv(path, meta, SERIES_COLUMNS, rows)


def write_series_json(path, series, g0crit, meta):
    payload = {
        "metadata": {"cavring": __version__, **{k: str(v) for k, v in meta.items()}},
        "columns": {
            "t_ms": series.times.tolist(),
            "theta_rad": series.theta_trace.tolist(),
            "g_rel": (series.g_trace / g0crit).tolist(),
            "mean_photon": series.mean_photon.tolist(),
            "std_photon": series.std_photon.tolist(),
            "mean_imbalance": series.mean_imbalance.tolist(),
            "std_imbalance": series.std_imbalance.tolist(),
            "mean_atoms": series.mean_atoms.tolist(),
        },
        "n_traj": series.n_traj,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def write_meanfield_csv(path, rows, meta):
    _write_csv(path, meta, MEANFIELD_COLUMNS, rows)


def write_phase_diagram_csv(path, diagram, meta):
    grid = diagram.grid
    rows = []
    for i, theta in enumerate(grid.theta_values):
        for j, g_rel in enumerate(grid.g_rel_values):
            rows.append((theta, g_rel, diagram.photon_steady[i, j],
                         diagram.is_sr[i, j], diagram.converged[i, j]))
    _write_csv(path, meta, PHASE_COLUMNS, rows)


def write_boundary_csv(path, diagram, meta):
    _write_csv(path, meta, BOUNDARY_COLUMNS, diagram.boundary_analytic)


def write_spectrum_csv(path, freqs, magnitudes, meta):
    rows = zip(rad_per_ms_to_twopi_khz(freqs), magnitudes)
    _write_csv(path, meta, SPECTRUM_COLUMNS, rows)
