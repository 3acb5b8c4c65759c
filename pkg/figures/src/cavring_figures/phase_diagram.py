"""Phase-diagram figure: photon heatmap + NP/SR panel from sweep CSVs.

    cavring-plot-phase phase_diagram.csv [boundary.csv] -o diagram.png

Left panel: steady-state photon number over (theta/pi, g/g0crit) with
the analytic boundary overlaid in red when the boundary CSV is given.
Right panel: the binary NP/SR classification.  Raster or vector output
follows the file extension.
"""

import argparse
import math
import sys
from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap

from .schema import BOUNDARY_COLUMNS, PHASE_COLUMNS, SchemaError, read_table


@dataclass
class FigureJob:
    diagram_csv: str
    output: str
    boundary_csv: str = None
    colormap: str = "inferno"


def _axis_edges(centers):
    """Cell edges around (possibly single) grid centers."""
    centers = np.asarray(centers, dtype=float)
    if centers.size == 1:
        half = 0.5 * (abs(centers[0]) if centers[0] != 0 else 0.5)
        return np.array([centers[0] - half, centers[0] + half])
    mids = 0.5 * (centers[1:] + centers[:-1])
    first = centers[0] - (mids[0] - centers[0])
    last = centers[-1] + (centers[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def _as_grid(table):
    thetas = np.unique(table["theta_rad"])
    g_rels = np.unique(table["g_rel"])
    if thetas.size * g_rels.size != table["theta_rad"].size:
        raise SchemaError("phase diagram rows do not form a full grid")
    shape = (thetas.size, g_rels.size)
    order = np.lexsort((table["g_rel"], table["theta_rad"]))
    photon = table["photon_steady"][order].reshape(shape)
    is_sr = table["is_sr"][order].reshape(shape)
    return thetas, g_rels, photon, is_sr


def plot_phase_diagram(job):
    table = read_table(job.diagram_csv, PHASE_COLUMNS)
    thetas, g_rels, photon, is_sr = _as_grid(table)

    boundary = None
    if job.boundary_csv is not None:
        overlay = read_table(job.boundary_csv, BOUNDARY_COLUMNS)
        boundary = (overlay["theta_rad"], overlay["g_rel_crit"])
    else:
        print("warning: no boundary CSV given; skipping the analytic overlay",
              file=sys.stderr)

    x_edges = _axis_edges(thetas / math.pi)
    y_edges = _axis_edges(g_rels)

    fig, (ax_photon, ax_phase) = plt.subplots(
        1, 2, figsize=(9.2, 3.8), constrained_layout=True)

    mesh = ax_photon.pcolormesh(x_edges, y_edges, photon.T,
                                cmap=job.colormap, shading="flat")
    fig.colorbar(mesh, ax=ax_photon,
                 label=r"$|\alpha|^2_\mathrm{steady}$")
    ax_photon.set_title("steady-state photon number")

    phase_cmap = ListedColormap(["#30409a", "#d7762d"])
    ax_phase.pcolormesh(x_edges, y_edges, is_sr.T, cmap=phase_cmap,
                        vmin=0, vmax=1, shading="flat")
    ax_phase.set_title("phase (NP / SR)")

    for ax in (ax_photon, ax_phase):
        if boundary is not None:
            ax.plot(boundary[0] / math.pi, boundary[1], color="red",
                    linewidth=2.0, label=r"$\sqrt{\cos\theta}$")
            ax.legend(loc="upper right", framealpha=0.8)
        ax.set_xlabel(r"$\theta/\pi$")
        ax.set_ylabel(r"$g/g_{0,\mathrm{crit}}$")
        ax.set_xlim(x_edges[0], x_edges[-1])
        ax.set_ylim(y_edges[0], y_edges[-1])

    fig.savefig(job.output)
    plt.close(fig)
    return job.output


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("diagram_csv", help="phase_diagram.csv from the sweep")
    parser.add_argument("boundary_csv", nargs="?", default=None,
                        help="boundary.csv with the analytic curve")
    parser.add_argument("-o", "--output", required=True,
                        help="image path (.png/.pdf/.svg)")
    parser.add_argument("--colormap", default="inferno")
    args = parser.parse_args(argv)
    job = FigureJob(diagram_csv=args.diagram_csv,
                    boundary_csv=args.boundary_csv,
                    output=args.output, colormap=args.colormap)
    try:
        plot_phase_diagram(job)
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
