"""Sensing-run figure: photon readout with noise band and phase trace.

    cavring-plot-sensing sense_series.csv -o sensing.png

Mean photon number vs time in dark red with the +/- 1 std ensemble band
shaded light red; the applied gauge phase theta(t) rides on a twin axis
in blue.  Raster or vector output follows the file extension.
"""

import argparse
import math
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .schema import SERIES_COLUMNS, SchemaError, read_table


@dataclass
class FigureJob:
    series_csv: str
    output: str


def plot_sensing(job):
    table = read_table(job.series_csv, SERIES_COLUMNS)
    t = table["t_ms"]
    photon = table["mean_photon"]
    std = table["std_photon"]
    theta = table["theta_rad"]

    fig, ax = plt.subplots(figsize=(6.4, 3.6), constrained_layout=True)
    ax.fill_between(t, photon - std, photon + std, color="#f2a49e",
                    label=r"$\pm 1\,\sigma$")
    ax.plot(t, photon, color="#8b1a1a", linewidth=1.6,
            label=r"$\langle|\alpha|^2\rangle$")
    ax.set_xlabel("t (ms)")
    ax.set_ylabel(r"$|\alpha|^2$", color="#8b1a1a")
    ax.tick_params(axis="y", labelcolor="#8b1a1a")

    twin = ax.twinx()
    twin.plot(t, theta / math.pi, color="#2c5aa0", linewidth=1.4,
              label=r"$\theta/\pi$")
    twin.set_ylabel(r"$\theta/\pi$", color="#2c5aa0")
    twin.tick_params(axis="y", labelcolor="#2c5aa0")

    handles1, labels1 = ax.get_legend_handles_labels()
    handles2, labels2 = twin.get_legend_handles_labels()
    ax.legend(handles1 + handles2, labels1 + labels2, loc="upper left",
              framealpha=0.85)

    fig.savefig(job.output)
    plt.close(fig)
    return job.output


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("series_csv",
                        help="sense_series.csv (or any series CSV)")
    parser.add_argument("-o", "--output", required=True,
                        help="image path (.png/.pdf/.svg)")
    args = parser.parse_args(argv)
    try:
        plot_sensing(FigureJob(series_csv=args.series_csv,
                               output=args.output))
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
