import subprocess
import sys

import pytest


def _run_cli(args):
    result = subprocess.run([sys.executable, "-m", "cavring.cli"] + args,
                            capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="session")
def sense_csv(tmp_path_factory):
    """Small real sensing run through the simulator CLI (the primary
    component is consumed only through its command-line interface)."""
    outdir = tmp_path_factory.mktemp("sense")
    _run_cli(["sense", "--outdir", str(outdir), "--n-traj", "4",
              "--t-ramp", "0.5", "--t0", "1.0", "--t-end", "4.0",
              "--omega-drive", "4", "--delta-theta", "0.02",
              "--theta0", "0.25", "--seed", "5"])
    return outdir / "sense_series.csv"


@pytest.fixture(scope="session")
def sweep_csvs(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("sweep")
    _run_cli(["sweep", "--outdir", str(outdir),
              "--theta-min", "0", "--theta-max", "0.3", "--theta-steps", "3",
              "--g-rel-min", "0.7", "--g-rel-max", "1.3", "--g-rel-steps", "3",
              "--n-traj", "4", "--t-end", "6.0", "--seed", "6",
              "--threads", "2"])
    return outdir / "phase_diagram.csv", outdir / "boundary.csv"
