"""CSV loading with strict schema validation.

The simulator's CSV files start with '#' metadata lines followed by a
header row.  Columns are validated against the documented schema before
any plotting; a mismatch aborts with a diff of missing/unexpected
names, so silently mislabeled data can never reach a figure.
"""

import numpy as np

SERIES_COLUMNS = ("t_ms", "theta_rad", "g_rel", "mean_photon", "std_photon",
                  "mean_imbalance", "std_imbalance", "mean_atoms")
PHASE_COLUMNS = ("theta_rad", "g_rel", "photon_steady", "is_sr", "converged")
BOUNDARY_COLUMNS = ("theta_rad", "g_rel_crit")


class SchemaError(ValueError):
    """Input CSV does not match the documented column schema."""


def read_table(path, expected_columns):
    """Load a simulator CSV as a dict of named float columns."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    rows = [line for line in lines if line and not line.startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: no header line found")
    header = tuple(name.strip() for name in rows[0].split(","))
    if header != tuple(expected_columns):
        missing = [c for c in expected_columns if c not in header]
        unexpected = [c for c in header if c not in expected_columns]
        raise SchemaError(
            f"{path}: column schema mismatch\n"
            f"  expected: {', '.join(expected_columns)}\n"
            f"  found:    {', '.join(header)}\n"
            f"  missing:  {', '.join(missing) or '-'}\n"
            f"  unexpected: {', '.join(unexpected) or '-'}"
        )
    if not rows[1:]:
        raise SchemaError(f"{path}: no data rows")
    data = np.array([[float(v) for v in line.split(",")]
                     for line in rows[1:]])
    if data.shape[1] != len(header):
        raise SchemaError(f"{path}: ragged rows")
    return {name: data[:, k] for k, name in enumerate(header)}
