"""
CSV and JSON writers.

Floats are written with 17 significant digits so that every value parses
back to the identical double. Column layouts are documented in docs/schemas.md.
"""

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .. import __version__
from ..physics.retardation import delay_closed_form
from ..solvers.dynamics import eom_residuals
from ..utils.errors import ExportError

logger = logging.getLogger("Zitterdyn.export")

TRAJECTORY_SCHEMA = ("t", "x", "v", "a", "r", "residual")
ENERGY_SCHEMA = ("beta", "bdot", "E_exact", "E_rel", "Q_closed", "Q_series_N", "defect")
SWEEP_SCHEMA = ("beta", "certified_count", "max_re", "eta_1", "omega_1")


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def export_csv(records, schema, path):
    """
    Write records (mappings keyed by the schema columns) as CSV.

    Returns:
        number of data rows written
    """
    schema = tuple(schema)
    count = 0
    try:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(schema)
            for record in records:
                if set(record) != set(schema):
                    raise ExportError(
                        f"Record fields {sorted(record)} do not match schema {list(schema)}",
                        fields=sorted(record), schema=list(schema))
                writer.writerow([format_value(record[column]) for column in schema])
                count += 1
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=str(path)) from e
    logger.info(f"Wrote {count} rows to {path}")
    return count


def trajectory_records(trajectory, params):
    """
    Rows of the trajectory export.

    r is the closed-form delay of each node's kinematics; residual is left
    empty where the node's reception time lies past the end of the trajectory.
    """
    c, d = params.c, params.d
    r = delay_closed_form(trajectory.v / c, trajectory.a * d / c ** 2, params)
    t_emit, residual = eom_residuals(trajectory, params)
    by_time = dict(zip(t_emit.tolist(), residual.tolist()))
    rows = []
    for k, t in enumerate(trajectory.t.tolist()):
        rows.append({
            "t": t,
            "x": float(trajectory.x[k]),
            "v": float(trajectory.v[k]),
            "a": float(trajectory.a[k]),
            "r": float(np.atleast_1d(r)[k]),
            "residual": by_time.get(t),
        })
    return rows


def write_json(data, path):
    try:
        with open(path, "w") as handle:
            json.dump(data, handle, sort_keys=True, indent=2)
            handle.write("\n")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=str(path)) from e
    logger.info(f"Wrote {path}")


def export_root_set(root_set, path):
    """Write a RootSet as JSON."""
    write_json(root_set.to_dict(), path)


def manifest_path(output):
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(output, command, config):
    """Write <output>.manifest.json with the run configuration and version stamp."""
    path = manifest_path(output)
    write_json({"command": command, "version": __version__, "config": config}, path)
    return path
