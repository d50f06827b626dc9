"""CSV and JSON writers shared by the library and the command line."""
import csv
import json
import math
from pathlib import Path

SIG_DIGITS = 12


def fmt(x):
    """Format a number with 12 significant digits."""
    if isinstance(x, (bool, str)) or x is None:
        return str(x)
    return format(float(x), f".{SIG_DIGITS}g")


def write_csv(path, header, rows, units):
    """Write rows under a header, preceded by a ``# units:`` comment line.

    Parameters
    ----------
    path : str or Path
    header : sequence of str
    rows : iterable of sequences
    units : sequence of str
        One unit label per column.
    """
    if len(units) != len(header):
        raise ValueError("one unit label per column is required")
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write("# units: " + ", ".join(f"{h}[{u}]" for h, u in zip(header, units)) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_csv(path):
    """Read a file written by :func:`write_csv`; returns ``(header, rows)`` of floats."""
    with Path(path).open() as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    r = csv.reader(lines)
    header = next(r)
    return header, [[float(v) for v in row] for row in r]


def _round(obj):
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(fmt(obj))
    return obj


def write_json(path, payload):
    """Write a JSON report with floats rounded to 12 significant digits."""
    path = Path(path)
    path.write_text(json.dumps(_round(payload), indent=2, sort_keys=True) + "\n")
    return path
