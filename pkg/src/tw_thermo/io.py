"""Deterministic CSV/JSON output with 12 significant digits."""

import csv
import json
import math

__all__ = ["fmt_number", "write_table", "ROOT_COLUMNS", "root_rows", "write_roots"]

ROOT_COLUMNS = ("kind", "level", "re", "im")


def fmt_number(x):
    """Render numbers with 12 significant digits; strings and ints pass through."""
    if isinstance(x, bool) or isinstance(x, int) or isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def write_table(stream, columns, rows, fmt="csv"):
    """Write ``rows`` (sequences ordered as ``columns``) as CSV or a JSON object."""
    rows = [[fmt_number(v) for v in r] for r in rows]
    if fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r])
    elif fmt == "json":
        json.dump({"columns": list(columns), "rows": rows}, stream, indent=1)
        stream.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def root_rows(root_sets):
    """Flatten RootSets into (kind, level, re, im) rows."""
    out = []
    for rs in root_sets:
        for z in rs.values:
            out.append((rs.kind, int(rs.level), float(complex(z).real), float(complex(z).imag)))
    return out


def write_roots(stream, root_sets, fmt="csv"):
    write_table(stream, ROOT_COLUMNS, root_rows(root_sets), fmt)
