"""Deterministic CSV plot data: unit-labelled headers and round-trip floats."""

from __future__ import annotations

import csv
import io
import math

__all__ = ["UNITS", "METRIC_COLUMNS", "sweep_column", "header_name", "split_header", "format_value", "parse_value",
           "emit_table", "parse_table", "rows_table"]

UNITS = {
    "snr_db": "dB",
    "ber": "1",
    "channel_ber": "1",
    "ser": "1",
    "per": "1",
    "distance": "m",
    "code": "label",
    "throughput": "bit/s",
    "mean_delay": "s",
    "energy_per_packet": "J",
    "efficiency": "bit/J",
    "trials": "count",
    "delivery_rate": "1",
    "mean_attempts": "count",
    "mode": "label",
    "energy": "J",
    "eta": "bit/J",
}

METRIC_COLUMNS = (
    "ber", "ser", "per", "throughput", "mean_delay", "energy_per_packet", "efficiency",
    "ci_ber", "ci_ser", "ci_per", "ci_throughput", "ci_mean_delay", "ci_energy_per_packet", "ci_efficiency",
    "trials", "delivery_rate", "mean_attempts", "mode",
)


def sweep_column(sweep_variable: str) -> str:
    """Name of the sweep column; a BER sweep is ``channel_ber`` so it cannot clash with the ``ber`` metric."""
    return "channel_ber" if sweep_variable == "ber" else sweep_variable


def _unit(name):
    if name in UNITS:
        return UNITS[name]
    if name.startswith("ci_"):
        return _unit(name[3:])
    for prefix in ("energy_", "eta_", "per_"):
        if name.startswith(prefix):
            return UNITS[prefix[:-1]]
    return "1"


def header_name(name: str) -> str:
    """``throughput`` -> ``throughput [bit/s]``."""
    return f"{name} [{_unit(name)}]"


def split_header(text: str):
    name, _, rest = text.partition(" [")
    if not rest.endswith("]"):
        raise ValueError(f"header {text!r} lacks a [unit]")
    return name, rest[:-1]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(float(v))
    if hasattr(v, "item"):
        return format_value(v.item())
    return str(v)


def parse_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text, 10)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def emit_table(columns, rows, delimiter=",") -> str:
    """CSV text with a unit header row and LF line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow([header_name(c) for c in columns])
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def parse_table(text: str, delimiter=","):
    """Inverse of :func:`emit_table`: ``(columns, rows)`` with typed values."""
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty table") from None
    columns = [split_header(h)[0] for h in header]
    rows = []
    for i, rec in enumerate(reader, start=2):
        if len(rec) != len(columns):
            raise ValueError(f"row {i} has {len(rec)} fields, expected {len(columns)}")
        rows.append([parse_value(v) for v in rec])
    return columns, rows


def rows_table(sweep_variable: str, metrics_rows, delimiter=",") -> str:
    """CSV of :class:`coopwsn.montecarlo.MetricsRow` objects."""
    columns = [sweep_column(sweep_variable), *METRIC_COLUMNS]
    data = [[r.sweep_value, *(getattr(r, c) for c in METRIC_COLUMNS)] for r in metrics_rows]
    return emit_table(columns, data, delimiter)
