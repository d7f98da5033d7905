"""CSV serialization of result tables.

17 significant digits, '\n' line endings and sorted `# key = value` metadata
lines make the files byte-stable across runs and round-trip exact; volatile
metadata (timestamps) is kept in memory but never written.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .experiments import SpectrumTable

SPECTRUM_COLUMNS = ("delta_over_gamma", "R", "T", "A", "phi_rad")
VOLATILE_KEYS = frozenset({"created"})


def format_float(x: float) -> str:
    return f"{x:.17g}"


def render_csv(columns: dict, metadata: dict | None = None) -> str:
    """Serialize named columns plus metadata comments to CSV text."""
    names = list(columns)
    arrays = [np.asarray(columns[name]) for name in names]
    length = arrays[0].size
    if any(a.size != length for a in arrays):
        raise ValueError("columns must have equal length")
    lines = []
    for key in sorted(metadata or {}):
        if key in VOLATILE_KEYS:
            continue
        lines.append(f"# {key} = {metadata[key]}")
    lines.append(",".join(names))
    for i in range(length):
        lines.append(",".join(format_float(float(a[i])) for a in arrays))
    return "\n".join(lines) + "\n"


def write_csv(path, columns: dict, metadata: dict | None = None) -> None:
    try:
        Path(path).write_bytes(render_csv(columns, metadata).encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path):
    """Read back (columns, metadata) from a CSV written by write_csv."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    metadata = {}
    header = None
    rows = []
    for raw in text.splitlines():
        if not raw:
            continue
        if raw.startswith("#"):
            body = raw[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                metadata[key.strip()] = value.strip()
            continue
        if header is None:
            header = raw.split(",")
            continue
        rows.append([float(v) for v in raw.split(",")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    columns = {name: data[:, i].copy() for i, name in enumerate(header)}
    return columns, metadata


def write_spectrum_csv(table: SpectrumTable, path) -> None:
    """Emit the canonical delta_over_gamma,R,T,A,phi_rad table."""
    write_csv(path, {
        "delta_over_gamma": table.delta_over_gamma,
        "R": table.R,
        "T": table.T,
        "A": table.A,
        "phi_rad": table.phi,
    }, table.metadata)


def read_spectrum_csv(path) -> SpectrumTable:
    columns, metadata = read_csv(path)
    if tuple(columns) != SPECTRUM_COLUMNS:
        raise ValueError(f"{path}: expected columns {SPECTRUM_COLUMNS}, "
                         f"got {tuple(columns)}")
    return SpectrumTable(columns["delta_over_gamma"], columns["R"],
                         columns["T"], columns["A"], columns["phi_rad"],
                         metadata)
