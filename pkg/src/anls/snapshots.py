"""Binary field snapshots and deterministic CSV output.

Snapshot layout (little-endian, 40-byte header + payload):

    bytes 0:4    magic "ANLS"
    bytes 4:8    format version, u32 (currently 1)
    bytes 8:16   nx, u64
    bytes 16:24  ny, u64
    bytes 24:32  Lx, f64
    bytes 32:40  Ly, f64
    bytes 40:    nx*ny complex samples as (re, im) f64 pairs, x slow

Round-tripping a field through write/read reproduces the payload bit for bit.
CSV files use 17 significant digits and Unix newlines so identical runs yield
identical bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .grid import Field, Grid2D

__all__ = ["write_snapshot", "read_snapshot", "write_csv", "SNAPSHOT_MAGIC",
           "SNAPSHOT_VERSION"]

SNAPSHOT_MAGIC = b"ANLS"
SNAPSHOT_VERSION = 1
_HEADER = struct.Struct("<4sIQQdd")


def write_snapshot(path: str | Path, field: Field) -> None:
    """Serialize a field; see the module docstring for the exact layout."""
    g = field.grid
    header = _HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, g.nx, g.ny, g.Lx, g.Ly)
    payload = np.ascontiguousarray(field.data, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_snapshot(path: str | Path) -> Field:
    """Load a snapshot written by :func:`write_snapshot`, validating the header."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise DomainError(f"snapshot {path} is truncated: {len(raw)} bytes")
    magic, version, nx, ny, lx, ly = _HEADER.unpack_from(raw)
    if magic != SNAPSHOT_MAGIC:
        raise DomainError(f"snapshot {path} has bad magic {magic!r}")
    if version != SNAPSHOT_VERSION:
        raise DomainError(f"snapshot {path} has unsupported version {version}")
    expected = _HEADER.size + 16 * nx * ny
    if len(raw) != expected:
        raise DomainError(
            f"snapshot {path} has {len(raw)} bytes, expected {expected}")
    data = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(nx, ny)
    grid = Grid2D(int(nx), int(ny), float(lx), float(ly))
    data = data.astype(np.complex128)
    finite = bool(np.all(np.isfinite(data.view(np.float64))))
    return Field(grid, data, post_blowup=not finite)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path: str | Path, columns: Sequence[str],
              rows: Iterable[Sequence]) -> None:
    """Write rows with a header line, 17 significant digits, Unix newlines."""
    lines = [",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise DomainError(
                f"row width {len(row)} does not match {len(columns)} columns")
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")
