"""Trace export: FTRC binary columns and CSV for small traces.

FTRC layout (all little-endian): 4-byte magic b"FTRC", uint32 version,
uint64 sample count, uint32 channel count, then channel-major float64
columns.  Channel order: t, x01, x02, w11, w12, ..., wn1, wn2, g, branch.
"""

from __future__ import annotations

import struct

import numpy as np

from .montecarlo import FadingTrace

__all__ = [
    "CSV_SAMPLE_LIMIT",
    "FTRC_MAGIC",
    "FTRC_VERSION",
    "read_trace_binary",
    "trace_channel_names",
    "trace_channels",
    "write_trace_binary",
    "write_trace_csv",
]

FTRC_MAGIC = b"FTRC"
FTRC_VERSION = 1
_HEADER = struct.Struct("<4sIQI")
CSV_SAMPLE_LIMIT = 1_000_000


def trace_channel_names(n_interferers: int) -> list[str]:
    names = ["t", "x01", "x02"]
    for i in range(1, n_interferers + 1):
        for k in (1, 2):
            names.append(f"w{i}{k}")
    names += ["g", "branch"]
    return names


def trace_channels(trace: FadingTrace) -> tuple[list[str], np.ndarray]:
    """Channel names and the (channels, samples) float64 matrix."""
    n = trace.interferers.shape[0]
    t = np.arange(trace.num_samples, dtype=np.float64) * trace.time_step
    rows = [t, trace.desired[0], trace.desired[1]]
    for i in range(n):
        rows.append(trace.interferers[i, 0])
        rows.append(trace.interferers[i, 1])
    rows.append(trace.selected_ratio)
    rows.append(trace.selected_branch.astype(np.float64))
    return trace_channel_names(n), np.vstack(rows)


def write_trace_binary(path, trace: FadingTrace) -> None:
    _, mat = trace_channels(trace)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(FTRC_MAGIC, FTRC_VERSION, mat.shape[1], mat.shape[0]))
        fh.write(np.ascontiguousarray(mat, dtype="<f8").tobytes())


def read_trace_binary(path) -> tuple[np.ndarray, int]:
    """Read an FTRC file back as its (channels, samples) matrix plus version."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError("truncated FTRC header")
        magic, version, n_samples, n_channels = _HEADER.unpack(head)
        if magic != FTRC_MAGIC:
            raise ValueError(f"bad magic {magic!r}, expected {FTRC_MAGIC!r}")
        data = np.frombuffer(fh.read(), dtype="<f8")
    expected = n_samples * n_channels
    if data.size != expected:
        raise ValueError(f"expected {expected} samples, file holds {data.size}")
    return data.reshape(n_channels, n_samples).astype(np.float64), int(version)


def write_trace_csv(path, trace: FadingTrace,
                    max_samples: int = CSV_SAMPLE_LIMIT) -> None:
    """CSV export (header row, float64 repr columns); refuses huge traces."""
    if trace.num_samples > max_samples:
        raise ValueError(f"trace has {trace.num_samples} samples, above the CSV "
                         f"limit of {max_samples}; use the binary format")
    names, mat = trace_channels(trace)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for col in mat.T:
            fh.write(",".join(repr(float(v)) for v in col) + "\n")
