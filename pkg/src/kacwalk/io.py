"""CSV and JSON emission for trajectories, logs, traces, and densities.

Every float is written with ``repr(float(x))`` (shortest round-trip
form), headers and row order are fixed, and files end with a single
newline, so rerunning a seeded experiment reproduces its outputs byte for
byte. Readers return numpy arrays and accept exactly what the writers
emit.
"""

import csv
import json
from pathlib import Path

import numpy as np

__all__ = [
    "write_snapshots_csv",
    "read_snapshots_csv",
    "write_steps_csv",
    "read_steps_csv",
    "write_trace_csv",
    "read_trace_csv",
    "write_density_csv",
    "read_density_csv",
    "write_histogram_csv",
    "write_json",
    "read_json",
]


def _fmt(x):
    # repr of a *Python* float; numpy scalars stringify as np.float64(...)
    return repr(float(x))


def _open_w(path):
    return open(path, "w", encoding="utf-8", newline="")


def write_snapshots_csv(path, snapshots):
    """Spectrum trajectory: one row per snapshot,
    ``k, sigma_1, ..., sigma_n, frob_sq``."""
    if not snapshots:
        raise ValueError("need at least one snapshot")
    n = snapshots[0].sigmas.shape[0]
    header = ["k"] + [f"sigma_{p}" for p in range(1, n + 1)] + ["frob_sq"]
    with _open_w(path) as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for snap in snapshots:
            if snap.sigmas.shape[0] != n:
                raise ValueError("snapshots have inconsistent widths")
            w.writerow([str(snap.k)] + [_fmt(s) for s in snap.sigmas]
                       + [_fmt(snap.frob_sq)])
    return Path(path)


def read_snapshots_csv(path):
    """Returns (k, sigmas, frob_sq): int array, (rows, n) array, float array."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header[0] != "k" or header[-1] != "frob_sq":
        raise ValueError(f"unexpected header in {path}")
    ks = np.array([int(r[0]) for r in body], dtype=np.int64)
    sig = np.array([[float(v) for v in r[1:-1]] for r in body])
    frob = np.array([float(r[-1]) for r in body])
    return ks, sig, frob


def write_steps_csv(path, log):
    """Per-step log ``k, i, j, c, skipped`` with skipped as 0/1."""
    with _open_w(path) as fh:
        w = csv.writer(fh)
        w.writerow(["k", "i", "j", "c", "skipped"])
        for p in range(len(log)):
            w.writerow([str(int(log.k[p])), str(int(log.i[p])),
                        str(int(log.j[p])), _fmt(log.c[p]),
                        str(int(log.skipped[p]))])
    return Path(path)


def read_steps_csv(path):
    """Returns (k, i, j, c, skipped) arrays."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    k = np.array([int(r[0]) for r in body], dtype=np.int64)
    i = np.array([int(r[1]) for r in body], dtype=np.int64)
    j = np.array([int(r[2]) for r in body], dtype=np.int64)
    c = np.array([float(r[3]) for r in body])
    skipped = np.array([bool(int(r[4])) for r in body])
    return k, i, j, c, skipped


def write_trace_csv(path, trace):
    """Solver error curve ``iter, error_sq``."""
    with _open_w(path) as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "error_sq"])
        for it, e in zip(trace.iters, trace.error_sq):
            w.writerow([str(int(it)), _fmt(e)])
    return Path(path)


def read_trace_csv(path):
    """Returns (iters, error_sq) arrays."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    iters = np.array([int(r[0]) for r in body], dtype=np.int64)
    err = np.array([float(r[1]) for r in body])
    return iters, err


def write_density_csv(path, grid):
    """One density snapshot: single data row ``t, u_0, ..., u_{N-1}``."""
    header = ["t"] + [f"u_{p}" for p in range(grid.N)]
    with _open_w(path) as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerow([_fmt(grid.t)] + [_fmt(v) for v in grid.u])
    return Path(path)


def read_density_csv(path):
    """Returns (t, u)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    body = rows[1]
    return float(body[0]), np.array([float(v) for v in body[1:]])


def write_histogram_csv(path, centers, counts):
    """Histogram ``bin_center, count``."""
    centers = np.asarray(centers, dtype=np.float64)
    counts = np.asarray(counts)
    if centers.shape != counts.shape:
        raise ValueError("centers and counts must have matching shapes")
    with _open_w(path) as fh:
        w = csv.writer(fh)
        w.writerow(["bin_center", "count"])
        for c, ct in zip(centers, counts):
            w.writerow([_fmt(c), str(int(ct))])
    return Path(path)


def write_json(path, payload):
    """JSON with sorted keys and a trailing newline (byte-stable)."""
    with _open_w(path) as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return Path(path)


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
