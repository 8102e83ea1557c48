"""Random pairwise row-orthogonalization of a linear system.

Each step picks an ordered pair of distinct rows (i, j) uniformly at
random and replaces row j by its component orthogonal to row i, rescaled
back to unit length; the right-hand side entry b_j gets the matching
update, so the solution set never changes. Repeated steps drive the rows
toward mutual orthogonality while the squared Frobenius norm stays pinned
at the row count.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from kacwalk import linalg

__all__ = [
    "ROW_NORM_TOL",
    "REFERENCE_RESIDUAL_TOL",
    "LinearSystem",
    "WalkConfig",
    "StepRecord",
    "StepLog",
    "SpectrumSnapshot",
    "sample_pair",
    "walk_step",
    "run_walk",
    "take_snapshot",
    "residual_at_reference",
]

# How far row norms may stray from 1 before a system is rejected.
ROW_NORM_TOL = 1e-12
# How large ||A x_ref - b||_inf may be before x_ref is rejected.
REFERENCE_RESIDUAL_TOL = 1e-10


@dataclass
class LinearSystem:
    """A row-normalized system ``A x = b``, optionally with a known solution.

    Attributes
    ----------
    A : ndarray, shape (m, n)
        Coefficient matrix; every row must have unit Euclidean length
        (within ROW_NORM_TOL). Use :func:`kacwalk.linalg.normalize_rows`
        first if needed.
    b : ndarray, shape (m,)
        Right-hand side.
    x_ref : ndarray, shape (n,) or None
        A known exact solution, if the system was built from one. When
        present it must satisfy the system to REFERENCE_RESIDUAL_TOL.
    """

    A: np.ndarray
    b: np.ndarray
    x_ref: np.ndarray | None = None

    def __post_init__(self):
        self.A = linalg.as_matrix(self.A)
        self.b = linalg.as_vector(self.b)
        if self.b.shape[0] != self.m:
            raise ValueError(
                f"b has length {self.b.shape[0]}, expected {self.m}"
            )
        norms = np.linalg.norm(self.A, axis=1)
        if np.abs(norms - 1.0).max() > ROW_NORM_TOL:
            raise ValueError(
                "rows must have unit length; normalize the matrix first"
            )
        if self.x_ref is not None:
            self.x_ref = linalg.as_vector(self.x_ref)
            if self.x_ref.shape[0] != self.n:
                raise ValueError(
                    f"x_ref has length {self.x_ref.shape[0]}, expected {self.n}"
                )
            gap = float(np.abs(self.A @ self.x_ref - self.b).max())
            if gap > REFERENCE_RESIDUAL_TOL:
                raise ValueError(
                    f"x_ref does not solve the system (residual {gap:.3e})"
                )

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def copy(self):
        """Deep copy; mutating the copy leaves the original untouched."""
        x = None if self.x_ref is None else self.x_ref.copy()
        return LinearSystem(self.A.copy(), self.b.copy(), x)


@dataclass(frozen=True)
class WalkConfig:
    """Knobs for a walk run.

    seed drives the pair sampling; steps is the total number of updates;
    degenerate_tol skips pairs with 1 - c^2 below it (rows parallel up to
    sign, where the rescaling would divide by ~0); snapshot_every sets the
    spectrum sampling stride (None means one snapshot per n steps);
    renormalize re-unitizes the updated row after every step to stop
    rounding drift from compounding over long runs.
    """

    seed: int
    steps: int
    degenerate_tol: float = 1e-12
    snapshot_every: int | None = None
    renormalize: bool = True

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if not (0.0 < self.degenerate_tol < 1.0):
            raise ValueError(
                f"degenerate_tol must lie in (0, 1), got {self.degenerate_tol}"
            )
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ValueError(
                f"snapshot_every must be >= 1, got {self.snapshot_every}"
            )


@dataclass(frozen=True)
class StepRecord:
    """What one step did: step index k (1-based), the ordered pair (i, j),
    the inner product c = <A_i, A_j> read before the update, and whether
    the pair was skipped as degenerate."""

    k: int
    i: int
    j: int
    c: float
    skipped: bool


class StepLog(Sequence):
    """Sequence of StepRecord kept in flat arrays.

    Long runs log millions of steps; storing five parallel arrays instead
    of a list of records keeps that cheap. Indexing materializes a
    StepRecord on demand.
    """

    def __init__(self, steps):
        self.k = np.zeros(steps, dtype=np.int64)
        self.i = np.zeros(steps, dtype=np.int64)
        self.j = np.zeros(steps, dtype=np.int64)
        self.c = np.zeros(steps, dtype=np.float64)
        self.skipped = np.zeros(steps, dtype=bool)

    def _store(self, idx, rec):
        self.k[idx] = rec.k
        self.i[idx] = rec.i
        self.j[idx] = rec.j
        self.c[idx] = rec.c
        self.skipped[idx] = rec.skipped

    def __len__(self):
        return self.k.shape[0]

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [self[p] for p in range(*idx.indices(len(self)))]
        idx = int(idx)
        if idx < 0:
            idx += len(self)
        if not (0 <= idx < len(self)):
            raise IndexError(f"step index {idx} out of range")
        return StepRecord(
            k=int(self.k[idx]),
            i=int(self.i[idx]),
            j=int(self.j[idx]),
            c=float(self.c[idx]),
            skipped=bool(self.skipped[idx]),
        )


@dataclass(frozen=True)
class SpectrumSnapshot:
    """Spectrum of the walked matrix at step k.

    sigmas are the singular values in descending order, frob_sq their sum
    of squares, and residual_inf is ||A x_ref - b||_inf when the system
    carries a reference solution (None otherwise).
    """

    k: int
    sigmas: np.ndarray = field(repr=False)
    frob_sq: float
    residual_inf: float | None = None


def sample_pair(rng, m):
    """Ordered pair (i, j) with i != j, uniform over all m(m-1) choices.

    j is drawn by rejection so every ordered pair has exactly equal mass
    under the generator's raw integer stream.
    """
    if m < 2:
        raise ValueError(f"need at least two rows to form a pair, got {m}")
    i = int(rng.integers(m))
    j = int(rng.integers(m))
    while j == i:
        j = int(rng.integers(m))
    return i, j


def walk_step(system, i, j, config, k=0):
    """Apply one update in place and return its record.

    With c = <A_i, A_j> read once before any write, row j becomes
    (A_j - c A_i) / sqrt(1 - c^2) and b_j becomes
    (b_j - c b_i) / sqrt(1 - c^2), which keeps any solution of the system
    a solution and keeps row j at unit length. Pairs whose 1 - c^2 falls
    below config.degenerate_tol are left untouched and flagged skipped.

    The 1 / sqrt(1 - c^2) factor also amplifies whatever rounding error b
    already carries, and those factors compound across steps. Square
    systems drift toward orthonormal rows (c -> 0), so there the solution
    survives long runs to ~1e-14. Tall systems can never make all rows
    orthogonal (more rows than dimensions), so the walk keeps drawing
    correlated pairs forever; over hundreds of steps the compounded
    amplification can grow the residual at x_ref by many orders of
    magnitude even though every single step is exact in real arithmetic. Raise degenerate_tol to trade fidelity of b
    for a cap on the per-step factor when that matters.
    """
    m = system.m
    if i == j:
        raise ValueError("need two distinct rows")
    if not (0 <= i < m and 0 <= j < m):
        raise IndexError(f"row indices ({i}, {j}) out of range for {m} rows")
    A, b = system.A, system.b
    c = float(A[i] @ A[j])
    rest = 1.0 - c * c
    if rest < config.degenerate_tol:
        # Rounding can push |c| a hair past 1 here; clamp for the record.
        return StepRecord(k=k, i=i, j=j, c=max(-1.0, min(1.0, c)), skipped=True)
    scale = math.sqrt(rest)
    A[j] -= c * A[i]
    A[j] /= scale
    b[j] = (b[j] - c * b[i]) / scale
    if config.renormalize:
        r = float(np.linalg.norm(A[j]))
        A[j] /= r
        b[j] /= r
    return StepRecord(k=k, i=i, j=j, c=c, skipped=False)


def take_snapshot(system, k):
    """SpectrumSnapshot of the system as it stands at step k."""
    res = None
    if system.x_ref is not None:
        res = residual_at_reference(system)
    return SpectrumSnapshot(
        k=k,
        sigmas=linalg.singular_values(system.A),
        frob_sq=linalg.frobenius_sq(system.A),
        residual_inf=res,
    )


def residual_at_reference(system):
    """||A x_ref - b||_inf; errors if the system has no reference solution."""
    if system.x_ref is None:
        raise ValueError("system carries no reference solution")
    return float(np.abs(system.A @ system.x_ref - system.b).max())


def run_walk(system, config):
    """Run config.steps sampled updates on a copy of the system.

    Returns
    -------
    (LinearSystem, StepLog, list of SpectrumSnapshot)
        The walked system, the per-step log, and spectrum snapshots taken
        at step 0, every config.snapshot_every steps (default: every n
        steps), and at the final step.
    """
    if system.m < 2:
        raise ValueError("the walk needs at least two rows")
    work = system.copy()
    rng = np.random.default_rng(config.seed)
    every = config.snapshot_every if config.snapshot_every is not None else work.n
    log = StepLog(config.steps)
    snapshots = [take_snapshot(work, 0)]
    for k in range(1, config.steps + 1):
        i, j = sample_pair(rng, work.m)
        log._store(k - 1, walk_step(work, i, j, config, k=k))
        if k % every == 0 or k == config.steps:
            snapshots.append(take_snapshot(work, k))
    return work, log, snapshots
