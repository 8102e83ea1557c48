"""The two-column walk as angle dynamics, and its large-population limit.

A row-normalized n x 2 matrix is a list of unit vectors, i.e. angles on
the circle. One walk step then has a closed form: row j lands exactly
perpendicular to row i, on whichever side of row i it already occupies.
In the fourth-harmonic variable psi = 4*theta the step copies psi_i onto
psi_j, so the population clusters onto one set of four perpendicular
directions; order_parameter_4 tracks that clustering.

Sending the population size to infinity turns the jump process into a
transport equation for the angle density u(x, t):

    du/dt = -u(x) + u(x + pi/2) I_-(x) + u(x - pi/2) I_+(x),

where I_- integrates u over (x - pi/2, x + pi/2) and I_+ over the
opposite half-circle. The discretization here keeps that structure exact:
the grid size is divisible by 4 so the quarter-turn shifts are plain
index rotations, and the window integrals weight the two boundary cells
by one half, which makes the total mass a conserved quantity of the
spatial discretization itself (not just of the time integrator) and
makes the uniform density exactly stationary.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from kacwalk import linalg
from kacwalk.walk import sample_pair

__all__ = [
    "TWO_PI",
    "UNIFORM_DENSITY",
    "CircleEnsemble",
    "circle_step",
    "run_circle_walk",
    "order_parameter_4",
    "DensityGrid",
    "uniform_grid",
    "cosine_grid",
    "meanfield_rhs",
    "meanfield_integrate",
    "mode_amplitude",
    "fourier_decay_rate",
]

TWO_PI = 2.0 * math.pi
UNIFORM_DENSITY = 1.0 / TWO_PI

# Guards applied after every integrator step.
BLOWUP_LIMIT = 1e6
MASS_DRIFT_LIMIT = 1e-6
NEGATIVE_CLAMP = 1e-12


@dataclass
class CircleEnsemble:
    """A population of angles; values are wrapped into [0, 2*pi) on entry."""

    angles: np.ndarray

    def __post_init__(self):
        self.angles = np.mod(linalg.as_vector(self.angles), TWO_PI)

    @property
    def n(self):
        return self.angles.shape[0]

    def to_matrix(self):
        """The n x 2 unit-row matrix these angles represent."""
        return np.column_stack([np.cos(self.angles), np.sin(self.angles)])

    @classmethod
    def from_matrix(cls, A):
        """Angles of a row-normalized n x 2 matrix."""
        A = linalg.as_matrix(A)
        if A.shape[1] != 2:
            raise ValueError(f"expected 2 columns, got {A.shape[1]}")
        norms = np.linalg.norm(A, axis=1)
        if np.abs(norms - 1.0).max() > 1e-9:
            raise ValueError("rows must have unit length")
        return cls(np.arctan2(A[:, 1], A[:, 0]))


def _step_angles(theta, i, j, tol):
    """In-place angle update; returns False when the pair is skipped.

    Skips when |sin(theta_j - theta_i)| < tol, the angle-space image of
    the degenerate (parallel up to sign) pair test: for unit 2-vectors
    1 - c^2 = sin^2(theta_j - theta_i)."""
    s = math.sin(theta[j] - theta[i])
    if abs(s) < tol:
        return False
    theta[j] = (theta[i] + math.copysign(0.5 * math.pi, s)) % TWO_PI
    return True


def circle_step(ensemble, i, j, tol=1e-9):
    """One walk step in angle form, returned as a new ensemble.

    Angle j moves to theta_i + pi/2 when sin(theta_j - theta_i) > 0 and
    to theta_i - pi/2 when it is negative: exactly perpendicular to
    angle i, on the side it already occupies. Matches walk_step on the
    corresponding n x 2 matrix (tol here plays the role of
    sqrt(degenerate_tol) there).
    """
    if i == j:
        raise ValueError("need two distinct angles")
    n = ensemble.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"indices ({i}, {j}) out of range for {n} angles")
    theta = ensemble.angles.copy()
    _step_angles(theta, i, j, tol)
    return CircleEnsemble(theta)


def run_circle_walk(ensemble, steps, seed, tol=1e-9, sample_every=None):
    """Drive an ensemble with uniformly sampled ordered pairs.

    Returns (final ensemble, samples, skipped) where samples is a list of
    (step, order_parameter_4) pairs taken at step 0, every sample_every
    steps (None records only the endpoints), and the final step; skipped
    counts degenerate pairs left unchanged.
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    n = ensemble.n
    if n < 2:
        raise ValueError("need at least two angles")
    theta = ensemble.angles.copy()
    rng = np.random.default_rng(seed)
    samples = [(0, _order4(theta))]
    skipped = 0
    for k in range(1, steps + 1):
        i, j = sample_pair(rng, n)
        if not _step_angles(theta, i, j, tol):
            skipped += 1
        if (sample_every is not None and k % sample_every == 0) or k == steps:
            samples.append((k, _order4(theta)))
    return CircleEnsemble(theta), samples, skipped


def _order4(theta):
    return float(abs(np.exp(4j * theta).mean()))


def order_parameter_4(ensemble):
    """|mean of exp(4 i theta)|: 1 when all angles agree modulo pi/2,
    near 0 for an angularly spread population."""
    if ensemble.n == 0:
        raise ValueError("empty ensemble")
    return _order4(ensemble.angles)


@dataclass
class DensityGrid:
    """Periodic cell-centered density on [0, 2*pi).

    u[p] is the density at x_p = 2*pi*p/N. The grid size must be
    divisible by 4 so the quarter-turn shifts in the dynamics land
    exactly on grid indices. Total mass sum(u) * (2*pi/N) must be 1
    within 1e-9 and u must be nonnegative.
    """

    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.u = linalg.as_vector(self.u)
        if self.N % 4 != 0 or self.N < 4:
            raise ValueError(f"grid size must be a positive multiple of 4, got {self.N}")
        if float(self.u.min()) < 0.0:
            raise ValueError("density must be nonnegative")
        mass = self.mass()
        if abs(mass - 1.0) > 1e-9:
            raise ValueError(f"density mass must be 1, got {mass!r}")

    @property
    def N(self):
        return self.u.shape[0]

    @property
    def cell_width(self):
        return TWO_PI / self.N

    def grid_points(self):
        """Cell centers x_p = 2*pi*p/N."""
        return TWO_PI * np.arange(self.N) / self.N

    def mass(self):
        return float(self.u.sum() * self.cell_width)


def uniform_grid(N):
    """The uniform density 1/(2*pi) on an N-cell grid."""
    return DensityGrid(np.full(N, UNIFORM_DENSITY), t=0.0)


def cosine_grid(N, mode, amplitude=1e-3):
    """Uniform density plus amplitude * cos(mode * x); the perturbation
    must keep the density positive (amplitude < 1/(2*pi))."""
    if mode < 1:
        raise ValueError(f"mode must be >= 1, got {mode}")
    if not 0.0 <= amplitude < UNIFORM_DENSITY:
        raise ValueError(
            f"amplitude must lie in [0, {UNIFORM_DENSITY:.6f}), got {amplitude}"
        )
    x = TWO_PI * np.arange(N) / N
    return DensityGrid(UNIFORM_DENSITY + amplitude * np.cos(mode * x), t=0.0)


_WINDOW_IDX = {}


def _window_index(N):
    # idx[k, i] = (i + off_k) mod N for offsets -(q-1) .. q-1, cached per N.
    idx = _WINDOW_IDX.get(N)
    if idx is None:
        q = N // 4
        offs = np.arange(-(q - 1), q)
        idx = (offs[:, None] + np.arange(N)[None, :]) % N
        _WINDOW_IDX[N] = idx
    return idx


def _rhs(u, N):
    # Window sum: interior cells at full weight, the two cells whose
    # centers sit exactly on the window endpoints at half weight. This
    # trapezoid-on-the-circle choice is what makes mass exactly conserved
    # by the spatial operator. The gather-and-reduce adds the same value
    # sequence at every grid point, so the operator still commutes with
    # grid rotations bit for bit.
    q = N // 4
    w = u[_window_index(N)].sum(axis=0)
    w += 0.5 * (np.roll(u, q) + np.roll(u, -q))
    h = TWO_PI / N
    i_minus = h * w
    i_plus = h * np.roll(w, -(N // 2))
    return -u + np.roll(u, -q) * i_minus + np.roll(u, q) * i_plus


def meanfield_rhs(grid):
    """Time derivative of the density under the pair dynamics.

    Mass loss at unit rate everywhere, mass gain transported from the two
    quarter-turn sources x +- pi/2, each weighted by the half-circle
    window integral behind it.
    """
    return _rhs(grid.u, grid.N)


def _rk4_step(u, N, dt):
    k1 = _rhs(u, N)
    k2 = _rhs(u + 0.5 * dt * k1, N)
    k3 = _rhs(u + 0.5 * dt * k2, N)
    k4 = _rhs(u + dt * k3, N)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _guarded_advance(u, N, dt, nsteps, mass0, on_step=None):
    """RK4 steps with blow-up / negativity / mass-drift guards."""
    h = TWO_PI / N
    for s in range(1, nsteps + 1):
        u = _rk4_step(u, N, dt)
        if float(np.abs(u).max()) > BLOWUP_LIMIT:
            raise FloatingPointError(
                f"density blow-up at step {s} (max |u| > {BLOWUP_LIMIT:g})"
            )
        low = float(u.min())
        if low < 0.0:
            if low < -NEGATIVE_CLAMP:
                raise FloatingPointError(
                    f"density went negative at step {s} (min {low:.3e})"
                )
            np.maximum(u, 0.0, out=u)
        drift = abs(float(u.sum() * h) - mass0)
        if drift > MASS_DRIFT_LIMIT:
            raise FloatingPointError(
                f"mass drift {drift:.3e} at step {s} exceeds {MASS_DRIFT_LIMIT:g}"
            )
        if on_step is not None:
            on_step(s, u)
    return u


def meanfield_integrate(grid, t_end, dt):
    """Advance the density to absolute time t_end with classical RK4.

    dt must lie in (0, 0.01]. The interval is covered by equal substeps
    of size at most dt (the smallest count that fits), so integrating in
    stages whose lengths divide dt reproduces a single run bit for bit.
    Raises FloatingPointError if the solution blows up, goes meaningfully
    negative, or leaks mass beyond 1e-6 (negative undershoot below 1e-12
    is clamped to zero).
    """
    if not 0.0 < dt <= 0.01:
        raise ValueError(f"dt must lie in (0, 0.01], got {dt}")
    duration = t_end - grid.t
    if duration < 0.0:
        raise ValueError(f"t_end {t_end} is before the grid time {grid.t}")
    if duration == 0.0:
        return DensityGrid(grid.u.copy(), t=grid.t)
    nsteps = max(1, math.ceil(duration / dt - 1e-9))
    u = grid.u.copy()
    mass0 = float(u.sum() * grid.cell_width)
    u = _guarded_advance(u, grid.N, duration / nsteps, nsteps, mass0)
    return DensityGrid(u, t=t_end)


def mode_amplitude(grid, mode):
    """Amplitude of the cos/sin pair at the given spatial frequency,
    normalized so cosine_grid(N, k, a) has mode-k amplitude a."""
    if not 1 <= mode < grid.N // 2:
        raise ValueError(f"mode must lie in [1, {grid.N // 2}), got {mode}")
    return float(2.0 * abs(np.fft.rfft(grid.u)[mode]) / grid.N)


def fourier_decay_rate(grid0, mode, t_end, dt, skip_fraction=0.05):
    """Fitted exponential decay rate of one Fourier mode.

    Integrates from grid0 to t_end, records the mode amplitude after
    every step, and least-squares fits log(amplitude) against time,
    discarding the first skip_fraction of the samples. Returns the
    negated slope, so a positive result means the mode decays.

    Meant for the linear regime: grid0 must sit within 0.02 of uniform
    (about a tenth of its height), and the fit errors out if the
    amplitude ever drops below 1e-15 (nothing left to fit).
    """
    if not 0.0 < dt <= 0.01:
        raise ValueError(f"dt must lie in (0, 0.01], got {dt}")
    if not 0.0 <= skip_fraction < 1.0:
        raise ValueError(f"skip_fraction must lie in [0, 1), got {skip_fraction}")
    if float(np.abs(grid0.u - UNIFORM_DENSITY).max()) > 0.02:
        raise ValueError("grid0 must be within 0.02 of the uniform density")
    duration = t_end - grid0.t
    if duration <= 0.0:
        raise ValueError("t_end must exceed the grid time")
    if not 1 <= mode < grid0.N // 2:
        raise ValueError(f"mode must lie in [1, {grid0.N // 2}), got {mode}")

    nsteps = int(math.ceil(duration / dt - 1e-12))
    step_dt = duration / nsteps
    N = grid0.N
    times = np.empty(nsteps + 1)
    amps = np.empty(nsteps + 1)
    times[0] = grid0.t
    amps[0] = 2.0 * abs(np.fft.rfft(grid0.u)[mode]) / N

    def record(s, u):
        times[s] = grid0.t + s * step_dt
        amps[s] = 2.0 * abs(np.fft.rfft(u)[mode]) / N

    mass0 = float(grid0.u.sum() * grid0.cell_width)
    _guarded_advance(grid0.u.copy(), N, step_dt, nsteps, mass0, on_step=record)

    cut = int(skip_fraction * (nsteps + 1))
    t_fit = times[cut:]
    a_fit = amps[cut:]
    if t_fit.shape[0] < 2:
        raise ValueError("not enough samples left after skip_fraction")
    if float(a_fit.min()) < 1e-15:
        raise ValueError(
            "mode amplitude fell below 1e-15; the log fit is degenerate"
        )
    slope = np.polyfit(t_fit, np.log(a_fit), 1)[0]
    return -float(slope)
