"""Continuous-time asymmetric simple exclusion process.

Particles on the integers attempt nearest-neighbour jumps from independent
exponential clocks (left rate L, right rate R > L); jumps into occupied sites
are discarded, which preserves the generator exactly (rejection sampling of
the jump chain at constant attempt rate n(L+R)).

The infinite left-packed initial data is truncated to a finite window chosen
from a light-cone tail bound: influence travels one site per clock ring, so
the chance that the vacuum beyond the window reaches the measurement point is
at most a Poisson tail, kept below ``epsilon_tail``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels, sixvertex
from .errors import CutoffViolatedError
from .scaling import AsepParams, BernoulliBoundary, SixVertexParams

__all__ = [
    "AsepState",
    "CutoffPolicy",
    "init_from_boundary",
    "simulate",
    "current_J",
    "currents_batch",
    "degenerate_from_six_vertex",
]


@dataclass(frozen=True)
class CutoffPolicy:
    """Truncation rule for the left-infinite initial data."""

    epsilon_tail: float = 1e-8

    def influence_radius(self, params: AsepParams, t: float) -> int:
        """Smallest D with P[Poisson((L+R) t) >= D] < epsilon_tail."""
        lam = (params.rate_left + params.rate_right) * t
        if lam <= 0.0:
            return 1
        d = int(stats.poisson.isf(self.epsilon_tail, lam)) + 1
        while stats.poisson.sf(d - 1, lam) >= self.epsilon_tail:
            d += 1
        return d

    def n_boundary_bits(self, params: AsepParams, t: float, x_meas: float) -> int:
        """Boundary sites to materialize so the window edge cannot reach x_meas.

        The window keeps twice the influence radius below the measurement
        point; occupied sites live at 0, -1, ..., 1 - n.
        """
        window = 2 * self.influence_radius(params, t)
        return max(1, window + int(np.ceil(max(0.0, -x_meas))))


@dataclass(frozen=True)
class AsepState:
    """Occupied sites (strictly increasing), truncation edge, elapsed time."""

    positions: np.ndarray
    left_cutoff: int
    time: float = 0.0

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        if pos.size and np.any(np.diff(pos) <= 0):
            raise ValueError("positions must be strictly increasing")
        object.__setattr__(self, "positions", pos)


def init_from_boundary(bits) -> AsepState:
    """Occupy site 1-i for every boundary index i with bit 1 (i = 1..n)."""
    arr = bits.bits if isinstance(bits, sixvertex.BoundaryBits) else np.asarray(bits, dtype=np.uint8)
    occupied = np.flatnonzero(arr)
    positions = np.sort(1 - (occupied + 1)).astype(np.int64)
    return AsepState(positions=positions, left_cutoff=1 - len(arr), time=0.0)


def simulate(state: AsepState, params: AsepParams, t: float, rng) -> AsepState:
    """Exact CTMC sample at state.time + t.

    Event count is Poisson(n (L+R) t); each event picks a uniform particle and
    a direction with probability R/(L+R) to the right; blocked jumps are no-ops.
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    n = len(state.positions)
    if n == 0 or t == 0.0:
        return AsepState(state.positions.copy(), state.left_cutoff, state.time + t)
    total_rate = params.rate_left + params.rate_right
    n_events = rng.poisson(n * total_rate * t)
    pos = state.positions.copy()
    buf = rng.random(n_events)
    _kernels.asep_events(pos, n_events, buf, params.rate_right / total_rate)
    return AsepState(pos, state.left_cutoff, state.time + t)


def current_J(state: AsepState, x: float, params: AsepParams | None = None,
              policy: CutoffPolicy | None = None) -> int:
    """Number of particles strictly to the right of x.

    With ``params`` and ``policy`` supplied, verifies that x keeps one full
    influence radius of margin from the truncation edge.
    """
    if params is not None and policy is not None:
        radius = policy.influence_radius(params, state.time)
        if x - state.left_cutoff < radius:
            raise CutoffViolatedError(
                f"x={x} is within the influence radius {radius} of the cutoff "
                f"{state.left_cutoff}"
            )
    return int((state.positions > x).sum())


def currents_batch(params: AsepParams, bits: np.ndarray, t: float, x: float, stream_fn) -> np.ndarray:
    """J_t(x) for one trajectory per row of ``bits``.

    ``stream_fn(i)`` returns trajectory i's generator; each trajectory draws
    its Poisson event count and one uniform buffer from its own stream, so the
    result is independent of scheduling (same contract as
    `sixvertex.heights_batch`).
    """
    n_traj, n_bits = bits.shape
    total_rate = params.rate_left + params.rate_right
    p_right = params.rate_right / total_rate
    out = np.empty(n_traj, dtype=np.int64)
    for i in range(n_traj):
        g = stream_fn(i)
        occupied = np.flatnonzero(bits[i])
        pos = np.sort(1 - (occupied + 1)).astype(np.int64)
        n_events = g.poisson(pos.size * total_rate * t) if pos.size else 0
        buf = g.random(n_events)
        _kernels.asep_events(pos, n_events, buf, p_right)
        out[i] = (pos > x).sum()
    return out


def degenerate_from_six_vertex(
    rate_left: float,
    rate_right: float,
    epsilon: float,
    t: float,
    x: int,
    boundary_bits: sixvertex.BoundaryBits,
    rng,
) -> int:
    """Six-vertex statistic whose law approximates J_t(x) as epsilon -> 0.

    Runs the six-vertex model with turn probabilities (epsilon L, epsilon R)
    for T' = floor(t/epsilon) rows and returns the crossing count of row T'
    strictly right of x + T'.
    """
    if epsilon * (rate_left + rate_right) >= 1.0:
        raise ValueError("need epsilon * (L + R) < 1")
    if not rate_left > 0.0:
        raise ValueError("the six-vertex degeneration needs delta1 = epsilon*L > 0")
    p = SixVertexParams(epsilon * rate_left, epsilon * rate_right)
    n_rows = int(np.floor(t / epsilon))
    traj = sixvertex.run_six_vertex(p, boundary_bits, n_rows, rng)
    return sixvertex.height_function(traj, x + n_rows, n_rows)


def degenerate_heights_batch(
    params: AsepParams,
    epsilon: float,
    t: float,
    x: int,
    boundary: BernoulliBoundary,
    n_traj: int,
    seed_stream_fn,
    boundary_rng,
) -> np.ndarray:
    """Batch version of the degeneration statistic (fast path)."""
    if epsilon * (params.rate_left + params.rate_right) >= 1.0:
        raise ValueError("need epsilon * (L + R) < 1")
    p = SixVertexParams(epsilon * params.rate_left, epsilon * params.rate_right)
    n_rows = int(np.floor(t / epsilon))
    bits = sixvertex.sample_boundary_batch(boundary, p.q, n_rows, n_traj, boundary_rng)
    return sixvertex.heights_batch(p, bits, x + n_rows + 1, seed_stream_fn)
