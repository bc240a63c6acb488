"""Spin-1/2 specialization: the stochastic six-vertex model.

Holds the six-vertex weight table, the boundary-bit sampler (an auxiliary
m-column chain fed with step input whose exit bits are the correlated
Bernoulli-type boundary data), trajectory runners, and the height/crossing
observables.

Two sampling paths exist for the bulk dynamics:

* a reference path built on `hsvm.sweep_row` with per-column Bernoulli draws,
  used by tests and the CLI `simulate` command;
* a buffered per-trajectory engine (`heights_batch`) that draws the length of
  each horizontal run from a single inverse-CDF geometric variate and runs the
  sweep in a compiled kernel.  Both paths are checked to agree in law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, hsvm
from .scaling import BernoulliBoundary, SixVertexParams

__all__ = [
    "BoundaryBits",
    "six_vertex_transition",
    "sample_boundary",
    "sample_boundary_batch",
    "run_six_vertex",
    "height_function",
    "heights_batch",
]


def six_vertex_transition(i1: int, j1: int, delta1: float, delta2: float) -> dict:
    """The six admissible weights: identities, and the two Bernoulli corners."""
    if not (0.0 < delta1 < 1.0 and 0.0 < delta2 < 1.0):
        raise ValueError("delta1 and delta2 must lie in (0,1)")
    if i1 not in (0, 1) or j1 not in (0, 1):
        raise ValueError(f"spin-1/2 input must be bits, got ({i1}, {j1})")
    if (i1, j1) == (0, 0):
        return {(0, 0): 1.0}
    if (i1, j1) == (1, 1):
        return {(1, 1): 1.0}
    if (i1, j1) == (1, 0):
        return {(1, 0): delta1, (0, 1): 1.0 - delta1}
    return {(0, 1): delta2, (1, 0): 1.0 - delta2}


@dataclass(frozen=True)
class BoundaryBits:
    """Row entrance bits, one per row index i >= 1."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=np.uint8))

    def __len__(self) -> int:
        return len(self.bits)

    def prefix(self, n_rows: int) -> np.ndarray:
        if n_rows > len(self.bits):
            raise ValueError(f"only {len(self.bits)} bits materialized, need {n_rows}")
        return self.bits[:n_rows]


def sample_boundary(boundary: BernoulliBoundary, q: float, n_rows: int, rng) -> BoundaryBits:
    """Run the auxiliary m-column chain for n_rows rows and record its exit bits.

    Step input enters at column 1 every row.  At column x with k stored
    arrows: an incoming carry is kept with probability b_x (else absorbed,
    k -> k+1); without a carry one arrow is re-emitted with probability
    (1 - q^k) b_x (k -> k-1).  m = 0 means plain step data (all ones).
    """
    if n_rows < 1:
        raise ValueError("n_rows must be >= 1")
    m = boundary.m
    if m == 0:
        return BoundaryBits(np.ones(n_rows, dtype=np.uint8))
    counts = [0] * m
    bits = np.empty(n_rows, dtype=np.uint8)
    b = boundary.densities
    for i in range(n_rows):
        carry = 1
        for x in range(m):
            if carry:
                if rng.random() >= b[x]:
                    counts[x] += 1
                    carry = 0
            else:
                if rng.random() < (1.0 - q ** counts[x]) * b[x]:
                    counts[x] -= 1
                    carry = 1
        bits[i] = carry
    return BoundaryBits(bits)


def sample_boundary_batch(
    boundary: BernoulliBoundary, q: float, n_rows: int, n_traj: int, rng
) -> np.ndarray:
    """Vectorized `sample_boundary`: returns an (n_traj, n_rows) uint8 array."""
    m = boundary.m
    if m == 0:
        return np.ones((n_traj, n_rows), dtype=np.uint8)
    counts = np.zeros((n_traj, m), dtype=np.int64)
    bits = np.empty((n_traj, n_rows), dtype=np.uint8)
    b = boundary.densities
    for i in range(n_rows):
        carry = np.ones(n_traj, dtype=bool)
        for x in range(m):
            u = rng.random(n_traj)
            absorb = carry & (u >= b[x])
            counts[absorb, x] += 1
            emit = ~carry & (u < (1.0 - q ** counts[:, x]) * b[x])
            counts[emit, x] -= 1
            carry = (carry & ~absorb) | emit
        bits[:, i] = carry
    return bits


def run_six_vertex(
    p: SixVertexParams, boundary_bits: BoundaryBits, n_rows: int, rng
) -> list:
    """Reference trajectory: list of `SparseRowState`, one per row 1..n_rows."""
    if n_rows < 1:
        raise ValueError("n_rows must be >= 1")
    params = hsvm.VertexParams.six_vertex(p)
    bits = boundary_bits.prefix(n_rows)
    state = hsvm.SparseRowState()
    traj = []
    for t in range(n_rows):
        state = hsvm.sweep_row(state, int(bits[t]), params, rng)
        traj.append(state)
    return traj


def height_function(traj: list, x: float, y: int) -> int:
    """Paths crossing row y strictly to the right of x.

    On integer x this equals the count of paths at columns >= x+1 of slice y.
    """
    if not (1 <= y <= len(traj)):
        raise ValueError(f"row {y} outside the sampled range 1..{len(traj)}")
    return hsvm.height(traj[y - 1], math.floor(x) + 1)


def heights_batch(p: SixVertexParams, bits: np.ndarray, x: int, stream_fn) -> np.ndarray:
    """Final-slice heights h_T(x) for a block of trajectories.

    ``bits`` is (n_traj, n_rows) uint8; ``stream_fn(i)`` must return the
    generator owned by trajectory i, so results are independent of execution
    order.  Each trajectory pre-draws one uniform buffer with positional
    indexing and hands it to the sweep kernel (JIT-compiled when numba is
    present; the pure-Python path consumes the identical buffer positions and
    produces byte-identical heights).
    """
    n_traj, n_rows = bits.shape
    heights = np.empty(n_traj, dtype=np.int64)
    pos = np.empty(n_rows + 1, dtype=np.int64)
    scratch = np.empty(n_rows + 1, dtype=np.int64)
    offsets = np.empty(n_rows + 1, dtype=np.int64)
    for i in range(n_traj):
        row_bits = bits[i]
        # two uniforms per slot; slot count of row r = particles entering + 1
        offsets[0] = 0
        np.cumsum(2 * (np.cumsum(row_bits, dtype=np.int64) - row_bits + 1), out=offsets[1:])
        buf = stream_fn(i).random(int(offsets[n_rows]))
        heights[i] = _kernels.six_vertex_sweep(
            row_bits, offsets, buf, pos, scratch, p.delta1, p.delta2, x
        )
    return heights
