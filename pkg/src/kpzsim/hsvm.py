"""Sampler for the inhomogeneous higher-spin vertex model.

The model lives on the positive quadrant: paths enter from the left boundary
(one horizontal edge per row at most) and from below, and every vertex routes
its incoming arrows up/right according to a four-entry stochastic table
parametrized by q, a per-row spectral parameter u_y, and per-column
inhomogeneity/spin parameters xi_x, s_x.

A time slice is stored sparsely as (column, arrow count) pairs, so the lattice
is effectively infinite to the right.  One discrete time step is a left-to-
right sweep: the (at most one) horizontal arrow is carried rightward until it
is absorbed, which is equivalent to the usual diagonal update because every
vertex input depends only on vertices weakly below-left of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import NonStochasticError, NonTerminatingError
from .scaling import BernoulliBoundary, SixVertexParams

__all__ = ["VertexParams", "SparseRowState", "vertex_transition", "sweep_row", "height"]

_PROB_SLACK = 1e-12
DEFAULT_COLUMN_CAP = 10_000_000


@dataclass(frozen=True)
class VertexParams:
    """q plus the per-site parameter maps (columns and rows are 1-indexed)."""

    q: float
    u_of_row: Callable[[int], float]
    xi_of_col: Callable[[int], float]
    s_of_col: Callable[[int], float]

    @classmethod
    def six_vertex(cls, p: SixVertexParams) -> "VertexParams":
        # spin 1/2: s = q^{-1/2}, xi = 1, u = kappa * s
        q = p.q
        s = q**-0.5
        u = p.kappa * s
        return cls(q=q, u_of_row=lambda y: u, xi_of_col=lambda x: 1.0, s_of_col=lambda x: s)

    @classmethod
    def generalized_step_bernoulli(
        cls, p: SixVertexParams, boundary: BernoulliBoundary, a: float = 1e-7
    ) -> "VertexParams":
        """Six-vertex bulk with the m boundary columns carrying spin a -> 0.

        Column x <= m gets s_x = a and xi_x = -beta_x / (a u), which realizes
        the boundary-generating chain inside the same lattice.  ``a`` is kept
        tiny but positive; the exact a = 0 limit is what `sixvertex` uses.
        """
        q = p.q
        s = q**-0.5
        u = p.kappa * s
        betas = boundary.betas
        m = boundary.m

        def xi(x: int) -> float:
            return -betas[x - 1] / (a * u) if x <= m else 1.0

        return cls(
            q=q,
            u_of_row=lambda y: u,
            xi_of_col=xi,
            s_of_col=lambda x: a if x <= m else s,
        )


@dataclass(frozen=True)
class SparseRowState:
    """Arrow counts of one time slice: strictly increasing columns, counts >= 1."""

    occupied: tuple = ()
    row_index: int = 0

    def __post_init__(self):
        cols = [c for c, _ in self.occupied]
        if cols != sorted(set(cols)):
            raise ValueError("columns must be strictly increasing")
        if any(c < 1 for c in cols):
            raise ValueError("columns must be positive")
        if any(n < 1 for _, n in self.occupied):
            raise ValueError("counts must be >= 1")

    @property
    def total_count(self) -> int:
        return sum(n for _, n in self.occupied)

    def to_text(self) -> str:
        """Debug dump: ``row_index,col:count,...`` (documented, not stable)."""
        cells = ",".join(f"{c}:{n}" for c, n in self.occupied)
        return f"{self.row_index},{cells}" if cells else f"{self.row_index}"


def _table(i1: int, j1: int, qk: float, g: float, h: float) -> dict:
    """Outcome table from the products g = s*xi*u and h = s^2 at one site."""
    denom = 1.0 - g
    if j1 == 0:
        if i1 == 0:
            return {(0, 0): 1.0}
        return {
            (i1, 0): (1.0 - qk * g) / denom,
            (i1 - 1, 1): (qk - 1.0) * g / denom,
        }
    return {
        (i1 + 1, 0): (1.0 - qk * h) / denom,
        (i1, 1): (qk * h - g) / denom,
    }


def vertex_transition(i1: int, j1: int, x: int, y: int, params: VertexParams) -> dict:
    """Probability table over (i2, j2) at vertex (x, y) given input (i1, j1).

    Raises NonStochasticError if any entry falls outside [0, 1] by more than
    the rounding slack, or if the pair does not sum to 1.
    """
    if i1 < 0 or j1 not in (0, 1):
        raise ValueError(f"invalid input configuration ({i1}, {j1})")
    s = params.s_of_col(x)
    g = s * params.xi_of_col(x) * params.u_of_row(y)
    table = _table(i1, j1, params.q**i1, g, s * s)
    total = 0.0
    for out, p in table.items():
        if not (-_PROB_SLACK <= p <= 1.0 + _PROB_SLACK):
            raise NonStochasticError(
                f"transition {(i1, j1)} -> {out} at ({x}, {y}) has probability {p}"
            )
        total += p
    if abs(total - 1.0) > 4 * _PROB_SLACK:
        raise NonStochasticError(f"outcomes at ({x}, {y}) sum to {total}, not 1")
    # drop branches that are zero up to rounding, renormalize the rest
    kept = {out: min(max(p, 0.0), 1.0) for out, p in table.items() if p > 100 * _PROB_SLACK}
    norm = sum(kept.values())
    return {out: p / norm for out, p in kept.items()}


def _sample(table: dict, rng) -> tuple:
    u = rng.random()
    acc = 0.0
    out = None
    for out, p in table.items():
        acc += p
        if u < acc:
            return out
    return out  # rounding: fall through to the last outcome


def sweep_row(
    state: SparseRowState,
    incoming_j: int,
    params: VertexParams,
    rng,
    column_cap: int = DEFAULT_COLUMN_CAP,
) -> SparseRowState:
    """Advance one row: returns the next time slice.

    ``incoming_j`` is the left-boundary bit for this row.  The horizontal
    carry steps through empty columns one at a time (per-column draws; exact,
    if slow when the absorption probability is tiny) and interacts with each
    occupied column through `vertex_transition`.
    """
    y = state.row_index + 1
    carry = int(incoming_j)
    out: list = []
    col = 1
    run = 0
    for c, cnt in state.occupied:
        while carry and col < c:
            i2, carry = _sample(vertex_transition(0, 1, col, y, params), rng)
            if i2:
                out.append((col, i2))
            col += 1
            run += 1
            if run > column_cap:
                raise NonTerminatingError(f"carry alive after {run} columns in row {y}")
        i2, carry = _sample(vertex_transition(cnt, carry, c, y, params), rng)
        if i2:
            out.append((c, i2))
        col = c + 1
    while carry:
        i2, carry = _sample(vertex_transition(0, 1, col, y, params), rng)
        if i2:
            out.append((col, i2))
        col += 1
        run += 1
        if run > column_cap:
            raise NonTerminatingError(f"carry alive after {run} columns in row {y}")
    return SparseRowState(occupied=tuple(out), row_index=y)


def height(state: SparseRowState, x: int) -> int:
    """Number of paths at columns >= x in this slice (paths strictly right of x-1)."""
    return sum(n for c, n in state.occupied if c >= x)
