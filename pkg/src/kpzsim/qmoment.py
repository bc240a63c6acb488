"""Contour-integral q-moments of the six-vertex height and exact small-system laws.

E[q^{k h_t(x)}] admits a k-fold contour integral over nested circle families:
one small circle around -q shared by every variable plus per-variable circles
around 0 whose radii grow geometrically (each at least a factor 1/q), all
excluding the poles q*beta_j and -kappa.  This module constructs such circle
families deterministically, evaluates the integral by tensor-product
trapezoidal quadrature (exponentially accurate on closed analytic contours),
and provides two independent companions:

* an exhaustive enumeration of every per-vertex branch for tiny systems,
  giving the exact law of h_t(x) (the oracle the quadrature is tested
  against), and
* the q-Laplace series sum_k zeta^k E[q^{k h}]/(q;q)_k with a rigorous
  truncation-tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleContourError, NotConvergedError, SizeLimitError, TailTooLargeError
from .scaling import BernoulliBoundary, SixVertexParams

__all__ = [
    "NestedContours",
    "MomentResult",
    "q_pochhammer",
    "build_contours",
    "qmoment",
    "brute_force_height_dist",
    "qlaplace_series",
]

MAX_ORDER = 3  # k-fold quadrature costs N^k; higher moments go through the series tail bound


def q_pochhammer(a, q: float, n=None):
    """(a; q)_n = prod_{i=0}^{n-1} (1 - a q^i); n=None means the infinite product.

    The infinite product is truncated once |a| q^i drops below machine-epsilon
    guard level, which leaves the double-precision value exact.
    """
    a = complex(a)
    if n is not None and n is not math.inf:
        n = int(n)
        if n < 0:
            raise ValueError("n must be >= 0")
        out = 1.0 + 0.0j
        for i in range(n):
            out *= 1.0 - a * q**i
        return out
    if not (0.0 <= abs(q) < 1.0):
        raise ValueError("infinite product needs |q| < 1")
    out = 1.0 + 0.0j
    term = a
    while abs(term) > 1e-18:
        out *= 1.0 - term
        term *= q
    return out


@dataclass(frozen=True)
class NestedContours:
    """Circle family: c1 around -q (shared) plus origin-centered c2 circles.

    Variable i runs over c1 united with the circle of radius c2_radii[i-1];
    radii are strictly increasing with ratio > 1/q so that no cross factor
    y_i - q y_j hits a pole.
    """

    q: float
    c1_center: float
    c1_radius: float
    c2_radii: tuple

    def __post_init__(self):
        object.__setattr__(self, "c2_radii", tuple(float(r) for r in self.c2_radii))

    @property
    def order(self) -> int:
        return len(self.c2_radii)

    def validate(self, excluded) -> None:
        """Check every nesting/exclusion invariant; raise if any fails."""
        q, rho = self.q, self.c1_radius
        if rho <= 0.0 or any(r <= 0.0 for r in self.c2_radii):
            raise InfeasibleContourError("radii must be positive")
        # c1 interior disjoint from its own q-image
        if rho * (1.0 + q) >= abs(self.c1_center) * (1.0 - q):
            raise InfeasibleContourError("c1 intersects q*c1")
        radii = self.c2_radii
        for r_in, r_out in zip(radii, radii[1:]):
            if r_out * q <= r_in:
                raise InfeasibleContourError("c2 nesting ratio must exceed 1/q")
        # outermost c2 circle stays inside the q-image of c1 and clear of c1 itself
        r_top = radii[-1]
        if r_top >= q * (abs(self.c1_center) - rho):
            raise InfeasibleContourError("outer c2 circle touches q*c1")
        if r_top >= abs(self.c1_center) - rho:
            raise InfeasibleContourError("outer c2 circle touches c1")
        for pole in excluded:
            if abs(pole - self.c1_center) <= rho:
                raise InfeasibleContourError(f"excluded point {pole} inside c1")
            if abs(pole) <= r_top:
                raise InfeasibleContourError(f"excluded point {pole} inside a c2 circle")

    def gamma_nodes(self, i: int, n_nodes: int):
        """Trapezoid nodes and dz weights for gamma_i = c1 (union) c2[i-1]."""
        phi = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
        e = np.exp(1j * phi)
        zs, ws = [], []
        for center, r in ((self.c1_center, self.c1_radius), (0.0, self.c2_radii[i - 1])):
            zs.append(center + r * e)
            ws.append(2j * np.pi * r * e / n_nodes)
        return np.concatenate(zs), np.concatenate(ws)


def _excluded_points(params: SixVertexParams, boundary: BernoulliBoundary | None):
    ex = [-params.kappa]
    if boundary is not None and boundary.m > 0:
        ex.extend(params.q * beta for beta in boundary.betas)
    return ex


def build_contours(
    k: int, params: SixVertexParams, boundary: BernoulliBoundary | None = None
) -> NestedContours:
    """Deterministic radii choice satisfying every invariant, or Infeasible.

    c1 radius: a third of the clearance between -q and the nearest obstacle
    (origin, q-image constraint, excluded poles).  c2 radii: geometric with
    ratio max(2, 1.5/q), topped at 70% of the allowed maximum.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = params.q
    excluded = _excluded_points(params, boundary)
    clearance = min(
        q,
        q * (1.0 - q) / (1.0 + q),
        min(abs(p + q) for p in excluded),
    )
    rho = clearance / 3.0
    r_max = min(
        q * (q - rho),              # stay inside the q-image of c1
        q - rho,                    # stay clear of c1
        min(abs(p) for p in excluded),
    )
    ratio = max(2.0, 1.5 / q)
    r_top = 0.7 * r_max
    radii = tuple(r_top / ratio ** (k - i) for i in range(1, k + 1))
    contours = NestedContours(q=q, c1_center=-q, c1_radius=rho, c2_radii=radii)
    contours.validate(excluded)
    return contours


@dataclass(frozen=True)
class MomentResult:
    value: float
    imag_residual: float
    node_count: int


def _integrand_factory(x: int, t: int, params: SixVertexParams, boundary):
    q, kappa = params.q, params.kappa
    betas = boundary.betas if (boundary is not None and boundary.m > 0) else ()

    def f(y):
        out = ((1.0 + y) / (1.0 + y / q)) ** t
        out = out * ((1.0 + y / (q * kappa)) / (1.0 + y / kappa)) ** (x - 1)
        for beta in betas:
            out = out / (1.0 - y / (q * beta))
        return out

    return f


def _eval_once(k, f, q, contours, n_nodes):
    nodes = [contours.gamma_nodes(i, n_nodes) for i in range(1, k + 1)]
    weighted = [w * f(z) / z for z, w in nodes]
    pref = q ** (k * (k - 1) // 2) / (2j * np.pi) ** k
    if k == 1:
        return pref * weighted[0].sum()
    z1, z2 = nodes[0][0], nodes[1][0]
    c12 = (z1[:, None] - z2[None, :]) / (z1[:, None] - q * z2[None, :])
    if k == 2:
        return pref * (weighted[0] @ c12 @ weighted[1])
    z3 = nodes[2][0]
    c13 = (z1[:, None] - z3[None, :]) / (z1[:, None] - q * z3[None, :])
    c23 = (z2[:, None] - z3[None, :]) / (z2[:, None] - q * z3[None, :])
    inner = (c12 * weighted[0][:, None]).T @ c13  # sum over the gamma_1 variable
    return pref * np.einsum("b,c,bc,bc->", weighted[1], weighted[2], c23, inner)


def qmoment(
    k: int,
    x: int,
    t: int,
    params: SixVertexParams,
    boundary: BernoulliBoundary | None = None,
    contours: NestedContours | None = None,
    n_nodes: int = 256,
    tol: float = 1e-9,
    imag_tol: float = 1e-9,
    max_doublings: int = 3,
) -> MomentResult:
    """E[q^{k h_t(x)}] by k-fold trapezoid quadrature with node doubling.

    Supports k <= 3.  Doubles the per-circle node count until two consecutive
    values agree within ``tol``; raises NotConvergedError otherwise, or if the
    imaginary residual of the accepted value exceeds ``imag_tol``.
    """
    if not 1 <= k <= MAX_ORDER:
        raise ValueError(f"k must be in 1..{MAX_ORDER}, got {k}")
    if x < 1 or t < 1:
        raise ValueError("x and t must be >= 1")
    if contours is None:
        contours = build_contours(k, params, boundary)
    f = _integrand_factory(x, t, params, boundary)
    q = params.q
    prev = _eval_once(k, f, q, contours, n_nodes)
    n = n_nodes
    for _ in range(max_doublings):
        n *= 2
        cur = _eval_once(k, f, q, contours, n)
        if abs(cur - prev) <= tol:
            if abs(cur.imag) > imag_tol:
                raise NotConvergedError(f"imaginary residual {cur.imag} exceeds {imag_tol}")
            return MomentResult(value=float(cur.real), imag_residual=abs(cur.imag), node_count=n)
        prev = cur
    raise NotConvergedError(f"quadrature still moving after {max_doublings} doublings")


# ---------------------------------------------------------------------------
# Exhaustive enumeration oracle


def _aux_branches(counts, densities, q):
    """All (exit bit, new counts, probability) branches of one boundary-chain row."""
    out = []

    def rec(col, carry, cts, prob):
        if col == len(densities):
            out.append((carry, tuple(cts), prob))
            return
        b = densities[col]
        if carry:
            if b > 0.0:
                rec(col + 1, 1, cts, prob * b)
            if b < 1.0:
                nxt = list(cts)
                nxt[col] += 1
                rec(col + 1, 0, nxt, prob * (1.0 - b))
        else:
            p_emit = (1.0 - q ** cts[col]) * b
            if p_emit > 0.0:
                nxt = list(cts)
                nxt[col] -= 1
                rec(col + 1, 1, nxt, prob * p_emit)
            if p_emit < 1.0:
                rec(col + 1, 0, cts, prob * (1.0 - p_emit))

    rec(0, 1, list(counts), 1.0)
    return out


def _row_branches(occ, carry, delta1, delta2):
    """All (new occupancy, right-exit increment, probability) branches of one sweep.

    Occupancy covers columns 1..x-1; a carry alive past the window exits right
    with probability one, which is exact because nothing right of the window
    ever feeds back into it.
    """
    out = []

    def rec(i, carry, acc, prob):
        if i == len(occ):
            out.append((tuple(acc), 1 if carry else 0, prob))
            return
        o = occ[i]
        if o == 0 and carry == 0:
            rec(i + 1, 0, acc + [0], prob)
        elif o == 1 and carry == 1:
            rec(i + 1, 1, acc + [1], prob)
        elif o == 1:
            rec(i + 1, 0, acc + [1], prob * delta1)
            rec(i + 1, 1, acc + [0], prob * (1.0 - delta1))
        else:
            rec(i + 1, 1, acc + [0], prob * delta2)
            rec(i + 1, 0, acc + [1], prob * (1.0 - delta2))

    rec(0, carry, [], 1.0)
    return out


def brute_force_height_dist(
    t: int,
    x: int,
    params: SixVertexParams,
    boundary: BernoulliBoundary | None = None,
    node_budget: int = 2_000_000,
) -> np.ndarray:
    """Exact law of h_t(x) over {0..t} by enumerating every branch.

    The state is (boundary-chain counts, occupancy of columns < x, paths at
    columns >= x); probabilities are summed over all per-vertex outcomes.
    Intended for t <= 4 and m <= 2; raises SizeLimitError beyond the budget.
    """
    if t < 1 or x < 1:
        raise ValueError("t and x must be >= 1")
    if boundary is None:
        boundary = BernoulliBoundary.step()
    q = params.q
    dens = boundary.densities
    start = ((0,) * boundary.m, (0,) * (x - 1), 0)
    states = {start: 1.0}
    for _ in range(t):
        nxt: dict = {}
        for (aux, occ, nr), p0 in states.items():
            for bit, aux2, pb in _aux_branches(aux, dens, q):
                for occ2, dnr, pl in _row_branches(occ, bit, params.delta1, params.delta2):
                    key = (aux2, occ2, nr + dnr)
                    nxt[key] = nxt.get(key, 0.0) + p0 * pb * pl
            if len(nxt) > node_budget:
                raise SizeLimitError(f"enumeration exceeded {node_budget} states")
        states = nxt
    dist = np.zeros(t + 1)
    for (_aux, _occ, nr), p in states.items():
        dist[nr] += p  # tracked occupancy covers columns < x only, so h_t(x) = nr
    return dist


def qlaplace_series(zeta: complex, moments, q: float, tol: float | None = None):
    """Truncated sum_k zeta^k m_k / (q;q)_k with a rigorous tail bound.

    The bound uses m_k <= 1 and (q;q)_k >= (q;q)_inf:
    |tail| <= sum_{k>K} |zeta|^k / (q;q)_inf.  Requires |zeta| < 1.
    """
    zeta = complex(zeta)
    if abs(zeta) >= 1.0:
        raise ValueError("series tail bound needs |zeta| < 1")
    moments = list(moments)
    value = 0.0 + 0.0j
    poch = 1.0 + 0.0j
    for k, mk in enumerate(moments):
        if k > 0:
            poch *= 1.0 - q**k
        value += zeta**k * mk / poch
    big_k = len(moments) - 1
    qq_inf = abs(q_pochhammer(q, q))
    tail = abs(zeta) ** (big_k + 1) / ((1.0 - abs(zeta)) * qq_inf)
    if tol is not None and tail > tol:
        raise TailTooLargeError(f"tail bound {tail} exceeds {tol}")
    return value, tail
