"""Limiting distributions: Tracy-Widom, rank-m spiked crossover, finite GUE.

Primary routes evaluate each CDF as a Fredholm determinant of a contour
kernel on open wedge contours:

* ``tracy_widom_cdf``   -- det(Id + L_s) on the pi/3 wedge at 0, with the
  inner integral over the 2 pi/3 wedge at -1;
* ``bbp_cdf``           -- same kernel dressed with prod_j (v + c_j)/(w + c_j),
  contours shifted left of every -c_j;
* ``gue_finite_cdf``    -- det(Id + L_{s;m}) on the pi/8 wedge at -1 with a
  vertical inner line at -2 (kernel carries (v/w)^m), cross-evaluated against
  direct quadrature of the m-point eigenvalue density.

Each route has an independent oracle: the real-line Airy-kernel determinant
for Tracy-Widom, the eigenvalue-density quadrature and a GUE sampling check
for the finite-m laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import airy, roots_legendre

from .errors import InvalidShiftError
from .fredholm import FredholmResult, fredholm_det, vline_contour, wedge_contour

__all__ = [
    "tracy_widom_cdf",
    "tracy_widom_cdf_airy",
    "bbp_cdf",
    "bbp_cdf_realline",
    "gue_finite_cdf",
    "GmResult",
    "gm_determinant",
    "gm_density_tensor",
    "gm_moments",
    "gue_max_eig_mc",
    "normal_cdf",
]

CUBIC_RAY_LENGTH = 8.0
QUADRATIC_RAY_LENGTH = 12.0


def normal_cdf(s):
    return 0.5 * (1.0 + np.vectorize(math.erf)(np.asarray(s, dtype=float) / math.sqrt(2.0)))


def _clamp(v: float) -> float:
    return min(1.0, max(0.0, v))


# ---------------------------------------------------------------------------
# Tracy-Widom / crossover kernels (cubic exponent)


def _crossover_kernel(s: float, shifts, outer_apex: float):
    """Matrix builder for the wedge kernel with optional spike factors.

    K(w, w') = (1/2 pi i) int_V  e^{w^3/3 - v^3/3 + s(v - w)}
               prod_j (v + c_j)/(w + c_j) / ((v - w)(w' - v)) dv
    with v on the 2 pi/3 wedge rooted one unit left of the w wedge.
    """
    shifts = np.asarray(shifts, dtype=float)

    def matrix(contour):
        inner = wedge_contour(
            "wedge23", outer_apex - 1.0, CUBIC_RAY_LENGTH, contour.nodes_per_panel
        )
        w = contour.nodes
        v = inner.nodes
        exp_part = np.exp(
            (w**3)[:, None] / 3.0 - (v**3)[None, :] / 3.0 + s * (v[None, :] - w[:, None])
        )
        if shifts.size:
            ratio = np.ones((len(w), len(v)), dtype=complex)
            for c in shifts:
                ratio *= (v[None, :] + c) / (w[:, None] + c)
            exp_part = exp_part * ratio
        left = inner.weights[None, :] * exp_part / (v[None, :] - w[:, None])
        right = 1.0 / (w[None, :] - v[:, None])
        return (left @ right) / (2j * np.pi)

    return matrix


def tracy_widom_cdf(s: float, tol: float = 1e-8, detail: bool = False):
    """GUE Tracy-Widom CDF via the contour-kernel determinant."""
    contour = wedge_contour("wedge3", 0.0, CUBIC_RAY_LENGTH)
    res = fredholm_det(_crossover_kernel(s, (), 0.0), contour, tol=tol)
    return res if detail else _clamp(res.value)


#: contour route precision decays like exp((E+1)^3/3) * eps; cap the apex shift
MAX_CONTOUR_SHIFT = 1.25


def bbp_cdf(s: float, shifts=(), shift_margin: float | None = None,
            tol: float = 1e-8, detail: bool = False):
    """Rank-m crossover CDF with spike shifts c; reduces to Tracy-Widom for c = ().

    The wedge apex sits at -E with E = max(0, max c) + 1 by default; a caller
    supplied E must satisfy E > max(c) (InvalidShiftError otherwise).  Because
    the contours pass left of every -c_j, the determinant's conditioning decays
    like exp((E+1)^3/3); shifts beyond MAX_CONTOUR_SHIFT are therefore routed
    to the real-line evaluation (`bbp_cdf_realline`), which splits off the
    pole residues analytically and stays well conditioned for large spikes.
    """
    shifts = tuple(float(c) for c in shifts)
    c_max = max(shifts) if shifts else 0.0
    if shift_margin is not None and shifts and shift_margin <= c_max:
        raise InvalidShiftError(f"E = {shift_margin} must exceed max c = {c_max}")
    if c_max > MAX_CONTOUR_SHIFT and shift_margin is None:
        return bbp_cdf_realline(s, shifts)  # plain value; no node-doubling detail
    e_shift = max(0.0, c_max) + 1.0 if shift_margin is None else float(shift_margin)
    contour = wedge_contour("wedge3", -e_shift, CUBIC_RAY_LENGTH)
    res = fredholm_det(_crossover_kernel(s, shifts, -e_shift), contour, tol=tol)
    return res if detail else _clamp(res.value)


def _dedupe_shifts(shifts) -> np.ndarray:
    """Spread exactly coincident shifts apart so simple poles stay simple."""
    c = np.array(sorted(shifts), dtype=float)
    for j in range(1, len(c)):
        if c[j] - c[j - 1] < 1e-5:
            c[j] = c[j - 1] + 1e-5
    return c


def _phi_reg(z: np.ndarray, shifts: np.ndarray, apex: float) -> np.ndarray:
    """(1/2 pi i) int e^{w^3/3 - zw} / prod(w + c_j) dw on a wedge right of all -c_j."""
    ctr = wedge_contour("wedge3", apex, CUBIC_RAY_LENGTH, 32)
    w = ctr.nodes
    denom = np.ones_like(w)
    for c in shifts:
        denom *= w + c
    vals = np.exp((w**3) / 3.0 - z[:, None] * w[None, :]) / denom[None, :]
    return (vals @ ctr.weights) / (2j * np.pi)


def _psi_poly(z: np.ndarray, shifts: np.ndarray, skip: int | None = None) -> np.ndarray:
    """(1/2 pi i) int e^{-v^3/3 + zv} prod_{k != skip}(v + c_k) dv on the -1 wedge."""
    ctr = wedge_contour("wedge23", -1.0, CUBIC_RAY_LENGTH, 32)
    v = ctr.nodes
    poly = np.ones_like(v)
    for k, c in enumerate(shifts):
        if k != skip:
            poly *= v + c
    vals = np.exp(-(v**3) / 3.0 + z[:, None] * v[None, :]) * poly[None, :]
    return (vals @ ctr.weights) / (2j * np.pi)


def bbp_cdf_realline(s: float, shifts, n_nodes: int = 140, domain: float = 14.0,
                     u_domain: float = 18.0) -> float:
    """Crossover CDF as det(Id - M) on L^2(s, infinity).

    M(x, y) = int_0^infty phi(x+u) psi(y+u) du with phi carrying the 1/(w+c_j)
    poles and psi the (v+c_j) zeros.  phi is split into a regular part on a
    wedge right of every pole plus the explicit residues kappa_j e^{z c_j};
    composing each residue with psi under the u-integral cancels the matching
    factor analytically, leaving entire, well-conditioned pieces for any
    positive spike size.  Requires min(c) > -2 (large negative shifts keep the
    contour route conditioned anyway).
    """
    c = _dedupe_shifts(shifts)
    if c.size and c.min() <= -2.0:
        raise ValueError("real-line route needs min(c) > -2; use the contour route")
    apex = 1.0 if not c.size else max(1.0, -c.min() + 1.0)
    xs, wx = roots_legendre(n_nodes)
    x = s + 0.5 * domain * (xs + 1.0)
    wx = 0.5 * domain * wx
    us, wu = roots_legendre(n_nodes + 20)
    u = 0.5 * u_domain * (us + 1.0)
    wu = 0.5 * u_domain * wu

    zmat = (x[:, None] + u[None, :]).ravel()
    phi = _phi_reg(zmat, c, apex).reshape(n_nodes, -1)
    psi = _psi_poly(zmat, c).reshape(n_nodes, -1)
    mker = (phi * wu[None, :]) @ psi.T
    # phi = phi_reg - sum_j kappa_j e^{z c_j}; composing each residue with psi
    # under the u-integral cancels the zero at -c_j: the correction is
    # + kappa_j e^{x c_j} V_j(y) with V_j = psi with factor j removed.
    for j, cj in enumerate(c):
        others = np.delete(c, j)
        log_kappa = -cj**3 / 3.0 - np.log(np.abs(others - cj)).sum()
        sign = float(np.prod(np.sign(others - cj))) if others.size else 1.0
        expo = log_kappa + x * cj
        if expo.max() < -700.0:
            continue
        rank_col = sign * np.exp(expo)
        mker = mker + rank_col[:, None] * _psi_poly(x, c, skip=j)[None, :]
    det = np.linalg.det(np.eye(n_nodes) - wx[:, None] * mker)
    return _clamp(float(det.real))


# ---------------------------------------------------------------------------
# Independent Tracy-Widom oracle on the real line


def tracy_widom_cdf_airy(s: float, n_nodes: int = 160, domain: float = 14.0) -> float:
    """det(Id - K_Airy) on L^2(s, infinity) by symmetric Nystrom quadrature.

    K(x, y) = int_0^infty Ai(x+u) Ai(y+u) du, evaluated with Gauss-Legendre in
    both x and u; superexponential kernel decay justifies the finite domain.
    """
    xs, wx = roots_legendre(n_nodes)
    x = s + 0.5 * domain * (xs + 1.0)
    wx = 0.5 * domain * wx
    us, wu = roots_legendre(n_nodes + 20)
    u = 0.5 * (domain + 4.0) * (us + 1.0)
    wu = 0.5 * (domain + 4.0) * wu
    amat = airy(x[:, None] + u[None, :])[0]
    kmat = (amat * wu[None, :]) @ amat.T
    sq = np.sqrt(wx)
    sym = sq[:, None] * kmat * sq[None, :]
    sign, logdet = np.linalg.slogdet(np.eye(n_nodes) - sym)
    return _clamp(float(sign * np.exp(logdet)))


# ---------------------------------------------------------------------------
# Finite-m GUE law


@dataclass(frozen=True)
class GmResult:
    quadrature: float
    determinant: FredholmResult

    @property
    def value(self) -> float:
        return self.quadrature


def _gm_kernel(s: float, m: int):
    """Matrix builder for the quadratic kernel with the (v/w)^m factor."""

    def matrix(contour):
        inner = vline_contour(-2.0, QUADRATIC_RAY_LENGTH, contour.nodes_per_panel)
        w = contour.nodes
        v = inner.nodes
        exp_part = np.exp(
            (v**2)[None, :] / 2.0 - (w**2)[:, None] / 2.0 + s * (v[None, :] - w[:, None])
        )
        exp_part = exp_part * (v[None, :] / w[:, None]) ** m
        left = inner.weights[None, :] * exp_part / (v[None, :] - w[:, None])
        right = 1.0 / (w[None, :] - v[:, None])
        return (left @ right) / (2j * np.pi)

    return matrix


def gm_determinant(s: float, m: int, tol: float = 1e-8) -> FredholmResult:
    """det(Id + L_{s;m}) on the pi/8 wedge at -1."""
    if not 1 <= m <= 8:
        raise ValueError("m must be in 1..8")
    contour = wedge_contour("wedge8", -1.0, QUADRATIC_RAY_LENGTH)
    return fredholm_det(_gm_kernel(s, m), contour, tol=tol)


def gm_density_tensor(s: float, m: int, n_nodes: int = 72, span: float = 12.0) -> float:
    """Direct m-fold quadrature of prod |x_j - x_k|^2 prod e^{-x_j^2/2}.

    The lower limit is truncated at s - span (Gaussian tail); the
    normalization uses the same rule extended up to +span.  Tensor cost is
    n_nodes^m, so this route is capped at m <= 4.
    """
    if not 1 <= m <= 4:
        raise ValueError("tensor quadrature is capped at m <= 4")

    def block(lo: float, hi: float) -> float:
        xs, ws = roots_legendre(n_nodes)
        x = 0.5 * (hi - lo) * xs + 0.5 * (hi + lo)
        w = 0.5 * (hi - lo) * ws * np.exp(-0.5 * x**2)
        grids = np.meshgrid(*([x] * m), indexing="ij", sparse=True)
        wgts = np.meshgrid(*([w] * m), indexing="ij", sparse=True)
        dens = np.ones([1] * m)
        for j in range(m):
            for k in range(j + 1, m):
                dens = dens * (grids[j] - grids[k]) ** 2
        for j in range(m):
            dens = dens * wgts[j]
        return float(dens.sum())

    lo = min(s, 0.0) - span
    return block(lo, s) / block(lo, span)


def gm_moments(s: float, m: int, n_nodes: int = 240, span: float = 12.0) -> float:
    """Same density integral reduced to an m x m Hankel moment determinant.

    The Andreief identity turns the m-fold integral into m! det[M_{ij}] with
    M_{ij}(s) = int^s x^{i+j} e^{-x^2/2} dx; the m! and the measure constants
    cancel in the normalization ratio.
    """
    if m < 1:
        raise ValueError("m must be >= 1")

    def moment_matrix(lo: float, hi: float) -> np.ndarray:
        xs, ws = roots_legendre(n_nodes)
        x = 0.5 * (hi - lo) * xs + 0.5 * (hi + lo)
        w = 0.5 * (hi - lo) * ws * np.exp(-0.5 * x**2)
        powers = x[None, :] ** np.arange(2 * m - 1)[:, None]
        mom = powers @ w
        return mom[np.add.outer(np.arange(m), np.arange(m))]

    lo = min(s, 0.0) - span
    return float(np.linalg.det(moment_matrix(lo, s)) / np.linalg.det(moment_matrix(lo, span)))


def gue_finite_cdf(s: float, m: int, tol: float = 1e-8) -> GmResult:
    """Both routes to G_m(s): density quadrature (primary) and determinant."""
    quad = gm_density_tensor(s, m) if m <= 3 else gm_moments(s, m)
    det_res = gm_determinant(s, m, tol=tol)
    return GmResult(quadrature=_clamp(quad), determinant=det_res)


def gue_max_eig_mc(m: int, n_samples: int, rng) -> np.ndarray:
    """Sorted largest-eigenvalue samples of m x m GUE matrices.

    Diagonal entries are standard normal; off-diagonal entries are complex
    with variance 1/2 per component, so the eigenvalue density is
    prod |x_j - x_k|^2 prod e^{-x_j^2/2} up to normalization.
    """
    if not 1 <= m <= 8:
        raise ValueError("m must be in 1..8")
    if m == 1:
        return np.sort(rng.standard_normal(n_samples))
    out = np.empty(n_samples, dtype=float)
    chunk = max(1, min(n_samples, 200_000))
    done = 0
    while done < n_samples:
        size = min(chunk, n_samples - done)
        re = rng.standard_normal((size, m, m))
        im = rng.standard_normal((size, m, m))
        h = (re + 1j * im) / np.sqrt(2.0)
        # symmetrize: diagonal ends up exactly re_jj ~ N(0,1), off-diagonal
        # components N(0, 1/2), i.e. weight exp(-tr H^2 / 2)
        h = (h + np.conj(np.transpose(h, (0, 2, 1)))) / np.sqrt(2.0)
        out[done : done + size] = np.linalg.eigvalsh(h)[:, -1]
        done += size
    return np.sort(out)
