"""Ray contours and the Nystrom Fredholm-determinant engine.

The determinant convention carries a 1/(2 pi i) per integration variable:

    det(Id + K) = 1 + sum_k 1/((2 pi i)^k k!) int...int det[K(x_i, x_j)] dx

so the Nystrom discretization is det(I + W K / (2 pi i)) with W the diagonal
of quadrature weights (complex, including the path direction dz).  Contours
are open wedges or vertical lines, discretized by Gauss-Legendre panels per
ray; node doubling is the convergence check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import NotConvergedError

__all__ = ["RayContour", "FredholmResult", "wedge_contour", "vline_contour", "fredholm_det"]

#: ray half-angles by contour kind
_ANGLES = {"wedge3": np.pi / 3.0, "wedge23": 2.0 * np.pi / 3.0, "wedge8": np.pi / 8.0}

#: relative panel breakpoints along a ray (finer near the apex)
_BREAKS = np.array([0.0, 0.1, 0.3, 0.6, 1.0])


@dataclass(frozen=True)
class RayContour:
    """Discretized open contour: nodes in orientation order, dz in weights."""

    kind: str
    apex: float
    length: float
    nodes: np.ndarray
    weights: np.ndarray
    nodes_per_panel: int

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def refined(self, factor: int = 2) -> "RayContour":
        if self.kind == "vline":
            return vline_contour(self.apex, self.length, self.nodes_per_panel * factor)
        return wedge_contour(self.kind, self.apex, self.length, self.nodes_per_panel * factor)


def _panel_rule(length: float, nodes_per_panel: int):
    xs, ws = roots_legendre(nodes_per_panel)
    ts, wts = [], []
    for a, b in zip(_BREAKS[:-1] * length, _BREAKS[1:] * length):
        ts.append(0.5 * (b - a) * xs + 0.5 * (b + a))
        wts.append(0.5 * (b - a) * ws)
    return np.concatenate(ts), np.concatenate(wts)


def wedge_contour(kind: str, apex: float, length: float, nodes_per_panel: int = 24) -> RayContour:
    """Two rays from ``apex`` at angles -+theta, oriented bottom to top."""
    theta = _ANGLES[kind]
    t, w = _panel_rule(length, nodes_per_panel)
    down = np.exp(-1j * theta)
    up = np.exp(1j * theta)
    nodes = np.concatenate([apex + t[::-1] * down, apex + t * up])
    weights = np.concatenate([-w[::-1] * down, w * up])
    return RayContour(kind, apex, length, nodes, weights, nodes_per_panel)


def vline_contour(apex: float, length: float, nodes_per_panel: int = 24) -> RayContour:
    """Vertical segment apex - i length .. apex + i length, oriented upward."""
    t, w = _panel_rule(length, nodes_per_panel)
    nodes = np.concatenate([apex - 1j * t[::-1], apex + 1j * t])
    weights = 1j * np.concatenate([w[::-1], w])
    return RayContour("vline", apex, length, nodes, weights, nodes_per_panel)


@dataclass(frozen=True)
class FredholmResult:
    value: float
    imag_residual: float
    n_nodes: int
    node_doubling_delta: float


def _det_once(kernel_matrix, contour: RayContour) -> complex:
    mat = kernel_matrix(contour)
    scaled = (contour.weights / (2j * np.pi))[:, None] * mat
    n = len(contour.nodes)
    return np.linalg.det(np.eye(n) + scaled)


def fredholm_det(
    kernel_matrix,
    contour: RayContour,
    tol: float = 1e-8,
    max_doublings: int = 2,
    imag_tol: float = 1e-9,
) -> FredholmResult:
    """Nystrom value of det(Id + K) on an open contour, with node doubling.

    ``kernel_matrix(contour)`` must return the dense K(z_i, z_j) matrix on the
    contour's nodes (the kernel owns any inner integrals).  The value is
    accepted when one doubling moves it by at most ``tol``; otherwise
    NotConvergedError.
    """
    prev = _det_once(kernel_matrix, contour)
    fine = contour
    for _ in range(max_doublings):
        fine = fine.refined(2)
        cur = _det_once(kernel_matrix, fine)
        delta = abs(cur - prev)
        if delta <= tol:
            if abs(cur.imag) > imag_tol:
                raise NotConvergedError(f"imaginary residual {cur.imag:.3e} exceeds {imag_tol}")
            return FredholmResult(
                value=float(cur.real),
                imag_residual=abs(cur.imag),
                n_nodes=fine.n_nodes,
                node_doubling_delta=delta,
            )
        prev = cur
    raise NotConvergedError(f"determinant still moving after {max_doublings} doublings")
