"""Model parameters and closed-form centering/scale constants.

Both models share the phase structure: a characteristic slope theta separates
a Gaussian region (T^{1/2} fluctuations) from a Tracy-Widom region (T^{1/3}),
with the rank-m spiked crossover exactly on the line.  This module holds the
parameter bundles, derives the constants (q, kappa, Lambda, theta, chi), and
evaluates the per-regime centering/scale pairs and the crossover shifts c_j.

All functions are pure and operate on immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SixVertexParams",
    "AsepParams",
    "BernoulliBoundary",
    "RegimeConstants",
    "derive_six_vertex_constants",
    "derive_asep_constants",
    "asep_tw_scaling",
    "asep_gaussian_scaling",
    "six_vertex_scalings",
    "crossover_center_scale",
    "bbp_shifts",
]


@dataclass(frozen=True)
class SixVertexParams:
    """Left/right turn probabilities with 0 < delta1 < delta2 < 1."""

    delta1: float
    delta2: float

    def __post_init__(self):
        if not (0.0 < self.delta1 < 1.0 and 0.0 < self.delta2 < 1.0):
            raise ValueError(f"delta1, delta2 must lie in (0,1), got {self.delta1}, {self.delta2}")
        if not self.delta1 < self.delta2:
            raise ValueError(f"delta1 must be < delta2, got {self.delta1} >= {self.delta2}")

    @property
    def q(self) -> float:
        return self.delta1 / self.delta2

    @property
    def kappa(self) -> float:
        return (1.0 - self.delta1) / (1.0 - self.delta2)


@dataclass(frozen=True)
class AsepParams:
    """Exponential jump rates, right-biased: rate_right > rate_left >= 0.

    The fluctuation constants below are asserted for the normalization
    rate_right - rate_left = 1 only; other normalizations are accepted but
    not rescaled automatically.
    """

    rate_left: float
    rate_right: float

    def __post_init__(self):
        if not (self.rate_right > self.rate_left >= 0.0):
            raise ValueError(
                f"need rate_right > rate_left >= 0, got L={self.rate_left}, R={self.rate_right}"
            )

    @property
    def q(self) -> float:
        return self.rate_left / self.rate_right


@dataclass(frozen=True)
class BernoulliBoundary:
    """Densities (b_1..b_m) of the m-column boundary chain, each in (0, 1].

    b_j = 1 is legal for sampling (the carried arrow never drops, i.e. step
    data); it is rejected wherever the finite beta_j = b_j/(1-b_j) is needed.
    m = 0 denotes plain step initial data.
    """

    densities: tuple

    def __post_init__(self):
        dens = tuple(float(b) for b in self.densities)
        object.__setattr__(self, "densities", dens)
        for b in dens:
            if not (0.0 < b <= 1.0):
                raise ValueError(f"each density must lie in (0,1], got {b}")

    @property
    def m(self) -> int:
        return len(self.densities)

    @property
    def betas(self) -> np.ndarray:
        if any(b == 1.0 for b in self.densities):
            raise ValueError("beta_j = b_j/(1-b_j) is infinite for b_j = 1")
        b = np.asarray(self.densities)
        return b / (1.0 - b)

    @classmethod
    def step(cls) -> "BernoulliBoundary":
        return cls(())

    @classmethod
    def uniform(cls, m: int, b: float) -> "BernoulliBoundary":
        return cls((b,) * m)


@dataclass(frozen=True)
class RegimeConstants:
    """Derived constants; kappa and lam are None for the ASEP."""

    b: float
    chi: float
    theta: float
    q: float
    kappa: float | None = None
    lam: float | None = None

    @property
    def is_six_vertex(self) -> bool:
        return self.kappa is not None


def _check_density(b: float) -> None:
    if not (0.0 < b < 1.0):
        raise ValueError(f"density b must lie in (0,1), got {b}")


def derive_six_vertex_constants(p: SixVertexParams, b: float) -> RegimeConstants:
    """q, kappa, Lambda, theta = Lambda^2/kappa and chi = b(1-b)."""
    _check_density(b)
    kappa = p.kappa
    lam = b + kappa * (1.0 - b)
    return RegimeConstants(
        b=b, chi=b * (1.0 - b), theta=lam * lam / kappa, q=p.q, kappa=kappa, lam=lam
    )


def derive_asep_constants(p: AsepParams, b: float) -> RegimeConstants:
    """theta = 1 - 2b and chi = b(1-b)."""
    _check_density(b)
    return RegimeConstants(b=b, chi=b * (1.0 - b), theta=1.0 - 2.0 * b, q=p.q)


def asep_tw_scaling(eta: float, b: float) -> tuple:
    """Centering/scale (m_eta, f_eta) on the Tracy-Widom side, eta in (theta, 1)."""
    _check_density(b)
    theta = 1.0 - 2.0 * b
    if not (theta < eta < 1.0):
        raise ValueError(f"eta must lie in the open interval ({theta}, 1), got {eta}")
    m_eta = ((1.0 - eta) / 2.0) ** 2
    f_eta = ((1.0 - eta * eta) / 4.0) ** (2.0 / 3.0)
    return m_eta, f_eta


def asep_gaussian_scaling(eta: float, b: float) -> tuple:
    """Centering/scale (m'_eta, f'_eta) on the Gaussian side, eta in (-b, theta)."""
    _check_density(b)
    theta = 1.0 - 2.0 * b
    chi = b * (1.0 - b)
    if not (-b < eta < theta):
        raise ValueError(f"eta must lie in the open interval ({-b}, {theta}), got {eta}")
    return chi - b * eta, math.sqrt(chi) * math.sqrt(theta - eta)


def six_vertex_scalings(consts: RegimeConstants, eta: float, regime: str) -> tuple:
    """Centering/scale pair for the six-vertex model.

    regime "tw" requires eta in (theta, kappa); regime "gaussian" requires
    eta in (theta/Lambda, theta).  Both intervals are open.
    """
    if not consts.is_six_vertex:
        raise ValueError("six_vertex_scalings needs six-vertex constants")
    kappa, lam, theta, b, chi = consts.kappa, consts.lam, consts.theta, consts.b, consts.chi
    if regime == "tw":
        if not (theta < eta < kappa):
            raise ValueError(f"TW regime needs eta in ({theta}, {kappa}), got {eta}")
        m_eta = (math.sqrt(kappa) - math.sqrt(eta)) ** 2 / (kappa - 1.0)
        ke = math.sqrt(kappa * eta)
        f_eta = (ke - 1.0) ** (2.0 / 3.0) * (kappa - ke) ** (2.0 / 3.0) / (
            (kappa - 1.0) * kappa ** (1.0 / 6.0) * eta ** (1.0 / 6.0)
        )
        return m_eta, f_eta
    if regime == "gaussian":
        if not (theta / lam < eta < theta):
            raise ValueError(f"Gaussian regime needs eta in ({theta / lam}, {theta}), got {eta}")
        return b - b * eta / lam, math.sqrt(chi) * math.sqrt(1.0 - eta / theta)
    raise ValueError(f"unknown regime {regime!r}")


def _tw_scale_at_theta(consts: RegimeConstants) -> float:
    """f evaluated exactly on the characteristic line (where the crossover sits)."""
    if consts.is_six_vertex:
        kappa, lam, theta = consts.kappa, consts.lam, consts.theta
        return (lam - 1.0) ** (2.0 / 3.0) * (kappa - lam) ** (2.0 / 3.0) / (
            (kappa - 1.0) * kappa ** (1.0 / 6.0) * theta ** (1.0 / 6.0)
        )
    return ((1.0 - consts.theta**2) / 4.0) ** (2.0 / 3.0)


def crossover_center_scale(consts: RegimeConstants, eta: float) -> tuple:
    """Centering/scale for slopes on or T^{-1/3}-close to the characteristic line.

    The center uses the Tracy-Widom-side formula evaluated at eta (well defined
    across theta, unlike the open-interval constructors); the scale is pinned
    at theta, matching the crossover normalization.
    """
    if consts.is_six_vertex:
        if not 0.0 < eta < consts.kappa:
            raise ValueError(f"eta must lie in (0, kappa), got {eta}")
        center = (math.sqrt(consts.kappa) - math.sqrt(eta)) ** 2 / (consts.kappa - 1.0)
    else:
        center = ((1.0 - eta) / 2.0) ** 2
    return center, _tw_scale_at_theta(consts)


def bbp_shifts(consts: RegimeConstants, d: float, d_vec) -> np.ndarray:
    """Crossover shift vector c for boundary drifts d_j and slope drift d.

    ASEP: c_j = -f_theta (2 d_j + d) / (2 chi).
    Six-vertex: c_j = -f_theta d_j / chi - kappa f_theta d / (2 (kappa-1) chi Lambda).
    """
    d_vec = np.atleast_1d(np.asarray(d_vec, dtype=float))
    f = _tw_scale_at_theta(consts)
    chi = consts.chi
    if consts.is_six_vertex:
        kappa, lam = consts.kappa, consts.lam
        return -f * d_vec / chi - kappa * f * d / (2.0 * (kappa - 1.0) * chi * lam)
    return -f * (2.0 * d_vec + d) / (2.0 * chi)
