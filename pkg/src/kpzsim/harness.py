"""Monte Carlo experiment driver for the three fluctuation regimes.

An experiment fixes a model (six-vertex or ASEP), a regime (tw / bbp /
gaussian), a slope, boundary densities with optional crossover drifts, and a
ladder of sizes.  For every size T it samples n independent trajectories,
measures the height/current at the characteristic point x(T) = floor(eta T)+1,
normalizes with the closed-form centering/scale constants, and reports the
Kolmogorov-Smirnov distance of the empirical law to the predicted limit
(Tracy-Widom, rank-m crossover, or finite-GUE).

Work is split into fixed-size trajectory blocks; every trajectory owns the
stream keyed (seed, "traj", T-index, global index), so results are byte-equal
for any worker count.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import __version__, asep, limits, rng, scaling, sixvertex

__all__ = [
    "ExperimentConfig",
    "TEntry",
    "ExperimentResult",
    "normalize",
    "run_experiment",
    "ks_distance",
    "variance_slope",
    "target_cdf",
    "persist",
    "load",
]

BLOCK_SIZE = 500

_MODELS = ("six_vertex", "asep")
_REGIMES = ("tw", "bbp", "gaussian")


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    regime: str
    b: float
    m: int = 1
    eta: float | None = None            # defaults to theta in the bbp regime
    delta1: float | None = None
    delta2: float | None = None
    rate_left: float | None = None
    rate_right: float | None = None
    d: float = 0.0                      # slope drift (bbp): eta_T = theta + d T^{-1/3}
    d_vec: tuple = ()                   # density drifts (bbp): b_{j,T} = b + d_j T^{-1/3}
    t_ladder: tuple = (64, 256, 1024)
    n_samples: int = 4000
    seed: int = 1

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}")
        if self.regime not in _REGIMES:
            raise ValueError(f"regime must be one of {_REGIMES}")
        if self.m < 0:
            raise ValueError("m must be >= 0")
        object.__setattr__(self, "t_ladder", tuple(int(t) for t in self.t_ladder))
        d_vec = tuple(float(v) for v in self.d_vec)
        if self.regime == "bbp" and not d_vec:
            d_vec = (0.0,) * self.m
        if d_vec and len(d_vec) != self.m:
            raise ValueError("d_vec must have one entry per boundary column")
        object.__setattr__(self, "d_vec", d_vec)
        self.constants()  # validate parameters and the slope domain eagerly

    # -- derived pieces ----------------------------------------------------

    def model_params(self):
        if self.model == "six_vertex":
            if self.delta1 is None or self.delta2 is None:
                raise ValueError("six_vertex experiments need delta1 and delta2")
            return scaling.SixVertexParams(self.delta1, self.delta2)
        if self.rate_left is None or self.rate_right is None:
            raise ValueError("asep experiments need rate_left and rate_right")
        return scaling.AsepParams(self.rate_left, self.rate_right)

    def constants(self) -> scaling.RegimeConstants:
        params = self.model_params()
        if self.model == "six_vertex":
            consts = scaling.derive_six_vertex_constants(params, self.b)
        else:
            consts = scaling.derive_asep_constants(params, self.b)
        # reject slopes outside the configured regime right away
        if self.regime != "bbp":
            if self.eta is None:
                raise ValueError("tw/gaussian regimes need an explicit eta")
            self._center_scale(consts, float(self.eta))
        return consts

    def slope(self, t: int, consts: scaling.RegimeConstants) -> float:
        if self.regime == "bbp":
            return consts.theta + self.d * t ** (-1.0 / 3.0)
        return float(self.eta)

    def densities_at(self, t: int) -> tuple:
        if self.regime == "bbp" and self.d_vec:
            out = []
            for dj in self.d_vec:
                bj = self.b + dj * t ** (-1.0 / 3.0)
                if not (0.0 < bj < 1.0):
                    raise ValueError(f"drifted density b_j(T={t}) = {bj} left (0,1)")
                out.append(bj)
            return tuple(out)
        return (self.b,) * self.m

    def _center_scale(self, consts: scaling.RegimeConstants, eta: float) -> tuple:
        if self.regime == "bbp":
            return scaling.crossover_center_scale(consts, eta)
        if self.model == "six_vertex":
            regime = "gaussian" if self.regime == "gaussian" else "tw"
            return scaling.six_vertex_scalings(consts, eta, regime)
        if self.regime == "gaussian":
            return scaling.asep_gaussian_scaling(eta, self.b)
        return scaling.asep_tw_scaling(eta, self.b)

    # -- (de)serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        data = dict(data)
        for key in ("t_ladder", "d_vec"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)


def normalize(stat, t: int, center: float, scale: float, regime: str):
    """Normalized fluctuation value(s): (center*T - stat) / (scale * T^rho)."""
    rho = 0.5 if regime == "gaussian" else 1.0 / 3.0
    return (center * t - np.asarray(stat, dtype=float)) / (scale * t**rho)


def ks_distance(samples, cdf) -> float:
    """sup_x |ECDF(x) - F(x)| evaluated at the sample points (both one-sided gaps)."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n == 0:
        raise ValueError("need at least one sample")
    fx = np.asarray(cdf(xs), dtype=float)
    hi = np.arange(1, n + 1) / n - fx
    lo = fx - np.arange(0, n) / n
    return float(max(hi.max(), lo.max()))


def variance_slope(ts, variances) -> float:
    """Least-squares slope of log variance against log T."""
    lt = np.log(np.asarray(ts, dtype=float))
    lv = np.log(np.asarray(variances, dtype=float))
    return float(np.polyfit(lt, lv, 1)[0])


# ---------------------------------------------------------------------------
# Limit-law targets (tabulated once, monotone interpolation in between)

_GRID_CACHE: dict = {}


def _target_grid(kind: str, key: tuple) -> tuple:
    if (kind, key) in _GRID_CACHE:
        return _GRID_CACHE[(kind, key)]
    s = np.concatenate(
        [np.arange(-9.0, -6.0, 0.5), np.arange(-6.0, 5.0, 0.1), np.arange(5.0, 8.5, 0.5)]
    )
    if kind == "tw":
        vals = _crossover_grid(s, ())
    elif kind == "bbp":
        vals = _crossover_grid(s, key)
    else:
        (m,) = key
        vals = np.array([limits.gm_moments(float(x), m) for x in s])
    vals = np.clip(vals, 0.0, 1.0)
    _GRID_CACHE[(kind, key)] = (s, vals)
    return s, vals


def _crossover_grid(s_values, shifts) -> np.ndarray:
    """Vectorized-over-s evaluation of the tw/bbp contour determinant.

    The s-independent kernel pieces are assembled once; each s costs one
    rank-one exponential dressing plus a determinant.  Resolution is fixed at
    the level where node doubling moves values by < 1e-10 (checked in tests).
    """
    shifts = tuple(shifts)
    c_max = max(shifts) if shifts else 0.0
    if c_max > limits.MAX_CONTOUR_SHIFT:
        return np.array([limits.bbp_cdf_realline(float(s), shifts) for s in s_values])
    from .fredholm import wedge_contour

    e_shift = max(0.0, c_max) + 1.0 if shifts else 0.0
    outer = wedge_contour("wedge3", -e_shift, limits.CUBIC_RAY_LENGTH, 32)
    inner = wedge_contour("wedge23", -e_shift - 1.0, limits.CUBIC_RAY_LENGTH, 32)
    w, v = outer.nodes, inner.nodes
    base = np.exp((w**3)[:, None] / 3.0 - (v**3)[None, :] / 3.0)
    for c in shifts:
        base *= (v[None, :] + c) / (w[:, None] + c)
    base = base * inner.weights[None, :] / (v[None, :] - w[:, None])
    right = 1.0 / (w[None, :] - v[:, None])
    wout = (outer.weights / (2j * np.pi))[:, None]
    eye = np.eye(len(w))
    out = np.empty(len(s_values))
    for i, s in enumerate(s_values):
        dress = base * np.exp(s * (v[None, :] - w[:, None]))
        kmat = (dress @ right) / (2j * np.pi)
        out[i] = np.linalg.det(eye + wout * kmat).real
    return out


def target_cdf(cfg: ExperimentConfig):
    """(callable, label) for the configured regime's limit law."""
    if cfg.regime == "tw":
        s, vals = _target_grid("tw", ())
        label = "F_TW"
    elif cfg.regime == "bbp":
        consts = cfg.constants()
        shifts = tuple(
            float(np.round(c, 12)) + 0.0 for c in scaling.bbp_shifts(consts, cfg.d, cfg.d_vec)
        )
        s, vals = _target_grid("bbp", shifts)
        label = f"F_BBP;c={list(shifts)}"
    else:
        if cfg.m == 1:
            return limits.normal_cdf, "G_1"
        s, vals = _target_grid("gm", (cfg.m,))
        label = f"G_{cfg.m}"
    interp = PchipInterpolator(s, vals, extrapolate=False)
    lo, hi = s[0], s[-1]

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = interp(np.clip(x, lo, hi))
        return np.where(x < lo, 0.0, np.where(x > hi, 1.0, out))

    return cdf, label


# ---------------------------------------------------------------------------
# Trajectory blocks


def _run_block(cfg_dict: dict, t_index: int, block: int) -> np.ndarray:
    """One block of raw statistics; pure function of (config, t_index, block)."""
    cfg = ExperimentConfig.from_dict(cfg_dict)
    t = cfg.t_ladder[t_index]
    n_total = cfg.n_samples
    start = block * BLOCK_SIZE
    size = min(BLOCK_SIZE, n_total - start)
    params = cfg.model_params()
    consts = cfg.constants()
    eta = cfg.slope(t, consts)
    boundary = scaling.BernoulliBoundary(cfg.densities_at(t))
    bits_rng = rng.stream(cfg.seed, "bits", t_index, block)

    def stream_fn(i: int):
        return rng.stream(cfg.seed, "traj", t_index, start + i)

    if cfg.model == "six_vertex":
        x = int(np.floor(eta * t)) + 1
        bits = sixvertex.sample_boundary_batch(boundary, params.q, t, size, bits_rng)
        return sixvertex.heights_batch(params, bits, x, stream_fn)
    x = int(np.floor(eta * t))
    n_bits = asep.CutoffPolicy().n_boundary_bits(params, t, x)
    bits = sixvertex.sample_boundary_batch(boundary, params.q, n_bits, size, bits_rng)
    return asep.currents_batch(params, bits, float(t), x, stream_fn)


@dataclass
class TEntry:
    t: int
    x: int
    eta: float
    center: float
    scale: float
    raw: np.ndarray
    normalized: np.ndarray
    ks: float

    @property
    def mean(self) -> float:
        return float(self.normalized.mean())

    @property
    def variance_raw(self) -> float:
        return float(self.raw.var(ddof=1)) if len(self.raw) > 1 else 0.0


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    target_label: str
    entries: list
    runtime_seconds: float
    schema_version: str = __version__

    def ks_values(self) -> list:
        return [e.ks for e in self.entries]


def run_experiment(cfg: ExperimentConfig, threads: int = 1, target=None) -> ExperimentResult:
    """Sample every ladder size, normalize, and score against the limit law.

    ``threads`` > 1 distributes fixed-size trajectory blocks over a process
    pool; per-trajectory streams make the result byte-identical regardless.
    """
    t_start = time.perf_counter()
    if target is None:
        target, label = target_cdf(cfg)
    else:
        target, label = target
    consts = cfg.constants()
    cfg_dict = cfg.to_dict()
    n_blocks = -(-cfg.n_samples // BLOCK_SIZE)
    units = [(ti, blk) for ti in range(len(cfg.t_ladder)) for blk in range(n_blocks)]
    results: dict = {}
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futs = {unit: pool.submit(_run_block, cfg_dict, *unit) for unit in units}
            for unit, fut in futs.items():
                results[unit] = fut.result()
    else:
        for unit in units:
            results[unit] = _run_block(cfg_dict, *unit)

    entries = []
    for ti, t in enumerate(cfg.t_ladder):
        raw = np.concatenate([results[(ti, blk)] for blk in range(n_blocks)])
        eta = cfg.slope(t, consts)
        center, scale = cfg._center_scale(consts, eta)
        norm = normalize(raw, t, center, scale, cfg.regime)
        x = int(np.floor(eta * t)) + (1 if cfg.model == "six_vertex" else 0)
        entries.append(
            TEntry(
                t=t, x=x, eta=float(eta), center=float(center), scale=float(scale),
                raw=raw, normalized=norm, ks=ks_distance(norm, target),
            )
        )
    return ExperimentResult(
        config=cfg,
        target_label=label,
        entries=entries,
        runtime_seconds=time.perf_counter() - t_start,
    )


# ---------------------------------------------------------------------------
# Persistence: one JSON document plus a flat CSV of raw/normalized samples


def persist(result: ExperimentResult, path) -> tuple:
    """Write ``<path>.json`` and ``<path>.csv``; returns both paths."""
    import pathlib

    base = pathlib.Path(path)
    json_path = base.with_suffix(".json")
    csv_path = base.with_suffix(".csv")
    # runtime stays on the in-memory result only: the persisted document is a
    # pure function of (config, seed), byte-identical across reruns and workers
    doc = {
        "schema_version": result.schema_version,
        "config": result.config.to_dict(),
        "target": result.target_label,
        "entries": [
            {
                "t": e.t,
                "x": e.x,
                "eta": e.eta,
                "center": e.center,
                "scale": e.scale,
                "n_samples": len(e.raw),
                "ks": e.ks,
                "mean_normalized": e.mean,
                "variance_raw": e.variance_raw,
                "ecdf_grid": _ecdf_grid(e.normalized),
            }
            for e in result.entries
        ],
    }
    json_path.write_text(json.dumps(doc, indent=1, sort_keys=True))
    lines = ["t,index,raw,normalized"]
    for e in result.entries:
        for i, (r, s) in enumerate(zip(e.raw, e.normalized)):
            lines.append(f"{e.t},{i},{int(r)},{float(s)!r}")
    csv_path.write_text("\n".join(lines) + "\n")
    return json_path, csv_path


def _ecdf_grid(normalized: np.ndarray, n_points: int = 256) -> dict:
    xs = np.sort(normalized)
    idx = np.unique(np.linspace(0, len(xs) - 1, min(n_points, len(xs))).astype(int))
    return {
        "s": [float(v) for v in xs[idx]],
        "p": [float(p) for p in (idx + 1) / len(xs)],
    }


def load(path):
    """Read back a persisted experiment: (document dict, samples per t)."""
    import pathlib

    base = pathlib.Path(path)
    doc = json.loads(base.with_suffix(".json").read_text())
    samples: dict = {}
    for line in base.with_suffix(".csv").read_text().splitlines()[1:]:
        t_str, _idx, raw, norm = line.split(",")
        samples.setdefault(int(t_str), []).append((int(raw), float(norm)))
    return doc, samples
