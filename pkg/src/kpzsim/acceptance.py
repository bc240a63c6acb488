"""Acceptance suite: one callable per criterion, shared by pytest and the CLI.

Each criterion function returns a CriterionResult with a pass flag and
human-readable detail lines; `run_criteria` prints one PASS/FAIL line per
criterion.  Tolerances are pinned here as module constants.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import asep, harness, limits, qmoment, rng, sixvertex
from .fredholm import fredholm_det, wedge_contour
from .scaling import AsepParams, BernoulliBoundary, SixVertexParams

__all__ = ["CriterionResult", "CRITERIA", "run_criteria"]

# -- pinned gates -----------------------------------------------------------
ORACLE_TOL = 1e-8               # criterion 1: contour vs enumeration
TW_CROSS_TOL = 1e-6             # criterion 3: contour vs Airy oracle
BBP_EMPTY_TOL = 1e-8            # criterion 3: empty-shift reduction
G1_TOL = 1e-8                   # criterion 3: G_1 vs normal CDF
G_ROUTES_TOL = 1e-5             # criterion 3: quadrature vs determinant
KS_TW_GATE = 0.08               # criterion 4a at T=1024
KS_GAUSS_GATE = 0.05            # criterion 4b at T=1024
KS_BBP_GATE = 0.10              # criterion 4c at T=1024
SLOPE_TOL = 0.15                # criterion 5 log-log variance slopes
KS_DEGEN_GATE = 0.05            # criterion 6 at epsilon = 0.02
NODE_DOUBLING_GATE = 1e-8       # criterion 7

SIX_VERTEX = dict(delta1=0.25, delta2=0.5)
ASEP_RATES = dict(rate_left=0.5, rate_right=1.5)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    elapsed: float
    details: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}  ({self.elapsed:.1f}s)"


def _timed(fn):
    def wrapper(**kwargs) -> CriterionResult:
        t0 = time.perf_counter()
        name, passed, details = fn(**kwargs)
        return CriterionResult(name, passed, time.perf_counter() - t0, details)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _boundaries():
    cases = [("step (m=0)", BernoulliBoundary.step())]
    for b in (0.3, 0.7):
        cases.append((f"m=1 b={b}", BernoulliBoundary.uniform(1, b)))
        cases.append((f"m=2 b={b}", BernoulliBoundary.uniform(2, b)))
    return cases


@_timed
def criterion_1():
    """q-moment contour integrals match exhaustive enumeration to 1e-8."""
    params = SixVertexParams(**SIX_VERTEX)
    worst = 0.0
    details = []
    n_checked = 0
    for _label, boundary in _boundaries():
        for t in (1, 2, 3):
            for x in (1, 2, 3, 4):
                dist = qmoment.brute_force_height_dist(t, x, params, boundary)
                for k in (1, 2):
                    exact = float(np.sum(dist * params.q ** (k * np.arange(t + 1))))
                    res = qmoment.qmoment(k, x, t, params, boundary)
                    worst = max(worst, abs(res.value - exact))
                    n_checked += 1
    details.append(f"{n_checked} (t,x,boundary,k) cells, max |contour - oracle| = {worst:.2e}")
    return "1: exact-oracle agreement", worst < ORACLE_TOL, details


@_timed
def criterion_2(n_traj: int = 100_000):
    """q-Laplace series (3 moments + tail bound) brackets the MC expectation."""
    params = SixVertexParams(**SIX_VERTEX)
    boundary = BernoulliBoundary.uniform(1, 0.5)
    q = params.q
    t, x = 3, 2
    moments = [1.0] + [
        qmoment.qmoment(k, x, t, params, boundary).value for k in (1, 2, 3)
    ]
    bits = sixvertex.sample_boundary_batch(
        boundary, q, t, n_traj, rng.stream(20_2, "laplace-bits")
    )
    heights = sixvertex.heights_batch(
        params, bits, x, lambda i: rng.stream(20_2, "laplace", i)
    )
    details = []
    ok = True
    for p in (1, 2):
        zeta = -(q**p)
        series, tail = qmoment.qlaplace_series(zeta, moments, q)
        gvals = np.array(
            [(1.0 / qmoment.q_pochhammer(zeta * q**h, q)).real for h in range(t + 1)]
        )
        samples = gvals[heights]
        mc = samples.mean()
        sigma4 = 4.0 * samples.std(ddof=1) / np.sqrt(n_traj)
        gap = abs(series.real - mc)
        passed = gap <= sigma4 + tail
        ok &= passed
        details.append(
            f"p={p}: series {series.real:.6f} (tail<={tail:.1e}), "
            f"MC {mc:.6f} +- {sigma4:.1e} (4 sigma), gap {gap:.1e}"
        )
    return "2: q-Laplace series vs MC", ok, details


@_timed
def criterion_3(n_mc: int = 1_000_000):
    """Limit-law cross-validation: routes and oracles agree."""
    details = []
    ok = True

    diffs = []
    for s in range(-6, 5, 2):
        diffs.append(abs(limits.tracy_widom_cdf(float(s)) - limits.tracy_widom_cdf_airy(float(s))))
    d = max(diffs)
    ok &= d < TW_CROSS_TOL
    details.append(f"TW contour vs Airy oracle: max diff {d:.2e} on s in -6..4")

    d = max(
        abs(limits.bbp_cdf(float(s), ()) - limits.tracy_widom_cdf(float(s)))
        for s in (-4.0, -1.0, 1.0)
    )
    ok &= d < BBP_EMPTY_TOL
    details.append(f"BBP with empty shifts vs TW: max diff {d:.2e}")

    d = max(
        max(
            abs(limits.gm_density_tensor(s, 1) - limits.normal_cdf(s)),
            abs(limits.gm_determinant(s, 1).value - limits.normal_cdf(s)),
        )
        for s in (-1.5, 0.0, 1.0)
    )
    ok &= d < G1_TOL
    details.append(f"G_1 (both routes) vs normal CDF: max diff {d:.2e}")

    worst = 0.0
    for m in (2, 3):
        for s in np.arange(-4.0, m + 3.01, 1.0):
            r = limits.gue_finite_cdf(float(s), m)
            worst = max(worst, abs(r.quadrature - r.determinant.value))
    ok &= worst < G_ROUTES_TOL
    details.append(f"G_2/G_3 quadrature vs determinant: max diff {worst:.2e}")

    eigs = limits.gue_max_eig_mc(2, n_mc, rng.stream(303, "gue-mc"))
    bad = 0.0
    for s in (-1.0, 0.0, 1.0, 2.0):
        p = limits.gue_finite_cdf(s, 2).quadrature
        ecdf = np.searchsorted(eigs, s, side="right") / n_mc
        z = abs(ecdf - p) / np.sqrt(p * (1 - p) / n_mc)
        bad = max(bad, z)
    ok &= bad < 4.0
    details.append(f"G_2 vs GUE MC ({n_mc} samples): worst z-score {bad:.2f} (< 4)")

    return "3: limit-law cross-validation", ok, details


_EXPERIMENT_CACHE: dict = {}


def run_reference_experiment(cfg: harness.ExperimentConfig, threads: int = 1):
    """Memoized experiment runner (results are deterministic per config)."""
    if cfg not in _EXPERIMENT_CACHE:
        _EXPERIMENT_CACHE[cfg] = harness.run_experiment(cfg, threads=threads)
    return _EXPERIMENT_CACHE[cfg]


def six_vertex_regime_config(regime: str, t_ladder=(64, 256, 1024), n_samples=4000,
                             seed=41) -> harness.ExperimentConfig:
    """The criterion-4 reference configurations."""
    common = dict(model="six_vertex", b=0.5, t_ladder=t_ladder,
                  n_samples=n_samples, seed=seed, **SIX_VERTEX)
    if regime == "tw":
        return harness.ExperimentConfig(regime="tw", m=1, eta=1.2, **common)
    if regime == "gaussian":
        return harness.ExperimentConfig(regime="gaussian", m=1, eta=0.95, **common)
    return harness.ExperimentConfig(regime="bbp", m=2, d=0.0, d_vec=(0.0, 0.0), **common)


def asep_regime_config(regime: str, t_ladder=(16, 64, 256), n_samples=12_000,
                       seed=43) -> harness.ExperimentConfig:
    """The criterion-5 reference configurations (rate difference 1).

    Slopes sit mid-regime for tw and deep inside the Gaussian region
    (eta = -0.45): at t <= 256 the crossover window |eta - theta| ~ t^{-1/3}
    covers much of the slope axis, so slopes closer to theta = 0 measure the
    crossover's variance growth rather than the asymptotic exponent.  The
    sample count keeps the slope estimator's noise well under the gate.
    """
    common = dict(model="asep", b=0.5, t_ladder=t_ladder,
                  n_samples=n_samples, seed=seed, **ASEP_RATES)
    if regime == "tw":
        return harness.ExperimentConfig(regime="tw", m=1, eta=0.5, **common)
    if regime == "gaussian":
        return harness.ExperimentConfig(regime="gaussian", m=1, eta=-0.45, **common)
    return harness.ExperimentConfig(regime="bbp", m=2, d=0.0, d_vec=(0.0, 0.0),
                                    **{**common, "n_samples": 4000})


@_timed
def criterion_4(threads: int = 1):
    """Six-vertex phase transition: KS gates and monotone trend.

    The tw (0.08) and gaussian (0.05) gates at T = 1024 are not attainable by
    a faithful sampler: finite-size corrections are O(T^{-1/3}) with order-one
    coefficients, and the gaussian slope 0.95 still sits inside the crossover
    window (|eta - theta| T^{1/3} ~ 0.9) where the empirical law provably
    matches the drifted crossover law instead (see the README for the
    analysis).  The criterion is asserted exactly as stated regardless.
    """
    details = []
    ok = True
    gates = {"tw": KS_TW_GATE, "gaussian": KS_GAUSS_GATE, "bbp": KS_BBP_GATE}
    for regime in ("tw", "gaussian", "bbp"):
        res = run_reference_experiment(six_vertex_regime_config(regime), threads=threads)
        ks = res.ks_values()
        final_ok = ks[-1] < gates[regime]
        trend_ok = all(a > b for a, b in zip(ks, ks[1:]))
        ok &= final_ok and (trend_ok if regime == "tw" else True)
        details.append(
            f"{regime}: KS along T {[round(v, 4) for v in ks]} vs {res.target_label} "
            f"(gate {gates[regime]}, final {'ok' if final_ok else 'EXCEEDED'}, "
            f"trend {'decreasing' if trend_ok else 'not monotone'})"
        )
    return "4: six-vertex phase transition", ok, details


@_timed
def criterion_5(threads: int = 1):
    """ASEP three-regime structure: variance exponents 2/3 and 1."""
    details = []
    ok = True
    for regime, target_slope in (("tw", 2.0 / 3.0), ("gaussian", 1.0)):
        res = run_reference_experiment(asep_regime_config(regime), threads=threads)
        slope = harness.variance_slope(
            [e.t for e in res.entries], [e.variance_raw for e in res.entries]
        )
        ok &= abs(slope - target_slope) < SLOPE_TOL
        details.append(
            f"{regime}: Var(J_t) log-log slope {slope:.3f} "
            f"(target {target_slope:.3f} +- {SLOPE_TOL}); "
            f"KS {[round(v, 4) for v in res.ks_values()]}"
        )
    res_b = run_reference_experiment(asep_regime_config("bbp"), threads=threads)
    details.append(f"bbp: KS {[round(v, 4) for v in res_b.ks_values()]} vs {res_b.target_label}")
    return "5: ASEP three-regime structure", ok, details


def _ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    values = np.union1d(a, b)
    fa = np.searchsorted(np.sort(a), values, side="right") / len(a)
    fb = np.searchsorted(np.sort(b), values, side="right") / len(b)
    return float(np.abs(fa - fb).max())


@_timed
def criterion_6(n_traj: int = 10_000):
    """Six-vertex -> ASEP degeneration: two-sample KS shrinks with epsilon."""
    params = AsepParams(**ASEP_RATES)
    boundary = BernoulliBoundary.uniform(1, 0.5)
    t, x = 4.0, 0
    n_bits = asep.CutoffPolicy().n_boundary_bits(params, t, x)
    bits = sixvertex.sample_boundary_batch(
        boundary, params.q, n_bits, n_traj, rng.stream(606, "degen-asep-bits")
    )
    direct = asep.currents_batch(
        params, bits, t, x, lambda i: rng.stream(606, "degen-asep", i)
    )
    ks = {}
    for eps in (0.1, 0.02):
        heights = asep.degenerate_heights_batch(
            params, eps, t, x, boundary, n_traj,
            lambda i: rng.stream(606, "degen-sv", int(eps * 1000), i),
            rng.stream(606, "degen-sv-bits", int(eps * 1000)),
        )
        ks[eps] = _ks_two_sample(direct, heights)
    passed = ks[0.02] < ks[0.1] and ks[0.02] < KS_DEGEN_GATE
    details = [
        f"two-sample KS: eps=0.1 -> {ks[0.1]:.4f}, eps=0.02 -> {ks[0.02]:.4f} "
        f"(gate {KS_DEGEN_GATE}, decreasing)"
    ]
    return "6: degeneration to ASEP", passed, details


@_timed
def criterion_7():
    """Engine properties: node-doubling, monotone CDFs, thread determinism."""
    details = []
    ok = True

    worst = 0.0
    for s in range(-6, 5, 2):
        contour = wedge_contour("wedge3", 0.0, limits.CUBIC_RAY_LENGTH, 24)
        res = fredholm_det(limits._crossover_kernel(float(s), (), 0.0), contour,
                           tol=1e-7, max_doublings=1)
        worst = max(worst, res.node_doubling_delta)
    ok &= worst < NODE_DOUBLING_GATE
    details.append(f"F_TW node-doubling delta (96 -> 192 nodes/ray): max {worst:.2e}")

    grid = np.arange(-6.0, 4.01, 0.25)
    for label, fn in (
        ("F_TW", lambda s: limits.tracy_widom_cdf(s)),
        ("F_BBP;(0,0)", lambda s: limits.bbp_cdf(s, (0.0, 0.0))),
        ("G_2", lambda s: limits.gue_finite_cdf(s, 2).quadrature),
    ):
        vals = np.array([fn(float(s)) for s in grid])
        mono = bool(np.all(np.diff(vals) >= -1e-12))
        in_range = bool(np.all((vals >= 0.0) & (vals <= 1.0)))
        ok &= mono and in_range
        details.append(f"{label}: monotone={mono}, within [0,1]={in_range}")

    cfg = six_vertex_regime_config("tw", t_ladder=(16, 32), n_samples=600, seed=5)
    import tempfile, pathlib

    with tempfile.TemporaryDirectory() as td:
        td = pathlib.Path(td)
        p1 = harness.persist(harness.run_experiment(cfg, threads=1), td / "t1")
        p2 = harness.persist(harness.run_experiment(cfg, threads=2), td / "t2")
        same = all(
            a.read_bytes() == b.read_bytes() for a, b in zip(p1, p2)
        )
    ok &= same
    details.append(f"threads=1 vs threads=2 byte-identical output: {same}")

    return "7: engine properties", ok, details


CRITERIA = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "5": criterion_5,
    "6": criterion_6,
    "7": criterion_7,
}


def run_criteria(names=None, threads: int = 1, out=print) -> list:
    """Run the selected criteria (default: all) and print one line each."""
    chosen = list(CRITERIA) if not names else [str(n) for n in names]
    results = []
    for name in chosen:
        fn = CRITERIA[name]
        kwargs = {"threads": threads} if name in ("4", "5") else {}
        res = fn(**kwargs)
        results.append(res)
        out(res.line())
        for d in res.details:
            out(f"    {d}")
    return results
