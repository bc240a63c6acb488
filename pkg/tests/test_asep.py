import itertools

import numpy as np
import pytest
from scipy.linalg import expm

from kpzsim import asep, rng, sixvertex as sv
from kpzsim.errors import CutoffViolatedError
from kpzsim.scaling import AsepParams, BernoulliBoundary

PARAMS = AsepParams(0.5, 1.5)


def test_init_from_boundary():
    state = asep.init_from_boundary(np.array([1, 1, 1], dtype=np.uint8))
    assert list(state.positions) == [-2, -1, 0]
    assert state.left_cutoff == -2
    empty = asep.init_from_boundary(np.array([0, 0], dtype=np.uint8))
    assert len(empty.positions) == 0
    holes = asep.init_from_boundary(np.array([1, 0, 1], dtype=np.uint8))
    assert list(holes.positions) == [-2, 0]


def test_empty_state_unchanged():
    state = asep.init_from_boundary(np.zeros(4, dtype=np.uint8))
    out = asep.simulate(state, PARAMS, 5.0, rng.stream(1, "e"))
    assert len(out.positions) == 0
    assert out.time == 5.0


def test_exclusion_preserved():
    g = rng.stream(2, "x")
    bits = sv.sample_boundary(BernoulliBoundary((0.8,)), PARAMS.q, 40, g)
    state = asep.init_from_boundary(bits)
    out = asep.simulate(state, PARAMS, 3.0, g)
    assert np.all(np.diff(out.positions) >= 1)
    assert len(out.positions) == len(state.positions)


def test_free_particle_poisson():
    # L = 0: a lone particle is a Poisson counter of rate R
    p = AsepParams(0.0, 1.0)
    n, t = 100_000, 4.0
    g = rng.stream(3, "p")
    final = np.empty(n)
    for i in range(n):
        st = asep.AsepState(np.array([0], dtype=np.int64), left_cutoff=0)
        final[i] = asep.simulate(st, p, t, g).positions[0]
    assert abs(final.mean() - t) < 4 * np.sqrt(t / n)
    assert abs(final.var() - t) < 4 * t * np.sqrt(2.0 / n)
    # exact law comparison against the Poisson pmf
    from scipy import stats

    ks = np.arange(0, 20)
    pmf = stats.poisson.pmf(ks, t)
    emp = np.array([(final == k).mean() for k in ks])
    assert np.all(np.abs(emp - pmf) < 4 * np.sqrt(pmf * (1 - pmf) / n) + 2 / n)


def test_free_particle_moments_general_rates():
    # mean (R-L)t, variance (R+L)t for an unblocked particle
    n, t = 100_000, 2.0
    g = rng.stream(4, "m")
    final = np.empty(n)
    for i in range(n):
        st = asep.AsepState(np.array([0], dtype=np.int64), left_cutoff=-10**6)
        final[i] = asep.simulate(st, PARAMS, t, g).positions[0]
    mean, var = (PARAMS.rate_right - PARAMS.rate_left) * t, (PARAMS.rate_right + PARAMS.rate_left) * t
    assert abs(final.mean() - mean) < 4 * np.sqrt(var / n)
    assert abs(final.var() - var) < 4 * var * np.sqrt(2.0 / n) * 1.5


def _two_particle_generator(sites):
    """Exact CTMC generator for two excluded particles on a finite site set."""
    states = [s for s in itertools.combinations(sites, 2)]
    index = {s: i for i, s in enumerate(states)}
    gen = np.zeros((len(states), len(states)))
    lo, hi = min(sites), max(sites)
    for (a, b), i in index.items():
        moves = []
        if a + 1 != b and a + 1 <= hi:
            moves.append(((a + 1, b), PARAMS.rate_right))
        if a - 1 >= lo:
            moves.append(((a - 1, b), PARAMS.rate_left))
        if b + 1 <= hi:
            moves.append(((a, b + 1), PARAMS.rate_right))
        if b - 1 != a and b - 1 >= lo:
            moves.append(((a, b - 1), PARAMS.rate_left))
        for dst, rate in moves:
            j = index[tuple(sorted(dst))]
            gen[i, j] += rate
            gen[i, i] -= rate
    return states, index, gen


def test_two_adjacent_particles_match_matrix_exponential():
    # truncated two-particle configuration space; tail mass < 1e-8 at t=0.4
    t = 0.4
    sites = range(-7, 10)
    states, index, gen = _two_particle_generator(sites)
    probs = expm(gen * t)[index[(0, 1)]]
    n = 120_000
    g = rng.stream(5, "two")
    counts = np.zeros(len(states))
    for i in range(n):
        st = asep.AsepState(np.array([0, 1], dtype=np.int64), left_cutoff=-100)
        out = asep.simulate(st, PARAMS, t, g)
        counts[index[tuple(out.positions)]] += 1
    emp = counts / n
    assert np.all(np.abs(emp - probs) < 4 * np.sqrt(probs * (1 - probs) / n) + 2 / n)


def test_current_counting_and_cutoff():
    state = asep.AsepState(np.array([-1, 2, 5], dtype=np.int64), left_cutoff=-50, time=1.0)
    assert asep.current_J(state, 1) == 2
    assert asep.current_J(state, -2) == 3
    assert asep.current_J(state, 10) == 0
    policy = asep.CutoffPolicy(1e-8)
    with pytest.raises(CutoffViolatedError):
        asep.current_J(state, -45, PARAMS, policy)


def test_step_data_t0_currents():
    state = asep.init_from_boundary(np.ones(10, dtype=np.uint8))
    assert asep.current_J(state, 0) == 0
    assert asep.current_J(state, -3) == 3


def test_cutoff_policy_window():
    policy = asep.CutoffPolicy(1e-8)
    d = policy.influence_radius(PARAMS, 16.0)
    from scipy import stats

    lam = 2.0 * 16.0
    assert stats.poisson.sf(d - 1, lam) < 1e-8
    assert stats.poisson.sf(d - 2, lam) >= 1e-8
    assert policy.n_boundary_bits(PARAMS, 16.0, 0.0) == max(1, 2 * d)
    assert policy.n_boundary_bits(PARAMS, 16.0, -10.0) == max(1, 2 * d + 10)


def test_batch_matches_reference_in_law():
    boundary = BernoulliBoundary((0.5,))
    t, x, n = 4.0, 0, 30_000
    n_bits = asep.CutoffPolicy().n_boundary_bits(PARAMS, t, x)
    bits = sv.sample_boundary_batch(boundary, PARAMS.q, n_bits, n, rng.stream(6, "bb"))
    batch = asep.currents_batch(PARAMS, bits, t, x, lambda i: rng.stream(6, "bj", i))
    g = rng.stream(6, "ref")
    ref = np.empty(n // 3, dtype=np.int64)
    for i in range(len(ref)):
        st = asep.init_from_boundary(bits[i])
        ref[i] = asep.current_J(asep.simulate(st, PARAMS, t, g), x)
    for k in range(0, 8):
        pa = (batch == k).mean()
        pb = (ref == k).mean()
        assert abs(pa - pb) < 4 * np.sqrt(pb * (1 - pb) / len(ref) + pa * (1 - pa) / n) + 1e-3


def test_reproducibility_byte_exact():
    g1 = rng.stream(7, "r")
    g2 = rng.stream(7, "r")
    bits = np.ones(20, dtype=np.uint8)
    st = asep.init_from_boundary(bits)
    a = asep.simulate(st, PARAMS, 2.0, g1)
    b = asep.simulate(st, PARAMS, 2.0, g2)
    assert np.array_equal(a.positions, b.positions)


def test_degeneration_single_trajectory():
    g = rng.stream(8, "d")
    bits = sv.sample_boundary(BernoulliBoundary((0.5,)), 1.0 / 3.0, 220, g)
    h = asep.degenerate_from_six_vertex(0.5, 1.5, 0.02, 4.0, 0, bits, g)
    assert 0 <= h <= 200
    with pytest.raises(ValueError):
        asep.degenerate_from_six_vertex(0.5, 1.5, 0.6, 4.0, 0, bits, g)


def test_degeneration_all_zero_boundary():
    g = rng.stream(9, "dz")
    bits = sv.BoundaryBits(np.zeros(220, dtype=np.uint8))
    assert asep.degenerate_from_six_vertex(0.5, 1.5, 0.02, 4.0, 0, bits, g) == 0
    state = asep.init_from_boundary(np.zeros(10, dtype=np.uint8))
    assert asep.current_J(asep.simulate(state, PARAMS, 4.0, g), 0) == 0
