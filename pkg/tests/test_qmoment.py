import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzsim import rng, sixvertex as sv
from kpzsim.errors import InfeasibleContourError, SizeLimitError, TailTooLargeError
from kpzsim.qmoment import (
    NestedContours,
    brute_force_height_dist,
    build_contours,
    q_pochhammer,
    qlaplace_series,
    qmoment,
)
from kpzsim.scaling import BernoulliBoundary, SixVertexParams

P = SixVertexParams(0.25, 0.5)


class TestQPochhammer:
    def test_empty_product(self):
        assert q_pochhammer(0.3 + 0.1j, 0.5, 0) == 1.0

    def test_finite_products(self):
        assert q_pochhammer(0.5, 0.5, 1) == pytest.approx(0.5)
        assert q_pochhammer(0.5, 0.5, 2) == pytest.approx(0.5 * 0.75)

    def test_infinite_product_value(self):
        # (q; q)_inf at q = 1/2, summed independently in extended precision
        assert q_pochhammer(0.5, 0.5).real == pytest.approx(0.2887880950866024, abs=1e-14)

    def test_vanishing_first_factor(self):
        assert q_pochhammer(1.0, 0.5) == 0.0

    def test_matches_mpmath(self):
        import mpmath

        for a, q in ((0.3, 0.5), (-0.7, 0.85), (0.2 + 0.4j, 0.6)):
            mine = q_pochhammer(a, q)
            ref = complex(mpmath.qp(a, q))
            assert mine.real == pytest.approx(ref.real, abs=1e-12)
            assert mine.imag == pytest.approx(ref.imag, abs=1e-12)


class TestContours:
    def test_build_and_validate(self):
        boundary = BernoulliBoundary((0.3, 0.7))
        contours = build_contours(2, P, boundary)
        poles = [-P.kappa] + [P.q * b for b in boundary.betas]
        contours.validate(poles)  # does not raise
        assert contours.c1_center == -P.q

    def test_nesting_ratio(self):
        contours = build_contours(3, P)
        r = contours.c2_radii
        assert r[1] > 2 * r[0] and r[2] > 2 * r[1]  # ratio > 1/q = 2

    def test_pole_inside_c1_rejected(self):
        bad = NestedContours(q=0.5, c1_center=-0.5, c1_radius=0.05, c2_radii=(0.02,))
        with pytest.raises(InfeasibleContourError):
            bad.validate([-0.52])  # excluded point inside c1

    def test_non_nested_rejected(self):
        bad = NestedContours(q=0.5, c1_center=-0.5, c1_radius=0.05, c2_radii=(0.02, 0.03))
        with pytest.raises(InfeasibleContourError):
            bad.validate([])


class TestEnumerationOracle:
    def test_step_t1(self):
        dist = brute_force_height_dist(1, 1, P)
        assert dist[1] == pytest.approx(1.0)

    def test_probabilities_sum_to_one(self):
        for t in (1, 2, 3, 4):
            for x in (1, 2, 3):
                for boundary in (None, BernoulliBoundary((0.7,)), BernoulliBoundary((0.3, 0.6))):
                    dist = brute_force_height_dist(t, x, P, boundary)
                    assert dist.sum() == pytest.approx(1.0, abs=1e-12)
                    assert np.all(dist >= -1e-15)

    def test_exit_law_t1(self):
        # h_1(x) is Bernoulli(delta2^{x-1}) for step data
        for x in (1, 2, 3, 4):
            dist = brute_force_height_dist(1, x, P)
            assert dist[1] == pytest.approx(P.delta2 ** (x - 1))

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            brute_force_height_dist(4, 4, P, BernoulliBoundary((0.5, 0.5)), node_budget=5)

    def test_matches_mc(self):
        t, x, n = 2, 2, 1_000_000
        bits = sv.sample_boundary_batch(BernoulliBoundary.step(), P.q, t, n, rng.stream(1, "emc"))
        h = sv.heights_batch(P, bits, x, lambda i: rng.stream(1, "emh", i))
        emp = np.bincount(h, minlength=t + 1) / n
        exact = brute_force_height_dist(t, x, P)
        assert np.all(np.abs(emp - exact) < 4 * np.sqrt(exact * (1 - exact) / n) + 2 / n)


class TestQMoment:
    def test_step_t1_x1_is_q(self):
        res = qmoment(1, 1, 1, P)
        assert res.value == pytest.approx(P.q, abs=1e-12)
        assert res.imag_residual < 1e-9

    def test_geometric_exit_law(self):
        # independent analytic oracle: E[q^{k h_1(x)}] = 1 - delta2^{x-1}(1 - q^k)
        for x in (2, 3, 4):
            for k in (1, 2):
                exact = 1.0 - P.delta2 ** (x - 1) * (1.0 - P.q**k)
                assert qmoment(k, x, 1, P).value == pytest.approx(exact, abs=1e-10)

    def test_against_enumeration(self):
        boundary = BernoulliBoundary((0.7,))
        dist = brute_force_height_dist(2, 1, P, boundary)
        for k in (1, 2, 3):
            exact = float(np.sum(dist * P.q ** (k * np.arange(3))))
            got = qmoment(k, 1, 2, P, boundary, n_nodes=128).value
            assert got == pytest.approx(exact, abs=1e-9)

    def test_monotone_in_k(self):
        boundary = BernoulliBoundary((0.4, 0.6))
        vals = [qmoment(k, 2, 3, P, boundary).value for k in (1, 2, 3)]
        assert vals[0] >= vals[1] >= vals[2] > 0.0
        assert all(v <= 1.0 for v in vals)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            qmoment(4, 1, 1, P)
        with pytest.raises(ValueError):
            qmoment(1, 0, 1, P)

    def test_node_doubling_residuals_shrink_geometrically(self):
        # trapezoid on closed analytic contours: >= 10x per doubling until noise
        from kpzsim.qmoment import _eval_once, _integrand_factory, build_contours

        boundary = BernoulliBoundary((0.6,))
        contours = build_contours(2, P, boundary)
        f = _integrand_factory(3, 3, P, boundary)
        vals = [_eval_once(2, f, P.q, contours, n) for n in (8, 16, 32, 64, 256)]
        exact = vals[-1]
        errs = [abs(v - exact) for v in vals[:-1]]
        for a, b in zip(errs, errs[1:]):
            if b < 1e-13:  # noise floor
                break
            assert a / b >= 10.0


class TestQLaplace:
    def test_zeta_zero(self):
        value, tail = qlaplace_series(0.0, [1.0, 0.5, 0.3], 0.5)
        assert value == 1.0
        assert tail == 0.0

    def test_unit_moments_give_euler_series(self):
        # all moments 1: sum zeta^k/(q;q)_k = 1/(zeta; q)_inf
        q, zeta = 0.5, -0.25
        value, tail = qlaplace_series(zeta, [1.0] * 30, q)
        exact = 1.0 / q_pochhammer(zeta, q)
        assert abs(value - exact) <= tail + 1e-12

    def test_tail_bound_is_rigorous(self):
        q, zeta = 0.5, -0.4
        full, _ = qlaplace_series(zeta, [1.0] * 40, q)
        short, tail = qlaplace_series(zeta, [1.0] * 4, q)
        assert abs(full - short) <= tail

    def test_tail_too_large(self):
        with pytest.raises(TailTooLargeError):
            qlaplace_series(-0.9, [1.0], 0.5, tol=1e-6)

    def test_requires_unit_disk(self):
        with pytest.raises(ValueError):
            qlaplace_series(-1.0, [1.0], 0.5)


@given(
    k=st.integers(1, 2),
    t=st.integers(1, 3),
    x=st.integers(1, 3),
    b=st.floats(0.2, 0.8),
)
@settings(max_examples=12, deadline=None)
def test_quadrature_matches_enumeration_property(k, t, x, b):
    boundary = BernoulliBoundary((round(b, 3),))
    dist = brute_force_height_dist(t, x, P, boundary)
    exact = float(np.sum(dist * P.q ** (k * np.arange(t + 1))))
    got = qmoment(k, x, t, P, boundary, n_nodes=128).value
    assert math.isclose(got, exact, abs_tol=1e-8)
