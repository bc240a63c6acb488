import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzsim.scaling import (
    AsepParams,
    BernoulliBoundary,
    SixVertexParams,
    asep_gaussian_scaling,
    asep_tw_scaling,
    bbp_shifts,
    derive_asep_constants,
    derive_six_vertex_constants,
    six_vertex_scalings,
)


def test_six_vertex_constants_examples():
    c = derive_six_vertex_constants(SixVertexParams(0.4, 0.8), 0.5)
    assert c.q == pytest.approx(0.5)
    assert c.kappa == pytest.approx(3.0)
    assert c.lam == pytest.approx(2.0)
    assert c.theta == pytest.approx(4.0 / 3.0)
    assert c.chi == pytest.approx(0.25)

    c = derive_six_vertex_constants(SixVertexParams(0.25, 0.5), 0.5)
    assert c.kappa == pytest.approx(1.5)
    assert c.lam == pytest.approx(1.25)
    assert c.theta == pytest.approx(25.0 / 24.0)


def test_six_vertex_params_rejects_bad_order():
    with pytest.raises(ValueError):
        SixVertexParams(0.8, 0.4)
    with pytest.raises(ValueError):
        SixVertexParams(0.0, 0.5)
    with pytest.raises(ValueError):
        derive_six_vertex_constants(SixVertexParams(0.25, 0.5), 1.0)


def test_asep_params_domain():
    assert AsepParams(0.5, 1.5).q == pytest.approx(1.0 / 3.0)
    with pytest.raises(ValueError):
        AsepParams(1.5, 0.5)
    with pytest.raises(ValueError):
        AsepParams(-0.1, 1.0)


def test_asep_tw_scaling_values():
    # formula values at eta=0; b=0.6 keeps eta strictly inside (theta, 1)
    m_eta, f_eta = asep_tw_scaling(0.0, 0.6)
    assert m_eta == pytest.approx(0.25)
    assert f_eta == pytest.approx(0.25 ** (2.0 / 3.0))
    m_eta, f_eta = asep_tw_scaling(0.5, 0.5)
    assert m_eta == pytest.approx(0.0625)
    assert f_eta == pytest.approx(0.1875 ** (2.0 / 3.0))


def test_asep_tw_scaling_rejects_closed_endpoint():
    # theta = 0 for b = 1/2; the open interval excludes eta = theta
    with pytest.raises(ValueError):
        asep_tw_scaling(0.0, 0.5)
    with pytest.raises(ValueError):
        asep_tw_scaling(-0.1, 0.5)
    with pytest.raises(ValueError):
        asep_tw_scaling(1.0, 0.5)


def test_asep_gaussian_scaling_values():
    m_p, f_p = asep_gaussian_scaling(-0.25, 0.5)
    assert m_p == pytest.approx(0.375)
    assert f_p == pytest.approx(0.25)
    with pytest.raises(ValueError):
        asep_gaussian_scaling(-0.6, 0.5)
    with pytest.raises(ValueError):
        asep_gaussian_scaling(0.0, 0.5)  # eta = theta rejected


def test_gaussian_scale_vanishes_at_theta():
    vals = [asep_gaussian_scaling(eta, 0.5)[1] for eta in (-0.1, -0.01, -0.001)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 0.02


def test_six_vertex_scalings_gaussian_example():
    c = derive_six_vertex_constants(SixVertexParams(0.4, 0.8), 0.5)
    # kappa=3, Lambda=2, theta=4/3
    m_p, f_p = six_vertex_scalings(c, 1.0, "gaussian")
    assert m_p == pytest.approx(0.25)
    assert f_p == pytest.approx(0.25)
    with pytest.raises(ValueError):
        six_vertex_scalings(c, 3.5, "tw")  # eta >= kappa
    with pytest.raises(ValueError):
        six_vertex_scalings(c, c.theta, "tw")  # closed endpoint


def test_tw_scale_vanishes_at_outer_edge():
    c = derive_six_vertex_constants(SixVertexParams(0.25, 0.5), 0.5)
    f_near = six_vertex_scalings(c, c.kappa - 1e-6, "tw")[1]
    assert f_near < 1e-3
    # ASEP analogue: f -> 0 as eta -> 1
    assert asep_tw_scaling(1.0 - 1e-9, 0.5)[1] < 1e-5


def test_bbp_shifts_zero_drifts():
    c = derive_asep_constants(AsepParams(0.5, 1.5), 0.5)
    assert np.allclose(bbp_shifts(c, 0.0, (0.0, 0.0)), 0.0)
    cv = derive_six_vertex_constants(SixVertexParams(0.25, 0.5), 0.5)
    assert np.allclose(bbp_shifts(cv, 0.0, (0.0, 0.0, 0.0)), 0.0)


def test_bbp_shifts_asep_example():
    # theta = 0 at b = 1/2; f_theta = chi^{2/3} = 0.25^{2/3}
    c = derive_asep_constants(AsepParams(0.5, 1.5), 0.5)
    got = bbp_shifts(c, 0.0, (1.0,))
    expected = -(0.25 ** (2.0 / 3.0)) * 2.0 / (2.0 * 0.25)
    assert got[0] == pytest.approx(expected)


def test_boundary_betas():
    b = BernoulliBoundary((0.5, 0.75))
    assert np.allclose(b.betas, [1.0, 3.0])
    with pytest.raises(ValueError):
        BernoulliBoundary((1.0,)).betas
    assert BernoulliBoundary((1.0,)).m == 1  # b = 1 legal for sampling
    with pytest.raises(ValueError):
        BernoulliBoundary((0.0,))


@given(
    d1=st.floats(0.05, 0.9),
    ratio=st.floats(0.05, 0.95),
    b=st.floats(0.05, 0.95),
)
@settings(max_examples=200, deadline=None)
def test_regime_partition_six_vertex(d1, ratio, b):
    # theta/Lambda < theta < kappa: the three regimes tile (theta/Lambda, kappa)
    d2 = d1 + (1.0 - d1) * ratio
    c = derive_six_vertex_constants(SixVertexParams(d1, d2), b)
    assert c.theta / c.lam < c.theta < c.kappa
    assert 0.0 < c.chi <= 0.25
    mid_tw = 0.5 * (c.theta + c.kappa)
    m_eta, f_eta = six_vertex_scalings(c, mid_tw, "tw")
    assert math.isfinite(m_eta) and f_eta > 0.0
    mid_g = 0.5 * (c.theta / c.lam + c.theta)
    m_p, f_p = six_vertex_scalings(c, mid_g, "gaussian")
    assert math.isfinite(m_p) and f_p > 0.0


@given(b=st.floats(0.05, 0.95), u=st.floats(0.01, 0.99))
@settings(max_examples=200, deadline=None)
def test_regime_partition_asep(b, u):
    theta = 1.0 - 2.0 * b
    assert -b < theta < 1.0
    eta_tw = theta + u * (1.0 - theta)
    eta_g = -b + u * (theta + b)
    if eta_tw < 1.0 and eta_tw > theta:
        m_eta, f_eta = asep_tw_scaling(eta_tw, b)
        assert f_eta > 0.0 and math.isfinite(m_eta)
    if -b < eta_g < theta:
        m_p, f_p = asep_gaussian_scaling(eta_g, b)
        assert f_p > 0.0 and math.isfinite(m_p)
