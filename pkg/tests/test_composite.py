import cmath
import math

import numpy as np
import pytest

from thermnoise.composite import (
    CompositeMirror,
    gamma_slope,
    gt_reflection,
    noise_ratio_curve,
    noise_ratio_F,
    optimal_alpha,
    strain_sensitivity_alpha,
    transverse_penalty,
)
from thermnoise.fdt import correlation_N

from conftest import K0

W0 = 1e-4


def fd_slope(R0, R2, phi, h=1e-6):
    return cmath.phase(gt_reflection(R0, R2, phi + h) / gt_reflection(R0, R2, phi - h)) / (2 * h)


# --- two-surface reflectance ------------------------------------------------------

@pytest.mark.parametrize("phi", [0.0, 0.4, math.pi, 5.0])
def test_gt_no_front_mirror(phi):
    assert abs(gt_reflection(0.0, 1.0, phi) - cmath.exp(1j * phi)) < 1e-15


def test_gt_unit_modulus():
    for phi in np.linspace(0, 2 * math.pi, 361):
        for R0 in (0.0, 0.25, 0.81, 0.99):
            assert abs(abs(gt_reflection(R0, 1.0, phi)) - 1) < 1e-12


def test_gt_bounded():
    for phi in np.linspace(0, 2 * math.pi, 73):
        for R0 in (0.0, 0.3, 0.9):
            for R2 in (0.0, 0.2, 0.7, 1.0):
                assert abs(gt_reflection(R0, R2, phi)) <= 1 + 1e-12


def test_gt_no_embedded_mirror():
    assert gt_reflection(0.81, 0.0, 1.3) == pytest.approx(-0.9)


def test_gt_rejects_bad_reflectivity():
    with pytest.raises(ValueError):
        gt_reflection(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        gt_reflection(0.5, 1.2, 0.0)


def test_slope_no_front_mirror():
    for phi in np.linspace(0, 2 * math.pi, 17):
        assert gamma_slope(0.0, 1.0, phi) == pytest.approx(1.0, abs=1e-15)


def test_slope_resonance_and_antiresonance():
    assert gamma_slope(0.81, 1.0, 0.0) == pytest.approx(19.0, abs=1e-9)
    assert gamma_slope(0.81, 1.0, math.pi) == pytest.approx(1 / 19, abs=1e-12)


@pytest.mark.parametrize("R0", [0.0, 0.25, 0.81, 0.99])
@pytest.mark.parametrize("R2", [1.0, 0.6])
def test_slope_matches_finite_difference(R0, R2):
    for phi in np.linspace(0, 2 * math.pi, 50, endpoint=False):
        exact = gamma_slope(R0, R2, phi)
        assert fd_slope(R0, R2, phi) == pytest.approx(exact, rel=1e-6, abs=1e-9)


def test_slope_positive_at_resonance():
    assert gamma_slope(0.5, 1.0, 0.0) > 0


# --- alpha(k) -----------------------------------------------------------------------

def test_alpha_bare_index():
    m = CompositeMirror(R0=0.0, R2=1.0, z2=1e-3, n_s=1.45, p12=0.0)
    assert strain_sensitivity_alpha(m, K0) == pytest.approx(1.45, abs=1e-14)


def test_alpha_photoelastic_factor():
    m = CompositeMirror(R0=0.0, R2=1.0, z2=1e-3, n_s=1.45, p12=0.27)
    assert strain_sensitivity_alpha(m, K0) == pytest.approx(1.45 * (1 - 1.45**2 * 0.27 / 2), abs=1e-14)
    assert strain_sensitivity_alpha(m, K0) == pytest.approx(1.0384, abs=1e-4)


@pytest.mark.parametrize("R0", [0.25, 0.81, 0.99])
def test_alpha_periodic(R0):
    m = CompositeMirror(R0=R0, R2=1.0, z2=2e-4, n_s=1.45, p12=0.27)
    period = math.pi / (m.n_s * m.z2)
    for x in np.linspace(0.99, 1.01, 13):
        k = x * K0
        assert strain_sensitivity_alpha(m, k + period) == pytest.approx(strain_sensitivity_alpha(m, k), abs=1e-9)


def test_alpha_range_over_period():
    m = CompositeMirror(R0=0.81, R2=1.0, z2=2e-4, n_s=1.45, p12=0.0)
    period = math.pi / (m.n_s * m.z2)
    k_res = round(K0 / period) * period
    assert strain_sensitivity_alpha(m, k_res) == pytest.approx(1.45 * 19, rel=1e-9)
    assert strain_sensitivity_alpha(m, k_res + period / 2) == pytest.approx(1.45 / 19, rel=1e-9)
    a = [strain_sensitivity_alpha(m, k_res + t * period) for t in np.linspace(0, 1, 2001)]
    assert 1.45 / 19 - 1e-12 <= min(a) and max(a) <= 1.45 * 19 + 1e-9


def test_alpha_rayleigh_warning():
    m = CompositeMirror(R0=0.5, R2=1.0, z2=0.1, n_s=1.45)
    with pytest.warns(UserWarning, match="not small"):
        strain_sensitivity_alpha(m, K0, w0=W0)


# --- noise ratio ----------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.0, 1.5])
def test_F_no_depth(beam02, alpha):
    assert noise_ratio_F(0.0, alpha, beam02) == pytest.approx(1.0, abs=1e-6)


def test_F_alpha_zero(beam02):
    for z in (0.5, 2, 10):
        assert noise_ratio_F(z * W0, 0.0, beam02) == pytest.approx(1.0, abs=1e-12)


def test_F_alpha_one(beam02):
    for z in (0.5, 2, 10):
        assert noise_ratio_F(z * W0, 1.0, beam02) == pytest.approx(correlation_N(z * W0, z * W0, beam02).value, abs=1e-12)


def test_F_convex_in_alpha(beam02):
    for z in (0.3, 1, 5):
        f = [noise_ratio_F(z * W0, a, beam02) for a in (0.0, 0.5, 1.0)]
        assert f[0] + f[2] - 2 * f[1] >= 0


def test_optimal_alpha_deep_limit(beam02):
    opt = optimal_alpha(50 * W0, beam02)
    n_inf = 2.2 / 5.12
    assert 1 / (1 + n_inf) == pytest.approx(0.6994, abs=1e-4)
    # finite depth: N(0, 50 w0) ~ 0.02 and N(50 w0, 50 w0) 1.6% above its limit
    assert opt.alpha_min == pytest.approx(1 / (1 + n_inf), abs=0.02)


def test_optimal_alpha_at_ten_w0(beam02):
    opt = optimal_alpha(10 * W0, beam02)
    assert opt.F_min == pytest.approx(0.36, abs=0.02)
    assert opt.alpha_min == pytest.approx(0.70, abs=0.03)
    assert not opt.degenerate


def test_optimal_alpha_is_minimum(beam02):
    for z in (0.2, 1, 3, 10):
        opt = optimal_alpha(z * W0, beam02)
        for a in (0.3, 0.7, 1.0, 1.5, opt.alpha_min + 1e-3, opt.alpha_min - 1e-3):
            assert opt.F_min <= noise_ratio_F(z * W0, a, beam02) + 1e-12


def test_optimal_alpha_degenerate_at_surface(beam02):
    opt = optimal_alpha(0.0, beam02)
    assert opt.degenerate and opt.alpha_min == 0.0
    assert opt.F_min == pytest.approx(1.0, abs=1e-9)


def test_noise_ratio_curve(beam02):
    curve = noise_ratio_curve([0, 1, 2], 0.7, beam02)
    assert curve.sigma == 0.2 and curve.alpha == 0.7
    assert [z for z, _ in curve.F] == [0, 1, 2]
    assert all(F >= 0 for _, F in curve.F)


def test_figure_ordering_at_ten_w0(beam02):
    # top to bottom: alpha = 1.5, 0.3, 1.0, 0.7
    F = {a: noise_ratio_F(10 * W0, a, beam02) for a in (1.5, 0.3, 1.0, 0.7)}
    assert F[1.5] > F[0.3] > F[1.0] > F[0.7]


# --- transverse hook ---------------------------------------------------------------------

def test_transverse_penalty():
    assert transverse_penalty(3 * W0, W0, 0.0) == 0.0
    assert transverse_penalty(2 * W0, W0, 0.1) == pytest.approx(2 * transverse_penalty(W0, W0, 0.1))
    assert transverse_penalty(W0, W0, 0.37) == pytest.approx(0.37)
    with pytest.raises(ValueError, match="coefficient"):
        transverse_penalty(W0, W0)
