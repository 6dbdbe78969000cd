"""Tests for the DFT frame, periodogram, smoothing, and bandwidth selection."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from spectest.errors import BandwidthTooLarge, EmptyGrid
from spectest.hermitian import inverse_pd, logdet_pd
from spectest.spectral import (
    FourierFrame,
    SpectralSequence,
    WeightKernel,
    cvll_score,
    cvll_select,
    default_cvll_grid,
    dft,
    kernel_constants,
    leave_out_estimate,
    periodogram_at,
    periodogram_stack,
    smoothed_periodogram,
    validate_sample,
)

TWO_PI = 2.0 * math.pi


def flat_u(x):
    return np.ones_like(np.asarray(x, dtype=float))


def test_dft_constant_series_frozen_value():
    frame = dft(np.ones((4, 1)))
    # sum of four unit terms, scaled by (2*pi*n)^(-1/2)
    assert frame.w[0, 0] == pytest.approx(4.0 / math.sqrt(8.0 * math.pi), abs=1e-14)
    assert np.allclose(frame.w[1:], 0.0, atol=1e-14)


def test_dft_impulse_gives_flat_periodogram():
    z = np.zeros((8, 1))
    z[0, 0] = 1.0
    frame = dft(z)
    for j in range(8):
        val = periodogram_at(frame, j)[0, 0]
        assert val == pytest.approx(1.0 / (TWO_PI * 8.0), abs=1e-14)


def test_dft_matches_direct_sum():
    rng = np.random.default_rng(3)
    z = rng.standard_normal((16, 2))
    frame = dft(z)
    t = np.arange(1, 17)
    for j in (0, 1, 5, 8, 11):
        lam = TWO_PI * j / 16.0
        direct = (z * np.exp(1j * lam * t)[:, np.newaxis]).sum(axis=0) / math.sqrt(TWO_PI * 16)
        assert np.allclose(frame.w[j], direct, atol=1e-12)


def test_dft_conjugate_symmetry_is_exact():
    rng = np.random.default_rng(11)
    for n in (12, 13):
        frame = dft(rng.standard_normal((n, 3)))
        for j in range(1, n):
            assert np.array_equal(frame.w[n - j], np.conj(frame.w[j]))
        assert np.array_equal(frame.w[0], frame.w[0].real)


def test_parseval_identity():
    rng = np.random.default_rng(19)
    for _ in range(20):
        n = int(rng.integers(8, 200))
        z = rng.standard_normal((n, 2))
        frame = dft(z)
        lhs = np.sum(np.abs(frame.w) ** 2)
        rhs = np.sum(z**2) / TWO_PI
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_periodogram_periodicity_and_hermitianness():
    rng = np.random.default_rng(29)
    frame = dft(rng.standard_normal((20, 2)))
    for j in (1, 7, 13):
        a = periodogram_at(frame, j)
        assert np.allclose(a, periodogram_at(frame, j + 20), atol=0.0)
        assert np.allclose(a, periodogram_at(frame, j - 20), atol=0.0)
        assert np.allclose(a, a.conj().T, atol=1e-15)
    stack = periodogram_stack(frame)
    assert stack.shape == (20, 2, 2)
    assert np.allclose(stack[7], periodogram_at(frame, 7), atol=0.0)


def test_kernel_constants_flat_exact():
    cu, du, bu = kernel_constants(flat_u)
    assert cu == pytest.approx(0.5, abs=1e-10)
    assert du == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert bu == pytest.approx(1.0, abs=1e-10)


def test_kernel_constants_quadrature_converged():
    for u in (flat_u, lambda x: 1.0 + np.cos(math.pi * np.asarray(x, dtype=float))):
        coarse = kernel_constants(u, quadrature_points=1024)
        fine = kernel_constants(u, quadrature_points=2048)
        assert np.max(np.abs(np.array(coarse) - np.array(fine))) < 1e-8


def test_kernel_constants_cosine_bump_oracle():
    # u(x) = 1 + cos(pi x): closed forms for C and B, adaptive quadrature for D.
    u = lambda x: 1.0 + np.cos(math.pi * np.asarray(x, dtype=float))
    cu, du, bu = kernel_constants(u)
    norm = 1.0 + 2.0 / math.pi
    second = 1.5 + 4.0 / math.pi
    fourth = 4.375 + 40.0 / (3.0 * math.pi)
    assert cu == pytest.approx(0.5 * second / norm**2, abs=1e-10)
    assert bu == pytest.approx(second**2 / fourth, abs=1e-10)

    def rho(z):
        return (
            (1.0 - z)
            + (2.0 / math.pi) * (1.0 + math.cos(math.pi * z))
            + 0.5 * (1.0 - z) * math.cos(math.pi * z)
            + math.sin(math.pi * z) / (2.0 * math.pi)
        )

    du_ref = quad(lambda z: rho(z) ** 2, 0.0, 1.0, epsabs=1e-13)[0] / norm**4
    assert du == pytest.approx(du_ref, abs=1e-9)


def test_weight_kernel_flat_shortcut_matches_quadrature():
    direct = WeightKernel.flat(8)
    via_function = WeightKernel.from_function(flat_u, 8)
    assert np.array_equal(direct.weights, via_function.weights)
    assert direct.wstar == via_function.wstar
    assert direct.cu == pytest.approx(via_function.cu, abs=1e-10)
    assert direct.du == pytest.approx(via_function.du, abs=1e-10)
    assert direct.bu == pytest.approx(via_function.bu, abs=1e-10)


def test_weight_kernel_validation():
    with pytest.raises(ValueError):
        WeightKernel.flat(7)
    with pytest.raises(ValueError):
        WeightKernel.flat(0)
    with pytest.raises(ValueError):
        WeightKernel(m=2, weights=np.array([1.0, -1.0, 1.0]), wstar=1.0, cu=0.5, du=1 / 3, bu=1.0)
    with pytest.raises(ValueError):
        WeightKernel(m=2, weights=np.array([0.5, 1.0, 1.0]), wstar=2.5, cu=0.5, du=1 / 3, bu=1.0)


def test_smoothed_periodogram_is_window_average():
    rng = np.random.default_rng(37)
    z = rng.standard_normal((64, 2))
    frame = dft(z)
    est = smoothed_periodogram(frame, WeightKernel.flat(6))
    assert est.kind == "unrestricted"
    assert est.matrices.shape == (32, 2, 2)
    # direct wrap-around window at t = 1 and t = 31
    for t in (1, 31):
        window = sum(periodogram_at(frame, t + k) for k in range(-3, 4)) / 7.0
        assert np.allclose(est.matrices[t - 1], window, atol=1e-13)


def test_smoothed_periodogram_frequencies_and_pd():
    rng = np.random.default_rng(41)
    est = smoothed_periodogram(rng.standard_normal((100, 3)), WeightKernel.flat(10))
    assert np.allclose(est.frequencies, TWO_PI * np.arange(1, 51) / 100.0, atol=1e-15)
    assert est.pd.all()


def test_smoothed_periodogram_quadratic_scaling():
    rng = np.random.default_rng(43)
    z = rng.standard_normal((80, 2))
    kernel = WeightKernel.flat(8)
    base = smoothed_periodogram(z, kernel)
    scaled = smoothed_periodogram(3.0 * z, kernel)
    assert np.allclose(scaled.matrices, 9.0 * base.matrices, rtol=1e-12, atol=1e-15)


def test_smoothed_periodogram_bandwidth_guards():
    z = np.random.default_rng(0).standard_normal((20, 2))
    with pytest.raises(BandwidthTooLarge):
        smoothed_periodogram(z, WeightKernel.flat(10))
    with pytest.raises(ValueError):
        smoothed_periodogram(np.random.default_rng(1).standard_normal((40, 4)), WeightKernel.flat(2))


def test_moving_average_spectrum_recovered():
    # X_t = e_t + 0.5 e_{t-1} has spectrum (1.25 + cos lam) / (2 pi).
    rng = np.random.default_rng(53)
    n = 4096
    e = rng.standard_normal(n + 1)
    z = e[1:] + 0.5 * e[:-1]
    est = smoothed_periodogram(z, WeightKernel.flat(128))
    lam = est.frequencies
    truth = (1.25 + np.cos(lam)) / TWO_PI
    ratio = np.real(est.matrices[:, 0, 0]) / truth
    assert abs(np.mean(ratio) - 1.0) < 0.05
    assert np.max(np.abs(ratio - 1.0)) < 0.5


def test_leave_out_identity():
    # (m+1) * flat smoothed - own ordinate = m * leave-out mean.
    rng = np.random.default_rng(61)
    z = rng.standard_normal((60, 2))
    frame = dft(z)
    m = 6
    est = smoothed_periodogram(frame, WeightKernel.flat(m))
    for t in (1, 2, 17, 30):
        direct = (m + 1) * est.matrices[t - 1] - periodogram_at(frame, t)
        assert np.allclose(direct, m * leave_out_estimate(frame, t, m), atol=1e-12)


def test_cvll_score_matches_direct_loop():
    rng = np.random.default_rng(67)
    z = rng.standard_normal((64, 2))
    frame = dft(z)
    m = 6
    total = 0.0
    for j in range(1, 33):
        g = leave_out_estimate(frame, j, m)
        total += np.real(np.trace(periodogram_at(frame, j) @ inverse_pd(g))) + logdet_pd(g)
    assert cvll_score(frame, m) == pytest.approx(total / 64.0, rel=1e-10)


def test_cvll_select_deterministic_and_scale_invariant():
    rng = np.random.default_rng(71)
    z = rng.standard_normal((128, 2))
    best1, scores1 = cvll_select(z)
    best2, scores2 = cvll_select(z)
    assert best1 == best2
    assert scores1 == scores2
    best_scaled, _ = cvll_select(2.5 * z)
    assert best_scaled == best1
    assert best1 in default_cvll_grid(128, 2)


def test_cvll_select_prefers_smallest_on_ties():
    rng = np.random.default_rng(73)
    z = rng.standard_normal((64, 2))
    best, scores = cvll_select(z)
    values = dict(scores)
    tied = [m for m, s in scores if s == values[best]]
    assert best == min(tied)


def test_default_grid_bounds():
    grid = default_cvll_grid(1024, 3)
    # n^0.4 = 16 exactly; floating point must not push the lower edge to 18
    assert grid[0] == 16
    assert grid[-1] == 256
    assert all(m % 2 == 0 for m in grid)
    with pytest.raises(EmptyGrid):
        default_cvll_grid(8, 3)


def test_validate_sample_shapes():
    out = validate_sample([1.0, 2.0, 3.0])
    assert out.shape == (3, 1)
    with pytest.raises(ValueError):
        validate_sample(np.ones((2, 2, 2)))
    with pytest.raises(ValueError):
        validate_sample(np.array([[1.0], [np.nan]]))


def test_spectral_sequence_validation():
    mats = np.stack([np.eye(2), np.eye(2)])
    seq = SpectralSequence.from_matrices("restricted", 4, mats)
    assert seq.half == 2
    assert seq.pd.all()
    bad = np.stack([np.array([[1.0, 1.0], [0.0, 1.0]])])
    with pytest.raises(ValueError):
        SpectralSequence(kind="restricted", n=2, r=2, matrices=bad, pd=np.array([True]))
    with pytest.raises(ValueError):
        SpectralSequence.from_matrices("banana", 4, mats)


def test_frame_reuse_matches_sample_entry():
    rng = np.random.default_rng(79)
    z = rng.standard_normal((50, 2))
    frame = dft(z)
    a = smoothed_periodogram(z, WeightKernel.flat(6))
    b = smoothed_periodogram(frame, WeightKernel.flat(6))
    assert np.array_equal(a.matrices, b.matrices)
    assert isinstance(frame, FourierFrame)
