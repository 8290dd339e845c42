import cmath

import numpy as np
import pytest

from conftest import random_sequence
from twistconv.errors import NotAFrame
from twistconv.gabor import (
    GaborConfig,
    TFShift,
    apply_kappa,
    dual_window,
    frame_bounds,
    frame_operator_dense,
    gaussian_window,
    janssen_coefficients,
    kappa_matrix,
    tf_shift_apply,
    tf_shift_matrix,
)
from twistconv.sequences import Sequence, make_delta, twisted_convolve


def brute_shift(x, w, f):
    L = len(f)
    return np.array([cmath.exp(2j * cmath.pi * w * (t - x) / L) * f[(t - x) % L]
                     for t in range(L)])


def e0(L):
    v = np.zeros(L, dtype=complex)
    v[0] = 1
    return v


CFG = GaborConfig(12, 2, 4, gaussian_window(12))


def test_tf_shift_basics(rng):
    f = rng.normal(size=10) + 1j * rng.normal(size=10)
    assert np.allclose(tf_shift_apply(TFShift(0, 0), f), f)
    assert np.allclose(tf_shift_apply(TFShift(3, 0), f), np.roll(f, 3))
    for x, w in [(1, 2), (7, 9), (-3, 4)]:
        assert np.allclose(tf_shift_apply(TFShift(x, w), f), brute_shift(x, w, f))
    M = tf_shift_matrix(TFShift(2, 5), 10)
    assert np.allclose(M @ M.conj().T, np.eye(10))


def test_composition_phase():
    L = 8
    for (x1, w1), (x2, w2) in [((1, 2), (3, 5)), ((6, 1), (2, 7)), ((0, 3), (4, 0))]:
        lhs = tf_shift_matrix(TFShift(x1, w1), L) @ tf_shift_matrix(TFShift(x2, w2), L)
        rhs = cmath.exp(2j * cmath.pi * w1 * x2 / L) * tf_shift_matrix(
            TFShift(x1 + x2, w1 + w2), L)
        assert np.allclose(lhs, rhs)


def test_adjoint_points_commute_with_lattice():
    for k in range(CFG.b_step):
        for l in range(CFG.a_step):
            P = tf_shift_matrix(TFShift(*CFG.adjoint_point(k, l)), CFG.L)
            for n in range(CFG.L // CFG.a_step):
                for m in range(CFG.L // CFG.b_step):
                    Q = tf_shift_matrix(TFShift(n * CFG.a_step, m * CFG.b_step), CFG.L)
                    assert np.allclose(P @ Q, Q @ P)


def test_config_validation():
    with pytest.raises(ValueError):
        GaborConfig(12, 5, 2, np.ones(12))
    with pytest.raises(ValueError):
        GaborConfig(12, 2, 3, np.ones(11))
    assert CFG.twist.p == 2 and CFG.twist.q == 3
    assert CFG.twist.omega == pytest.approx(-1)
    assert CFG.janssen_constant == 1.5


def test_frame_operator(rng):
    S = frame_operator_dense(CFG)
    assert np.allclose(S, S.conj().T)
    assert np.allclose(frame_operator_dense(GaborConfig(6, 1, 1, e0(6))), 6 * np.eye(6))
    assert not frame_operator_dense(GaborConfig(6, 2, 3, np.zeros(6))).any()
    lo, hi = frame_bounds(CFG)
    assert 0 < lo <= hi


@pytest.mark.parametrize("L,a,b", [(12, 2, 4), (12, 3, 2), (16, 4, 2), (15, 3, 5), (8, 1, 2)])
def test_janssen_reconstruction(rng, L, a, b):
    g = rng.normal(size=L) + 1j * rng.normal(size=L)
    cfg = GaborConfig(L, a, b, g)
    coeffs, _ = janssen_coefficients(cfg)
    assert np.abs(kappa_matrix(coeffs, cfg) - frame_operator_dense(cfg)).max() <= 1e-10


def test_kappa_basics(rng):
    assert np.allclose(kappa_matrix(make_delta(), CFG), np.eye(12))
    a = Sequence(1, {(1, 0): 2.0})
    b = Sequence(1, {(1 + CFG.b_step, 0): 2.0})
    assert np.allclose(kappa_matrix(a, CFG), kappa_matrix(b, CFG))
    with pytest.raises(ValueError):
        apply_kappa(a, CFG, np.ones(5))


@pytest.mark.parametrize("L,a,b", [(12, 2, 4), (12, 3, 2), (15, 3, 5)])
def test_kappa_homomorphism(rng, L, a, b):
    cfg = GaborConfig(L, a, b, np.ones(L))
    tp = cfg.twist
    for _ in range(5):
        x, y = random_sequence(rng, 8, 3), random_sequence(rng, 8, 3)
        f = rng.normal(size=L) + 1j * rng.normal(size=L)
        lhs = apply_kappa(twisted_convolve(x, y, tp), cfg, f)
        rhs = apply_kappa(x, cfg, apply_kappa(y, cfg, f))
        assert np.abs(lhs - rhs).max() <= 1e-10


def test_dual_window_examples():
    g = e0(6)
    gamma, _ = dual_window(GaborConfig(6, 1, 1, g))
    assert np.allclose(gamma, g / 6)
    with pytest.raises(NotAFrame):
        dual_window(GaborConfig(12, 4, 6, gaussian_window(12)))


@pytest.mark.parametrize("L,a,b", [(12, 2, 4), (12, 3, 2), (18, 2, 6), (15, 3, 3), (20, 4, 4)])
def test_dual_window_gaussian(L, a, b):
    cfg = GaborConfig(L, a, b, gaussian_window(L))
    gamma, report = dual_window(cfg)
    S = frame_operator_dense(cfg)
    assert np.abs(gamma - np.linalg.solve(S, cfg.window)).max() <= 1e-8
    assert np.linalg.norm(S @ gamma - cfg.window) <= 1e-7
    assert report.residual_right <= 1e-8


def test_gaussian_window():
    g = gaussian_window(16)
    assert np.linalg.norm(g) == pytest.approx(1)
    assert np.allclose(g[1:], g[1:][::-1])
