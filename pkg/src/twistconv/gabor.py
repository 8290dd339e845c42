"""Gabor frames on the cyclic group Z_L and their dual windows.

Time-frequency shifts act as ``pi(x, w) f(t) = exp(2 pi i w (t - x) / L) f(t - x)``
(translation after modulation).  For the separable lattice
``a_step Z_L x b_step Z_L`` the frame operator has a Janssen expansion over
the adjoint lattice ``(L / b_step) Z_L x (L / a_step) Z_L``.  Its coefficient
sequence composes under twisted convolution with ``p / q = a_step b_step / L``,
so the canonical dual window ``S^{-1} g`` follows from the twisted inverse of
that sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .convinv import InversionConfig
from .errors import NotAFrame
from .inversion import InversionReport, invert_twisted
from .sequences import Sequence, TwistParams


class TFShift(NamedTuple):
    x: int
    w: int


@dataclass(frozen=True)
class GaborConfig:
    L: int
    a_step: int
    b_step: int
    window: np.ndarray

    def __post_init__(self):
        window = np.asarray(self.window, dtype=np.complex128).reshape(-1)
        object.__setattr__(self, "window", window)
        if self.L < 1 or len(window) != self.L:
            raise ValueError(f"window length {len(window)} does not match L={self.L}")
        for name in ("a_step", "b_step"):
            step = getattr(self, name)
            if step < 1 or self.L % step:
                raise ValueError(f"{name}={step} is not a positive divisor of L={self.L}")

    @property
    def twist(self) -> TwistParams:
        ratio = Fraction(self.a_step * self.b_step, self.L)
        return TwistParams(ratio.numerator, ratio.denominator, 1)

    @property
    def janssen_constant(self) -> float:
        return self.L / (self.a_step * self.b_step)

    def adjoint_point(self, k, l):
        """Time-frequency position of adjoint index ``(k, l)``, reduced mod L."""
        return (k * (self.L // self.b_step)) % self.L, (l * (self.L // self.a_step)) % self.L


def tf_shift_apply(s: TFShift, f) -> np.ndarray:
    """Apply ``pi(x, w)`` along the first axis of ``f``."""
    f = np.asarray(f, dtype=np.complex128)
    L = len(f)
    src = (np.arange(L) - s.x) % L
    phase = np.exp(2j * np.pi * ((s.w * src) % L) / L)
    return phase.reshape((L,) + (1,) * (f.ndim - 1)) * f[src]


def tf_shift_matrix(s: TFShift, L: int) -> np.ndarray:
    return tf_shift_apply(s, np.eye(L))


def _atoms(cfg):
    """Matrix whose columns are pi(lambda) g over the lattice."""
    cols = [
        tf_shift_apply(TFShift(n * cfg.a_step, m * cfg.b_step), cfg.window)
        for n in range(cfg.L // cfg.a_step)
        for m in range(cfg.L // cfg.b_step)
    ]
    return np.stack(cols, axis=1)


def frame_operator_dense(cfg: GaborConfig) -> np.ndarray:
    """``S f = sum_lambda <f, pi(lambda) g> pi(lambda) g`` as an ``L x L`` matrix."""
    G = _atoms(cfg)
    return G @ G.conj().T


def janssen_coefficients(cfg: GaborConfig) -> tuple[Sequence, TwistParams]:
    """Janssen coefficients ``a_{k,l} = (L / ab) <g, pi(k L/b, l L/a) g>``.

    Indices run over ``0 <= k < b_step`` and ``0 <= l < a_step``.
    """
    g = cfg.window
    entries = {}
    for k in range(cfg.b_step):
        for l in range(cfg.a_step):
            shifted = tf_shift_apply(TFShift(*cfg.adjoint_point(k, l)), g)
            entries[k, l] = cfg.janssen_constant * np.vdot(shifted, g)
    return Sequence(1, entries), cfg.twist


def _wrapped_coefficients(a: Sequence, cfg):
    """Fold coefficients onto residues (k mod b_step, l mod a_step); pi is periodic."""
    if a.dim != 1:
        raise ValueError("finite Gabor model is one-dimensional")
    folded = np.zeros((cfg.b_step, cfg.a_step), dtype=np.complex128)
    k = np.mod(a.indices[:, 0], cfg.b_step)
    l = np.mod(a.indices[:, 1], cfg.a_step)
    np.add.at(folded, (k, l), a.values)
    return folded


def apply_kappa(a: Sequence, cfg: GaborConfig, f) -> np.ndarray:
    """``sum_{k,l} a_{k,l} pi(k L / b_step, l L / a_step) f``."""
    f = np.asarray(f, dtype=np.complex128)
    if len(f) != cfg.L:
        raise ValueError(f"vector length {len(f)} does not match L={cfg.L}")
    folded = _wrapped_coefficients(a, cfg)
    out = np.zeros(f.shape, dtype=np.complex128)
    for (k, l), c in np.ndenumerate(folded):
        if c != 0:
            out += c * tf_shift_apply(TFShift(*cfg.adjoint_point(k, l)), f)
    return out


def kappa_matrix(a: Sequence, cfg: GaborConfig) -> np.ndarray:
    return apply_kappa(a, cfg, np.eye(cfg.L))


def frame_bounds(cfg: GaborConfig) -> tuple[float, float]:
    """Smallest and largest eigenvalue of the frame operator."""
    ev = np.linalg.eigvalsh(frame_operator_dense(cfg))
    return float(ev[0]), float(ev[-1])


def dual_window(
    cfg: GaborConfig,
    inv_cfg: InversionConfig | None = None,
    frame_tol: float = 1e-10,
) -> tuple[np.ndarray, InversionReport]:
    """Canonical dual window ``S^{-1} g`` through twisted-convolution inversion.

    The dense frame operator is only used to reject non-frames (smallest
    eigenvalue below ``frame_tol`` times the largest); the window itself
    comes from ``kappa(b) g`` with ``b`` the twisted inverse of the Janssen
    coefficients.
    """
    lo, hi = frame_bounds(cfg)
    if hi <= 0 or lo < frame_tol * hi:
        raise NotAFrame(f"frame operator spectrum [{lo:.3e}, {hi:.3e}] is numerically singular")
    a, tp = janssen_coefficients(cfg)
    report = invert_twisted(a, tp, inv_cfg)
    gamma = apply_kappa(report.inverse, cfg, cfg.window)
    return gamma, report


def gaussian_window(L: int, width: float | None = None) -> np.ndarray:
    """Periodised, unit-norm sampled Gaussian centred at 0 on Z_L."""
    width = np.sqrt(L / (2 * np.pi)) if width is None else width
    t = np.arange(L)
    t = np.minimum(t, L - t)
    g = np.exp(-0.5 * (t / width) ** 2)
    return g / np.linalg.norm(g)
