"""Inversion of ordinary convolution through the Fourier symbol.

A finitely supported ``c`` on Z^{2d} is placed on the discrete torus
``(Z_M)^{2d}``; ``1 / fft(c)`` is transformed back and read off on the
centred cube ``[-M/2, M/2)^{2d}``.  The grid is doubled until the outer
shell has decayed below ``tail_tol`` and the residual ``||c * e - delta||_1``
is below ``residual_tol``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import NotInvertible, TruncationNotConverged
from .sequences import Sequence, convolve, l1_norm, make_delta

log = logging.getLogger(__name__)

# Largest number of torus points per FFT (M^{2d}).
MAX_GRID_POINTS = 2**24

DEFAULT_GRID = {1: 256, 2: 32}


@dataclass(frozen=True)
class InversionConfig:
    """Numerical knobs for convolution inversion.

    ``grid_size=None`` picks 256 for d = 1 and 32 for d = 2.
    """

    grid_size: int | None = None
    symbol_floor: float = 1e-8
    tail_tol: float = 1e-12
    residual_tol: float = 1e-8
    max_refine: int = 4

    def __post_init__(self):
        M = self.grid_size
        if M is not None and (M < 2 or M & (M - 1)):
            raise ValueError(f"grid_size must be a power of two >= 2, got {M}")
        for name in ("symbol_floor", "tail_tol", "residual_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_refine < 0:
            raise ValueError("max_refine must be non-negative")

    def initial_grid(self, c: Sequence) -> int:
        if c.dim not in DEFAULT_GRID:
            raise ValueError(f"convolution inversion supports d = 1 or 2, got d = {c.dim}")
        M = self.grid_size or DEFAULT_GRID[c.dim]
        while M < 2 * (c.support_radius() + 1):
            M *= 2
        return M


@dataclass(frozen=True)
class ConvInverse:
    inverse: Sequence
    symbol_min: float
    grid_size: int
    refinements: int
    residual: float


def _symbol(c: Sequence, M: int) -> np.ndarray:
    grid = np.zeros((M,) * (2 * c.dim), dtype=np.complex128)
    np.add.at(grid, tuple(np.mod(c.indices, M).T), c.values)
    return np.fft.fftn(grid)


def symbol_min_modulus(c: Sequence, M: int) -> float:
    """``min |c_hat|`` over the ``M^{2d}`` torus grid points."""
    if M < 2 * c.support_radius():
        raise ValueError(f"grid size {M} is smaller than twice the support radius")
    if not c:
        return 0.0
    return float(np.abs(_symbol(c, M)).min())


def conv_residual(c: Sequence, e: Sequence) -> float:
    """``||c * e - delta||_1``."""
    return l1_norm(convolve(c, e) - make_delta(c.dim))


def _centred(E, M, dim):
    """Coefficient array on the torus -> (indices, values) on [-M/2, M/2)^{2d}."""
    axes = np.indices(E.shape).reshape(2 * dim, -1).T
    idx = np.where(axes >= M // 2, axes - M, axes)
    return idx, E.reshape(-1)


def invert_convolution_report(
    c: Sequence, cfg: InversionConfig | None = None, coset_p: int | None = None
) -> ConvInverse:
    """Convolution inverse of ``c`` with diagnostics.

    If ``coset_p`` is given, ``c`` is expected on ``Z^d x pZ^d``; so is its
    inverse, and off-coset output (aliasing noise) must stay below
    ``tail_tol`` before it is dropped.
    """
    cfg = cfg or InversionConfig()
    if not c:
        raise NotInvertible("zero sequence")
    d = c.dim
    M = cfg.initial_grid(c)
    for attempt in range(cfg.max_refine + 1):
        if M ** (2 * d) > MAX_GRID_POINTS:
            raise TruncationNotConverged(f"grid {M}^{2 * d} exceeds the memory cap")
        C = _symbol(c, M)
        smin = float(np.abs(C).min())
        if smin < cfg.symbol_floor:
            raise NotInvertible(f"symbol minimum {smin:.3e} below floor on a {M}-grid")
        E = np.fft.ifftn(1.0 / C)
        idx, val = _centred(E, M, d)

        outer = (np.abs(idx) >= M // 4).any(axis=1)
        tail = float(np.abs(val[outer]).max())
        keep = np.abs(val) > cfg.tail_tol
        off_coset = 0.0
        if coset_p is not None and coset_p > 1:
            on = (np.mod(idx[:, d:], coset_p) == 0).all(axis=1)
            off_coset = float(np.abs(val[~on]).max(initial=0.0))
            keep &= on
        e = Sequence.from_arrays(d, idx[keep], val[keep])
        residual = conv_residual(c, e)
        log.debug(
            "grid %d: symbol min %.3e, tail %.3e, off-coset %.3e, residual %.3e",
            M, smin, tail, off_coset, residual,
        )
        if tail < cfg.tail_tol and off_coset <= cfg.tail_tol and residual <= cfg.residual_tol:
            return ConvInverse(e, smin, M, attempt, residual)
        if attempt < cfg.max_refine:
            M *= 2
    raise TruncationNotConverged(
        f"after {cfg.max_refine} refinements (grid {M}): tail {tail:.3e}, "
        f"off-coset {off_coset:.3e}, residual {residual:.3e}"
    )


def invert_convolution(
    c: Sequence, cfg: InversionConfig | None = None, coset_p: int | None = None
) -> Sequence:
    return invert_convolution_report(c, cfg, coset_p).inverse
