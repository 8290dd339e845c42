"""Twisted convolution on the finite group Z_p x Z_p.

Grids are ``p x p`` complex arrays with ``g[j, k] = g_{j,k}``.  For fixed
``g`` the map ``C_g: f -> f # g`` acts on ``f.ravel()`` (row-major) through
a block circulant matrix whose block ``(u, v)`` is ``G_{(u - v) mod p}``.
Blocks are stored as an array of shape ``(p, p, p)`` with ``blocks[j] = G_j``.
"""

from __future__ import annotations

from math import gcd

import numpy as np

from .errors import NotInvertible


def _omega_table(p, q):
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    return np.exp(2j * np.pi * ((q * np.arange(p)) % p) / p)


def _check_grid(g):
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
        raise ValueError(f"expected a square p x p grid, got shape {g.shape}")
    return g


def finite_delta(p: int) -> np.ndarray:
    d = np.zeros((p, p), dtype=np.complex128)
    d[0, 0] = 1.0
    return d


def finite_twisted_convolve(f, g, q: int) -> np.ndarray:
    """``(f # g)_{m,n} = sum_{k,l} f_{k,l} g_{m-k,n-l} omega^{(m-k) l}`` mod p."""
    f, g = _check_grid(f), _check_grid(g)
    if f.shape != g.shape:
        raise ValueError(f"grid size mismatch: {f.shape} vs {g.shape}")
    p = f.shape[0]
    w = _omega_table(p, q)
    rows = np.arange(p)
    out = np.zeros_like(g)
    for k in range(p):
        for l in range(p):
            if f[k, l] == 0:
                continue
            shifted = np.roll(g, (k, l), axis=(0, 1))  # shifted[m, n] = g[m-k, n-l]
            phase = w[((rows - k) * l) % p]
            out += f[k, l] * phase[:, None] * shifted
    return out


def build_block_circulant(g, q: int) -> np.ndarray:
    """Blocks ``(G_j)_{k,l} = omega^{j l} g_{j,(k-l) mod p}``."""
    g = _check_grid(g)
    p = g.shape[0]
    w = _omega_table(p, q)
    k = np.arange(p)[:, None]
    l = np.arange(p)[None, :]
    blocks = np.empty((p, p, p), dtype=np.complex128)
    for j in range(p):
        blocks[j] = w[(j * l) % p] * g[j, (k - l) % p]
    return blocks


def assemble(blocks) -> np.ndarray:
    """Full ``p^2 x p^2`` matrix with block ``(u, v) = G_{(u - v) mod p}``."""
    blocks = np.asarray(blocks)
    p = blocks.shape[0]
    m = blocks.shape[1]
    full = np.empty((p * m, p * m), dtype=np.complex128)
    for u in range(p):
        for v in range(p):
            full[u * m : (u + 1) * m, v * m : (v + 1) * m] = blocks[(u - v) % p]
    return full


def block_dft(blocks) -> np.ndarray:
    """``Ghat_s = sum_r exp(-2 pi i s r / p) G_r`` for every ``s``."""
    blocks = np.asarray(blocks, dtype=np.complex128)
    p = blocks.shape[0]
    s = np.arange(p)
    F = np.exp(-2j * np.pi * np.outer(s, s) / p)
    return np.einsum("sr,rkl->skl", F, blocks)


def inverse_block_dft(hat_blocks) -> np.ndarray:
    hat_blocks = np.asarray(hat_blocks, dtype=np.complex128)
    p = hat_blocks.shape[0]
    s = np.arange(p)
    F = np.exp(2j * np.pi * np.outer(s, s) / p) / p
    return np.einsum("rs,skl->rkl", F, hat_blocks)


def shift_matrix(p: int, r: int) -> np.ndarray:
    """Cyclic shift ``T_r`` with ``(T_r)_{k,l} = 1`` iff ``l - k = r`` mod p.

    With this orientation ``T_r Ghat_s T_r^* = Ghat_{s - q r}``.
    """
    k = np.arange(p)[:, None]
    l = np.arange(p)[None, :]
    return ((l - k) % p == r % p).astype(np.complex128)


def _check_block(mat, tol, s):
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[-1] < tol * max(sv[0], np.finfo(float).tiny):
        raise NotInvertible(
            f"block {s} has smallest singular value {sv[-1]:.3e} (largest {sv[0]:.3e})"
        )


def _grid_from_inverse_blocks(inv_blocks):
    # C_g^{-1} applied to vec(delta) is the first block column, first column.
    h_blocks = inverse_block_dft(inv_blocks)
    return h_blocks[:, :, 0].copy()


def invert_block_circulant(g, q: int, tol: float = 1e-10) -> np.ndarray:
    """Twisted-convolution inverse of ``g`` by blockwise DFT diagonalisation.

    Every ``Ghat_s`` is inverted by a dense solve; ``tol`` is the relative
    singular-value threshold below which a block counts as singular.
    """
    blocks = build_block_circulant(g, q)
    ghat = block_dft(blocks)
    p = ghat.shape[0]
    eye = np.eye(p)
    inv = np.empty_like(ghat)
    for s in range(p):
        _check_block(ghat[s], tol, s)
        inv[s] = np.linalg.solve(ghat[s], eye)
    return _grid_from_inverse_blocks(inv)


def invert_via_ghat0(g, q: int, tol: float = 1e-10) -> np.ndarray:
    """Same inverse as :func:`invert_block_circulant`, inverting only ``Ghat_0``.

    The remaining block inverses follow from
    ``Ghat_s^{-1} = T_r Ghat_0^{-1} T_r^*`` with ``s = -q r`` mod p.
    """
    g = _check_grid(g)
    p = g.shape[0]
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    ghat0 = block_dft(build_block_circulant(g, q))[0]
    _check_block(ghat0, tol, 0)
    inv0 = np.linalg.solve(ghat0, np.eye(p))
    q_inv = pow(q, -1, p) if p > 1 else 0
    inv = np.empty((p, p, p), dtype=np.complex128)
    for s in range(p):
        r = (-s * q_inv) % p
        T = shift_matrix(p, r)
        inv[s] = T @ inv0 @ T.conj().T
    return _grid_from_inverse_blocks(inv)


def ghat0_closed_form(g, q: int) -> np.ndarray:
    """Closed form ``sum_k omega^{n l} g_{k, n-l}``; differs from the block sum."""
    g = _check_grid(g)
    p = g.shape[0]
    w = _omega_table(p, q)
    n = np.arange(p)[:, None]
    l = np.arange(p)[None, :]
    col_sums = g.sum(axis=0)  # sum over the first index k
    return w[(n * l) % p] * col_sums[(n - l) % p]


def ghat0_entries(g, q: int) -> tuple[np.ndarray, float]:
    """``Ghat_0 = sum_r G_r`` and its max deviation from the closed form.

    The block-DFT value is authoritative; the second return value reports
    how far the closed form is from it.
    """
    ghat0 = block_dft(build_block_circulant(g, q))[0]
    discrepancy = float(np.abs(ghat0 - ghat0_closed_form(g, q)).max())
    return ghat0, discrepancy
