"""Constructive inverse of a sequence under twisted convolution.

The pipeline maps ``a`` to the sequence matrix ``A = phi(a)``, inverts the
scalar ``det(A)`` under ordinary convolution, forms the first column of
``A^{-1}`` by Cramer's rule and sums it back into a sequence ``b`` with
``a # b = b # a = delta``.  A Neumann series serves as an independent
check for contractive inputs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .convinv import InversionConfig, invert_convolution_report
from .cosets import (
    MAX_DET_SIZE,
    NUMERIC_ZERO,
    coset_mass,
    cramer_first_column,
    determinant,
    extract_sequence,
    phi,
    restrict_second_coset,
)
from .errors import (
    MaxIterExceeded,
    NotContractive,
    OverlappingSupports,
    TruncationNotConverged,
)
from .sequences import (
    Sequence,
    TwistParams,
    l1_norm,
    make_delta,
    sum_sequences,
    twisted_convolve,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InversionReport:
    input: Sequence
    tp: TwistParams
    inverse: Sequence
    residual_right: float
    residual_left: float
    det_symbol_min: float
    grid_size_used: int
    refinements: int


def verify_inverse(a: Sequence, b: Sequence, tp: TwistParams) -> tuple[float, float]:
    """``(||a # b - delta||_1, ||b # a - delta||_1)``."""
    delta = make_delta(a.dim)
    right = l1_norm(twisted_convolve(a, b, tp) - delta)
    left = l1_norm(twisted_convolve(b, a, tp) - delta)
    return right, left


def invert_twisted(
    a: Sequence,
    tp: TwistParams,
    cfg: InversionConfig | None = None,
    max_det_size: int = MAX_DET_SIZE,
) -> InversionReport:
    """Twisted-convolution inverse of ``a`` via determinant and Cramer's rule.

    Raises
    ------
    NotInvertible
        The determinant's symbol vanishes (to ``cfg.symbol_floor``).
    TruncationNotConverged
        The truncated determinant inverse, or the final pair of residuals,
        misses the configured tolerances.
    OverlappingSupports
        An internal coset-support check failed; ``a`` did not behave like an
        element of ``l^1``, which points at a bug.
    """
    cfg = cfg or InversionConfig()
    if a.dim != tp.dim:
        raise ValueError(f"sequence dim {a.dim} does not match twist dim {tp.dim}")
    if tp.N > max_det_size:
        raise ValueError(f"p^d = {tp.N} exceeds the determinant cap {max_det_size}")
    p = tp.p

    A = phi(a, tp)
    D = determinant(A, max_det_size)
    on, off = coset_mass(D, p)
    if off > NUMERIC_ZERO * max(on, 1.0):
        raise OverlappingSupports(f"determinant has off-coset mass {off:.3e}")
    D = restrict_second_coset(D, p)

    conv = invert_convolution_report(D, cfg, coset_p=p)
    column = cramer_first_column(A, conv.inverse, max_det_size)
    b = extract_sequence(column, p).prune(cfg.tail_tol)

    right, left = verify_inverse(a, b, tp)
    log.debug("twisted inverse: %d terms, residuals %.3e / %.3e", len(b), right, left)
    if max(right, left) > cfg.residual_tol:
        raise TruncationNotConverged(
            f"residuals {right:.3e} / {left:.3e} exceed {cfg.residual_tol:.1e}"
        )
    return InversionReport(
        input=a,
        tp=tp,
        inverse=b,
        residual_right=right,
        residual_left=left,
        det_symbol_min=conv.symbol_min,
        grid_size_used=conv.grid_size,
        refinements=conv.refinements,
    )


def neumann_inverse(
    a: Sequence,
    tp: TwistParams,
    tol: float = 1e-10,
    max_iter: int = 500,
    prune_tol: float = 1e-18,
) -> Sequence:
    """``sum_{n <= K} (delta - a)^{#n}`` with a geometric tail below ``tol``.

    Each power is pruned at ``prune_tol`` to keep supports bounded.
    """
    delta = make_delta(a.dim)
    r = delta - a
    rho = l1_norm(r)
    if rho >= 1:
        raise NotContractive(f"||delta - a||_1 = {rho:.6g} >= 1")
    total, power, n = [delta], delta, 0
    while rho ** (n + 1) / (1 - rho) > tol:
        n += 1
        if n > max_iter:
            raise MaxIterExceeded(f"needed more than {max_iter} terms")
        power = twisted_convolve(power, r, tp).prune(prune_tol)
        total.append(power)
    return sum_sequences(total)
