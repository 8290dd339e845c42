"""Constructive inversion of twisted convolution on sequence spaces."""

from .convinv import InversionConfig, conv_residual, invert_convolution, symbol_min_modulus
from .cosets import (
    SeqMatrix,
    cramer_first_column,
    determinant,
    extract_sequence,
    is_in_M0,
    mat_multiply,
    minor_matrix,
    phi,
)
from .errors import (
    MaxIterExceeded,
    NotAFrame,
    NotContractive,
    NotInvertible,
    OverlappingSupports,
    TruncationNotConverged,
    TwistConvError,
)
from .finite import (
    block_dft,
    build_block_circulant,
    finite_twisted_convolve,
    ghat0_entries,
    invert_block_circulant,
    invert_via_ghat0,
)
from .gabor import (
    GaborConfig,
    TFShift,
    apply_kappa,
    dual_window,
    frame_operator_dense,
    janssen_coefficients,
    tf_shift_apply,
)
from .inversion import InversionReport, invert_twisted, neumann_inverse, verify_inverse
from .sequences import (
    Sequence,
    TwistParams,
    add,
    coset_restrict,
    coset_twisted_convolve,
    convolve,
    l1_norm,
    make_delta,
    negate,
    scale,
    twisted_convolve,
)

__version__ = "0.1.0"
