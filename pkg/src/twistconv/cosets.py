"""Matrices of sequences multiplied by convolution, and the map ``phi``.

``phi(a)`` is the ``N x N`` matrix (``N = p^d``) with entries
``phi(a)[i, j] = sum_m omega^{m . k_j} a^{m, k_i - k_j}``.  It turns twisted
convolution into a matrix product over the commutative ring
``(l^1, *)``: ``phi(a # b) = phi(b) (*) phi(a)``, so determinants and Cramer's
rule are available.

Public functions taking matrix positions use 1-based ``i, j`` as in
``I = {1, ..., N}``; ``SeqMatrix.entries`` itself is a 0-based nested tuple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import OverlappingSupports
from .sequences import (
    Sequence,
    TwistParams,
    convolve,
    coset_restrict,
    l1_norm,
    make_delta,
    negate,
    scale,
    sum_sequences,
)

MAX_DET_SIZE = 6
NUMERIC_ZERO = 1e-12


@dataclass(frozen=True)
class SeqMatrix:
    tp: TwistParams
    entries: tuple

    def __post_init__(self):
        n = self.tp.N
        rows = tuple(tuple(row) for row in self.entries)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"expected a {n} x {n} matrix of sequences")
        for row in rows:
            for e in row:
                if e.dim != self.tp.dim:
                    raise ValueError("entry dim does not match twist dim")
        object.__setattr__(self, "entries", rows)

    @property
    def N(self) -> int:
        return self.tp.N

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def replace(self, updates) -> "SeqMatrix":
        """Copy with ``{(i, j): Sequence}`` (0-based) substituted."""
        rows = [list(row) for row in self.entries]
        for (i, j), v in updates.items():
            rows[i][j] = v
        return SeqMatrix(self.tp, rows)


def identity(tp: TwistParams) -> SeqMatrix:
    delta, zero = make_delta(tp.dim), Sequence.zero(tp.dim)
    return SeqMatrix(tp, [[delta if i == j else zero for j in range(tp.N)] for i in range(tp.N)])


def zeros(tp: TwistParams) -> SeqMatrix:
    zero = Sequence.zero(tp.dim)
    return SeqMatrix(tp, [[zero] * tp.N for _ in range(tp.N)])


def _sub_mod(x, y, p):
    return tuple((a - b) % p for a, b in zip(x, y))


def phi(a: Sequence, tp: TwistParams) -> SeqMatrix:
    if a.dim != tp.dim:
        raise ValueError(f"sequence dim {a.dim} does not match twist dim {tp.dim}")
    p, ks = tp.p, tp.ordering
    cosets = {(m, s): coset_restrict(a, m, s, p) for m in ks for s in ks}
    rows = []
    for ki in ks:
        row = []
        for kj in ks:
            s = _sub_mod(ki, kj, p)
            terms = [
                scale(cosets[m, s], tp.omega_power(np.dot(m, kj)))
                for m in ks
                if cosets[m, s]
            ]
            row.append(sum_sequences(terms, dim=tp.dim))
        rows.append(row)
    return SeqMatrix(tp, rows)


def mat_multiply(A: SeqMatrix, B: SeqMatrix) -> SeqMatrix:
    """``(A (*) B)_{i,j} = sum_l A_{i,l} * B_{l,j}``."""
    if A.tp != B.tp:
        raise ValueError(f"twist parameters differ: {A.tp} vs {B.tp}")
    n = A.N
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = [convolve(A[i, l], B[l, j]) for l in range(n) if A[i, l] and B[l, j]]
            row.append(sum_sequences(terms, dim=A.tp.dim))
        rows.append(row)
    return SeqMatrix(A.tp, rows)


def mat_distance(A: SeqMatrix, B: SeqMatrix) -> float:
    """Sum over entries of the l1 distance."""
    return sum(
        l1_norm(A[i, j] - B[i, j]) for i in range(A.N) for j in range(A.N)
    )


def _check_size(A, max_size):
    if A.N > max_size:
        raise ValueError(
            f"determinant of a {A.N} x {A.N} sequence matrix exceeds the cap {max_size}"
        )


def determinant(A: SeqMatrix, max_size: int = MAX_DET_SIZE) -> Sequence:
    """Determinant over ``(l^1, *)`` by memoised Laplace expansion.

    Expands column by column; each subdeterminant is keyed by its remaining
    row set, so the cost is ``O(N 2^N)`` convolutions rather than ``N!``.
    """
    _check_size(A, max_size)
    n, d = A.N, A.tp.dim
    memo = {}

    def minor(rows, col):
        # determinant of A restricted to `rows` (sorted tuple) x columns col..n-1
        if col == n:
            return make_delta(d)
        if rows in memo:
            return memo[rows]
        terms = []
        for pos, r in enumerate(rows):
            if not A[r, col]:
                continue
            sub = minor(rows[:pos] + rows[pos + 1 :], col + 1)
            if not sub:
                continue
            term = convolve(A[r, col], sub)
            terms.append(negate(term) if pos % 2 else term)
        memo[rows] = sum_sequences(terms, dim=d)
        return memo[rows]

    return minor(tuple(range(n)), 0)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant_leibniz(A: SeqMatrix, max_size: int = MAX_DET_SIZE) -> Sequence:
    """Plain Leibniz sum ``sum_sigma sgn(sigma) prod_i A_{sigma(i), i}``."""
    _check_size(A, max_size)
    n, d = A.N, A.tp.dim
    terms = []
    for perm in itertools.permutations(range(n)):
        factors = [A[perm[i], i] for i in range(n)]
        if not all(factors):
            continue
        prod = factors[0]
        for f in factors[1:]:
            prod = convolve(prod, f)
        terms.append(prod if _perm_sign(perm) > 0 else negate(prod))
    return sum_sequences(terms, dim=d)


def minor_matrix(A: SeqMatrix, j: int, i: int) -> SeqMatrix:
    """``A(j, i)``: row ``j`` becomes ``delta e_i``, column ``i`` becomes ``delta e_j``.

    ``det(A(j, i))`` is the ``(i, j)`` cofactor used by Cramer's rule.
    Indices are 1-based.
    """
    n = A.N
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"minor indices ({j}, {i}) outside 1..{n}")
    j0, i0 = j - 1, i - 1
    delta, zero = make_delta(A.tp.dim), Sequence.zero(A.tp.dim)
    updates = {(j0, c): (delta if c == i0 else zero) for c in range(n)}
    updates.update({(r, i0): (delta if r == j0 else zero) for r in range(n)})
    return A.replace(updates)


def cramer_first_column(A: SeqMatrix, e: Sequence, max_size: int = MAX_DET_SIZE) -> list:
    """``[det(A(1, i)) * e for i = 1..N]``: the first column of ``A^{-1}``.

    ``e`` must be the convolution inverse of ``det(A)``; this is not checked.
    """
    return [
        convolve(determinant(minor_matrix(A, 1, i), max_size), e) for i in range(1, A.N + 1)
    ]


def coset_mass(a: Sequence, p: int, s=None) -> tuple[float, float]:
    """``(on, off)`` l1 mass of ``a`` on and off ``Z^d x (s + pZ^d)``."""
    s = np.zeros(a.dim, dtype=np.int64) if s is None else np.atleast_1d(s)
    on = (np.mod(a.indices[:, a.dim :], p) == s).all(axis=1)
    mags = np.abs(a.values)
    return float(mags[on].sum()), float(mags[~on].sum())


def restrict_second_coset(a: Sequence, p: int, s=None) -> Sequence:
    """Keep only the entries of ``a`` on ``Z^d x (s + pZ^d)``."""
    s = np.zeros(a.dim, dtype=np.int64) if s is None else np.atleast_1d(s)
    on = (np.mod(a.indices[:, a.dim :], p) == s).all(axis=1)
    return Sequence.from_arrays(a.dim, a.indices[on], a.values[on], canonical=True)


def extract_sequence(column, p: int) -> Sequence:
    """Sum a Cramer column after checking its entries sit on disjoint cosets.

    Entries of modulus at most 1e-12 are ignored by the disjointness check.
    """
    column = list(column)
    if not column:
        raise ValueError("empty column")
    owner = {}
    for i, c in enumerate(column):
        big = np.abs(c.values) > NUMERIC_ZERO
        classes = {tuple(row) for row in np.mod(c.indices[big, c.dim :], p)}
        for cls in classes:
            if cls in owner and owner[cls] != i:
                raise OverlappingSupports(
                    f"column entries {owner[cls] + 1} and {i + 1} share coset {cls}"
                )
            owner[cls] = i
    return sum_sequences(column)


def is_in_M0(A: SeqMatrix, tol: float = NUMERIC_ZERO) -> tuple[bool, Sequence]:
    """Whether ``A = phi(b)`` for ``b`` read off the first column.

    At ``j = 1`` all phases are 1, so ``A_{i,1} = b^{., k_i}`` and ``b`` is
    their sum.
    """
    b = sum_sequences([A[i, 0] for i in range(A.N)], dim=A.tp.dim)
    return mat_distance(phi(b, A.tp), A) <= tol, b
