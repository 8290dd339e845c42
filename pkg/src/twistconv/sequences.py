"""Finitely supported complex sequences on Z^{2d}.

A :class:`Sequence` of dimension ``d`` maps index pairs ``(k, l)`` with
``k, l`` in Z^d to complex values.  Internally every index is one row of an
integer array of width ``2d`` (``k`` first, then ``l``), kept sorted
lexicographically with exact zeros removed, so equality of sequences is
equality of arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

# Number of index pairs materialised at once in a convolution.
_PAIR_CHUNK = 4_000_000


@dataclass(frozen=True)
class TwistParams:
    """Twist parameters ``(p, q, d)`` with ``omega = exp(2 pi i q / p)``."""

    p: int
    q: int
    dim: int = 1

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi * (self.q % self.p) / self.p))

    @property
    def N(self) -> int:
        return self.p**self.dim

    @cached_property
    def ordering(self) -> tuple[tuple[int, ...], ...]:
        """Lexicographic enumeration k_1, ..., k_N of Z_p^d with k_1 = 0."""
        return tuple(itertools.product(range(self.p), repeat=self.dim))

    @cached_property
    def _roots(self):
        j = np.arange(self.p)
        roots = np.exp(2j * np.pi * j / self.p)
        # quarter turns are exact: 1, i, -1, -i
        exact = (4 * j) % self.p == 0
        roots[exact] = np.array([1, 1j, -1, -1j])[(4 * j[exact]) // self.p]
        return roots

    def omega_power(self, m):
        """``omega ** m`` with the exponent reduced mod p in integer arithmetic."""
        m = np.asarray(m, dtype=np.int64)
        return self._roots[(self.q * m) % self.p]


def _as_vector(x, dim):
    if np.isscalar(x):
        x = (x,)
    x = tuple(int(v) for v in x)
    if len(x) != dim:
        raise ValueError(f"index {x} does not have length {dim}")
    return x


def _encode(idx):
    """Mixed-radix encoding of index rows preserving lexicographic order."""
    lo = idx.min(axis=0)
    span = idx.max(axis=0) - lo + 1
    total = 1
    for s in span:
        total *= int(s)
    if total >= 2**62:
        return None
    code = np.zeros(len(idx), dtype=np.int64)
    for j in range(idx.shape[1]):
        code = code * span[j] + (idx[:, j] - lo[j])
    return code


def _accumulate(idx, val):
    """Sum values at repeated indices, drop exact zeros, sort rows."""
    if len(val) == 0:
        return idx[:0], val[:0]
    code = _encode(idx)
    if code is None:
        uniq, inv = np.unique(idx, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
    else:
        _, first, inv = np.unique(code, return_index=True, return_inverse=True)
        uniq = idx[first]
    n = len(uniq)
    summed = np.bincount(inv, weights=val.real, minlength=n) + 1j * np.bincount(
        inv, weights=val.imag, minlength=n
    )
    keep = summed != 0
    return uniq[keep], summed[keep]


class Sequence:
    """Immutable finitely supported sequence on Z^{2d}.

    Parameters
    ----------
    dim : int
        The half-dimension ``d``; indices are pairs of integer vectors of
        length ``d``.
    entries : mapping, optional
        ``{(k, l): value}``.  For ``d == 1`` the components may be plain
        integers.  Repeated keys (after normalisation) are rejected.
    """

    __slots__ = ("dim", "_idx", "_val")

    def __init__(self, dim: int = 1, entries=None):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        rows, vals, seen = [], [], set()
        for key, value in (entries or {}).items():
            k, l = key
            row = _as_vector(k, dim) + _as_vector(l, dim)
            if row in seen:
                raise ValueError(f"duplicate index {row}")
            seen.add(row)
            rows.append(row)
            vals.append(complex(value))
        idx = np.array(rows, dtype=np.int64).reshape(len(rows), 2 * dim)
        val = np.array(vals, dtype=np.complex128)
        self._idx, self._val = _accumulate(idx, val)

    @classmethod
    def from_arrays(cls, dim, idx, val, canonical=False) -> "Sequence":
        """Build from an ``(n, 2d)`` index array and ``n`` values.

        Repeated rows are summed unless ``canonical`` says the arrays are
        already sorted, unique and zero-free.
        """
        obj = cls.__new__(cls)
        obj.dim = dim
        idx = np.asarray(idx, dtype=np.int64).reshape(-1, 2 * dim)
        val = np.asarray(val, dtype=np.complex128).reshape(-1)
        if not canonical:
            idx, val = _accumulate(idx, val)
        obj._idx, obj._val = idx, val
        return obj

    @classmethod
    def zero(cls, dim=1) -> "Sequence":
        return cls.from_arrays(dim, np.zeros((0, 2 * dim)), np.zeros(0), canonical=True)

    # -- views -------------------------------------------------------------

    @property
    def indices(self) -> np.ndarray:
        """Read-only ``(n, 2d)`` index array, columns ``k_1..k_d, l_1..l_d``."""
        v = self._idx.view()
        v.flags.writeable = False
        return v

    @property
    def values(self) -> np.ndarray:
        v = self._val.view()
        v.flags.writeable = False
        return v

    def _key(self, row):
        row = tuple(int(x) for x in row)
        if self.dim == 1:
            return row
        return row[: self.dim], row[self.dim :]

    def items(self):
        for row, v in zip(self._idx, self._val):
            yield self._key(row), complex(v)

    def to_dict(self) -> dict:
        return dict(self.items())

    def __getitem__(self, key):
        k, l = key
        row = np.array(_as_vector(k, self.dim) + _as_vector(l, self.dim))
        hit = np.nonzero((self._idx == row).all(axis=1))[0]
        return complex(self._val[hit[0]]) if len(hit) else 0j

    def __len__(self):
        return len(self._val)

    def __bool__(self):
        return len(self._val) > 0

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return (
            self.dim == other.dim
            and self._idx.shape == other._idx.shape
            and np.array_equal(self._idx, other._idx)
            and np.array_equal(self._val, other._val)
        )

    def __hash__(self):
        return hash((self.dim, self._idx.tobytes(), self._val.tobytes()))

    def __repr__(self):
        terms = ", ".join(f"{k}: {v:.6g}" for k, v in itertools.islice(self.items(), 8))
        more = ", ..." if len(self) > 8 else ""
        return f"Sequence(dim={self.dim}, {{{terms}{more}}})"

    # -- linear structure --------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, negate(other))

    def __neg__(self):
        return negate(self)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def l1_norm(self) -> float:
        return l1_norm(self)

    def prune(self, tol: float) -> "Sequence":
        """Drop entries with modulus at most ``tol``."""
        keep = np.abs(self._val) > tol
        return Sequence.from_arrays(self.dim, self._idx[keep], self._val[keep], canonical=True)

    def support_radius(self) -> int:
        """Largest absolute index component over the support (0 if empty)."""
        return int(np.abs(self._idx).max()) if len(self) else 0


def make_delta(d: int = 1) -> Sequence:
    """The unit element: 1 at the origin of Z^{2d}."""
    if d < 1:
        raise ValueError("d must be positive")
    return Sequence.from_arrays(d, np.zeros((1, 2 * d)), np.ones(1), canonical=True)


def _check_dims(*seqs):
    dims = {s.dim for s in seqs}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


def l1_norm(a: Sequence) -> float:
    return float(np.abs(a.values).sum())


def add(a: Sequence, b: Sequence) -> Sequence:
    _check_dims(a, b)
    return Sequence.from_arrays(
        a.dim, np.concatenate([a.indices, b.indices]), np.concatenate([a.values, b.values])
    )


def sum_sequences(seqs, dim=None) -> Sequence:
    """Sum of an iterable of sequences in a single accumulation pass."""
    seqs = list(seqs)
    if not seqs:
        if dim is None:
            raise ValueError("empty sum needs dim")
        return Sequence.zero(dim)
    _check_dims(*seqs)
    return Sequence.from_arrays(
        seqs[0].dim,
        np.concatenate([s.indices for s in seqs]),
        np.concatenate([s.values for s in seqs]),
    )


def scale(a: Sequence, c) -> Sequence:
    return Sequence.from_arrays(a.dim, a.indices, a.values * complex(c))


def negate(a: Sequence) -> Sequence:
    return Sequence.from_arrays(a.dim, a.indices, -a.values, canonical=True)


def _pairwise(a, b, phase=None):
    """Accumulate all products a_i * b_j at index a_i + b_j, chunked over a."""
    _check_dims(a, b)
    d = a.dim
    if not a or not b:
        return Sequence.zero(d)
    step = max(1, _PAIR_CHUNK // len(b))
    parts_idx, parts_val = [], []
    for start in range(0, len(a), step):
        ai, av = a.indices[start : start + step], a.values[start : start + step]
        idx = (ai[:, None, :] + b.indices[None, :, :]).reshape(-1, 2 * d)
        val = np.multiply.outer(av, b.values)
        if phase is not None:
            val = val * phase(ai, b.indices)
        idx, val = _accumulate(idx, val.reshape(-1))
        parts_idx.append(idx)
        parts_val.append(val)
    if len(parts_idx) == 1:
        return Sequence.from_arrays(d, parts_idx[0], parts_val[0], canonical=True)
    return Sequence.from_arrays(d, np.concatenate(parts_idx), np.concatenate(parts_val))


def convolve(a: Sequence, b: Sequence) -> Sequence:
    """Ordinary convolution ``(a * b)_{m,n} = sum a_{k,l} b_{m-k,n-l}``."""
    return _pairwise(a, b)


def twisted_convolve(a: Sequence, b: Sequence, tp: TwistParams) -> Sequence:
    """Twisted convolution with phase ``omega^{(m-k).l}``.

    For a term ``a_{k,l} b_{k',l'}`` landing at ``(k+k', l+l')`` the phase is
    ``omega^{k'.l}``.
    """
    _check_dims(a, b)
    if a.dim != tp.dim:
        raise ValueError(f"sequence dim {a.dim} does not match twist dim {tp.dim}")
    if tp.p == 1:
        return _pairwise(a, b)
    d = a.dim

    def phase(ai, bi):
        expo = np.einsum("jd,id->ij", bi[:, :d], ai[:, d:])
        return tp.omega_power(expo)

    return _pairwise(a, b, phase)


def _coset_mask(a, r, s, p):
    target = np.array(tuple(r) + tuple(s), dtype=np.int64)
    return (np.mod(a.indices, p) == target).all(axis=1)


def coset_restrict(a: Sequence, r, s, p: int) -> Sequence:
    """Restriction ``a^{r,s}`` to the coset ``(r + pZ^d) x (s + pZ^d)``."""
    r = _as_vector(r, a.dim)
    s = _as_vector(s, a.dim)
    if any(not 0 <= x < p for x in r + s):
        raise ValueError(f"coset representatives {r}, {s} not in [0, {p})")
    keep = _coset_mask(a, r, s, p)
    return Sequence.from_arrays(a.dim, a.indices[keep], a.values[keep], canonical=True)


def coset_twisted_convolve(a: Sequence, b: Sequence, tp: TwistParams) -> Sequence:
    """Twisted convolution assembled coset by coset from plain convolutions.

    ``(a # b)^{u,v} = sum_{r,s} a^{r,s} * b^{u-r,v-s} omega^{(u-r).s}``.
    Kept deliberately independent of :func:`twisted_convolve`.
    """
    _check_dims(a, b)
    if a.dim != tp.dim:
        raise ValueError(f"sequence dim {a.dim} does not match twist dim {tp.dim}")
    p = tp.p
    cosets = tp.ordering
    a_parts = {(r, s): coset_restrict(a, r, s, p) for r in cosets for s in cosets}
    b_parts = {(r, s): coset_restrict(b, r, s, p) for r in cosets for s in cosets}
    pieces = []
    for u in cosets:
        for v in cosets:
            for r in cosets:
                for s in cosets:
                    ur = tuple((x - y) % p for x, y in zip(u, r))
                    vs = tuple((x - y) % p for x, y in zip(v, s))
                    term = convolve(a_parts[r, s], b_parts[ur, vs])
                    if term:
                        w = tp.omega_power(sum(x * y for x, y in zip(ur, s)))
                        pieces.append(scale(term, w))
    return sum_sequences(pieces, dim=a.dim)
