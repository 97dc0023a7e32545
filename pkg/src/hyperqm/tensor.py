"""Elements of the N-fold Kronecker product of one composition algebra.

A ``TensorElement`` with ``n_slots = N`` stores a real array of shape
``(dim,) * N``; entry ``[i_1, ..., i_N]`` is the coefficient of
``e_{i_1} (x) ... (x) e_{i_N}``.  Products factorize slot by slot::

    (f1 (x) g1)(f2 (x) g2) = (f1 f2) (x) (g1 g2)

Because every basis product is a signed basis unit, the product of two
tensors is evaluated over their nonzero entries only, which keeps the sparse
projector tensors cheap even at ``8**5`` components.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hyperqm.algebra import MULT_INDEX, MULT_SIGN, AlgebraElement, DimensionError, _check_dim


@dataclass(frozen=True, eq=False)
class TensorElement:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim < 1:
            raise ValueError("a tensor element needs at least one slot")
        if len(set(c.shape)) != 1:
            raise DimensionError(f"all slots must share one dimension, got shape {c.shape}")
        _check_dim(c.shape[0])
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n_slots(self) -> int:
        return self.coeffs.ndim

    @property
    def size(self) -> int:
        return self.coeffs.size

    @classmethod
    def zero(cls, dim: int, n_slots: int) -> "TensorElement":
        return cls(np.zeros((dim,) * n_slots))

    @classmethod
    def identity(cls, dim: int, n_slots: int) -> "TensorElement":
        c = np.zeros((dim,) * n_slots)
        c[(0,) * n_slots] = 1.0
        return cls(c)

    @classmethod
    def unit(cls, indices: Sequence[int], dim: int) -> "TensorElement":
        """The basis tensor ``e_{i_1} (x) ... (x) e_{i_N}``."""
        c = np.zeros((dim,) * len(indices))
        c[tuple(indices)] = 1.0
        return cls(c)

    @classmethod
    def from_factors(cls, factors: Sequence[AlgebraElement]) -> "TensorElement":
        if not factors:
            raise ValueError("need at least one factor")
        out = TensorElement(factors[0].coeffs)
        for f in factors[1:]:
            out = kron(out, TensorElement(f.coeffs))
        return out

    def _same_shape(self, other: "TensorElement") -> None:
        if self.coeffs.shape != other.coeffs.shape:
            raise DimensionError(f"shape mismatch: {self.coeffs.shape} vs {other.coeffs.shape}")

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._same_shape(other)
        return TensorElement(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._same_shape(other)
        return TensorElement(self.coeffs - other.coeffs)

    def __neg__(self):
        return TensorElement(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        if np.isscalar(other):
            return TensorElement(self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return TensorElement(self.coeffs * float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.coeffs.shape, self.coeffs.tobytes()))

    def __repr__(self):
        nz = np.argwhere(self.coeffs != 0)
        terms = [f"{self.coeffs[tuple(i)]:+g}*e{'e'.join(map(str, i))}" for i in nz[:8]]
        more = " ..." if len(nz) > 8 else ""
        return f"TensorElement[{self.dim}^{self.n_slots}]({' '.join(terms) or '0'}{more})"

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def max_abs_diff(self, other: "TensorElement") -> float:
        self._same_shape(other)
        return float(np.max(np.abs(self.coeffs - other.coeffs)))


def kron(f: TensorElement, g: TensorElement) -> TensorElement:
    """Kronecker product: the slots of ``g`` are appended after those of ``f``."""
    if f.dim != g.dim:
        raise DimensionError(f"dimension mismatch: {f.dim} vs {g.dim}")
    return TensorElement(np.multiply.outer(f.coeffs, g.coeffs))


def tensor_multiply(a: TensorElement, b: TensorElement) -> TensorElement:
    a._same_shape(b)
    dim, n = a.dim, a.n_slots
    ia = np.argwhere(a.coeffs != 0)
    ib = np.argwhere(b.coeffs != 0)
    out = np.zeros(a.size)
    if len(ia) == 0 or len(ib) == 0:
        return TensorElement(out.reshape(a.coeffs.shape))
    va = a.coeffs[tuple(ia.T)]
    vb = b.coeffs[tuple(ib.T)]
    vals = np.multiply.outer(va, vb)
    flat = np.zeros(vals.shape, dtype=np.int64)
    index, sign = MULT_INDEX[dim], MULT_SIGN[dim]
    for k in range(n):
        pa = ia[:, k][:, None]
        pb = ib[:, k][None, :]
        vals = vals * sign[pa, pb]
        flat = flat * dim + index[pa, pb]
    np.add.at(out, flat.ravel(), vals.ravel())
    return TensorElement(out.reshape(a.coeffs.shape))


def tensor_product(*factors: TensorElement) -> TensorElement:
    """Left-associated product of several tensors."""
    out = factors[0]
    for f in factors[1:]:
        out = tensor_multiply(out, f)
    return out


def tensor_conjugate(t: TensorElement) -> TensorElement:
    """Slotwise conjugation, so that ``conj(f (x) g) = conj(f) (x) conj(g)``."""
    signs = np.where(np.arange(t.dim) == 0, 1.0, -1.0)
    c = t.coeffs.copy()
    for k in range(t.n_slots):
        shape = [1] * t.n_slots
        shape[k] = t.dim
        c = c * signs.reshape(shape)
    return TensorElement(c)


def trace(t: TensorElement) -> float:
    """Coefficient of ``e_0 (x) ... (x) e_0``."""
    return float(t.coeffs[(0,) * t.n_slots])


def tensor_norm(t: TensorElement) -> float:
    return float(np.sum(t.coeffs**2))


def slot_unit(i: int, slot: int, dim: int, n_slots: int) -> TensorElement:
    """``1 (x) ... (x) e_i (x) ... (x) 1`` with ``e_i`` in position ``slot``."""
    idx = [0] * n_slots
    idx[slot] = i
    return TensorElement.unit(idx, dim)


def right_multiply_slot(t: TensorElement, a: AlgebraElement, slot: int) -> TensorElement:
    """Multiply slot ``slot`` of ``t`` on the right by ``a``, other slots untouched."""
    if a.dim != t.dim:
        raise DimensionError(f"dimension mismatch: {t.dim} vs {a.dim}")
    factor = [TensorElement.identity(t.dim, 1)] * t.n_slots
    factor[slot] = TensorElement(a.coeffs)
    out = factor[0]
    for f in factor[1:]:
        out = kron(out, f)
    return tensor_multiply(t, out)
