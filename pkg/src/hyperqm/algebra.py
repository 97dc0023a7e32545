"""Arithmetic in the four normed division algebras: reals, complex numbers,
quaternions and octonions.

Elements are stored as real coefficient vectors over the basis
``e_0 .. e_{d-1}``.  Imaginary units follow the oriented triples

    (1 2 3), (4 7 1), (2 5 7), (1 6 5), (6 2 4), (5 4 3), (7 3 6)

meaning ``e_i e_j = e_k`` for every cyclic rotation of a triple, and
``e_j e_i = -e_k``.  The complex and quaternion tables are the restrictions
of the octonion table to ``e_0, e_1`` and ``e_0 .. e_3``, so an element of a
smaller algebra embeds into a bigger one by zero padding.

Products of longer chains are always evaluated left to right unless the
caller parenthesizes explicitly; octonions are not associative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DIMS = (1, 2, 4, 8)

SEED_TRIPLES = ((1, 2, 3), (4, 7, 1), (2, 5, 7), (1, 6, 5), (6, 2, 4), (5, 4, 3), (7, 3, 6))

# Signed index of e_i e_j for i, j = 1..7 (row i, column j); the diagonal is
# -e_0 and is stored as 0 here.
_IMAGINARY_TABLE = (
    (0, 3, -2, 7, -6, 5, -4),
    (-3, 0, 1, 6, 7, -4, -5),
    (2, -1, 0, -5, 4, 7, -6),
    (-7, -6, 5, 0, -3, 2, 1),
    (6, -7, -4, 3, 0, -1, 2),
    (-5, 4, -7, -2, 1, 0, 3),
    (4, 5, 6, -1, -2, -3, 0),
)


class DimensionError(ValueError):
    """Operands live in different algebras, or a dimension is not allowed."""


def check_hurwitz_dimension(n: int) -> bool:
    """True iff ``n(n-1)(n-3)(n-7) == 0``, i.e. a vector product exists in R^n."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return n * (n - 1) * (n - 3) * (n - 7) == 0


def _check_dim(dim: int) -> int:
    if dim not in DIMS:
        raise DimensionError(f"algebra dimension must be one of {DIMS}, got {dim}")
    return dim


def _tables_from_triples(triples: Iterable[tuple[int, int, int]]) -> tuple[np.ndarray, np.ndarray]:
    idx = np.zeros((8, 8), dtype=np.int64)
    sign = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        idx[0, i] = idx[i, 0] = i
        sign[0, i] = sign[i, 0] = 1
    for i in range(1, 8):
        idx[i, i] = 0
        sign[i, i] = -1
    for a, b, c in triples:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if sign[x, y] != 0 or sign[y, x] != 0:
                raise ValueError(f"triple {(a, b, c)} overlaps an earlier one at ({x}, {y})")
            idx[x, y] = idx[y, x] = z
            sign[x, y] = 1
            sign[y, x] = -1
    return idx, sign


def _tables_from_stored() -> tuple[np.ndarray, np.ndarray]:
    idx = np.zeros((8, 8), dtype=np.int64)
    sign = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        idx[0, i] = idx[i, 0] = i
        sign[0, i] = sign[i, 0] = 1
    for i in range(1, 8):
        for j in range(1, 8):
            entry = _IMAGINARY_TABLE[i - 1][j - 1]
            if i == j:
                idx[i, j], sign[i, j] = 0, -1
            else:
                idx[i, j], sign[i, j] = abs(entry), int(np.sign(entry))
    return idx, sign


def _self_check() -> tuple[np.ndarray, np.ndarray]:
    stored = _tables_from_stored()
    derived = _tables_from_triples(SEED_TRIPLES)
    if not (np.array_equal(stored[0], derived[0]) and np.array_equal(stored[1], derived[1])):
        raise RuntimeError("stored octonion table disagrees with the seed triples")
    return stored


_IDX8, _SIGN8 = _self_check()


def _structure_tensor(dim: int) -> np.ndarray:
    """``C[i, j, k]`` with ``e_i e_j = sum_k C[i, j, k] e_k``."""
    c = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            c[i, j, _IDX8[i, j]] = _SIGN8[i, j]
    return c


MULT_INDEX = {d: _IDX8[:d, :d].copy() for d in DIMS}
MULT_SIGN = {d: _SIGN8[:d, :d].copy() for d in DIMS}
STRUCTURE = {d: _structure_tensor(d) for d in DIMS}
for _arr in (*MULT_INDEX.values(), *MULT_SIGN.values(), *STRUCTURE.values()):
    _arr.setflags(write=False)


def structure_constants(dim: int) -> np.ndarray:
    """Completely antisymmetric ``f[i, j, k]`` over imaginary indices 1..dim-1.

    Returned with shape ``(dim-1,)*3`` and zero-based indices, so
    ``f[0, 1, 2]`` is ``f_123``.
    """
    _check_dim(dim)
    n = dim - 1
    f = np.zeros((n, n, n), dtype=np.int64)
    for i in range(1, dim):
        for j in range(1, dim):
            if i != j:
                f[i - 1, j - 1, MULT_INDEX[dim][i, j] - 1] = MULT_SIGN[dim][i, j]
    return f


def mul_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched product of coefficient arrays with trailing axis of length dim."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dim = a.shape[-1]
    if b.shape[-1] != dim:
        raise DimensionError(f"cannot multiply dim {dim} by dim {b.shape[-1]}")
    return np.einsum("...i,...j,ijk->...k", a, b, STRUCTURE[_check_dim(dim)])


def conj_arrays(a: np.ndarray) -> np.ndarray:
    out = -np.asarray(a, dtype=float)
    out[..., 0] *= -1
    return out


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A hypercomplex number of dimension 1, 2, 4 or 8."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        _check_dim(c.size)
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.size

    @classmethod
    def basis(cls, i: int, dim: int = 8) -> "AlgebraElement":
        _check_dim(dim)
        if not 0 <= i < dim:
            raise IndexError(f"basis index {i} out of range for dim {dim}")
        c = np.zeros(dim)
        c[i] = 1.0
        return cls(c)

    @classmethod
    def zero(cls, dim: int) -> "AlgebraElement":
        return cls(np.zeros(_check_dim(dim)))

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraElement":
        el = cls(data["coeffs"])
        if "dim" in data and int(data["dim"]) != el.dim:
            raise DimensionError(f"declared dim {data['dim']} but got {el.dim} coefficients")
        return el

    def to_json(self) -> dict:
        return {"dim": self.dim, "coeffs": [float(c) for c in self.coeffs]}

    def _same_dim(self, other: "AlgebraElement") -> None:
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same_dim(other)
        return AlgebraElement(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same_dim(other)
        return AlgebraElement(self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if np.isscalar(other):
            return AlgebraElement(self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.coeffs / float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.coeffs.tobytes()))

    def __repr__(self):
        terms = [f"{c:+g}*e{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return f"AlgebraElement[{self.dim}]({' '.join(terms) or '0'})"

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        self._same_dim(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= atol)

    def embed(self, dim: int) -> "AlgebraElement":
        """Zero-pad into a larger algebra."""
        _check_dim(dim)
        if dim < self.dim:
            raise DimensionError(f"cannot embed dim {self.dim} into dim {dim}")
        c = np.zeros(dim)
        c[: self.dim] = self.coeffs
        return AlgebraElement(c)

    def restrict(self, dim: int) -> "AlgebraElement":
        """Drop coefficients beyond ``dim``; they must already vanish."""
        _check_dim(dim)
        if np.any(self.coeffs[dim:] != 0):
            raise DimensionError(f"element has support outside e_0..e_{dim - 1}")
        return AlgebraElement(self.coeffs[:dim])


def e(i: int, dim: int = 8) -> AlgebraElement:
    """Shorthand for the basis unit ``e_i`` of the ``dim``-dimensional algebra."""
    return AlgebraElement.basis(i, dim)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return AlgebraElement(mul_arrays(a.coeffs, b.coeffs))


def product(*factors: AlgebraElement) -> AlgebraElement:
    """Left-associated product ``((f1 f2) f3) ...``."""
    if not factors:
        raise ValueError("empty product")
    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    return out


def conjugate(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(conj_arrays(a.coeffs))


def scalar_part(a: AlgebraElement) -> float:
    return float(a.coeffs[0])


def norm(a: AlgebraElement) -> float:
    """Squared Euclidean norm, which is multiplicative in these algebras."""
    return float(np.dot(a.coeffs, a.coeffs))


def associator(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> AlgebraElement:
    return multiply(multiply(a, b), c) - multiply(a, multiply(b, c))


def moufang_defect(a: AlgebraElement, x: AlgebraElement, y: AlgebraElement) -> float:
    """Max-abs of ``(a x)(y a) - (a (x y)) a``."""
    lhs = multiply(multiply(a, x), multiply(y, a))
    rhs = multiply(multiply(a, multiply(x, y)), a)
    return float(np.max(np.abs(lhs.coeffs - rhs.coeffs)))


def moufang_check(a: AlgebraElement, x: AlgebraElement, y: AlgebraElement, tol: float = 1e-12) -> bool:
    scale = 1.0 + norm(a) * np.sqrt(norm(x) * norm(y))
    return moufang_defect(a, x, y) <= tol * scale


def decompose_octonion(f: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    """Split an octonion as ``f = psi1 + psi2 e_7`` with quaternions psi1, psi2.

    With this table ``e_1 e_7 = -e_4``, ``e_2 e_7 = -e_5``, ``e_3 e_7 = -e_6``,
    so ``psi2 = f_7 - f_4 e_1 - f_5 e_2 - f_6 e_3``.
    """
    if f.dim != 8:
        raise DimensionError(f"expected an octonion, got dim {f.dim}")
    c = f.coeffs
    psi1 = AlgebraElement(c[:4])
    psi2 = AlgebraElement([c[7], -c[4], -c[5], -c[6]])
    return psi1, psi2


def compose_octonion(psi1: AlgebraElement, psi2: AlgebraElement) -> AlgebraElement:
    """Inverse of :func:`decompose_octonion`, computed by actual multiplication."""
    if psi1.dim != 4 or psi2.dim != 4:
        raise DimensionError("both halves must be quaternions")
    return psi1.embed(8) + multiply(psi2.embed(8), e(7, 8))


def random_elements(rng: np.random.Generator, dim: int, size: int | Sequence[int] = ()) -> np.ndarray:
    """Standard-normal coefficient arrays of shape ``(*size, dim)``."""
    size = (size,) if isinstance(size, int) else tuple(size)
    return rng.standard_normal((*size, _check_dim(dim)))


def random_unit(rng: np.random.Generator, dim: int) -> AlgebraElement:
    v = rng.standard_normal(_check_dim(dim))
    return AlgebraElement(v / np.linalg.norm(v))
