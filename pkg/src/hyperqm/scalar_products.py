"""Scalar products on multi-mode hypercomplex state vectors.

A state is a finite list of modes, each an element of the same algebra.
Every product sums mode by mode, so a single mode reproduces the one-body
formulas.  ``e_1`` is the complex unit for all complex projections, and
``e_1 b e_1`` is always evaluated as ``e_1 (b e_1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hyperqm.algebra import (
    AlgebraElement,
    DimensionError,
    _check_dim,
    conj_arrays,
    conjugate,
    decompose_octonion,
    mul_arrays,
)


@dataclass(frozen=True, eq=False)
class StateVector:
    modes: np.ndarray  # shape (M, dim)

    def __post_init__(self):
        m = np.array(self.modes, dtype=float)
        if m.ndim == 1:
            m = m[None, :]
        if m.ndim != 2 or m.shape[0] < 1:
            raise ValueError("a state needs at least one mode")
        _check_dim(m.shape[1])
        if not np.all(np.isfinite(m)):
            raise ValueError("mode coefficients must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "modes", m)

    @property
    def dim(self) -> int:
        return self.modes.shape[1]

    @property
    def n_modes(self) -> int:
        return self.modes.shape[0]

    @classmethod
    def of(cls, *elements: AlgebraElement) -> "StateVector":
        return cls(np.stack([el.coeffs for el in elements]))

    @classmethod
    def from_json(cls, data: dict) -> "StateVector":
        sv = cls(data["modes"])
        if "dim" in data and int(data["dim"]) != sv.dim:
            raise DimensionError(f"declared dim {data['dim']} but modes have {sv.dim} coefficients")
        return sv

    def to_json(self) -> dict:
        return {"dim": self.dim, "modes": self.modes.tolist()}

    def mode(self, m: int) -> AlgebraElement:
        return AlgebraElement(self.modes[m])

    def map_modes(self, fn) -> "StateVector":
        return StateVector(np.stack([fn(self.mode(m)).coeffs for m in range(self.n_modes)]))


def _pair(f: StateVector, g: StateVector, dims=None) -> None:
    if f.dim != g.dim:
        raise DimensionError(f"dimension mismatch: {f.dim} vs {g.dim}")
    if f.n_modes != g.n_modes:
        raise DimensionError(f"mode count mismatch: {f.n_modes} vs {g.n_modes}")
    if dims is not None and f.dim not in dims:
        raise DimensionError(f"this product needs dim in {dims}, got {f.dim}")


def _unit(i: int, dim: int) -> np.ndarray:
    u = np.zeros(dim)
    u[i] = 1.0
    return u


def bracket(f: StateVector, g: StateVector) -> AlgebraElement:
    """``sum_m conj(f_m) g_m``."""
    _pair(f, g)
    return AlgebraElement(mul_arrays(conj_arrays(f.modes), g.modes).sum(axis=0))


def sp_real(f: StateVector, g: StateVector) -> float:
    _pair(f, g)
    return float(np.sum(f.modes * g.modes))


def _sandwich_sum(b: np.ndarray, units: range) -> np.ndarray:
    """``sum_i e_i (b e_i)``."""
    dim = b.shape[-1]
    total = np.zeros(dim)
    for i in units:
        u = _unit(i, dim)
        total += mul_arrays(u, mul_arrays(b, u))
    return total


def real_projection_quaternion(f: StateVector, g: StateVector) -> AlgebraElement:
    """``1/4 [b - sum_{i=1..3} e_i b e_i]``; real when evaluated exactly."""
    _pair(f, g, dims=(4,))
    b = bracket(f, g).coeffs
    return AlgebraElement(0.25 * (b - _sandwich_sum(b, range(1, 4))))


def sp_real_projection_quaternion(f: StateVector, g: StateVector) -> float:
    return float(real_projection_quaternion(f, g).coeffs[0])


def real_projection_octonion(f: StateVector, g: StateVector) -> AlgebraElement:
    """``b/3 + 1/12 [b - sum_{i=1..7} e_i (b e_i)]``, the full element."""
    _pair(f, g, dims=(8,))
    b = bracket(f, g).coeffs
    return AlgebraElement(b / 3.0 + (b - _sandwich_sum(b, range(1, 8))) / 12.0)


def sp_real_projection_octonion(f: StateVector, g: StateVector) -> float:
    return float(real_projection_octonion(f, g).coeffs[0])


def complex_projection(b: np.ndarray) -> np.ndarray:
    """``1/2 [b - e_1 (b e_1)]``."""
    b = np.asarray(b, dtype=float)
    u = _unit(1, b.shape[-1])
    return 0.5 * (b - mul_arrays(u, mul_arrays(b, u)))


def sp_complex(f: StateVector, g: StateVector) -> AlgebraElement:
    """Complex scalar product; the result lives in span{e_0, e_1} of f.dim."""
    _pair(f, g, dims=(2, 4, 8))
    return AlgebraElement(complex_projection(bracket(f, g).coeffs))


def sp_complex_moufang(f: StateVector, g: StateVector) -> AlgebraElement:
    """Same product via the row-column form ``1/2 sum_m [conj(f) g + (-e_1 conj(f))(g e_1)]``.

    Agrees with :func:`sp_complex` because of the Moufang identity with ``a = e_1``.
    """
    _pair(f, g, dims=(2, 4, 8))
    u = _unit(1, f.dim)
    fb = conj_arrays(f.modes)
    direct = mul_arrays(fb, g.modes)
    twisted = mul_arrays(-mul_arrays(np.broadcast_to(u, fb.shape), fb), mul_arrays(g.modes, u))
    return AlgebraElement(0.5 * (direct + twisted).sum(axis=0))


def sp_complex_elements(fs: Sequence[AlgebraElement], gs: Sequence[AlgebraElement]) -> AlgebraElement:
    return sp_complex(StateVector.of(*fs), StateVector.of(*gs))


def sp_quaternion(f: StateVector, g: StateVector) -> AlgebraElement:
    _pair(f, g, dims=(4,))
    return bracket(f, g)


def sp_quaternion_of_octonions(f: StateVector, g: StateVector) -> AlgebraElement:
    """``sum_m conj(psi1) psi3 + conj(psi4) psi2`` with ``f = psi1 + psi2 e_7``, ``g = psi3 + psi4 e_7``."""
    _pair(f, g, dims=(8,))
    total = AlgebraElement.zero(4)
    for m in range(f.n_modes):
        psi1, psi2 = decompose_octonion(f.mode(m))
        psi3, psi4 = decompose_octonion(g.mode(m))
        total = total + conjugate(psi1) * psi3
        total = total + conjugate(psi4) * psi2
    return total


def sp_octonion(f: StateVector, g: StateVector) -> AlgebraElement:
    _pair(f, g, dims=(8,))
    return bracket(f, g)


def transform_u2(f: StateVector, q: AlgebraElement, z: AlgebraElement) -> StateVector:
    """Every mode ``f_m -> (q f_m) z``."""
    return f.map_modes(lambda fm: (q * fm) * z)


def u2_invariance_check(
    f: StateVector,
    g: StateVector,
    q: AlgebraElement,
    z: AlgebraElement,
    tol: float = 1e-9,
    unit_tol: float = 1e-12,
) -> bool:
    _pair(f, g, dims=(4,))
    if z.dim == 2:
        z = z.embed(4)
    if q.dim != 4 or z.dim != 4:
        raise DimensionError("q and z must be quaternions")
    if abs(float(q.coeffs @ q.coeffs) - 1.0) > unit_tol:
        raise ValueError("q must have unit norm")
    if np.any(z.coeffs[2:] != 0) or abs(float(z.coeffs @ z.coeffs) - 1.0) > unit_tol:
        raise ValueError("z must be a unit element of span{e_0, e_1}")
    before = sp_complex(f, g)
    after = sp_complex(transform_u2(f, q, z), transform_u2(g, q, z))
    return bool(np.max(np.abs(before.coeffs - after.coeffs)) <= tol)


PRODUCTS = {
    "real": sp_real,
    "complex": sp_complex,
    "quaternion": sp_quaternion,
    "quaternion-of-octonions": sp_quaternion_of_octonions,
    "octonion": sp_octonion,
}


def evaluate(name: str, f: StateVector, g: StateVector) -> AlgebraElement:
    """Evaluate a named product, always returning an algebra element."""
    try:
        fn = PRODUCTS[name]
    except KeyError:
        raise ValueError(f"unknown product {name!r}; choose from {sorted(PRODUCTS)}") from None
    out = fn(f, g)
    if isinstance(out, float):
        return AlgebraElement([out])
    return out
