"""Many-body states over Kronecker products, the projected complex scalar
product, and two-body fermionic occupation states with ladder operators.

Column layout: a state of N bodies is a column of ``2**N`` tensor blocks.
Block ``b`` carries a right factor ``e_u`` (the complex unit, ``e_1`` by
default) in every slot ``k`` whose bit ``k`` of ``b`` is set, so for N = 2
the order is ``f1 (x) f2``, ``f1 e1 (x) f2``, ``f1 (x) f2 e1``,
``f1 e1 (x) f2 e1``.

Block matrices act on columns by ``out[r] = sum_c op[r][c] * col[c]``, where
each operator entry is already a single tensor, so every product is a plain
left-associated pair product.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from hyperqm.algebra import AlgebraElement, DimensionError, _check_dim, e
from hyperqm.scalar_products import sp_complex_elements
from hyperqm.tensor import (
    TensorElement,
    kron,
    right_multiply_slot,
    slot_unit,
    tensor_conjugate,
    tensor_multiply,
    trace,
)

COMPLEX_UNIT = 1


@dataclass(frozen=True)
class Column:
    """An ordered column of tensor blocks sharing dim and slot count."""

    blocks: tuple[TensorElement, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise ValueError("a column needs at least one block")
        shape = blocks[0].coeffs.shape
        if any(b.coeffs.shape != shape for b in blocks):
            raise DimensionError("all blocks in a column must share a shape")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:
        return self.blocks[0].dim

    @property
    def n_slots(self) -> int:
        return self.blocks[0].n_slots

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def _check(self, other: "Column") -> None:
        if len(self) != len(other) or self.blocks[0].coeffs.shape != other.blocks[0].coeffs.shape:
            raise DimensionError("column shapes differ")

    def __add__(self, other):
        self._check(other)
        return Column(tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        self._check(other)
        return Column(tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self):
        return Column(tuple(-b for b in self.blocks))

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Column(tuple(b * scalar for b in self.blocks))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Column):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self.blocks, other.blocks))

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def max_abs_diff(self, other: "Column") -> float:
        self._check(other)
        return max(a.max_abs_diff(b) for a, b in zip(self.blocks, other.blocks))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "n_slots": self.n_slots,
            "blocks": [b.coeffs.tolist() for b in self.blocks],
        }


def _patterns(n: int) -> list[tuple[int, ...]]:
    """Binary-counter order of unit placements: bit k of b marks slot k."""
    return [tuple((b >> k) & 1 for k in range(n)) for b in range(2**n)]


def build_cstate(fs: Sequence[AlgebraElement], unit: int = COMPLEX_UNIT) -> Column:
    """Column representation of the product state ``f_1 (x) ... (x) f_N``.

    Normalized by ``2**(-N/2)``.
    """
    if not fs:
        raise ValueError("need at least one factor")
    dim = fs[0].dim
    if any(f.dim != dim for f in fs):
        raise DimensionError("all factors must share a dimension")
    u = e(unit, dim)
    scale = 2.0 ** (-len(fs) / 2)
    blocks = []
    for pattern in _patterns(len(fs)):
        factors = [f * u if bit else f for f, bit in zip(fs, pattern)]
        blocks.append(TensorElement.from_factors(factors) * scale)
    return Column(tuple(blocks))


@dataclass(frozen=True)
class ProjectorPair:
    z0: TensorElement
    z1: TensorElement

    @property
    def dim(self) -> int:
        return self.z0.dim

    @property
    def n_slots(self) -> int:
        return self.z0.n_slots


def z_projectors(dim: int, n: int, unit: int = COMPLEX_UNIT) -> ProjectorPair:
    """Generators of the complex subalgebra inside the N-fold product.

    Sum over all placements of ``k`` unit factors, weighted ``2**(1-N)``:
    even ``k`` go to ``Z0`` with sign ``(-1)**(k/2)``, odd ``k`` to ``Z1``
    with sign ``(-1)**((k-1)/2)``.
    """
    _check_dim(dim)
    if n < 1:
        raise ValueError(f"need at least one slot, got {n}")
    if not 1 <= unit < dim:
        raise ValueError(f"complex unit index {unit} out of range for dim {dim}")
    z0 = np.zeros((dim,) * n)
    z1 = np.zeros((dim,) * n)
    w = 2.0 ** (1 - n)
    for pattern in itertools.product((0, 1), repeat=n):
        k = sum(pattern)
        idx = tuple(unit * bit for bit in pattern)
        if k % 2 == 0:
            z0[idx] += w * (-1) ** (k // 2)
        else:
            z1[idx] += w * (-1) ** ((k - 1) // 2)
    return ProjectorPair(TensorElement(z0), TensorElement(z1))


def column_bracket(psi: Column, g: Column) -> TensorElement:
    """``1/2 * sum_b conj(psi_b) g_b``.

    The factor one half is the prefactor of the row-times-column form of
    the one-body complex product; it fixes the many-body normalization at
    ``2**(-N)`` times the product of the one-body complex products.
    """
    psi._check(g)
    out = TensorElement.zero(psi.dim, psi.n_slots)
    for a, b in zip(psi.blocks, g.blocks):
        out = out + tensor_multiply(tensor_conjugate(a), b)
    return out * 0.5


def project_complex(t: TensorElement, unit: int = COMPLEX_UNIT) -> AlgebraElement:
    """``e_0 Tr(t Z0) - e_1 Tr(t Z1)`` as an element of span{e_0, e_1}.

    The outer ``e_0, e_1`` pair is a separate complex number, unrelated to
    the units inside the tensor.
    """
    z = z_projectors(t.dim, t.n_slots, unit)
    re = trace(tensor_multiply(t, z.z0))
    im = -trace(tensor_multiply(t, z.z1))
    return AlgebraElement([re, im])


def sp_multi(psi: Column, g: Column, unit: int = COMPLEX_UNIT) -> AlgebraElement:
    """Complex scalar product of two many-body columns (a dim-2 element)."""
    if len(psi) != 2**psi.n_slots:
        raise DimensionError(f"expected {2 ** psi.n_slots} blocks, got {len(psi)}")
    return project_complex(column_bracket(psi, g), unit)


def complex_product(values: Sequence[AlgebraElement]) -> AlgebraElement:
    out = AlgebraElement([1.0, 0.0])
    for v in values:
        out = out * v
    return out


def factorized_sp_multi(fs: Sequence[AlgebraElement], gs: Sequence[AlgebraElement]) -> AlgebraElement:
    """``2**(-N)`` times the product of the one-body complex products."""
    vals = [AlgebraElement(sp_complex_elements([f], [g]).coeffs[:2]) for f, g in zip(fs, gs)]
    return complex_product(vals) * 2.0 ** (-len(fs))


def beckett_sides(
    f1: AlgebraElement,
    f2: AlgebraElement,
    g1: AlgebraElement,
    g2: AlgebraElement,
    z: AlgebraElement,
) -> tuple[AlgebraElement, AlgebraElement]:
    """Both sides of moving a complex phase from the first to the second body."""
    dim = f1.dim
    if z.dim == 2:
        z = z.embed(dim)
    if np.any(z.coeffs[2:]):
        raise ValueError("phase must lie in span{e_0, e_1}")
    psi = build_cstate([f1, f2])
    lhs = sp_multi(psi, build_cstate([g1 * z, g2]))
    rhs = sp_multi(psi, build_cstate([g1, g2 * z]))
    return lhs, rhs


def beckett_check(f1, f2, g1, g2, z, tol: float = 1e-9) -> bool:
    lhs, rhs = beckett_sides(f1, f2, g1, g2, z)
    return bool(np.max(np.abs(lhs.coeffs - rhs.coeffs)) <= tol)


# -- two-body occupation states and ladder operators -------------------------


@dataclass(frozen=True)
class OccupationState:
    label: str
    column: Column

    @property
    def dim(self) -> int:
        return self.column.dim


@dataclass(frozen=True)
class LadderOperator:
    kind: str
    index: int
    entries: tuple[tuple[TensorElement, ...], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.entries[0][0].dim

    @property
    def name(self) -> str:
        return f"{'adag' if self.kind == 'creation' else 'a'}{self.index}"


class FockBasis:
    """Two-body occupation states and ladder operators for dim 4 or 8.

    ``unit`` picks the imaginary unit the projectors are built from.
    ``vac2_sign`` fixes the lower block of the second vacuum
    ``(Z1, 0, vac2_sign * Z0, 0)``; the default +1 is the displayed form.
    """

    n_slots = 2

    def __init__(self, dim: int, unit: int = COMPLEX_UNIT, vac2_sign: int = 1):
        if dim not in (4, 8):
            raise DimensionError(f"occupation states need dim 4 or 8, got {dim}")
        if vac2_sign not in (1, -1):
            raise ValueError("vac2_sign must be +1 or -1")
        self.dim = dim
        self.unit = unit
        self.vac2_sign = vac2_sign
        z = z_projectors(dim, 2, unit)
        self.z0, self.z1 = z.z0, z.z1
        self._zero = TensorElement.zero(dim, 2)

    def _e(self, i: int) -> TensorElement:
        if not 1 <= i < self.dim:
            raise IndexError(f"mode index {i} out of range 1..{self.dim - 1}")
        return slot_unit(i, 0, self.dim, 2)

    def _col(self, *blocks) -> Column:
        return Column(tuple(self._zero if b is None else b for b in blocks))

    def vac1(self) -> OccupationState:
        return OccupationState("vac1", self._col(self.z0, None, self.z1, None))

    def occ1(self, i: int) -> OccupationState:
        ei = self._e(i)
        return OccupationState(
            f"occ1:{i}", self._col(None, tensor_multiply(ei, self.z0), None, tensor_multiply(ei, self.z1))
        )

    def vac2(self) -> OccupationState:
        return OccupationState("vac2", self._col(self.z1, None, self.z0 * self.vac2_sign, None))

    def occ2(self, i: int) -> OccupationState:
        ei = self._e(i)
        return OccupationState(
            f"occ2:{i}", self._col(None, tensor_multiply(ei, self.z1), None, -tensor_multiply(ei, self.z0))
        )

    def states(self) -> list[OccupationState]:
        out = [self.vac1()] + [self.occ1(i) for i in range(1, self.dim)]
        if self.dim == 8:
            out += [self.vac2()] + [self.occ2(i) for i in range(1, self.dim)]
        return out

    def state(self, label: str) -> OccupationState:
        name, _, idx = label.partition(":")
        if name in ("vac1", "vac2") and not idx:
            if name == "vac2" and self.dim != 8:
                raise DimensionError("second-sector states exist only for dim 8")
            return getattr(self, name)()
        if name in ("occ1", "occ2") and idx:
            if name == "occ2" and self.dim != 8:
                raise DimensionError("second-sector states exist only for dim 8")
            return getattr(self, name)(int(idx))
        raise ValueError(f"unknown occupation state {label!r}")

    def annihilation(self, i: int) -> LadderOperator:
        ei = self._e(i)
        z0e = tensor_multiply(self.z0, ei)
        z1e = tensor_multiply(self.z1, ei)
        o = self._zero
        rows = (
            (o, -z0e * 0.5, o, z1e * 0.5),
            (o, o, o, o),
            (o, -z1e * 0.5, o, -z0e * 0.5),
            (o, o, o, o),
        )
        return LadderOperator("annihilation", i, rows)

    def creation(self, i: int) -> LadderOperator:
        ei = self._e(i)
        ez0 = tensor_multiply(ei, self.z0)
        ez1 = tensor_multiply(ei, self.z1)
        o = self._zero
        rows = (
            (o, o, o, o),
            (ez0 * 0.5, o, -ez1 * 0.5, o),
            (o, o, o, o),
            (ez1 * 0.5, o, ez0 * 0.5, o),
        )
        return LadderOperator("creation", i, rows)

    def ladder(self, kind: str, i: int) -> LadderOperator:
        if kind in ("annihilation", "a"):
            return self.annihilation(i)
        if kind in ("creation", "adag"):
            return self.creation(i)
        raise ValueError(f"unknown ladder kind {kind!r}")

    def operator(self, name: str) -> LadderOperator:
        """Parse ``a<i>`` or ``adag<i>``."""
        for prefix in ("adag", "a"):
            if name.startswith(prefix) and name[len(prefix):].isdigit():
                return self.ladder(prefix, int(name[len(prefix):]))
        raise ValueError(f"bad operator name {name!r}; expected a<i> or adag<i>")

    def identify(self, col: Column, atol: float = 0.0) -> str | None:
        """Label of the basis state equal to ``col`` up to sign, '0' for zero."""
        if all(np.max(np.abs(b.coeffs)) <= atol for b in col.blocks):
            return "0"
        for s in self.states():
            if col.max_abs_diff(s.column) <= atol:
                return s.label
            if col.max_abs_diff(-s.column) <= atol:
                return "-" + s.label
        return None


def apply(op: LadderOperator, col: Column | OccupationState) -> Column:
    if isinstance(col, OccupationState):
        col = col.column
    if len(col) != len(op.entries) or op.dim != col.dim:
        raise DimensionError("operator and column shapes differ")
    out = []
    for row in op.entries:
        acc = TensorElement.zero(col.dim, col.n_slots)
        for entry, block in zip(row, col.blocks):
            if entry.is_zero() or block.is_zero():
                continue
            acc = acc + tensor_multiply(entry, block)
        out.append(acc)
    return Column(tuple(out))


def apply_sequence(ops: Sequence[LadderOperator], col: Column | OccupationState) -> Column:
    """Apply operators in the given order, first element acting first."""
    if isinstance(col, OccupationState):
        col = col.column
    for op in ops:
        col = apply(op, col)
    return col


def anticommutator_on(basis: FockBasis, i: int, state: OccupationState) -> Column:
    """``a_i (a_i^+ s) + a_i^+ (a_i s)``."""
    a, ad = basis.annihilation(i), basis.creation(i)
    return apply(a, apply(ad, state)) + apply(ad, apply(a, state))


def adjoint_deviation(basis: FockBasis, i: int, left: Column | OccupationState, right: Column | OccupationState) -> float:
    """Max difference between ``(l, a_i r)`` and ``(a_i^+ l, r)`` in the
    many-body complex product."""
    left = left.column if isinstance(left, OccupationState) else left
    right = right.column if isinstance(right, OccupationState) else right
    a, ad = basis.annihilation(i), basis.creation(i)
    lhs = sp_multi(left, apply(a, right), basis.unit)
    rhs = sp_multi(apply(ad, left), right, basis.unit)
    return float(np.max(np.abs(lhs.coeffs - rhs.coeffs)))


@dataclass(frozen=True)
class LadderRelation:
    """One expected identity ``lhs == rhs`` between two-body columns."""

    group: str
    text: str
    lhs: Column
    rhs: Column

    @property
    def deviation(self) -> float:
        return self.lhs.max_abs_diff(self.rhs)

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _sector_pair(i: int, j: int) -> bool:
    return abs(i - j) == 3


def ladder_relations(basis: FockBasis) -> list[LadderRelation]:
    """Every displayed occupation-number identity for ``basis.dim``.

    Dim 4 covers modes 1..3 with one vacuum.  Dim 8 covers modes 1..7, both
    sectors, the sector-changing pairs ``(i, i+3)`` and the anticommutator on
    the states each identity names.  Operators in a chain act right to left,
    so ``adag1 a4 occ1:1`` means ``adag1 (a4 occ1:1)``.
    """
    zero = Column(tuple(TensorElement.zero(basis.dim, 2) for _ in range(4)))
    modes = range(1, basis.dim)
    a, ad = basis.annihilation, basis.creation
    vac1 = basis.vac1().column
    occ1 = {i: basis.occ1(i).column for i in modes}
    out: list[LadderRelation] = []

    def rel(group, text, lhs, rhs):
        out.append(LadderRelation(group, text, lhs, rhs))

    octo = basis.dim == 8
    g_first = "first sector" if octo else "occupation table"
    for i in modes:
        rel(g_first, f"a{i} vac1 = 0", apply(a(i), vac1), zero)
        rel(g_first, f"adag{i} vac1 = occ1:{i}", apply(ad(i), vac1), occ1[i])
        rel(g_first, f"a{i} occ1:{i} = vac1", apply(a(i), occ1[i]), vac1)
        for j in modes:
            rel(g_first, f"adag{i} occ1:{j} = 0", apply(ad(i), occ1[j]), zero)
            if j != i and not (octo and _sector_pair(i, j)):
                rel(g_first, f"a{i} occ1:{j} = 0", apply(a(i), occ1[j]), zero)
    if not octo:
        for i in modes:
            for label, col in (("vac1", vac1), (f"occ1:{i}", occ1[i])):
                rel("anticommutator", f"{{a{i}, adag{i}}} {label} = {label}", anticommutator_on(basis, i, col), col)
        return out

    vac2 = basis.vac2().column
    occ2 = {i: basis.occ2(i).column for i in modes}
    for i in (1, 2, 3):
        rel("sector change", f"a{i + 3} occ1:{i} = vac2", apply(a(i + 3), occ1[i]), vac2)
        rel("sector change", f"a{i} occ1:{i + 3} = -vac2", apply(a(i), occ1[i + 3]), -vac2)
    for i in modes:
        rel("second sector", f"adag{i} vac2 = occ2:{i}", apply(ad(i), vac2), occ2[i])
        rel("second sector", f"a{i} vac2 = 0", apply(a(i), vac2), zero)
        rel("second sector", f"a{i} occ2:{i} = vac2", apply(a(i), occ2[i]), vac2)
        for j in modes:
            rel("second sector", f"adag{i} occ2:{j} = 0", apply(ad(i), occ2[j]), zero)
            if j != i and not _sector_pair(i, j):
                rel("second sector", f"a{i} occ2:{j} = 0", apply(a(i), occ2[j]), zero)
    for i in modes:
        for label, col in (("vac1", vac1), ("vac2", vac2), (f"occ1:{i}", occ1[i]), (f"occ2:{i}", occ2[i])):
            rel("anticommutator", f"{{a{i}, adag{i}}} {label} = {label}", anticommutator_on(basis, i, col), col)
    for i in (1, 2, 3):
        k = i + 3
        rel("sector change", f"a{i} occ2:{k} = vac1", apply(a(i), occ2[k]), vac1)
        rel("sector change", f"a{k} occ2:{i} = -vac1", apply(a(k), occ2[i]), -vac1)
        rel("sector change", f"adag{i} a{k} occ1:{i} = occ2:{i}", apply(ad(i), apply(a(k), occ1[i])), occ2[i])
        rel("sector change", f"adag{i} a{k} occ2:{i} = -occ1:{i}", apply(ad(i), apply(a(k), occ2[i])), -occ1[i])
        rel("sector change", f"adag{k} a{i} occ1:{k} = -occ2:{k}", apply(ad(k), apply(a(i), occ1[k])), -occ2[k])
        rel("sector change", f"adag{k} a{i} occ2:{k} = occ1:{k}", apply(ad(k), apply(a(i), occ2[k])), occ1[k])
    return out


# -- one-body block operators -------------------------------------------------


@dataclass(frozen=True)
class BlockOperator:
    """2x2 block operator on one-body columns; entries act by left multiplication."""

    entries: tuple[tuple[AlgebraElement, AlgebraElement], tuple[AlgebraElement, AlgebraElement]]

    def __call__(self, col: Column) -> Column:
        if len(col) != 2 or col.n_slots != 1:
            raise DimensionError("block operators act on one-body columns of two blocks")
        blocks = []
        for row in self.entries:
            acc = TensorElement.zero(col.dim, 1)
            for a, b in zip(row, col.blocks):
                if a.dim != col.dim:
                    raise DimensionError("operator entry dim differs from column dim")
                acc = acc + tensor_multiply(TensorElement(a.coeffs), b)
            blocks.append(acc)
        return Column(tuple(blocks))


def complex_linear_op(a11: AlgebraElement, a12: AlgebraElement) -> BlockOperator:
    if a11.dim != a12.dim:
        raise DimensionError("entries must share a dimension")
    return BlockOperator(((a11, a12), (-a12, a11)))


def quaternion_linear_op(a11: AlgebraElement) -> BlockOperator:
    return BlockOperator(((a11, AlgebraElement.zero(a11.dim)), (AlgebraElement.zero(a11.dim), a11)))


def right_z(col: Column, z: AlgebraElement) -> Column:
    """Right-multiply the first slot of every block by a complex phase.

    For one-body columns this is ``Psi(f) -> Psi(f z)``.
    """
    if z.dim == 2:
        z = z.embed(col.dim)
    if np.any(z.coeffs[2:]):
        raise ValueError("z must lie in span{e_0, e_1}")
    return Column(tuple(right_multiply_slot(b, z, 0) for b in col.blocks))


def right_q(col: Column, q: AlgebraElement, unit: int = COMPLEX_UNIT) -> Column:
    """One-body right action ``Psi(f) -> Psi(f q)`` for any ``q``.

    The lower block picks up ``-e_u q e_u`` instead of ``q``.
    """
    if len(col) != 2 or col.n_slots != 1:
        raise DimensionError("right_q acts on one-body columns")
    u = e(unit, col.dim)
    q_twisted = -((u * q) * u)
    upper = right_multiply_slot(col.blocks[0], q, 0)
    lower = right_multiply_slot(col.blocks[1], q_twisted, 0)
    return Column((upper, lower))


__all__ = [
    "Column",
    "FockBasis",
    "LadderOperator",
    "LadderRelation",
    "OccupationState",
    "ProjectorPair",
    "adjoint_deviation",
    "anticommutator_on",
    "apply",
    "apply_sequence",
    "beckett_check",
    "beckett_sides",
    "build_cstate",
    "column_bracket",
    "complex_linear_op",
    "factorized_sp_multi",
    "kron",
    "ladder_relations",
    "quaternion_linear_op",
    "right_q",
    "right_z",
    "sp_multi",
    "z_projectors",
]
