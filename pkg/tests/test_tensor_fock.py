import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperqm.algebra import AlgebraElement, DimensionError, e
from hyperqm.fock import (
    Column,
    FockBasis,
    adjoint_deviation,
    anticommutator_on,
    apply,
    apply_sequence,
    beckett_check,
    beckett_sides,
    build_cstate,
    complex_linear_op,
    factorized_sp_multi,
    ladder_relations,
    quaternion_linear_op,
    right_q,
    right_z,
    sp_multi,
    z_projectors,
)
from hyperqm.scalar_products import sp_complex_elements
from hyperqm.tensor import (
    TensorElement,
    kron,
    slot_unit,
    tensor_conjugate,
    tensor_multiply,
    tensor_norm,
    trace,
)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
R2 = math.sqrt(2)


def el(dim):
    return arrays(np.float64, dim, elements=finite).map(AlgebraElement)


def t(a: AlgebraElement) -> TensorElement:
    return TensorElement(a.coeffs)


def unit2(i, j, dim=4):
    return TensorElement.unit((i, j), dim)


# -- Kronecker products --------------------------------------------------------


def test_kron_examples():
    assert trace(kron(t(e(1, 4)), t(e(1, 4)))) == 0
    assert kron(t(e(1, 4)), t(e(2, 4))).size == 16
    lhs = tensor_multiply(unit2(1, 0), unit2(0, 1))
    assert lhs == unit2(1, 1)


@settings(max_examples=100)
@given(st.sampled_from([2, 4, 8]).flatmap(lambda d: st.tuples(el(d), el(d), el(d), el(d))))
def test_kronecker_laws(quad):
    f1, g1, f2, g2 = quad
    lhs = tensor_multiply(kron(t(f1), t(g1)), kron(t(f2), t(g2)))
    assert lhs.max_abs_diff(kron(t(f1 * f2), t(g1 * g2))) < 1e-10
    fg = kron(t(f1), t(g1))
    assert trace(fg) == pytest.approx(f1.coeffs[0] * g1.coeffs[0], abs=1e-12)
    assert tensor_norm(fg) == pytest.approx(tensor_norm(t(f1)) * tensor_norm(t(g1)), rel=1e-12, abs=1e-12)
    assert tensor_conjugate(fg).max_abs_diff(kron(tensor_conjugate(t(f1)), tensor_conjugate(t(g1)))) == 0


def test_slot_units_and_shape_errors():
    assert slot_unit(3, 1, 8, 2) == TensorElement.unit((0, 3), 8)
    with pytest.raises(DimensionError):
        tensor_multiply(unit2(1, 0), TensorElement.unit((1, 0), 8))
    with pytest.raises(DimensionError):
        TensorElement(np.zeros((4, 8)))


# -- many-body states and projectors -----------------------------------------


def test_one_body_cstate():
    f = AlgebraElement([0.5, -1.0, 2.0, 0.0])
    col = build_cstate([f])
    assert col[0].max_abs_diff(t(f) * (1 / R2)) < 1e-15
    assert col[1].max_abs_diff(t(f * e(1, 4)) * (1 / R2)) < 1e-15


def test_cstate_is_linear():
    f, g = AlgebraElement([1.0, 0.0, 2.0, -1.0]), AlgebraElement([0.0, 3.0, 0.0, 1.0])
    q1, q2 = AlgebraElement([0.0, 0.0, 1.0, 1.0]), AlgebraElement([1.0, 2.0, 0.0, 0.0])
    lhs = build_cstate([f * q1 + g * q2])
    assert lhs.max_abs_diff(build_cstate([f * q1]) + build_cstate([g * q2])) < 1e-14


def test_two_body_identity_cstate():
    col = build_cstate([e(0, 4), e(0, 4)])
    want = [unit2(0, 0), unit2(1, 0), unit2(0, 1), unit2(1, 1)]
    for block, w in zip(col.blocks, want):
        assert block == w * 0.5


def test_projector_examples():
    z = z_projectors(4, 1)
    assert z.z0 == TensorElement.unit((0,), 4) and z.z1 == TensorElement.unit((1,), 4)
    z = z_projectors(4, 2)
    assert z.z0 == (unit2(0, 0) - unit2(1, 1)) * 0.5
    assert z.z1 == (unit2(1, 0) + unit2(0, 1)) * 0.5
    z = z_projectors(8, 3)
    u = lambda *i: TensorElement.unit(i, 8)  # noqa: E731
    assert z.z0 == (u(0, 0, 0) - u(1, 1, 0) - u(1, 0, 1) - u(0, 1, 1)) * 0.25
    assert z.z1 == (u(1, 0, 0) + u(0, 1, 0) + u(0, 0, 1) - u(1, 1, 1)) * 0.25


@pytest.mark.parametrize("dim", [4, 8])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_projector_algebra(dim, n):
    z = z_projectors(dim, n)
    assert tensor_multiply(z.z0, z.z0) == z.z0
    assert tensor_multiply(z.z1, z.z1) == -z.z0
    assert tensor_multiply(z.z0, z.z1) == z.z1
    assert tensor_multiply(z.z1, z.z0) == z.z1


def test_sp_multi_examples():
    psi = build_cstate([e(0, 4), e(0, 4)])
    assert sp_multi(psi, psi) == AlgebraElement([0.25, 0.0])
    got = sp_multi(build_cstate([e(2, 4), e(0, 4)]), build_cstate([e(3, 4), e(0, 4)]))
    assert got == AlgebraElement([0.0, -0.25])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 8]).flatmap(lambda d: st.tuples(el(d), el(d), el(d), el(d))))
def test_two_body_factorization(quad):
    f1, f2, g1, g2 = quad
    got = sp_multi(build_cstate([f1, f2]), build_cstate([g1, g2]))
    c1 = sp_complex_elements([f1], [g1]).restrict(2)
    c2 = sp_complex_elements([f2], [g2]).restrict(2)
    assert got.allclose((c1 * c2) * 0.25, atol=1e-10)


def test_three_body_factorization():
    rng = np.random.default_rng(3)
    fs = [AlgebraElement(rng.standard_normal(8)) for _ in range(3)]
    gs = [AlgebraElement(rng.standard_normal(8)) for _ in range(3)]
    got = sp_multi(build_cstate(fs), build_cstate(gs))
    assert got.allclose(factorized_sp_multi(fs, gs), atol=1e-12)


def test_beckett_examples():
    one = e(0, 4)
    assert beckett_check(one, one, one, one, e(0, 2))
    lhs, rhs = beckett_sides(one, one, one, one, e(1, 2))
    assert lhs == rhs == AlgebraElement([0.0, 0.25])


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([4, 8]).flatmap(lambda d: st.tuples(el(d), el(d), el(d), el(d))),
    st.floats(0, 2 * math.pi),
)
def test_beckett_property(quad, theta):
    assert beckett_check(*quad, AlgebraElement([math.cos(theta), math.sin(theta)]))


# -- block operators ----------------------------------------------------------


def test_block_operator_examples():
    psi = build_cstate([e(0, 4)])
    ident = complex_linear_op(e(0, 4), AlgebraElement.zero(4))
    assert ident(psi) == psi
    out = quaternion_linear_op(e(2, 4))(psi)
    assert out[0].max_abs_diff(t(e(2, 4)) * (1 / R2)) < 1e-15
    assert out[1].max_abs_diff(t(e(2, 4) * e(1, 4)) * (1 / R2)) < 1e-15
    op = complex_linear_op(AlgebraElement.zero(4), e(0, 4))
    z = e(1, 2)
    assert op(right_z(psi, z)).max_abs_diff(right_z(op(psi), z)) < 1e-12


def test_right_actions_match_cstate():
    f, q = AlgebraElement([1.0, 2.0, -1.0, 0.5]), AlgebraElement([0.3, -0.2, 0.9, 1.1])
    assert right_q(build_cstate([f]), q).max_abs_diff(build_cstate([f * q])) < 1e-14
    z = AlgebraElement([0.6, 0.8])
    assert right_z(build_cstate([f]), z).max_abs_diff(build_cstate([f * z.embed(4)])) < 1e-14


# -- occupation states and ladder operators ------------------------------------


def test_occupation_state_blocks():
    b = FockBasis(4)
    zero = TensorElement.zero(4, 2)
    assert b.vac1().column == Column((b.z0, zero, b.z1, zero))
    e2 = slot_unit(2, 0, 4, 2)
    assert b.occ1(2).column == Column((zero, tensor_multiply(e2, b.z0), zero, tensor_multiply(e2, b.z1)))
    b8 = FockBasis(8)
    zero8 = TensorElement.zero(8, 2)
    assert b8.vac2().column == Column((b8.z1, zero8, b8.z0, zero8))


def test_ladder_entries():
    b = FockBasis(4)
    e1 = slot_unit(1, 0, 4, 2)
    a1 = b.annihilation(1)
    row = a1.entries[0]
    assert row[1] == tensor_multiply(b.z0, e1) * -0.5
    assert row[3] == tensor_multiply(b.z1, e1) * 0.5
    assert row[0].is_zero() and row[2].is_zero()
    ad1 = b.creation(1)
    col = [r[0] for r in ad1.entries]
    assert col[1] == tensor_multiply(e1, b.z0) * 0.5
    assert col[3] == tensor_multiply(e1, b.z1) * 0.5
    assert col[0].is_zero() and col[2].is_zero()
    a5 = FockBasis(8).annihilation(5)
    assert a5.name == "a5" and a5.dim == 8


def test_apply_examples_dim4():
    b = FockBasis(4)
    assert apply(b.annihilation(1), b.vac1()).is_zero()
    assert apply(b.annihilation(2), b.occ1(1)).is_zero()
    assert apply(b.creation(1), b.vac1()) == b.occ1(1).column
    assert anticommutator_on(b, 1, b.vac1()) == b.vac1().column
    assert anticommutator_on(b, 3, b.occ1(3)) == b.occ1(3).column


def test_dim4_table_fails_only_on_the_pair_complementary_to_the_unit():
    # e2 e3 = e1, so a2 and a3 connect occ1:3 and occ1:2 through the unit
    for unit, pair in ((1, (2, 3)), (2, (1, 3)), (3, (1, 2))):
        bad = [r.text for r in ladder_relations(FockBasis(4, unit=unit)) if not r.holds]
        i, j = pair
        assert bad == [f"a{i} occ1:{j} = 0", f"a{j} occ1:{i} = 0"]


def test_default_octonion_basis_misses_the_sector_change():
    b = FockBasis(8)
    assert apply(b.annihilation(4), b.occ1(1)).is_zero()
    assert anticommutator_on(b, 6, b.vac2()) != b.vac2().column


def test_octonion_table_holds_with_unit_e7():
    b = FockBasis(8, unit=7, vac2_sign=-1)
    assert b.identify(apply(b.annihilation(4), b.occ1(1))) == "vac2"
    assert b.identify(apply(b.annihilation(1), b.occ1(4))) == "-vac2"
    assert anticommutator_on(b, 6, b.vac2()) == b.vac2().column
    rels = ladder_relations(b)
    assert len(rels) == 260
    assert all(r.holds for r in rels)


def test_apply_sequence_order_and_parsing():
    b = FockBasis(4)
    col = apply_sequence([b.operator("adag2"), b.operator("a2")], b.vac1())
    assert col == b.vac1().column
    assert b.identify(col) == "vac1"
    assert b.state("occ1:3").label == "occ1:3"
    with pytest.raises(ValueError):
        b.operator("b2")
    with pytest.raises(IndexError):
        b.operator("a4")
    with pytest.raises(DimensionError):
        b.state("vac2")
    with pytest.raises(DimensionError):
        FockBasis(2)


@pytest.mark.parametrize("dim,unit,sign", [(4, 1, 1), (8, 1, 1), (8, 7, -1)])
def test_creation_is_adjoint_on_occupation_states(dim, unit, sign):
    b = FockBasis(dim, unit=unit, vac2_sign=sign)
    states = b.states()
    for i in range(1, dim):
        for s in states:
            for u in states:
                assert adjoint_deviation(b, i, s, u) < 1e-12


def test_creation_adjointness_on_generic_columns():
    rng = np.random.default_rng(11)

    def col(dim):
        return Column(tuple(TensorElement(rng.standard_normal((dim, dim))) for _ in range(4)))

    b4 = FockBasis(4)
    assert max(adjoint_deviation(b4, i, col(4), col(4)) for i in (1, 2, 3)) < 1e-12
    # nonassociative blocks break the relation away from the occupation basis
    b8 = FockBasis(8)
    assert max(adjoint_deviation(b8, i, col(8), col(8)) for i in range(1, 8)) > 1e-3
