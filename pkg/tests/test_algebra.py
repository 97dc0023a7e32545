import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperqm.algebra import (
    MULT_INDEX,
    MULT_SIGN,
    SEED_TRIPLES,
    AlgebraElement,
    DimensionError,
    associator,
    check_hurwitz_dimension,
    compose_octonion,
    conjugate,
    decompose_octonion,
    e,
    moufang_check,
    multiply,
    norm,
    product,
    scalar_part,
    structure_constants,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def elements(dim):
    return arrays(np.float64, dim, elements=finite).map(AlgebraElement)


def units(dim):
    return (
        arrays(np.float64, dim, elements=finite)
        .filter(lambda v: np.linalg.norm(v) > 1e-3)
        .map(lambda v: AlgebraElement(v / np.linalg.norm(v)))
    )


# -- tables -------------------------------------------------------------------


def test_table_from_fano_lines():
    for i, j, k in SEED_TRIPLES:
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            assert multiply(e(a), e(b)) == e(c)
            assert multiply(e(b), e(a)) == -e(c)


@pytest.mark.parametrize("i,j,want", [(1, 2, e(3)), (4, 7, e(1)), (1, 1, -e(0))])
def test_product_examples(i, j, want):
    assert multiply(e(i), e(j)) == want


def test_shift_by_three_rule():
    for i in (1, 2, 3):
        assert e(i + 3) * e(7) == e(i)
        assert e(i) * e(7) == -e(i + 3)


def test_subalgebra_tables_are_restrictions():
    for small in (1, 2, 4):
        np.testing.assert_array_equal(MULT_INDEX[small], MULT_INDEX[8][:small, :small])
        np.testing.assert_array_equal(MULT_SIGN[small], MULT_SIGN[8][:small, :small])
    assert e(1, 4) * e(2, 4) == e(3, 4)
    assert e(1, 2) * e(1, 2) == -e(0, 2)


def test_every_basis_product_is_a_signed_unit():
    idx, sign = MULT_INDEX[8], MULT_SIGN[8]
    for i in range(8):
        assert sorted(idx[i]) == list(range(8))
        assert set(np.unique(sign[i])) <= {-1, 1}


def test_structure_constants_antisymmetric_and_match_table():
    f = structure_constants(8)
    for p in itertools.permutations(range(3)):
        sgn = np.linalg.det(np.eye(3)[list(p)])
        np.testing.assert_array_equal(f.transpose(p), sgn * f)
    assert f[1, 4, 6] == 1  # f_257
    assert structure_constants(4)[0, 1, 2] == 1


# -- small operations ----------------------------------------------------------


@pytest.mark.parametrize("n,want", [(3, True), (0, True), (1, True), (7, True), (5, False), (8, False)])
def test_hurwitz_dimension(n, want):
    assert check_hurwitz_dimension(n) is want


def test_conjugate_examples():
    assert conjugate(e(0)) == e(0)
    assert conjugate(e(1)) == -e(1)
    assert conjugate(e(0) + 2 * e(5)) == e(0) - 2 * e(5)


def test_scalar_part_and_norm_examples():
    assert scalar_part(e(0)) == 1
    assert scalar_part(e(3)) == 0
    assert scalar_part(2 * e(0) - 5 * e(7)) == 2
    assert norm(e(0)) == 1
    assert norm(3 * e(0) + 4 * e(2)) == 25
    assert norm(AlgebraElement.zero(8)) == 0


def test_associator_examples():
    assert associator(e(1, 4), e(2, 4), e(3, 4)) == AlgebraElement.zero(4)
    assert associator(e(1), e(2), e(4)) == -2 * e(5)
    x, y = e(3) + e(6), e(2) - 0.5 * e(7)
    assert associator(e(0), x, y) == AlgebraElement.zero(8)


def test_moufang_examples():
    assert moufang_check(e(1), e(2), e(4))
    assert moufang_check(e(0), e(3) + e(5), e(6))


def test_decompose_examples():
    psi1, psi2 = decompose_octonion(e(0))
    assert psi1 == e(0, 4) and psi2 == AlgebraElement.zero(4)
    psi1, psi2 = decompose_octonion(e(7))
    assert psi1 == AlgebraElement.zero(4) and psi2 == e(0, 4)
    psi1, psi2 = decompose_octonion(e(4))
    assert psi1 == AlgebraElement.zero(4) and psi2 == -e(1, 4)
    assert compose_octonion(psi1, psi2) == e(4)


def test_product_is_left_associated():
    assert product(e(1), e(2), e(4)) == multiply(multiply(e(1), e(2)), e(4))
    assert product(e(1), e(2), e(4)) != multiply(e(1), multiply(e(2), e(4)))


def test_dimension_errors():
    with pytest.raises(DimensionError):
        AlgebraElement([1.0, 2.0, 3.0])
    with pytest.raises(DimensionError):
        e(1, 4) * e(1, 8)
    with pytest.raises(DimensionError):
        decompose_octonion(e(1, 4))
    with pytest.raises(ValueError):
        AlgebraElement([np.nan, 0.0])


def test_json_round_trip_and_embedding():
    a = AlgebraElement([1.0, -2.0, 0.5, 3.0])
    assert AlgebraElement.from_json(a.to_json()) == a
    with pytest.raises(DimensionError):
        AlgebraElement.from_json({"dim": 8, "coeffs": [1, 0, 0, 0]})
    assert a.embed(8).restrict(4) == a
    assert (a.embed(8) * e(1)).restrict(4) == a * e(1, 4)


# -- properties ---------------------------------------------------------------


@settings(max_examples=200)
@given(st.sampled_from([1, 2, 4, 8]).flatmap(lambda d: st.tuples(elements(d), elements(d))))
def test_norm_is_multiplicative(pair):
    a, b = pair
    lhs, rhs = norm(a * b), norm(a) * norm(b)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, rhs)


@settings(max_examples=200)
@given(units(8), units(8), units(8))
def test_moufang_on_units(a, x, y):
    assert moufang_check(a, x, y)


@given(elements(8), elements(8))
def test_alternative_laws(a, b):
    assert associator(a, a, b).allclose(AlgebraElement.zero(8), atol=1e-9)
    assert associator(a, b, b).allclose(AlgebraElement.zero(8), atol=1e-9)


@given(elements(4), elements(4), elements(4))
def test_quaternions_associate(a, b, c):
    assert associator(a, b, c).allclose(AlgebraElement.zero(4), atol=1e-9)


@given(elements(8), elements(8))
def test_conjugation_reverses_products(a, b):
    assert conjugate(a * b).allclose(conjugate(b) * conjugate(a), atol=1e-9)


@given(elements(8))
def test_conjugate_product_is_norm(a):
    assert (conjugate(a) * a).allclose(norm(a) * e(0), atol=1e-9)


@given(elements(8))
def test_decomposition_round_trip(a):
    assert compose_octonion(*decompose_octonion(a)).allclose(a, atol=1e-12)
