import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperqm.algebra import AlgebraElement, DimensionError, e
from hyperqm.scalar_products import (
    StateVector,
    bracket,
    evaluate,
    real_projection_octonion,
    sp_complex,
    sp_complex_moufang,
    sp_octonion,
    sp_quaternion,
    sp_quaternion_of_octonions,
    sp_real,
    sp_real_projection_octonion,
    sp_real_projection_quaternion,
    transform_u2,
    u2_invariance_check,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def sv(*els):
    return StateVector.of(*els)


def states(dim, modes=2):
    return arrays(np.float64, (modes, dim), elements=finite).map(StateVector)


def unit_quaternions():
    return (
        arrays(np.float64, 4, elements=finite)
        .filter(lambda v: np.linalg.norm(v) > 1e-3)
        .map(lambda v: AlgebraElement(v / np.linalg.norm(v)))
    )


phases = st.floats(0, 2 * math.pi).map(lambda t: AlgebraElement([math.cos(t), math.sin(t)]))


# -- examples -----------------------------------------------------------------


def test_bracket_examples():
    assert bracket(sv(e(2, 4)), sv(e(3, 4))) == -e(1, 4)
    assert bracket(sv(e(0, 4)), sv(e(0, 4))) == e(0, 4)
    assert bracket(sv(e(1, 4), e(0, 4)), sv(e(1, 4), e(0, 4))) == 2 * e(0, 4)


def test_sp_real_examples():
    assert sp_real(sv(e(1, 4)), sv(e(1, 4))) == 1
    assert sp_real(sv(e(1, 4)), sv(e(2, 4))) == 0
    assert sp_real(sv(2 * e(0, 4) + e(3, 4)), sv(e(0, 4) - e(3, 4))) == 1


def test_real_projection_examples():
    assert sp_real_projection_quaternion(sv(e(1, 4)), sv(e(1, 4))) == 1
    assert sp_real_projection_quaternion(sv(e(0, 4)), sv(e(2, 4))) == 0
    assert sp_real_projection_octonion(sv(e(0)), sv(e(0))) == pytest.approx(1, abs=1e-15)
    assert sp_real_projection_octonion(sv(e(5)), sv(e(5))) == pytest.approx(1, abs=1e-15)
    assert sp_real_projection_octonion(sv(e(1)), sv(e(2))) == pytest.approx(0, abs=1e-15)


def test_octonion_projection_is_purely_real():
    rng = np.random.default_rng(7)
    for _ in range(50):
        f, g = StateVector(rng.standard_normal((2, 8))), StateVector(rng.standard_normal((2, 8)))
        p = real_projection_octonion(f, g).coeffs
        assert p[0] == pytest.approx(sp_real(f, g), abs=1e-12)
        assert np.max(np.abs(p[1:])) < 1e-12


def test_sp_complex_examples():
    assert sp_complex(sv(e(2, 4)), sv(e(3, 4))) == -e(1, 4)
    assert sp_complex(sv(e(2, 4)), sv(e(2, 4))) == e(0, 4)
    assert sp_complex(sv(e(1, 4)), sv(e(0, 4))) == -e(1, 4)


def test_sp_quaternion_examples():
    q = AlgebraElement([0.5, -1.0, 2.0, 0.25])
    assert sp_quaternion(sv(e(2, 4)), sv(e(3, 4))) == -e(1, 4)
    assert sp_quaternion(sv(e(0, 4)), sv(q)) == q
    assert sp_quaternion(sv(e(1, 4)), sv(e(1, 4))) == e(0, 4)


def test_quaternion_of_octonions_examples():
    assert sp_quaternion_of_octonions(sv(e(0)), sv(e(0))) == e(0, 4)
    assert sp_quaternion_of_octonions(sv(e(7)), sv(e(7))) == e(0, 4)
    assert sp_quaternion_of_octonions(sv(e(1)), sv(e(2))) == -e(3, 4)


def test_sp_octonion_examples():
    assert sp_octonion(sv(e(4)), sv(e(4))) == e(0)
    assert sp_octonion(sv(e(0)), sv(e(6))) == e(6)
    assert sp_octonion(sv(e(2)), sv(e(5))) == -e(7)


def test_u2_examples():
    f, g = sv(e(1, 4)), sv(e(3, 4))
    assert u2_invariance_check(f, g, e(0, 4), e(0, 2))
    assert u2_invariance_check(f, g, e(2, 4), e(0, 2))
    with pytest.raises(ValueError):
        u2_invariance_check(f, g, 2 * e(0, 4), e(0, 2))
    with pytest.raises(ValueError):
        u2_invariance_check(f, g, e(0, 4), e(2, 4))


def test_preconditions():
    with pytest.raises(DimensionError):
        sp_octonion(sv(e(1, 4)), sv(e(1, 4)))
    with pytest.raises(DimensionError):
        sp_real_projection_quaternion(sv(e(1)), sv(e(1)))
    with pytest.raises(DimensionError):
        sp_real(sv(e(1, 4)), sv(e(1, 4), e(0, 4)))
    with pytest.raises(DimensionError):
        StateVector.from_json({"dim": 8, "modes": [[0, 1, 0, 0]]})


def test_evaluate_dispatch():
    assert evaluate("real", sv(e(1, 4)), sv(e(1, 4))) == AlgebraElement([1.0])
    assert evaluate("complex", sv(e(2, 4)), sv(e(3, 4))) == -e(1, 4)
    with pytest.raises(ValueError):
        evaluate("bogus", sv(e(1, 4)), sv(e(1, 4)))


def test_state_json_round_trip():
    f = StateVector([[1.0, 0.0, 2.0, -1.0], [0.0, 0.5, 0.0, 0.0]])
    back = StateVector.from_json(f.to_json())
    np.testing.assert_array_equal(back.modes, f.modes)


# -- properties ---------------------------------------------------------------


@given(states(4))
def test_quaternion_projection_equals_trace(f):
    g = StateVector(np.roll(f.modes, 1, axis=1))
    assert sp_real_projection_quaternion(f, g) == pytest.approx(sp_real(f, g), abs=1e-10)


@settings(max_examples=150)
@given(st.sampled_from([2, 4, 8]).flatmap(lambda d: st.tuples(states(d), states(d))))
def test_complex_forms_agree(pair):
    f, g = pair
    assert sp_complex(f, g).allclose(sp_complex_moufang(f, g), atol=1e-10)


@settings(max_examples=150)
@given(st.sampled_from([4, 8]).flatmap(lambda d: st.tuples(states(d), states(d))), phases)
def test_complex_product_right_z_linear(pair, z):
    f, g = pair
    zz = z.embed(f.dim)
    lhs = sp_complex(f, g.map_modes(lambda m: m * zz))
    assert lhs.allclose(sp_complex(f, g) * zz, atol=1e-9)


@given(st.sampled_from([4, 8]).flatmap(lambda d: st.tuples(states(d), states(d))))
def test_complex_product_hermitian_and_supported(pair):
    f, g = pair
    fg, gf = sp_complex(f, g).coeffs, sp_complex(g, f).coeffs
    assert np.all(fg[2:] == 0)
    assert fg[0] == pytest.approx(gf[0], abs=1e-10)
    assert fg[1] == pytest.approx(-gf[1], abs=1e-10)


@settings(max_examples=150)
@given(states(4), states(4), unit_quaternions(), phases)
def test_u2_invariance(f, g, q, z):
    assert u2_invariance_check(f, g, q, z, tol=1e-9)


@given(states(4), unit_quaternions())
def test_quaternion_product_invariant_under_left_units(f, q):
    qf = transform_u2(f, q, e(0, 4))
    assert sp_quaternion(qf, qf).allclose(sp_quaternion(f, f), atol=1e-9)
