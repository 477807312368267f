import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcsurf.jets import (
    Jet,
    JetDomainError,
    JetOrderError,
    extract,
    jet_arith,
    jet_constant,
    jet_func,
    jet_variable,
    n_coeffs,
    wirtinger,
)


def test_variable_u_at_origin():
    j = jet_variable("u", 0.0, 3)
    c = j.coefficients()
    assert c[(0, 0)] == 0 and c[(1, 0)] == 1
    assert all(val == 0 for key, val in c.items() if key not in ((0, 0), (1, 0)))


def test_variable_v_at_two():
    c = jet_variable("v", 2.0, 2).coefficients()
    assert c[(0, 0)] == 2 and c[(0, 1)] == 1
    assert c[(1, 0)] == 0 and c[(2, 0)] == c[(1, 1)] == c[(0, 2)] == 0


def test_order_zero_variable():
    j = jet_variable("u", 1.0, 0)
    assert j.d.shape == (1,) and j.value == 1.0


def test_unknown_variable():
    with pytest.raises(ValueError):
        jet_variable("w", 0.0, 2)


def test_storage_size():
    for k in range(6):
        assert jet_constant(1.0, k).d.shape[-1] == (k + 1) * (k + 2) // 2 == n_coeffs(k)


def test_sinh_derivatives():
    s = jet_variable("u", 0.0, 3).sinh()
    assert [extract(s, i, 0) for i in range(4)] == pytest.approx([0, 1, 0, 1])


def test_reciprocal_identity():
    u = jet_variable("u", 0.3, 5)
    v = jet_variable("v", -0.2, 5)
    a = 2 + u * v + u.sin()
    one = jet_arith(a, jet_arith(jet_constant(1.0, 5), a, "/"), "*")
    assert one.value == pytest.approx(1.0)
    assert np.max(np.abs(one.d[1:])) < 1e-14


def test_sqrt_binomial():
    a = 1 + jet_variable("u", 0.0, 2)
    s = jet_func(a, "sqrt")
    assert [extract(s, i, 0) for i in range(3)] == pytest.approx([1, 0.5, -0.25])


def test_extract_examples():
    assert extract(jet_variable("u", 0.0, 4).sinh(), 3, 0) == pytest.approx(1)
    assert extract(jet_constant(5.0, 3), 0, 0) == 5
    uv = jet_variable("u", 0.7, 3) * jet_variable("v", -1.1, 3)
    assert extract(uv, 1, 1) == pytest.approx(1)


def test_extract_beyond_order():
    with pytest.raises(JetOrderError):
        extract(jet_variable("u", 0.0, 2), 2, 1)


def test_product_values_at_point():
    uv = jet_variable("u", 1.0, 2) * jet_variable("v", 2.0, 2)
    assert uv.value == 2
    assert extract(uv, 1, 0) == 2 and extract(uv, 0, 1) == 1 and extract(uv, 1, 1) == 1


@pytest.mark.parametrize("f", ["log", "sqrt"])
def test_domain_errors(f):
    a = jet_variable("u", 0.0, 2) - 1
    with pytest.raises(JetDomainError):
        jet_func(a, f)


def test_division_by_zero_constant():
    with pytest.raises(JetDomainError):
        jet_constant(1.0, 2) / jet_variable("u", 0.0, 2)
    with pytest.raises(JetDomainError):
        jet_variable("u", 1.0, 2) / 0.0


def test_real_powers_and_integer_pow():
    u = jet_variable("u", 0.0, 4)
    assert np.allclose((u**3).d, (u * u * u).d)
    with pytest.raises(TypeError):
        u**0.5
    p = jet_func(1 + u, "pow", 1.5)
    assert extract(p, 2, 0) == pytest.approx(1.5 * 0.5)


def test_wirtinger_examples():
    u = jet_variable("u", 0.4, 3)
    v = jet_variable("v", -0.1, 3)
    assert wirtinger(u, "z").value == pytest.approx(0.5)
    assert wirtinger(v, "z").value == pytest.approx(-0.5j)
    lap = 4 * wirtinger(wirtinger(u * u + v * v, "z"), "zbar")
    assert lap.value == pytest.approx(4)
    assert wirtinger(u, "z").order == 2


def test_wirtinger_order_zero():
    with pytest.raises(JetOrderError):
        wirtinger(jet_constant(1.0, 0), "z")


def test_mixed_order_truncates():
    a = jet_variable("u", 0.5, 5)
    b = jet_variable("v", 0.5, 3)
    c = a * b
    assert c.order == 3
    assert extract(c, 1, 1) == 1


def test_batched_vector_jets():
    u = jet_variable("u", 0.2, 3)
    v = jet_variable("v", 0.1, 3)
    x = Jet.stack([u.sinh(), v, u.cosh()])
    assert x.shape == (3,)
    assert np.allclose(x.value, [math.sinh(0.2), 0.1, math.cosh(0.2)])
    q = (x * x * np.array([1, 1, -1])).sum(axis=0)
    assert q.value == pytest.approx(math.sinh(0.2) ** 2 + 0.01 - math.cosh(0.2) ** 2)
    assert extract(q, 2, 0) == pytest.approx(0.0, abs=1e-14)  # sinh^2 - cosh^2 = -1
    assert extract(q, 0, 2) == pytest.approx(2.0)


def test_numpy_scalar_on_left_defers_to_jet():
    u = jet_variable("u", 0.0, 2)
    r = np.float64(2.0) * u
    assert isinstance(r, Jet) and extract(r, 1, 0) == 2


coeff = st.floats(-2, 2, allow_nan=False)


def _random_jet(vals, order):
    return Jet(order, np.array(vals[: n_coeffs(order)]))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 5),
    st.lists(coeff, min_size=21, max_size=21),
    st.lists(coeff, min_size=21, max_size=21),
    st.lists(coeff, min_size=21, max_size=21),
)
def test_ring_axioms(order, a, b, c):
    A, B, C = (_random_jet(x, order) for x in (a, b, c))
    assert np.allclose(((A + B) * C).d, (A * C + B * C).d, atol=1e-12)
    assert np.allclose((A * B).d, (B * A).d, atol=1e-12)
    assert np.allclose(((A * B) * C).d, (A * (B * C)).d, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.lists(coeff, min_size=21, max_size=21))
def test_wirtinger_commute_and_conjugate(order, a):
    A = _random_jet(a, order)
    if order >= 2:
        assert np.allclose(A.dz().dzb().d, A.dzb().dz().d)
    # for a real jet, conj(d_z A) = d_zbar A
    assert np.allclose(A.dz().conj().d, A.dzb().d)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.sampled_from(["exp", "sin", "cos", "sinh", "cosh"]))
def test_pure_u_matches_math_derivatives(u0, v0, f):
    j = jet_func(jet_variable("u", u0, 4), f)
    # derivatives of these functions cycle with period <= 4
    cyc = {
        "exp": [math.exp] * 5,
        "sin": [math.sin, math.cos, lambda x: -math.sin(x), lambda x: -math.cos(x), math.sin],
        "cos": [math.cos, lambda x: -math.sin(x), lambda x: -math.cos(x), math.sin, math.cos],
        "sinh": [math.sinh, math.cosh] * 2 + [math.sinh],
        "cosh": [math.cosh, math.sinh] * 2 + [math.cosh],
    }[f]
    for k in range(5):
        assert extract(j, k, 0) == pytest.approx(cyc[k](u0), abs=1e-13)
        if k:
            assert extract(j, 0, k) == 0
