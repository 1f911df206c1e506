import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from _util import as_quaternion, random_in_ball, random_units
from slice_approx.exceptions import DomainError
from slice_approx.quaternion import I, J, K, ONE, Quaternion, qconj, qmul, qnorm, slice_compose, slice_decompose_array
from slice_approx.slice_functions import (
    CassiniSeries,
    ClosureSliceFunction,
    LaurentPolynomial,
    PowerSeries,
    RightPolynomial,
    SphereSliceFunction,
    cassini_to_polynomial,
    dump,
    evaluate,
    even_odd_defect,
    extend_from_slice,
    from_json,
    is_intrinsic,
    load,
    representation_formula,
    to_json,
)

coeff_arrays = st.integers(1, 8).flatmap(
    lambda n: arrays(np.float64, (n, 4), elements=st.floats(-2, 2, allow_nan=False))
)


def naive_eval(coeffs, q):
    """Oracle: sum of q**k * c_k with scalar quaternions."""
    q = as_quaternion(q)
    total = Quaternion()
    for k, c in enumerate(coeffs):
        total = total + (q ** k) * as_quaternion(c)
    return total


def test_power_series_example():
    f = PowerSeries([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert f(J) == ONE - K


def test_cassini_example():
    s = CassiniSeries(0.0, 1.0, [(1.0, 0.0)])
    assert s(Quaternion()) == ONE


@given(coeff_arrays, arrays(np.float64, (4,), elements=st.floats(-1.5, 1.5, allow_nan=False)))
def test_horner_matches_naive(coeffs, q):
    p = RightPolynomial(coeffs)
    want = naive_eval(coeffs, q)
    got = p(as_quaternion(q))
    assert (got - want).norm() <= 1e-12 * max(1.0, want.norm())


def test_polynomial_basics():
    p = RightPolynomial([[1, 0, 0, 0], [0, 0, 0, 0], [0, 2, 0, 0], [0, 0, 0, 0]])
    assert p.degree == 2
    assert p.coefficient(2) == 2 * I
    assert p.coefficient(9) == Quaternion()
    assert RightPolynomial.zero().degree == 0
    assert RightPolynomial.monomial(3, J)(I) == (I ** 3) * J
    assert (p + p)(J) == 2 * p(J)
    assert (p - p)(J) == Quaternion()
    assert p.truncate(1)(J) == ONE
    lam = Quaternion(0.5, 0, 1, 0)
    assert p.right_mul(lam)(K).isclose(p(K) * lam, 1e-14)
    shifted = p.shift(0.5)
    q = Quaternion(0.1, 0.2, -0.3, 0.4)
    assert shifted(q).isclose(p(q + 0.5), 1e-14)


def test_real_axis_values_are_alpha():
    f = RightPolynomial([[1, 2, 0, 0], [0, 0, 3, 0]])
    x = np.linspace(-1, 1, 5)
    a, b = f.alpha_beta(x, np.zeros_like(x))
    assert np.allclose(b, 0.0)
    assert np.allclose(a, evaluate(f, np.stack([x, 0 * x, 0 * x, 0 * x], axis=1)))


def test_power_series_radius():
    f = PowerSeries([[1, 0, 0, 0], [1, 0, 0, 0]], radius=1.0)
    assert f(Quaternion(0.5)).isclose(Quaternion(1.5))
    with pytest.raises(DomainError):
        f(Quaternion(0, 0, 2.0, 0))
    assert f.truncate(0).radius == 1.0
    with pytest.raises(ValueError):
        PowerSeries([[1, 0, 0, 0]], radius=0.0)


def test_laurent():
    f = LaurentPolynomial([[0, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0]])
    q = Quaternion(0.3, 0.4, 0.1, -0.2)
    assert f(q).isclose(q + q.inverse(), 1e-14)
    assert f.degrees == (1, 1)
    g = LaurentPolynomial([[0, 0, 0, 0]], [[0, 0, 0, 0], [0, 1, 0, 0]])
    assert g(q).isclose((q.inverse() ** 2) * I, 1e-13)
    assert g.degrees == (2, 0)
    with pytest.raises(DomainError):
        f(Quaternion())


def test_representation_formula_examples():
    c = Quaternion(1, 2, 3, 4)
    u = Quaternion(0, 0.6, 0.8, 0)
    assert representation_formula(c, c, J, u) == c
    a, b = Quaternion(1, 2, 0, 0), Quaternion(0, 0, 5, 1)
    assert representation_formula(a, b, J, J).isclose(a, 1e-15)
    assert representation_formula(I, -I, I, J).isclose(J, 1e-15)


def test_representation_formula_on_series(rng):
    for _ in range(5):
        f = RightPolynomial(rng.normal(size=(7, 4)))
        q = random_in_ball(rng, 200, 0.9)
        x, y, units = slice_decompose_array(q)
        j = random_units(rng, 1)[0]
        jq = np.broadcast_to(j, q.shape)
        fp = evaluate(f, slice_compose(x, y, jq))
        fm = evaluate(f, slice_compose(x, -y, jq))
        got = representation_formula(fp, fm, jq, units)
        want = evaluate(f, q)
        assert np.max(qnorm(got - want) / np.maximum(1.0, qnorm(want))) <= 1e-12


def test_extend_from_slice(rng):
    q = random_in_ball(rng, 300, 1.5)
    sq = extend_from_slice(lambda z: z * z)
    assert np.allclose(evaluate(sq, q), qmul(q, q), atol=1e-13)
    const = extend_from_slice(lambda z: np.full_like(z, 2.0 + 1.0j), J=J)
    assert np.allclose(evaluate(const, q), [2.0, 0.0, 1.0, 0.0], atol=1e-15)
    conjz = extend_from_slice(np.conj)
    assert even_odd_defect(conjz, q) <= 1e-12
    # z -> conj(z) extends to q -> conj(q)
    assert np.allclose(evaluate(conjz, q), qconj(q), atol=1e-14)
    # quaternion-valued g: z read as x + J y is the identity on C_J
    qv = extend_from_slice(lambda z: np.stack([z.real, 0 * z.real, z.imag, 0 * z.real], axis=-1), J=J)
    assert np.allclose(evaluate(qv, q), q, atol=1e-14)


def test_extend_from_slice_intrinsic(rng):
    q = random_in_ball(rng, 500, 1.0)
    f = extend_from_slice(lambda z: np.exp(z) + z ** 3)
    check = is_intrinsic(f, q)
    assert check.ok and check.defect <= 1e-12


def test_is_intrinsic_examples(rng):
    q = random_in_ball(rng, 200, 1.0)
    real = RightPolynomial(rng.normal(size=(6, 1)) * np.array([[1, 0, 0, 0]]))
    check = is_intrinsic(real, q)
    assert check.ok and check.defect <= 1e-13
    qi = RightPolynomial([[0, 0, 0, 0], [0, 1, 0, 0]])
    check = is_intrinsic(qi, np.array([[0, 1.0, 0, 0]]))
    assert not check.ok and check.defect == pytest.approx(2.0)
    assert is_intrinsic(RightPolynomial([[3, 0, 0, 0]]), q).ok


def test_even_odd_by_construction(rng):
    q = random_in_ball(rng, 300, 0.9)
    forms = [
        RightPolynomial(rng.normal(size=(5, 4))),
        CassiniSeries(0.5, 1.0, [(rng.normal(size=4), rng.normal(size=4))]),
        ClosureSliceFunction(lambda x, y: (np.cos(x) * np.cosh(y), -np.sin(x) * np.sinh(y))),
    ]
    for f in forms:
        assert even_odd_defect(f, q) <= 1e-12
        assert even_odd_defect(f, q, unit=K) <= 1e-12


def test_closure_matches_exp_cos(rng):
    # cos on C_I: cos(x + I y) = cos x cosh y - I sin x sinh y
    f = ClosureSliceFunction(lambda x, y: (np.cos(x) * np.cosh(y), -np.sin(x) * np.sinh(y)))
    q = Quaternion(0.3, 0.0, 0.4, 0.0)
    z = complex(0.3, 0.4)
    w = np.cos(z)
    assert f(q).isclose(Quaternion(w.real, 0, w.imag, 0), 1e-14)


def test_cassini_to_polynomial_examples():
    a, b = Quaternion(1, 2, 0, 0), Quaternion(0, 0, 3, 4)
    p = cassini_to_polynomial(CassiniSeries(0.0, 1.0, [(a, b)]))
    assert np.allclose(p.coeffs, [a.to_array(), b.to_array(), a.to_array(), b.to_array()])
    p = cassini_to_polynomial(CassiniSeries(1.0, 1.0, [(1.0, 0.0)]))
    assert np.allclose(p.coeffs[:3, 0], [2.0, -2.0, 1.0]) and p.degree == 2
    zero = cassini_to_polynomial(CassiniSeries(3.0, 2.0, [(0.0, 0.0), (0.0, 0.0)]))
    assert np.all(zero.coeffs == 0)
    assert np.all(cassini_to_polynomial(CassiniSeries(0.0, 1.0, [])).coeffs == 0)


def test_cassini_expansion_agrees(rng):
    from slice_approx.geometry import CassiniCell, sample

    for x0, y0, R in ((0.0, 1.0, 1.0), (1.0, 1.0, 2.0), (-0.5, 2.0, 1.5)):
        s = CassiniSeries(x0, y0, [(rng.normal(size=4), rng.normal(size=4)) for _ in range(3)])
        pts = sample(CassiniCell(x0, y0, R), 1000, seed=3).points
        want = evaluate(s, pts)
        got = evaluate(cassini_to_polynomial(s), pts)
        assert np.max(qnorm(got - want) / np.maximum(1.0, qnorm(want))) <= 1e-10


def test_cassini_k0_zero():
    s = CassiniSeries(0.0, 1.0, [(2.0, 1.0)], k0=0)
    q = Quaternion(0.1, 0.2, 0.3, 0.4)
    assert s(q).isclose(2 + q, 1e-15)
    with pytest.raises(ValueError):
        CassiniSeries(0.0, -1.0, [])


def test_sphere_function():
    f = SphereSliceFunction.from_trig([[0, 0, 0, 0], [1, 0, 0, 0]], [[0, 0, 0, 0], [1, 0, 0, 0]])
    q = Quaternion(0.6, 0.0, 0.0, 0.8)
    assert f(q).isclose(q, 1e-15)
    with pytest.raises(DomainError):
        f(Quaternion(0.5))


@pytest.mark.parametrize(
    "f",
    [
        RightPolynomial([[1, 2, 3, 4], [0.1, 0.2, 0.3, 1 / 3]]),
        PowerSeries([[1, 0, 0, 0], [0, math.pi, 0, 0]], radius=2.5),
        PowerSeries([[1, 0, 0, 0]]),
        LaurentPolynomial([[1, 0, 0, 0]], [[0, 1, 0, 0]]),
        CassiniSeries(1.0, 0.5, [([1, 0, 0, 0], [0, 0, 1, 0])], k0=2),
        SphereSliceFunction.from_trig([[1, 0, 0, 0]], [[0, 0, 0, 0], [0.25, 0, 0, 0]]),
    ],
)
def test_json_roundtrip(f, tmp_path):
    g = from_json(to_json(f))
    assert type(g) is type(f)
    q = np.array([[0.6, 0.0, 0.8, 0.0], [1.0, 0.0, 0.0, 0.0]])
    assert np.array_equal(evaluate(g, q), evaluate(f, q))
    path = tmp_path / "f.json"
    dump(f, path)
    assert np.array_equal(evaluate(load(path), q), evaluate(f, q))


def test_json_rejects_unknown():
    with pytest.raises(ValueError):
        from_json('{"kind": "spline"}')
    with pytest.raises(TypeError):
        to_json(ClosureSliceFunction(lambda x, y: (x, y)))
