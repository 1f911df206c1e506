"""Acceptance criteria 1-9, each at its stated tolerance.

A summary line per criterion is printed at the end of the pytest run.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from _util import random_in_ball, random_units
from slice_approx import cli
from slice_approx.approximation import (
    cassini_operator_closed,
    convolve_pointwise,
    delayed_mean_operator,
    dvp_operator_closed,
    generalized_jackson_operator,
    laurent_approx_on_sphere,
)
from slice_approx.error_analysis import AnalyticModulus, cassini_bound, lipschitz_constant, verify_bound
from slice_approx.geometry import (
    Ball,
    CassiniCell,
    UnitSphere,
    branch_angles,
    hypocycloid_domain,
    lemniscate,
    sample,
    starlike_check,
)
from slice_approx.kernels import (
    DVP,
    FejerDelayed,
    GenJackson,
    Jackson,
    multipliers,
    quadrature_nodes,
    quadrature_periodic,
)
from slice_approx.quaternion import qnorm, slice_compose, slice_decompose_array
from slice_approx.slice_functions import (
    CassiniSeries,
    LaurentPolynomial,
    PowerSeries,
    RightPolynomial,
    SphereSliceFunction,
    evaluate,
    representation_formula,
)


def unit_ball_coeffs(rng, count):
    c = rng.normal(size=(count, 4))
    return c / np.linalg.norm(c, axis=1, keepdims=True) * rng.uniform(size=(count, 1))


def rel(a, b):
    return float(np.max(qnorm(a - b) / np.maximum(qnorm(b), 1e-300)))


# 1 -----------------------------------------------------------------------------


@pytest.mark.parametrize("make", [DVP, Jackson, lambda n: GenJackson(n, 3), FejerDelayed])
def test_criterion_1_normalization(make):
    for n in range(1, 33):
        k = make(n)
        assert abs(quadrature_periodic(k, 8 * n + 64) - 1.0) <= 1e-12


def test_criterion_1_dvp_multipliers():
    for n in range(1, 33):
        k = DVP(n)
        u = quadrature_nodes(8 * n + 64)
        vals = k(u)
        for j in range(n + 1):
            exact = Fraction(math.factorial(n) ** 2, math.factorial(n - j) * math.factorial(n + j))
            quad = float(np.mean(vals * np.cos(j * u)))
            assert abs(quad - float(exact)) <= 1e-12
            assert abs(multipliers(k)[j] - float(exact)) <= 1e-12


def test_criterion_1_dvp1_at_zero():
    assert abs(DVP(1)(0.0) - 2.0) <= 1e-14


# 2 -----------------------------------------------------------------------------


def test_criterion_2_power_series():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        f = PowerSeries(unit_ball_coeffs(rng, rng.integers(1, 14)))
        q = random_in_ball(rng, 50, 0.9)
        for n in range(1, 13):
            closed = evaluate(dvp_operator_closed(f, n), q)
            quad = convolve_pointwise(f, q, DVP(n))
            worst = max(worst, rel(quad, closed))
    assert worst <= 1e-9
    assert time.perf_counter() - t0 < 30


def test_criterion_2_cassini():
    rng = np.random.default_rng(3)
    cell = CassiniCell(1.0, 1.0, 1.0)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(20):
        K = int(rng.integers(1, 6))
        s = CassiniSeries(1.0, 1.0, [(unit_ball_coeffs(rng, 1)[0], unit_ball_coeffs(rng, 1)[0]) for _ in range(K)])
        q = sample(cell, 50, seed=i).points
        for n in range(1, 13):
            closed = evaluate(cassini_operator_closed(s, n), q)
            quad = convolve_pointwise(s, q, DVP(n))
            worst = max(worst, rel(quad, closed))
    assert worst <= 1e-9
    assert time.perf_counter() - t0 < 30


# 3 -----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def ball_grid():
    return sample(Ball(0.0, 1.0), 4000, seed=0)


@pytest.mark.parametrize(("k", "L"), [(1, 1.0), (2, 2.0), (3, 3.0)])
@pytest.mark.parametrize("n", [4, 16, 64, 256])
def test_criterion_3_ball_bound(k, L, n, ball_grid):
    f = RightPolynomial.monomial(k)
    assert lipschitz_constant(f, 1.0) == L
    r = verify_bound(f, dvp_operator_closed(f, n), Ball(0.0, 1.0), AnalyticModulus(L), n, grid=ball_grid)
    assert r.bound == pytest.approx(3 * 2 * L / math.sqrt(n), rel=1e-15)
    assert r.sup_error <= r.bound and r.status == "PASS"


@pytest.mark.parametrize("n", [4, 16, 64, 256])
def test_criterion_3_identity_error(n, ball_grid):
    f = RightPolynomial.monomial(1)
    r = verify_bound(f, dvp_operator_closed(f, n), Ball(0.0, 1.0), AnalyticModulus(1.0), n, grid=ball_grid)
    assert abs(r.sup_error - 1.0 / (n + 1)) <= 1e-10


# 4 -----------------------------------------------------------------------------

CELLS = [CassiniCell(0.0, 1.0, 1.0), CassiniCell(1.0, 1.0, 2.0)]


def cassini_tests(cell):
    x0, y0 = cell.x0, cell.y0
    return {
        "cassini1": CassiniSeries(x0, y0, [(1.0, 0.0)]),
        "cassini2": CassiniSeries(x0, y0, [(0.0, 1.0)]),
        "cassini3": CassiniSeries(x0, y0, [([0.5, 0, 0, 0], [0, 0, 0.5, 0]), ([0, 0, 0, 0.25], [0.1, 0, 0, 0])]),
    }


@pytest.mark.parametrize("cell", CELLS, ids=lambda c: c.descriptor)
@pytest.mark.parametrize("name", ["cassini1", "cassini2", "cassini3"])
def test_criterion_4_cassini_bound(cell, name):
    s = cassini_tests(cell)[name]
    grid = sample(cell, 4000, seed=0)
    # the circles through cell points fill the ball of radius M, so L is taken there
    L = lipschitz_constant(s, cell.M)
    for n in (4, 16, 64):
        r = verify_bound(s, cassini_operator_closed(s, n), cell, AnalyticModulus(L), n, grid=grid)
        assert r.bound == pytest.approx(3 * (cell.M + 1) * L / math.sqrt(n), rel=1e-15)
        assert r.sup_error <= r.bound and r.status == "PASS"


def test_criterion_4_M_values():
    want = {(0.0, 1.0, 1.0): math.sqrt(2.0), (1.0, 1.0, 2.0): math.sqrt(4.0 + 2.0 * math.sqrt(5.0) + 2.0)}
    for (x0, y0, R), m in want.items():
        b = cassini_bound(x0, y0, R, AnalyticModulus(1.0), 4)
        assert abs(b.M - m) <= 1e-14
        assert abs(CassiniCell(x0, y0, R).M - m) <= 1e-14


# 5 -----------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 5, 10])
def test_criterion_5_delayed_means_exact(n, ball_grid):
    rng = np.random.default_rng(n)
    for _ in range(20):
        f = RightPolynomial(rng.normal(size=(rng.integers(1, n + 2), 4)))
        p = delayed_mean_operator(f, n)
        err = np.max(qnorm(evaluate(p, ball_grid.points) - evaluate(f, ball_grid.points)))
        assert err <= 1e-12


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_criterion_5_generalized_jackson_constants(p):
    rng = np.random.default_rng(p)
    c = rng.normal(size=4)
    q = random_in_ball(rng, 50, 1.0)
    for n in (2, 5, 8):
        out = generalized_jackson_operator(RightPolynomial([c]), q, n, p)
        assert np.max(qnorm(out - c)) <= 1e-12


# 6 -----------------------------------------------------------------------------


def test_criterion_6_representation_formula():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(10):
        f = PowerSeries(unit_ball_coeffs(rng, int(rng.integers(1, 13))))
        J = random_units(rng, 1)[0]
        q = random_in_ball(rng, 1000, 0.9)
        x, y, units = slice_decompose_array(q)
        jq = np.broadcast_to(J, q.shape)
        fp = evaluate(f, slice_compose(x, y, jq))
        fm = evaluate(f, slice_compose(x, -y, jq))
        worst = max(worst, rel(representation_formula(fp, fm, jq, units), evaluate(f, q)))
    assert worst <= 1e-10


# 7 -----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def sphere_grid():
    return sample(UnitSphere(), 2000, seed=0)


@pytest.mark.parametrize(
    ("name", "f", "degree"),
    [
        ("q", RightPolynomial.monomial(1), 1),
        ("qinv", LaurentPolynomial([[0, 0, 0, 0]], [[1, 0, 0, 0]]), 1),
        ("q+qinv", LaurentPolynomial([[0, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0]]), 1),
        ("q2i", RightPolynomial.monomial(2, [0, 1, 0, 0]), 2),
    ],
)
def test_criterion_7_exact_inputs(name, f, degree, sphere_grid):
    for n in range(degree, degree + 4):
        approx = laurent_approx_on_sphere(f, n)
        err = np.max(qnorm(evaluate(approx, sphere_grid.points) - evaluate(f, sphere_grid.points)))
        assert err <= 1e-12, (name, n, err)


def test_criterion_7_abs_sin_decreases(sphere_grid):
    f = SphereSliceFunction(lambda t: np.abs(np.sin(t)), lambda t: np.zeros_like(t), name="abs-sin")
    errs = []
    for n in (8, 16, 32, 64):
        approx = laurent_approx_on_sphere(f, n)
        errs.append(float(np.max(qnorm(evaluate(approx, sphere_grid.points) - evaluate(f, sphere_grid.points)))))
    assert all(b <= 1.05 * a for a, b in zip(errs, errs[1:])), errs


# 8 -----------------------------------------------------------------------------


def test_criterion_8_cassini_degeneration():
    rng = np.random.default_rng(8)
    q = random_in_ball(rng, 10_000, 2.0)
    for x0, R in ((0.0, 1.0), (0.5, 1.2)):
        assert np.array_equal(CassiniCell(x0, 0.0, R).contains(q), Ball(x0, R).contains(q))


def test_criterion_8_lemniscate_residual():
    t = np.linspace(-math.pi, math.pi, 10_000, endpoint=False)
    for m in (2, 3, 4):
        bad = branch_angles("lemniscate", m)
        keep = np.min(np.abs(np.angle(np.exp(1j * (t[:, None] - bad)))), axis=1) > 1e-6
        z = lemniscate(m, np.exp(1j * t[keep]))
        assert np.max(np.abs(np.abs(z ** m - 1.0) - 1.0)) <= 1e-10


def test_criterion_8_hypocycloid_starlike():
    res = starlike_check(hypocycloid_domain(3), center=0.0, samples=1000, segments=50)
    assert res.ok and res.checked == 1000 * 50


# 9 -----------------------------------------------------------------------------


def test_criterion_9_verify_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["verify", "--seed", "0", "--out", str(a)]) == 0
    assert cli.main(["verify", "--seed", "0", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) > 1
