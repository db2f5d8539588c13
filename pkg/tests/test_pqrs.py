import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import shipped_problem
from retarded_sl import compute_pqrs
from retarded_sl.pqrs import half_abs_q_integral, nodes_per_half
from retarded_sl.problem import make_problem

TEST_PROBLEMS = {
    "shipped": shipped_problem(),
    "jumps": make_problem(("1 + x", "-2"), ("x/3", "x - pi/2")),
    "smooth": make_problem("exp(-x) * sin(3*x)", ("x^2/8", "(x - pi/2)/4")),
}


def trapezoid_pqrs(p, mu, n=10**6):
    out = []
    for xs, qf, df in (
        (np.linspace(0, math.pi / 2, n), p.q.eval_left, p.delay.eval_left),
        (np.linspace(math.pi / 2, math.pi, n), p.q.eval_right, p.delay.eval_right),
    ):
        q, d = qf(xs), df(xs)
        rows = [q * np.cos(mu * d), q * np.cos(mu * (2 * xs - d)), q * np.sin(mu * d), q * np.sin(mu * (2 * xs - d))]
        out.append([0.5 * np.trapezoid(r, xs) for r in rows])
    return np.sum(out, axis=0)


def test_constant_potential_without_delay_gives_pi():
    v = compute_pqrs(make_problem("2", "0"), 3.7)
    assert v.p_val == pytest.approx(math.pi, rel=1e-14)


@pytest.mark.parametrize("name", sorted(TEST_PROBLEMS))
def test_sine_integrals_vanish_at_zero(name):
    v = compute_pqrs(TEST_PROBLEMS[name], 0.0)
    assert v.r_val == 0.0 and v.s_val == 0.0


@pytest.mark.parametrize("mu, expected", [(1.0, 0.0), (0.5, 0.0), (0.25, 1.0), (1.5, 0.0), (12.0, 0.0), (0.3, None)])
def test_unit_potential_cosine_integral(mu, expected):
    v = compute_pqrs(make_problem("1", "0"), mu)
    exact = math.sin(2 * mu * math.pi) / (4 * mu)
    if expected is not None:
        assert exact == pytest.approx(expected, abs=1e-15)
    assert abs(v.q_val - exact) <= 1e-10


@pytest.mark.parametrize("name", sorted(TEST_PROBLEMS))
@pytest.mark.parametrize("mu", [0.0, 1.3, 7.0])
def test_against_fine_trapezoid(name, mu):
    p = TEST_PROBLEMS[name]
    v = compute_pqrs(p, mu)
    np.testing.assert_allclose([v.p_val, v.q_val, v.r_val, v.s_val], trapezoid_pqrs(p, mu), rtol=0, atol=1e-9)


@given(st.floats(min_value=0, max_value=60), st.sampled_from(sorted(TEST_PROBLEMS)))
@settings(max_examples=40)
def test_parity(mu, name):
    p = TEST_PROBLEMS[name]
    a, b = compute_pqrs(p, mu), compute_pqrs(p, -mu)
    assert abs(a.p_val - b.p_val) <= 1e-12
    assert abs(a.q_val - b.q_val) <= 1e-12
    assert abs(a.r_val + b.r_val) <= 1e-12
    assert abs(a.s_val + b.s_val) <= 1e-12


@given(st.floats(min_value=-200, max_value=200), st.sampled_from(sorted(TEST_PROBLEMS)))
@settings(max_examples=40)
def test_bounded_by_half_integral_of_abs_q(mu, name):
    p = TEST_PROBLEMS[name]
    bound = half_abs_q_integral(p)
    v = compute_pqrs(p, mu)
    assert max(abs(v.p_val), abs(v.q_val), abs(v.r_val), abs(v.s_val)) <= bound * (1 + 1e-12)


@pytest.mark.parametrize("name", sorted(TEST_PROBLEMS))
def test_doubling_quadrature_is_converged(name):
    p = TEST_PROBLEMS[name]
    for mu in np.linspace(-50, 50, 41):
        a, b = compute_pqrs(p, mu), compute_pqrs(p, mu, 4096)
        assert max(abs(a.p_val - b.p_val), abs(a.q_val - b.q_val),
                   abs(a.r_val - b.r_val), abs(a.s_val - b.s_val)) < 1e-10


@given(st.floats(min_value=-80, max_value=80))
@settings(max_examples=30)
def test_no_delay_collapse(mu):
    p = make_problem(("cos(x)", "1 + x^2"), "0")
    v = compute_pqrs(p, mu)
    half = compute_pqrs(p, 0.0).p_val
    assert abs(v.p_val - half) <= 1e-12
    assert v.r_val == 0.0


def test_node_count_grows_with_mu():
    assert nodes_per_half(0.0, 2048) == 2048
    assert nodes_per_half(500.0, 2048) == 16 * 501


def test_quadrature_floor():
    with pytest.raises(ValueError):
        compute_pqrs(shipped_problem(), 1.0, 16)
