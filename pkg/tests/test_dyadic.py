"""Littlewood-Paley windows and the retract maps."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxmult.dyadic import (
    ShellSequence,
    WindowFamily,
    eval_window,
    evaluate,
    partition_sum,
    retract_R,
    retract_S,
    shell_localize,
    transition,
)
from maxmult.errors import ContractViolation, InvalidParameter, SymbolEvaluationError
from maxmult.grid import Domain, Grid
from maxmult.symbols import Symbol, make_annulus, make_window

W = WindowFamily()


def test_transition_values():
    assert transition(0.3) == 1.0 and transition(1.0) == 1.0
    assert transition(2.0) == 0.0 and transition(7.0) == 0.0
    # symmetric about 3/2: g(2-r)/(g(2-r)+g(r-1)) swaps under r -> 3-r
    r = np.linspace(1.01, 1.99, 99)
    np.testing.assert_allclose(transition(r) + transition(3.0 - r), 1.0, atol=1e-15)
    assert transition(1.5) == 0.5
    d = np.diff(transition(r))
    assert np.all(d <= 0) and np.all(d[10:-10] < 0)


def test_transition_is_finite_near_edges():
    r = np.array([1.0 + 1e-300, 1.0 + 1e-12, 2.0 - 1e-12, 2.0 - 1e-300])
    v = transition(r)
    assert np.all(np.isfinite(v))
    assert v[0] == 1.0 and v[-1] == 0.0


def test_transition_matches_bump_quotient():
    # direct g(2-r)/(g(2-r)+g(r-1)), g = exp(-1/x), away from the edges
    r = np.linspace(1.1, 1.9, 17)
    g = lambda x: np.exp(-1.0 / x)
    np.testing.assert_allclose(transition(r), g(2 - r) / (g(2 - r) + g(r - 1)), rtol=1e-13)


def test_window_support():
    r = np.linspace(0, 4, 4001)
    v = W.psi(r)
    assert np.all(v[r <= 0.5] == 0) and np.all(v[r >= 2.0] == 0)
    assert np.all(v[(r > 0.55) & (r < 1.95)] > 0)
    assert W.psi(1.0) == 1.0


def test_window_family_validation():
    with pytest.raises(InvalidParameter):
        WindowFamily(3, 2)
    with pytest.raises(InvalidParameter):
        WindowFamily(profile="mollifier-v0")
    assert list(WindowFamily(-1, 1).shells) == [-1, 0, 1]
    assert WindowFamily().with_range(0, 4).j_max == 4


def test_partition_of_unity_random_points():
    rng = np.random.default_rng(0)
    w = WindowFamily(-10, 10)
    xi = 2.0 ** rng.uniform(-9, 9, size=(10_000, 1)) * rng.choice([-1, 1], size=(10_000, 1))
    assert np.abs(partition_sum(w, xi, -10, 10) - 1.0).max() < 1e-12


def test_partition_sum_telescopes():
    # psi_a + ... + psi_b = phi(2^-b xi) - phi(2^(1-a) xi)
    xi = np.linspace(-40, 40, 2001)[:, None]
    r = np.abs(xi[:, 0])
    lhs = partition_sum(W, xi, -3, 4)
    rhs = W.phi(r / 16.0) - W.phi(r * 16.0)
    assert np.abs(lhs - rhs).max() < 1e-14


def test_partition_sum_rejects_empty_range():
    with pytest.raises(InvalidParameter):
        partition_sum(W, np.ones((2, 1)), 2, 1)


@settings(max_examples=200, deadline=None)
@given(st.floats(-8.5, 8.5), st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_partition_of_unity_property(log_r, dim, seed):
    u = np.random.default_rng(seed).normal(size=dim)
    xi = 2.0**log_r * u / np.linalg.norm(u)
    assert abs(partition_sum(WindowFamily(-10, 10), xi, -10, 10) - 1.0) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(-6, 6), st.integers(-4, 4))
def test_window_dilation_property(log_r, j):
    r = 2.0**log_r
    assert eval_window(W, j, np.array([2.0**j * r])) == pytest.approx(eval_window(W, 0, np.array([r])), abs=1e-15)
    # at most two windows overlap at any radius
    live = [k for k in range(-12, 13) if W.psi_j(k, r) > 0]
    assert 1 <= len(live) <= 2


def test_evaluate_reports_failing_point():
    bad = Symbol(fn=lambda x: np.where(x[:, 0] > 1.5, np.nan, 1.0))
    with pytest.raises(SymbolEvaluationError) as err:
        evaluate(bad, np.array([[0.0], [1.0], [2.0]]))
    assert err.value.xi == (2.0,)

    def boom(x):
        raise ValueError("nope")

    with pytest.raises(SymbolEvaluationError):
        evaluate(Symbol(fn=boom), np.ones((3, 1)))


def test_shell_localize_evaluates_only_inside_window():
    g = Grid(1, 256, 16.0)
    seen = []

    def spy(x):
        seen.append(np.sqrt(np.sum(x * x, axis=-1)))
        return np.ones(x.shape[0])

    f = shell_localize(Symbol(fn=spy), W, 2, g)
    r = np.concatenate(seen)
    assert r.min() > 0.5 * 4 and r.max() < 2.0 * 4
    np.testing.assert_allclose(f.values, W.psi(g.radius(Domain.FREQUENCY)))


RETRACT_GRID = Grid(1, 4096, 128.0)
RETRACT_W = WindowFamily(-6, 2)


@pytest.mark.parametrize(
    "m",
    [make_window(), make_annulus(0.25, 4.0), make_annulus(0.1, 3.0, omega=3.0)],
    ids=["window", "annulus", "chirped-annulus"],
)
def test_retract_identity(m):
    # supports lie inside [2^-6, 4], where the windows sum to one
    R = retract_R(retract_S(m, RETRACT_W, RETRACT_GRID), RETRACT_W, RETRACT_GRID)
    exact = m(RETRACT_GRID.points(Domain.FREQUENCY))
    assert np.abs(R.values.ravel() - exact).max() < 1e-8


def test_retract_identity_2d():
    # shells j <= 0 only, so every sample is read straight off the lattice
    g = Grid(2, 128, 8.0)
    w = WindowFamily(-3, 0)
    m = make_annulus(0.15, 0.95)
    R = retract_R(retract_S(m, w, g), w, g)
    assert np.abs(R.values.ravel() - m(g.points(Domain.FREQUENCY))).max() < 1e-8


def test_retract_contracts():
    g = Grid(1, 64, 4.0)
    w = WindowFamily(-2, 0)
    seq = retract_S(make_window(), w, g)
    assert isinstance(seq, ShellSequence) and len(seq) == 3 and seq.j_max == 0
    with pytest.raises(ContractViolation):
        retract_R(seq, WindowFamily(-2, 1), g)
    with pytest.raises(IndexError):
        seq[1]
    other = ShellSequence(-2, tuple(f.reinterpret() for f in seq.fields))
    with pytest.raises(ContractViolation):
        retract_R(other, w, g)
