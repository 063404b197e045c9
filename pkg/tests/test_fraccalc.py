"""Riemann-Liouville integrals, Marchaud derivatives and the m~ transform.

Frozen reference values come from :mod:`tests.oracles` (QUADPACK with the
algebraic weight, high-order finite differences, mpmath at 30 digits).
"""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxmult.errors import HolderWarning, InvalidParameter, PreconditionError, QuadratureError
from maxmult.fraccalc import (
    GradedMesh,
    m_tilde,
    marchaud_derivative,
    mtilde_symbol,
    power_law_integral,
    reconstruct,
    reproduce_symbol,
    rl_integral,
    tabulated_mtilde,
)
from maxmult.symbols import (
    gamma_ratio,
    make_annulus,
    make_constant,
    make_radial,
    make_slow_decay,
    make_window,
)

from . import oracles

# -- Riemann-Liouville --------------------------------------------------------

RL_SIN = 1.1773088753095824  # rl_quad(sin, 0.3, 2.0)


def test_rl_sin_against_quadpack():
    assert rl_integral(np.sin, 0.3, 2.0) == pytest.approx(RL_SIN, rel=1e-12)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_power_law_identity(mu, alpha):
    t = 1.7
    got = rl_integral(lambda s: s**mu, alpha, t)
    assert got == pytest.approx(power_law_integral(mu, alpha, t), rel=1e-6)


def test_power_law_closed_form():
    # I^a[1](t) = t^a / Gamma(a + 1)
    assert power_law_integral(0.0, 0.5, 4.0) == pytest.approx(2.0 / math.gamma(1.5), rel=1e-15)


def test_rl_vector_t_and_vector_values():
    t = np.array([0.5, 1.0, 2.0])
    got = rl_integral(np.sin, 0.3, t)
    assert got.shape == (3,)
    assert got[2] == pytest.approx(RL_SIN, rel=1e-12)
    two = rl_integral(lambda s: np.stack([s, s * s], axis=-1), 0.5, 1.0)
    assert two == pytest.approx([power_law_integral(1, 0.5, 1.0), power_law_integral(2, 0.5, 1.0)], rel=1e-12)


def test_rl_accepts_scalar_only_callables():
    got = rl_integral(math.sin, 0.3, 2.0)
    assert got == pytest.approx(RL_SIN, rel=1e-12)


def test_rl_input_validation():
    with pytest.raises(InvalidParameter):
        rl_integral(np.sin, 1.0, 1.0)
    with pytest.raises(InvalidParameter):
        rl_integral(np.sin, 0.5, -1.0)
    with pytest.raises(InvalidParameter):
        GradedMesh(levels=1)


def test_refinement_check_raises_on_unresolved_integrand():
    # a spike narrower than the coarse mesh near the middle of [0, t]
    spike = lambda s: np.exp(-((s - 0.7) / 0.02) ** 2)
    with pytest.raises(QuadratureError):
        rl_integral(spike, 0.5, 1.0, mesh=GradedMesh(levels=4, order=4))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.1, 5.0), st.floats(-3, 3), st.floats(-3, 3))
def test_rl_is_linear(alpha, t, a, b):
    f = lambda s: np.cos(s)
    g = lambda s: s**1.5
    lhs = rl_integral(lambda s: a * f(s) + b * g(s), alpha, t, check=False)
    rhs = a * rl_integral(f, alpha, t, check=False) + b * rl_integral(g, alpha, t, check=False)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.05, 0.45), st.floats(0.05, 0.45), st.floats(0.3, 3.0))
def test_rl_semigroup(a, b, t):
    # I^a I^b cos = I^(a+b) cos, with the inner integral done numerically
    inner = lambda s: rl_integral(np.cos, b, np.ravel(s), check=False).reshape(np.shape(s))
    lhs = rl_integral(inner, a, t, check=False)
    assert lhs == pytest.approx(oracles.rl_quad(math.cos, a + b, t), rel=1e-8)


# -- Marchaud -----------------------------------------------------------------

# d/dt I^(1-a) F at t = 1.3, fourth-order central differences of QUADPACK values
MARCHAUD_FROZEN = {
    ("sin", 0.25): 0.901757659859161,
    ("sin", 0.5): 0.7660945694844176,
    ("sin", 0.75): 0.5524479586918873,
    ("cos", 0.25): -0.06820759217909811,
    ("cos", 0.5): -0.41903279868319804,
    ("cos", 0.75): -0.7361388813481399,
    ("exp_decay", 0.25): 0.08388629677327786,
    ("exp_decay", 0.5): -0.09117069157968394,
    ("exp_decay", 0.75): -0.21999242466011018,
    ("quadratic", 0.25): 2.630444939643687,
    ("quadratic", 0.5): 2.8732954388855183,
    ("quadratic", 0.75): 3.0393762136115,
}


@pytest.mark.parametrize("name,alpha", sorted(MARCHAUD_FROZEN))
def test_marchaud_against_difference_oracle(name, alpha):
    F = np.vectorize(oracles.MARCHAUD_FUNCS[name])
    got = marchaud_derivative(F, alpha, oracles.MARCHAUD_T)
    ref = MARCHAUD_FROZEN[(name, alpha)]
    assert abs(got - ref) < 1e-4 * abs(ref)
    # the implementation is much better than the criterion; keep it that way
    assert abs(got - ref) < 1e-7 * abs(ref)


def test_marchaud_square_quarter_order():
    # Gamma(3)/Gamma(2.75) t^(7/4) at t = 1; the difference oracle gives 1.2435031452925673
    got = marchaud_derivative(lambda s: s * s, 0.25, 1.0)
    assert got == pytest.approx(2.0 / math.gamma(2.75), rel=1e-12)
    assert got == pytest.approx(1.2435031452925673, rel=1e-10)


def test_marchaud_of_linear_function():
    # D^(1/2) s = Gamma(2)/Gamma(3/2) t^(1/2) = 2/sqrt(pi) at t = 1
    assert marchaud_derivative(lambda s: s, 0.5, 1.0) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-12)


def test_marchaud_warns_on_rough_function():
    t0 = 1.0
    rough = lambda s: np.abs(s - t0) ** 0.1
    with pytest.warns(HolderWarning):
        marchaud_derivative(rough, 0.5, t0, check=False)


def test_marchaud_is_quiet_on_smooth_function():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        marchaud_derivative(np.sin, 0.75, 2.0)


@pytest.mark.parametrize("F", [lambda s: s * s, np.sin, lambda s: s * np.exp(-s)], ids=["s^2", "sin", "s e^-s"])
@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_reconstruction(F, alpha):
    t = 1.3
    assert abs(reconstruct(F, alpha, t) - F(t)) < 1e-3 * abs(F(t))


def test_reconstruct_needs_zero_at_origin():
    with pytest.raises(PreconditionError):
        reconstruct(np.cos, 0.5, 1.0)


# -- m~ -----------------------------------------------------------------------

EPS = 0.05
# mpmath (30 digits) values of psi~ = m~ for the shell window
MTILDE_WINDOW = {
    0.7: 2.1541354202876457,
    1.0: 2.26615954249493165860,
    1.5: -1.458146304817741,
    3.0: -0.2996071219429434,
}


@pytest.mark.parametrize("x", sorted(MTILDE_WINDOW))
def test_mtilde_window_against_mpmath(x):
    got = m_tilde(make_window(), EPS, [x])
    assert abs(got - MTILDE_WINDOW[x]) < 1e-8 * abs(MTILDE_WINDOW[x])


def test_mtilde_does_not_depend_on_level_count():
    w = make_window()
    for levels in (40, 48, 64):
        got = m_tilde(w, EPS, [3.0], GradedMesh(levels=levels))
        assert abs(got - MTILDE_WINDOW[3.0]) < 1e-8 * abs(MTILDE_WINDOW[3.0])


@pytest.mark.parametrize("kappa", [0.5, 1.0, 2.0])
def test_mtilde_homogeneous_closed_form(kappa):
    m = make_radial(lambda r: r**kappa)
    xi = 1.3
    assert m_tilde(m, EPS, [xi]) == pytest.approx(gamma_ratio(kappa, EPS) * xi**kappa, rel=1e-9)


@pytest.mark.parametrize("kappa,ref", [(0.5, 1.6910270607615972), (1.0, 2.2222222222222219), (2.0, 3.0651340996168576)])
def test_gamma_ratio_against_mpmath(kappa, ref):
    assert gamma_ratio(kappa, EPS) == pytest.approx(ref, rel=1e-13)


def test_mtilde_of_constant_is_constant():
    assert m_tilde(make_constant(2.5), EPS, [0.3]) == pytest.approx(2.5, rel=1e-14)


def test_mtilde_warns_on_jump():
    # an indicator has m(xi) - m(s xi) = -1 near s = 1 at the jump: not integrable
    step = make_radial(lambda r: np.where(np.asarray(r) < 1.0, 1.0, 0.0).astype(complex))
    with pytest.warns(HolderWarning):
        m_tilde(step, EPS, [1.0])


def test_mtilde_eps_range():
    with pytest.raises(InvalidParameter):
        m_tilde(make_window(), 0.2, [1.0])
    with pytest.raises(InvalidParameter):
        m_tilde(make_window(), 0.0, [1.0])


def test_mtilde_array_shape_and_radial_consistency():
    w = make_window()
    pts = np.array([[[0.7, 0.0], [0.0, 1.5]], [[3.0, 0.0], [0.0, -1.0]]])
    got = m_tilde(w, EPS, pts)
    assert got.shape == (2, 2)
    assert got[0, 1] == pytest.approx(MTILDE_WINDOW[1.5], rel=1e-8)
    assert got[1, 1] == pytest.approx(MTILDE_WINDOW[1.0], rel=1e-8)


def test_mtilde_symbol_and_table_agree():
    m = make_annulus(0.5, 4.0, omega=3.0)
    direct = mtilde_symbol(m, EPS)
    table = tabulated_mtilde(m, EPS, 0.1, 20.0)
    r = np.geomspace(0.6, 19.0, 37)[:, None]
    a, b = direct(r), table(r)
    assert np.abs(a - b).max() < 1e-6 * np.abs(a).max()
    assert table(np.array([[0.3]]))[0] == 0  # inside the vanishing ball
    with pytest.raises(PreconditionError):
        table(np.array([[40.0]]))


@settings(max_examples=15, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.6, 3.5))
def test_mtilde_is_linear(a, b, x):
    w = make_window()
    s = make_slow_decay(0.5, 1.0)
    combo = make_radial(lambda r: a * w.at_radius(r) + b * s.at_radius(r))
    lhs = m_tilde(combo, EPS, [x])
    rhs = a * m_tilde(w, EPS, [x]) + b * m_tilde(s, EPS, [x])
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


# -- reproduction m(t xi) from m~ ---------------------------------------------

REPRODUCE_T = [0.5, 0.7, 0.9, 1.1, 1.3]


@pytest.mark.parametrize(
    "m,xi",
    [(make_window(), 1.3), (make_slow_decay(0.5, 1.0), 4.0), (make_annulus(0.5, 4.0, omega=3.0), 2.0)],
    ids=["window", "slow_decay", "chirped-annulus"],
)
@pytest.mark.parametrize("t", REPRODUCE_T)
def test_reproduce_symbol(m, xi, t):
    exact = complex(m(np.array([[t * xi]]))[0])
    got = reproduce_symbol(m, EPS, [xi], t)
    assert abs(got - exact) < 1e-3 * abs(exact)


def test_reproduce_inside_vanishing_ball():
    # m~ vanishes wherever m does near the origin, so the integral is exactly zero
    assert reproduce_symbol(make_window(), EPS, [1.0], 0.4) == 0


@pytest.mark.parametrize("t", [0.01, 1.0, 37.0])
def test_reproduce_constant_exactly(t):
    assert abs(reproduce_symbol(make_constant(1.0), EPS, [1.0], t) - 1.0) < 1e-12
