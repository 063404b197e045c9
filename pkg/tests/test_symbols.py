"""Symbol families, metadata and the J0 evaluator."""

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from maxmult.errors import ContractViolation, InvalidParameter, PreconditionError
from maxmult.symbols import (
    FAMILIES,
    Symbol,
    bessel_j0,
    from_spec,
    make_annulus,
    make_bump,
    make_constant,
    make_halfwave_difference,
    make_limited_decay,
    make_radial,
    make_slow_decay,
    make_surface_measure,
    make_window,
    split_at_origin,
    validate,
)

# -- J0 -----------------------------------------------------------------------


def test_j0_against_scipy():
    x = np.concatenate([np.linspace(0, 30, 30001), np.geomspace(30, 1e6, 2000)])
    assert np.abs(bessel_j0(x) - sp.j0(x)).max() < 1e-11


def test_j0_zeros():
    zeros = sp.jn_zeros(0, 10)
    assert np.abs(bessel_j0(zeros)).max() < 1e-12
    assert zeros[0] == pytest.approx(2.404825557695773, rel=1e-15)


def test_j0_is_even_and_scalar_safe():
    assert bessel_j0(0.0) == 1.0
    assert isinstance(bessel_j0(1.0), float)
    assert bessel_j0(-7.3) == bessel_j0(7.3)


def test_j0_accurate_on_both_sides_of_switch():
    x = 12.0 + np.array([-1e-9, 0.0, 1e-9])
    assert np.abs(bessel_j0(x) - sp.j0(x)).max() < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 200.0))
def test_j0_property(x):
    assert abs(bessel_j0(x) - sp.j0(x)) < 1e-11


# -- families -----------------------------------------------------------------


def test_window_and_bump():
    w, b = make_window(), make_bump()
    r = np.array([0.25, 0.5, 1.0, 1.5, 2.0, 3.0])
    np.testing.assert_allclose(w.at_radius(r), [0, 0, 1, 0.5, 0, 0])
    np.testing.assert_allclose(b.at_radius(r), [1, 1, 1, b.at_radius(1.5), 0, 0])
    assert w.inner_radius == 0.5 and w.vanishes_near_origin
    assert not b.vanishes_near_origin


def test_annulus_plateau_and_support():
    m = make_annulus(0.5, 4.0, power=1.0, omega=2.0, amplitude=3.0)
    r = np.linspace(1.0, 2.0, 11)
    np.testing.assert_allclose(m.at_radius(r), 3.0 * r * np.exp(2j * r), rtol=1e-15)
    assert np.all(m.at_radius(np.array([0.1, 0.5, 4.0, 9.0])) == 0)
    # phase rate tracks omega r on the support and stops growing past r_out
    assert m.rate(1.5) == pytest.approx(3.0)
    assert m.rate(40.0) == pytest.approx(8.0)
    with pytest.raises(InvalidParameter):
        make_annulus(2.0, 1.0)


def test_slow_decay_values_and_metadata():
    m = make_slow_decay(0.5, 1.0, cutoff_radius=1.0)
    r = np.array([4.0, 100.0])
    np.testing.assert_allclose(m.at_radius(r), np.exp(1j * np.sqrt(r)) / r, rtol=1e-15)
    assert m.at_radius(1.0) == 0
    assert dict(m.targets)["critical_s"] == 2.0
    assert m.decay == 1.0 and m.inner_radius == 1.0
    assert m.rate(16.0) == pytest.approx(2.0)
    for bad in [(0.0, 1.0), (1.0, 1.0), (0.5, -1.0)]:
        with pytest.raises(InvalidParameter):
            make_slow_decay(*bad)


def test_halfwave_difference():
    alpha, beta, t = 0.5, 0.75, 0.01
    m = make_halfwave_difference(alpha, beta, t)
    r = np.array([0.0, 1e-6, 3.0, 100.0])
    naive = (np.exp(1j * t * r**alpha) - 1) / t**beta
    np.testing.assert_allclose(m.at_radius(r), naive, rtol=1e-9, atol=1e-15)
    assert not m.smooth_at_origin
    with pytest.raises(InvalidParameter):
        make_halfwave_difference(0.5, 0.4, 1.0)


def test_limited_decay_terms():
    m = make_limited_decay(1.0, 2.0, omega=1.0)
    r = np.array([5.0, 50.0])
    exact = (1 + r) ** -1.0 + np.exp(1j * r) * (1 + r) ** -2.0
    np.testing.assert_allclose(m.at_radius(r), exact, rtol=1e-15)
    assert dict(m.targets) == {"a": 1.0, "b": 2.0}
    with pytest.raises(InvalidParameter):
        make_limited_decay(1.0, 0.4)


def test_surface_measure_symbols():
    s3, s2 = make_surface_measure(3), make_surface_measure(2)
    assert s3.at_radius(0.0) == 1.0 and s2.at_radius(0.0) == 1.0
    r = np.array([0.3, 1.0, 2.7])
    np.testing.assert_allclose(s3.at_radius(r), np.sinc(2 * r), rtol=1e-14)
    np.testing.assert_allclose(s2.at_radius(r), sp.j0(2 * np.pi * r), rtol=1e-11)
    assert s3.decay == 1.0 and s2.decay == 0.5
    with pytest.raises(InvalidParameter):
        make_surface_measure(1)


def test_constant():
    c = make_constant(2 - 1j)
    assert c(np.zeros((3, 2))).tolist() == [2 - 1j] * 3
    assert c.homogeneity == 0.0


# -- algebra and metadata ------------------------------------------------------


def test_dilation_moves_metadata():
    m = make_slow_decay(0.5, 1.0).dilate(4.0)
    assert m.inner_radius == 0.25
    assert m.at_radius(1.0) == make_slow_decay(0.5, 1.0).at_radius(4.0)
    assert m.rate(1.0) == pytest.approx(0.5 * 2.0)
    with pytest.raises(InvalidParameter):
        m.dilate(0.0)


def test_arithmetic_combines_metadata():
    a = make_window()
    b = make_annulus(1.0, 4.0, omega=2.0)
    s = a + b
    assert s.radial and s.inner_radius == 0.5
    p = a * b
    assert p.inner_radius == 1.0
    x = np.array([[1.5], [3.0]])
    np.testing.assert_allclose(s(x), a(x) + b(x))
    np.testing.assert_allclose((a - b)(x), a(x) - b(x))
    np.testing.assert_allclose((2.0 * a)(x), 2 * a(x))
    np.testing.assert_allclose((-a)(x), -a(x))
    assert s.rate(3.0) == pytest.approx(6.0)
    with pytest.raises(TypeError):
        a + 1.0


def test_non_radial_symbol_evaluates_on_points():
    m = Symbol(fn=lambda x: x[:, 0] - 2 * x[:, 1], name="linear")
    pts = np.array([[[1.0, 2.0], [3.0, 0.0]]])
    assert m(pts).shape == (1, 2)
    np.testing.assert_allclose(m(pts), [[-3.0, 3.0]])
    with pytest.raises(ContractViolation):
        m.at_radius(1.0)


def test_validate_catches_wrong_metadata():
    liar = make_radial(lambda r: np.ones_like(r), inner_radius=1.0)
    with pytest.raises(ContractViolation):
        validate(liar)
    tilted = Symbol(fn=lambda x: x[:, 0], radial=True)
    with pytest.raises(ContractViolation):
        validate(tilted)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from(["window", "annulus", "slow_decay", "limited_decay"]))
def test_radial_symbols_are_rotation_invariant(seed, family):
    m = {"window": make_window(), "annulus": make_annulus(0.5, 4.0, omega=3.0),
         "slow_decay": make_slow_decay(0.5, 1.0), "limited_decay": make_limited_decay(1.0, 2.0)}[family]
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(16, 3)) * 3
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    np.testing.assert_allclose(m(x), m(x @ q.T), rtol=1e-12, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.1, 3.0), st.floats(0.3, 3.0), st.floats(1.0, 30.0))
def test_slow_decay_dilation_property(alpha, beta, lam, r):
    # m(lam xi) = m.dilate(lam)(xi)
    m = make_slow_decay(alpha, beta)
    assert m.dilate(lam).at_radius(r) == m.at_radius(lam * r)


# -- splitting at the origin -------------------------------------------------


def test_split_at_origin_sphere():
    m = make_surface_measure(3)
    phi = make_bump()
    m0, m1 = split_at_origin(m, phi, dim=3)
    x = np.array([[0.0, 0.0, 0.0], [0.5, 0.2, 0.0], [1.2, 0.0, 0.3]])
    np.testing.assert_allclose(m0(x) + m1(x), m(x) * phi(x), atol=1e-15)
    assert m1(x[:1])[0] == 0
    assert dict(m0.params)["value"] == 1.0


def test_split_uses_limit_when_origin_is_singular():
    m = make_radial(lambda r: np.sin(r) / r, name="sinc")
    with np.errstate(all="ignore"):
        m0, _ = split_at_origin(m, make_bump())
    assert dict(m0.params)["value"] == pytest.approx(1.0, abs=1e-8)


def test_split_rejects_divergent_origin():
    m = make_radial(lambda r: 1.0 / r, name="pole")
    with np.errstate(all="ignore"), pytest.raises(PreconditionError):
        split_at_origin(m, make_bump())


# -- config registry ------------------------------------------------------------


def test_from_spec_builds_every_family():
    specs = {
        "constant": {"c": 2.0},
        "window": {},
        "bump": {},
        "annulus": {"r_in": 0.5, "r_out": 3.0},
        "slow_decay": {"alpha": 0.5, "beta": 1.0},
        "halfwave": {"alpha": 0.5, "beta": 0.75, "t": 0.1},
        "limited_decay": {"a": 1.0, "b": 2.0},
        "sphere": {"d": 3},
        "sphere_split": {"d": 3},
    }
    assert set(specs) == set(FAMILIES)
    for name, params in specs.items():
        m = from_spec({"family": name, "params": params})
        assert isinstance(m, Symbol)
        assert np.all(np.isfinite(m(np.array([[0.7, 0.1, 0.0]]))))


@pytest.mark.parametrize(
    "spec",
    [{"params": {}}, {"family": "nope"}, {"family": "annulus", "params": {"radius": 1}}, ["window"]],
)
def test_from_spec_errors(spec):
    with pytest.raises(InvalidParameter):
        from_spec(spec)


def test_describe_roundtrip():
    m = from_spec({"family": "slow_decay", "params": {"alpha": 0.25, "beta": 1.0}})
    d = m.describe()
    assert d["family"] == "slow_decay" and d["params"]["alpha"] == 0.25
    assert math.isclose(dict(m.targets)["critical_s"], 4.0)
