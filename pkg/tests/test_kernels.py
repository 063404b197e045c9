"""Compiled and NumPy pair-sum kernels against a direct pair loop."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxmult import _pykernels, kernels

BACKENDS = [_pykernels] + ([kernels.compiled_backend] if kernels.compiled_backend is not None else [])


def _inside(p, shape):
    return all(0 <= a < n for a, n in zip(p, shape))


def brute_hoelder(g, offs, denom, stride):
    best = 0.0
    for x in itertools.product(*(range(0, n, stride) for n in g.shape)):
        for o, dn in zip(offs, denom):
            y = tuple(a + b for a, b in zip(x, o))
            if _inside(y, g.shape):
                best = max(best, abs(g[x] - g[y]) / dn)
    return best


def brute_double(g, xw, xr, offs, olen, kern):
    total = 0.0
    for x in itertools.product(*(range(n) for n in g.shape)):
        for o, ln, kq in zip(offs, olen, kern):
            if ln < 0.5 * xr[x]:
                y = tuple(a + b for a, b in zip(x, o))
                gy = g[y] if _inside(y, g.shape) else 0.0
                total += xw[x] * abs(g[x] - gy) ** 2 * kq
    return total


def _case(seed, d):
    rng = np.random.default_rng(seed)
    shape = {1: (23, 1, 1), 2: (9, 7, 1), 3: (5, 4, 6)}[d]
    g = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    reach = 3
    rngs = [range(-reach, reach + 1)] * d + [range(1)] * (3 - d)
    offs = np.array([o for o in itertools.product(*rngs) if any(o)], dtype=np.int64)
    olen = np.linalg.norm(offs, axis=1)
    order = np.argsort(olen, kind="stable")
    offs, olen = np.ascontiguousarray(offs[order]), np.ascontiguousarray(olen[order])
    xw = np.where(rng.random(shape) < 0.7, rng.random(shape), 0.0)
    xr = rng.uniform(0.0, 8.0, size=shape)
    return g, offs, olen, xw, xr


def _parts(g):
    return np.ascontiguousarray(g.real), np.ascontiguousarray(g.imag)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("stride", [1, 2])
def test_hoelder_max_matches_brute_force(backend, d, stride):
    g, offs, olen, _, _ = _case(d, d)
    denom = np.ascontiguousarray(olen**0.7)
    got = backend.hoelder_max(*_parts(g), offs, denom, stride)
    assert got == pytest.approx(brute_hoelder(g, offs, denom, stride), rel=1e-13)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_frac_double_sum_matches_brute_force(backend, d):
    g, offs, olen, xw, xr = _case(10 + d, d)
    kern = np.ascontiguousarray(olen ** (-d - 0.6))
    got = backend.frac_double_sum(*_parts(g), np.ascontiguousarray(xw), np.ascontiguousarray(xr), offs, olen, kern)
    assert got == pytest.approx(brute_double(g, xw, xr, offs, olen, kern), rel=1e-12)


@pytest.mark.skipif(kernels.compiled_backend is None, reason="extension not built")
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([1, 2, 3]), st.integers(1, 3))
def test_backends_agree_property(seed, d, stride):
    g, offs, olen, xw, xr = _case(seed, d)
    denom = np.ascontiguousarray(olen**0.5)
    kern = np.ascontiguousarray(olen ** (-d - 1.0))
    c, p = kernels.compiled_backend, _pykernels
    assert c.hoelder_max(*_parts(g), offs, denom, stride) == pytest.approx(
        p.hoelder_max(*_parts(g), offs, denom, stride), rel=1e-14
    )
    args = (*_parts(g), np.ascontiguousarray(xw), np.ascontiguousarray(xr), offs, olen, kern)
    assert c.frac_double_sum(*args) == pytest.approx(p.frac_double_sum(*args), rel=1e-12)


def test_offsets_beyond_the_box_are_skipped():
    g = np.ones((4, 1, 1)) * np.arange(4)[:, None, None]
    offs = np.array([[10, 0, 0]], dtype=np.int64)
    for b in BACKENDS:
        assert b.hoelder_max(np.ascontiguousarray(g), np.zeros_like(g), offs, np.ones(1), 1) == 0.0


def _backend_in_subprocess(flag):
    env = dict(os.environ)
    env.pop("MAXMULT_PURE_PYTHON", None)
    if flag is not None:
        env["MAXMULT_PURE_PYTHON"] = flag
    out = subprocess.run(
        [sys.executable, "-c", "from maxmult import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_environment_forces_fallback():
    assert _backend_in_subprocess("1") == "python"
    expected = "cython" if kernels.compiled_backend is not None else "python"
    assert _backend_in_subprocess("0") == expected
    assert _backend_in_subprocess(None) == expected


def test_compiled_backend_is_built():
    # the installed package ships the extension; the fallback exists for hosts without a compiler
    assert kernels.compiled_backend is not None
