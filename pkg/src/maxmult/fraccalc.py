"""Fractional integrals and derivatives on the half line, and the symbol transform m -> m~.

Conventions
-----------
``I^a f(t) = 1/Gamma(a) int_0^t (t-s)^(a-1) f(s) ds``

``D^a F(t) = 1/Gamma(1-a) [F(t) t^-a + a int_0^t (F(t)-F(s)) (t-s)^(-1-a) ds]``

``m~(xi) = m(xi) + (1/2+eps) int_0^1 (m(xi) - m(s xi)) (1-s)^(-3/2-eps) ds``

so that ``m(t xi) = 1/Gamma(1/2-eps) I^(1/2+eps)[s^(-1/2-eps) m~(s xi)](t)``.

Quadrature
----------
Every integral is split at the midpoint and each half is mapped to an
integral over ``(0, l]`` whose only difficulty sits at ``0``. That interval is
cut into geometric cells ``[l 2^-(k+1), l 2^-k]``; inside a cell Gauss-Legendre
nodes are placed in ``log u``, which turns algebraic endpoint behaviour into a
smooth exponential and gives near machine accuracy with a dozen nodes. The
piece below the finest cell is added in closed form assuming a power law
``c u^q``, with ``q`` measured from the two finest cell edges.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import HolderWarning, InvalidParameter, PreconditionError, QuadratureError
from .symbols import Symbol

__all__ = [
    "GradedMesh",
    "rl_integral",
    "marchaud_derivative",
    "reconstruct",
    "m_tilde",
    "mtilde_symbol",
    "tabulated_mtilde",
    "reproduce_symbol",
    "power_law_integral",
    "DEFAULT_EPS",
]

DEFAULT_EPS = 0.05
_LN2 = math.log(2.0)


@lru_cache(maxsize=None)
def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class GradedMesh:
    """Geometric cells clustering at ``0`` with log-variable Gauss rules.

    Parameters
    ----------
    levels : int
        Number of geometric cells ``M``; the finest cell ends at ``l 2^-M``.
    order : int
        Gauss-Legendre nodes per (sub)cell.
    grading : float
        Ratio between consecutive cell edges.
    mtilde_splits : int
        Minimum number of pieces per cell in the ``m~`` quadrature. Symbol
        features (window transitions) can sit anywhere in ``s``, and a single
        12-point rule per octave leaves errors near ``1e-5`` there.
    """

    levels: int = 48
    order: int = 12
    grading: float = 2.0
    mtilde_splits: int = 4

    def __post_init__(self):
        if self.levels < 2 or self.order < 2 or not self.grading > 1 or self.mtilde_splits < 1:
            raise InvalidParameter("mesh needs levels >= 2, order >= 2, grading > 1, mtilde_splits >= 1")

    def edges(self, length: float = 1.0) -> np.ndarray:
        """Cell edges in increasing order, from ``l q^-M`` to ``l``."""
        k = np.arange(self.levels, -1, -1)
        return length * self.grading ** (-k.astype(float))

    def rule(self, length: float = 1.0, splits=None):
        """Nodes and weights for ``int_{u_min}^{length} g(u) du``.

        ``splits[k]`` subdivides cell ``k`` (counted from the top cell)
        into that many equal pieces in ``log u``.
        """
        return _rule(self.levels, self.order, self.grading, float(length),
                     None if splits is None else tuple(int(s) for s in splits))

    @property
    def u_min_fraction(self) -> float:
        return self.grading ** (-self.levels)

    def refined(self) -> "GradedMesh":
        return replace(self, levels=self.levels + 8, order=self.order + 4)


@lru_cache(maxsize=256)
def _rule(levels, order, grading, length, splits):
    x, w = _gauss(order)
    lq = math.log(grading)
    nodes, weights = [], []
    for k in range(levels):
        top = math.log(length) - k * lq
        pieces = 1 if splits is None else max(1, splits[k])
        width = lq / pieces
        for p in range(pieces):
            hi = top - p * width
            mid = hi - 0.5 * width
            v = mid + 0.5 * width * x
            u = np.exp(v)
            nodes.append(u)
            weights.append(0.5 * width * w * u)
    u = np.concatenate(nodes)
    wt = np.concatenate(weights)
    order_idx = np.argsort(u)
    u, wt = u[order_idx], wt[order_idx]
    u.setflags(write=False)
    wt.setflags(write=False)
    return u, wt


def _power_tail(g1, g2, u_min, q_floor=-1.0, default_q=None, what="integrand", resolved=True):
    """Closed-form ``int_0^{u_min} g`` for ``g ~ c u^q`` fitted at ``u_min, 2 u_min``.

    ``resolved`` masks out samples that sit at rounding level; those never warn.
    """
    g1 = np.asarray(g1)
    g2 = np.asarray(g2)
    a1 = np.abs(g1)
    a2 = np.abs(g2)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.log2(a2 / a1)
    if default_q is not None:
        q = np.where(np.isfinite(q), q, default_q)
    bad = np.isfinite(q) & (q <= q_floor + 1e-3) & resolved
    if np.any(bad):
        warnings.warn(
            f"{what} decays too slowly at the singular endpoint (fitted exponent {np.min(q[bad]):.3g})",
            HolderWarning,
            stacklevel=3,
        )
    q = np.clip(np.where(np.isfinite(q), q, 0.0), q_floor + 0.05, 4.0)
    out = np.where(a1 > 0, g1 * u_min / (q + 1.0), 0.0)
    return out


def _as_values(f, s):
    """Call ``f`` on an array of abscissae, falling back to a Python loop."""
    try:
        v = np.asarray(f(s))
        if v.shape[: s.ndim] == s.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.asarray([f(x) for x in s.ravel()]).reshape(s.shape + np.shape(f(s.ravel()[0])))


def _check_order(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"fractional order must lie in (0, 1), got {alpha}")
    return alpha


def _half_line_nodes(mesh: GradedMesh, t: np.ndarray):
    u, w = mesh.rule(0.5)
    umin = 0.5 * mesh.u_min_fraction
    return u, w, umin


def _rl_many(f, alpha, t, mesh):
    """``int_0^t (t-s)^(alpha-1) f(s) ds`` for every ``t`` in a 1-d array."""
    u, w, umin = _half_line_nodes(mesh, t)
    ext = np.concatenate([u, [umin, 2 * umin]])
    tt = t[:, None]
    s_left = tt * ext[None, :]
    s_right = tt * (1.0 - ext[None, :])
    vals = _as_values(f, np.concatenate([s_left, s_right], axis=1))
    extra = vals.shape[2:]
    K = ext.size
    fl = vals[:, :K]
    fr = vals[:, K:]
    shape = (t.size, K) + (1,) * len(extra)
    kl = (tt * (1.0 - ext[None, :])) ** (alpha - 1.0)
    kr = (tt * ext[None, :]) ** (alpha - 1.0)
    gl = fl * kl.reshape(shape)
    gr = fr * kr.reshape(shape)
    n = u.size
    wt = w.reshape((1, n) + (1,) * len(extra))
    tscale = t.reshape((-1,) + (1,) * len(extra))
    left = np.sum(gl[:, :n] * wt, axis=1) * tscale
    right = np.sum(gr[:, :n] * wt, axis=1) * tscale
    left += _power_tail(gl[:, n], gl[:, n + 1], umin, what="f") * tscale
    right += _power_tail(gr[:, n], gr[:, n + 1], umin, what="f") * tscale
    return (left + right) / math.gamma(alpha)


def _marchaud_many(F, alpha, t, mesh):
    u, w, umin = _half_line_nodes(mesh, t)
    # near s = t the difference F(t) - F(s) loses digits to rounding, which the
    # kernel (t-s)^(-1-alpha) would amplify; those nodes stop at the cut
    ucut = _singular_cut(mesh)
    near = u >= ucut
    ur, wr = u[near], w[near]
    ext = np.concatenate([u, [umin, 2 * umin]])
    ext_r = np.concatenate([ur, [ucut, 2 * ucut]])
    tt = t[:, None]
    pts = np.concatenate([t[:, None], tt * ext[None, :], tt * (1.0 - ext_r[None, :])], axis=1)
    vals = _as_values(F, pts)
    extra = vals.shape[2:]
    K = ext.size
    Ft = vals[:, :1]
    fl = vals[:, 1: K + 1]
    fr = vals[:, K + 1:]
    kl = (tt * (1.0 - ext[None, :])) ** (-1.0 - alpha)
    kr = (tt * ext_r[None, :]) ** (-1.0 - alpha)
    gl = (Ft - fl) * kl.reshape((t.size, K) + (1,) * len(extra))
    gr = (Ft - fr) * kr.reshape((t.size, ext_r.size) + (1,) * len(extra))
    n, nr = u.size, ur.size
    wt = w.reshape((1, n) + (1,) * len(extra))
    wtr = wr.reshape((1, nr) + (1,) * len(extra))
    tscale = t.reshape((-1,) + (1,) * len(extra))
    left = np.sum(gl[:, :n] * wt, axis=1) + _power_tail(gl[:, n], gl[:, n + 1], umin, what="F")
    # differences below ~1e3 ulp of F(t) carry no regularity information;
    # those rows are closed with a Lipschitz numerator instead
    d1 = Ft[:, 0] - fr[:, nr]
    noise = 1e3 * np.finfo(float).eps * np.abs(Ft[:, 0])
    resolved = np.abs(d1) > noise
    tail = _power_tail(gr[:, nr], gr[:, nr + 1], ucut, q_floor=-1.0, what="F(t) - F(t - u)",
                       resolved=resolved)
    tail = np.where(resolved, tail, gr[:, nr] * ucut / (1.0 - alpha))
    right = np.sum(gr[:, :nr] * wtr, axis=1) + tail
    Ft = Ft[:, 0]
    integral = (left + right) * tscale
    return (Ft * tscale ** (-alpha) + alpha * integral) / math.gamma(1.0 - alpha)


def _scalar_or_array(fn, f, alpha, t, mesh):
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise InvalidParameter("t must be positive")
    out = fn(f, alpha, t_arr, mesh)
    return out[0] if np.ndim(t) == 0 else out


def _checked(fn, f, alpha, t, mesh, tol, check, label):
    est = _scalar_or_array(fn, f, alpha, t, mesh)
    if not check:
        return est
    fine = _scalar_or_array(fn, f, alpha, t, mesh.refined())
    scale = np.maximum(np.abs(fine), 1e-300)
    if np.any(np.abs(est - fine) > 10.0 * tol * scale):
        raise QuadratureError(f"{label}: refinement disagrees", est, fine)
    return est


def rl_integral(f, alpha, t, mesh: GradedMesh = GradedMesh(), tol: float = 1e-6, check: bool = True):
    """Riemann-Liouville integral ``I^alpha f(t)``.

    ``f`` must accept a NumPy array of abscissae. ``t`` may be a scalar or
    a 1-d array. With ``check=True`` a refined mesh is also evaluated and a
    :class:`QuadratureError` is raised when the two disagree by more than
    ``10 * tol`` relative.
    """
    alpha = _check_order(alpha)
    return _checked(_rl_many, f, alpha, t, mesh, tol, check, "rl_integral")


def marchaud_derivative(F, alpha, t, mesh: GradedMesh = GradedMesh(), tol: float = 1e-6,
                        check: bool = True):
    """Marchaud fractional derivative ``D^alpha F(t)``.

    Measured Hölder exponents at ``s = t`` that do not exceed ``alpha``
    trigger a :class:`~maxmult.errors.HolderWarning`.
    """
    alpha = _check_order(alpha)
    return _checked(_marchaud_many, F, alpha, t, mesh, tol, check, "marchaud_derivative")


def reconstruct(F, alpha, t, mesh: GradedMesh = GradedMesh()):
    """``I^alpha (D^alpha F)(t)``; requires ``F(0) = 0``."""
    alpha = _check_order(alpha)
    f0 = complex(np.asarray(_as_values(F, np.zeros(1)))[0])
    ft = complex(np.asarray(_as_values(F, np.atleast_1d(float(t))))[0])
    if abs(f0) > 1e-12 * max(1.0, abs(ft)):
        raise PreconditionError("reconstruct needs F(0) = 0")

    def derivative(s):
        flat = s.ravel()
        return _marchaud_many(F, alpha, flat, mesh).reshape(s.shape)

    return rl_integral(derivative, alpha, t, mesh, check=False)


def power_law_integral(mu: float, alpha: float, t: float) -> float:
    """Closed form ``I^alpha[s^mu](t) = Gamma(mu+1)/Gamma(mu+1+alpha) t^(mu+alpha)``."""
    return math.gamma(mu + 1.0) / math.gamma(mu + 1.0 + alpha) * t ** (mu + alpha)


# ---------------------------------------------------------------------------
# m -> m~

_TARGET_PHASE = 3.0  # radians of phase allowed per Gauss sub-cell
_CHUNK = 2**22
_U_CUT = 2.0**-24


def _check_eps(eps):
    eps = float(eps)
    if not 0.0 < eps < 1.0 / 6.0:
        raise InvalidParameter(f"eps must lie in (0, 1/6), got {eps}")
    return eps


def _pow2_ceil(x):
    x = np.maximum(np.asarray(x, dtype=float), 1.0)
    return (2.0 ** np.ceil(np.log2(x))).astype(int)


def _split_plan(rate_fn, r, mesh: GradedMesh):
    """Per-point subdivision counts for the regular and the singular cells."""
    k = np.arange(mesh.levels)
    top = 0.5 * mesh.grading ** (-k.astype(float))  # top edge of each cell on (0, 1/2]
    lq = math.log(mesh.grading)
    reg = _pow2_ceil(rate_fn(top[None, :] * r[:, None]) * lq / _TARGET_PHASE)
    sing = _pow2_ceil(rate_fn(r)[:, None] * top[None, :] * (1 - 1 / mesh.grading) / _TARGET_PHASE)
    floor = mesh.mtilde_splits
    return np.maximum(reg, floor), np.maximum(sing, floor)


def _singular_cut(mesh: GradedMesh) -> float:
    """Smallest cell edge on the ``u = 1 - s`` side that is still at least ``_U_CUT``.

    Below it ``m(xi) - m((1-u) xi)`` is dominated by the rounding of ``(1-u) xi``.
    """
    k = int(math.floor(math.log(0.5 / _U_CUT) / math.log(mesh.grading) + 1e-9))
    return 0.5 * mesh.grading ** (-min(k, mesh.levels))


def _mtilde_core(evaluate, m0, r, rate_fn, eps, mesh):
    """Quadrature for ``m~`` given ``evaluate(scales, idx) -> m(scales * xi_idx)``."""
    a = 0.5 + eps
    out = np.array(m0, dtype=complex)
    if out.size == 0:
        return out
    reg_plan, sing_plan = _split_plan(rate_fn, r, mesh)
    keys = np.concatenate([reg_plan, sing_plan], axis=1)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    umin = 0.5 * mesh.u_min_fraction
    ucut = _singular_cut(mesh)
    for gi, key in enumerate(uniq):
        idx = np.nonzero(inverse == gi)[0]
        s_reg, w_reg = mesh.rule(0.5, key[: mesh.levels])
        u, w_u = mesh.rule(0.5, key[mesh.levels:])
        keep = u >= ucut
        u, w_u = u[keep], w_u[keep]
        w_reg = w_reg * (1.0 - s_reg) ** (-1.0 - a)
        w_u = w_u * u ** (-1.0 - a)
        scales = np.concatenate([s_reg, 1.0 - u, [umin, 1.0 - ucut, 1.0 - 2 * ucut]])
        per_chunk = max(1, _CHUNK // scales.size)
        for start in range(0, idx.size, per_chunk):
            sub = idx[start: start + per_chunk]
            vals = evaluate(scales, sub)  # (len(sub), len(scales))
            base = out[sub][:, None]
            diff = base - vals
            nr, nu = s_reg.size, u.size
            reg = diff[:, :nr] @ w_reg + umin * diff[:, nr + nu]
            sing = diff[:, nr: nr + nu] @ w_u
            n1 = diff[:, nr + nu + 1]
            n2 = diff[:, nr + nu + 2]
            g1 = n1 * ucut ** (-1.0 - a)
            g2 = n2 * (2 * ucut) ** (-1.0 - a)
            # rounding floor: cancellation inside m (e.g. chi(r) - chi(2r)) can sit far
            # above |m(xi)|, so measure it against the largest value in the chunk and
            # never below unit scale (symbols are built from O(1) pieces)
            scale = max(float(np.max(np.abs(vals))), float(np.max(np.abs(base))), 1.0)
            noisy = np.abs(n1) < 1e3 * np.finfo(float).eps * scale
            tail = _power_tail(g1, g2, ucut, q_floor=-1.0, default_q=-a, what="m near s = 1",
                               resolved=~noisy)
            # unresolved differences: a Lipschitz numerator with the slope seen at the cut
            lip = (n1 / ucut) * ucut ** (1.0 - a) / (1.0 - a)
            tail = np.where(noisy, lip, tail)
            out[sub] = base[:, 0] + a * (reg + sing + tail)
    return out


def _rate_or_zero(m: Symbol):
    if m.phase_rate is None:
        return lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return m.rate


def _mtilde_radii(m: Symbol, eps: float, r: np.ndarray, mesh: GradedMesh) -> np.ndarray:
    r = np.asarray(r, dtype=float).ravel()
    uniq, inv = np.unique(r, return_inverse=True)
    m0 = m.at_radius(uniq)

    def evaluate(scales, sub):
        return m.at_radius(uniq[sub][:, None] * scales[None, :])

    vals = _mtilde_core(evaluate, m0, uniq, _rate_or_zero(m), eps, mesh)
    return vals[np.asarray(inv).ravel()]


def _mtilde_points(m: Symbol, eps: float, pts: np.ndarray, mesh: GradedMesh) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    if m.profile is not None:
        return _mtilde_radii(m, eps, np.sqrt(np.sum(pts * pts, axis=-1)), mesh)
    m0 = np.asarray(m(pts), dtype=complex)
    r = np.sqrt(np.sum(pts * pts, axis=-1))

    def evaluate(scales, sub):
        p = pts[sub][:, None, :] * scales[None, :, None]
        return np.asarray(m(p), dtype=complex)

    return _mtilde_core(evaluate, m0, r, _rate_or_zero(m), eps, mesh)


def m_tilde(m: Symbol, eps: float, xi, mesh: GradedMesh = GradedMesh()):
    """``m~(xi)`` at one point or at an array of points (last axis = coordinates)."""
    eps = _check_eps(eps)
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim <= 1
    pts = xi.reshape(1, -1) if single else xi.reshape(-1, xi.shape[-1])
    vals = _mtilde_points(m, eps, pts, mesh)
    return complex(vals[0]) if single else vals.reshape(xi.shape[:-1])


def mtilde_symbol(m: Symbol, eps: float = DEFAULT_EPS, mesh: GradedMesh = GradedMesh()) -> Symbol:
    """``m~`` packaged as a symbol, evaluated by direct quadrature."""
    eps = _check_eps(eps)
    prof = None
    if m.profile is not None:
        prof = lambda r: _mtilde_radii(m, eps, np.asarray(r, dtype=float), mesh).reshape(np.shape(r))
    return Symbol(
        fn=lambda x: _mtilde_points(m, eps, x, mesh),
        name=f"mtilde[{m.name}]",
        params=m.params + (("eps", eps),),
        radial=m.radial,
        profile=prof,
        inner_radius=m.inner_radius,
        smooth_at_origin=m.smooth_at_origin,
        homogeneity=m.homogeneity,
        phase_rate=m.phase_rate,
    )


def _table_radii(m: Symbol, r_min: float, r_max: float, per_octave: int, per_radian: float):
    """Log-spaced radii, denser where the symbol oscillates quickly."""
    lo, hi = math.log(r_min), math.log(r_max)
    probe = np.exp(np.linspace(lo, hi, 4096))
    density = np.maximum(per_octave / _LN2, per_radian * _rate_or_zero(m)(probe))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(np.log(probe)))])
    n = int(math.ceil(cum[-1])) + 1
    v = np.interp(np.linspace(0.0, cum[-1], max(n, 8)), cum, np.log(probe))
    return np.exp(v)


def tabulated_mtilde(
    m: Symbol,
    eps: float,
    r_min: float,
    r_max: float,
    mesh: GradedMesh = GradedMesh(),
    per_octave: int = 256,
    per_radian: float = 8.0,
) -> Symbol:
    """Radial ``m~`` sampled once on ``[r_min, r_max]`` and read back by cubic splines in ``log r``.

    Radii inside the symbol's vanishing ball return exactly zero.
    """
    eps = _check_eps(eps)
    if m.profile is None:
        raise PreconditionError("tabulation needs a radial symbol")
    inner = m.inner_radius or 0.0
    lo = max(r_min, inner) if inner > 0 else r_min
    if not 0 < lo < r_max:
        raise InvalidParameter("need 0 < r_min < r_max")
    radii = _table_radii(m, lo, r_max, per_octave, per_radian)
    vals = _mtilde_radii(m, eps, radii, mesh)
    spline = CubicSpline(np.log(radii), vals)
    r_lo, r_hi = radii[0], radii[-1]

    def prof(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        zero = r <= inner
        live = ~zero
        if np.any(live & ((r < r_lo * (1 - 1e-12)) | (r > r_hi * (1 + 1e-12)))):
            raise PreconditionError(f"radius outside the tabulated range [{r_lo}, {r_hi}]")
        if np.any(live):
            out[live] = spline(np.log(np.clip(r[live], r_lo, r_hi)))
        return out

    return Symbol(
        fn=lambda x: prof(np.sqrt(np.sum(x * x, axis=-1))),
        name=f"mtilde[{m.name}]",
        params=m.params + (("eps", eps), ("table", (float(r_lo), float(r_hi), radii.size))),
        radial=True,
        profile=prof,
        inner_radius=m.inner_radius,
        phase_rate=m.phase_rate,
    )


def reproduce_symbol(m: Symbol, eps: float, xi, t: float, mesh: GradedMesh = GradedMesh()):
    """``1/Gamma(1/2-eps) I^(1/2+eps)[s^(-1/2-eps) m~(s xi)](t)``, which should equal ``m(t xi)``."""
    eps = _check_eps(eps)
    a = 0.5 + eps
    xi = np.atleast_1d(np.asarray(xi, dtype=float))

    def integrand(s):
        pts = s.reshape(-1, 1) * xi[None, :]
        vals = _mtilde_points(m, eps, pts, mesh).reshape(s.shape)
        return s ** (-a) * vals

    return complex(rl_integral(integrand, a, t, mesh, check=False)) / math.gamma(0.5 - eps)
